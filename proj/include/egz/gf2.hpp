#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace egz::gf2 {

/// Raised when operand shapes do not agree (vector dims, matrix rows/cols).
class dimension_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised by the text readers on malformed input.
class parse_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Element of Z_2^d (or a word of F_2^n), packed 64 coordinates per word.
/// Coordinate 0 lives in bit 0 of word 0. Bits past dim() are always zero.
class BitVector {
public:
    BitVector() = default;
    explicit BitVector(std::size_t dim);

    /// Low `dim` bits of `value`; requires dim <= 64.
    static BitVector from_u64(std::size_t dim, std::uint64_t value);
    /// "0110" style text, character i is coordinate i.
    static BitVector from_string(std::string_view bits);
    static BitVector unit(std::size_t dim, std::size_t i);
    static BitVector ones(std::size_t dim);

    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    [[nodiscard]] bool get(std::size_t i) const;
    void set(std::size_t i, bool value);
    void flip(std::size_t i);

    [[nodiscard]] std::size_t weight() const noexcept;
    [[nodiscard]] bool is_zero() const noexcept;
    /// Parity of the coordinate-wise product.
    [[nodiscard]] bool dot(const BitVector& other) const;
    /// Packed value of the first 64 coordinates.
    [[nodiscard]] std::uint64_t to_u64() const;
    [[nodiscard]] std::string to_string() const;

    BitVector& operator^=(const BitVector& other);
    friend BitVector operator^(BitVector lhs, const BitVector& rhs) { return lhs ^= rhs; }
    /// Addition in Z_2^d.
    friend BitVector operator+(BitVector lhs, const BitVector& rhs) { return lhs ^= rhs; }

    friend bool operator==(const BitVector&, const BitVector&) = default;
    /// Lexicographic on the text form (coordinate 0 most significant).
    friend bool lex_less(const BitVector& a, const BitVector& b);

    [[nodiscard]] std::span<const std::uint64_t> words() const noexcept { return words_; }

private:
    std::size_t dim_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Dense rows x cols matrix over GF(2), row-major, one packed BitVector per row.
class BitMatrix {
public:
    BitMatrix() = default;
    BitMatrix(std::size_t rows, std::size_t cols);

    static BitMatrix identity(std::size_t n);
    static BitMatrix from_rows(std::span<const BitVector> rows);
    static BitMatrix from_columns(std::size_t rows, std::span<const BitVector> cols);
    /// Each string is one row.
    static BitMatrix from_strings(std::span<const std::string> rows);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }

    [[nodiscard]] bool get(std::size_t r, std::size_t c) const;
    void set(std::size_t r, std::size_t c, bool value);

    [[nodiscard]] const BitVector& row(std::size_t r) const;
    [[nodiscard]] BitVector column(std::size_t c) const;
    void set_row(std::size_t r, const BitVector& v);
    void set_column(std::size_t c, const BitVector& v);

    /// In-place elementary operations. Public values are otherwise treated as
    /// immutable; these exist for builders and OpLog replay.
    void add_row(std::size_t src, std::size_t dst);
    void swap_rows(std::size_t i, std::size_t j);
    void swap_columns(std::size_t i, std::size_t j);

    /// M * x for x in F_2^cols.
    [[nodiscard]] BitVector multiply(const BitVector& x) const;
    /// Sum of the listed columns.
    [[nodiscard]] BitVector column_sum(std::span<const std::size_t> cols) const;
    [[nodiscard]] BitVector row_sums() const;
    [[nodiscard]] BitMatrix transpose() const;
    /// Rows [r0, r1) x columns [c0, c1).
    [[nodiscard]] BitMatrix submatrix(std::size_t r0, std::size_t r1, std::size_t c0,
                                      std::size_t c1) const;
    /// Appends `v` as a new last column.
    [[nodiscard]] BitMatrix with_column(const BitVector& v) const;
    [[nodiscard]] BitMatrix drop_row(std::size_t r) const;

    friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<BitVector> data_;
};

/// GF(2) rank.
[[nodiscard]] std::size_t rank(const BitMatrix& m);

/// Solution of M x = target with every free variable set to 0, or nullopt.
[[nodiscard]] std::optional<BitVector> solve_linear(const BitMatrix& m, const BitVector& target);

/// Basis of {x : M x = 0}; one vector per free column, with that column set.
[[nodiscard]] std::vector<BitVector> nullspace_basis(const BitMatrix& m);

/// Row-reduced basis of the row space (nonzero rows only).
[[nodiscard]] std::vector<BitVector> row_basis(const BitMatrix& m);

// ---------------------------------------------------------------------------
// Logged elementary operations

struct SwapColumns {
    std::size_t i, j;
    friend bool operator==(const SwapColumns&, const SwapColumns&) = default;
};
struct AddRow {
    std::size_t src, dst;
    friend bool operator==(const AddRow&, const AddRow&) = default;
};
struct SwapRows {
    std::size_t i, j;
    friend bool operator==(const SwapRows&, const SwapRows&) = default;
};
struct AddVectorToColumns {
    BitVector v;
    friend bool operator==(const AddVectorToColumns&, const AddVectorToColumns&) = default;
};
/// Complement every entry of row i except the diagonal one (square matrices).
struct FlipRowOffDiagonal {
    std::size_t i;
    friend bool operator==(const FlipRowOffDiagonal&, const FlipRowOffDiagonal&) = default;
};

using Op = std::variant<SwapColumns, AddRow, SwapRows, AddVectorToColumns, FlipRowOffDiagonal>;

void apply(const Op& op, BitMatrix& m);

/// Ordered record of elementary operations. Every operation is an involution,
/// so the inverse log is the reversed list.
class OpLog {
public:
    OpLog() = default;
    explicit OpLog(std::vector<Op> ops) : ops_(std::move(ops)) {}

    void push(Op op) { ops_.push_back(std::move(op)); }
    void append(const OpLog& other);

    [[nodiscard]] const std::vector<Op>& ops() const noexcept { return ops_; }
    [[nodiscard]] std::size_t size() const noexcept { return ops_.size(); }
    [[nodiscard]] bool empty() const noexcept { return ops_.empty(); }

    [[nodiscard]] OpLog inverse() const;
    [[nodiscard]] BitMatrix replay(BitMatrix m) const;

    /// Transformed column index -> original column index.
    [[nodiscard]] std::size_t pull_back(std::size_t col) const;
    [[nodiscard]] std::vector<std::size_t> pull_back(std::span<const std::size_t> cols) const;
    /// Original column index -> transformed column index.
    [[nodiscard]] std::size_t push_forward(std::size_t col) const;

    /// Operation applier that records what it does.
    void apply_logged(Op op, BitMatrix& m);

    friend bool operator==(const OpLog&, const OpLog&) = default;

private:
    std::vector<Op> ops_;
};

// ---------------------------------------------------------------------------
// Text formats: "rows cols" header followed by rows of 0/1; vectors are a
// single 0/1 line.

[[nodiscard]] BitMatrix read_matrix(std::istream& in);
void write_matrix(std::ostream& out, const BitMatrix& m);
[[nodiscard]] BitVector read_vector(std::istream& in);
void write_vector(std::ostream& out, const BitVector& v);

[[nodiscard]] BitMatrix parse_matrix(std::string_view text);
[[nodiscard]] std::string format_matrix(const BitMatrix& m);

}  // namespace egz::gf2
