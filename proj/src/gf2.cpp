#include "egz/gf2.hpp"

#include <algorithm>
#include <bit>
#include <istream>
#include <ostream>
#include <sstream>

namespace egz::gf2 {

namespace {

constexpr std::size_t kWordBits = 64;

std::size_t word_count(std::size_t bits) { return (bits + kWordBits - 1) / kWordBits; }

void check_index(std::size_t i, std::size_t bound, const char* what) {
    if (i >= bound) {
        throw std::out_of_range(std::string(what) + " index " + std::to_string(i) +
                                " out of range " + std::to_string(bound));
    }
}

}  // namespace

// ---------------------------------------------------------------- BitVector

BitVector::BitVector(std::size_t dim) : dim_(dim), words_(word_count(dim), 0) {}

BitVector BitVector::from_u64(std::size_t dim, std::uint64_t value) {
    if (dim > kWordBits) throw dimension_error("from_u64 supports at most 64 coordinates");
    BitVector v(dim);
    if (dim == 0) return v;
    if (dim < kWordBits) value &= (std::uint64_t{1} << dim) - 1;
    v.words_[0] = value;
    return v;
}

BitVector BitVector::from_string(std::string_view bits) {
    BitVector v(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] == '1') {
            v.set(i, true);
        } else if (bits[i] != '0') {
            throw parse_error("bit string contains '" + std::string(1, bits[i]) + "'");
        }
    }
    return v;
}

BitVector BitVector::unit(std::size_t dim, std::size_t i) {
    BitVector v(dim);
    v.set(i, true);
    return v;
}

BitVector BitVector::ones(std::size_t dim) {
    BitVector v(dim);
    for (std::size_t i = 0; i < dim; ++i) v.set(i, true);
    return v;
}

bool BitVector::get(std::size_t i) const {
    check_index(i, dim_, "coordinate");
    return (words_[i / kWordBits] >> (i % kWordBits)) & 1U;
}

void BitVector::set(std::size_t i, bool value) {
    check_index(i, dim_, "coordinate");
    const std::uint64_t mask = std::uint64_t{1} << (i % kWordBits);
    if (value) {
        words_[i / kWordBits] |= mask;
    } else {
        words_[i / kWordBits] &= ~mask;
    }
}

void BitVector::flip(std::size_t i) {
    check_index(i, dim_, "coordinate");
    words_[i / kWordBits] ^= std::uint64_t{1} << (i % kWordBits);
}

std::size_t BitVector::weight() const noexcept {
    std::size_t w = 0;
    for (auto word : words_) w += static_cast<std::size_t>(std::popcount(word));
    return w;
}

bool BitVector::is_zero() const noexcept {
    return std::all_of(words_.begin(), words_.end(), [](auto w) { return w == 0; });
}

bool BitVector::dot(const BitVector& other) const {
    if (dim_ != other.dim_) throw dimension_error("dot: dimension mismatch");
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < words_.size(); ++i) acc ^= words_[i] & other.words_[i];
    return std::popcount(acc) & 1;
}

std::uint64_t BitVector::to_u64() const { return words_.empty() ? 0 : words_[0]; }

std::string BitVector::to_string() const {
    std::string s(dim_, '0');
    for (std::size_t i = 0; i < dim_; ++i) {
        if (get(i)) s[i] = '1';
    }
    return s;
}

BitVector& BitVector::operator^=(const BitVector& other) {
    if (dim_ != other.dim_) throw dimension_error("xor: dimension mismatch");
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
    return *this;
}

bool lex_less(const BitVector& a, const BitVector& b) {
    if (a.dim_ != b.dim_) return a.dim_ < b.dim_;
    for (std::size_t i = 0; i < a.dim_; ++i) {
        const bool x = a.get(i);
        const bool y = b.get(i);
        if (x != y) return !x;
    }
    return false;
}

// ---------------------------------------------------------------- BitMatrix

BitMatrix::BitMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows, BitVector(cols)) {}

BitMatrix BitMatrix::identity(std::size_t n) {
    BitMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
    return m;
}

BitMatrix BitMatrix::from_rows(std::span<const BitVector> rows) {
    if (rows.empty()) return {};
    BitMatrix m(rows.size(), rows.front().dim());
    for (std::size_t r = 0; r < rows.size(); ++r) m.set_row(r, rows[r]);
    return m;
}

BitMatrix BitMatrix::from_columns(std::size_t rows, std::span<const BitVector> cols) {
    BitMatrix m(rows, cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c) m.set_column(c, cols[c]);
    return m;
}

BitMatrix BitMatrix::from_strings(std::span<const std::string> rows) {
    if (rows.empty()) return {};
    BitMatrix m(rows.size(), rows.front().size());
    for (std::size_t r = 0; r < rows.size(); ++r) m.set_row(r, BitVector::from_string(rows[r]));
    return m;
}

bool BitMatrix::get(std::size_t r, std::size_t c) const {
    check_index(r, rows_, "row");
    return data_[r].get(c);
}

void BitMatrix::set(std::size_t r, std::size_t c, bool value) {
    check_index(r, rows_, "row");
    data_[r].set(c, value);
}

const BitVector& BitMatrix::row(std::size_t r) const {
    check_index(r, rows_, "row");
    return data_[r];
}

BitVector BitMatrix::column(std::size_t c) const {
    check_index(c, cols_, "column");
    BitVector v(rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        if (data_[r].get(c)) v.set(r, true);
    }
    return v;
}

void BitMatrix::set_row(std::size_t r, const BitVector& v) {
    check_index(r, rows_, "row");
    if (v.dim() != cols_) throw dimension_error("set_row: length mismatch");
    data_[r] = v;
}

void BitMatrix::set_column(std::size_t c, const BitVector& v) {
    check_index(c, cols_, "column");
    if (v.dim() != rows_) throw dimension_error("set_column: length mismatch");
    for (std::size_t r = 0; r < rows_; ++r) data_[r].set(c, v.get(r));
}

void BitMatrix::add_row(std::size_t src, std::size_t dst) {
    check_index(src, rows_, "row");
    check_index(dst, rows_, "row");
    if (src == dst) throw std::invalid_argument("add_row: source equals destination");
    data_[dst] ^= data_[src];
}

void BitMatrix::swap_rows(std::size_t i, std::size_t j) {
    check_index(i, rows_, "row");
    check_index(j, rows_, "row");
    std::swap(data_[i], data_[j]);
}

void BitMatrix::swap_columns(std::size_t i, std::size_t j) {
    check_index(i, cols_, "column");
    check_index(j, cols_, "column");
    if (i == j) return;
    for (auto& row : data_) {
        const bool a = row.get(i);
        const bool b = row.get(j);
        if (a != b) {
            row.flip(i);
            row.flip(j);
        }
    }
}

BitVector BitMatrix::multiply(const BitVector& x) const {
    if (x.dim() != cols_) throw dimension_error("multiply: vector length != cols");
    BitVector out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        if (data_[r].dot(x)) out.set(r, true);
    }
    return out;
}

BitVector BitMatrix::column_sum(std::span<const std::size_t> cols) const {
    BitVector sel(cols_);
    for (auto c : cols) {
        check_index(c, cols_, "column");
        sel.flip(c);
    }
    return multiply(sel);
}

BitVector BitMatrix::row_sums() const { return multiply(BitVector::ones(cols_)); }

BitMatrix BitMatrix::transpose() const {
    BitMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) {
            if (data_[r].get(c)) t.set(c, r, true);
        }
    }
    return t;
}

BitMatrix BitMatrix::submatrix(std::size_t r0, std::size_t r1, std::size_t c0,
                               std::size_t c1) const {
    if (r0 > r1 || r1 > rows_ || c0 > c1 || c1 > cols_) {
        throw dimension_error("submatrix: range out of bounds");
    }
    BitMatrix s(r1 - r0, c1 - c0);
    for (std::size_t r = r0; r < r1; ++r) {
        for (std::size_t c = c0; c < c1; ++c) {
            if (data_[r].get(c)) s.set(r - r0, c - c0, true);
        }
    }
    return s;
}

BitMatrix BitMatrix::with_column(const BitVector& v) const {
    if (v.dim() != rows_) throw dimension_error("with_column: length mismatch");
    BitMatrix out(rows_, cols_ + 1);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) {
            if (data_[r].get(c)) out.set(r, c, true);
        }
        if (v.get(r)) out.set(r, cols_, true);
    }
    return out;
}

BitMatrix BitMatrix::drop_row(std::size_t r) const {
    check_index(r, rows_, "row");
    BitMatrix out(rows_ - 1, cols_);
    for (std::size_t i = 0, k = 0; i < rows_; ++i) {
        if (i != r) out.data_[k++] = data_[i];
    }
    return out;
}

// ---------------------------------------------------------- linear algebra

namespace {

struct Echelon {
    BitMatrix reduced;                // reduced row echelon form
    std::vector<std::size_t> pivots;  // pivot column of row i
};

// Gauss-Jordan elimination; optionally carries an augmented right-hand side.
Echelon reduce(BitMatrix m, BitVector* rhs) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t p = r;
        while (p < m.rows() && !m.get(p, c)) ++p;
        if (p == m.rows()) continue;
        if (p != r) {
            m.swap_rows(p, r);
            if (rhs != nullptr) {
                const bool a = rhs->get(p);
                rhs->set(p, rhs->get(r));
                rhs->set(r, a);
            }
        }
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i != r && m.get(i, c)) {
                m.add_row(r, i);
                if (rhs != nullptr && rhs->get(r)) rhs->flip(i);
            }
        }
        pivots.push_back(c);
        ++r;
    }
    return {std::move(m), std::move(pivots)};
}

}  // namespace

std::size_t rank(const BitMatrix& m) { return reduce(m, nullptr).pivots.size(); }

std::optional<BitVector> solve_linear(const BitMatrix& m, const BitVector& target) {
    if (target.dim() != m.rows()) throw dimension_error("solve_linear: target dim != rows");
    BitVector rhs = target;
    const auto ech = reduce(m, &rhs);
    for (std::size_t r = ech.pivots.size(); r < m.rows(); ++r) {
        if (rhs.get(r)) return std::nullopt;
    }
    BitVector x(m.cols());
    for (std::size_t r = 0; r < ech.pivots.size(); ++r) {
        if (rhs.get(r)) x.set(ech.pivots[r], true);
    }
    return x;
}

std::vector<BitVector> nullspace_basis(const BitMatrix& m) {
    const auto ech = reduce(m, nullptr);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto c : ech.pivots) is_pivot[c] = true;
    std::vector<BitVector> basis;
    for (std::size_t f = 0; f < m.cols(); ++f) {
        if (is_pivot[f]) continue;
        BitVector v(m.cols());
        v.set(f, true);
        for (std::size_t r = 0; r < ech.pivots.size(); ++r) {
            if (ech.reduced.get(r, f)) v.set(ech.pivots[r], true);
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

std::vector<BitVector> row_basis(const BitMatrix& m) {
    const auto ech = reduce(m, nullptr);
    std::vector<BitVector> out;
    for (std::size_t r = 0; r < ech.pivots.size(); ++r) out.push_back(ech.reduced.row(r));
    return out;
}

// ------------------------------------------------------------------ OpLog

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

void apply(const Op& op, BitMatrix& m) {
    std::visit(overloaded{
                   [&](const SwapColumns& o) { m.swap_columns(o.i, o.j); },
                   [&](const AddRow& o) { m.add_row(o.src, o.dst); },
                   [&](const SwapRows& o) { m.swap_rows(o.i, o.j); },
                   [&](const AddVectorToColumns& o) {
                       if (o.v.dim() != m.rows()) {
                           throw dimension_error("add-vector: dimension mismatch");
                       }
                       for (std::size_t r = 0; r < m.rows(); ++r) {
                           if (!o.v.get(r)) continue;
                           BitVector row = m.row(r) ^ BitVector::ones(m.cols());
                           m.set_row(r, row);
                       }
                   },
                   [&](const FlipRowOffDiagonal& o) {
                       if (m.rows() != m.cols()) {
                           throw dimension_error("flip-row-off-diagonal needs a square matrix");
                       }
                       BitVector row = m.row(o.i) ^ BitVector::ones(m.cols());
                       row.flip(o.i);
                       m.set_row(o.i, row);
                   },
               },
               op);
}

void OpLog::append(const OpLog& other) {
    ops_.insert(ops_.end(), other.ops_.begin(), other.ops_.end());
}

OpLog OpLog::inverse() const { return OpLog({ops_.rbegin(), ops_.rend()}); }

BitMatrix OpLog::replay(BitMatrix m) const {
    for (const auto& op : ops_) gf2::apply(op, m);
    return m;
}

void OpLog::apply_logged(Op op, BitMatrix& m) {
    gf2::apply(op, m);
    ops_.push_back(std::move(op));
}

std::size_t OpLog::pull_back(std::size_t col) const {
    for (auto it = ops_.rbegin(); it != ops_.rend(); ++it) {
        if (const auto* s = std::get_if<SwapColumns>(&*it)) {
            if (col == s->i) {
                col = s->j;
            } else if (col == s->j) {
                col = s->i;
            }
        }
    }
    return col;
}

std::vector<std::size_t> OpLog::pull_back(std::span<const std::size_t> cols) const {
    std::vector<std::size_t> out;
    out.reserve(cols.size());
    for (auto c : cols) out.push_back(pull_back(c));
    std::sort(out.begin(), out.end());
    return out;
}

std::size_t OpLog::push_forward(std::size_t col) const {
    for (const auto& op : ops_) {
        if (const auto* s = std::get_if<SwapColumns>(&op)) {
            if (col == s->i) {
                col = s->j;
            } else if (col == s->j) {
                col = s->i;
            }
        }
    }
    return col;
}

// ----------------------------------------------------------------- text IO

BitMatrix read_matrix(std::istream& in) {
    std::size_t rows = 0;
    std::size_t cols = 0;
    if (!(in >> rows >> cols)) throw parse_error("matrix header must be \"rows cols\"");
    BitMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        std::string line;
        if (!(in >> line)) throw parse_error("matrix ended after " + std::to_string(r) + " rows");
        if (line.size() != cols) {
            throw parse_error("row " + std::to_string(r) + " has length " +
                              std::to_string(line.size()) + ", expected " + std::to_string(cols));
        }
        m.set_row(r, BitVector::from_string(line));
    }
    return m;
}

void write_matrix(std::ostream& out, const BitMatrix& m) {
    out << m.rows() << ' ' << m.cols() << '\n';
    for (std::size_t r = 0; r < m.rows(); ++r) out << m.row(r).to_string() << '\n';
}

BitVector read_vector(std::istream& in) {
    std::string line;
    if (!(in >> line)) throw parse_error("expected a 0/1 vector line");
    return BitVector::from_string(line);
}

void write_vector(std::ostream& out, const BitVector& v) { out << v.to_string() << '\n'; }

BitMatrix parse_matrix(std::string_view text) {
    std::istringstream in{std::string(text)};
    return read_matrix(in);
}

std::string format_matrix(const BitMatrix& m) {
    std::ostringstream out;
    write_matrix(out, m);
    return out.str();
}

}  // namespace egz::gf2
