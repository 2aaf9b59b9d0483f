#pragma once

#include <chrono>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "egz/gf2.hpp"

namespace egz::zerosum {

using gf2::BitVector;

/// Raised when a computation would exceed its memory or enumeration guard.
class guard_error : public std::length_error {
public:
    using std::length_error::length_error;
};

/// Raised on parameter constraint violations.
class parameter_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Sorted set of forbidden zero-sum sizes; always holds at least one even value.
class WeightSet {
public:
    explicit WeightSet(std::vector<unsigned> values);
    WeightSet(std::initializer_list<unsigned> values) : WeightSet(std::vector<unsigned>(values)) {}

    /// {2m}
    static WeightSet single(unsigned m);
    /// {2j, 2j+2, ..., 2m}
    static WeightSet even_range(unsigned j, unsigned m);
    /// {1, 2, ..., 2m}
    static WeightSet full(unsigned m);
    /// Comma-separated list, e.g. "2,4".
    static WeightSet parse(const std::string& text);

    [[nodiscard]] const std::vector<unsigned>& values() const noexcept { return values_; }
    [[nodiscard]] unsigned max() const noexcept { return values_.back(); }
    [[nodiscard]] bool contains(unsigned w) const;
    [[nodiscard]] bool all_even() const;
    [[nodiscard]] std::string to_string() const;

    friend bool operator==(const WeightSet&, const WeightSet&) = default;

private:
    std::vector<unsigned> values_;
};

/// Ordered sequence over Z_2^d; repetition allowed.
struct GroupSequence {
    std::size_t d = 0;
    std::vector<BitVector> elements;

    GroupSequence() = default;
    GroupSequence(std::size_t dim, std::vector<BitVector> elems);
    static GroupSequence from_values(std::size_t dim, const std::vector<std::uint64_t>& values);
    /// Columns of a d x n matrix.
    static GroupSequence from_matrix(const gf2::BitMatrix& m);

    [[nodiscard]] std::size_t size() const noexcept { return elements.size(); }
    [[nodiscard]] gf2::BitMatrix to_matrix() const;
    [[nodiscard]] BitVector sum() const;
    [[nodiscard]] std::vector<std::uint64_t> values() const;
};

/// Positions (0-based, sorted) of a zero-sum subsequence.
struct ZeroSumWitness {
    std::vector<std::size_t> indices;
    friend bool operator==(const ZeroSumWitness&, const ZeroSumWitness&) = default;
};

/// True iff the indices are distinct, in range, of size `length` and sum to zero.
[[nodiscard]] bool is_zero_sum(const GroupSequence& s, const std::vector<std::size_t>& indices,
                               std::size_t length);

/// Exact subset-sum DP over (count, group element). Returns the lexicographically
/// smallest index set of exactly r elements summing to zero, or nullopt.
/// Throws guard_error when the reachability tables would exceed the memory budget.
[[nodiscard]] std::optional<ZeroSumWitness> dp_zero_sum_witness(const GroupSequence& s,
                                                                std::size_t r);

/// True iff `set` has pairwise distinct elements and no zero-sum subset of any size in W.
[[nodiscard]] bool avoids_zero_sums(const GroupSequence& set, const WeightSet& w);
/// True iff no subsequence of length 2m sums to zero.
[[nodiscard]] bool avoids_zero_sum_length(const GroupSequence& seq, std::size_t length);

/// A set A with |A| > 2^(d-1) and nonzero sum loses a pair {x, y} with
/// x + y = sum A; the rest is a zero-sum subset of size |A| - 2.
[[nodiscard]] ZeroSumWitness drop_two_zero_sum(const GroupSequence& set);
/// |A| >= 2^(d-1) + 2: drop one x != sum A, then a pair; size |A| - 3.
[[nodiscard]] ZeroSumWitness drop_three_zero_sum(const GroupSequence& set);

// ---------------------------------------------------------------- records

enum class Kind { beta, s, R, N };
enum class Status { exact, bounded };

[[nodiscard]] std::string to_string(Kind k);
[[nodiscard]] std::string to_string(Status s);

/// Exactly computed or bounded constant with optional extremal witness.
///
/// Parameters by kind: beta uses (weights, d); s uses (m, d); R uses (m, n);
/// N uses (d = redundancy, delta).
///
/// Witness meaning: beta, a set of `lower` vectors avoiding W; s, a sequence of
/// `lower - 1` vectors with no zero-sum subsequence of length 2m; R, a sequence
/// of n vectors in Z_2^upper with no zero-sum subsequence of length 2m.
struct ConstantRecord {
    Kind kind = Kind::beta;
    std::optional<WeightSet> weights;
    std::size_t m = 0;
    std::size_t d = 0;
    std::size_t n = 0;
    std::size_t delta = 0;
    std::uint64_t lower = 0;
    std::uint64_t upper = 0;
    Status status = Status::bounded;
    std::optional<GroupSequence> witness;
    std::vector<std::string> trace;  // tags, no commas or tabs
    std::vector<std::string> notes;  // human-readable derivation, not persisted

    [[nodiscard]] std::string parameters() const;
    [[nodiscard]] std::string name() const;  // e.g. "s_4(7)", "beta_{2,4}(6)"
    [[nodiscard]] bool exact() const noexcept { return status == Status::exact; }
};

/// Revalidates the witness against the record's claim; true when there is none.
[[nodiscard]] bool validate_witness(const ConstantRecord& rec);

// ---------------------------------------------------------------- search

/// Node-count and wall-clock limits. Exhaustion degrades results to bounded.
struct Budget {
    std::uint64_t max_nodes = UINT64_MAX;
    std::chrono::milliseconds max_time = std::chrono::milliseconds::max();

    static Budget unlimited() { return {}; }
    static Budget seconds(double s);
};

/// Largest set in Z_2^d with no zero-sum subset whose size lies in W.
/// Exact with a maximum witness when the branch-and-bound completes in budget;
/// otherwise bounded, using the best set found and the bounds ledger.
[[nodiscard]] ConstantRecord beta_search(const WeightSet& w, std::size_t d, Budget budget = {});

/// s_{2m}(d) as 1 + max_j (beta_{2[j,m]}(d) + 2m - 2j), searching each beta.
[[nodiscard]] ConstantRecord s_from_beta(std::size_t m, std::size_t d, Budget budget = {});

/// Independent oracle: exhaustive search over multisets for the longest sequence
/// without a zero-sum subsequence of length 2m; returns its length + 1.
/// Guarded to 2^d <= 16 and m <= 3.
[[nodiscard]] ConstantRecord s_direct_small(std::size_t m, std::size_t d);

/// Proven closed forms for s_{2m}(d): d < 2m, d = 2m, d = 2m + 1, and m = 2 with
/// 4 <= d <= 10 via the N(d,5) table. Absent otherwise.
[[nodiscard]] std::optional<ConstantRecord> closed_form_s(std::size_t m, std::size_t d);

/// Closed form for beta_{2m}(d) when 2^{d-1} <= 2m < 2^d.
[[nodiscard]] std::optional<std::uint64_t> closed_form_beta_small(std::size_t m, std::size_t d);

/// R_{2m}(n): the smallest d with s_{2m}(d) > n.
[[nodiscard]] ConstantRecord r_from_s(std::size_t m, std::size_t n, Budget budget = {});

// ---------------------------------------------------------------- constructions

enum class Construction {
    gao_lower,        // (2m-1) zeros + basis (+ all-ones when 2m <= d); sequence
    lift,             // attach 0 to each element, append e_{d+1}; sequence
    doubling,         // A x {0,1} for a set avoiding {2,..,2m}, m odd; set
    translation,      // B + y minus 0 for y in B; set avoiding {1,..,2m}
    zero_total,       // 2m+2 elements summing to zero; set avoiding {2m}
    basis_plus_ones,  // basis plus all-ones; set avoiding {1,..,2m}, d >= 2m
    two_heavy,        // basis plus x, y with |x| = |y| = |x+y| = 2m; d >= 3m
};

struct ConstructionParams {
    std::size_t m = 0;
    std::size_t d = 0;
    unsigned k = 2;                       // gao_lower group exponent; only 2 is supported
    std::optional<GroupSequence> input;  // lift, doubling, translation
};

struct ConstructionResult {
    GroupSequence elements;
    bool validated = false;  // false means constructed-unvalidated (above the DP guard)
};

[[nodiscard]] ConstructionResult construct_extremal(Construction kind,
                                                    const ConstructionParams& params);

// ---------------------------------------------------------------- ledger

/// Raised when two derivations produce lower > upper for the same quantity.
class ledger_error : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Query for the bounds ledger: kind s with (m, d), or kind beta with a weight
/// set of the form {2m}, {2j..2m} or {1..2m}.
struct LedgerQuery {
    Kind kind = Kind::s;
    std::size_t m = 0;
    std::size_t d = 0;
    std::optional<WeightSet> weights;
};

/// Fixed-point composition of every known inequality plus the supplied exact
/// facts. Returns [lower, upper] with a tagged trace.
[[nodiscard]] ConstantRecord bounds_ledger(const LedgerQuery& q,
                                           const std::vector<ConstantRecord>& facts = {});

// ---------------------------------------------------------------- cache

/// One tab-separated line per record:
/// kind, parameters, lower, upper, status, witness (hex vectors joined by ';' or '-'),
/// trace (tags joined by ',').
[[nodiscard]] std::string format_record(const ConstantRecord& rec);
[[nodiscard]] ConstantRecord parse_record(const std::string& line);

/// Hex text of a vector: coordinate i is bit i of the value, most significant nibble first.
[[nodiscard]] std::string to_hex(const BitVector& v);
[[nodiscard]] BitVector from_hex(const std::string& hex, std::size_t dim);

struct CacheCheck {
    std::size_t line = 0;  // 1-based
    bool ok = false;
    std::string message;
};

/// Append-only constant cache file.
class ConstantCache {
public:
    explicit ConstantCache(std::string path) : path_(std::move(path)) {}

    [[nodiscard]] const std::string& path() const noexcept { return path_; }
    void append(const ConstantRecord& rec) const;
    /// Every parseable line.
    [[nodiscard]] std::vector<ConstantRecord> load() const;
    /// Exact records whose witness revalidates.
    [[nodiscard]] std::vector<ConstantRecord> load_trusted() const;
    [[nodiscard]] std::vector<CacheCheck> check() const;

private:
    std::string path_;
};

}  // namespace egz::zerosum
