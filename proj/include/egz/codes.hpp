#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "egz/gf2.hpp"

namespace egz::codes {

/// Raised when an exhaustive enumeration would exceed its size guard.
class guard_error : public std::length_error {
public:
    using std::length_error::length_error;
};

/// Raised when an operation's documented precondition does not hold.
class precondition_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Largest dimension enumerated word by word.
inline constexpr std::size_t kMaxEnumerationDim = 24;

/// Binary linear code {x : H x = 0} given by a full-row-rank parity-check matrix H.
class LinearCode {
public:
    /// Throws precondition_error unless rank(parity_check) == parity_check.rows().
    explicit LinearCode(gf2::BitMatrix parity_check);

    /// Code spanned by the rows of `generator` (rows may be dependent).
    static LinearCode from_generator(const gf2::BitMatrix& generator);

    [[nodiscard]] std::size_t length() const noexcept { return parity_check_.cols(); }
    [[nodiscard]] std::size_t redundancy() const noexcept { return parity_check_.rows(); }
    [[nodiscard]] std::size_t dimension() const noexcept { return length() - redundancy(); }
    [[nodiscard]] const gf2::BitMatrix& parity_check() const noexcept { return parity_check_; }

    /// Basis of the code itself, one word per row (k x n).
    [[nodiscard]] gf2::BitMatrix generator() const;
    [[nodiscard]] bool contains(const gf2::BitVector& word) const;

private:
    gf2::BitMatrix parity_check_;
};

struct WeightDistribution {
    std::size_t n = 0;
    std::vector<std::uint64_t> counts;  // counts[j] = words of weight j, size n + 1

    friend bool operator==(const WeightDistribution&, const WeightDistribution&) = default;
};

[[nodiscard]] WeightDistribution weight_distribution(const LinearCode& code);

[[nodiscard]] LinearCode dual(const LinearCode& code);

/// Smallest weight of a nonzero word; nullopt stands for the infinite distance of k = 0.
[[nodiscard]] std::optional<std::size_t> min_distance(const LinearCode& code);

/// Checks every MacWilliams identity lambda = 0..n in exact arithmetic.
[[nodiscard]] bool verify_macwilliams(const WeightDistribution& a, const WeightDistribution& b,
                                      std::size_t n, std::size_t k);

/// sum_{i=0}^{t} C(n, i) <= 2^r.
[[nodiscard]] bool hamming_bound_holds(std::size_t r, std::size_t t, std::size_t n);

/// Largest n passing hamming_bound_holds(r, t, n).
[[nodiscard]] std::size_t hamming_max_length(std::size_t r, std::size_t t);

struct CodeTableEntry {
    std::size_t redundancy = 0;
    std::size_t distance = 0;
    std::uint64_t lower = 0;
    std::uint64_t upper = 0;

    [[nodiscard]] bool exact() const noexcept { return lower == upper; }
    friend bool operator==(const CodeTableEntry&, const CodeTableEntry&) = default;
};

/// Maximum length N(r, delta) of a linear code with redundancy r and distance >= delta.
/// delta = 5 is the published table for 4 <= r <= 14; delta = 3 is 2^r - 1.
/// Throws std::out_of_range for anything else.
[[nodiscard]] CodeTableEntry n_table(std::size_t r, std::size_t delta);

/// Nonzero dual word whose weight l has |l - n/2| >= 2, maximizing |l - n/2|
/// (lexicographically smallest on ties). Requires n >= 10 and no words of
/// weight 2 or 4 in the code.
[[nodiscard]] gf2::BitVector find_unbalanced_dual_word(const LinearCode& code);

}  // namespace egz::codes
