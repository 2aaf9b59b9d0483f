#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "egz/gf2.hpp"
#include "egz/zerosum.hpp"

namespace egz::witness {

using gf2::BitMatrix;
using gf2::BitVector;
using gf2::OpLog;
using zerosum::GroupSequence;
using zerosum::ZeroSumWitness;

/// Precondition failure of a reduction or extractor; the message names the
/// violated condition (parity, shape, rank, row-sum, binormal, duplicate).
class precondition_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The sequence is too short for any proven bound and the exact oracle found
/// no zero-sum subsequence of the requested length.
class absent_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// k x n matrix (n >= 2k) whose column pairs (2j, 2j+1) agree in every row
/// except row j, where they differ. Indices are 0-based.
struct BinormalMatrix {
    BitMatrix M;
    std::size_t k = 0;
    OpLog log;  // source matrix replayed through `log` equals M
};

[[nodiscard]] bool is_binormal(const BitMatrix& m);

/// c_ij = shared value of pair j in row i (i != j); diagonal 0.
struct PairProfile {
    BitMatrix C;

    [[nodiscard]] std::size_t size() const noexcept { return C.rows(); }
    /// Sum of c_ij over j in I, j != i.
    [[nodiscard]] bool sigma(std::size_t i, const std::vector<std::size_t>& subset) const;
    /// Number of i in I with sigma_i(I) = 1.
    [[nodiscard]] std::size_t type(const std::vector<std::size_t>& subset) const;
};

/// Column permutations and row additions only. Requires n odd, 2k < n,
/// rank k and every row summing to 0.
[[nodiscard]] BinormalMatrix to_binormal_form(const BitMatrix& m);

/// The unique j_i in {2i, 2i+1} whose columns sum to x.
[[nodiscard]] std::vector<std::size_t> binormal_select(const BinormalMatrix& b, const BitVector& x);

[[nodiscard]] PairProfile profile(const BinormalMatrix& b);
[[nodiscard]] PairProfile profile(const BitMatrix& binormal);

/// Lexicographically least (i, j, k), distinct, with c_ij + c_ik = 1 and
/// c_ji + c_jk = 1. Requires no row with constant off-diagonal entries.
[[nodiscard]] std::array<std::size_t, 3> find_row_triple(const PairProfile& c);

/// Lexicographically least I (triples first, then quintuples) with |I| = 2 t(I) - 1.
/// Requires size = 1 mod 4 and every row with odd off-diagonal sum.
[[nodiscard]] std::vector<std::size_t> find_type_anomaly(const PairProfile& c);

/// k columns of m summing to zero, via binormal form and selection of 0.
[[nodiscard]] ZeroSumWitness extract_via_enomoto(const BitMatrix& m);

/// 2m columns with zero sum in a binormal (2m+1) x (4m+5) matrix.
[[nodiscard]] ZeroSumWitness extract_odd_case(const BitMatrix& m, std::size_t half);

/// 2m columns with zero sum in a binormal (2m+1) x (4m+2) matrix, or in a
/// binormal (2m+1) x (4m+3) matrix with zero column sum and two identical
/// columns; in the latter case at most one of the two is used.
[[nodiscard]] ZeroSumWitness extract_even_case(
    const BitMatrix& m, std::size_t half,
    std::optional<std::pair<std::size_t, std::size_t>> duplicate_pair = std::nullopt);

/// Which route produced a witness.
enum class Route { oracle, enomoto, odd_case, even_case, rank_reduced };

struct Extraction {
    ZeroSumWitness witness;
    Route route = Route::oracle;
};

[[nodiscard]] const char* to_string(Route r);

/// A zero-sum subsequence of length 2m. Uses the constructive proofs when
/// d is 2m or 2m+1 and the sequence reaches the proven threshold, the exact
/// oracle otherwise. Always revalidated against s.
[[nodiscard]] Extraction extract_zero_sum_traced(const GroupSequence& s, std::size_t m);
[[nodiscard]] ZeroSumWitness extract_zero_sum(const GroupSequence& s, std::size_t m);

}  // namespace egz::witness
