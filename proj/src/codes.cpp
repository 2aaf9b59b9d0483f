#include "egz/codes.hpp"

#include <array>
#include <bit>
#include <boost/multiprecision/cpp_int.hpp>
#include <string>

namespace egz::codes {

using boost::multiprecision::cpp_int;
using gf2::BitMatrix;
using gf2::BitVector;

namespace {

void check_guard(std::size_t dim, const char* what) {
    if (dim > kMaxEnumerationDim) {
        throw guard_error(std::string(what) + ": dimension " + std::to_string(dim) +
                          " exceeds enumeration guard " + std::to_string(kMaxEnumerationDim));
    }
}

// Visits all 2^basis.size() combinations in Gray-code order, zero word first.
template <class Visit>
void for_each_span_word(const std::vector<BitVector>& basis, std::size_t n, Visit&& visit) {
    BitVector word(n);
    visit(word);
    const std::uint64_t total = std::uint64_t{1} << basis.size();
    for (std::uint64_t i = 1; i < total; ++i) {
        word ^= basis[static_cast<std::size_t>(std::countr_zero(i))];
        visit(word);
    }
}

std::vector<BitVector> rows_of(const BitMatrix& m) {
    std::vector<BitVector> out;
    for (std::size_t r = 0; r < m.rows(); ++r) out.push_back(m.row(r));
    return out;
}

cpp_int binom(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    cpp_int b = 1;
    for (std::size_t i = 1; i <= k; ++i) {
        b *= n - k + i;
        b /= i;
    }
    return b;
}

cpp_int pow2(std::size_t e) { return cpp_int(1) << e; }

}  // namespace

// ------------------------------------------------------------- LinearCode

LinearCode::LinearCode(BitMatrix parity_check) : parity_check_(std::move(parity_check)) {
    if (gf2::rank(parity_check_) != parity_check_.rows()) {
        throw precondition_error("parity-check matrix must have full row rank");
    }
}

LinearCode LinearCode::from_generator(const BitMatrix& generator) {
    const auto checks = gf2::nullspace_basis(generator);
    if (checks.empty()) return LinearCode(BitMatrix(0, generator.cols()));
    return LinearCode(BitMatrix::from_rows(checks));
}

BitMatrix LinearCode::generator() const {
    const auto basis = gf2::nullspace_basis(parity_check_);
    if (basis.empty()) return BitMatrix(0, length());
    return BitMatrix::from_rows(basis);
}

bool LinearCode::contains(const BitVector& word) const {
    return parity_check_.multiply(word).is_zero();
}

// ------------------------------------------------------------- analytics

WeightDistribution weight_distribution(const LinearCode& code) {
    check_guard(code.dimension(), "weight_distribution");
    WeightDistribution wd{code.length(), std::vector<std::uint64_t>(code.length() + 1, 0)};
    const auto basis = gf2::nullspace_basis(code.parity_check());
    for_each_span_word(basis, code.length(), [&](const BitVector& w) { ++wd.counts[w.weight()]; });
    return wd;
}

LinearCode dual(const LinearCode& code) { return LinearCode(code.generator()); }

std::optional<std::size_t> min_distance(const LinearCode& code) {
    const auto wd = weight_distribution(code);
    for (std::size_t j = 1; j < wd.counts.size(); ++j) {
        if (wd.counts[j] > 0) return j;
    }
    return std::nullopt;
}

bool verify_macwilliams(const WeightDistribution& a, const WeightDistribution& b, std::size_t n,
                        std::size_t k) {
    if (a.counts.size() != n + 1 || b.counts.size() != n + 1 || a.n != n || b.n != n) {
        throw gf2::dimension_error("verify_macwilliams: distributions must have n + 1 entries");
    }
    if (k > n) throw precondition_error("verify_macwilliams: k > n");
    for (std::size_t lambda = 0; lambda <= n; ++lambda) {
        cpp_int lhs = 0;
        for (std::size_t j = 0; j <= lambda; ++j) lhs += binom(n - j, lambda - j) * a.counts[j];
        lhs *= pow2(n - k);
        cpp_int rhs = 0;
        for (std::size_t j = 0; j <= n - lambda; ++j) rhs += binom(n - j, lambda) * b.counts[j];
        rhs *= pow2(lambda);
        if (lhs != rhs) return false;
    }
    return true;
}

bool hamming_bound_holds(std::size_t r, std::size_t t, std::size_t n) {
    cpp_int ball = 0;
    for (std::size_t i = 0; i <= t; ++i) ball += binom(n, i);
    return ball <= pow2(r);
}

std::size_t hamming_max_length(std::size_t r, std::size_t t) {
    if (t == 0) throw precondition_error("hamming_max_length: t must be positive");
    // the ball size grows with n; 2^r + t bounds the search from above
    std::size_t lo = 0;
    std::size_t hi = (r < 62 ? (std::size_t{1} << r) : (std::size_t{1} << 62)) + t;
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo + 1) / 2;
        if (hamming_bound_holds(r, t, mid)) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    return lo;
}

CodeTableEntry n_table(std::size_t r, std::size_t delta) {
    if (delta == 3) {
        if (r == 0 || r > 63) throw std::out_of_range("n_table: r outside 1..63 for distance 3");
        const std::uint64_t n = (std::uint64_t{1} << r) - 1;
        return {r, 3, n, n};
    }
    if (delta != 5) throw std::out_of_range("n_table: only distances 3 and 5 are tabulated");
    // N(r,5) for r = 4..14; the last four are open intervals
    static constexpr std::array<std::array<std::uint64_t, 2>, 11> kTable = {{
        {5, 5},
        {6, 6},
        {8, 8},
        {11, 11},
        {17, 17},
        {23, 23},
        {33, 33},
        {47, 57},
        {65, 88},
        {81, 124},
        {128, 179},
    }};
    if (r < 4 || r > 14) throw std::out_of_range("n_table: distance 5 is tabulated for 4 <= r <= 14");
    const auto& e = kTable[r - 4];
    return {r, 5, e[0], e[1]};
}

BitVector find_unbalanced_dual_word(const LinearCode& code) {
    const std::size_t n = code.length();
    if (n < 10) throw precondition_error("find_unbalanced_dual_word: length must be at least 10");
    check_guard(code.redundancy(), "find_unbalanced_dual_word");
    const auto wd = weight_distribution(code);
    if (wd.counts[2] != 0 || wd.counts[4] != 0) {
        throw precondition_error("find_unbalanced_dual_word: code has words of weight 2 or 4");
    }
    const auto dual_basis = rows_of(code.parity_check());
    std::optional<BitVector> best;
    std::size_t best_dev = 0;  // |2l - n|
    for_each_span_word(dual_basis, n, [&](const BitVector& w) {
        if (w.is_zero()) return;
        const auto l = w.weight();
        const std::size_t dev = 2 * l > n ? 2 * l - n : n - 2 * l;
        if (!best || dev > best_dev || (dev == best_dev && lex_less(w, *best))) {
            best = w;
            best_dev = dev;
        }
    });
    if (!best || best_dev < 4) {
        // impossible for codes meeting the precondition
        throw std::logic_error("find_unbalanced_dual_word: no dual word with |l - n/2| >= 2");
    }
    return *best;
}

}  // namespace egz::codes
