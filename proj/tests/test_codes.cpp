#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "egz/codes.hpp"

using namespace egz::codes;
using egz::gf2::BitMatrix;
using egz::gf2::BitVector;

namespace {

LinearCode code_from_checks(std::vector<std::string> rows) {
    return LinearCode(BitMatrix::from_strings(rows));
}

LinearCode code_from_words(std::vector<std::string> rows) {
    return LinearCode::from_generator(BitMatrix::from_strings(rows));
}

BitMatrix random_generator(std::mt19937_64& rng, std::size_t k, std::size_t n) {
    BitMatrix g(k, n);
    for (std::size_t r = 0; r < k; ++r) {
        for (std::size_t c = 0; c < n; ++c) g.set(r, c, rng() & 1U);
    }
    return g;
}

// brute-force distribution over all 2^n words, for cross-checking enumeration
WeightDistribution brute_distribution(const LinearCode& code) {
    const std::size_t n = code.length();
    WeightDistribution wd{n, std::vector<std::uint64_t>(n + 1, 0)};
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
        const auto w = BitVector::from_u64(n, x);
        if (code.contains(w)) ++wd.counts[w.weight()];
    }
    return wd;
}

}  // namespace

TEST_CASE("weight distribution examples") {
    // {110, 011} checks leave {000, 111}
    CHECK(weight_distribution(code_from_checks({"110", "011"})).counts ==
          std::vector<std::uint64_t>{1, 0, 0, 1});
    // even-weight code of length 3: 000, 110, 101, 011
    CHECK(weight_distribution(code_from_checks({"111"})).counts ==
          std::vector<std::uint64_t>{1, 0, 3, 0});
    // trivial code: full-rank 3x3 checks
    CHECK(weight_distribution(LinearCode(BitMatrix::identity(3))).counts ==
          std::vector<std::uint64_t>{1, 0, 0, 0});
}

TEST_CASE("parity-check matrices must have full row rank") {
    CHECK_THROWS_AS(code_from_checks({"110", "110"}), precondition_error);
}

TEST_CASE("dual examples") {
    const auto even = code_from_checks({"111"});
    const auto d = dual(even);
    CHECK(d.dimension() == 1);
    CHECK(d.contains(BitVector::from_string("111")));
    CHECK(weight_distribution(d).counts == std::vector<std::uint64_t>{1, 0, 0, 1});

    const auto full = LinearCode(BitMatrix(0, 4));
    CHECK(full.dimension() == 4);
    CHECK(dual(full).dimension() == 0);

    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 2 + rng() % 10;
        const auto c = LinearCode::from_generator(random_generator(rng, 1 + rng() % n, n));
        const auto cd = dual(c);
        CHECK(c.dimension() + cd.dimension() == n);
        CHECK(weight_distribution(dual(cd)) == weight_distribution(c));
    }
}

TEST_CASE("min distance examples") {
    CHECK(min_distance(code_from_checks({"110", "011"})) == std::optional<std::size_t>{3});
    CHECK_FALSE(min_distance(LinearCode(BitMatrix::identity(4))).has_value());
    // words 0000, 1110, 0111, 1001
    CHECK(min_distance(code_from_words({"1110", "0111"})) == std::optional<std::size_t>{2});
}

TEST_CASE("enumeration agrees with brute force and minimum distance") {
    std::mt19937_64 rng(33);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 1 + rng() % 10;
        const auto c = LinearCode::from_generator(random_generator(rng, rng() % (n + 1), n));
        const auto wd = weight_distribution(c);
        CHECK(wd == brute_distribution(c));
        CHECK(wd.counts[0] == 1);
        std::optional<std::size_t> first;
        for (std::size_t j = 1; j <= n && !first; ++j) {
            if (wd.counts[j] > 0) first = j;
        }
        CHECK(min_distance(c) == first);
    }
}

TEST_CASE("MacWilliams examples") {
    const WeightDistribution a{3, {1, 0, 0, 1}};
    const WeightDistribution b{3, {1, 0, 3, 0}};
    CHECK(verify_macwilliams(a, b, 3, 1));
    CHECK(verify_macwilliams(WeightDistribution{0, {1}}, WeightDistribution{0, {1}}, 0, 0));
    for (std::size_t j = 0; j < 4; ++j) {
        auto bad = b;
        ++bad.counts[j];
        CHECK_FALSE(verify_macwilliams(a, bad, 3, 1));
    }
    CHECK_THROWS_AS((void)verify_macwilliams(a, WeightDistribution{2, {1, 0, 0}}, 3, 1),
                    egz::gf2::dimension_error);
}

TEST_CASE("MacWilliams holds on random codes") {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 150; ++trial) {
        const std::size_t n = 1 + rng() % 12;
        const std::size_t rows = rng() % (std::min<std::size_t>(6, n) + 1);
        const auto c = LinearCode::from_generator(random_generator(rng, rows, n));
        REQUIRE(c.dimension() <= 6);
        CHECK(verify_macwilliams(weight_distribution(c), weight_distribution(dual(c)), n,
                                 c.dimension()));
    }
    // a larger one where the binomials overflow 32 bits
    const auto big = LinearCode::from_generator(random_generator(rng, 10, 30));
    CHECK(verify_macwilliams(weight_distribution(big), weight_distribution(dual(big)), 30,
                             big.dimension()));
}

TEST_CASE("Hamming bound") {
    CHECK(hamming_bound_holds(4, 2, 5));   // 1 + 5 + 10 = 16
    CHECK_FALSE(hamming_bound_holds(4, 2, 6));  // 1 + 6 + 15 = 22
    CHECK(hamming_bound_holds(0, 0, 1000));
    CHECK(hamming_max_length(4, 2) == 5);
    CHECK(hamming_max_length(3, 1) == 7);
}

TEST_CASE("N(r, delta) table") {
    CHECK(n_table(8, 5) == CodeTableEntry{8, 5, 17, 17});
    CHECK(n_table(11, 5) == CodeTableEntry{11, 5, 47, 57});
    CHECK(n_table(4, 3) == CodeTableEntry{4, 3, 15, 15});
    CHECK(n_table(10, 5).exact());
    CHECK_FALSE(n_table(12, 5).exact());
    CHECK_THROWS_AS((void)n_table(3, 5), std::out_of_range);
    CHECK_THROWS_AS((void)n_table(15, 5), std::out_of_range);
    CHECK_THROWS_AS((void)n_table(6, 7), std::out_of_range);
    for (std::size_t r = 4; r <= 14; ++r) {
        const auto e = n_table(r, 5);
        CHECK(e.lower <= e.upper);
        CHECK(hamming_bound_holds(r, 2, e.upper));
    }
}

TEST_CASE("unbalanced dual word examples") {
    // e_10 is orthogonal to 1111110000; so is the all-ones word, which deviates more
    const auto c = code_from_words({"1111110000"});
    const auto w = find_unbalanced_dual_word(c);
    CHECK(dual(c).contains(w));
    CHECK(w == BitVector::ones(10));

    const auto zero = LinearCode(BitMatrix::identity(10));
    CHECK(find_unbalanced_dual_word(zero) == BitVector::ones(10));

    CHECK_THROWS_AS((void)find_unbalanced_dual_word(code_from_words({"11000000000"})),
                    precondition_error);
    CHECK_THROWS_AS((void)find_unbalanced_dual_word(code_from_words({"111000000"})),
                    precondition_error);
}

TEST_CASE("unbalanced dual word on random codes without weights 2 and 4") {
    std::mt19937_64 rng(17);
    int found = 0;
    while (found < 100) {
        const std::size_t n = 10 + rng() % 5;
        const auto c = LinearCode::from_generator(random_generator(rng, 1 + rng() % 4, n));
        const auto wd = weight_distribution(c);
        if (wd.counts[2] != 0 || wd.counts[4] != 0) continue;
        ++found;
        const auto w = find_unbalanced_dual_word(c);
        CHECK(c.parity_check().rows() > 0);
        CHECK(dual(c).contains(w));
        CHECK(c.generator().multiply(w).is_zero());
        const auto l = static_cast<long>(w.weight());
        CHECK(std::abs(2 * l - static_cast<long>(n)) >= 4);

        // brute-force oracle over all of F_2^n for the best deviation
        long best = 0;
        const auto g = c.generator();
        for (std::uint64_t x = 1; x < (std::uint64_t{1} << n); ++x) {
            const auto v = BitVector::from_u64(n, x);
            if (!g.multiply(v).is_zero()) continue;
            best = std::max(best, std::abs(2 * static_cast<long>(v.weight()) - static_cast<long>(n)));
        }
        CHECK(std::abs(2 * l - static_cast<long>(n)) == best);
    }
}
