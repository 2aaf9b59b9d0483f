#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <random>
#include <string>

#include "egz/witness.hpp"

using namespace egz::witness;
using egz::gf2::BitMatrix;
using egz::gf2::BitVector;
using egz::zerosum::GroupSequence;

namespace {

BitMatrix rows_of(std::vector<std::string> rows) { return BitMatrix::from_strings(rows); }

bool bit(std::mt19937_64& rng) { return (rng() & 1U) != 0; }

// k x (2k + extra) with random shared values, random orientation of each
// pair and random extra columns.
BitMatrix random_binormal(std::mt19937_64& rng, std::size_t k, std::size_t extra) {
    BitMatrix m(k, 2 * k + extra);
    for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t i = 0; i < k; ++i) {
            const bool b = bit(rng);
            m.set(i, 2 * j, b);
            m.set(i, 2 * j + 1, i == j ? !b : b);
        }
    }
    for (std::size_t c = 2 * k; c < m.cols(); ++c) {
        for (std::size_t i = 0; i < k; ++i) m.set(i, c, bit(rng));
    }
    return m;
}

// Binormal n x (2n + 1) with zero column sum and column p (in pair u) equal
// to column q (in pair v).
BitMatrix binormal_with_duplicate(std::mt19937_64& rng, std::size_t n, std::size_t p,
                                  std::size_t q) {
    BitMatrix m = random_binormal(rng, n, 0);
    const std::size_t u = p / 2, v = q / 2;
    for (std::size_t r = 0; r < n; ++r) {
        if (r == u || r == v) continue;
        m.set(r, 2 * v, m.get(r, 2 * u));
        m.set(r, 2 * v + 1, m.get(r, 2 * u));
    }
    // row u: column p carries c_uv; row v: column q carries c_vu
    m.set(u, p, m.get(u, 2 * v));
    m.set(u, p ^ 1U, !m.get(u, 2 * v));
    m.set(v, q, m.get(v, 2 * u));
    m.set(v, q ^ 1U, !m.get(v, 2 * u));
    return m.with_column(BitVector::ones(n));
}

// Random k x n matrix with zero row sums and rank k (n odd, n > 2k).
BitMatrix random_enomoto(std::mt19937_64& rng, std::size_t k, std::size_t n) {
    while (true) {
        BitMatrix m(k, n);
        for (std::size_t i = 0; i < k; ++i) {
            bool acc = false;
            for (std::size_t c = 0; c + 1 < n; ++c) {
                const bool b = bit(rng);
                m.set(i, c, b);
                acc ^= b;
            }
            m.set(i, n - 1, acc);
        }
        if (egz::gf2::rank(m) == k) return m;
    }
}

bool sums_to_zero(const BitMatrix& m, const std::vector<std::size_t>& cols, std::size_t len) {
    if (cols.size() != len) return false;
    for (std::size_t i = 1; i < cols.size(); ++i) {
        if (cols[i - 1] >= cols[i]) return false;
    }
    return m.column_sum(cols).is_zero();
}

PairProfile random_profile(std::mt19937_64& rng, std::size_t t) {
    PairProfile p{BitMatrix(t, t)};
    for (std::size_t i = 0; i < t; ++i) {
        for (std::size_t j = 0; j < t; ++j) {
            if (i != j) p.C.set(i, j, bit(rng));
        }
    }
    return p;
}

// Force odd off-diagonal sum in every row by fixing one entry.
void make_rows_odd(PairProfile& p) {
    const std::size_t n = p.size();
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::size_t> all;
        for (std::size_t j = 0; j < n; ++j) all.push_back(j);
        if (!p.sigma(i, all)) {
            const std::size_t j = (i + 1) % n;
            p.C.set(i, j, !p.C.get(i, j));
        }
    }
}

GroupSequence random_seq(std::mt19937_64& rng, std::size_t d, std::size_t n) {
    std::vector<std::uint64_t> vals;
    for (std::size_t i = 0; i < n; ++i) vals.push_back(rng() & ((std::uint64_t{1} << d) - 1));
    return GroupSequence::from_values(d, vals);
}

}  // namespace

TEST_CASE("binormal form of small matrices") {
    const BitMatrix one = rows_of({"110"});
    const BinormalMatrix b = to_binormal_form(one);
    CHECK(b.M == rows_of({"101"}));
    CHECK(is_binormal(b.M));
    CHECK(b.log.replay(one) == b.M);

    const BitMatrix two = rows_of({"11000", "00110"});
    const BinormalMatrix b2 = to_binormal_form(two);
    CHECK(b2.k == 2);
    CHECK(is_binormal(b2.M));
    CHECK(b2.log.replay(two) == b2.M);
    for (const auto& op : b2.log.ops()) {
        const bool allowed = std::holds_alternative<egz::gf2::SwapColumns>(op) ||
                             std::holds_alternative<egz::gf2::AddRow>(op);
        CHECK(allowed);
    }
}

TEST_CASE("binormal form reports each violated precondition") {
    auto message = [](const BitMatrix& m) {
        try {
            (void)to_binormal_form(m);
        } catch (const precondition_error& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    CHECK(message(rows_of({"1100"})).find("parity") != std::string::npos);
    CHECK(message(rows_of({"110", "011"})).find("shape") != std::string::npos);
    CHECK(message(rows_of({"11000", "11000"})).find("rank") != std::string::npos);
    CHECK(message(rows_of({"11100", "00110"})).find("row-sum") != std::string::npos);
}

TEST_CASE("binormal form on random matrices") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t k = 1 + rng() % 7;
        const std::size_t n = 2 * k + 1 + 2 * (rng() % 3);
        const BitMatrix m = random_enomoto(rng, k, n);
        const BinormalMatrix b = to_binormal_form(m);
        REQUIRE(is_binormal(b.M));
        CHECK(b.log.replay(m) == b.M);
    }
}

TEST_CASE("selection examples") {
    BinormalMatrix b{rows_of({"01"}), 1, {}};
    CHECK(binormal_select(b, BitVector::from_string("0")) == std::vector<std::size_t>{0});
    CHECK(binormal_select(b, BitVector::from_string("1")) == std::vector<std::size_t>{1});

    std::mt19937_64 rng(3);
    const BitMatrix r = random_binormal(rng, 5, 1);
    BinormalMatrix rb{r, 5, {}};
    std::vector<std::size_t> base = {0, 2, 4, 6, 8};
    CHECK(binormal_select(rb, r.column_sum(base).to_u64() == 0 ? BitVector(5)
                                                               : r.column_sum(base)) == base);

    const BinormalMatrix two = to_binormal_form(rows_of({"11000", "00110"}));
    const auto pick = binormal_select(two, BitVector(2));
    std::size_t hits = 0;
    for (std::size_t a : {0, 1}) {
        for (std::size_t c : {2, 3}) {
            const std::vector<std::size_t> cols = {a, c};
            if (two.M.column_sum(cols).is_zero()) {
                ++hits;
                CHECK(pick == cols);
            }
        }
    }
    CHECK(hits == 1);
}

TEST_CASE("selection is the unique pair choice") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t k = 1 + rng() % 12;
        const BinormalMatrix b{random_binormal(rng, k, rng() % 3), k, {}};
        BitVector x(k);
        for (std::size_t i = 0; i < k; ++i) x.set(i, bit(rng));
        std::size_t hits = 0;
        std::vector<std::size_t> found;
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
            std::vector<std::size_t> cols;
            for (std::size_t i = 0; i < k; ++i) cols.push_back(2 * i + (mask >> i & 1U));
            if (b.M.column_sum(cols) == x) {
                ++hits;
                found = cols;
            }
        }
        REQUIRE(hits == 1);
        CHECK(binormal_select(b, x) == found);
    }
}

TEST_CASE("pair profile") {
    const BinormalMatrix id{rows_of({"10000000", "00100000", "00001000", "00000010"}), 4, {}};
    REQUIRE(is_binormal(id.M));
    CHECK(profile(id).C == BitMatrix(4, 4));

    const BinormalMatrix two = to_binormal_form(rows_of({"11000", "00110"}));
    const PairProfile p2 = profile(two);
    CHECK(p2.C.get(0, 1) == two.M.get(0, 2));
    CHECK(p2.C.get(1, 0) == two.M.get(1, 0));
    CHECK_FALSE(p2.C.get(0, 0));

    const BitMatrix m = rows_of({"10" "11" "00" "101",  //
                                 "00" "01" "11" "011",  //
                                 "11" "11" "10" "110"});
    REQUIRE(is_binormal(m));
    CHECK(profile(m).C == rows_of({"010", "001", "110"}));
}

TEST_CASE("row triple") {
    PairProfile c{rows_of({"010", "100", "010"})};
    const auto t = find_row_triple(c);
    CHECK(t == std::array<std::size_t, 3>{0, 1, 2});

    PairProfile flat{rows_of({"011", "100", "010"})};
    CHECK_THROWS_AS((void)find_row_triple(flat), precondition_error);

    std::mt19937_64 rng(17);
    int done = 0;
    while (done < 1000) {
        const std::size_t size = 3 + rng() % 9;
        const PairProfile p = random_profile(rng, size);
        bool ok = true;
        for (std::size_t i = 0; i < size && ok; ++i) {
            bool seen[2] = {false, false};
            for (std::size_t j = 0; j < size; ++j) {
                if (j != i) seen[p.C.get(i, j) ? 1 : 0] = true;
            }
            ok = seen[0] && seen[1];
        }
        if (!ok) continue;
        ++done;
        const auto [i, j, k] = find_row_triple(p);
        CHECK((i != j && j != k && i != k));
        CHECK(p.C.get(i, j) != p.C.get(i, k));
        CHECK(p.C.get(j, i) != p.C.get(j, k));
    }
}

TEST_CASE("type anomaly") {
    PairProfile cycle{BitMatrix(5, 5)};
    for (std::size_t i = 0; i < 5; ++i) cycle.C.set(i, (i + 1) % 5, true);
    CHECK(find_type_anomaly(cycle) == std::vector<std::size_t>{0, 1, 2});
    CHECK(cycle.type({0, 1, 2}) == 2);

    PairProfile even{BitMatrix(5, 5)};
    CHECK_THROWS_AS((void)find_type_anomaly(even), precondition_error);
    PairProfile wrong_size{BitMatrix(7, 7)};
    CHECK_THROWS_AS((void)find_type_anomaly(wrong_size), precondition_error);
}

TEST_CASE("every odd-out-degree digraph on five vertices has an anomaly") {
    // each row: 4 off-diagonal entries with odd weight, 8 choices per row
    std::vector<unsigned> odd_rows;
    for (unsigned r = 0; r < 16; ++r) {
        if (std::popcount(r) % 2 == 1) odd_rows.push_back(r);
    }
    std::size_t count = 0;
    for (std::size_t code = 0; code < 32768; ++code) {
        PairProfile p{BitMatrix(5, 5)};
        std::size_t rest = code;
        for (std::size_t i = 0; i < 5; ++i) {
            const unsigned row = odd_rows[rest % 8];
            rest /= 8;
            std::size_t bitpos = 0;
            for (std::size_t j = 0; j < 5; ++j) {
                if (j == i) continue;
                p.C.set(i, j, (row >> bitpos++ & 1U) != 0);
            }
        }
        const auto anomaly = find_type_anomaly(p);
        CHECK(2 * p.type(anomaly) == anomaly.size() + 1);
        ++count;
    }
    CHECK(count == 32768);
}

TEST_CASE("random odd-out-degree digraphs have anomalies") {
    std::mt19937_64 rng(23);
    for (std::size_t n : {5, 9, 13}) {
        for (int trial = 0; trial < 1000; ++trial) {
            PairProfile p = random_profile(rng, n);
            make_rows_odd(p);
            const auto anomaly = find_type_anomaly(p);
            REQUIRE((anomaly.size() == 3 || anomaly.size() == 5));
            CHECK(2 * p.type(anomaly) == anomaly.size() + 1);
        }
    }
}

TEST_CASE("switching a vertex keeps odd subset types") {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = 3 + rng() % 10;
        PairProfile p = random_profile(rng, n);
        std::vector<std::size_t> subset;
        for (std::size_t i = 0; i < n; ++i) {
            if (bit(rng)) subset.push_back(i);
        }
        if (subset.size() % 2 == 0) {
            if (subset.empty()) continue;
            subset.pop_back();
        }
        const std::size_t before = p.type(subset);
        egz::gf2::apply(egz::gf2::FlipRowOffDiagonal{rng() % n}, p.C);
        CHECK(p.type(subset) == before);
    }
}

TEST_CASE("extraction through binormal form") {
    CHECK(extract_via_enomoto(rows_of({"110"})).indices == std::vector<std::size_t>{2});

    const BitMatrix two = rows_of({"11000", "00110"});
    const auto w = extract_via_enomoto(two);
    CHECK(sums_to_zero(two, w.indices, 2));

    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        const BitMatrix m = random_enomoto(rng, 4, 11);
        CHECK(sums_to_zero(m, extract_via_enomoto(m).indices, 4));
    }
}

TEST_CASE("odd extractor") {
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 500; ++trial) {
        const BitMatrix m = random_binormal(rng, 3, 3);
        CHECK(sums_to_zero(m, extract_odd_case(m, 1).indices, 2));
    }
    for (int trial = 0; trial < 200; ++trial) {
        const BitMatrix m = random_binormal(rng, 7, 3);
        CHECK(sums_to_zero(m, extract_odd_case(m, 3).indices, 6));
    }
    // a zero profile row: the witness comes from the pairs alone
    BitMatrix z = random_binormal(rng, 7, 3);
    for (std::size_t j = 0; j < 7; ++j) {
        if (j == 4) continue;
        z.set(4, 2 * j, false);
        z.set(4, 2 * j + 1, false);
    }
    const auto w = extract_odd_case(z, 3);
    CHECK(sums_to_zero(z, w.indices, 6));
    for (auto c : w.indices) CHECK(c < 14);

    CHECK_THROWS_AS((void)extract_odd_case(random_binormal(rng, 3, 2), 1), precondition_error);
    BitMatrix broken = random_binormal(rng, 3, 3);
    broken.set(0, 0, !broken.get(0, 0));
    broken.set(0, 1, !broken.get(0, 1));
    broken.set(1, 0, !broken.get(1, 0));
    CHECK_THROWS_AS((void)extract_odd_case(broken, 1), precondition_error);
}

TEST_CASE("even extractor") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 500; ++trial) {
        const BitMatrix m = random_binormal(rng, 5, 0);
        CHECK(sums_to_zero(m, extract_even_case(m, 2).indices, 4));
    }
    for (int trial = 0; trial < 100; ++trial) {
        const BitMatrix m = random_binormal(rng, 9, 0);
        CHECK(sums_to_zero(m, extract_even_case(m, 4).indices, 8));
    }
}

TEST_CASE("even extractor with a duplicate pair") {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 300; ++trial) {
        const BitMatrix m = binormal_with_duplicate(rng, 5, 7, 9);
        REQUIRE(m.column(7) == m.column(9));
        REQUIRE(m.row_sums().is_zero());
        const auto w = extract_even_case(m, 2, std::make_pair(std::size_t{7}, std::size_t{9}));
        CHECK(sums_to_zero(m, w.indices, 4));
        const auto uses = [&](std::size_t c) {
            return std::find(w.indices.begin(), w.indices.end(), c) != w.indices.end();
        };
        CHECK_FALSE((uses(7) && uses(9)));
    }
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = trial % 2 == 0 ? 5 : 9;
        const std::size_t u = rng() % n;
        std::size_t v = rng() % (n - 1);
        if (v >= u) ++v;
        const std::size_t p = 2 * u + (rng() & 1U), q = 2 * v + (rng() & 1U);
        const BitMatrix m = binormal_with_duplicate(rng, n, p, q);
        REQUIRE(m.column(p) == m.column(q));
        const auto w = extract_even_case(m, n / 2, std::make_pair(p, q));
        CHECK(sums_to_zero(m, w.indices, n - 1));
        const auto uses = [&](std::size_t c) {
            return std::find(w.indices.begin(), w.indices.end(), c) != w.indices.end();
        };
        CHECK_FALSE((uses(p) && uses(q)));
    }

    const BitMatrix m = binormal_with_duplicate(rng, 5, 7, 9);
    CHECK_THROWS_AS((void)extract_even_case(m, 2), precondition_error);
    CHECK_THROWS_AS(
        (void)extract_even_case(m, 2, std::make_pair(std::size_t{0}, std::size_t{1})),
        precondition_error);
}

TEST_CASE("zero-sum extraction examples") {
    const GroupSequence s = GroupSequence::from_values(2, {0, 2, 1, 3, 3});
    CHECK(extract_zero_sum(s, 1).indices == std::vector<std::size_t>{3, 4});

    // gao_lower: 3 zeros + basis + all-ones in Z_2^4 has no zero-sum of length 4
    const GroupSequence gao = GroupSequence::from_values(4, {0, 0, 0, 1, 2, 4, 8, 15});
    CHECK_THROWS_AS((void)extract_zero_sum(gao, 2), absent_error);

    std::mt19937_64 rng(47);
    for (int trial = 0; trial < 500; ++trial) {
        const GroupSequence r = random_seq(rng, 4, 9);
        CHECK(egz::zerosum::is_zero_sum(r, extract_zero_sum(r, 2).indices, 4));
    }
    for (int trial = 0; trial < 200; ++trial) {
        const GroupSequence r = random_seq(rng, 7, 17);
        CHECK(egz::zerosum::is_zero_sum(r, extract_zero_sum(r, 3).indices, 6));
    }
}

TEST_CASE("extraction is total at the threshold lengths") {
    struct Case {
        std::size_t m, d, len;
    };
    const Case cases[] = {{1, 2, 5}, {2, 4, 9}, {2, 5, 10}, {3, 6, 13},
                          {3, 7, 17}, {4, 8, 17}, {4, 9, 18}};
    std::mt19937_64 rng(53);
    std::map<Route, int> routes;
    for (const auto& c : cases) {
        for (int trial = 0; trial < 500; ++trial) {
            // sparse values make rank deficiency and repeats common
            GroupSequence s = random_seq(rng, c.d, c.len);
            if (trial % 5 == 0) {
                for (auto& e : s.elements) e.set(c.d - 1, false);
            }
            const bool feasible = egz::zerosum::dp_zero_sum_witness(s, 2 * c.m).has_value();
            REQUIRE(feasible);
            const Extraction e = extract_zero_sum_traced(s, c.m);
            CHECK(egz::zerosum::is_zero_sum(s, e.witness.indices, 2 * c.m));
            ++routes[e.route];
        }
    }
    CHECK(routes[Route::enomoto] > 0);
    CHECK(routes[Route::odd_case] > 0);
    CHECK(routes[Route::even_case] > 0);
    CHECK(routes[Route::rank_reduced] > 0);
}

TEST_CASE("extraction beyond the structured range uses the oracle") {
    std::mt19937_64 rng(59);
    const GroupSequence s = random_seq(rng, 6, 40);
    const Extraction e = extract_zero_sum_traced(s, 1);
    CHECK(e.route == Route::oracle);
    CHECK(egz::zerosum::is_zero_sum(s, e.witness.indices, 2));
}
