#include "egz/suites.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>

#include "egz/codes.hpp"
#include "egz/witness.hpp"
#include "egz/zerosum.hpp"

namespace egz::suites {

namespace {

using gf2::BitMatrix;
using gf2::BitVector;
using zerosum::GroupSequence;

using Rng = std::mt19937_64;
using Check = std::function<std::optional<std::string>(Rng&)>;

bool coin(Rng& rng) { return (rng() & 1U) != 0; }

BitMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
    BitMatrix g(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) g.set(r, c, coin(rng));
    }
    return g;
}

witness::PairProfile random_odd_profile(Rng& rng, std::size_t n) {
    witness::PairProfile p{BitMatrix(n, n)};
    for (std::size_t i = 0; i < n; ++i) {
        bool parity = false;
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const bool b = coin(rng);
            p.C.set(i, j, b);
            parity ^= b;
        }
        if (!parity) {
            const std::size_t j = (i + 1) % n;
            p.C.set(i, j, !p.C.get(i, j));
        }
    }
    return p;
}

GroupSequence random_set(Rng& rng, std::size_t d, std::size_t size) {
    std::vector<std::uint64_t> all(std::size_t{1} << d);
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(size);
    return GroupSequence::from_values(d, all);
}

std::optional<std::string> macwilliams(Rng& rng) {
    const std::size_t n = 1 + rng() % 12;
    const std::size_t rows = rng() % (std::min<std::size_t>(6, n) + 1);
    const auto c = codes::LinearCode::from_generator(random_matrix(rng, rows, n));
    const auto a = codes::weight_distribution(c);
    const auto b = codes::weight_distribution(codes::dual(c));
    if (codes::verify_macwilliams(a, b, n, c.dimension())) return std::nullopt;
    return "identity fails for a code of length " + std::to_string(n);
}

std::optional<std::string> unbalanced_dual(Rng& rng) {
    while (true) {
        const std::size_t n = 10 + rng() % 5;
        const auto c = codes::LinearCode::from_generator(random_matrix(rng, 1 + rng() % 4, n));
        const auto wd = codes::weight_distribution(c);
        if (wd.counts[2] != 0 || wd.counts[4] != 0) continue;
        const BitVector w = codes::find_unbalanced_dual_word(c);
        const long l = static_cast<long>(w.weight());
        if (w.is_zero() || !codes::dual(c).contains(w)) return std::string("word not in the dual");
        if (std::abs(2 * l - static_cast<long>(n)) < 4) {
            return "dual word of weight " + std::to_string(l) + " at length " + std::to_string(n);
        }
        return std::nullopt;
    }
}

Check digraph(std::size_t n) {
    return [n](Rng& rng) -> std::optional<std::string> {
        const auto p = random_odd_profile(rng, n);
        const auto anomaly = witness::find_type_anomaly(p);
        if ((anomaly.size() == 3 || anomaly.size() == 5) &&
            2 * p.type(anomaly) == anomaly.size() + 1) {
            return std::nullopt;
        }
        return "bad anomaly on " + std::to_string(n) + " vertices";
    };
}

std::optional<std::string> row_triple(Rng& rng) {
    while (true) {
        const std::size_t t = 3 + rng() % 9;
        witness::PairProfile p{random_matrix(rng, t, t)};
        bool ok = true;
        for (std::size_t i = 0; i < t; ++i) {
            p.C.set(i, i, false);
            bool seen[2] = {false, false};
            for (std::size_t j = 0; j < t; ++j) {
                if (j != i) seen[p.C.get(i, j) ? 1 : 0] = true;
            }
            ok = ok && seen[0] && seen[1];
        }
        if (!ok) continue;
        const auto [i, j, k] = witness::find_row_triple(p);
        if (p.C.get(i, j) != p.C.get(i, k) && p.C.get(j, i) != p.C.get(j, k)) return std::nullopt;
        return "triple fails its equations at size " + std::to_string(t);
    }
}

std::optional<std::string> switching(Rng& rng) {
    const std::size_t n = 3 + rng() % 10;
    witness::PairProfile p{random_matrix(rng, n, n)};
    std::vector<bool> member(n);
    std::size_t size = 0;
    for (std::size_t i = 0; i < n; ++i) {
        member[i] = coin(rng);
        size += member[i] ? 1 : 0;
    }
    if (size % 2 == 0) {
        const std::size_t r = rng() % n;  // toggling one index makes the size odd
        member[r] = !member[r];
    }
    std::vector<std::size_t> subset;
    for (std::size_t i = 0; i < n; ++i) {
        if (member[i]) subset.push_back(i);
    }
    const std::size_t before = p.type(subset);
    gf2::apply(gf2::FlipRowOffDiagonal{rng() % n}, p.C);
    if (p.type(subset) == before) return std::nullopt;
    return std::string("type changed under switching");
}

std::optional<std::string> selection(Rng& rng) {
    const std::size_t k = 1 + rng() % 12;
    BitMatrix m = random_matrix(rng, k, 2 * k + rng() % 3);
    for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t i = 0; i < k; ++i) {
            const bool b = m.get(i, 2 * j);
            m.set(i, 2 * j + 1, i == j ? !b : b);
        }
    }
    const witness::BinormalMatrix b{m, k, {}};
    BitVector x(k);
    for (std::size_t i = 0; i < k; ++i) x.set(i, coin(rng));
    std::size_t hits = 0;
    std::vector<std::size_t> found;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
        std::vector<std::size_t> cols;
        for (std::size_t i = 0; i < k; ++i) cols.push_back(2 * i + (mask >> i & 1U));
        if (m.column_sum(cols) == x) {
            ++hits;
            found = cols;
        }
    }
    if (hits == 1 && witness::binormal_select(b, x) == found) return std::nullopt;
    return "selection not unique or not returned, k = " + std::to_string(k);
}

// |A| > 2^(d-1), nonzero sum
std::optional<std::string> large_set_one(Rng& rng) {
    while (true) {
        const std::size_t d = 2 + rng() % 5;
        const std::size_t half = std::size_t{1} << (d - 1);
        const auto a = random_set(rng, d, half + 1 + rng() % half);
        if (a.sum().is_zero()) continue;
        const auto w = zerosum::drop_two_zero_sum(a);
        if (!zerosum::is_zero_sum(a, w.indices, a.size() - 2)) {
            return std::string("constructed subset is not zero-sum");
        }
        if (!zerosum::dp_zero_sum_witness(a, a.size() - 2)) {
            return std::string("oracle finds no subset of size |A|-2");
        }
        return std::nullopt;
    }
}

// |A| >= 2^(d-1) + 2
std::optional<std::string> large_set_two(Rng& rng) {
    const std::size_t d = 2 + rng() % 5;
    const std::size_t half = std::size_t{1} << (d - 1);
    const auto a = random_set(rng, d, half + 2 + rng() % (half - 1));
    const auto w = zerosum::drop_three_zero_sum(a);
    if (!zerosum::is_zero_sum(a, w.indices, a.size() - 3)) {
        return std::string("constructed subset is not zero-sum");
    }
    if (!zerosum::dp_zero_sum_witness(a, a.size() - 3)) {
        return std::string("oracle finds no subset of size |A|-3");
    }
    return std::nullopt;
}

Check extractor(std::size_t m, std::size_t d, std::size_t len) {
    return [=](Rng& rng) -> std::optional<std::string> {
        std::vector<std::uint64_t> vals;
        const bool sparse = rng() % 5 == 0;  // exercises the rank-deficient route
        for (std::size_t i = 0; i < len; ++i) {
            std::uint64_t v = rng() & ((std::uint64_t{1} << d) - 1);
            if (sparse) v &= ~(std::uint64_t{1} << (d - 1));
            vals.push_back(v);
        }
        const auto s = GroupSequence::from_values(d, vals);
        const auto w = witness::extract_zero_sum(s, m);
        if (!zerosum::is_zero_sum(s, w.indices, 2 * m)) {
            return "invalid witness for m=" + std::to_string(m) + ", d=" + std::to_string(d);
        }
        if (!zerosum::dp_zero_sum_witness(s, 2 * m)) {
            return "oracle disagrees for m=" + std::to_string(m) + ", d=" + std::to_string(d);
        }
        return std::nullopt;
    };
}

std::vector<Check> checks_for(const std::string& name) {
    if (name == "macwilliams") return {macwilliams};
    if (name == "unbalanced-dual") return {unbalanced_dual};
    if (name == "lemma-digraph") return {digraph(5), digraph(9), digraph(13)};
    if (name == "row-triple") return {row_triple};
    if (name == "switching") return {switching};
    if (name == "selection") return {selection};
    if (name == "large-set-1") return {large_set_one};
    if (name == "large-set-2") return {large_set_two};
    if (name == "extractor") {
        return {extractor(1, 2, 5),  extractor(2, 4, 9),  extractor(2, 5, 10),
                extractor(3, 6, 13), extractor(3, 7, 17), extractor(4, 8, 17),
                extractor(4, 9, 18)};
    }
    throw std::invalid_argument("unknown suite: " + name);
}

}  // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {
        "macwilliams", "unbalanced-dual", "lemma-digraph", "row-triple", "switching",
        "selection",   "large-set-1",     "large-set-2",   "extractor"};
    return names;
}

SuiteResult run_suite(const std::string& name, std::size_t trials, std::uint64_t seed) {
    const auto checks = checks_for(name);
    SuiteResult result{name, 0, 0, {}};
    Rng rng(seed);
    for (const auto& check : checks) {
        for (std::size_t t = 0; t < trials; ++t) {
            ++result.instances;
            std::optional<std::string> failure;
            try {
                failure = check(rng);
            } catch (const std::exception& e) {
                failure = std::string("exception: ") + e.what();
            }
            if (!failure) {
                ++result.passed;
            } else if (result.first_failure.empty()) {
                result.first_failure = *failure;
            }
        }
    }
    return result;
}

}  // namespace egz::suites
