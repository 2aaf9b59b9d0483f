#include "egz/witness.hpp"

#include <algorithm>
#include <optional>
#include <string>

namespace egz::witness {

using gf2::AddRow;
using gf2::AddVectorToColumns;
using gf2::SwapColumns;

namespace {

std::vector<std::size_t> sorted(std::vector<std::size_t> v) {
    std::sort(v.begin(), v.end());
    return v;
}

BitVector sum_of(const BitMatrix& m, const std::vector<std::size_t>& cols) {
    return m.column_sum(cols);
}

// Pick one column from each listed pair so that the sum agrees with `want` on
// the rows of those pairs. In binormal form the members of pair i differ only
// in row i, so one pass of flips settles every listed row independently.
std::vector<std::size_t> choose_pairs(const BitMatrix& m, const std::vector<std::size_t>& pairs,
                                      const BitVector& want) {
    std::vector<std::size_t> cols;
    cols.reserve(pairs.size());
    for (auto p : pairs) cols.push_back(2 * p);
    BitVector acc = sum_of(m, cols);
    for (std::size_t t = 0; t < pairs.size(); ++t) {
        const std::size_t i = pairs[t];
        if (acc.get(i) != want.get(i)) {
            cols[t] = 2 * i + 1;
            acc.flip(i);
        }
    }
    return cols;
}

std::vector<std::size_t> all_pairs_except(std::size_t n, std::initializer_list<std::size_t> skip) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::find(skip.begin(), skip.end(), i) == skip.end()) out.push_back(i);
    }
    return out;
}

void require(bool ok, const std::string& what) {
    if (!ok) throw precondition_error(what);
}

void require_binormal(const BitMatrix& m, const char* who) {
    require(is_binormal(m), std::string(who) + ": binormal: matrix is not in binormal form");
}

// Disjoint column pairs with linearly independent differences. The smallest
// undecided column is either paired with a later one or left unpaired.
struct PairSearch {
    const std::vector<BitVector>& cols;
    std::size_t k;
    std::size_t spare;
    std::vector<bool> used;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::vector<BitVector> basis;  // reduced: basis[t] has leading bit pivots[t]
    std::vector<std::size_t> pivots;

    bool reduce(BitVector& v) const {
        for (std::size_t t = 0; t < basis.size(); ++t) {
            if (v.get(pivots[t])) v ^= basis[t];
        }
        return !v.is_zero();
    }

    static std::size_t lead(const BitVector& v) {
        for (std::size_t i = 0; i < v.dim(); ++i) {
            if (v.get(i)) return i;
        }
        return v.dim();
    }

    // The undecided columns must still be able to complete the span.
    bool can_finish(std::size_t from) const {
        std::vector<BitVector> b = basis;
        std::vector<std::size_t> piv = pivots;
        std::optional<std::size_t> anchor;
        for (std::size_t c = from; c < cols.size() && b.size() < k; ++c) {
            if (used[c]) continue;
            if (!anchor) {
                anchor = c;
                continue;
            }
            BitVector v = cols[c] ^ cols[*anchor];
            for (std::size_t t = 0; t < b.size(); ++t) {
                if (v.get(piv[t])) v ^= b[t];
            }
            if (v.is_zero()) continue;
            piv.push_back(lead(v));
            b.push_back(std::move(v));
        }
        return b.size() == k;
    }

    bool run(std::size_t from, std::size_t skipped) {
        if (pairs.size() == k) return true;
        std::size_t a = from;
        while (a < cols.size() && used[a]) ++a;
        if (a >= cols.size() || !can_finish(a)) return false;
        used[a] = true;
        for (std::size_t b = a + 1; b < cols.size(); ++b) {
            if (used[b]) continue;
            BitVector diff = cols[a] ^ cols[b];
            if (!reduce(diff)) continue;
            used[b] = true;
            pairs.emplace_back(a, b);
            basis.push_back(diff);
            pivots.push_back(lead(diff));
            if (run(a + 1, skipped)) return true;
            pivots.pop_back();
            basis.pop_back();
            pairs.pop_back();
            used[b] = false;
        }
        if (skipped < spare && run(a + 1, skipped + 1)) return true;
        used[a] = false;
        return false;
    }
};

// Row additions (and swaps) bringing the row space onto the top rank rows;
// the remaining rows end up zero. Column positions are untouched.
BitMatrix reduce_rows(BitMatrix m) {
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t p = r;
        while (p < m.rows() && !m.get(p, c)) ++p;
        if (p == m.rows()) continue;
        if (p != r) m.swap_rows(p, r);
        for (std::size_t q = 0; q < m.rows(); ++q) {
            if (q != r && m.get(q, c)) m.add_row(r, q);
        }
        ++r;
    }
    return m;
}

ZeroSumWitness finish(const BitMatrix& m, std::vector<std::size_t> cols, std::size_t len,
                      const char* who) {
    cols = sorted(std::move(cols));
    const bool distinct = std::adjacent_find(cols.begin(), cols.end()) == cols.end();
    if (cols.size() != len || !distinct || !sum_of(m, cols).is_zero()) {
        throw std::logic_error(std::string(who) + ": assembled columns do not sum to zero");
    }
    return {std::move(cols)};
}

}  // namespace

bool is_binormal(const BitMatrix& m) {
    const std::size_t k = m.rows();
    if (m.cols() < 2 * k) return false;
    for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t i = 0; i < k; ++i) {
            const bool same = m.get(i, 2 * j) == m.get(i, 2 * j + 1);
            if (same != (i != j)) return false;
        }
    }
    return true;
}

bool PairProfile::sigma(std::size_t i, const std::vector<std::size_t>& subset) const {
    bool s = false;
    for (auto j : subset) {
        if (j != i) s ^= C.get(i, j);
    }
    return s;
}

std::size_t PairProfile::type(const std::vector<std::size_t>& subset) const {
    std::size_t t = 0;
    for (auto i : subset) t += sigma(i, subset) ? 1 : 0;
    return t;
}

BinormalMatrix to_binormal_form(const BitMatrix& m) {
    const std::size_t k = m.rows();
    const std::size_t n = m.cols();
    require(n % 2 == 1, "to_binormal_form: parity: column count " + std::to_string(n) +
                            " is not odd");
    require(2 * k < n, "to_binormal_form: shape: need 2k < n, got k=" + std::to_string(k) +
                           ", n=" + std::to_string(n));
    const std::size_t r = gf2::rank(m);
    require(r == k, "to_binormal_form: rank: rank " + std::to_string(r) + " differs from " +
                        std::to_string(k) + " rows");
    const BitVector sums = m.row_sums();
    for (std::size_t i = 0; i < k; ++i) {
        require(!sums.get(i), "to_binormal_form: row-sum: row " + std::to_string(i) +
                                  " sums to 1");
    }

    std::vector<BitVector> cols;
    cols.reserve(n);
    for (std::size_t c = 0; c < n; ++c) cols.push_back(m.column(c));
    PairSearch search{cols, k, n - 2 * k, std::vector<bool>(n, false), {}, {}, {}};
    if (!search.run(0, 0)) {
        throw std::logic_error("to_binormal_form: no independent pairing found");
    }

    BinormalMatrix out{m, k, {}};
    // Move pair t to positions (2t, 2t+1); track where original columns now sit.
    std::vector<std::size_t> at(n), where(n);
    for (std::size_t c = 0; c < n; ++c) at[c] = where[c] = c;
    auto place = [&](std::size_t orig, std::size_t pos) {
        const std::size_t cur = where[orig];
        if (cur == pos) return;
        out.log.apply_logged(SwapColumns{cur, pos}, out.M);
        const std::size_t other = at[pos];
        std::swap(at[cur], at[pos]);
        where[orig] = pos;
        where[other] = cur;
    };
    for (std::size_t t = 0; t < k; ++t) {
        place(search.pairs[t].first, 2 * t);
        place(search.pairs[t].second, 2 * t + 1);
    }

    // Row additions turning pair difference t into e_t. Earlier differences are
    // unit vectors with zeros in every row touched here.
    for (std::size_t t = 0; t < k; ++t) {
        BitVector diff = out.M.column(2 * t) ^ out.M.column(2 * t + 1);
        if (!diff.get(t)) {
            std::size_t p = t + 1;
            while (p < k && !diff.get(p)) ++p;
            if (p == k) throw std::logic_error("to_binormal_form: dependent pair differences");
            out.log.apply_logged(AddRow{p, t}, out.M);
            diff = out.M.column(2 * t) ^ out.M.column(2 * t + 1);
        }
        for (std::size_t q = 0; q < k; ++q) {
            if (q != t && diff.get(q)) out.log.apply_logged(AddRow{t, q}, out.M);
        }
    }
    if (!is_binormal(out.M)) throw std::logic_error("to_binormal_form: result not binormal");
    return out;
}

std::vector<std::size_t> binormal_select(const BinormalMatrix& b, const BitVector& x) {
    if (x.dim() != b.k) throw gf2::dimension_error("binormal_select: target dimension");
    BitVector want(b.M.rows());
    for (std::size_t i = 0; i < b.k; ++i) want.set(i, x.get(i));
    return choose_pairs(b.M, all_pairs_except(b.k, {}), want);
}

PairProfile profile(const BitMatrix& binormal) {
    const std::size_t k = binormal.rows();
    PairProfile p{BitMatrix(k, k)};
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            if (i != j) p.C.set(i, j, binormal.get(i, 2 * j));
        }
    }
    return p;
}

PairProfile profile(const BinormalMatrix& b) { return profile(b.M); }

std::array<std::size_t, 3> find_row_triple(const PairProfile& c) {
    const std::size_t t = c.size();
    for (std::size_t i = 0; i < t; ++i) {
        bool seen[2] = {false, false};
        for (std::size_t j = 0; j < t; ++j) {
            if (j != i) seen[c.C.get(i, j) ? 1 : 0] = true;
        }
        require(seen[0] && seen[1], "find_row_triple: row " + std::to_string(i) +
                                        " has constant off-diagonal entries");
    }
    for (std::size_t i = 0; i < t; ++i) {
        for (std::size_t j = 0; j < t; ++j) {
            if (j == i) continue;
            for (std::size_t k = 0; k < t; ++k) {
                if (k == i || k == j) continue;
                if ((c.C.get(i, j) != c.C.get(i, k)) && (c.C.get(j, i) != c.C.get(j, k))) {
                    return {i, j, k};
                }
            }
        }
    }
    throw std::logic_error("find_row_triple: no triple despite precondition");
}

std::vector<std::size_t> find_type_anomaly(const PairProfile& c) {
    const std::size_t n = c.size();
    require(n % 4 == 1, "find_type_anomaly: size " + std::to_string(n) + " is not 1 mod 4");
    const std::vector<std::size_t> everyone = all_pairs_except(n, {});
    for (std::size_t i = 0; i < n; ++i) {
        require(c.sigma(i, everyone), "find_type_anomaly: row " + std::to_string(i) +
                                          " has even off-diagonal sum");
    }
    for (std::size_t size : {std::size_t{3}, std::size_t{5}}) {
        if (size > n) break;
        std::vector<std::size_t> idx(size);
        for (std::size_t i = 0; i < size; ++i) idx[i] = i;
        while (true) {
            if (2 * c.type(idx) == size + 1) return idx;
            std::size_t p = size;
            while (p > 0 && idx[p - 1] == n - size + p - 1) --p;
            if (p == 0) break;
            ++idx[p - 1];
            for (std::size_t q = p; q < size; ++q) idx[q] = idx[q - 1] + 1;
        }
    }
    throw std::logic_error("find_type_anomaly: none found despite precondition");
}

ZeroSumWitness extract_via_enomoto(const BitMatrix& m) {
    const BinormalMatrix b = to_binormal_form(m);
    const auto cols = binormal_select(b, BitVector(b.k));
    return finish(m, b.log.pull_back(cols), b.k, "extract_via_enomoto");
}

ZeroSumWitness extract_odd_case(const BitMatrix& m, std::size_t half) {
    const std::size_t k = 2 * half;
    const std::size_t n = k + 1;
    require(half >= 1 && m.rows() == n && m.cols() == 2 * k + 5,
            "extract_odd_case: shape: expected " + std::to_string(n) + " x " +
                std::to_string(2 * k + 5));
    require_binormal(m, "extract_odd_case");
    const PairProfile c = profile(m);
    const std::vector<std::size_t> everyone = all_pairs_except(n, {});

    // A row with even off-diagonal sum: select over the other pairs.
    for (std::size_t r = 0; r < n; ++r) {
        if (!c.sigma(r, everyone)) {
            auto cols = choose_pairs(m, all_pairs_except(n, {r}), BitVector(n));
            return finish(m, std::move(cols), k, "extract_odd_case");
        }
    }

    // Every row sums to 1: rows a, b vanish on the remaining pairs and row z
    // picks up x there.
    const auto [a, b, z] = find_row_triple(c);
    const std::vector<std::size_t> rest = all_pairs_except(n, {a, b, z});
    const bool x = c.sigma(z, rest);

    std::vector<std::size_t> window = {2 * a, 2 * a + 1, 2 * b, 2 * b + 1, 2 * z, 2 * z + 1,
                                       2 * n, 2 * n + 1, 2 * n + 2};
    std::sort(window.begin(), window.end());
    std::size_t s1 = 0, s2 = 0;
    if (x) {
        s1 = 2 * z;
        s2 = 2 * z + 1;
    } else {
        auto key = [&](std::size_t col) {
            return (m.get(a, col) ? 1U : 0U) | (m.get(b, col) ? 2U : 0U) |
                   (m.get(z, col) ? 4U : 0U);
        };
        bool found = false;
        for (std::size_t p = 0; p < window.size() && !found; ++p) {
            for (std::size_t q = p + 1; q < window.size() && !found; ++q) {
                if (key(window[p]) == key(window[q])) {
                    s1 = window[p];
                    s2 = window[q];
                    found = true;
                }
            }
        }
        if (!found) throw std::logic_error("extract_odd_case: pigeonhole failed");
    }
    const BitVector y = m.column(s1) ^ m.column(s2);
    auto cols = choose_pairs(m, rest, y);
    cols.push_back(s1);
    cols.push_back(s2);
    return finish(m, std::move(cols), k, "extract_odd_case");
}

namespace {

ZeroSumWitness even_plain(const BitMatrix& m, std::size_t half) {
    const std::size_t n = 2 * half + 1;
    const PairProfile c = profile(m);
    const std::vector<std::size_t> everyone = all_pairs_except(n, {});
    for (std::size_t r = 0; r < n; ++r) {
        if (!c.sigma(r, everyone)) {
            auto cols = choose_pairs(m, all_pairs_except(n, {r}), BitVector(n));
            return finish(m, std::move(cols), 2 * half, "extract_even_case");
        }
    }
    // |I| = 2t - 1: select 0 over the pairs outside I, which leaves 1 exactly on
    // the rows of I with sigma = 0; both members of those pairs cancel it.
    const auto anomaly = find_type_anomaly(c);
    std::vector<std::size_t> outside;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::find(anomaly.begin(), anomaly.end(), i) == anomaly.end()) outside.push_back(i);
    }
    auto cols = choose_pairs(m, outside, BitVector(n));
    for (auto i : anomaly) {
        if (!c.sigma(i, anomaly)) {
            cols.push_back(2 * i);
            cols.push_back(2 * i + 1);
        }
    }
    return finish(m, std::move(cols), 2 * half, "extract_even_case");
}

ZeroSumWitness even_with_duplicate(const BitMatrix& m, std::size_t half, std::size_t p,
                                   std::size_t q, int depth) {
    const std::size_t n = 2 * half + 1;
    const std::size_t last = 2 * n;
    auto prefix = [&](const BitMatrix& mm) { return mm.submatrix(0, n, 0, 2 * n); };

    if (p == last || q == last) return even_plain(prefix(m), half);

    const PairProfile c = profile(m);
    std::size_t u = p / 2, v = q / 2;
    if (u == v) throw precondition_error("extract_even_case: duplicate: pair members differ");

    // c_vu = 1 (or symmetrically c_uv = 1): move the last column into pair v
    // in place of q and solve on the prefix, which then avoids q.
    for (int side = 0; side < 2; ++side) {
        if (side == 1) {
            std::swap(p, q);
            std::swap(u, v);
        }
        if (!c.C.get(v, u)) continue;
        const std::size_t q_mate = q ^ 1U;
        BitMatrix w = m;
        OpLog log;
        for (std::size_t i = 0; i < n; ++i) {
            if (i != v && w.get(i, q_mate) != w.get(i, last)) log.apply_logged(AddRow{v, i}, w);
        }
        log.apply_logged(SwapColumns{q, last}, w);
        if (!is_binormal(prefix(w))) {
            // Recover by recomputing the form from scratch.
            if (depth > 0) throw std::logic_error("extract_even_case: binormal recovery failed");
            BinormalMatrix b = to_binormal_form(m);
            const auto r = even_with_duplicate(b.M, half, b.log.push_forward(p),
                                               b.log.push_forward(q), depth + 1);
            return finish(m, b.log.pull_back(r.indices), 2 * half, "extract_even_case");
        }
        const auto r = even_plain(prefix(w), half);
        return finish(m, log.pull_back(r.indices), 2 * half, "extract_even_case");
    }

    // c_uv = c_vu = 0.
    const std::vector<std::size_t> rest = all_pairs_except(n, {u, v});
    if (!c.sigma(v, rest)) {
        auto cols = choose_pairs(m, all_pairs_except(n, {v}), BitVector(n));
        return finish(m, std::move(cols), 2 * half, "extract_even_case");
    }
    if (!c.sigma(u, rest)) {
        auto cols = choose_pairs(m, all_pairs_except(n, {u}), BitVector(n));
        return finish(m, std::move(cols), 2 * half, "extract_even_case");
    }
    auto cols = choose_pairs(m, rest, BitVector::ones(n));
    cols.push_back(last);
    return finish(m, std::move(cols), 2 * half, "extract_even_case");
}

}  // namespace

ZeroSumWitness extract_even_case(const BitMatrix& m, std::size_t half,
                                 std::optional<std::pair<std::size_t, std::size_t>> duplicate_pair) {
    const std::size_t n = 2 * half + 1;
    require(half >= 1 && m.rows() == n, "extract_even_case: shape: expected " + std::to_string(n) +
                                            " rows");
    if (m.cols() == 2 * n) {
        require_binormal(m, "extract_even_case");
        return even_plain(m, half);
    }
    require(m.cols() == 2 * n + 1, "extract_even_case: shape: expected " +
                                       std::to_string(2 * n) + " or " +
                                       std::to_string(2 * n + 1) + " columns");
    require(duplicate_pair.has_value(),
            "extract_even_case: duplicate: the extended form needs a duplicate pair");
    require_binormal(m, "extract_even_case");
    require(m.row_sums().is_zero(), "extract_even_case: row-sum: column sum is not zero");
    auto [p, q] = *duplicate_pair;
    require(p < m.cols() && q < m.cols() && p != q && m.column(p) == m.column(q),
            "extract_even_case: duplicate: columns " + std::to_string(p) + " and " +
                std::to_string(q) + " are not identical");
    return even_with_duplicate(m, half, std::min(p, q), std::max(p, q), 0);
}

const char* to_string(Route r) {
    switch (r) {
        case Route::oracle: return "oracle";
        case Route::enomoto: return "enomoto";
        case Route::odd_case: return "odd-case";
        case Route::even_case: return "even-case";
        case Route::rank_reduced: return "rank-reduced";
    }
    return "?";
}

namespace {

Extraction oracle(const GroupSequence& s, std::size_t m) {
    auto w = zerosum::dp_zero_sum_witness(s, 2 * m);
    if (!w) {
        throw absent_error("certified absent: no zero-sum subsequence of length " +
                           std::to_string(2 * m) + " among " + std::to_string(s.size()) +
                           " elements");
    }
    return {*w, Route::oracle};
}

GroupSequence prefix_of(const GroupSequence& s, std::size_t len) {
    return {s.d, std::vector<BitVector>(s.elements.begin(), s.elements.begin() + len)};
}

// Translated copy (as a matrix) when the length is odd, so the total is zero.
BitMatrix translated(const GroupSequence& s, OpLog& log) {
    BitMatrix m = s.to_matrix();
    const BitVector x = s.sum();
    if (!x.is_zero()) log.apply_logged(AddVectorToColumns{x}, m);
    return m;
}

Extraction drive(const GroupSequence& s, std::size_t m);

// Rank below d: zero out a row, drop it and continue one dimension down.
Extraction rank_reduce(const BitMatrix& mat, std::size_t m) {
    const BitMatrix r = reduce_rows(mat);
    auto sub = drive(GroupSequence::from_matrix(r.drop_row(r.rows() - 1)), m);
    sub.route = Route::rank_reduced;
    return sub;
}

Extraction drive(const GroupSequence& s, std::size_t m) {
    const std::size_t d = s.d;
    const std::size_t k = 2 * m;
    if (d == k && s.size() >= 4 * m + 1) {
        const GroupSequence t = prefix_of(s, 4 * m + 1);
        OpLog log;
        const BitMatrix mat = translated(t, log);
        if (gf2::rank(mat) < d) return rank_reduce(mat, m);
        return {extract_via_enomoto(mat), Route::enomoto};
    }
    if (d == k + 1 && m % 2 == 1 && s.size() >= 4 * m + 5) {
        const GroupSequence t = prefix_of(s, 4 * m + 5);
        OpLog log;
        const BitMatrix mat = translated(t, log);
        if (gf2::rank(mat) < d) return rank_reduce(mat, m);
        const BinormalMatrix b = to_binormal_form(mat);
        const auto w = extract_odd_case(b.M, m);
        return {{b.log.pull_back(w.indices)}, Route::odd_case};
    }
    if (d == k + 1 && m % 2 == 0 && s.size() >= 4 * m + 2) {
        const std::size_t len = 4 * m + 2;
        const GroupSequence t = prefix_of(s, len);
        BitMatrix mat = t.to_matrix();
        if (gf2::rank(mat) < d) return rank_reduce(mat, m);
        const BitVector x = t.sum();
        const BitVector shift = x ^ t.elements.back();
        if (!shift.is_zero()) gf2::apply(AddVectorToColumns{shift}, mat);
        // Translation can lose rank; the translated sequence then falls under
        // the rank lemma.
        if (gf2::rank(mat) < d) return rank_reduce(mat, m);
        const BitMatrix ext = mat.with_column(x);
        const BinormalMatrix b = to_binormal_form(ext);
        const auto w = extract_even_case(
            b.M, m, std::make_pair(b.log.push_forward(len - 1), b.log.push_forward(len)));
        std::vector<std::size_t> cols = b.log.pull_back(w.indices);
        for (auto& c : cols) {
            if (c == len) c = len - 1;  // identical to its twin, which is unused
        }
        return {{sorted(std::move(cols))}, Route::even_case};
    }
    return oracle(s, m);
}

}  // namespace

Extraction extract_zero_sum_traced(const GroupSequence& s, std::size_t m) {
    if (m == 0) throw precondition_error("extract_zero_sum: m must be positive");
    Extraction e = drive(s, m);
    if (!zerosum::is_zero_sum(s, e.witness.indices, 2 * m)) {
        throw std::logic_error("extract_zero_sum: witness failed revalidation");
    }
    return e;
}

ZeroSumWitness extract_zero_sum(const GroupSequence& s, std::size_t m) {
    return extract_zero_sum_traced(s, m).witness;
}

}  // namespace egz::witness
