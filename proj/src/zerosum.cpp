#include "egz/zerosum.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include "egz/codes.hpp"

namespace egz::zerosum {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using Clock = std::chrono::steady_clock;

namespace {

constexpr std::size_t kMaxDim = 24;
constexpr u64 kMaxDpBits = u64{1} << 31;

std::string join(const std::vector<std::string>& parts, char sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(text);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    if (!text.empty() && text.back() == sep) out.emplace_back();
    return out;
}

std::size_t parse_size(const std::string& s) {
    std::size_t pos = 0;
    const auto v = std::stoull(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("not an integer: " + s);
    return static_cast<std::size_t>(v);
}

void require_dim(std::size_t d, const char* what) {
    if (d > kMaxDim) {
        throw guard_error(std::string(what) + ": dimension " + std::to_string(d) +
                          " exceeds guard " + std::to_string(kMaxDim));
    }
}

std::vector<u32> packed(const GroupSequence& s) {
    require_dim(s.d, "packed");
    std::vector<u32> out;
    out.reserve(s.size());
    for (const auto& v : s.elements) out.push_back(static_cast<u32>(v.to_u64()));
    return out;
}

// Permutes bit positions x -> x ^ k inside one 64-bit word (k < 64).
u64 xor_permute(u64 x, unsigned k) {
    static constexpr std::array<u64, 6> kLow = {
        0x5555555555555555ULL, 0x3333333333333333ULL, 0x0F0F0F0F0F0F0F0FULL,
        0x00FF00FF00FF00FFULL, 0x0000FFFF0000FFFFULL, 0x00000000FFFFFFFFULL,
    };
    for (unsigned b = 0; b < 6; ++b) {
        if (k >> b & 1U) {
            const unsigned s = 1U << b;
            x = ((x & kLow[b]) << s) | ((x >> s) & kLow[b]);
        }
    }
    return x;
}

// dst |= { x ^ v : x in src }
void or_translated(u64* dst, const u64* src, std::size_t words, u32 v) {
    const std::size_t hi = v >> 6;
    const unsigned lo = v & 63U;
    for (std::size_t w = 0; w < words; ++w) {
        if (src[w]) dst[w ^ hi] |= xor_permute(src[w], lo);
    }
}

bool test_bit(const u64* bits, u32 x) { return (bits[x >> 6] >> (x & 63U)) & 1U; }

u64 pow2(std::size_t e) { return e >= 64 ? UINT64_MAX : (u64{1} << e); }

}  // namespace

// ---------------------------------------------------------------- WeightSet

WeightSet::WeightSet(std::vector<unsigned> values) : values_(std::move(values)) {
    std::sort(values_.begin(), values_.end());
    values_.erase(std::unique(values_.begin(), values_.end()), values_.end());
    if (values_.empty() || values_.front() == 0) {
        throw parameter_error("weight set must hold positive integers");
    }
    if (std::none_of(values_.begin(), values_.end(), [](unsigned w) { return w % 2 == 0; })) {
        throw parameter_error("weight set must contain an even number");
    }
}

WeightSet WeightSet::single(unsigned m) { return WeightSet({2 * m}); }

WeightSet WeightSet::even_range(unsigned j, unsigned m) {
    if (j == 0 || j > m) throw parameter_error("even_range needs 1 <= j <= m");
    std::vector<unsigned> v;
    for (unsigned i = j; i <= m; ++i) v.push_back(2 * i);
    return WeightSet(std::move(v));
}

WeightSet WeightSet::full(unsigned m) {
    if (m == 0) throw parameter_error("full needs m >= 1");
    std::vector<unsigned> v;
    for (unsigned i = 1; i <= 2 * m; ++i) v.push_back(i);
    return WeightSet(std::move(v));
}

WeightSet WeightSet::parse(const std::string& text) {
    std::vector<unsigned> v;
    for (const auto& part : split(text, ',')) {
        if (part.empty()) throw parameter_error("empty entry in weight set '" + text + "'");
        v.push_back(static_cast<unsigned>(parse_size(part)));
    }
    return WeightSet(std::move(v));
}

bool WeightSet::contains(unsigned w) const {
    return std::binary_search(values_.begin(), values_.end(), w);
}

bool WeightSet::all_even() const {
    return std::all_of(values_.begin(), values_.end(), [](unsigned w) { return w % 2 == 0; });
}

std::string WeightSet::to_string() const {
    std::vector<std::string> parts;
    for (auto w : values_) parts.push_back(std::to_string(w));
    return join(parts, ',');
}

// ---------------------------------------------------------------- GroupSequence

GroupSequence::GroupSequence(std::size_t dim, std::vector<BitVector> elems)
    : d(dim), elements(std::move(elems)) {
    for (const auto& e : elements) {
        if (e.dim() != d) throw gf2::dimension_error("sequence element of wrong dimension");
    }
}

GroupSequence GroupSequence::from_values(std::size_t dim, const std::vector<u64>& values) {
    std::vector<BitVector> elems;
    elems.reserve(values.size());
    for (auto v : values) elems.push_back(BitVector::from_u64(dim, v));
    return {dim, std::move(elems)};
}

GroupSequence GroupSequence::from_matrix(const gf2::BitMatrix& m) {
    std::vector<BitVector> elems;
    for (std::size_t c = 0; c < m.cols(); ++c) elems.push_back(m.column(c));
    return {m.rows(), std::move(elems)};
}

gf2::BitMatrix GroupSequence::to_matrix() const {
    if (elements.empty()) return gf2::BitMatrix(d, 0);
    return gf2::BitMatrix::from_columns(d, elements);
}

BitVector GroupSequence::sum() const {
    BitVector s(d);
    for (const auto& e : elements) s ^= e;
    return s;
}

std::vector<u64> GroupSequence::values() const {
    std::vector<u64> out;
    for (const auto& e : elements) out.push_back(e.to_u64());
    return out;
}

// ---------------------------------------------------------------- oracle

bool is_zero_sum(const GroupSequence& s, const std::vector<std::size_t>& indices,
                 std::size_t length) {
    if (indices.size() != length) return false;
    std::set<std::size_t> seen;
    BitVector acc(s.d);
    for (auto i : indices) {
        if (i >= s.size() || !seen.insert(i).second) return false;
        acc ^= s.elements[i];
    }
    return acc.is_zero();
}

std::optional<ZeroSumWitness> dp_zero_sum_witness(const GroupSequence& s, std::size_t r) {
    require_dim(s.d, "dp_zero_sum_witness");
    const std::size_t n = s.size();
    if (r > n) return std::nullopt;
    if (r == 0) return ZeroSumWitness{};
    const auto vals = packed(s);
    const u64 group = u64{1} << s.d;
    const std::size_t words = static_cast<std::size_t>((group + 63) / 64);
    const u64 bits = static_cast<u64>(n + 1) * (r + 1) * words * 64;
    if (bits > kMaxDpBits) {
        throw guard_error("dp_zero_sum_witness: table of " + std::to_string(bits) +
                          " bits exceeds the memory budget");
    }
    // reach(i, c): sums of exactly c elements chosen from positions i..n-1
    std::vector<u64> table(static_cast<std::size_t>(bits / 64), 0);
    auto reach = [&](std::size_t i, std::size_t c) { return table.data() + (i * (r + 1) + c) * words; };
    reach(n, 0)[0] = 1;
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t c = 0; c <= std::min(r, n - i); ++c) {
            u64* dst = reach(i, c);
            const u64* skip = reach(i + 1, c);
            std::copy(skip, skip + words, dst);
            if (c > 0) or_translated(dst, reach(i + 1, c - 1), words, vals[i]);
        }
    }
    if (!test_bit(reach(0, r), 0)) return std::nullopt;
    // greedy forward pass: take each position as early as the suffix allows
    ZeroSumWitness w;
    u32 target = 0;
    std::size_t c = r;
    for (std::size_t i = 0; i < n && c > 0; ++i) {
        if (test_bit(reach(i + 1, c - 1), target ^ vals[i])) {
            w.indices.push_back(i);
            target ^= vals[i];
            --c;
        }
    }
    return w;
}

bool avoids_zero_sums(const GroupSequence& set, const WeightSet& w) {
    auto vals = set.values();
    std::sort(vals.begin(), vals.end());
    if (std::adjacent_find(vals.begin(), vals.end()) != vals.end()) return false;
    for (auto size : w.values()) {
        if (dp_zero_sum_witness(set, size)) return false;
    }
    return true;
}

bool avoids_zero_sum_length(const GroupSequence& seq, std::size_t length) {
    return !dp_zero_sum_witness(seq, length);
}

namespace {

// Everything except `skip` and one pair {x, y} with x + y = target, x != y.
ZeroSumWitness drop_pair(const std::vector<std::uint64_t>& vals, std::uint64_t target,
                         std::optional<std::size_t> skip) {
    std::unordered_map<std::uint64_t, std::size_t> where;
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (i != skip) where.emplace(vals[i], i);
    }
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (i == skip) continue;
        const auto it = where.find(vals[i] ^ target);
        if (it == where.end()) continue;
        ZeroSumWitness w;
        for (std::size_t j = 0; j < vals.size(); ++j) {
            if (j != i && j != it->second && j != skip) w.indices.push_back(j);
        }
        return w;
    }
    throw std::logic_error("drop_pair: no pair despite the counting bound");
}

void require_large_set(const GroupSequence& set, std::uint64_t min_size, const char* who) {
    require_dim(set.d, who);
    auto vals = set.values();
    std::sort(vals.begin(), vals.end());
    if (std::adjacent_find(vals.begin(), vals.end()) != vals.end()) {
        throw parameter_error(std::string(who) + ": elements must be distinct");
    }
    if (set.size() < min_size) {
        throw parameter_error(std::string(who) + ": set has " + std::to_string(set.size()) +
                              " elements, needs " + std::to_string(min_size));
    }
}

}  // namespace

ZeroSumWitness drop_two_zero_sum(const GroupSequence& set) {
    const std::uint64_t half = std::uint64_t{1} << (set.d == 0 ? 0 : set.d - 1);
    require_large_set(set, set.d == 0 ? 1 : half + 1, "drop_two_zero_sum");
    const std::uint64_t total = set.sum().to_u64();
    if (total == 0) throw parameter_error("drop_two_zero_sum: the set sums to zero");
    return drop_pair(set.values(), total, std::nullopt);
}

ZeroSumWitness drop_three_zero_sum(const GroupSequence& set) {
    const std::uint64_t half = std::uint64_t{1} << (set.d == 0 ? 0 : set.d - 1);
    require_large_set(set, half + 2, "drop_three_zero_sum");
    const auto vals = set.values();
    const std::uint64_t total = set.sum().to_u64();
    const std::size_t x = vals[0] != total ? 0 : 1;
    return drop_pair(vals, total ^ vals[x], x);
}

// ---------------------------------------------------------------- records

std::string to_string(Kind k) {
    switch (k) {
        case Kind::beta: return "beta";
        case Kind::s: return "s";
        case Kind::R: return "R";
        case Kind::N: return "N";
    }
    return "?";
}

std::string to_string(Status s) { return s == Status::exact ? "exact" : "bounded"; }

std::string ConstantRecord::parameters() const {
    switch (kind) {
        case Kind::beta: return "W=" + (weights ? weights->to_string() : "") + ";d=" + std::to_string(d);
        case Kind::s: return "m=" + std::to_string(m) + ";d=" + std::to_string(d);
        case Kind::R: return "m=" + std::to_string(m) + ";n=" + std::to_string(n);
        case Kind::N: return "r=" + std::to_string(d) + ";delta=" + std::to_string(delta);
    }
    return {};
}

std::string ConstantRecord::name() const {
    switch (kind) {
        case Kind::beta: return "beta_{" + (weights ? weights->to_string() : "") + "}(" + std::to_string(d) + ")";
        case Kind::s: return "s_" + std::to_string(2 * m) + "(" + std::to_string(d) + ")";
        case Kind::R: return "R_" + std::to_string(2 * m) + "(" + std::to_string(n) + ")";
        case Kind::N: return "N(" + std::to_string(d) + "," + std::to_string(delta) + ")";
    }
    return {};
}

bool validate_witness(const ConstantRecord& rec) {
    if (!rec.witness) return true;
    const auto& w = *rec.witness;
    try {
        switch (rec.kind) {
            case Kind::beta:
                return rec.weights && w.d == rec.d && w.size() == rec.lower &&
                       avoids_zero_sums(w, *rec.weights);
            case Kind::s:
                return rec.lower >= 1 && w.d == rec.d && w.size() == rec.lower - 1 &&
                       avoids_zero_sum_length(w, 2 * rec.m);
            case Kind::R:
                return w.d == rec.upper && w.size() == rec.n && avoids_zero_sum_length(w, 2 * rec.m);
            case Kind::N:
                return false;
        }
    } catch (const guard_error&) {
        return false;
    }
    return false;
}

Budget Budget::seconds(double s) {
    Budget b;
    b.max_time = std::chrono::milliseconds(static_cast<std::int64_t>(s * 1000.0));
    return b;
}

// ---------------------------------------------------------------- beta search

namespace {

class Deadline {
public:
    explicit Deadline(const Budget& b) : budget_(b), start_(Clock::now()) {}

    bool expired(u64 nodes) const {
        if (nodes >= budget_.max_nodes) return true;
        if (budget_.max_time == std::chrono::milliseconds::max()) return false;
        return Clock::now() - start_ >= budget_.max_time;
    }

    Budget remaining(u64 used_nodes) const {
        Budget b;
        b.max_nodes = budget_.max_nodes > used_nodes ? budget_.max_nodes - used_nodes : 0;
        if (budget_.max_time != std::chrono::milliseconds::max()) {
            const auto spent = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start_);
            b.max_time = std::max(std::chrono::milliseconds(0), budget_.max_time - spent);
        }
        return b;
    }

private:
    Budget budget_;
    Clock::time_point start_;
};

// Counts of j-subsets of the current set summing to each group element,
// j < jmax + 1, with exact add/remove.
class SubsetCounts {
public:
    SubsetCounts(std::size_t group, unsigned jmax)
        : group_(group), cnt_(jmax + 1, std::vector<u64>(group, 0)) {
        cnt_[0][0] = 1;
    }

    void add(u32 v) {
        for (std::size_t j = cnt_.size() - 1; j >= 1; --j) {
            auto& dst = cnt_[j];
            const auto& src = cnt_[j - 1];
            for (std::size_t x = 0; x < group_; ++x) dst[x] += src[x ^ v];
        }
    }

    void remove(u32 v) {
        for (std::size_t j = 1; j < cnt_.size(); ++j) {
            auto& dst = cnt_[j];
            const auto& src = cnt_[j - 1];
            for (std::size_t x = 0; x < group_; ++x) dst[x] -= src[x ^ v];
        }
    }

    [[nodiscard]] u64 count(unsigned j, u32 x) const { return cnt_[j][x]; }

private:
    std::size_t group_;
    std::vector<std::vector<u64>> cnt_;
};

class BetaSearch {
public:
    BetaSearch(std::vector<unsigned> forbidden, std::size_t d, const Budget& budget)
        : forbidden_(std::move(forbidden)),
          group_(std::size_t{1} << d),
          counts_(group_, forbidden_.empty() ? 0 : forbidden_.back() - 1),
          deadline_(budget) {}

    void run() {
        const bool translate =
            std::all_of(forbidden_.begin(), forbidden_.end(), [](unsigned w) { return w % 2 == 0; });
        std::vector<u32> cands;
        if (translate) {
            push(0);
            for (u32 u = 1; u < group_; ++u) {
                if (legal(u)) cands.push_back(u);
            }
        } else {
            for (u32 u = 0; u < group_; ++u) {
                if (legal(u)) cands.push_back(u);
            }
        }
        dfs(cands, 0);
    }

    std::vector<u32> best;
    bool complete = true;
    u64 nodes = 0;

private:
    bool legal(u32 v) const {
        for (auto w : forbidden_) {
            if (counts_.count(w - 1, v) != 0) return false;
        }
        return true;
    }

    void push(u32 v) {
        counts_.add(v);
        current_.push_back(v);
    }

    void pop() {
        counts_.remove(current_.back());
        current_.pop_back();
    }

    // cands: legal elements above the last chosen one, ascending. Elements of the
    // current set span exactly [0, 2^r), so the next one is < 2^r or equals 2^r.
    void dfs(const std::vector<u32>& cands, unsigned r) {
        ++nodes;
        if ((nodes & 255U) == 0 && deadline_.expired(nodes)) {
            complete = false;
            return;
        }
        if (current_.size() > best.size()) best = current_;
        const u64 limit = u64{1} << r;
        const auto split = static_cast<std::size_t>(
            std::lower_bound(cands.begin(), cands.end(), limit) - cands.begin());
        const bool grow = split < cands.size() && cands[split] == limit;
        // nothing beyond 2^r can join unless 2^r itself does
        const std::size_t reachable = grow ? cands.size() : split;
        const std::size_t branches = grow ? split + 1 : split;
        std::vector<u32> child;
        for (std::size_t i = 0; i < branches; ++i) {
            if (current_.size() + reachable - i <= best.size()) break;
            const u32 v = cands[i];
            push(v);
            child.clear();
            for (std::size_t k = i + 1; k < cands.size(); ++k) {
                if (legal(cands[k])) child.push_back(cands[k]);
            }
            if (current_.size() + child.size() > best.size()) dfs(child, v == limit ? r + 1 : r);
            if (current_.size() > best.size()) best = current_;
            pop();
            if (!complete) return;
        }
    }

    std::vector<unsigned> forbidden_;
    std::size_t group_;
    SubsetCounts counts_;
    Deadline deadline_;
    std::vector<u32> current_;
};

// Pairs never sum to zero in a set, so 2 is dropped from the forbidden sizes.
std::vector<unsigned> effective_weights(const WeightSet& w) {
    std::vector<unsigned> out;
    for (auto x : w.values()) {
        if (x != 2) out.push_back(x);
    }
    return out;
}

std::optional<LedgerQuery> ledger_query_for(const WeightSet& w, std::size_t d) {
    const auto m = w.max() / 2;
    if (w.max() % 2 != 0) return std::nullopt;
    for (unsigned j = 1; j <= m; ++j) {
        if (w == WeightSet::even_range(j, m)) return LedgerQuery{Kind::beta, m, d, w};
    }
    if (w == WeightSet::full(m)) return LedgerQuery{Kind::beta, m, d, w};
    return std::nullopt;
}

GroupSequence set_from(std::size_t d, const std::vector<u32>& vals) {
    std::vector<u64> v(vals.begin(), vals.end());
    return GroupSequence::from_values(d, v);
}

}  // namespace

ConstantRecord beta_search(const WeightSet& w, std::size_t d, Budget budget) {
    require_dim(d, "beta_search");
    ConstantRecord rec;
    rec.kind = Kind::beta;
    rec.weights = w;
    rec.d = d;
    const auto forbidden = effective_weights(w);
    const std::size_t group = std::size_t{1} << d;
    if (forbidden.empty() || forbidden.front() > group) {
        // every set of distinct elements qualifies, so the whole group does
        std::vector<u32> all(group);
        for (u32 i = 0; i < group; ++i) all[i] = i;
        rec.lower = rec.upper = group;
        rec.status = Status::exact;
        rec.witness = set_from(d, all);
        rec.trace = {"trivial:whole_group"};
        rec.notes = {rec.name() + " = 2^d: no forbidden size can occur among distinct elements"};
        return rec;
    }
    BetaSearch search(forbidden, d, budget);
    search.run();
    rec.lower = search.best.size();
    rec.witness = set_from(d, search.best);
    if (search.complete) {
        rec.upper = rec.lower;
        rec.status = Status::exact;
        rec.trace = {"search:exact"};
        rec.notes = {rec.name() + " = " + std::to_string(rec.lower) + " by exhaustive branch-and-bound (" +
                     std::to_string(search.nodes) + " nodes)"};
        return rec;
    }
    rec.status = Status::bounded;
    rec.upper = group;
    rec.trace = {"search:budget_exhausted"};
    rec.notes = {rec.name() + " >= " + std::to_string(rec.lower) + " from the best set found in " +
                 std::to_string(search.nodes) + " nodes"};
    if (const auto q = ledger_query_for(w, d)) {
        const auto led = bounds_ledger(*q);
        rec.upper = std::min<u64>(rec.upper, led.upper);
        rec.trace.push_back("ledger");
        rec.notes.insert(rec.notes.end(), led.notes.begin(), led.notes.end());
        if (led.lower > rec.lower) {
            rec.lower = led.lower;
            rec.witness.reset();
        }
    }
    if (rec.lower == rec.upper) {
        rec.status = Status::exact;
        rec.witness.reset();
        if (search.best.size() == rec.lower) rec.witness = set_from(d, search.best);
    }
    return rec;
}

// ---------------------------------------------------------------- s

ConstantRecord s_from_beta(std::size_t m, std::size_t d, Budget budget) {
    if (m == 0) throw parameter_error("s_from_beta needs m >= 1");
    require_dim(d, "s_from_beta");
    Deadline deadline(budget);
    ConstantRecord rec;
    rec.kind = Kind::s;
    rec.m = m;
    rec.d = d;
    struct Term {
        std::size_t j;
        u64 shift;
        const ConstantRecord* beta;
    };
    std::map<std::vector<unsigned>, ConstantRecord> memo;
    std::vector<Term> terms;
    for (std::size_t j = 1; j <= m; ++j) {
        const auto w = WeightSet::even_range(static_cast<unsigned>(j), static_cast<unsigned>(m));
        const auto key = effective_weights(w);
        auto it = memo.find(key);
        if (it == memo.end()) it = memo.emplace(key, beta_search(w, d, deadline.remaining(0))).first;
        terms.push_back({j, 2 * m - 2 * j, &it->second});
    }
    bool exact = true;
    u64 lo = 0;
    u64 hi = 0;
    const Term* best = nullptr;
    for (const auto& t : terms) {
        const auto& b = *t.beta;
        exact = exact && b.exact();
        if (!best || b.lower + t.shift > best->beta->lower + best->shift) best = &t;
        lo = std::max(lo, b.lower + t.shift + 1);
        hi = std::max(hi, b.upper + t.shift + 1);
        rec.notes.push_back("j=" + std::to_string(t.j) + ": beta_{" + WeightSet::even_range(
                                static_cast<unsigned>(t.j), static_cast<unsigned>(m)).to_string() + "}(" +
                            std::to_string(d) + ") in [" + std::to_string(b.lower) + ", " + std::to_string(b.upper) +
                            "] (" + to_string(b.status) + ")");
    }
    const std::size_t best_j = best->j;
    if (best->beta->witness && best->beta->witness->size() == best->beta->lower) {
        // the set, with its first element repeated 2m-2j more times; a zero-sum
        // subsequence of length 2m would leave an even zero-sum subset of size >= 2j
        auto seq = *best->beta->witness;
        if (!seq.elements.empty()) {
            const auto first = seq.elements.front();
            for (u64 t = 0; t < best->shift; ++t) seq.elements.push_back(first);
        }
        rec.witness = std::move(seq);
    }
    rec.lower = lo;
    rec.upper = hi;
    rec.status = exact ? Status::exact : Status::bounded;
    rec.trace = {"th:s_max_beta", "j=" + std::to_string(best_j)};
    if (!exact) {
        const auto led = bounds_ledger(LedgerQuery{Kind::s, m, d, std::nullopt});
        rec.trace.push_back("ledger");
        rec.notes.insert(rec.notes.end(), led.notes.begin(), led.notes.end());
        rec.upper = std::min(rec.upper, led.upper);
        if (led.lower > rec.lower) {
            rec.lower = led.lower;
            rec.witness.reset();
        }
        if (rec.lower == rec.upper) rec.status = Status::exact;
    }
    if (rec.witness && rec.witness->size() + 1 != rec.lower) rec.witness.reset();
    rec.notes.push_back(rec.name() + " = 1 + max_j(beta_{2[j,m]} + 2m - 2j), maximized at j=" +
                        std::to_string(best_j));
    return rec;
}

ConstantRecord s_direct_small(std::size_t m, std::size_t d) {
    if (m == 0) throw parameter_error("s_direct_small needs m >= 1");
    if (d > 4 || m > 3) throw guard_error("s_direct_small is limited to 2^d <= 16 and m <= 3");
    const std::size_t group = std::size_t{1} << d;
    const unsigned len = static_cast<unsigned>(2 * m);
    const unsigned cap = len - 1;
    SubsetCounts counts(group, len - 1);
    std::vector<unsigned> mult(group, 0);
    std::vector<u32> current;
    std::vector<u32> best;

    auto legal = [&](u32 v) { return mult[v] < cap && counts.count(len - 1, v) == 0; };
    // multisets in nondecreasing order, so each is visited once
    auto dfs = [&](auto&& self, u32 start) -> void {
        if (current.size() > best.size()) best = current;
        std::size_t room = 0;
        for (u32 u = start; u < group; ++u) {
            if (legal(u)) room += cap - mult[u];
        }
        if (current.size() + room <= best.size()) return;
        for (u32 u = start; u < group; ++u) {
            if (!legal(u)) continue;
            counts.add(u);
            ++mult[u];
            current.push_back(u);
            self(self, u);
            current.pop_back();
            --mult[u];
            counts.remove(u);
        }
    };
    dfs(dfs, 0);

    ConstantRecord rec;
    rec.kind = Kind::s;
    rec.m = m;
    rec.d = d;
    rec.lower = rec.upper = best.size() + 1;
    rec.status = Status::exact;
    rec.witness = set_from(d, best);
    if (!avoids_zero_sum_length(*rec.witness, len)) {
        throw std::logic_error("s_direct_small: extremal sequence failed revalidation");
    }
    rec.trace = {"search:multiset_exhaustive"};
    rec.notes = {rec.name() + " = " + std::to_string(rec.lower) + " by exhaustive multiset search"};
    return rec;
}

std::optional<std::uint64_t> closed_form_beta_small(std::size_t m, std::size_t d) {
    if (d == 0 || d >= 63 || m == 0) return std::nullopt;
    const u64 half = u64{1} << (d - 1);
    if (!(half <= 2 * m && 2 * m < 2 * half)) return std::nullopt;
    if (m + 2 == half) return 2 * m;
    return 2 * m + 2;
}

namespace {

// Extremal sequences behind the closed forms; empty when validation is out of reach.
std::optional<GroupSequence> closed_form_witness(std::size_t m, std::size_t d) {
    if (d > 16) return std::nullopt;
    if (d <= 2 * m) {
        return construct_extremal(Construction::gao_lower, {m, d, 2, std::nullopt}).elements;
    }
    if (d == 2 * m + 1 && m % 2 == 1) {
        auto base = construct_extremal(Construction::basis_plus_ones, {m, d - 1, 2, std::nullopt}).elements;
        base.elements.insert(base.elements.begin(), BitVector(d - 1));
        return construct_extremal(Construction::doubling, {m, d - 1, 2, base}).elements;
    }
    if (d == 2 * m + 1) {
        auto base = construct_extremal(Construction::gao_lower, {m, d - 1, 2, std::nullopt}).elements;
        return construct_extremal(Construction::lift, {m, d - 1, 2, base}).elements;
    }
    return std::nullopt;
}

}  // namespace

std::optional<ConstantRecord> closed_form_s(std::size_t m, std::size_t d) {
    if (m == 0) return std::nullopt;
    ConstantRecord rec;
    rec.kind = Kind::s;
    rec.m = m;
    rec.d = d;
    rec.status = Status::exact;
    u64 v = 0;
    if (d < 2 * m) {
        v = 2 * m + d;
        rec.trace = {"th:s_m_small"};
        rec.notes = {rec.name() + " = 2m + d = " + std::to_string(v) + " since d < 2m"};
    } else if (d == 2 * m) {
        v = 4 * m + 1;
        rec.trace = {"th:s_2m_2m"};
        rec.notes = {rec.name() + " = 4m + 1 = " + std::to_string(v)};
    } else if (d == 2 * m + 1 && m % 2 == 1) {
        v = 4 * m + 5;
        rec.trace = {"th:s_2m_2m_1_odd"};
        rec.notes = {rec.name() + " = 4m + 5 = " + std::to_string(v) + " for odd m"};
    } else if (d == 2 * m + 1) {
        v = 4 * m + 2;
        rec.trace = {"th:s_2m_2m_1_even"};
        rec.notes = {rec.name() + " = 4m + 2 = " + std::to_string(v) + " for even m"};
    } else if (m == 2 && d >= 4 && d <= 10) {
        const auto e = codes::n_table(d, 5);
        v = e.lower + 4;
        rec.trace = {"th:beta_s_4", "table:N(d;5)"};
        rec.notes = {rec.name() + " = N(" + std::to_string(d) + ",5) + 4 = " + std::to_string(e.lower) +
                     " + 4"};
    } else {
        return std::nullopt;
    }
    rec.lower = rec.upper = v;
    if (auto w = closed_form_witness(m, d)) {
        if (w->size() + 1 == v) rec.witness = std::move(*w);
    }
    return rec;
}

// ---------------------------------------------------------------- R

ConstantRecord r_from_s(std::size_t m, std::size_t n, Budget budget) {
    if (m == 0) throw parameter_error("r_from_s needs m >= 1");
    if (n + 1 < 2 * m) throw parameter_error("r_from_s needs n >= 2m - 1");
    Deadline deadline(budget);
    ConstantRecord rec;
    rec.kind = Kind::R;
    rec.m = m;
    rec.n = n;

    std::vector<ConstantRecord> facts;
    auto s_at = [&](std::size_t d) {
        if (auto c = closed_form_s(m, d)) return *c;
        auto led = bounds_ledger(LedgerQuery{Kind::s, m, d, std::nullopt}, facts);
        if (led.lower > n || led.upper <= n || d > kMaxDim) return led;
        // the ledger cannot place n; fall back to searching
        auto found = s_from_beta(m, d, deadline.remaining(0));
        found.lower = std::max(found.lower, led.lower);
        found.upper = std::min(found.upper, led.upper);
        if (found.lower == found.upper) found.status = Status::exact;
        facts.push_back(found);
        return found;
    };

    // R = min{d : s(d) > n}; s(d) >= 2m + d, so d = n + 1 is always enough
    std::optional<std::size_t> d_lo;  // smallest d with upper(s(d)) > n
    std::size_t d_hi = 0;             // smallest d with lower(s(d)) > n
    for (std::size_t d = 0;; ++d) {
        const auto s = s_at(d);
        rec.notes.push_back(s.name() + " in [" + std::to_string(s.lower) + ", " + std::to_string(s.upper) +
                            "] [" + join(s.trace, ',') + "]");
        for (const auto& t : s.trace) {
            if (std::find(rec.trace.begin(), rec.trace.end(), t) == rec.trace.end()) rec.trace.push_back(t);
        }
        if (!d_lo && s.upper > n) d_lo = d;
        if (s.lower > n) {
            d_hi = d;
            break;
        }
    }
    rec.lower = *d_lo;
    rec.upper = d_hi;
    rec.status = rec.lower == rec.upper ? Status::exact : Status::bounded;
    rec.trace.insert(rec.trace.begin(), "th:R_s");
    rec.notes.push_back(rec.name() + " = min{d : s_" + std::to_string(2 * m) + "(d) > " + std::to_string(n) + "}");
    return rec;
}

// ---------------------------------------------------------------- constructions

namespace {

GroupSequence basis(std::size_t d) {
    std::vector<BitVector> out;
    for (std::size_t i = 0; i < d; ++i) out.push_back(BitVector::unit(d, i));
    return {d, std::move(out)};
}

BitVector extend(const BitVector& v, bool last) {
    BitVector out(v.dim() + 1);
    for (std::size_t i = 0; i < v.dim(); ++i) out.set(i, v.get(i));
    out.set(v.dim(), last);
    return out;
}

// Runs the validator unless the DP tables would exceed the memory guard.
ConstructionResult finish(GroupSequence seq, const std::function<bool(const GroupSequence&)>& ok) {
    ConstructionResult res{std::move(seq), false};
    try {
        if (!ok(res.elements)) throw std::logic_error("construct_extremal: construction failed validation");
        res.validated = true;
    } catch (const guard_error&) {
        res.validated = false;
    }
    return res;
}

}  // namespace

ConstructionResult construct_extremal(Construction kind, const ConstructionParams& p) {
    const std::size_t m = p.m;
    if (m == 0) throw parameter_error("construct_extremal needs m >= 1");
    const auto input = [&]() -> const GroupSequence& {
        if (!p.input) throw parameter_error("construction needs an input sequence");
        return *p.input;
    };
    const auto avoid_len = [m](const GroupSequence& s) { return avoids_zero_sum_length(s, 2 * m); };
    const auto avoid_set = [](WeightSet w) {
        return [w](const GroupSequence& s) { return avoids_zero_sums(s, w); };
    };
    const auto mu = static_cast<unsigned>(m);

    switch (kind) {
        case Construction::gao_lower: {
            if (p.k != 2) throw parameter_error("gao_lower is implemented for k = 2 only");
            const std::size_t d = p.d;
            std::vector<BitVector> out(2 * m - 1, BitVector(d));
            for (const auto& e : basis(d).elements) out.push_back(e);
            if (2 * m <= d) out.push_back(BitVector::ones(d));
            return finish({d, std::move(out)}, avoid_len);
        }
        case Construction::lift: {
            const auto& s = input();
            std::vector<BitVector> out;
            for (const auto& v : s.elements) out.push_back(extend(v, false));
            out.push_back(BitVector::unit(s.d + 1, s.d));
            return finish({s.d + 1, std::move(out)}, avoid_len);
        }
        case Construction::doubling: {
            if (m % 2 == 0) throw parameter_error("doubling needs odd m");
            const auto& a = input();
            if (!avoids_zero_sums(a, WeightSet::even_range(1, mu))) {
                throw parameter_error("doubling input must avoid zero-sum subsets of sizes 2..2m");
            }
            std::vector<BitVector> out;
            for (const auto& v : a.elements) out.push_back(extend(v, false));
            for (const auto& v : a.elements) out.push_back(extend(v, true));
            return finish({a.d + 1, std::move(out)}, avoid_set(WeightSet::single(mu)));
        }
        case Construction::translation: {
            const auto& b = input();
            if (b.size() == 0) throw parameter_error("translation needs a nonempty set");
            if (!avoids_zero_sums(b, WeightSet::even_range(1, mu))) {
                throw parameter_error("translation input must avoid zero-sum subsets of sizes 2..2m");
            }
            const auto y = b.elements.front();
            std::vector<BitVector> out;
            for (std::size_t i = 1; i < b.size(); ++i) out.push_back(b.elements[i] + y);
            return finish({b.d, std::move(out)}, avoid_set(WeightSet::full(mu)));
        }
        case Construction::zero_total: {
            const std::size_t d = p.d;
            if (!closed_form_beta_small(m, d) || m + 2 == (std::size_t{1} << (d - 1))) {
                throw parameter_error("zero_total needs 2^(d-1) <= 2m < 2^d and m != 2^(d-1) - 2");
            }
            // complement of a zero-sum set of size q = 2^d - 2m - 2 (the group sums to zero)
            const u32 group = u32{1} << d;
            const u32 q = group - static_cast<u32>(2 * m) - 2;
            std::vector<bool> excluded(group, false);
            if (q > 0) {
                // q-2 small elements (skipping one) plus a pair closing the sum
                bool found = false;
                for (u32 skip = 0; skip + 1 < q && !found; ++skip) {
                    std::fill(excluded.begin(), excluded.end(), false);
                    u32 base = 0;
                    for (u32 i = 0; i + 1 < q; ++i) {
                        if (i == skip) continue;
                        excluded[i] = true;
                        base ^= i;
                    }
                    for (u32 t = 0; t < group && !found; ++t) {
                        const u32 last = base ^ t;
                        if (excluded[t] || last >= group || excluded[last] || last == t) continue;
                        excluded[t] = excluded[last] = true;
                        found = true;
                    }
                }
                if (!found) throw std::logic_error("zero_total: no complement found");
            }
            std::vector<u64> vals;
            for (u32 x = 0; x < group; ++x) {
                if (!excluded[x]) vals.push_back(x);
            }
            return finish(GroupSequence::from_values(d, vals), avoid_set(WeightSet::single(mu)));
        }
        case Construction::basis_plus_ones: {
            const std::size_t d = p.d;
            if (d < 2 * m) throw parameter_error("basis_plus_ones needs d >= 2m");
            auto s = basis(d);
            s.elements.push_back(BitVector::ones(d));
            return finish(std::move(s), avoid_set(WeightSet::full(mu)));
        }
        case Construction::two_heavy: {
            const std::size_t d = p.d;
            if (d < 3 * m) throw parameter_error("two_heavy needs d >= 3m");
            auto s = basis(d);
            BitVector x(d);
            BitVector y(d);
            for (std::size_t i = 0; i < 2 * m; ++i) x.set(i, true);
            for (std::size_t i = m; i < 3 * m; ++i) y.set(i, true);
            s.elements.push_back(x);
            s.elements.push_back(y);
            return finish(std::move(s), avoid_set(WeightSet::full(mu)));
        }
    }
    throw parameter_error("unknown construction");
}

// ---------------------------------------------------------------- ledger

namespace {

// s = s_{2m}(d); B = beta_{2m}(d); E = beta_{2[1,m]}(d); F = beta_{[1,2m]}(d) = N(d, 2m+1)
enum Q : int { S = 0, B = 1, E = 2, F = 3 };

struct Ref {
    Q q;
    std::size_t m;
    std::size_t d;
    bool upper;
};

struct Bound {
    std::int64_t value = 0;
    std::string tag;
    std::vector<Ref> deps;
};

class Ledger {
public:
    Ledger(std::size_t mmax, std::size_t dmax)
        : mmax_(mmax), dmax_(dmax), cells_(4 * (mmax + 1) * (dmax + 1)), hamming_((mmax + 1) * (dmax + 1), 0) {
        for (std::size_t m = 1; m <= mmax_; ++m) {
            for (std::size_t d = 1; d <= dmax_; ++d) {
                hamming_[m * (dmax_ + 1) + d] =
                    static_cast<std::int64_t>(std::min<u64>(codes::hamming_max_length(d, m), pow2(d)));
            }
        }
        for (int q = 0; q < 4; ++q) {
            for (std::size_t m = 1; m <= mmax_; ++m) {
                for (std::size_t d = 0; d <= dmax_; ++d) {
                    auto& c = cell(static_cast<Q>(q), m, d);
                    const auto group = static_cast<std::int64_t>(pow2(d));
                    c.lo = {0, "trivial:nonnegative", {}};
                    switch (q) {
                        case S: c.hi = {group * static_cast<std::int64_t>(2 * m - 1) + 1, "trivial:pigeonhole", {}}; break;
                        case F: c.hi = {group - 1, "trivial:nonzero_elements", {}}; break;
                        default: c.hi = {group, "trivial:group_size", {}}; break;
                    }
                }
            }
        }
    }

    void raise(Q q, std::size_t m, std::size_t d, std::int64_t v, const char* tag, std::vector<Ref> deps = {}) {
        if (!in(m, d)) return;
        auto& c = cell(q, m, d);
        if (v <= c.lo.value) return;
        c.lo = {v, tag, std::move(deps)};
        changed_ = true;
        check(q, m, d);
    }

    void lower(Q q, std::size_t m, std::size_t d, std::int64_t v, const char* tag, std::vector<Ref> deps = {}) {
        if (!in(m, d)) return;
        auto& c = cell(q, m, d);
        if (v >= c.hi.value) return;
        c.hi = {v, tag, std::move(deps)};
        changed_ = true;
        check(q, m, d);
    }

    void fix(Q q, std::size_t m, std::size_t d, std::int64_t v, const char* tag, std::vector<Ref> deps = {}) {
        raise(q, m, d, v, tag, deps);
        lower(q, m, d, v, tag, std::move(deps));
    }

    std::int64_t lo(Q q, std::size_t m, std::size_t d) const { return cell(q, m, d).lo.value; }
    std::int64_t hi(Q q, std::size_t m, std::size_t d) const { return cell(q, m, d).hi.value; }

    void run(const std::vector<ConstantRecord>& facts) {
        do {
            changed_ = false;
            for (const auto& f : facts) apply_fact(f);
            for (std::size_t m = 1; m <= mmax_; ++m) {
                for (std::size_t d = 0; d <= dmax_; ++d) apply_rules(m, d);
            }
        } while (changed_);
    }

    std::vector<std::string> explain(Q q, std::size_t m, std::size_t d) const {
        std::vector<std::string> out;
        std::set<std::tuple<int, std::size_t, std::size_t, bool>> seen;
        auto visit = [&](auto&& self, const Ref& r) -> void {
            if (!seen.insert({r.q, r.m, r.d, r.upper}).second) return;
            const auto& b = r.upper ? cell(r.q, r.m, r.d).hi : cell(r.q, r.m, r.d).lo;
            for (const auto& dep : b.deps) self(self, dep);
            out.push_back(label(r.q, r.m, r.d) + (r.upper ? " <= " : " >= ") + std::to_string(b.value) + "  [" +
                          b.tag + "]");
        };
        visit(visit, Ref{q, m, d, false});
        visit(visit, Ref{q, m, d, true});
        return out;
    }

    std::vector<std::string> tags(Q q, std::size_t m, std::size_t d) const {
        std::vector<std::string> out;
        std::set<std::tuple<int, std::size_t, std::size_t, bool>> seen;
        auto visit = [&](auto&& self, const Ref& r) -> void {
            if (!seen.insert({r.q, r.m, r.d, r.upper}).second) return;
            const auto& b = r.upper ? cell(r.q, r.m, r.d).hi : cell(r.q, r.m, r.d).lo;
            for (const auto& dep : b.deps) self(self, dep);
            if (std::find(out.begin(), out.end(), b.tag) == out.end()) out.push_back(b.tag);
        };
        visit(visit, Ref{q, m, d, false});
        visit(visit, Ref{q, m, d, true});
        return out;
    }

    static std::string label(Q q, std::size_t m, std::size_t d) {
        const auto dd = "(" + std::to_string(d) + ")";
        switch (q) {
            case S: return "s_" + std::to_string(2 * m) + dd;
            case B: return "beta_" + std::to_string(2 * m) + dd;
            case E: return "beta_2[1," + std::to_string(m) + "]" + dd;
            case F: return "beta_[1," + std::to_string(2 * m) + "]" + dd;
        }
        return "?";
    }

private:
    struct Cell {
        Bound lo;
        Bound hi;
    };

    bool in(std::size_t m, std::size_t d) const { return m >= 1 && m <= mmax_ && d <= dmax_; }

    Cell& cell(Q q, std::size_t m, std::size_t d) { return cells_[(q * (mmax_ + 1) + m) * (dmax_ + 1) + d]; }
    const Cell& cell(Q q, std::size_t m, std::size_t d) const {
        return cells_[(q * (mmax_ + 1) + m) * (dmax_ + 1) + d];
    }

    void check(Q q, std::size_t m, std::size_t d) const {
        const auto& c = cell(q, m, d);
        if (c.lo.value > c.hi.value) {
            throw ledger_error("bounds ledger inconsistency for " + label(q, m, d) + ": lower " +
                               std::to_string(c.lo.value) + " [" + c.lo.tag + "] exceeds upper " +
                               std::to_string(c.hi.value) + " [" + c.hi.tag + "]");
        }
    }

    static Ref L(Q q, std::size_t m, std::size_t d) { return {q, m, d, false}; }
    static Ref U(Q q, std::size_t m, std::size_t d) { return {q, m, d, true}; }

    void apply_fact(const ConstantRecord& f) {
        const char* tag = f.kind == Kind::s || f.kind == Kind::beta ? (f.exact() ? "cache:exact" : "cache:bounded")
                                                                     : "cache";
        const auto lo = static_cast<std::int64_t>(f.lower);
        const auto hi = static_cast<std::int64_t>(f.upper);
        auto put = [&](Q q, std::size_t m, std::size_t d) {
            raise(q, m, d, lo, tag);
            lower(q, m, d, hi, tag);
        };
        if (f.kind == Kind::s) {
            put(S, f.m, f.d);
        } else if (f.kind == Kind::beta && f.weights) {
            const auto& w = *f.weights;
            const unsigned m = w.max() / 2;
            if (w.max() % 2 != 0) return;
            if (w == WeightSet::single(m)) put(B, m, f.d);
            if (w == WeightSet::even_range(1, m) || (m >= 2 && w == WeightSet::even_range(2, m))) put(E, m, f.d);
            if (w == WeightSet::full(m)) put(F, m, f.d);
        } else if (f.kind == Kind::N && f.delta % 2 == 1 && f.delta >= 3) {
            put(F, (f.delta - 1) / 2, f.d);
        }
    }

    void apply_rules(std::size_t m, std::size_t d) {
        const auto mi = static_cast<std::int64_t>(m);
        const auto di = static_cast<std::int64_t>(d);
        const auto group = static_cast<std::int64_t>(pow2(d));

        // whole group
        if (m == 1 || 2 * m > pow2(d)) fix(B, m, d, group, "trivial:beta_whole_group");
        if (m == 1) fix(E, m, d, group, "trivial:beta_whole_group");
        if (m == 1 && d >= 1) fix(F, m, d, group - 1, "table:N(r;3)");

        // codes: th:beta_123_2m / table / Hamming / BCH / basis
        if (m == 2 && d >= 4 && d <= 14) {
            const auto e = codes::n_table(d, 5);
            raise(F, m, d, static_cast<std::int64_t>(e.lower), "table:N(d;5)");
            lower(F, m, d, static_cast<std::int64_t>(e.upper), "table:N(d;5)");
        }
        if (d >= 1) {
            lower(F, m, d, hamming_[m * (dmax_ + 1) + d], "eq:Hamming");
            raise(F, m, d, di, "eq:basis");
        }
        if (d >= 2 * m) raise(F, m, d, di + 1, "eq:even_beta_1");
        if (d >= 3 * m) raise(F, m, d, di + 2, "eq:even_beta_2");
        if (d % m == 0 && d / m >= 3 && d / m < 63) {
            const u64 len = pow2(d / m) - 1;
            if (2 * m + 1 <= len) raise(F, m, d, static_cast<std::int64_t>(len), "eq:BCH");
        }
        if (d >= 1) {
            raise(F, m, d, lo(F, m, d - 1), "trivial:embed", {L(F, m, d - 1)});
            raise(E, m, d, lo(E, m, d - 1), "trivial:embed", {L(E, m, d - 1)});
            raise(B, m, d, lo(B, m, d - 1), "trivial:embed", {L(B, m, d - 1)});
        }

        // th:beta_24_2m
        raise(E, m, d, lo(F, m, d) + 1, "th:beta_24_2m", {L(F, m, d)});
        lower(E, m, d, hi(F, m, d) + 1, "th:beta_24_2m", {U(F, m, d)});
        raise(F, m, d, lo(E, m, d) - 1, "th:beta_24_2m", {L(E, m, d)});
        lower(F, m, d, hi(E, m, d) - 1, "th:beta_24_2m", {U(E, m, d)});

        // {2m} is a subset of 2[1,m]
        raise(B, m, d, lo(E, m, d), "trivial:weight_subset", {L(E, m, d)});
        if (m == 2) {
            // pairs are never zero-sum in a set, so beta_4 = beta_{2,4}
            lower(B, m, d, hi(E, m, d), "def:pairs_vacuous", {U(E, m, d)});
        }

        // th:beta_d_small
        if (auto v = closed_form_beta_small(m, d)) fix(B, m, d, static_cast<std::int64_t>(*v), "th:beta_d_small");

        // th:beta_d-1 and cor:s_lower3
        if (m % 2 == 1 && d >= 1) {
            raise(B, m, d, 2 * lo(E, m, d - 1), "th:beta_d-1", {L(E, m, d - 1)});
            const auto cap = std::min<std::int64_t>(lo(E, m, d - 1), mi + static_cast<std::int64_t>(mmax_));
            for (std::int64_t b = mi + 1; b <= cap; ++b) {
                if (b % 2 != 0) continue;
                const auto target = static_cast<std::size_t>(b - mi);
                raise(B, target, d, 2 * b, "th:beta_d-1", {L(E, m, d - 1)});
            }
            if (d >= 2 * m + 1) raise(B, m, d, 2 * di + 2, "cor:s_lower3");
            if (d >= 3 * m + 1) raise(B, m, d, 2 * di + 4, "cor:s_lower3");
        }

        // lem:beta_2_beta
        if (m >= 2 && d >= 1) {
            lower(E, m, d, std::max<std::int64_t>(9, 2 * hi(E, m, d - 1) - 4), "lem:beta_2_beta", {U(E, m, d - 1)});
        }

        // eq:beta_s_beta
        raise(S, m, d, lo(B, m, d) + 1, "eq:beta_s_beta", {L(B, m, d)});
        lower(S, m, d, hi(B, m, d) + 2 * mi - 1, "eq:beta_s_beta", {U(B, m, d)});
        raise(B, m, d, lo(S, m, d) - 2 * mi + 1, "eq:beta_s_beta", {L(S, m, d)});
        lower(B, m, d, hi(S, m, d) - 1, "eq:beta_s_beta", {U(S, m, d)});

        // th:s_max_beta, j = 1 term
        raise(S, m, d, lo(E, m, d) + 2 * mi - 1, "th:s_max_beta", {L(E, m, d)});
        lower(E, m, d, hi(S, m, d) - 2 * mi + 1, "th:s_max_beta", {U(S, m, d)});

        // eq:recursive
        if (d >= 1) {
            raise(S, m, d, lo(S, m, d - 1) + 1, "eq:recursive", {L(S, m, d - 1)});
            lower(S, m, d - 1, hi(S, m, d) - 1, "eq:recursive", {U(S, m, d)});
        }

        // eq:s_lower, eq:s_lower2
        raise(S, m, d, 2 * mi + di, "eq:s_lower");
        if (2 * m <= d) raise(S, m, d, 2 * mi + di + 1, "eq:s_lower2");

        // closed forms
        if (d < 2 * m) fix(S, m, d, 2 * mi + di, "th:s_m_small");
        if (d == 2 * m) fix(S, m, d, 4 * mi + 1, "th:s_2m_2m");
        if (d == 2 * m + 1) {
            if (m % 2 == 1) {
                fix(S, m, d, 4 * mi + 5, "th:s_2m_2m_1_odd");
            } else {
                fix(S, m, d, 4 * mi + 2, "th:s_2m_2m_1_even");
            }
        }

        // th:beta_s_4
        if (m == 2) {
            raise(S, m, d, lo(B, m, d) + 3, "th:beta_s_4", {L(B, m, d)});
            lower(S, m, d, hi(B, m, d) + 3, "th:beta_s_4", {U(B, m, d)});
            raise(B, m, d, lo(S, m, d) - 3, "th:beta_s_4", {L(S, m, d)});
            lower(B, m, d, hi(S, m, d) - 3, "th:beta_s_4", {U(S, m, d)});
        }
        // th:beta_s_6
        if (m == 3 && d >= 3) {
            lower(S, m, d, hi(B, m, d) + 1, "th:beta_s_6", {U(B, m, d)});
            raise(B, m, d, lo(S, m, d) - 1, "th:beta_s_6", {L(S, m, d)});
        }
        // th:beta_odd
        if (m >= 3 && m % 2 == 1 && d + 3 >= 2 * m && d <= 2 * m + 1) {
            lower(S, m, d, hi(B, m, d) + 1, "th:beta_odd", {U(B, m, d)});
            raise(B, m, d, lo(S, m, d) - 1, "th:beta_odd", {L(S, m, d)});
        }
        // obs:2m_2m-2
        if (m >= 2 && lo(S, m, d) - hi(S, m - 1, d) >= 3) {
            raise(B, m, d, lo(S, m, d) - 1, "obs:2m_2m-2", {L(S, m, d), U(S, m - 1, d)});
            lower(S, m, d, hi(B, m, d) + 1, "obs:2m_2m-2", {U(B, m, d), U(S, m - 1, d)});
        }
    }

    std::size_t mmax_;
    std::size_t dmax_;
    std::vector<Cell> cells_;
    std::vector<std::int64_t> hamming_;
    bool changed_ = false;
};

}  // namespace

ConstantRecord bounds_ledger(const LedgerQuery& q, const std::vector<ConstantRecord>& facts) {
    if (q.m == 0) throw parameter_error("bounds_ledger needs m >= 1");
    if (q.d > 40) throw guard_error("bounds_ledger is limited to d <= 40");
    ConstantRecord rec;
    rec.kind = q.kind;
    rec.m = q.m;
    rec.d = q.d;
    Q cellq = S;
    std::optional<Q> upper_cell;  // for W = 2[j,m] with 2 < j < m: between E and B
    if (q.kind == Kind::beta) {
        if (!q.weights) throw parameter_error("bounds_ledger: beta query needs a weight set");
        const auto& w = *q.weights;
        rec.weights = w;
        const unsigned m = w.max() / 2;
        if (w.max() % 2 != 0 || m != q.m) throw parameter_error("bounds_ledger: weight set does not match m");
        if (w == WeightSet::single(m) || (m == 2 && w == WeightSet::even_range(2, m))) {
            cellq = B;
        } else if (w == WeightSet::even_range(1, m) || (m >= 2 && w == WeightSet::even_range(2, m))) {
            cellq = E;
        } else if (w == WeightSet::full(m)) {
            cellq = F;
        } else {
            bool range = false;
            for (unsigned j = 3; j < m; ++j) range = range || w == WeightSet::even_range(j, m);
            if (!range) throw parameter_error("bounds_ledger: unsupported weight set " + w.to_string());
            cellq = E;
            upper_cell = B;
        }
    } else if (q.kind != Kind::s) {
        throw parameter_error("bounds_ledger answers s and beta queries");
    }

    std::size_t mmax = q.m + 2;
    std::size_t dmax = q.d + 2;
    for (const auto& f : facts) {
        if (f.kind == Kind::s) {
            mmax = std::max(mmax, f.m);
            dmax = std::max(dmax, f.d);
        }
    }
    Ledger ledger(std::min<std::size_t>(mmax, 24), std::min<std::size_t>(dmax, 42));
    ledger.run(facts);

    rec.lower = static_cast<u64>(ledger.lo(cellq, q.m, q.d));
    rec.upper = static_cast<u64>(ledger.hi(upper_cell.value_or(cellq), q.m, q.d));
    rec.status = rec.lower == rec.upper ? Status::exact : Status::bounded;
    rec.notes = ledger.explain(cellq, q.m, q.d);
    rec.trace = ledger.tags(cellq, q.m, q.d);
    if (upper_cell) {
        for (const auto& line : ledger.explain(*upper_cell, q.m, q.d)) rec.notes.push_back(line);
        rec.notes.push_back(rec.name() + " lies between " + Ledger::label(E, q.m, q.d) + " and " +
                            Ledger::label(B, q.m, q.d));
        rec.trace.push_back("trivial:weight_subset");
    }
    return rec;
}

// ---------------------------------------------------------------- cache

std::string to_hex(const BitVector& v) {
    static constexpr char kDigits[] = "0123456789abcdef";
    const std::size_t digits = std::max<std::size_t>(1, (v.dim() + 3) / 4);
    std::string out(digits, '0');
    for (std::size_t k = 0; k < digits; ++k) {
        unsigned nib = 0;
        for (std::size_t b = 0; b < 4; ++b) {
            const std::size_t i = 4 * k + b;
            if (i < v.dim() && v.get(i)) nib |= 1U << b;
        }
        out[digits - 1 - k] = kDigits[nib];
    }
    return out;
}

BitVector from_hex(const std::string& hex, std::size_t dim) {
    if (hex.empty() || hex.size() > std::max<std::size_t>(1, (dim + 3) / 4)) {
        throw gf2::parse_error("bad hex vector '" + hex + "' for dimension " + std::to_string(dim));
    }
    BitVector v(dim);
    for (std::size_t k = 0; k < hex.size(); ++k) {
        const char c = hex[hex.size() - 1 - k];
        unsigned nib = 0;
        if (c >= '0' && c <= '9') {
            nib = static_cast<unsigned>(c - '0');
        } else if (c >= 'a' && c <= 'f') {
            nib = static_cast<unsigned>(c - 'a' + 10);
        } else if (c >= 'A' && c <= 'F') {
            nib = static_cast<unsigned>(c - 'A' + 10);
        } else {
            throw gf2::parse_error("bad hex digit in '" + hex + "'");
        }
        for (std::size_t b = 0; b < 4; ++b) {
            if (!(nib >> b & 1U)) continue;
            const std::size_t i = 4 * k + b;
            if (i >= dim) throw gf2::parse_error("hex vector '" + hex + "' exceeds dimension");
            v.set(i, true);
        }
    }
    return v;
}

namespace {

std::size_t witness_dim(const ConstantRecord& rec) {
    switch (rec.kind) {
        case Kind::R: return static_cast<std::size_t>(rec.upper);
        default: return rec.d;
    }
}

}  // namespace

std::string format_record(const ConstantRecord& rec) {
    std::string witness = "-";
    if (rec.witness) {
        std::vector<std::string> parts;
        for (const auto& v : rec.witness->elements) parts.push_back(to_hex(v));
        witness = parts.empty() ? "-" : join(parts, ';');
    }
    return to_string(rec.kind) + '\t' + rec.parameters() + '\t' + std::to_string(rec.lower) + '\t' +
           std::to_string(rec.upper) + '\t' + to_string(rec.status) + '\t' + witness + '\t' +
           (rec.trace.empty() ? "-" : join(rec.trace, ','));
}

ConstantRecord parse_record(const std::string& line) {
    const auto fields = split(line, '\t');
    if (fields.size() != 7) {
        throw gf2::parse_error("cache record needs 7 tab-separated fields, got " + std::to_string(fields.size()));
    }
    ConstantRecord rec;
    const auto& kind = fields[0];
    if (kind == "beta") {
        rec.kind = Kind::beta;
    } else if (kind == "s") {
        rec.kind = Kind::s;
    } else if (kind == "R") {
        rec.kind = Kind::R;
    } else if (kind == "N") {
        rec.kind = Kind::N;
    } else {
        throw gf2::parse_error("unknown record kind '" + kind + "'");
    }
    try {
        for (const auto& kv : split(fields[1], ';')) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) throw gf2::parse_error("bad parameter '" + kv + "'");
            const auto key = kv.substr(0, eq);
            const auto val = kv.substr(eq + 1);
            if (key == "W") {
                rec.weights = WeightSet::parse(val);
            } else if (key == "m") {
                rec.m = parse_size(val);
            } else if (key == "d" || key == "r") {
                rec.d = parse_size(val);
            } else if (key == "n") {
                rec.n = parse_size(val);
            } else if (key == "delta") {
                rec.delta = parse_size(val);
            } else {
                throw gf2::parse_error("unknown parameter '" + key + "'");
            }
        }
        rec.lower = parse_size(fields[2]);
        rec.upper = parse_size(fields[3]);
    } catch (const std::invalid_argument& e) {
        throw gf2::parse_error(std::string("bad cache record: ") + e.what());
    } catch (const std::out_of_range& e) {
        throw gf2::parse_error(std::string("bad cache record: ") + e.what());
    }
    if (rec.kind == Kind::beta && !rec.weights) throw gf2::parse_error("beta record without W");
    if (fields[4] == "exact") {
        rec.status = Status::exact;
    } else if (fields[4] == "bounded") {
        rec.status = Status::bounded;
    } else {
        throw gf2::parse_error("unknown status '" + fields[4] + "'");
    }
    if (rec.lower > rec.upper || (rec.exact() && rec.lower != rec.upper)) {
        throw gf2::parse_error("inconsistent bounds in cache record");
    }
    if (fields[5] != "-") {
        const auto dim = witness_dim(rec);
        if (dim > kMaxDim) throw gf2::parse_error("witness dimension too large");
        std::vector<BitVector> elems;
        for (const auto& h : split(fields[5], ';')) elems.push_back(from_hex(h, dim));
        rec.witness = GroupSequence(dim, std::move(elems));
    }
    if (fields[6] != "-") rec.trace = split(fields[6], ',');
    return rec;
}

void ConstantCache::append(const ConstantRecord& rec) const {
    std::ofstream out(path_, std::ios::app);
    if (!out) throw std::runtime_error("cannot open cache file " + path_);
    out << format_record(rec) << '\n';
}

std::vector<ConstantRecord> ConstantCache::load() const {
    std::vector<ConstantRecord> out;
    std::ifstream in(path_);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        try {
            out.push_back(parse_record(line));
        } catch (const gf2::parse_error&) {
            // unparseable lines are reported by check(), never trusted
        }
    }
    return out;
}

std::vector<ConstantRecord> ConstantCache::load_trusted() const {
    std::vector<ConstantRecord> out;
    for (auto& rec : load()) {
        if (rec.exact() && rec.witness && validate_witness(rec)) out.push_back(std::move(rec));
    }
    return out;
}

std::vector<CacheCheck> ConstantCache::check() const {
    std::vector<CacheCheck> out;
    std::ifstream in(path_);
    if (!in) return out;
    std::string line;
    std::size_t no = 0;
    while (std::getline(in, line)) {
        ++no;
        if (line.empty() || line[0] == '#') continue;
        CacheCheck c{no, false, {}};
        try {
            const auto rec = parse_record(line);
            if (!rec.witness) {
                c.ok = true;
                c.message = rec.name() + ": no witness to revalidate";
            } else if (validate_witness(rec)) {
                c.ok = true;
                c.message = rec.name() + ": witness revalidated";
            } else {
                c.message = rec.name() + ": witness fails revalidation";
            }
        } catch (const std::exception& e) {
            c.message = std::string("unparseable record: ") + e.what();
        }
        out.push_back(std::move(c));
    }
    return out;
}

}  // namespace egz::zerosum
