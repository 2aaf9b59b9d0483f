// Command-line front end: constants, witnesses, property batches, tables, cache.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "egz/codes.hpp"
#include "egz/suites.hpp"
#include "egz/witness.hpp"
#include "egz/zerosum.hpp"

namespace zs = egz::zerosum;
namespace wt = egz::witness;
namespace codes = egz::codes;
using egz::gf2::BitMatrix;

namespace {

struct Options {
    std::string cache_path = "egz-cache.tsv";
    bool no_cache = false;
    std::uint64_t seed = 1;
    double seconds = 600;
    std::uint64_t max_nodes = 0;  // 0 = no node limit

    [[nodiscard]] zs::Budget budget() const {
        zs::Budget b = zs::Budget::seconds(seconds);
        if (max_nodes > 0) b.max_nodes = max_nodes;
        return b;
    }
};

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    return out;
}

void kv(const std::string& key, const std::string& value) {
    std::cout << key << '\t' << value << '\n';
}

std::string summary(const zs::ConstantRecord& rec) {
    if (rec.exact()) return rec.name() + " = " + std::to_string(rec.lower) + " (exact)";
    return rec.name() + " in [" + std::to_string(rec.lower) + ", " + std::to_string(rec.upper) +
           "] (bounded)";
}

void remember(const Options& opt, const zs::ConstantRecord& rec) {
    if (opt.no_cache || !rec.exact()) return;
    zs::ConstantCache(opt.cache_path).append(rec);
}

void report(const Options& opt, const zs::ConstantRecord& rec) {
    const auto fields = split(zs::format_record(rec), '\t');
    kv("quantity", rec.name());
    kv("kind", zs::to_string(rec.kind));
    kv("params", fields.at(1));
    kv("lower", std::to_string(rec.lower));
    kv("upper", std::to_string(rec.upper));
    kv("status", zs::to_string(rec.status));
    kv("witness", fields.at(5));
    std::cout << "trace:\n";
    for (const auto& t : rec.trace) std::cout << "  " << t << '\n';
    for (const auto& n : rec.notes) std::cout << "  | " << n << '\n';
    std::cout << summary(rec) << '\n';
    remember(opt, rec);
}

BitMatrix read_matrix_file(const std::string& path) {
    if (path == "-") return egz::gf2::read_matrix(std::cin);
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return egz::gf2::read_matrix(in);
}

zs::ConstantRecord s_value(std::size_t m, std::size_t d, const std::string& method,
                           const Options& opt) {
    if (method == "direct") return zs::s_direct_small(m, d);
    if (method == "closed") {
        auto c = zs::closed_form_s(m, d);
        if (!c) throw std::invalid_argument("no closed form for these parameters");
        return *c;
    }
    if (method == "auto") {
        if (auto c = zs::closed_form_s(m, d)) return *c;
    }
    return zs::s_from_beta(m, d, opt.budget());
}

int cmd_table_s4(const Options& opt, std::size_t max_d) {
    std::cout << "d\ts_4(d)\tstatus\tN(d,5)+4\n";
    for (std::size_t d = 1; d <= max_d; ++d) {
        const auto rec = zs::s_from_beta(2, d, opt.budget());
        std::string code = "-";
        if (d >= 4 && d <= 14) {
            const auto e = codes::n_table(d, 5);
            code = e.exact() ? std::to_string(e.lower + 4)
                             : std::to_string(e.lower + 4) + "-" + std::to_string(e.upper + 4);
        }
        const std::string value = rec.exact() ? std::to_string(rec.lower)
                                              : std::to_string(rec.lower) + "-" +
                                                    std::to_string(rec.upper);
        std::cout << d << '\t' << value << '\t' << zs::to_string(rec.status) << '\t' << code
                  << '\n';
        remember(opt, rec);
    }
    return 0;
}

int cmd_table_n5() {
    std::cout << "r\tN(r,5)\thamming\n";
    for (std::size_t r = 4; r <= 14; ++r) {
        const auto e = codes::n_table(r, 5);
        const std::string value = e.exact() ? std::to_string(e.lower)
                                            : std::to_string(e.lower) + "-" +
                                                  std::to_string(e.upper);
        std::cout << r << '\t' << value << '\t' << codes::hamming_max_length(r, 2) << '\n';
    }
    return 0;
}

int cmd_witness(std::size_t m, const std::string& path) {
    const auto seq = zs::GroupSequence::from_matrix(read_matrix_file(path));
    kv("d", std::to_string(seq.d));
    kv("length", std::to_string(seq.size()));
    kv("target", std::to_string(2 * m));
    try {
        const auto e = wt::extract_zero_sum_traced(seq, m);
        std::string pos, elems;
        for (auto i : e.witness.indices) {
            pos += (pos.empty() ? "" : ",") + std::to_string(i + 1);
            elems += (elems.empty() ? "" : ";") + zs::to_hex(seq.elements[i]);
        }
        kv("status", "found");
        kv("route", wt::to_string(e.route));
        kv("positions", pos);
        kv("elements", elems);
        std::cout << "zero-sum subsequence of length " << 2 * m << " at positions " << pos
                  << '\n';
    } catch (const wt::absent_error& e) {
        kv("status", "absent");
        std::cout << e.what() << '\n';
    }
    return 0;
}

int cmd_verify(const std::string& name, std::size_t trials, std::uint64_t seed) {
    std::vector<std::string> names;
    if (name == "all") {
        names = egz::suites::suite_names();
    } else {
        names = {name};
    }
    bool ok = true;
    for (const auto& n : names) {
        const auto r = egz::suites::run_suite(n, trials, seed);
        kv("suite", r.name);
        kv("instances", std::to_string(r.instances));
        kv("passed", std::to_string(r.passed));
        if (!r.first_failure.empty()) kv("first_failure", r.first_failure);
        std::cout << r.name << ": " << r.passed << "/" << r.instances << " passed\n";
        ok = ok && r.ok();
    }
    return ok ? 0 : 1;
}

int cmd_mw_check(const std::string& path, bool generator) {
    const BitMatrix m = read_matrix_file(path);
    const auto code = generator ? codes::LinearCode::from_generator(m) : codes::LinearCode(m);
    const auto a = codes::weight_distribution(code);
    const auto b = codes::weight_distribution(codes::dual(code));
    auto join = [](const std::vector<std::uint64_t>& v) {
        std::string s;
        for (auto x : v) s += (s.empty() ? "" : ",") + std::to_string(x);
        return s;
    };
    const bool ok = codes::verify_macwilliams(a, b, code.length(), code.dimension());
    kv("n", std::to_string(code.length()));
    kv("k", std::to_string(code.dimension()));
    kv("A", join(a.counts));
    kv("B", join(b.counts));
    const auto dist = codes::min_distance(code);
    kv("min_distance", dist ? std::to_string(*dist) : "inf");
    std::cout << "MacWilliams identities " << (ok ? "hold" : "FAIL") << '\n';
    return ok ? 0 : 1;
}

int cmd_cache_check(const Options& opt) {
    const auto results = zs::ConstantCache(opt.cache_path).check();
    std::size_t bad = 0;
    for (const auto& r : results) {
        std::cout << "line " << r.line << '\t' << (r.ok ? "ok" : "FAIL") << '\t' << r.message
                  << '\n';
        bad += r.ok ? 0 : 1;
    }
    std::cout << "cache " << opt.cache_path << ": " << results.size() - bad << "/"
              << results.size() << " records valid\n";
    return bad == 0 ? 0 : 1;
}

// Evidence only: each d is compared with the conjectured value.
int cmd_test_conjecture(const Options& opt, const std::string& which, std::size_t m) {
    const bool odd = which == "odd";
    if (odd != (m % 2 == 1)) {
        throw std::invalid_argument("the " + which + " conjecture needs " +
                                    (odd ? "odd" : "even") + " m");
    }
    const std::size_t lo = 2 * m + 1;
    const std::size_t hi = odd ? 3 * m : 3 * m - 1;
    std::size_t agree = 0, against = 0, open = 0;
    for (std::size_t d = lo; d <= hi; ++d) {
        const std::uint64_t predicted = odd ? 2 * d + 3 : d + 2 * m + 1;
        auto rec = zs::closed_form_s(m, d);
        if (!rec) rec = zs::s_from_beta(m, d, opt.budget());
        std::string verdict;
        if (rec->lower <= predicted && predicted <= rec->upper) {
            verdict = rec->exact() ? "consistent" : "undecided";
        } else {
            verdict = "contradicts";
        }
        if (verdict == "consistent") ++agree;
        if (verdict == "contradicts") ++against;
        if (verdict == "undecided") ++open;
        std::cout << rec->name() << '\t' << rec->lower << '\t' << rec->upper << '\t'
                  << zs::to_string(rec->status) << "\tpredicted " << predicted << '\t' << verdict
                  << '\n';
        remember(opt, *rec);
    }
    std::cout << "evidence: " << agree << " consistent, " << against << " contradicting, "
              << open << " undecided (evidence, not proof)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Zero-sum constants of Z_2^d and linear codes without a forbidden weight"};
    app.require_subcommand(1);
    app.fallthrough();
    Options opt;
    app.add_option("--cache", opt.cache_path, "constant cache file")->capture_default_str();
    app.add_flag("--no-cache", opt.no_cache, "do not append results to the cache");
    app.add_option("--seed", opt.seed, "seed for randomized verbs")->capture_default_str();
    app.add_option("--seconds", opt.seconds, "wall-clock budget per search")
        ->capture_default_str();
    app.add_option("--max-nodes", opt.max_nodes, "node budget per search (0 = none)");

    int status = 0;

    auto* beta = app.add_subcommand("beta", "largest set avoiding zero-sum subsets of sizes in W");
    std::string weights;
    std::size_t d = 0;
    beta->add_option("-W,--weights", weights, "comma-separated sizes, e.g. 2,4")->required();
    beta->add_option("-d", d, "dimension")->required();
    beta->callback([&] { report(opt, zs::beta_search(zs::WeightSet::parse(weights), d, opt.budget())); });

    auto* s = app.add_subcommand("s-const", "s_{2m}(d)");
    std::size_t m = 0;
    std::string method = "auto";
    s->add_option("-m", m, "half the subsequence length")->required();
    s->add_option("-d", d, "dimension")->required();
    s->add_option("--method", method, "auto, closed, search or direct")
        ->check(CLI::IsMember({"auto", "closed", "search", "direct"}))
        ->capture_default_str();
    s->callback([&] { report(opt, s_value(m, d, method, opt)); });

    auto* r = app.add_subcommand("r-const", "R_{2m}(n)");
    std::size_t n = 0;
    r->add_option("-m", m, "half the forbidden weight")->required();
    r->add_option("-n", n, "code length")->required();
    r->callback([&] { report(opt, zs::r_from_s(m, n, opt.budget())); });

    auto* w = app.add_subcommand("witness", "zero-sum subsequence of length 2m");
    std::string seq_path;
    w->add_option("-m", m, "half the subsequence length")->required();
    w->add_option("--seq", seq_path, "matrix file whose columns form the sequence, - for stdin")
        ->required();
    w->callback([&] { status = cmd_witness(m, seq_path); });

    auto* b = app.add_subcommand("bounds", "bounds ledger for s_{2m}(d) or beta_W(d)");
    std::string kind = "s";
    b->add_option("-m", m, "half the weight")->required();
    b->add_option("-d", d, "dimension")->required();
    b->add_option("--kind", kind, "s or beta")->check(CLI::IsMember({"s", "beta"}));
    b->add_option("-W,--weights", weights, "weight set for --kind beta (default {2m})");
    b->callback([&] {
        zs::LedgerQuery q{kind == "s" ? zs::Kind::s : zs::Kind::beta, m, d, std::nullopt};
        if (q.kind == zs::Kind::beta) {
            q.weights = weights.empty() ? zs::WeightSet::single(m) : zs::WeightSet::parse(weights);
        }
        std::vector<zs::ConstantRecord> facts;
        if (!opt.no_cache) facts = zs::ConstantCache(opt.cache_path).load_trusted();
        report(opt, zs::bounds_ledger(q, facts));
    });

    auto* t = app.add_subcommand("table", "s4: certified s_4(d) rows; n5: N(r,5)");
    std::string table;
    std::size_t max_d = 7;
    t->add_option("which", table, "s4 or n5")->required()->check(CLI::IsMember({"s4", "n5"}));
    t->add_option("--max-d", max_d, "last dimension for s4")->capture_default_str();
    t->callback([&] { status = table == "s4" ? cmd_table_s4(opt, max_d) : cmd_table_n5(); });

    auto* v = app.add_subcommand("verify", "randomized property batches");
    std::string suite;
    std::size_t trials = 1000;
    std::vector<std::string> choices = egz::suites::suite_names();
    choices.push_back("all");
    v->add_option("suite", suite, "suite name or all")->required()->check(CLI::IsMember(choices));
    v->add_option("--trials", trials, "instances per size class")->capture_default_str();
    v->callback([&] { status = cmd_verify(suite, trials, opt.seed); });

    auto* mw = app.add_subcommand("mw-check", "weight distributions and MacWilliams identities");
    std::string code_path;
    bool generator = false;
    mw->add_option("--code", code_path, "matrix file (parity-check unless --generator)")
        ->required();
    mw->add_flag("--generator", generator, "rows of the file span the code");
    mw->callback([&] { status = cmd_mw_check(code_path, generator); });

    auto* c = app.add_subcommand("cache", "constant cache maintenance");
    std::string action;
    c->add_option("action", action, "check")->required()->check(CLI::IsMember({"check"}));
    c->callback([&] { status = cmd_cache_check(opt); });

    auto* tc = app.add_subcommand("test-conjecture", "evidence for the odd/even conjectures");
    std::string which;
    tc->add_option("which", which, "odd or even")->required()->check(CLI::IsMember({"odd", "even"}));
    tc->add_option("-m", m, "half the weight")->required();
    tc->callback([&] { status = cmd_test_conjecture(opt, which, m); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return status;
}
