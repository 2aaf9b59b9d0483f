#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Run {
    int status = -1;
    std::string out;
};

Run egz(const std::string& args) {
    const std::string cmd = std::string(EGZ_CLI_PATH) + " " + args + " 2>&1";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    std::size_t got = 0;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
    const int raw = pclose(pipe);
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return r;
}

bool has_line(const std::string& text, const std::string& line) {
    std::istringstream in(text);
    std::string l;
    while (std::getline(in, l)) {
        if (l == line) return true;
    }
    return false;
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "egz_cli_test";
    fs::create_directories(dir);
    const fs::path p = dir / name;
    fs::remove(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("constant verbs print the summary line") {
    auto r = egz("--no-cache s-const -m 2 -d 4");
    CHECK(r.status == 0);
    CHECK(has_line(r.out, "s_4(4) = 9 (exact)"));
    CHECK(has_line(r.out, "status\texact"));

    r = egz("--no-cache r-const -m 2 -n 8");
    CHECK(r.status == 0);
    CHECK(has_line(r.out, "R_4(8) = 4 (exact)"));

    r = egz("--no-cache beta -W 4 -d 2");
    CHECK(r.status == 0);
    CHECK(has_line(r.out, "beta_{4}(2) = 3 (exact)"));
    CHECK(has_line(r.out, "witness\t0;1;2"));
}

TEST_CASE("budget exhaustion reports bounded with zero exit") {
    const auto r = egz("--no-cache --max-nodes 256 beta -W 3,4 -d 8");
    CHECK(r.status == 0);
    CHECK(has_line(r.out, "status\tbounded"));
}

TEST_CASE("unknown verbs and flags fail") {
    CHECK(egz("frobnicate").status != 0);
    CHECK(egz("s-const -m 2").status != 0);
    CHECK(egz("s-const -m 2 -d 4 --bogus").status != 0);
}

TEST_CASE("witness verb reads a matrix file") {
    const auto seq = scratch("seq.txt");
    std::ofstream(seq) << "2 5\n01011\n00111\n";
    const auto r = egz("--no-cache witness -m 1 --seq " + seq.string());
    CHECK(r.status == 0);
    CHECK(has_line(r.out, "positions\t4,5"));

    const auto gao = scratch("gao.txt");
    std::ofstream(gao) << "4 8\n00010001\n00001001\n00000101\n00000011\n";
    const auto a = egz("--no-cache witness -m 2 --seq " + gao.string());
    CHECK(a.status == 0);
    CHECK(has_line(a.out, "status\tabsent"));
}

TEST_CASE("cache round trip and tamper detection") {
    const auto cache = scratch("cache.tsv");
    const std::string flag = "--cache " + cache.string() + " ";
    REQUIRE(egz(flag + "s-const -m 2 -d 4").status == 0);
    REQUIRE(egz(flag + "beta -W 2,4 -d 4").status == 0);
    REQUIRE(egz(flag + "r-const -m 2 -n 8").status == 0);

    auto r = egz(flag + "cache check");
    CHECK(r.status == 0);
    CHECK(has_line(r.out, "cache " + cache.string() + ": 3/3 records valid"));

    // bounds picks the cached facts up
    r = egz(flag + "bounds -m 2 -d 4");
    CHECK(r.status == 0);
    CHECK(has_line(r.out, "s_4(4) = 9 (exact)"));

    std::string text = slurp(cache);
    const auto at = text.find("0;0;0;1;");
    REQUIRE(at != std::string::npos);
    text.replace(at, 8, "0;0;0;0;");  // four zeros sum to zero
    std::ofstream(cache, std::ios::trunc) << text;

    r = egz(flag + "cache check");
    CHECK(r.status != 0);
    CHECK(r.out.find("line 1\tFAIL") != std::string::npos);
    CHECK(r.out.find("line 2\tok") != std::string::npos);
}

TEST_CASE("same seed gives identical reports") {
    const auto a = egz("--no-cache --seed 7 verify all --trials 40");
    const auto b = egz("--no-cache --seed 7 verify all --trials 40");
    CHECK(a.status == 0);
    CHECK(a.out == b.out);

    const auto c = egz("--no-cache s-const -m 2 -d 6 --method search");
    const auto d = egz("--no-cache s-const -m 2 -d 6 --method search");
    CHECK(c.out == d.out);
    CHECK(has_line(c.out, "s_4(6) = 12 (exact)"));
}

TEST_CASE("tables and code checks") {
    auto r = egz("--no-cache table s4 --max-d 5");
    CHECK(r.status == 0);
    CHECK(has_line(r.out, "4\t9\texact\t9"));
    CHECK(has_line(r.out, "5\t10\texact\t10"));

    r = egz("table n5");
    CHECK(has_line(r.out, "8\t17\t22"));
    CHECK(has_line(r.out, "11\t47-57\t63"));

    const auto code = scratch("ham.txt");
    std::ofstream(code) << "3 7\n1110100\n0111010\n1101001\n";
    r = egz("mw-check --code " + code.string());
    CHECK(r.status == 0);
    CHECK(has_line(r.out, "min_distance\t3"));
    CHECK(has_line(r.out, "MacWilliams identities hold"));
}
