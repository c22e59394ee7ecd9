// End-to-end runs of the command line binary. The binary path comes from
// the ISLP_BIN environment variable (set by the test harness).
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

std::string bin() {
    const char* p = std::getenv("ISLP_BIN");
    REQUIRE_MESSAGE(p != nullptr, "ISLP_BIN must point at the cli binary");
    return p;
}

struct RunResult {
    int exit_code;
    std::string out;
};

// run a shell command, capture stdout; stderr passes through"
RunResult run(const std::string& cmd) {
    FILE* f = popen(cmd.c_str(), "r");
    REQUIRE(f != nullptr);
    std::string out;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, f)) > 0) out.append(buf, got);
    const int status = pclose(f);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string tmp_path(const std::string& name) {
    return std::string("/tmp/islp_cli_test_") + name;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    REQUIRE(f.good());
    f << content;
}

std::string chomp(std::string s) {
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
    return s;
}

} // namespace

TEST_CASE("the worked pipeline: gen s_k 5 | access 14") {
    const auto r = run(bin() + " gen s_k 5 | " + bin() + " access 14");
    CHECK(r.exit_code == 0);
    CHECK(chomp(r.out) == "b");
}

TEST_CASE("access trace prints the iteration decision") {
    const auto r = run(bin() + " gen s_k 5 | " + bin() + " access 14 --trace 2>&1 >/dev/null");
    CHECK(r.exit_code == 0);
    CHECK(chomp(r.out) == "iter i=4 r=2 offset=1");
}

TEST_CASE("validate: ok text and violating text") {
    const std::string good = tmp_path("good.g");
    const std::string bad = tmp_path("bad.g");
    REQUIRE(run(bin() + " gen s_k 3 > " + good).exit_code == 0);
    CHECK(run(bin() + " validate -g " + good).exit_code == 0);
    write_file(bad, "islp 2 1 98\n0 -> term 97\n1 -> bin 0 7\n");
    const auto r = run(bin() + " validate -g " + bad + " 2>/dev/null");
    CHECK(r.exit_code == 2);

    // garbage that does not even parse also exits 2
    write_file(bad, "not a grammar\n");
    CHECK(run(bin() + " validate -g " + bad + " 2>/dev/null").exit_code == 2);
}

TEST_CASE("usage problems exit 1") {
    CHECK(run(bin() + " access 2>/dev/null").exit_code == 1);      // missing pos
    CHECK(run(bin() + " no-such-command 2>/dev/null").exit_code == 1);
    CHECK(run(bin() + " 2>/dev/null").exit_code == 1);             // no subcommand
    CHECK(run(bin() + " --help >/dev/null 2>&1").exit_code == 0);
}

TEST_CASE("balance emits the stats line and an equivalent grammar") {
    const std::string g = tmp_path("s30.g");
    REQUIRE(run(bin() + " gen s_k 30 > " + g).exit_code == 0);
    const auto stats = run(bin() + " balance -g " + g + " 2>&1 >/dev/null");
    CHECK(stats.exit_code == 0);
    // size_in size_out height_in height_out n
    std::istringstream ss(stats.out);
    std::uint64_t size_in, size_out, height_in, height_out, n;
    REQUIRE((ss >> size_in >> size_out >> height_in >> height_out >> n));
    CHECK(size_in == 8);
    CHECK(n == 30 * 31 / 2 + 30);
    CHECK(size_out <= 40 * size_in);

    const auto before = run(bin() + " extract 1 100 -g " + g);
    const auto after = run(bin() + " balance -g " + g + " 2>/dev/null | " + bin() + " extract 1 100");
    CHECK(before.out == after.out);
}

TEST_CASE("queries print identical answers on balanced and raw grammars") {
    const std::string g = tmp_path("q.g");
    const std::string b = tmp_path("qb.g");
    REQUIRE(run(bin() + " gen s_k 12 > " + g).exit_code == 0);
    REQUIRE(run(bin() + " balance -g " + g + " 2>/dev/null > " + b).exit_code == 0);
    for (const std::string sub : {"access 33", "extract 5 9", "rmq 4 70",
                                  "nsv 3 98", "psv 50 98", "stats"}) {
        const auto r1 = run(bin() + " " + sub + " -g " + g);
        const auto r2 = run(bin() + " " + sub + " -g " + b);
        CHECK(r1.exit_code == 0);
        if (sub != "stats") { // stats differ, everything else must not
            CAPTURE(sub);
            CHECK(r1.out == r2.out);
        }
    }
    const auto rmq = run(bin() + " rmq 4 70 -g " + g);
    std::istringstream ss(rmq.out);
    std::uint64_t pos, val;
    REQUIRE((ss >> pos >> val));
    CHECK(val == 'a');
}

TEST_CASE("kr runs on run-length input and refuses iteration exponents") {
    const auto fib = run(bin() + " gen fibonacci 15 | " + bin() +
                         " kr 3 11 --mu 1000003 --c 9");
    CHECK(fib.exit_code == 0);
    CHECK(!chomp(fib.out).empty());
    const auto bad = run(bin() + " gen s_k 9 | " + bin() + " kr 1 5 2>/dev/null");
    CHECK(bad.exit_code == 2);
    // composite modulus is a parameter error
    const auto comp = run(bin() + " gen fibonacci 10 | " + bin() +
                          " kr 1 5 --mu 1000000 2>/dev/null");
    CHECK(comp.exit_code == 2);
}

TEST_CASE("reverse, morph and edit pipe together") {
    const std::string map = tmp_path("map.txt");
    write_file(map, "a=ab\nb=ba\n");
    const auto r = run(bin() + " gen s_k 3 | " + bin() + " reverse | " + bin() +
                       " extract 1 9");
    CHECK(chomp(r.out) == "baaabaaba");
    const auto m = run(bin() + " gen s_k 3 | " + bin() + " morph " + map + " | " +
                       bin() + " extract 1 18");
    CHECK(chomp(m.out) == "abbaababbaabababba"); // phi(abaabaaab)
    const auto e = run(bin() + " gen s_k 3 | " + bin() +
                       " edit substitute 4 b | " + bin() + " extract 1 9");
    CHECK(chomp(e.out) == "ababbaaab");
    const auto ins = run(bin() + " gen s_k 3 | " + bin() +
                         " edit insert_after 9 c | " + bin() + " extract 1 10");
    CHECK(chomp(ins.out) == "abaabaaabc");
    const auto del = run(bin() + " gen s_k 3 | " + bin() + " edit delete 2 | " +
                         bin() + " extract 1 8");
    CHECK(chomp(del.out) == "aaabaaab");
}

TEST_CASE("measures and build-naive") {
    const std::string t = tmp_path("text.txt");
    write_file(t, "abaabaaab");
    const auto m = run(bin() + " measures " + t);
    CHECK(m.exit_code == 0);
    std::istringstream ss(m.out);
    std::uint64_t n, z, r, rd;
    std::string dl;
    REQUIRE((ss >> n >> dl >> z >> r >> rd));
    CHECK(n == 9);
    CHECK(dl == "2/1");

    const auto round = run("cat " + t + " | " + bin() + " build-naive | " + bin() +
                           " extract 1 9");
    CHECK(chomp(round.out) == "abaabaaab");
    const auto st = run("cat " + t + " | " + bin() + " build-naive | " + bin() + " stats");
    CHECK(st.out.find("rlslp yes") != std::string::npos);
}

TEST_CASE("gen writes text and grammar files on request") {
    const std::string tf = tmp_path("gen_text.txt");
    const std::string gf = tmp_path("gen_grammar.g");
    const auto r = run(bin() + " gen s_k 4 --out-text " + tf + " --out-grammar " + gf);
    CHECK(r.exit_code == 0);
    CHECK(r.out.empty()); // everything went to the files
    std::ifstream tin(tf);
    std::stringstream tbuf;
    tbuf << tin.rdbuf();
    CHECK(tbuf.str() == "abaabaaabaaaab");
    const auto acc = run(bin() + " access 10 -g " + gf);
    CHECK(chomp(acc.out) == "a");
}

TEST_CASE("reduce-degree echoes canonical files byte for byte when idle") {
    const std::string g = tmp_path("echo.g");
    REQUIRE(run(bin() + " gen s_k 7 > " + g).exit_code == 0);
    const auto echoed = run(bin() + " reduce-degree -g " + g);
    std::ifstream in(g);
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(echoed.out == buf.str());
}
