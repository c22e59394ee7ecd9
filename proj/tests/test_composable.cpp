// Composable-function engine and Karp-Rabin fingerprints: exhaustive small
// cases, the concatenation law, operation budgets, and parameter checks.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <random>

#include "islp/composable.hpp"
#include "islp/oracles.hpp"

#include "corpus.hpp"

using namespace islp;
using namespace islp_tests;

static std::uint64_t naive_kappa(const Text& t, std::uint64_t i, std::uint64_t j,
                                 std::uint64_t mu, std::uint64_t c) {
    unsigned __int128 acc = 0, p = 1;
    for (std::uint64_t k = i; k <= j; k++) {
        acc = (acc + (unsigned __int128)t[k - 1] * p) % mu;
        p = p * c % mu;
    }
    return (std::uint64_t)acc;
}

TEST_CASE("fingerprints, exhaustive over strings of length <= 6 on {1,2}") {
    KrParams params;
    params.mu = 101;
    params.c = 7;
    Text s;
    auto rec = [&](auto&& self, std::size_t len) -> void {
        if (s.size() == len) {
            const Grammar g = build_naive_rlslp(s);
            KrParams p = params;
            Fingerprinter fp(g, p);
            for (std::uint64_t i = 1; i <= s.size(); i++)
                for (std::uint64_t j = i; j <= s.size(); j++)
                    CHECK(fp.fingerprint(i, j) == naive_kappa(s, i, j, 101, 7));
            return;
        }
        for (Symbol ch = 1; ch <= 2; ch++) {
            s.push_back(ch);
            self(self, len);
            s.pop_back();
        }
    };
    for (std::size_t len = 1; len <= 6; len++) rec(rec, len);
}

TEST_CASE("concatenation law of the fingerprint pair") {
    KrParams p;
    p.mu = (1ull << 61) - 1;
    p.seed = 42;
    Composable<KrValue> comp = kr_composable(p);
    std::mt19937_64 rng(4);
    for (int round = 0; round < 200; round++) {
        Text x(1 + rng() % 12), y(1 + rng() % 12);
        for (auto& ch : x) ch = 1 + rng() % 250;
        for (auto& ch : y) ch = 1 + rng() % 250;
        Text xy = x;
        xy.insert(xy.end(), y.begin(), y.end());
        auto val = [&](const Text& t) {
            KrValue v = comp.identity;
            for (Symbol ch : t) v = comp.combine(v, comp.single(ch));
            return v;
        };
        const KrValue a = val(x), b = val(y), w = val(xy);
        const KrValue c = comp.combine(a, b);
        CHECK(c == w);
        const std::uint64_t direct =
            (std::uint64_t)((a.kappa + (unsigned __int128)b.kappa * a.cpow % p.mu) % p.mu);
        CHECK(c.kappa == direct);
    }
}

TEST_CASE("plain composable functions ride the same engine") {
    const Text t = gen_thue_morse_prefix(256);
    const Grammar g = build_naive_rlslp(t);

    SUBCASE("length") {
        Composable<std::uint64_t> comp;
        comp.identity = 0;
        comp.single = [](Symbol) { return std::uint64_t(1); };
        comp.combine = [](std::uint64_t a, std::uint64_t b) { return a + b; };
        ComposableEngine<std::uint64_t> eng(g, comp);
        std::mt19937_64 rng(8);
        for (int q = 0; q < 300; q++) {
            std::uint64_t i = 1 + rng() % t.size();
            std::uint64_t j = i + rng() % (t.size() - i + 1);
            CHECK(eng.eval(i, j) == j - i + 1);
        }
    }
    SUBCASE("count of a fixed symbol") {
        Composable<std::uint64_t> comp;
        comp.identity = 0;
        comp.single = [](Symbol s) { return std::uint64_t(s == 'a'); };
        comp.combine = [](std::uint64_t a, std::uint64_t b) { return a + b; };
        ComposableEngine<std::uint64_t> eng(g, comp);
        std::mt19937_64 rng(9);
        for (int q = 0; q < 300; q++) {
            std::uint64_t i = 1 + rng() % t.size();
            std::uint64_t j = i + rng() % (t.size() - i + 1);
            std::uint64_t want = 0;
            for (std::uint64_t k = i; k <= j; k++) want += t[k - 1] == 'a';
            CHECK(eng.eval(i, j) == want);
        }
    }
}

TEST_CASE("evaluation spends at most a few compositions per level") {
    // single run a^k: the whole-range value needs <= 2 log2 k compositions
    for (std::uint64_t k : {2, 3, 9, 64, 1000, 12345}) {
        Grammar g;
        g.sigma = 'a';
        g.rules.emplace_back(TerminalRule{'a'});
        g.rules.emplace_back(IterationRule{1, k, {{0, 0}}});
        g.start = 1;
        KrParams p;
        Fingerprinter fp(g, p);
        ComposeStats st{};
        fp.engine().eval(1, k, &st);
        CHECK(st.compositions == 0); // stored at build time
        st = {};
        fp.engine().eval(2, k - (k > 2 ? 1 : 0), &st);
        CHECK(st.compositions <= 8 * std::bit_width(k));
    }
}

TEST_CASE("non run-length grammars are refused") {
    CHECK_THROWS_AS(Fingerprinter(grammar_s_k(5), KrParams{}), NotRlslp);
    Grammar g;
    g.sigma = 'a';
    g.rules.emplace_back(TerminalRule{'a'});
    g.rules.emplace_back(IterationRule{1, 3, {{0, 0}, {0, 0}}}); // two factors
    g.start = 1;
    REQUIRE(validate(g).ok());
    CHECK_THROWS_AS(Fingerprinter(g, KrParams{}), NotRlslp);
    g.rules[1] = IterationRule{1, 3, {{0, 1}}}; // exponent above zero
    REQUIRE(validate(g).ok());
    CHECK_THROWS_AS(Fingerprinter(g, KrParams{}), NotRlslp);
}

TEST_CASE("parameter validation") {
    const Grammar g = build_naive_rlslp(text_from_bytes("abracadabra"));
    KrParams bad;
    bad.mu = 100; // composite
    CHECK_THROWS_AS(Fingerprinter(g, bad), BadParams);
    KrParams tiny;
    tiny.mu = 2;
    CHECK_THROWS_AS(Fingerprinter(g, tiny), BadParams);
    KrParams huge_c;
    huge_c.c = (1ull << 61) + 5; // past mu
    CHECK_THROWS_AS(Fingerprinter(g, huge_c), BadParams);

    // same seed, same fingerprints; the drawn base is reported back
    KrParams p1, p2;
    p1.seed = p2.seed = 77;
    Fingerprinter f1(g, p1), f2(g, p2);
    CHECK(f1.params().c == f2.params().c);
    CHECK(f1.params().c >= 2);
    CHECK(f1.fingerprint(2, 9) == f2.fingerprint(2, 9));
}

TEST_CASE("broken algebras fail the registration spot check") {
    const Grammar g = build_naive_rlslp(text_from_bytes("aabbaabb"));
    Composable<std::uint64_t> comp;
    comp.identity = 1; // wrong identity for +
    comp.single = [](Symbol s) { return (std::uint64_t)s; };
    comp.combine = [](std::uint64_t a, std::uint64_t b) { return a + b; };
    CHECK_THROWS_AS(ComposableEngine<std::uint64_t>(g, comp), BadParams);

    Composable<std::uint64_t> nonassoc;
    nonassoc.identity = 0;
    nonassoc.single = [](Symbol s) { return (std::uint64_t)s; };
    nonassoc.combine = [](std::uint64_t a, std::uint64_t b) { return a + 2 * b; };
    CHECK_THROWS_AS(ComposableEngine<std::uint64_t>(g, nonassoc), BadParams);
}

TEST_CASE("fingerprints agree between the grammar and a rebuilt one") {
    // same text, two different run-length grammars, same fingerprints
    for (const auto& c : corpus(30000)) {
        const Text t = expand(c.g, c.g.start, 1 << 21);
        const Grammar a = build_naive_rlslp(t, 1);
        const Grammar b = build_naive_rlslp(t, 99);
        KrParams pa, pb;
        pa.seed = pb.seed = 5;
        Fingerprinter fa(a, pa), fb(b, pb);
        std::mt19937_64 rng(23);
        for (int q = 0; q < 50; q++) {
            std::uint64_t i = 1 + rng() % t.size();
            std::uint64_t j = i + rng() % (t.size() - i + 1);
            CAPTURE(c.name); CAPTURE(i); CAPTURE(j);
            CHECK(fa.fingerprint(i, j) == fb.fingerprint(i, j));
        }
    }
}
