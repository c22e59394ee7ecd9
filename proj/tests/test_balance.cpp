// Balancing pipeline: semantics preserved, height logarithmic, the helper
// stages keep their local contracts.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <cmath>

#include "islp/balance.hpp"
#include "islp/lengths.hpp"
#include "islp/oracles.hpp"

#include "corpus.hpp"

using namespace islp;
using namespace islp_tests;

static std::uint64_t log2_ceil(std::uint64_t n) {
    return std::bit_width(std::max<std::uint64_t>(n, 2) - 1);
}

TEST_CASE("balance preserves the expansion over the whole corpus") {
    for (const auto& c : corpus(30000)) {
        const Grammar b = balance(c.g);
        CAPTURE(c.name);
        CHECK(validate(b).ok());
        CHECK(expand(b, b.start, 1 << 21) == expand(c.g, c.g.start, 1 << 21));
        CHECK(grammar_size(b) <= 40 * grammar_size(c.g));
    }
}

TEST_CASE("deep chains come back logarithmic") {
    // left-deep chain for a^(n+1), height n+1
    Grammar g;
    g.sigma = 'a';
    g.rules.emplace_back(TerminalRule{'a'});
    const int deep = 3000;
    for (int i = 0; i < deep; i++)
        g.rules.emplace_back(BinaryRule{(SymbolId)i, 0});
    g.start = deep;
    REQUIRE(height(g) == (std::uint64_t)deep + 1);

    const Grammar b = balance(g);
    const LengthTable lt = compute_lengths(b);
    const std::uint64_t n = lt.of(b.start);
    CHECK(n == (std::uint64_t)deep + 1);
    CHECK(expand(b, b.start, 1 << 21) == expand(g, g.start, 1 << 21));
    CHECK(height(b) <= 8 * log2_ceil(n) + 16);
}

TEST_CASE("fibonacci chain balances to logarithmic height") {
    const Grammar g = grammar_fibonacci(25);
    const Grammar b = balance(g);
    const std::uint64_t n = compute_lengths(b).of(b.start);
    CHECK(expand(b, b.start, 1 << 21) == expand(g, g.start, 1 << 21));
    CHECK(height(b) <= 8 * log2_ceil(n) + 16);
}

TEST_CASE("balancing twice changes nothing essential") {
    for (const auto& c : corpus(20000)) {
        const Grammar b1 = balance(c.g);
        const Grammar b2 = balance(b1);
        CAPTURE(c.name);
        CHECK(expand(b2, b2.start, 1 << 21) == expand(b1, b1.start, 1 << 21));
        CHECK(height(b2) <= height(b1) + 2);
        CHECK(grammar_size(b2) <= 4 * grammar_size(b1));
    }
}

TEST_CASE("split_special_rules removes once-occurring factors") {
    for (const auto& c : corpus(20000)) {
        const Grammar s = split_special_rules(c.g);
        CAPTURE(c.name);
        CHECK(validate(s).ok());
        CHECK(expand(s, s.start, 1 << 21) == expand(c.g, c.g.start, 1 << 21));
        CHECK(grammar_size(s) <= 2 * grammar_size(c.g) + 8);
        for (SymbolId a = 0; a < s.num_rules(); a++) {
            if (!std::holds_alternative<IterationRule>(s.rules[a])) continue;
            for (const auto& [child, cnt] : occurrence_counts(s, a))
                CHECK(cnt >= 2);
        }
    }
}

TEST_CASE("sc decomposition yields disjoint paths with sane counts") {
    for (const auto& c : corpus(20000)) {
        const Grammar g = c.g;
        const auto sc = sc_decompose(g);
        const LengthTable lt = compute_lengths(g);
        CAPTURE(c.name);
        CHECK(sc.paths_from_root[g.start] == 1);
        for (SymbolId a = 0; a < g.num_rules(); a++)
            CHECK(sc.paths_to_sinks[a] == lt.of(a));
        std::vector<int> seen(g.num_rules(), 0);
        for (const auto& path : sc.paths) {
            CHECK(path.size() >= 2);
            for (SymbolId v : path) {
                CHECK(!seen[v]);
                seen[v] = 1;
            }
        }
    }
}

TEST_CASE("fragment variables derive exactly their slices") {
    Grammar g;
    g.sigma = 'c';
    g.rules.emplace_back(TerminalRule{'a'});
    g.rules.emplace_back(TerminalRule{'b'});
    g.rules.emplace_back(TerminalRule{'c'});
    g.rules.emplace_back(BinaryRule{0, 1}); // "ab"

    const std::vector<std::pair<SymbolId, std::uint64_t>> elems = {
        {3, 2}, {2, 1}, {0, 1}, {3, 2}, {1, 1}};
    const std::string flat = "ab" "c" "a" "ab" "b";

    std::vector<Rule> rules = g.rules;
    const auto svar = build_suffix_fragment(elems, rules);
    REQUIRE(svar.size() == elems.size());
    for (std::size_t p = 0; p < elems.size(); p++) {
        Grammar h;
        h.sigma = g.sigma;
        h.rules = rules;
        h.start = svar[p];
        std::size_t from = 0;
        for (std::size_t j = 0; j < p; j++) from += elems[j].second;
        CHECK(bytes_from_text(expand(h, h.start, 1 << 12)) == flat.substr(from));
    }

    rules = g.rules;
    const auto pvar = build_prefix_fragment(elems, rules);
    REQUIRE(pvar.size() == elems.size());
    for (std::size_t p = 0; p < elems.size(); p++) {
        Grammar h;
        h.sigma = g.sigma;
        h.rules = rules;
        h.start = pvar[p];
        std::size_t upto = 0;
        for (std::size_t j = 0; j <= p; j++) upto += elems[j].second;
        CHECK(bytes_from_text(expand(h, h.start, 1 << 12)) == flat.substr(0, upto));
    }
}

TEST_CASE("reduce_degree zeroes single-value ranges and bounds exponents") {
    Grammar g;
    g.sigma = 'b';
    g.rules.emplace_back(TerminalRule{'a'});
    g.rules.emplace_back(TerminalRule{'b'});
    g.rules.emplace_back(IterationRule{1, 1, {{0, 5}, {1, 0}}});
    g.start = 2;
    REQUIRE(validate(g).ok());
    const Grammar r = reduce_degree(g);
    CHECK(degree(r) == 0);
    CHECK(grammar_size(r) == grammar_size(g));
    CHECK(expand(r, r.start, 1 << 12) == expand(g, g.start, 1 << 12));

    for (const auto& c : corpus(30000)) {
        const Grammar rd = reduce_degree(c.g);
        const std::uint64_t n = compute_lengths(rd).of(rd.start);
        CAPTURE(c.name);
        CHECK(grammar_size(rd) == grammar_size(c.g));
        CHECK(degree(rd) <= log2_ceil(n));
        CHECK(expand(rd, rd.start, 1 << 21) == expand(c.g, c.g.start, 1 << 21));
    }
}

TEST_CASE("s_k heights after balancing grow additively as n doubles") {
    // k doubling squares ~n, so track height against log2 n directly
    std::uint64_t prev_h = 0, prev_n = 0;
    for (std::uint64_t k = 2; k <= 512; k *= 2) {
        const Grammar b = balance(grammar_s_k(k));
        const std::uint64_t n = compute_lengths(b).of(b.start);
        const std::uint64_t h = height(b);
        if (prev_n) {
            const double doublings = std::log2((double)n / (double)prev_n);
            CHECK((double)h <= (double)prev_h + 10.0 * std::max(doublings, 1.0));
        }
        prev_h = h;
        prev_n = n;
    }
}
