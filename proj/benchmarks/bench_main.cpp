// Microbenchmarks for the hot paths: random access, extraction, balancing
// and fingerprints. Uses the s_k family and a fibonacci grammar so the
// numbers are reproducible.
#include <benchmark/benchmark.h>

#include <random>

#include "islp/balance.hpp"
#include "islp/composable.hpp"
#include "islp/navigate.hpp"
#include "islp/oracles.hpp"

using namespace islp;

static Grammar fib_grammar(unsigned i) {
    // F_0 = a, F_1 = b, F_{i+2} = F_{i+1} F_i as plain binary rules
    Grammar g;
    g.sigma = 'b';
    g.rules.emplace_back(TerminalRule{'a'});
    g.rules.emplace_back(TerminalRule{'b'});
    SymbolId prev = 0, cur = 1;
    for (unsigned j = 2; j <= i; j++) {
        g.rules.emplace_back(BinaryRule{cur, prev});
        prev = cur;
        cur = (SymbolId)(g.rules.size() - 1);
    }
    g.start = i == 0 ? 0 : cur;
    return g;
}

static void bench_access_s_k(benchmark::State& state) {
    const Grammar g = grammar_s_k((std::uint64_t)state.range(0));
    Navigator nav(g);
    std::mt19937_64 rng(7);
    const std::uint64_t n = nav.text_length();
    for (auto _ : state)
        benchmark::DoNotOptimize(nav.access(1 + rng() % n));
    state.SetItemsProcessed((std::int64_t)state.iterations());
}
BENCHMARK(bench_access_s_k)->Arg(100)->Arg(10000)->Arg(1000000);

static void bench_extract_fib(benchmark::State& state) {
    const Grammar g = fib_grammar(40);
    Navigator nav(g);
    std::mt19937_64 rng(7);
    const std::uint64_t n = nav.text_length();
    const std::uint64_t len = (std::uint64_t)state.range(0);
    for (auto _ : state) {
        const std::uint64_t l = 1 + rng() % (n - len);
        benchmark::DoNotOptimize(nav.extract(l, len));
    }
    state.SetBytesProcessed((std::int64_t)(state.iterations() * len));
}
BENCHMARK(bench_extract_fib)->Arg(16)->Arg(256)->Arg(4096);

static void bench_balance_fib(benchmark::State& state) {
    const Grammar g = fib_grammar((unsigned)state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(balance(g));
}
BENCHMARK(bench_balance_fib)->Arg(20)->Arg(40)->Arg(80);

static void bench_fingerprint(benchmark::State& state) {
    const Text t = gen_thue_morse_prefix(1 << 16);
    const Grammar g = balance(build_naive_rlslp(t, 3));
    Fingerprinter fp(g, KrParams{});
    std::mt19937_64 rng(7);
    const std::uint64_t n = t.size();
    for (auto _ : state) {
        const std::uint64_t i = 1 + rng() % n;
        const std::uint64_t j = i + rng() % (n - i + 1);
        benchmark::DoNotOptimize(fp.fingerprint(i, j));
    }
    state.SetItemsProcessed((std::int64_t)state.iterations());
}
BENCHMARK(bench_fingerprint);

BENCHMARK_MAIN();
