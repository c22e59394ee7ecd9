// Evaluation of composable functions over substrings of the expansion.
//
// A composable function is given by an algebra (identity, single, combine)
// with combine associative and identity neutral. On a run-length grammar
// (every exponent zero, so each block repeats the same factor sequence) the
// value of any T[i..j] splits into a block suffix, a power of the repeated
// block value, and a block prefix, so queries cost O(height + log n)
// combine calls. Karp-Rabin fingerprints are the stock instance.
#ifndef ISLP_COMPOSABLE_HPP
#define ISLP_COMPOSABLE_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "islp/error.hpp"
#include "islp/grammar.hpp"
#include "islp/lengths.hpp"

namespace islp {

template <class V>
struct Composable {
    V identity{};
    std::function<V(Symbol)> single;
    std::function<V(const V&, const V&)> combine;
};

struct ComposeStats {
    std::uint64_t compositions = 0; // combine calls
};

// randomized spot check of the algebra laws on values built from random
// symbols; returns false on the first violated identity or associativity
template <class V>
bool check_composable(const Composable<V>& c, Symbol sigma, std::uint64_t seed,
                      unsigned trials = 64) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Symbol> pick(1, sigma < 1 ? 1 : sigma);
    auto rand_val = [&]() {
        V v = c.single(pick(rng));
        const unsigned extra = (unsigned)(rng() % 3);
        for (unsigned i = 0; i < extra; i++) v = c.combine(v, c.single(pick(rng)));
        return v;
    };
    for (unsigned i = 0; i < trials; i++) {
        const V x = rand_val(), y = rand_val(), z = rand_val();
        if (!(c.combine(c.identity, x) == x)) return false;
        if (!(c.combine(x, c.identity) == x)) return false;
        if (!(c.combine(c.combine(x, y), z) == c.combine(x, c.combine(y, z))))
            return false;
    }
    return true;
}

template <class V>
class ComposableEngine {
public:
    // requires strict run-length form (every iteration rule a single B^m run);
    // validates the algebra on a few random values unless told not to
    ComposableEngine(const Grammar& g, Composable<V> c, bool validate_algebra = true)
        : g_(g), c_(std::move(c)), lt_(compute_lengths(g_)) {
        if (!is_rlslp_form(g_))
            throw NotRlslp("composable engine needs a run-length grammar");
        if (validate_algebra && !check_composable(c_, g_.sigma, 0x5eedu))
            throw BadParams("combine is not associative or identity not neutral");
        build();
    }

    const Grammar& grammar() const { return g_; }
    const LengthTable& lengths() const { return lt_; }

    // value on the whole expansion of a symbol
    const V& value_of(SymbolId a) const { return F_[a]; }

    // value on T[i..j], 1-based inclusive
    V eval(std::uint64_t i, std::uint64_t j, ComposeStats* st = nullptr) const {
        return eval_in(g_.start, i, j, st);
    }

    V eval_in(SymbolId a, std::uint64_t i, std::uint64_t j,
              ComposeStats* st = nullptr) const {
        if (a >= g_.num_rules()) throw OutOfRange("eval: no such symbol");
        if (i < 1 || j > lt_.of(a) || i > j) throw OutOfRange("eval: bad range");
        return eval_rec(a, i, j, st);
    }

private:
    struct IterTables {
        std::uint64_t block_len = 0, blocks = 0;
        std::vector<std::uint64_t> pre; // pre[r]: block prefix length, r factors
        std::vector<V> suf_val;         // combined factor values r..t, 1-based
        std::vector<V> pre_val;         // combined factor values 1..r, 1-based
        V block_val{};
        bool valid = false;
    };

    V comb(const V& x, const V& y, ComposeStats* st) const {
        if (st) st->compositions++;
        return c_.combine(x, y);
    }

    // value of x repeated k times, k >= 1, by square and multiply
    V pow_val(V x, std::uint64_t k, ComposeStats* st) const {
        V res = c_.identity;
        while (k) {
            if (k & 1) res = comb(res, x, st);
            k >>= 1;
            if (k) x = comb(x, x, st);
        }
        return res;
    }

    void build() {
        auto order = topological_order(g_);
        if (!order) throw BadParams("composable engine: grammar has a cycle");
        F_.resize(g_.num_rules());
        it_.resize(g_.num_rules());
        for (SymbolId a : *order) {
            if (auto* t = std::get_if<TerminalRule>(&g_.rules[a])) {
                F_[a] = c_.single(t->ch);
            } else if (auto* b = std::get_if<BinaryRule>(&g_.rules[a])) {
                F_[a] = c_.combine(F_[b->left], F_[b->right]);
            } else {
                const auto& it = std::get<IterationRule>(g_.rules[a]);
                IterTables tb;
                const std::size_t t = it.factors.size();
                tb.blocks = it.k1 <= it.k2 ? it.k2 - it.k1 + 1 : it.k1 - it.k2 + 1;
                tb.pre.assign(t + 1, 0);
                tb.suf_val.assign(t + 2, c_.identity);
                tb.pre_val.assign(t + 1, c_.identity);
                for (std::size_t r = 1; r <= t; r++) {
                    tb.pre[r] = tb.pre[r - 1] + lt_.of(it.factors[r - 1].base);
                    tb.pre_val[r] =
                        c_.combine(tb.pre_val[r - 1], F_[it.factors[r - 1].base]);
                }
                for (std::size_t r = t; r >= 1; r--)
                    tb.suf_val[r] =
                        c_.combine(F_[it.factors[r - 1].base], tb.suf_val[r + 1]);
                tb.block_len = tb.pre[t];
                tb.block_val = tb.pre_val[t];
                F_[a] = pow_val(tb.block_val, tb.blocks, nullptr);
                tb.valid = true;
                it_[a] = std::move(tb);
            }
        }
    }

    // factors of one block, positions p..q relative to the block
    V block_eval(SymbolId a, std::uint64_t p, std::uint64_t q, ComposeStats* st) const {
        const auto& it = std::get<IterationRule>(g_.rules[a]);
        const IterTables& tb = it_[a];
        const std::size_t r1 =
            std::upper_bound(tb.pre.begin() + 1, tb.pre.end(), p - 1) - tb.pre.begin();
        const std::size_t r2 =
            std::upper_bound(tb.pre.begin() + 1, tb.pre.end(), q - 1) - tb.pre.begin();
        const SymbolId b1 = it.factors[r1 - 1].base;
        if (r1 == r2)
            return eval_rec(b1, p - tb.pre[r1 - 1], q - tb.pre[r1 - 1], st);
        V v = eval_rec(b1, p - tb.pre[r1 - 1], lt_.of(b1), st);
        for (std::size_t r = r1 + 1; r < r2; r++)
            v = comb(v, F_[it.factors[r - 1].base], st);
        const SymbolId b2 = it.factors[r2 - 1].base;
        return comb(v, eval_rec(b2, 1, q - tb.pre[r2 - 1], st), st);
    }

    V block_suffix(SymbolId a, std::uint64_t p, ComposeStats* st) const {
        const auto& it = std::get<IterationRule>(g_.rules[a]);
        const IterTables& tb = it_[a];
        const std::size_t t = it.factors.size();
        const std::size_t r =
            std::upper_bound(tb.pre.begin() + 1, tb.pre.end(), p - 1) - tb.pre.begin();
        const SymbolId b = it.factors[r - 1].base;
        V v = eval_rec(b, p - tb.pre[r - 1], lt_.of(b), st);
        if (r < t) v = comb(v, tb.suf_val[r + 1], st);
        return v;
    }

    V block_prefix(SymbolId a, std::uint64_t q, ComposeStats* st) const {
        const auto& it = std::get<IterationRule>(g_.rules[a]);
        const IterTables& tb = it_[a];
        const std::size_t r =
            std::upper_bound(tb.pre.begin() + 1, tb.pre.end(), q - 1) - tb.pre.begin();
        const SymbolId b = it.factors[r - 1].base;
        V v = eval_rec(b, 1, q - tb.pre[r - 1], st);
        if (r > 1) v = comb(tb.pre_val[r - 1], v, st);
        return v;
    }

    V eval_rec(SymbolId a, std::uint64_t i, std::uint64_t j, ComposeStats* st) const {
        if (i == 1 && j == lt_.of(a)) return F_[a];
        if (auto* t = std::get_if<TerminalRule>(&g_.rules[a])) {
            (void)t;
            return F_[a];
        }
        if (auto* b = std::get_if<BinaryRule>(&g_.rules[a])) {
            const std::uint64_t ll = lt_.of(b->left);
            if (j <= ll) return eval_rec(b->left, i, j, st);
            if (i > ll) return eval_rec(b->right, i - ll, j - ll, st);
            return comb(eval_rec(b->left, i, ll, st), eval_rec(b->right, 1, j - ll, st),
                        st);
        }
        const IterTables& tb = it_[a];
        const std::uint64_t L = tb.block_len;
        const std::uint64_t tp = (i - 1) / L, tq = (j - 1) / L; // 0-based blocks
        if (tp == tq) return block_eval(a, i - tp * L, j - tp * L, st);
        V v = block_suffix(a, i - tp * L, st);
        if (tq > tp + 1) v = comb(v, pow_val(tb.block_val, tq - tp - 1, st), st);
        return comb(v, block_prefix(a, j - tq * L, st), st);
    }

    Grammar g_;
    Composable<V> c_;
    LengthTable lt_;
    std::vector<V> F_;
    std::vector<IterTables> it_;
};

// ---- Karp-Rabin fingerprints ---------------------------------------------

// kappa = sum of T[p] * c^(j-p) mod mu over the range, cpow = c^len mod mu
struct KrValue {
    std::uint64_t kappa = 0;
    std::uint64_t cpow = 1;
    bool operator==(const KrValue&) const = default;
};

struct KrParams {
    std::uint64_t mu = (1ull << 61) - 1; // modulus, must be prime
    std::uint64_t c = 0;                 // base; 0 means draw from seed
    std::uint64_t seed = 1;
};

bool is_prime_u64(std::uint64_t x);

// throws BadParams unless mu is prime and the base lands in [1, mu)
Composable<KrValue> kr_composable(KrParams& p);

class Fingerprinter {
public:
    Fingerprinter(const Grammar& g, KrParams p);

    std::uint64_t fingerprint(std::uint64_t i, std::uint64_t j,
                              ComposeStats* st = nullptr) const {
        return eng_.eval(i, j, st).kappa;
    }
    KrValue value(std::uint64_t i, std::uint64_t j, ComposeStats* st = nullptr) const {
        return eng_.eval(i, j, st);
    }
    const KrParams& params() const { return p_; }
    const ComposableEngine<KrValue>& engine() const { return eng_; }

private:
    static ComposableEngine<KrValue> make(const Grammar& g, KrParams& p);
    KrParams p_;
    ComposableEngine<KrValue> eng_;
};

} // namespace islp

#endif
