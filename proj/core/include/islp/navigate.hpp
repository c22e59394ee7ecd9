// Random access and substring extraction.
//
// Per iteration rule A -> prod_{i=k1}^{k2} B_1^{i^{c_1}} ... B_t^{i^{c_t}}
// we keep
//   S[r] = sum of |exp(B_j)| over j <= r with c_j = c_r
//   C[r] = c_r
// plus a chunked predecessor structure over C (chunks of length d+1, one
// saved predecessor per exponent at each chunk boundary), so that
//   f_r(i) = sum_{j<=r} |exp(B_j)| * i^{c_j}   (prefix of one block)
// is computed with O(d) operations, and
//   fplus(b) = length of the first b enumerated blocks
// with O(d) exact power-sum evaluations. Blocks are enumerated b = 1..m in
// rule order, i.e. i = k1, k1+-1, ..., k2, so b = 1 always has value k1.
#ifndef ISLP_NAVIGATE_HPP
#define ISLP_NAVIGATE_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "islp/grammar.hpp"
#include "islp/lengths.hpp"
#include "islp/power_sums.hpp"

namespace islp {

// evaluation step counters for the telescoping-search property tests
struct NavStats {
    std::uint64_t succ_steps = 0;      // f evaluations inside successor searches
    std::uint64_t recursive_calls = 0; // extract invocations
};

enum class SearchKind { Adaptive, Plain };

// per-rule (i, r, offset) decisions, exposed by the CLI --trace flag;
// offset is the 1-based position inside the chosen copy of B_r
struct TraceEntry {
    std::uint64_t i, r, offset;
};

class IterationIndex {
public:
    IterationIndex(const Grammar& g, const LengthTable& lt, SymbolId a, std::uint32_t grammar_degree);

    std::uint64_t num_factors() const { return t_; }
    std::uint64_t num_blocks() const { return m_; }
    std::uint64_t block_value(std::uint64_t b) const; // b in [1..m]
    SymbolId base(std::uint64_t r) const { return base_[r]; }
    std::uint64_t base_len(std::uint64_t r) const { return base_len_[r]; }
    std::uint32_t exponent(std::uint64_t r) const { return C_[r]; }
    // sum of base_len(j) over j <= r with exponent(j) == exponent(r)
    std::uint64_t cum_len(std::uint64_t r) const { return S_[r]; }
    std::uint64_t rule_len() const { return rule_len_; }

    // max j <= r with C[j] = c, 0 if none
    std::uint64_t pred(std::uint64_t r, std::uint32_t c) const;

    // f_r(i), r in [0..t]; O(d) integer operations
    std::uint64_t f_r(std::uint64_t r, std::uint64_t i) const;

    // total length of enumerated blocks 1..b, b in [0..m]
    std::uint64_t f_plus_block(std::uint64_t b, const PowerSumTable& tab) const;

    // closed form for ascending rules only: sum_{i=k1}^{k} f_t(i)
    std::uint64_t f_plus_value(std::uint64_t k, const PowerSumTable& tab) const;

    // position split inside this rule's expansion
    struct Loc {
        std::uint64_t b;   // enumerated block, 1-based
        std::uint64_t i;   // iteration value of that block
        std::uint64_t r;   // factor, 1-based
        std::uint64_t off; // offset inside segment B_r^{i^{c_r}}, 1-based
    };
    Loc locate(std::uint64_t p, const PowerSumTable& tab, NavStats* st,
               SearchKind kind) const;

private:
    std::uint64_t t_ = 0, m_ = 0;
    std::uint64_t k1_ = 0, k2_ = 0;
    std::uint64_t rule_len_ = 0;
    std::uint32_t chunk_ = 1; // d+1
    std::vector<SymbolId> base_;           // 1-based
    std::vector<std::uint64_t> base_len_;  // 1-based
    std::vector<std::uint64_t> S_;         // 1-based
    std::vector<std::uint32_t> C_;         // 1-based
    std::vector<std::vector<std::uint32_t>> chunk_pred_; // per boundary, per exponent
    std::vector<std::uint64_t> s_full_;    // S[pred(t,c)] per exponent c
    std::vector<BigInt> base_psum_;        // p_c(k1-1) ascending / p_c(k1) descending
    bool ascending_ = true;
};

// minimal x in [lo..hi] with eval(x) >= target, where eval is nondecreasing,
// eval(lo-1) < target (implicit) and eval(hi) >= target. Each eval call
// counts one succ step. The adaptive variant probes a neighbor after every
// midpoint so the search stops as soon as it brackets the answer.
std::uint64_t succ_search(std::uint64_t lo, std::uint64_t hi, std::uint64_t target,
                          const std::function<std::uint64_t(std::uint64_t)>& eval,
                          NavStats* st, SearchKind kind);

class Navigator {
public:
    explicit Navigator(const Grammar& g);

    const Grammar& grammar() const { return g_; }
    const LengthTable& lengths() const { return len_; }
    const PowerSumTable& power_table() const { return *psum_; }
    std::uint64_t text_length() const { return len_.of(g_.start); }

    const IterationIndex* index_of(SymbolId a) const; // null unless iteration rule

    // T[l], 1-based
    Symbol access(std::uint64_t l, NavStats* st = nullptr,
                  std::vector<TraceEntry>* trace = nullptr,
                  SearchKind kind = SearchKind::Adaptive) const;

    // T[l .. l+lambda-1]
    Text extract(std::uint64_t l, std::uint64_t lambda, NavStats* st = nullptr,
                 std::vector<TraceEntry>* trace = nullptr,
                 SearchKind kind = SearchKind::Adaptive) const;

private:
    void extract_rec(SymbolId a, std::uint64_t l, std::uint64_t& lambda, Text& out,
                     NavStats* st, std::vector<TraceEntry>* trace, SearchKind kind) const;

    Grammar g_; // owned copy so the navigator cannot dangle
    LengthTable len_;
    std::unique_ptr<PowerSumTable> psum_;
    std::vector<std::unique_ptr<IterationIndex>> idx_;
};

} // namespace islp

#endif
