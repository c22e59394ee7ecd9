#include "islp/navigate.hpp"

#include <algorithm>
#include <cassert>

namespace islp {

// i^c for terms known to stay under the 62-bit guard in valid grammars
static std::uint64_t pow_u64(std::uint64_t i, std::uint32_t c) {
    unsigned __int128 p = 1;
    for (std::uint32_t x = 0; x < c; x++) {
        p *= i;
        assert(p < ((unsigned __int128)1 << 63));
    }
    return (std::uint64_t)p;
}

IterationIndex::IterationIndex(const Grammar& g, const LengthTable& lt, SymbolId a,
                               std::uint32_t grammar_degree) {
    const auto& rule = std::get<IterationRule>(g.rules[a]);
    t_ = rule.factors.size();
    m_ = rule.num_blocks();
    k1_ = rule.k1;
    k2_ = rule.k2;
    ascending_ = rule.k1 <= rule.k2;
    rule_len_ = lt.of(a);
    chunk_ = grammar_degree + 1;

    base_.assign(t_ + 1, 0);
    base_len_.assign(t_ + 1, 0);
    S_.assign(t_ + 1, 0);
    C_.assign(t_ + 1, 0);
    std::vector<std::uint64_t> run(grammar_degree + 1, 0); // prefix sums per exponent
    for (std::uint64_t r = 1; r <= t_; r++) {
        const auto& f = rule.factors[r - 1];
        base_[r] = f.base;
        base_len_[r] = lt.of(f.base);
        C_[r] = f.exponent;
        run[f.exponent] += base_len_[r];
        S_[r] = run[f.exponent];
    }

    // predecessor per exponent at chunk boundaries 0, d+1, 2(d+1), ...
    const std::uint64_t nchunks = t_ / chunk_ + 1;
    chunk_pred_.assign(nchunks, std::vector<std::uint32_t>(grammar_degree + 1, 0));
    std::vector<std::uint32_t> cur(grammar_degree + 1, 0);
    for (std::uint64_t r = 1; r <= t_; r++) {
        cur[C_[r]] = (std::uint32_t)r;
        if (r % chunk_ == 0) chunk_pred_[r / chunk_] = cur;
    }

    s_full_.assign(grammar_degree + 1, 0);
    for (std::uint32_t c = 0; c <= grammar_degree; c++) {
        std::uint64_t p = pred(t_, c);
        s_full_[c] = p ? S_[p] : 0;
    }

    // per-exponent power-sum offset shared by every fplus evaluation
    PowerSumTable local(grammar_degree);
    base_psum_.resize(grammar_degree + 1);
    for (std::uint32_t c = 0; c <= grammar_degree; c++) {
        if (s_full_[c] == 0) continue;
        base_psum_[c] = ascending_ ? local.power_sum(c, k1_ - 1) : local.power_sum(c, k1_);
    }
}

std::uint64_t IterationIndex::block_value(std::uint64_t b) const {
    assert(b >= 1 && b <= m_);
    return ascending_ ? k1_ + (b - 1) : k1_ - (b - 1);
}

std::uint64_t IterationIndex::pred(std::uint64_t r, std::uint32_t c) const {
    if (r == 0) return 0;
    assert(r <= t_);
    const std::uint64_t j = r / chunk_; // boundary at j*chunk_ <= r
    std::uint64_t p = (c < chunk_pred_[j].size()) ? chunk_pred_[j][c] : 0;
    for (std::uint64_t q = j * chunk_ + 1; q <= r; q++)
        if (C_[q] == c) p = q;
    return p;
}

std::uint64_t IterationIndex::f_r(std::uint64_t r, std::uint64_t i) const {
    if (r == 0) return 0;
    assert(r <= t_);
    // walk from the chunk boundary, collecting the latest index per exponent
    const std::uint64_t j = r / chunk_;
    const auto& bound = chunk_pred_[j];
    // small fixed scratch: exponents present are < chunk_
    unsigned __int128 sum = 0;
    for (std::uint32_t c = 0; c < chunk_; c++) {
        std::uint64_t rc = bound[c];
        for (std::uint64_t q = j * chunk_ + 1; q <= r; q++)
            if (C_[q] == c) rc = q;
        if (rc == 0) continue;
        sum += (unsigned __int128)S_[rc] * pow_u64(i, c);
    }
    assert(sum < ((unsigned __int128)1 << 63));
    return (std::uint64_t)sum;
}

std::uint64_t IterationIndex::f_plus_block(std::uint64_t b, const PowerSumTable& tab) const {
    if (b == 0) return 0;
    assert(b <= m_);
    const std::uint64_t v = block_value(b);
    BigInt acc(0);
    for (std::uint32_t c = 0; c < chunk_; c++) {
        if (s_full_[c] == 0) continue;
        // ascending: p_c(v) - p_c(k1-1); descending: p_c(k1) - p_c(v-1)
        BigInt cnt = ascending_ ? tab.power_sum(c, v) - base_psum_[c]
                                : base_psum_[c] - tab.power_sum(c, v - 1);
        acc += BigInt((unsigned long)s_full_[c]) * cnt;
    }
    assert(acc >= 0 && acc <= BigInt((unsigned long)rule_len_));
    return (std::uint64_t)acc.get_ui();
}

std::uint64_t IterationIndex::f_plus_value(std::uint64_t k, const PowerSumTable& tab) const {
    if (!ascending_) throw BadParams("f_plus_value: rule enumerates downward");
    if (k < k1_ || k > k2_) throw OutOfRange("f_plus_value: k outside [k1..k2]");
    return f_plus_block(k - k1_ + 1, tab);
}

std::uint64_t succ_search(std::uint64_t lo, std::uint64_t hi, std::uint64_t target,
                          const std::function<std::uint64_t(std::uint64_t)>& eval,
                          NavStats* st, SearchKind kind) {
    auto probe = [&](std::uint64_t x) {
        if (st) st->succ_steps++;
        return eval(x);
    };
    std::uint64_t a = lo - 1, b = hi; // invariant: eval(a) < target <= eval(b)
    if (kind == SearchKind::Plain) {
        while (b - a > 1) {
            const std::uint64_t mid = a + (b - a) / 2;
            if (probe(mid) >= target) b = mid; else a = mid;
        }
        return b;
    }
    while (b - a > 1) {
        const std::uint64_t mid = a + (b - a) / 2;
        if (probe(mid) >= target) {
            if (mid - 1 == a || probe(mid - 1) < target) return mid;
            b = mid - 1;
        } else {
            if (mid + 1 == b || probe(mid + 1) >= target) return mid + 1;
            a = mid + 1;
        }
    }
    return b;
}

IterationIndex::Loc IterationIndex::locate(std::uint64_t p, const PowerSumTable& tab,
                                           NavStats* st, SearchKind kind) const {
    assert(p >= 1 && p <= rule_len_);
    Loc loc;
    loc.b = succ_search(1, m_, p, [&](std::uint64_t b) { return f_plus_block(b, tab); },
                        st, kind);
    loc.i = block_value(loc.b);
    const std::uint64_t rem = p - f_plus_block(loc.b - 1, tab);
    loc.r = succ_search(1, t_, rem, [&](std::uint64_t r) { return f_r(r, loc.i); },
                        st, kind);
    loc.off = rem - f_r(loc.r - 1, loc.i);
    return loc;
}

Navigator::Navigator(const Grammar& g) : g_(g), len_(compute_lengths(g)) {
    const std::uint32_t d = degree(g);
    psum_ = std::make_unique<PowerSumTable>(d);
    idx_.resize(g.num_rules());
    for (SymbolId a = 0; a < g.num_rules(); a++)
        if (std::holds_alternative<IterationRule>(g.rules[a]))
            idx_[a] = std::make_unique<IterationIndex>(g, len_, a, d);
}

const IterationIndex* Navigator::index_of(SymbolId a) const {
    return idx_[a] ? idx_[a].get() : nullptr;
}

Symbol Navigator::access(std::uint64_t l, NavStats* st, std::vector<TraceEntry>* trace,
                         SearchKind kind) const {
    if (l < 1 || l > text_length()) throw OutOfRange("access: position outside [1..n]");
    SymbolId s = g_.start;
    for (;;) {
        const Rule& r = g_.rules[s];
        if (auto* t = std::get_if<TerminalRule>(&r)) {
            assert(l == 1);
            return t->ch;
        }
        if (auto* b = std::get_if<BinaryRule>(&r)) {
            const std::uint64_t ll = len_.of(b->left);
            if (l <= ll) { s = b->left; } else { l -= ll; s = b->right; }
            continue;
        }
        const IterationIndex& ix = *idx_[s];
        const auto loc = ix.locate(l, *psum_, st, kind);
        const std::uint64_t seg = ix.base_len(loc.r);
        const std::uint64_t off = (loc.off - 1) % seg + 1;
        if (trace) trace->push_back({loc.i, loc.r, off});
        s = ix.base(loc.r);
        l = off;
    }
}

Text Navigator::extract(std::uint64_t l, std::uint64_t lambda, NavStats* st,
                        std::vector<TraceEntry>* trace, SearchKind kind) const {
    if (lambda == 0) return {};
    if (l < 1 || l > text_length() || lambda > text_length() - l + 1)
        throw OutOfRange("extract: range outside [1..n]");
    Text out;
    out.reserve(lambda);
    extract_rec(g_.start, l, lambda, out, st, trace, kind);
    return out;
}

void Navigator::extract_rec(SymbolId a, std::uint64_t l, std::uint64_t& lambda, Text& out,
                            NavStats* st, std::vector<TraceEntry>* trace,
                            SearchKind kind) const {
    if (st) st->recursive_calls++;
    if (lambda == 0) return;
    const Rule& rule = g_.rules[a];
    if (auto* t = std::get_if<TerminalRule>(&rule)) {
        out.push_back(t->ch);
        lambda--;
        return;
    }
    if (auto* b = std::get_if<BinaryRule>(&rule)) {
        const std::uint64_t ll = len_.of(b->left);
        if (l <= ll) {
            extract_rec(b->left, l, lambda, out, st, trace, kind);
            if (lambda > 0) extract_rec(b->right, 1, lambda, out, st, trace, kind);
        } else {
            extract_rec(b->right, l - ll, lambda, out, st, trace, kind);
        }
        return;
    }

    const IterationIndex& ix = *idx_[a];
    auto loc = ix.locate(l, *psum_, st, kind);
    const std::uint64_t seg0 = ix.base_len(loc.r);
    const std::uint64_t off = (loc.off - 1) % seg0 + 1;
    if (trace) trace->push_back({loc.i, loc.r, off});

    // first call lands inside copy ceil(off/seg) of factor r in block b, then
    // whole copies follow: remaining copies of B_r, remaining factors of the
    // block, remaining blocks
    std::uint64_t k = (loc.off - 1) / seg0 + 1;
    bool first = true;
    for (std::uint64_t b = loc.b; b <= ix.num_blocks() && lambda > 0; b++) {
        const std::uint64_t i = ix.block_value(b);
        std::uint64_t r = (b == loc.b) ? loc.r : 1;
        for (; r <= ix.num_factors() && lambda > 0; r++) {
            const std::uint64_t copies = pow_u64(i, ix.exponent(r));
            std::uint64_t kk = first ? k : 1;
            for (; kk <= copies && lambda > 0; kk++) {
                extract_rec(ix.base(r), first ? off : 1, lambda, out, st, trace, kind);
                first = false;
            }
        }
    }
}

} // namespace islp
