#include "islp/queries.hpp"

#include <algorithm>
#include <bit>
#include <cassert>

namespace islp {

static std::uint64_t pow_copies(std::uint64_t i, std::uint32_t c) {
    unsigned __int128 p = 1;
    for (std::uint32_t x = 0; x < c; x++) {
        p *= i;
        assert(p < kLenGuard);
    }
    return (std::uint64_t)p;
}

std::vector<RmqPair> compute_rmq_meta(const Grammar& g, const LengthTable& lt) {
    auto order = topological_order(g);
    if (!order) throw BadParams("rmq meta: grammar has a cycle");
    std::vector<RmqPair> meta(g.num_rules());
    for (SymbolId a : *order) {
        if (auto* t = std::get_if<TerminalRule>(&g.rules[a])) {
            meta[a] = {1, t->ch};
        } else if (auto* b = std::get_if<BinaryRule>(&g.rules[a])) {
            RmqPair l = meta[b->left], r = meta[b->right];
            r.pos += lt.of(b->left);
            meta[a] = r.val < l.val ? r : l;
        } else {
            const auto& it = std::get<IterationRule>(g.rules[a]);
            // leftmost occurrence of the global factor minimum, first block
            Symbol best = ~Symbol(0);
            for (const auto& f : it.factors) best = std::min(best, meta[f.base].val);
            std::uint64_t off = 0;
            for (const auto& f : it.factors) {
                if (meta[f.base].val == best) {
                    meta[a] = {off + meta[f.base].pos, best};
                    break;
                }
                off += lt.of(f.base) * pow_copies(it.k1, f.exponent);
            }
        }
    }
    return meta;
}

// ---- sparse table -------------------------------------------------------

SparseTable::SparseTable(const std::vector<Symbol>& v) : v_(v) {
    const std::size_t n = v.size();
    assert(n > 0);
    const std::uint32_t levels = std::bit_width(n);
    idx_.resize(levels);
    idx_[0].resize(n);
    for (std::size_t i = 0; i < n; i++) idx_[0][i] = (std::uint32_t)i;
    for (std::uint32_t k = 1; k < levels; k++) {
        const std::size_t span = (std::size_t)1 << k;
        idx_[k].resize(n - span + 1);
        for (std::size_t i = 0; i + span <= n; i++) {
            const std::uint32_t a = idx_[k - 1][i], b = idx_[k - 1][i + span / 2];
            idx_[k][i] = v_[b] < v_[a] ? b : a; // left wins ties
        }
    }
}

std::size_t SparseTable::query(std::size_t l, std::size_t r) const {
    assert(l <= r && r < v_.size());
    const std::uint32_t k = std::bit_width(r - l + 1) - 1;
    const std::uint32_t a = idx_[k][l], b = idx_[k][r + 1 - ((std::size_t)1 << k)];
    // overlapping halves: keep the leftmost position on equal values
    if (v_[b] < v_[a]) return b;
    if (v_[a] < v_[b]) return a;
    return std::min(a, b);
}

// ---- wavelet tree -------------------------------------------------------

WaveletTree::WaveletTree(const std::vector<Symbol>& v) : n_(v.size()) {
    vals_ = v;
    std::sort(vals_.begin(), vals_.end());
    vals_.erase(std::unique(vals_.begin(), vals_.end()), vals_.end());
    std::vector<std::uint32_t> seq(v.size());
    for (std::size_t i = 0; i < v.size(); i++)
        seq[i] = (std::uint32_t)(std::lower_bound(vals_.begin(), vals_.end(), v[i]) -
                                 vals_.begin());
    root_ = build(std::move(seq), 0, (std::uint32_t)vals_.size());
}

int WaveletTree::build(std::vector<std::uint32_t> seq, std::uint32_t lo, std::uint32_t hi) {
    const int id = (int)nodes_.size();
    nodes_.push_back({});
    nodes_[id].lo = lo;
    nodes_[id].hi = hi;
    if (hi - lo == 1) return id;
    const std::uint32_t mid = lo + (hi - lo) / 2;
    nodes_[id].mid = mid;
    auto& r1 = nodes_[id].r1;
    r1.resize(seq.size() + 1, 0);
    std::vector<std::uint32_t> ls, rs;
    for (std::size_t i = 0; i < seq.size(); i++) {
        const bool one = seq[i] >= mid;
        r1[i + 1] = r1[i] + (one ? 1 : 0);
        (one ? rs : ls).push_back(seq[i]);
    }
    const int l = build(std::move(ls), lo, mid);
    const int r = build(std::move(rs), mid, hi);
    nodes_[id].left = l;
    nodes_[id].right = r;
    return id;
}

// position of the k-th zero (1-based k) in the node's bit sequence
static std::size_t select0(const std::vector<std::uint32_t>& r1, std::size_t k) {
    std::size_t lo = 1, hi = r1.size() - 1;
    while (lo < hi) {
        const std::size_t m = lo + (hi - lo) / 2;
        if (m - r1[m] >= k) hi = m;
        else lo = m + 1;
    }
    return lo - 1;
}

static std::size_t select1(const std::vector<std::uint32_t>& r1, std::size_t k) {
    std::size_t lo = 1, hi = r1.size() - 1;
    while (lo < hi) {
        const std::size_t m = lo + (hi - lo) / 2;
        if (r1[m] >= k) hi = m;
        else lo = m + 1;
    }
    return lo - 1;
}

std::size_t WaveletTree::left_rec(int nd, std::size_t l, std::size_t r,
                                  std::uint32_t rx) const {
    if (l >= r) return npos;
    const Node& n = nodes_[nd];
    if (rx <= n.lo) return npos;
    if (rx >= n.hi) return l; // every value here qualifies
    std::size_t best = npos;
    const std::size_t p0 = left_rec(n.left, l - n.r1[l], r - n.r1[r], rx);
    if (p0 != npos) best = select0(n.r1, p0 + 1);
    if (rx > n.mid) {
        const std::size_t p1 = left_rec(n.right, n.r1[l], n.r1[r], rx);
        if (p1 != npos) best = std::min(best, select1(n.r1, p1 + 1));
    }
    return best;
}

std::size_t WaveletTree::right_rec(int nd, std::size_t l, std::size_t r,
                                   std::uint32_t rx) const {
    if (l >= r) return npos;
    const Node& n = nodes_[nd];
    if (rx <= n.lo) return npos;
    if (rx >= n.hi) return r - 1;
    std::size_t best = npos;
    const std::size_t p0 = right_rec(n.left, l - n.r1[l], r - n.r1[r], rx);
    if (p0 != npos) best = select0(n.r1, p0 + 1);
    if (rx > n.mid) {
        const std::size_t p1 = right_rec(n.right, n.r1[l], n.r1[r], rx);
        if (p1 != npos) {
            const std::size_t q = select1(n.r1, p1 + 1);
            if (best == npos || q > best) best = q;
        }
    }
    return best;
}

std::size_t WaveletTree::leftmost_less(std::size_t l, std::size_t r, Symbol x) const {
    if (l >= r || n_ == 0) return npos;
    const std::uint32_t rx =
        (std::uint32_t)(std::lower_bound(vals_.begin(), vals_.end(), x) - vals_.begin());
    if (rx == 0) return npos;
    return left_rec(root_, l, r, rx);
}

std::size_t WaveletTree::rightmost_less(std::size_t l, std::size_t r, Symbol x) const {
    if (l >= r || n_ == 0) return npos;
    const std::uint32_t rx =
        (std::uint32_t)(std::lower_bound(vals_.begin(), vals_.end(), x) - vals_.begin());
    if (rx == 0) return npos;
    return right_rec(root_, l, r, rx);
}

// ---- query engine -------------------------------------------------------

QueryEngine::QueryEngine(const Grammar& g) : nav_(g) {
    meta_ = compute_rmq_meta(nav_.grammar(), nav_.lengths());
    aux_.resize(g.num_rules());
    for (SymbolId a = 0; a < g.num_rules(); a++) {
        auto* it = std::get_if<IterationRule>(&g.rules[a]);
        if (!it) continue;
        auto ax = std::make_unique<IterAux>();
        ax->v.reserve(it->factors.size());
        for (const auto& f : it->factors) ax->v.push_back(meta_[f.base].val);
        ax->st = SparseTable(ax->v);
        ax->wt = WaveletTree(ax->v);
        ax->first_min_r = ax->st.query(0, ax->v.size() - 1) + 1;
        aux_[a] = std::move(ax);
    }
}

// all copies of one factor: positions p..q inside the segment, copy length bl
RmqPair QueryEngine::seg_rmq(SymbolId base, std::uint64_t bl, std::uint64_t p,
                             std::uint64_t q, QueryStats* st) const {
    const std::uint64_t cp = (p - 1) / bl, cq = (q - 1) / bl;
    const std::uint64_t op = p - cp * bl, oq = q - cq * bl;
    if (cp == cq) {
        RmqPair r = rmq_rec(base, op, oq, st);
        r.pos += cp * bl;
        return r;
    }
    RmqPair best = rmq_rec(base, op, bl, st);
    best.pos += cp * bl;
    if (cq > cp + 1) {
        RmqPair mid = meta_[base];
        mid.pos += (cp + 1) * bl;
        if (mid.val < best.val) best = mid;
    }
    RmqPair tail = rmq_rec(base, 1, oq, st);
    tail.pos += cq * bl;
    if (tail.val < best.val) best = tail;
    return best;
}

RmqPair QueryEngine::rmq_rec(SymbolId a, std::uint64_t p, std::uint64_t q,
                             QueryStats* st) const {
    const Grammar& g = nav_.grammar();
    const LengthTable& lt = nav_.lengths();
    assert(1 <= p && p <= q && q <= lt.of(a));
    if (p == 1 && q == lt.of(a)) return meta_[a];
    if (st) st->partial_calls++;

    if (auto* t = std::get_if<TerminalRule>(&g.rules[a])) return {1, t->ch};

    if (auto* b = std::get_if<BinaryRule>(&g.rules[a])) {
        const std::uint64_t ll = lt.of(b->left);
        if (q <= ll) return rmq_rec(b->left, p, q, st);
        if (p > ll) {
            RmqPair r = rmq_rec(b->right, p - ll, q - ll, st);
            r.pos += ll;
            return r;
        }
        RmqPair rl = rmq_rec(b->left, p, ll, st);
        RmqPair rr = rmq_rec(b->right, 1, q - ll, st);
        rr.pos += ll;
        return rr.val < rl.val ? rr : rl;
    }

    const IterationIndex& ix = *nav_.index_of(a);
    const IterAux& ax = *aux_[a];
    const PowerSumTable& tab = nav_.power_table();
    const auto lp = ix.locate(p, tab, nullptr, SearchKind::Adaptive);
    const auto lq = ix.locate(q, tab, nullptr, SearchKind::Adaptive);

    if (lp.b == lq.b) {
        const std::uint64_t i = lp.i;
        const std::uint64_t bstart = ix.f_plus_block(lp.b - 1, tab);
        if (lp.r == lq.r) {
            RmqPair r = seg_rmq(ix.base(lp.r), ix.base_len(lp.r), lp.off, lq.off, st);
            r.pos += bstart + ix.f_r(lp.r - 1, i);
            return r;
        }
        // suffix of factor lp.r, whole factors between, prefix of factor lq.r
        const std::uint64_t seg_p =
            ix.base_len(lp.r) * pow_copies(i, ix.exponent(lp.r));
        RmqPair best = seg_rmq(ix.base(lp.r), ix.base_len(lp.r), lp.off, seg_p, st);
        best.pos += bstart + ix.f_r(lp.r - 1, i);
        if (lq.r > lp.r + 1) {
            const std::size_t rs = ax.st.query(lp.r, lq.r - 2) + 1; // 1-based factor
            RmqPair mid = meta_[ix.base(rs)];
            mid.pos += bstart + ix.f_r(rs - 1, i);
            if (mid.val < best.val) best = mid;
        }
        RmqPair tail = seg_rmq(ix.base(lq.r), ix.base_len(lq.r), 1, lq.off, st);
        tail.pos += bstart + ix.f_r(lq.r - 1, i);
        if (tail.val < best.val) best = tail;
        return best;
    }

    // block suffix at lp, whole blocks between, block prefix at lq
    const std::uint64_t t = ix.num_factors();
    RmqPair best{~std::uint64_t(0), ~Symbol(0)};
    auto consider = [&best](RmqPair c) {
        if (c.val < best.val || (c.val == best.val && c.pos < best.pos)) best = c;
    };
    {
        const std::uint64_t i = lp.i;
        const std::uint64_t bstart = ix.f_plus_block(lp.b - 1, tab);
        const std::uint64_t seg_p =
            ix.base_len(lp.r) * pow_copies(i, ix.exponent(lp.r));
        RmqPair c = seg_rmq(ix.base(lp.r), ix.base_len(lp.r), lp.off, seg_p, st);
        c.pos += bstart + ix.f_r(lp.r - 1, i);
        consider(c);
        if (lp.r < t) {
            const std::size_t rs = ax.st.query(lp.r, t - 1) + 1;
            RmqPair m = meta_[ix.base(rs)];
            m.pos += bstart + ix.f_r(rs - 1, i);
            consider(m);
        }
    }
    if (lq.b > lp.b + 1) {
        // whole blocks: every factor appears in every block, so the overall
        // minimum shows up in the first of them
        const std::uint64_t i = ix.block_value(lp.b + 1);
        RmqPair m = meta_[ix.base(ax.first_min_r)];
        m.pos += ix.f_plus_block(lp.b, tab) + ix.f_r(ax.first_min_r - 1, i);
        consider(m);
    }
    {
        const std::uint64_t i = lq.i;
        const std::uint64_t bstart = ix.f_plus_block(lq.b - 1, tab);
        if (lq.r > 1) {
            const std::size_t rs = ax.st.query(0, lq.r - 2) + 1;
            RmqPair m = meta_[ix.base(rs)];
            m.pos += bstart + ix.f_r(rs - 1, i);
            consider(m);
        }
        RmqPair c = seg_rmq(ix.base(lq.r), ix.base_len(lq.r), 1, lq.off, st);
        c.pos += bstart + ix.f_r(lq.r - 1, i);
        consider(c);
    }
    return best;
}

RmqPair QueryEngine::rmq_in(SymbolId a, std::uint64_t p, std::uint64_t q,
                            QueryStats* st) const {
    if (a >= nav_.grammar().num_rules())
        throw OutOfRange("rmq: no such symbol");
    if (p < 1 || q > nav_.lengths().of(a) || p > q)
        throw OutOfRange("rmq: bad range");
    return rmq_rec(a, p, q, st);
}

RmqPair QueryEngine::rmq(std::uint64_t p, std::uint64_t q, QueryStats* st) const {
    return rmq_in(nav_.grammar().start, p, q, st);
}

// leftmost position with value < v; requires meta(a).val < v
std::uint64_t QueryEngine::descend_first(SymbolId a, Symbol v, QueryStats* st) const {
    const Grammar& g = nav_.grammar();
    assert(meta_[a].val < v);
    if (st) st->descents++;
    if (std::holds_alternative<TerminalRule>(g.rules[a])) return 1;
    if (auto* b = std::get_if<BinaryRule>(&g.rules[a])) {
        if (meta_[b->left].val < v) return descend_first(b->left, v, st);
        return nav_.lengths().of(b->left) + descend_first(b->right, v, st);
    }
    const IterationIndex& ix = *nav_.index_of(a);
    const IterAux& ax = *aux_[a];
    const std::size_t r0 = ax.wt.leftmost_less(0, ax.v.size(), v);
    assert(r0 != WaveletTree::npos);
    const std::uint64_t r = r0 + 1;
    // first block, first copy of that factor
    return ix.f_r(r - 1, ix.block_value(1)) + descend_first(ix.base(r), v, st);
}

// rightmost position with value < v; requires meta(a).val < v
std::uint64_t QueryEngine::descend_last(SymbolId a, Symbol v, QueryStats* st) const {
    const Grammar& g = nav_.grammar();
    assert(meta_[a].val < v);
    if (st) st->descents++;
    if (std::holds_alternative<TerminalRule>(g.rules[a])) return 1;
    if (auto* b = std::get_if<BinaryRule>(&g.rules[a])) {
        if (meta_[b->right].val < v)
            return nav_.lengths().of(b->left) + descend_last(b->right, v, st);
        return descend_last(b->left, v, st);
    }
    const IterationIndex& ix = *nav_.index_of(a);
    const IterAux& ax = *aux_[a];
    const PowerSumTable& tab = nav_.power_table();
    const std::size_t r0 = ax.wt.rightmost_less(0, ax.v.size(), v);
    assert(r0 != WaveletTree::npos);
    const std::uint64_t r = r0 + 1;
    // last block, last copy of that factor
    const std::uint64_t m = ix.num_blocks();
    const std::uint64_t i = ix.block_value(m);
    const std::uint64_t copies = pow_copies(i, ix.exponent(r));
    return ix.f_plus_block(m - 1, tab) + ix.f_r(r - 1, i) +
           (copies - 1) * ix.base_len(r) + descend_last(ix.base(r), v, st);
}

std::uint64_t QueryEngine::nsv_rec(SymbolId a, std::uint64_t from, Symbol v,
                                   QueryStats* st) const {
    const Grammar& g = nav_.grammar();
    const LengthTable& lt = nav_.lengths();
    const std::uint64_t len = lt.of(a);
    if (from > len) return len + 1;
    if (meta_[a].val >= v) return len + 1;
    if (from <= 1) return descend_first(a, v, st);
    if (st) st->partial_calls++;

    if (auto* b = std::get_if<BinaryRule>(&g.rules[a])) {
        const std::uint64_t ll = lt.of(b->left);
        if (from <= ll) {
            const std::uint64_t q = nsv_rec(b->left, from, v, st);
            if (q <= ll) return q;
        }
        const std::uint64_t q =
            nsv_rec(b->right, from > ll ? from - ll : 1, v, st);
        return q <= lt.of(b->right) ? ll + q : len + 1;
    }

    const IterationIndex& ix = *nav_.index_of(a);
    const IterAux& ax = *aux_[a];
    const PowerSumTable& tab = nav_.power_table();
    const auto lp = ix.locate(from, tab, nullptr, SearchKind::Adaptive);
    const std::uint64_t i = lp.i;
    const std::uint64_t bl = ix.base_len(lp.r);
    const std::uint64_t copies = pow_copies(i, ix.exponent(lp.r));
    const std::uint64_t bstart = ix.f_plus_block(lp.b - 1, tab);
    const std::uint64_t segstart = bstart + ix.f_r(lp.r - 1, i);
    const std::uint64_t cp = (lp.off - 1) / bl;
    const std::uint64_t op = lp.off - cp * bl;

    if (meta_[ix.base(lp.r)].val < v) {
        const std::uint64_t q = nsv_rec(ix.base(lp.r), op, v, st);
        if (q <= bl) return segstart + cp * bl + q;
        if (cp + 1 < copies)
            return segstart + (cp + 1) * bl + descend_first(ix.base(lp.r), v, st);
    }
    // later factors in this block
    const std::size_t rn = ax.wt.leftmost_less(lp.r, ax.v.size(), v);
    if (rn != WaveletTree::npos) {
        const std::uint64_t r2 = rn + 1;
        return bstart + ix.f_r(r2 - 1, i) + descend_first(ix.base(r2), v, st);
    }
    // later blocks: the rule minimum is below v and appears in every block
    if (lp.b < ix.num_blocks()) {
        const std::size_t r3 = ax.wt.leftmost_less(0, ax.v.size(), v) + 1;
        const std::uint64_t i2 = ix.block_value(lp.b + 1);
        return ix.f_plus_block(lp.b, tab) + ix.f_r(r3 - 1, i2) +
               descend_first(ix.base(r3), v, st);
    }
    return len + 1;
}

std::uint64_t QueryEngine::psv_rec(SymbolId a, std::uint64_t upto, Symbol v,
                                   QueryStats* st) const {
    const Grammar& g = nav_.grammar();
    const LengthTable& lt = nav_.lengths();
    const std::uint64_t len = lt.of(a);
    if (upto < 1) return 0;
    if (meta_[a].val >= v) return 0;
    if (upto >= len) return descend_last(a, v, st);
    if (st) st->partial_calls++;

    if (auto* b = std::get_if<BinaryRule>(&g.rules[a])) {
        const std::uint64_t ll = lt.of(b->left);
        if (upto > ll) {
            const std::uint64_t q = psv_rec(b->right, upto - ll, v, st);
            if (q > 0) return ll + q;
        }
        return psv_rec(b->left, std::min(upto, ll), v, st);
    }

    const IterationIndex& ix = *nav_.index_of(a);
    const IterAux& ax = *aux_[a];
    const PowerSumTable& tab = nav_.power_table();
    const auto lq = ix.locate(upto, tab, nullptr, SearchKind::Adaptive);
    const std::uint64_t i = lq.i;
    const std::uint64_t bl = ix.base_len(lq.r);
    const std::uint64_t bstart = ix.f_plus_block(lq.b - 1, tab);
    const std::uint64_t segstart = bstart + ix.f_r(lq.r - 1, i);
    const std::uint64_t cq = (lq.off - 1) / bl;
    const std::uint64_t oq = lq.off - cq * bl;

    if (meta_[ix.base(lq.r)].val < v) {
        const std::uint64_t q = psv_rec(ix.base(lq.r), oq, v, st);
        if (q > 0) return segstart + cq * bl + q;
        if (cq > 0)
            return segstart + (cq - 1) * bl + descend_last(ix.base(lq.r), v, st);
    }
    // earlier factors in this block
    if (lq.r > 1) {
        const std::size_t rp = ax.wt.rightmost_less(0, lq.r - 1, v);
        if (rp != WaveletTree::npos) {
            const std::uint64_t r2 = rp + 1;
            const std::uint64_t copies2 = pow_copies(i, ix.exponent(r2));
            return bstart + ix.f_r(r2 - 1, i) + (copies2 - 1) * ix.base_len(r2) +
                   descend_last(ix.base(r2), v, st);
        }
    }
    // earlier blocks
    if (lq.b > 1) {
        const std::size_t r3 = ax.wt.rightmost_less(0, ax.v.size(), v);
        if (r3 != WaveletTree::npos) {
            const std::uint64_t r = r3 + 1;
            const std::uint64_t i2 = ix.block_value(lq.b - 1);
            const std::uint64_t copies3 = pow_copies(i2, ix.exponent(r));
            return ix.f_plus_block(lq.b - 2, tab) + ix.f_r(r - 1, i2) +
                   (copies3 - 1) * ix.base_len(r) + descend_last(ix.base(r), v, st);
        }
    }
    return 0;
}

std::uint64_t QueryEngine::nsv(std::uint64_t p, Symbol v, QueryStats* st) const {
    const std::uint64_t n = nav_.text_length();
    if (p < 1 || p > n) throw OutOfRange("nsv: position out of range");
    return nsv_rec(nav_.grammar().start, p, v, st);
}

std::uint64_t QueryEngine::psv(std::uint64_t p, Symbol v, QueryStats* st) const {
    const std::uint64_t n = nav_.text_length();
    if (p < 1 || p > n) throw OutOfRange("psv: position out of range");
    return psv_rec(nav_.grammar().start, p, v, st);
}

} // namespace islp
