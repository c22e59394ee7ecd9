#include "islp/balance.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <functional>

namespace islp {

static std::uint32_t floor_log2(std::uint64_t x) {
    assert(x > 0);
    return std::bit_width(x) - 1;
}

DagView dag_view(const Grammar& g) {
    DagView d;
    d.children.resize(g.num_rules());
    for (SymbolId a = 0; a < g.num_rules(); a++)
        d.children[a] = occurrence_counts(g, a);
    return d;
}

ScDecomposition sc_decompose(const Grammar& g) {
    auto order = topological_order(g);
    if (!order) throw BadParams("sc_decompose: grammar has a cycle");
    const std::size_t n = g.num_rules();
    const LengthTable lt = compute_lengths(g);
    const DagView dag = dag_view(g);

    ScDecomposition sc;
    sc.paths_to_sinks.resize(n);
    for (SymbolId a = 0; a < n; a++) sc.paths_to_sinks[a] = lt.of(a);

    // root-to-node path counts, parents before children
    sc.paths_from_root.assign(n, 0);
    sc.paths_from_root[g.start] = 1;
    for (auto it = order->rbegin(); it != order->rend(); ++it) {
        const SymbolId a = *it;
        if (sc.paths_from_root[a] == 0) continue; // caller guarantees reachability
        for (auto [b, cnt] : dag.children[a]) {
            const unsigned __int128 add =
                (unsigned __int128)sc.paths_from_root[a] * cnt + sc.paths_from_root[b];
            if (add >= kLenGuard)
                throw Overflow("sc_decompose: path count exceeds 62 bits");
            sc.paths_from_root[b] = (std::uint64_t)add;
        }
    }

    auto lam1 = [&](SymbolId a) { return floor_log2(sc.paths_from_root[a]); };
    auto lam2 = [&](SymbolId a) { return floor_log2(sc.paths_to_sinks[a]); };

    sc.sc_child.assign(n, -1);
    sc.sc_parent.assign(n, ~SymbolId(0));
    for (SymbolId a = 0; a < n; a++) {
        auto* b = std::get_if<BinaryRule>(&g.rules[a]);
        if (!b || sc.paths_from_root[a] == 0) continue;
        const bool l_eq = lam1(b->left) == lam1(a) && lam2(b->left) == lam2(a);
        const bool r_eq = lam1(b->right) == lam1(a) && lam2(b->right) == lam2(a);
        // both children cannot match: their sink counts would sum past 2^(lambda2+1)
        assert(!(l_eq && r_eq) || b->left == b->right);
        if (l_eq) {
            assert(sc.sc_parent[b->left] == ~SymbolId(0));
            sc.sc_child[a] = 0;
            sc.sc_parent[b->left] = a;
        } else if (r_eq) {
            assert(sc.sc_parent[b->right] == ~SymbolId(0));
            sc.sc_child[a] = 1;
            sc.sc_parent[b->right] = a;
        }
    }

    for (SymbolId a = 0; a < n; a++) {
        if (sc.sc_child[a] < 0 || sc.sc_parent[a] != ~SymbolId(0)) continue;
        std::vector<SymbolId> path{a};
        SymbolId cur = a;
        while (sc.sc_child[cur] >= 0) {
            const auto& b = std::get<BinaryRule>(g.rules[cur]);
            cur = sc.sc_child[cur] == 0 ? b.left : b.right;
            path.push_back(cur);
        }
        sc.paths.push_back(std::move(path));
    }
    return sc;
}

// ---- splitting of k1 = k2 iteration rules ------------------------------

static SymbolId binarize_seq(const std::vector<SymbolId>& seq, std::size_t lo, std::size_t hi,
                             std::vector<Rule>& rules) {
    if (lo == hi) return seq[lo];
    const std::size_t mid = lo + (hi - lo) / 2;
    const SymbolId l = binarize_seq(seq, lo, mid, rules);
    const SymbolId r = binarize_seq(seq, mid + 1, hi, rules);
    rules.push_back(BinaryRule{l, r});
    return (SymbolId)(rules.size() - 1);
}

Grammar split_special_rules(const Grammar& g) {
    std::vector<Rule> rules = g.rules;
    std::vector<SymbolId> alias(g.num_rules());
    for (SymbolId a = 0; a < g.num_rules(); a++) alias[a] = a;

    for (SymbolId a = 0; a < g.num_rules(); a++) {
        auto* itp = std::get_if<IterationRule>(&g.rules[a]);
        if (!itp || itp->k1 != itp->k2) continue;
        const IterationRule it = *itp;
        const std::uint64_t k = it.k1;

        std::vector<SymbolId> elems;
        if (k == 1) {
            // every factor contributes exactly one copy
            for (const auto& f : it.factors) elems.push_back(f.base);
        } else {
            bool has_single = false;
            for (const auto& f : it.factors) has_single |= (f.exponent == 0);
            if (!has_single) continue; // every factor occurs k^{c_j} >= 2 times
            // pull out exponent-0 factors; maximal runs of the rest keep
            // iterating under a fresh symbol
            std::vector<IterFactor> run;
            auto flush = [&]() {
                if (run.empty()) return;
                rules.push_back(IterationRule{k, k, run});
                elems.push_back((SymbolId)(rules.size() - 1));
                run.clear();
            };
            for (const auto& f : it.factors) {
                if (f.exponent == 0) {
                    flush();
                    elems.push_back(f.base);
                } else {
                    run.push_back(f);
                }
            }
            flush();
        }

        if (elems.size() == 1) {
            alias[a] = elems[0]; // unit rule in disguise
        } else {
            const std::size_t mid = (elems.size() - 1) / 2;
            const SymbolId l = binarize_seq(elems, 0, mid, rules);
            const SymbolId r = binarize_seq(elems, mid + 1, elems.size() - 1, rules);
            rules[a] = BinaryRule{l, r};
        }
    }

    // resolve alias chains (targets may themselves be aliased originals)
    std::function<SymbolId(SymbolId)> find = [&](SymbolId x) -> SymbolId {
        if (x >= alias.size() || alias[x] == x) return x;
        return alias[x] = find(alias[x]);
    };
    for (auto& r : rules) {
        if (auto* b = std::get_if<BinaryRule>(&r)) {
            b->left = find(b->left);
            b->right = find(b->right);
        } else if (auto* it = std::get_if<IterationRule>(&r)) {
            for (auto& f : it->factors) f.base = find(f.base);
        }
    }
    Grammar out;
    out.rules = std::move(rules);
    out.sigma = g.sigma;
    out.start = find(g.start);
    return collect_reachable(out);
}

// ---- weight-proportional fragments -------------------------------------

namespace {

struct DyadicTree {
    struct Node {
        int left = -1, right = -1;
        std::size_t leaf_pos = 0; // leaves only
    };
    std::vector<Node> nodes;
    int root = -1;
    bool is_leaf(int v) const { return nodes[v].left < 0; }
};

// leaves in string order at weight-proportional depths: recursively halve the
// cumulative-weight interval, descending into halves without creating nodes
// until the midpoint actually separates leaves. A leaf of weight w ends at
// depth about log2(W/w) + 2.
DyadicTree build_dyadic_tree(const std::vector<std::uint64_t>& w) {
    DyadicTree t;
    const std::size_t n = w.size();
    assert(n >= 1);
    std::vector<std::uint64_t> mid(n); // doubled midpoint of leaf's weight interval
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < n; i++) {
        assert(w[i] >= 1);
        mid[i] = 2 * acc + w[i];
        acc += w[i];
    }
    std::uint64_t span = 1;
    while (span < 2 * acc) span <<= 1;

    std::function<int(std::size_t, std::size_t, std::uint64_t, std::uint64_t)> rec =
        [&](std::size_t lo, std::size_t hi, std::uint64_t alpha, std::uint64_t beta) -> int {
        if (lo == hi) {
            t.nodes.push_back({-1, -1, lo});
            return (int)(t.nodes.size() - 1);
        }
        const std::uint64_t m = alpha + (beta - alpha) / 2;
        // first leaf whose midpoint falls in the upper half
        const std::size_t cut =
            std::lower_bound(mid.begin() + lo, mid.begin() + hi + 1, m) - mid.begin();
        if (cut == lo) return rec(lo, hi, m, beta);
        if (cut == hi + 1) return rec(lo, hi, alpha, m);
        const int l = rec(lo, cut - 1, alpha, m);
        const int r = rec(cut, hi, m, beta);
        t.nodes.push_back({l, r, 0});
        return (int)(t.nodes.size() - 1);
    };
    t.root = rec(0, n - 1, 0, span);
    return t;
}

constexpr SymbolId kNone = ~SymbolId(0);

} // namespace

std::vector<SymbolId> build_suffix_fragment(
    const std::vector<std::pair<SymbolId, std::uint64_t>>& elems,
    std::vector<Rule>& rules) {
    const std::size_t n = elems.size();
    std::vector<std::uint64_t> w(n);
    for (std::size_t i = 0; i < n; i++) w[i] = elems[i].second;
    DyadicTree t = build_dyadic_tree(w);

    auto fresh = [&](SymbolId l, SymbolId r) {
        rules.push_back(BinaryRule{l, r});
        return (SymbolId)(rules.size() - 1);
    };

    // subtree variables bottom-up
    std::vector<SymbolId> var(t.nodes.size());
    std::function<void(int)> mkvar = [&](int v) {
        if (t.is_leaf(v)) {
            var[v] = elems[t.nodes[v].leaf_pos].first;
            return;
        }
        mkvar(t.nodes[v].left);
        mkvar(t.nodes[v].right);
        var[v] = fresh(var[t.nodes[v].left], var[t.nodes[v].right]);
    };
    mkvar(t.root);

    // tail(v) derives the right siblings on the way from v up to the root
    std::vector<SymbolId> out(n);
    std::function<void(int, SymbolId)> walk = [&](int v, SymbolId tail) {
        if (t.is_leaf(v)) {
            const std::size_t p = t.nodes[v].leaf_pos;
            out[p] = tail == kNone ? elems[p].first : fresh(elems[p].first, tail);
            return;
        }
        const int l = t.nodes[v].left, r = t.nodes[v].right;
        walk(r, tail);
        walk(l, tail == kNone ? var[r] : fresh(var[r], tail));
    };
    walk(t.root, kNone);
    return out;
}

std::vector<SymbolId> build_prefix_fragment(
    const std::vector<std::pair<SymbolId, std::uint64_t>>& elems,
    std::vector<Rule>& rules) {
    const std::size_t n = elems.size();
    std::vector<std::uint64_t> w(n);
    for (std::size_t i = 0; i < n; i++) w[i] = elems[i].second;
    DyadicTree t = build_dyadic_tree(w);

    auto fresh = [&](SymbolId l, SymbolId r) {
        rules.push_back(BinaryRule{l, r});
        return (SymbolId)(rules.size() - 1);
    };
    std::vector<SymbolId> var(t.nodes.size());
    std::function<void(int)> mkvar = [&](int v) {
        if (t.is_leaf(v)) {
            var[v] = elems[t.nodes[v].leaf_pos].first;
            return;
        }
        mkvar(t.nodes[v].left);
        mkvar(t.nodes[v].right);
        var[v] = fresh(var[t.nodes[v].left], var[t.nodes[v].right]);
    };
    mkvar(t.root);

    // head(v) derives the left siblings from the root down to v
    std::vector<SymbolId> out(n);
    std::function<void(int, SymbolId)> walk = [&](int v, SymbolId head) {
        if (t.is_leaf(v)) {
            const std::size_t p = t.nodes[v].leaf_pos;
            out[p] = head == kNone ? elems[p].first : fresh(head, elems[p].first);
            return;
        }
        const int l = t.nodes[v].left, r = t.nodes[v].right;
        walk(l, head);
        walk(r, head == kNone ? var[l] : fresh(head, var[l]));
    };
    walk(t.root, kNone);
    return out;
}

// ---- full pipeline ------------------------------------------------------

Grammar balance(const Grammar& g0) {
    Grammar g = split_special_rules(g0); // also drops unreachable symbols
    if (g.num_rules() <= 2) return g;
    const LengthTable lt = compute_lengths(g);
    const ScDecomposition sc = sc_decompose(g);

    std::vector<Rule> rules = g.rules;
    for (const auto& path : sc.paths) {
        const SymbolId tail_sym = path.back();
        const std::size_t steps = path.size() - 1;

        // off-path sibling of each step, and whether it sits left of the path
        std::vector<SymbolId> sib(steps);
        std::vector<bool> sib_left(steps);
        for (std::size_t i = 0; i < steps; i++) {
            const auto& b = std::get<BinaryRule>(g.rules[path[i]]);
            if (sc.sc_child[path[i]] == 0) {
                sib[i] = b.right;
                sib_left[i] = false;
            } else {
                sib[i] = b.left;
                sib_left[i] = true;
            }
        }

        // exp(A_i) = (left siblings, steps i..p-1, in step order) exp(A_p)
        //            (right siblings, steps p-1..i)
        std::vector<std::pair<SymbolId, std::uint64_t>> L, R;
        std::vector<std::size_t> l_step, r_step; // r_step descending
        for (std::size_t i = 0; i < steps; i++)
            if (sib_left[i]) {
                L.emplace_back(sib[i], lt.of(sib[i]));
                l_step.push_back(i);
            }
        for (std::size_t i = steps; i-- > 0;)
            if (!sib_left[i]) {
                R.emplace_back(sib[i], lt.of(sib[i]));
                r_step.push_back(i);
            }

        const std::vector<SymbolId> svar =
            L.empty() ? std::vector<SymbolId>{} : build_suffix_fragment(L, rules);
        const std::vector<SymbolId> pvar =
            R.empty() ? std::vector<SymbolId>{} : build_prefix_fragment(R, rules);

        for (std::size_t i = 0; i < steps; i++) {
            std::vector<SymbolId> seq;
            // suffix of L restricted to steps >= i
            const std::size_t ql =
                std::lower_bound(l_step.begin(), l_step.end(), i) - l_step.begin();
            if (ql < L.size()) seq.push_back(svar[ql]);
            seq.push_back(tail_sym);
            // prefix of R covering steps >= i (r_step is descending)
            std::size_t qr = 0;
            while (qr < R.size() && r_step[qr] >= i) qr++;
            if (qr > 0) seq.push_back(pvar[qr - 1]);

            assert(seq.size() >= 2 && seq.size() <= 3);
            if (seq.size() == 2) {
                rules[path[i]] = BinaryRule{seq[0], seq[1]};
            } else {
                rules.push_back(BinaryRule{seq[1], seq[2]});
                rules[path[i]] = BinaryRule{seq[0], (SymbolId)(rules.size() - 1)};
            }
        }
    }

    Grammar out;
    out.rules = std::move(rules);
    out.start = g.start;
    out.sigma = g.sigma;
    return collect_reachable(out);
}

Grammar reduce_degree(const Grammar& g) {
    Grammar out = g;
    const LengthTable lt = compute_lengths(g);
    for (SymbolId a = 0; a < out.num_rules(); a++) {
        auto* it = std::get_if<IterationRule>(&out.rules[a]);
        if (!it) continue;
        const std::uint64_t imax = std::max(it->k1, it->k2);
        if (imax == 1) {
            // the only iteration value is 1, so exponents are irrelevant
            for (auto& f : it->factors) f.exponent = 0;
            continue;
        }
        for (const auto& f : it->factors) {
            // i^c copies of the factor appear in the largest block, so a
            // valid grammar always satisfies imax^c <= |exp(a)|
            unsigned __int128 p = 1;
            bool fits = true;
            for (std::uint32_t x = 0; x < f.exponent && fits; x++) {
                p *= imax;
                if (p > lt.of(a)) fits = false;
            }
            if (!fits)
                throw InvalidExponent("reduce_degree: exponent exceeds expansion length");
        }
    }
    return out;
}

} // namespace islp
