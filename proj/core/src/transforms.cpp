#include "islp/transforms.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <map>
#include <string>

#include "islp/navigate.hpp"

namespace islp {

Grammar reverse_grammar(const Grammar& g) {
    Grammar out = g;
    for (auto& r : out.rules) {
        if (auto* b = std::get_if<BinaryRule>(&r)) {
            std::swap(b->left, b->right);
        } else if (auto* it = std::get_if<IterationRule>(&r)) {
            std::reverse(it->factors.begin(), it->factors.end());
            std::swap(it->k1, it->k2);
        }
    }
    return out;
}

Grammar apply_morphism(const Grammar& g, const std::vector<Text>& images) {
    Grammar out = g;
    Symbol new_sigma = 0;
    std::map<Symbol, SymbolId> letter_var; // shared terminal per output symbol

    auto letter = [&](Symbol ch) {
        auto itr = letter_var.find(ch);
        if (itr != letter_var.end()) return itr->second;
        out.rules.push_back(TerminalRule{ch});
        const SymbolId id = (SymbolId)(out.rules.size() - 1);
        letter_var.emplace(ch, id);
        return id;
    };
    std::function<SymbolId(const Text&, std::size_t, std::size_t)> tree =
        [&](const Text& w, std::size_t lo, std::size_t hi) -> SymbolId {
        if (lo == hi) return letter(w[lo]);
        const std::size_t mid = lo + (hi - lo) / 2;
        const SymbolId l = tree(w, lo, mid);
        const SymbolId r = tree(w, mid + 1, hi);
        out.rules.push_back(BinaryRule{l, r});
        return (SymbolId)(out.rules.size() - 1);
    };

    const SymbolId original = g.num_rules();
    for (SymbolId a = 0; a < original; a++) {
        auto* t = std::get_if<TerminalRule>(&g.rules[a]);
        if (!t) continue;
        if (t->ch >= images.size() || images[t->ch].empty())
            throw EmptyImage("morphism: no image for symbol " + std::to_string(t->ch));
        const Text& w = images[t->ch];
        for (Symbol ch : w) {
            if (ch == 0) throw BadParams("morphism: image contains symbol 0");
            new_sigma = std::max(new_sigma, ch);
        }
        if (w.size() == 1) {
            out.rules[a] = TerminalRule{w[0]};
        } else {
            const std::size_t mid = (w.size() - 1) / 2;
            const SymbolId l = tree(w, 0, mid);
            const SymbolId r = tree(w, mid + 1, w.size() - 1);
            out.rules[a] = BinaryRule{l, r};
        }
    }
    out.sigma = new_sigma;
    return collect_reachable(out);
}

// ---- single character edits ---------------------------------------------

namespace {

constexpr SymbolId kGone = ~SymbolId(0); // subtree vanished (delete reached it)

struct EditCtx {
    const Navigator* nav;
    std::vector<Rule>* rules;
    EditKind kind;
    Symbol s;

    SymbolId fresh(Rule r) {
        rules->push_back(std::move(r));
        return (SymbolId)(rules->size() - 1);
    }
    // m copies of b
    SymbolId run(SymbolId b, std::uint64_t m) {
        if (m == 0) return kGone;
        if (m == 1) return b;
        return fresh(IterationRule{1, m, {IterFactor{b, 0}}});
    }
    // factors[lo..hi] of one block with value i
    SymbolId block_part(const IterationRule& it, std::uint64_t i, std::size_t lo,
                        std::size_t hi) {
        if (lo > hi) return kGone;
        std::vector<IterFactor> fs(it.factors.begin() + lo, it.factors.begin() + hi + 1);
        if (fs.size() == 1) {
            std::uint64_t copies = 1;
            for (std::uint32_t x = 0; x < fs[0].exponent; x++) copies *= i;
            return run(fs[0].base, copies);
        }
        return fresh(IterationRule{i, i, std::move(fs)});
    }
    // whole blocks with values vfrom..vto in the rule's own orientation
    SymbolId blocks(const IterationRule& it, std::uint64_t vfrom, std::uint64_t vto) {
        const bool asc = it.k1 <= it.k2;
        if (asc && vfrom > vto) return kGone;
        if (!asc && vfrom < vto) return kGone;
        if (vfrom == vto) return block_part(it, vfrom, 0, it.factors.size() - 1);
        return fresh(IterationRule{vfrom, vto, it.factors});
    }
    SymbolId binarize(const std::vector<SymbolId>& seq, std::size_t lo, std::size_t hi) {
        if (lo == hi) return seq[lo];
        const std::size_t mid = lo + (hi - lo) / 2;
        const SymbolId l = binarize(seq, lo, mid);
        const SymbolId r = binarize(seq, mid + 1, hi);
        return fresh(BinaryRule{l, r});
    }
};

SymbolId edit_rec(EditCtx& cx, SymbolId a, std::uint64_t p) {
    const Grammar& g = cx.nav->grammar();
    const LengthTable& lt = cx.nav->lengths();
    assert(1 <= p && p <= lt.of(a));

    if (auto* t = std::get_if<TerminalRule>(&g.rules[a])) {
        (void)t;
        switch (cx.kind) {
        case EditKind::Substitute:
            return cx.fresh(TerminalRule{cx.s});
        case EditKind::InsertBefore: {
            const SymbolId nu = cx.fresh(TerminalRule{cx.s});
            return cx.fresh(BinaryRule{nu, a});
        }
        case EditKind::InsertAfter:
            assert(!"insert_after is rewritten to insert_before up front");
            return kGone;
        case EditKind::Delete:
            return kGone;
        }
    }

    if (auto* b = std::get_if<BinaryRule>(&g.rules[a])) {
        const std::uint64_t ll = lt.of(b->left);
        if (p <= ll) {
            const SymbolId c = edit_rec(cx, b->left, p);
            if (c == kGone) return b->right;
            return cx.fresh(BinaryRule{c, b->right});
        }
        const SymbolId c = edit_rec(cx, b->right, p - ll);
        if (c == kGone) return b->left;
        return cx.fresh(BinaryRule{b->left, c});
    }

    const auto& it = std::get<IterationRule>(g.rules[a]);
    const IterationIndex& ix = *cx.nav->index_of(a);
    const auto loc = ix.locate(p, cx.nav->power_table(), nullptr, SearchKind::Adaptive);
    const std::uint64_t i = loc.i;
    const std::uint64_t bl = ix.base_len(loc.r);
    const std::uint64_t copies = [&] {
        std::uint64_t c = 1;
        for (std::uint32_t x = 0; x < ix.exponent(loc.r); x++) c *= i;
        return c;
    }();
    const std::uint64_t q = (loc.off - 1) / bl + 1; // copy holding p, 1-based
    const std::uint64_t op = loc.off - (q - 1) * bl;
    const bool asc = it.k1 <= it.k2;

    std::vector<SymbolId> seq;
    auto push = [&seq](SymbolId x) {
        if (x != kGone) seq.push_back(x);
    };
    push(cx.blocks(it, it.k1, asc ? i - 1 : i + 1));           // blocks before
    if (loc.r > 1) push(cx.block_part(it, i, 0, loc.r - 2));   // factors before
    push(cx.run(ix.base(loc.r), q - 1));                       // copies before
    push(edit_rec(cx, ix.base(loc.r), op));                    // the edited copy
    push(cx.run(ix.base(loc.r), copies - q));                  // copies after
    if (loc.r < ix.num_factors())
        push(cx.block_part(it, i, loc.r, it.factors.size() - 1)); // factors after
    push(cx.blocks(it, asc ? i + 1 : i - 1, it.k2));           // blocks after

    if (seq.empty()) return kGone;
    return cx.binarize(seq, 0, seq.size() - 1);
}

} // namespace

Grammar edit(const Grammar& g, EditKind kind, std::uint64_t p, Symbol s) {
    Navigator nav(g);
    const std::uint64_t n = nav.text_length();

    if (p < 1 || p > n) throw OutOfRange("edit: position out of range");
    if (kind != EditKind::Delete && s < 1)
        throw BadParams("edit: symbol 0 is reserved");
    if (kind == EditKind::Delete && n == 1)
        throw BadParams("edit: cannot delete the only symbol");

    Grammar out = g;
    if (kind != EditKind::Delete) out.sigma = std::max(out.sigma, s);
    EditCtx cx{&nav, &out.rules, kind, s};

    SymbolId ns;
    if (kind == EditKind::InsertBefore && p == 1) {
        // prepend: wrap the start symbol, no path walk needed
        const SymbolId nu = cx.fresh(TerminalRule{s});
        ns = cx.fresh(BinaryRule{nu, g.start});
    } else if (kind == EditKind::InsertAfter && p == n) {
        // append: same wrap on the other side
        const SymbolId nu = cx.fresh(TerminalRule{s});
        ns = cx.fresh(BinaryRule{g.start, nu});
    } else if (kind == EditKind::InsertAfter) {
        // inserting after p is inserting before p+1
        cx.kind = EditKind::InsertBefore;
        ns = edit_rec(cx, g.start, p + 1);
    } else {
        ns = edit_rec(cx, g.start, p);
    }
    assert(ns != kGone);
    out.start = ns;
    return collect_reachable(out);
}

} // namespace islp
