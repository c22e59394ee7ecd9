#include "islp/grammar.hpp"
#include "islp/lengths.hpp"
#include "islp/power_sums.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace islp {

std::uint64_t rule_size(const Rule& r) {
    if (std::holds_alternative<TerminalRule>(r)) return 1;
    if (std::holds_alternative<BinaryRule>(r)) return 2;
    return 2 + 2 * std::get<IterationRule>(r).factors.size();
}

std::uint64_t grammar_size(const Grammar& g) {
    std::uint64_t s = 0;
    for (const auto& r : g.rules) s += rule_size(r);
    return s;
}

std::uint32_t degree(const Grammar& g) {
    std::uint32_t d = 0;
    for (const auto& r : g.rules)
        if (auto* it = std::get_if<IterationRule>(&r))
            for (const auto& f : it->factors) d = std::max(d, f.exponent);
    return d;
}

bool is_rlslp_form(const Grammar& g) {
    for (const auto& r : g.rules)
        if (auto* it = std::get_if<IterationRule>(&r))
            if (it->factors.size() != 1 || it->factors[0].exponent != 0)
                return false;
    return true;
}

bool ValidationReport::has(Violation::Code c) const {
    return std::any_of(violations.begin(), violations.end(),
                       [&](const Violation& v) { return v.code == c; });
}

// children of a rule, with repeats collapsed (enough for topo/reachability)
static void each_child(const Rule& r, const std::function<void(SymbolId)>& fn) {
    if (auto* b = std::get_if<BinaryRule>(&r)) {
        fn(b->left);
        if (b->right != b->left) fn(b->right);
    } else if (auto* it = std::get_if<IterationRule>(&r)) {
        SymbolId prev = ~SymbolId(0);
        for (const auto& f : it->factors) {
            if (f.base != prev) fn(f.base);
            prev = f.base;
        }
    }
}

std::optional<std::vector<SymbolId>> topological_order(const Grammar& g) {
    const std::size_t n = g.num_rules();
    // Kahn over the dependency graph: edge A -> B when B occurs in A's rule
    std::vector<std::uint32_t> pending(n, 0); // distinct children not yet done
    std::vector<std::vector<SymbolId>> parents(n);
    for (SymbolId a = 0; a < n; a++) {
        std::vector<SymbolId> seen;
        each_child(g.rules[a], [&](SymbolId b) {
            if (b >= n) return; // dangling, reported by validate
            if (std::find(seen.begin(), seen.end(), b) != seen.end()) return;
            seen.push_back(b);
            parents[b].push_back(a);
            pending[a]++;
        });
    }
    std::vector<SymbolId> order;
    order.reserve(n);
    std::vector<SymbolId> queue;
    for (SymbolId a = 0; a < n; a++)
        if (pending[a] == 0) queue.push_back(a);
    while (!queue.empty()) {
        SymbolId a = queue.back();
        queue.pop_back();
        order.push_back(a);
        for (SymbolId p : parents[a])
            if (--pending[p] == 0) queue.push_back(p);
    }
    if (order.size() != n) return std::nullopt;
    return order;
}

ValidationReport validate(const Grammar& g) {
    ValidationReport rep;
    const std::size_t n = g.num_rules();
    auto add = [&](Violation::Code c, SymbolId s, std::string d) {
        rep.violations.push_back({c, s, std::move(d)});
    };

    if (g.sigma == 0)
        add(Violation::Code::EmptyAlphabet, 0, "sigma must be >= 1");
    if (n == 0 || g.start >= n)
        add(Violation::Code::BadStart, g.start, "start symbol out of range");

    bool structure_ok = true;
    for (SymbolId a = 0; a < n; a++) {
        const Rule& r = g.rules[a];
        if (auto* t = std::get_if<TerminalRule>(&r)) {
            if (t->ch < 1 || t->ch > g.sigma) {
                add(Violation::Code::BadTerminal, a, "terminal outside [1..sigma]");
                structure_ok = false;
            }
        } else if (auto* b = std::get_if<BinaryRule>(&r)) {
            if (b->left >= n || b->right >= n) {
                add(Violation::Code::DanglingSymbol, a, "binary rule references undefined symbol");
                structure_ok = false;
            }
        } else {
            const auto& it = std::get<IterationRule>(r);
            if (it.factors.empty()) {
                add(Violation::Code::EmptyFactors, a, "iteration rule with no factors");
                structure_ok = false;
            }
            if (it.k1 == 0 || it.k2 == 0) {
                add(Violation::Code::ZeroIterationBound, a, "iteration bounds must be >= 1");
                structure_ok = false;
            }
            for (const auto& f : it.factors)
                if (f.base >= n) {
                    add(Violation::Code::DanglingSymbol, a, "iteration factor references undefined symbol");
                    structure_ok = false;
                    break;
                }
        }
    }
    if (!structure_ok || n == 0) return rep;

    auto order = topological_order(g);
    if (!order) {
        // find one symbol still blocked to name in the report
        add(Violation::Code::Cycle, g.start, "dependency graph has a cycle");
        return rep;
    }

    try {
        compute_lengths(g);
    } catch (const Overflow& e) {
        add(Violation::Code::LengthOverflow, g.start, e.what());
    }
    return rep;
}

static std::uint64_t saturating_pow(std::uint64_t i, std::uint32_t c, std::uint64_t cap) {
    std::uint64_t p = 1;
    for (std::uint32_t x = 0; x < c; x++) {
        if (i != 0 && p > cap / i) return cap + 1;
        p *= i;
    }
    return p;
}

Text expand(const Grammar& g, SymbolId a, std::uint64_t cap) {
    if (a >= g.num_rules()) throw OutOfRange("expand: unknown symbol");
    Text out;
    out.reserve(std::min<std::uint64_t>(cap, 1 << 20));

    // recursive walk; depth is bounded by the derivation height
    std::function<void(SymbolId)> walk = [&](SymbolId s) {
        const Rule& r = g.rules[s];
        if (auto* t = std::get_if<TerminalRule>(&r)) {
            if (out.size() == cap) throw CapExceeded("expand: cap exceeded");
            out.push_back(t->ch);
        } else if (auto* b = std::get_if<BinaryRule>(&r)) {
            walk(b->left);
            walk(b->right);
        } else {
            const auto& it = std::get<IterationRule>(r);
            const std::uint64_t m = it.num_blocks();
            for (std::uint64_t b = 1; b <= m; b++) {
                const std::uint64_t i = it.block_value(b);
                for (const auto& f : it.factors) {
                    std::uint64_t copies = saturating_pow(i, f.exponent, cap);
                    for (std::uint64_t k = 0; k < copies; k++) walk(f.base);
                }
            }
        }
    };
    walk(a);
    return out;
}

std::vector<std::pair<SymbolId, std::uint64_t>>
occurrence_counts(const Grammar& g, SymbolId a) {
    if (a >= g.num_rules()) throw OutOfRange("occurrence_counts: unknown symbol");
    std::map<SymbolId, BigInt> acc;
    const Rule& r = g.rules[a];
    if (auto* b = std::get_if<BinaryRule>(&r)) {
        acc[b->left] += 1;
        acc[b->right] += 1;
    } else if (auto* it = std::get_if<IterationRule>(&r)) {
        for (std::size_t j = 0; j < it->factors.size(); j++)
            acc[it->factors[j].base] += BigInt((unsigned long)factor_copy_count(*it, j));
    }
    std::vector<std::pair<SymbolId, std::uint64_t>> out;
    for (auto& [sym, cnt] : acc) {
        if (cnt >= BigInt((unsigned long)1) << 62)
            throw Overflow("occurrence_counts: count exceeds 62 bits");
        out.emplace_back(sym, (std::uint64_t)cnt.get_ui());
    }
    return out;
}

Grammar collect_reachable(const Grammar& g) {
    if (g.start >= g.num_rules()) throw BadParams("collect_reachable: bad start");
    std::vector<bool> seen(g.num_rules(), false);
    std::vector<SymbolId> stack{g.start};
    seen[g.start] = true;
    while (!stack.empty()) {
        SymbolId a = stack.back();
        stack.pop_back();
        each_child(g.rules[a], [&](SymbolId b) {
            if (b < g.num_rules() && !seen[b]) {
                seen[b] = true;
                stack.push_back(b);
            }
        });
    }
    std::vector<SymbolId> remap(g.num_rules(), 0);
    Grammar out;
    out.sigma = g.sigma;
    for (SymbolId a = 0; a < g.num_rules(); a++)
        if (seen[a]) {
            remap[a] = (SymbolId)out.rules.size();
            out.rules.push_back(g.rules[a]);
        }
    for (auto& r : out.rules) {
        if (auto* b = std::get_if<BinaryRule>(&r)) {
            b->left = remap[b->left];
            b->right = remap[b->right];
        } else if (auto* it = std::get_if<IterationRule>(&r)) {
            for (auto& f : it->factors) f.base = remap[f.base];
        }
    }
    out.start = remap[g.start];
    return out;
}

std::uint64_t height(const Grammar& g) {
    if (g.start >= g.num_rules()) throw BadParams("height: bad start symbol");
    auto order = topological_order(g);
    if (!order) throw BadParams("height: grammar has a cycle");
    std::vector<std::uint64_t> h(g.num_rules(), 0);
    for (SymbolId a : *order) {
        const Rule& r = g.rules[a];
        if (std::holds_alternative<TerminalRule>(r)) {
            h[a] = 1;
        } else if (auto* b = std::get_if<BinaryRule>(&r)) {
            h[a] = 1 + std::max(h[b->left], h[b->right]);
        } else {
            std::uint64_t m = 0;
            for (const auto& f : std::get<IterationRule>(r).factors)
                m = std::max(m, h[f.base]);
            h[a] = 1 + m;
        }
    }
    return h[g.start];
}

} // namespace islp
