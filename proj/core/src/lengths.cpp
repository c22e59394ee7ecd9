#include "islp/lengths.hpp"
#include "islp/power_sums.hpp"

#include <algorithm>
#include <memory>

namespace islp {

std::uint64_t checked_pow(std::uint64_t i, std::uint32_t c) {
    std::uint64_t p = 1;
    for (std::uint32_t x = 0; x < c; x++) {
        if (i != 0 && p > kLenGuard / i)
            throw Overflow("checked_pow: value exceeds 62 bits");
        p *= i;
        if (p >= kLenGuard) throw Overflow("checked_pow: value exceeds 62 bits");
    }
    return p;
}

std::uint64_t factor_copy_count(const IterationRule& r, std::size_t j) {
    const std::uint64_t lo = std::min(r.k1, r.k2), hi = std::max(r.k1, r.k2);
    const std::uint32_t c = r.factors.at(j).exponent;
    if (lo == hi) return checked_pow(lo, c); // single block
    // multi-block range: any exponent beyond 62 overflows since hi >= 2
    if (c > 62) throw Overflow("factor_copy_count: exponent too large for range");
    static thread_local std::unique_ptr<PowerSumTable> table;
    if (!table || table->max_exponent() < c)
        table = std::make_unique<PowerSumTable>(std::max<unsigned>(c, 8));
    BigInt cnt = table->range_power_sum(c, lo, hi);
    if (cnt >= BigInt((unsigned long)1) << 62)
        throw Overflow("factor_copy_count: count exceeds 62 bits");
    return (std::uint64_t)cnt.get_ui();
}

LengthTable compute_lengths(const Grammar& g) {
    auto order = topological_order(g);
    if (!order) throw BadParams("compute_lengths: grammar has a cycle");

    LengthTable lt;
    lt.len.assign(g.num_rules(), 0);
    const BigInt guard = BigInt((unsigned long)1) << 62;

    for (SymbolId a : *order) {
        const Rule& r = g.rules[a];
        if (std::holds_alternative<TerminalRule>(r)) {
            lt.len[a] = 1;
        } else if (auto* b = std::get_if<BinaryRule>(&r)) {
            const std::uint64_t s = lt.len[b->left] + lt.len[b->right];
            if (s >= kLenGuard || s < lt.len[b->left])
                throw Overflow("compute_lengths: length exceeds 62 bits");
            lt.len[a] = s;
        } else {
            const auto& it = std::get<IterationRule>(r);
            BigInt acc(0);
            for (std::size_t j = 0; j < it.factors.size(); j++) {
                acc += BigInt((unsigned long)lt.len[it.factors[j].base]) *
                       BigInt((unsigned long)factor_copy_count(it, j));
                if (acc >= guard)
                    throw Overflow("compute_lengths: length exceeds 62 bits");
            }
            lt.len[a] = (std::uint64_t)acc.get_ui();
        }
    }
    return lt;
}

} // namespace islp
