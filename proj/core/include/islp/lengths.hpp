// Expansion lengths |exp(A)| for every symbol, exact, guarded to 62 bits.
#ifndef ISLP_LENGTHS_HPP
#define ISLP_LENGTHS_HPP

#include <cstdint>
#include <vector>

#include "islp/grammar.hpp"

namespace islp {

struct LengthTable {
    std::vector<std::uint64_t> len;
    std::uint64_t of(SymbolId a) const { return len[a]; }
};

// bottom-up over a topological order; iteration rule lengths are
// sum_j |exp(B_j)| * (p_{c_j}(hi) - p_{c_j}(lo-1)) with [lo..hi] the value
// range of the rule, evaluated exactly. Throws Overflow if any length would
// reach 2^62, and expects a structurally valid, acyclic grammar.
LengthTable compute_lengths(const Grammar& g);

// exact number of copies of factor j's base contributed by the whole range
// of an iteration rule (all blocks); throws Overflow past the 62-bit guard
std::uint64_t factor_copy_count(const IterationRule& r, std::size_t j);

// i^c guarded against the 62-bit cap; throws Overflow beyond it
std::uint64_t checked_pow(std::uint64_t i, std::uint32_t c);

} // namespace islp

#endif
