// Height balancing.
//
// balance() rewrites a valid grammar into an equivalent one whose height is
// O(log n) while growing the size by at most a constant factor:
//   1. split_special_rules() rewrites every iteration rule so that no symbol
//      occurs exactly once in any rule's conceptual output (only k1 = k2
//      rules can violate this; their once-occurring factors are pulled out
//      into plain binary rules around sub-iterations).
//   2. The conceptual SLP (iteration rules unfolded to their output
//      sequence, represented by occurrence counts only) is decomposed by
//      lambda(v) = (floor log2 paths(root,v), floor log2 paths(v,sinks)):
//      edges with equal lambda at both ends form vertex-disjoint paths, and
//      every root-sink path crosses at most 2 log2(n) non-path edges.
//   3. Each decomposition path A_0 .. A_p is re-derived as
//      A_i -> S A_p P, where S and P come from suffix/prefix variable
//      fragments built over the off-path siblings (weight-balanced, depth
//      from a fragment variable to a leaf is logarithmic in their weight
//      ratio). Path tails keep their original rules, so iteration rules are
//      never touched here.
//   4. Rules longer than two symbols are binarized and unreachable symbols
//      dropped.
#ifndef ISLP_BALANCE_HPP
#define ISLP_BALANCE_HPP

#include <cstdint>
#include <vector>

#include "islp/grammar.hpp"
#include "islp/lengths.hpp"

namespace islp {

// collapsed multiplicity view of the conceptual SLP DAG
struct DagView {
    // children[a] = (child, occurrences of child in a's conceptual output),
    // child ids ascending
    std::vector<std::vector<std::pair<SymbolId, std::uint64_t>>> children;
};
DagView dag_view(const Grammar& g);

struct ScDecomposition {
    std::vector<std::uint64_t> paths_from_root; // pi(root, v)
    std::vector<std::uint64_t> paths_to_sinks;  // pi(v, sinks) = |exp(v)|
    // sc_child[v]: 0 = left, 1 = right child continues v's path, -1 = none
    std::vector<std::int8_t> sc_child;
    std::vector<SymbolId> sc_parent; // incoming path edge, ~0u if none
    // maximal paths with >= 2 nodes, head first
    std::vector<std::vector<SymbolId>> paths;
};
// pre: valid, acyclic, every symbol reachable from the start
ScDecomposition sc_decompose(const Grammar& g);

// rewrites k1 = k2 iteration rules so every factor of every remaining
// iteration rule occurs >= 2 times in the rule's output; result expands to
// the same text, size at most ~2x
Grammar split_special_rules(const Grammar& g);

// suffix (resp. prefix) variable fragments over a weighted string. Appends
// fresh Binary rules to `rules` and returns, for every position p (1-based),
// a symbol deriving exactly elems[p-1] elems[p] ... (resp. ... elems[p-1]).
// Fragments add at most ~3 * |elems| fresh symbols, and the path from the
// returned variable of position p down to the element at position q is
// short: hops <= ~3 + 2 * (log2 weight(var) - log2 weight(elem q)).
std::vector<SymbolId> build_suffix_fragment(
    const std::vector<std::pair<SymbolId, std::uint64_t>>& elems,
    std::vector<Rule>& rules);
std::vector<SymbolId> build_prefix_fragment(
    const std::vector<std::pair<SymbolId, std::uint64_t>>& elems,
    std::vector<Rule>& rules);

// full pipeline; result is equivalent, with height O(log n)
Grammar balance(const Grammar& g);

// caps iteration exponents without changing the expansion or the size:
// rules iterating only over i = 1 get all exponents zeroed; any other rule
// whose exponent cannot fit its expansion raises InvalidExponent
Grammar reduce_degree(const Grammar& g);

} // namespace islp

#endif
