// Grammar-to-grammar transforms: reversal, alphabet morphisms, and single
// character edits (insert, delete, substitute) by rebuilding one
// root-to-terminal path. Iteration rules crossed by the path are cut into
// the blocks before, the factors before, the copies before, the edited
// copy, the copies after, the factors after and the blocks after; pieces of
// count one collapse to their symbol and empty pieces disappear.
#ifndef ISLP_TRANSFORMS_HPP
#define ISLP_TRANSFORMS_HPP

#include <cstdint>
#include <vector>

#include "islp/grammar.hpp"

namespace islp {

// exp(out) = reverse of exp(g); same size, rule for rule
Grammar reverse_grammar(const Grammar& g);

// exp(out) = image of exp(g) under s -> images[s]; images is indexed by
// symbol, entries 1..sigma are used. Throws EmptyImage on an empty image.
Grammar apply_morphism(const Grammar& g, const std::vector<Text>& images);

enum class EditKind { Substitute, InsertBefore, InsertAfter, Delete };

// Substitute: T[p] becomes s. InsertBefore/InsertAfter: s lands just before
// or after T[p]. Delete: removes T[p]; refuses when the text has length one.
// p is 1..n for every kind; s may extend the alphabet (sigma grows).
Grammar edit(const Grammar& g, EditKind kind, std::uint64_t p, Symbol s = 0);

} // namespace islp

#endif
