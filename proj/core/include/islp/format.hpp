// Grammar file format, lossless round-trip:
//
//   islp <num_rules> <start_id> <sigma>
//   <id> -> term <int>
//   <id> -> bin <id> <id>
//   <id> -> iter <k1> <k2> (<id>,<c>) [(<id>,<c>) ...]
//
// One rule line per symbol, every id in [0..num_rules) defined exactly once.
#ifndef ISLP_FORMAT_HPP
#define ISLP_FORMAT_HPP

#include <iosfwd>
#include <string>

#include "islp/grammar.hpp"

namespace islp {

Grammar parse_grammar(std::istream& in);          // throws ParseError
Grammar parse_grammar(const std::string& text);

void serialize_grammar(const Grammar& g, std::ostream& out);
std::string serialize_grammar(const Grammar& g);

} // namespace islp

#endif
