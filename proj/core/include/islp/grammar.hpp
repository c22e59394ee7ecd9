// Iterated straight-line programs.
//
// A grammar is a list of rules indexed by SymbolId, one rule per symbol.
// Rule kinds:
//   Terminal   A -> a            (a in [1..sigma])
//   Binary     A -> B C
//   Iteration  A -> prod_{i=k1}^{k2} B_1^{i^{c_1}} ... B_t^{i^{c_t}}
// A descending range (k1 > k2) enumerates i = k1, k1-1, ..., k2. Setting
// k1 = 1, k2 = t with a single factor (B, 0) per block recovers run-length
// rules A -> B^t, so 0-ISLPs coincide with RLSLPs.
//
// Grammars are immutable after construction; all query structures are built
// once and read concurrently without locks.
#ifndef ISLP_GRAMMAR_HPP
#define ISLP_GRAMMAR_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "islp/error.hpp"

namespace islp {

using SymbolId = std::uint32_t;
using Symbol = std::uint32_t; // alphabet symbol, 1..sigma
using Text = std::vector<Symbol>;

// expansion lengths and path counts must fit in 62 bits
inline constexpr std::uint64_t kLenGuard = (std::uint64_t(1) << 62);

struct TerminalRule {
    Symbol ch;
};

struct BinaryRule {
    SymbolId left, right;
};

struct IterFactor {
    SymbolId base;
    std::uint32_t exponent;
    bool operator==(const IterFactor&) const = default;
};

struct IterationRule {
    std::uint64_t k1, k2; // both >= 1; k1 > k2 means descending
    std::vector<IterFactor> factors;

    std::uint64_t num_blocks() const {
        return (k1 >= k2 ? k1 - k2 : k2 - k1) + 1;
    }
    // iteration value of the b-th enumerated block, b in [1..num_blocks]
    std::uint64_t block_value(std::uint64_t b) const {
        return k1 >= k2 ? k1 - (b - 1) : k1 + (b - 1);
    }
};

using Rule = std::variant<TerminalRule, BinaryRule, IterationRule>;

struct Grammar {
    std::vector<Rule> rules;
    SymbolId start = 0;
    Symbol sigma = 0;

    std::size_t num_rules() const { return rules.size(); }
};

// size of a rule: terminal 1, binary 2, iteration 2 + 2t
std::uint64_t rule_size(const Rule& r);
// total size of the grammar (sum of rule sizes)
std::uint64_t grammar_size(const Grammar& g);
// max iteration exponent over all rules (0 if none)
std::uint32_t degree(const Grammar& g);
// true if every iteration rule has one factor with exponent 0 (run-length form)
bool is_rlslp_form(const Grammar& g);

// derivation-tree height after conceptually unfolding iteration rules into
// their output sequence: terminal rules count 1, every other rule adds 1
// over the max child height
std::uint64_t height(const Grammar& g);

struct Violation {
    enum class Code {
        BadStart,
        DanglingSymbol,
        EmptyFactors,
        ZeroIterationBound,
        BadTerminal,
        Cycle,
        LengthOverflow,
        EmptyAlphabet,
    };
    Code code;
    SymbolId symbol;
    std::string detail;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
    bool has(Violation::Code c) const;
};

// checks structure, acyclicity, and (when acyclic) the 62-bit length guard;
// violations are data, not exceptions
ValidationReport validate(const Grammar& g);

// topological order of symbols (children before parents), or nullopt if the
// dependency graph has a cycle
std::optional<std::vector<SymbolId>> topological_order(const Grammar& g);

// expansion of symbol a, aborting with CapExceeded once the output would
// pass cap; does not require precomputed lengths
Text expand(const Grammar& g, SymbolId a, std::uint64_t cap);

// number of occurrences of each distinct base symbol in the conceptual
// output sequence of an iteration rule, as (symbol, count) sorted by symbol;
// counts are exact and checked against the 62-bit guard
std::vector<std::pair<SymbolId, std::uint64_t>>
occurrence_counts(const Grammar& g, SymbolId a);

// copy keeping only symbols reachable from the start, ids remapped in
// ascending order of the original ids
Grammar collect_reachable(const Grammar& g);

} // namespace islp

#endif
