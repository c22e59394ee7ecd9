#include "islp/format.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace islp {

static ParseError fail(std::size_t line, const std::string& what) {
    return ParseError("line " + std::to_string(line) + ": " + what);
}

Grammar parse_grammar(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;

    auto next_line = [&]() -> bool {
        while (std::getline(in, line)) {
            lineno++;
            if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
        }
        return false;
    };

    if (!next_line()) throw ParseError("empty input");
    std::istringstream head(line);
    std::string magic;
    std::uint64_t num_rules = 0, start = 0, sigma = 0;
    if (!(head >> magic >> num_rules >> start >> sigma) || magic != "islp")
        throw fail(lineno, "expected header 'islp <num_rules> <start_id> <sigma>'");
    if (num_rules > (1u << 30)) throw fail(lineno, "unreasonable rule count");

    Grammar g;
    g.rules.resize(num_rules);
    g.start = (SymbolId)start;
    g.sigma = (Symbol)sigma;
    std::vector<bool> defined(num_rules, false);

    for (std::uint64_t k = 0; k < num_rules; k++) {
        if (!next_line()) throw ParseError("unexpected end of input: missing rules");
        std::istringstream ls(line);
        std::uint64_t id;
        std::string arrow, kind;
        if (!(ls >> id >> arrow >> kind) || arrow != "->")
            throw fail(lineno, "expected '<id> -> <kind> ...'");
        if (id >= num_rules) throw fail(lineno, "rule id out of range");
        if (defined[id]) throw fail(lineno, "duplicate rule id");
        defined[id] = true;

        if (kind == "term") {
            std::uint64_t ch;
            if (!(ls >> ch)) throw fail(lineno, "term rule needs one integer");
            g.rules[id] = TerminalRule{(Symbol)ch};
        } else if (kind == "bin") {
            std::uint64_t l, r;
            if (!(ls >> l >> r)) throw fail(lineno, "bin rule needs two ids");
            g.rules[id] = BinaryRule{(SymbolId)l, (SymbolId)r};
        } else if (kind == "iter") {
            IterationRule it;
            if (!(ls >> it.k1 >> it.k2)) throw fail(lineno, "iter rule needs k1 k2");
            std::string tok;
            while (ls >> tok) {
                std::uint64_t base, c;
                if (tok.size() < 5 || tok.front() != '(' || tok.back() != ')' ||
                    sscanf(tok.c_str(), "(%lu,%lu)", &base, &c) != 2)
                    throw fail(lineno, "bad factor, expected (<id>,<c>)");
                if (c > 0xffffffffull) throw fail(lineno, "factor exponent too large");
                it.factors.push_back({(SymbolId)base, (std::uint32_t)c});
            }
            if (it.factors.empty()) throw fail(lineno, "iter rule needs at least one factor");
            g.rules[id] = std::move(it);
        } else {
            throw fail(lineno, "unknown rule kind '" + kind + "'");
        }
        std::string rest;
        if (ls >> rest) throw fail(lineno, "trailing tokens");
    }
    if (next_line()) throw fail(lineno, "trailing content after last rule");
    return g;
}

Grammar parse_grammar(const std::string& text) {
    std::istringstream in(text);
    return parse_grammar(in);
}

void serialize_grammar(const Grammar& g, std::ostream& out) {
    out << "islp " << g.num_rules() << ' ' << g.start << ' ' << g.sigma << '\n';
    for (SymbolId a = 0; a < g.num_rules(); a++) {
        out << a << " -> ";
        const Rule& r = g.rules[a];
        if (auto* t = std::get_if<TerminalRule>(&r)) {
            out << "term " << t->ch;
        } else if (auto* b = std::get_if<BinaryRule>(&r)) {
            out << "bin " << b->left << ' ' << b->right;
        } else {
            const auto& it = std::get<IterationRule>(r);
            out << "iter " << it.k1 << ' ' << it.k2;
            for (const auto& f : it.factors)
                out << " (" << f.base << ',' << f.exponent << ')';
        }
        out << '\n';
    }
}

std::string serialize_grammar(const Grammar& g) {
    std::ostringstream out;
    serialize_grammar(g, out);
    return out.str();
}

} // namespace islp
