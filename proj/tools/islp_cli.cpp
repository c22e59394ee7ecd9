// Command line front end. Subcommands read a grammar from --grammar (default
// stdin) or a text from --text, and write grammars to stdout so they pipe
// into each other. Exit codes: 0 ok, 1 usage, 2 bad input (parse or
// validation).
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "islp/balance.hpp"
#include "islp/composable.hpp"
#include "islp/format.hpp"
#include "islp/navigate.hpp"
#include "islp/oracles.hpp"
#include "islp/queries.hpp"
#include "islp/transforms.hpp"

namespace {

std::string read_stream(std::istream& in) {
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string read_input(const std::string& path) {
    if (path == "-") return read_stream(std::cin);
    std::ifstream f(path, std::ios::binary);
    if (!f) throw islp::BadParams("cannot open " + path);
    return read_stream(f);
}

islp::Grammar load_grammar(const std::string& path) {
    islp::Grammar g = islp::parse_grammar(read_input(path));
    auto rep = islp::validate(g);
    if (!rep.ok()) {
        for (const auto& v : rep.violations)
            std::cerr << "invalid grammar: symbol " << v.symbol << ": " << v.detail
                      << "\n";
        throw islp::BadParams("grammar failed validation");
    }
    return g;
}

void emit(const islp::Grammar& g) { islp::serialize_grammar(g, std::cout); }

void print_trace(const std::vector<islp::TraceEntry>& trace) {
    for (const auto& e : trace)
        std::cerr << "iter i=" << e.i << " r=" << e.r << " offset=" << e.offset
                  << "\n";
}

// c=image pairs separated by commas or newlines, e.g. a=ab,b=ba
std::vector<islp::Text> parse_map(const std::string& map_text) {
    std::vector<islp::Text> images(256);
    std::string item;
    auto flush = [&] {
        if (!item.empty() && item.back() == '\r') item.pop_back();
        if (item.empty()) return;
        if (item.size() < 2 || item[1] != '=')
            throw islp::BadParams("morphism map items look like c=image");
        const unsigned char from = (unsigned char)item[0];
        images[from] = islp::text_from_bytes(item.substr(2));
        item.clear();
    };
    for (char ch : map_text) {
        if (ch == ',' || ch == '\n') flush();
        else item.push_back(ch);
    }
    flush();
    return images;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"iterated straight-line program toolkit"};
    app.require_subcommand(1);

    std::string gpath = "-";
    std::string tpath = "-";
    std::uint64_t seed = 1;
    bool trace = false;

    auto add_grammar_opt = [&](CLI::App* c) {
        c->add_option("-g,--grammar", gpath, "grammar file, - for stdin");
    };
    auto add_text_opt = [&](CLI::App* c) {
        c->add_option("-t,--text", tpath, "text file, - for stdin");
    };

    // validate
    auto* c_validate = app.add_subcommand("validate", "check a grammar");
    add_grammar_opt(c_validate);

    // build-naive
    auto* c_build = app.add_subcommand("build-naive", "compress a text into a run-length grammar");
    add_text_opt(c_build);
    c_build->add_option("--seed", seed, "tie-break seed");

    // gen
    std::string family, out_text, out_grammar;
    std::uint64_t fam_param = 1;
    auto* c_gen = app.add_subcommand("gen", "emit a family grammar: s_k, fibonacci, thue-morse");
    c_gen->add_option("family", family, "s_k | fibonacci | thue-morse")->required();
    c_gen->add_option("param", fam_param, "family parameter")->required();
    c_gen->add_option("--out-text", out_text, "also write the expanded text to a file");
    c_gen->add_option("--out-grammar", out_grammar, "write the grammar to a file instead of stdout");

    // balance
    auto* c_balance = app.add_subcommand("balance", "rebalance to logarithmic height");
    add_grammar_opt(c_balance);

    // reduce-degree
    auto* c_reduce = app.add_subcommand("reduce-degree", "drop unusable exponents");
    add_grammar_opt(c_reduce);

    // access
    std::uint64_t pos = 1, pos2 = 1, span = 1;
    auto* c_access = app.add_subcommand("access", "print T[p]");
    add_grammar_opt(c_access);
    c_access->add_option("pos", pos, "position, 1-based")->required();
    c_access->add_flag("--trace", trace, "log iteration rule decisions");

    // extract
    auto* c_extract = app.add_subcommand("extract", "print T[l..l+len-1]");
    add_grammar_opt(c_extract);
    c_extract->add_option("l", pos, "start, 1-based")->required();
    c_extract->add_option("len", span, "length")->required();
    c_extract->add_flag("--trace", trace, "log iteration rule decisions");

    // rmq / nsv / psv
    auto* c_rmq = app.add_subcommand("rmq", "leftmost minimum in T[p..q]");
    add_grammar_opt(c_rmq);
    c_rmq->add_option("p", pos)->required();
    c_rmq->add_option("q", pos2)->required();

    std::uint64_t thr_value = 0;
    auto* c_nsv = app.add_subcommand("nsv", "smallest q >= p with T[q] < v, n+1 if none");
    add_grammar_opt(c_nsv);
    c_nsv->add_option("p", pos)->required();
    c_nsv->add_option("v", thr_value, "threshold value")->required();

    auto* c_psv = app.add_subcommand("psv", "largest q <= p with T[q] < v, 0 if none");
    add_grammar_opt(c_psv);
    c_psv->add_option("p", pos)->required();
    c_psv->add_option("v", thr_value, "threshold value")->required();

    // kr
    std::uint64_t kr_mu = (1ull << 61) - 1, kr_base = 0;
    auto* c_kr = app.add_subcommand("kr", "Karp-Rabin fingerprint of T[i..j]");
    add_grammar_opt(c_kr);
    c_kr->add_option("i", pos)->required();
    c_kr->add_option("j", pos2)->required();
    c_kr->add_option("--mu", kr_mu, "prime modulus");
    c_kr->add_option("-c,--c", kr_base, "base, 0 draws from the seed");
    c_kr->add_option("--seed", seed, "seed for the base");

    // reverse
    auto* c_reverse = app.add_subcommand("reverse", "grammar of the reversed text");
    add_grammar_opt(c_reverse);

    // morph
    std::string map_path;
    auto* c_morph = app.add_subcommand("morph", "apply a symbol-to-string morphism");
    add_grammar_opt(c_morph);
    c_morph->add_option("mapfile", map_path, "file of c=image lines, - for stdin")->required();

    // edit
    std::uint64_t edit_pos = 1;
    std::string edit_op, edit_char;
    auto* c_edit = app.add_subcommand("edit", "single character insert, delete or substitute");
    add_grammar_opt(c_edit);
    c_edit->add_option("op", edit_op, "substitute | insert_before | insert_after | delete")->required();
    c_edit->add_option("pos", edit_pos, "position, 1-based")->required();
    c_edit->add_option("char", edit_char, "symbol for insert and substitute");

    // measures
    std::size_t delta_cap = 100000;
    auto* c_measures = app.add_subcommand("measures", "print n delta z r r_dollar of a text");
    c_measures->add_option("file", tpath, "text file, - for stdin");
    c_measures->add_option("--delta-cap", delta_cap, "refuse longer texts");

    // stats
    auto* c_stats = app.add_subcommand("stats", "grammar size, degree, height, text length");
    add_grammar_opt(c_stats);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1; // usage problems are exit 1, help is 0
    }

    try {
        if (c_validate->parsed()) {
            islp::Grammar g = islp::parse_grammar(read_input(gpath));
            auto rep = islp::validate(g);
            if (rep.ok()) {
                std::cout << "ok\n";
                return 0;
            }
            for (const auto& v : rep.violations)
                std::cout << "symbol " << v.symbol << ": " << v.detail << "\n";
            return 2;
        }
        if (c_build->parsed()) {
            const islp::Text t = islp::text_from_bytes(read_input(tpath));
            emit(islp::build_naive_rlslp(t, seed));
            return 0;
        }
        if (c_gen->parsed()) {
            islp::Grammar g;
            if (family == "s_k") g = islp::grammar_s_k(fam_param);
            else if (family == "fibonacci") g = islp::grammar_fibonacci((unsigned)fam_param);
            else if (family == "thue-morse") g = islp::grammar_thue_morse((unsigned)fam_param);
            else throw islp::BadParams("unknown family " + family);
            if (!out_text.empty()) {
                std::ofstream f(out_text, std::ios::binary);
                if (!f) throw islp::BadParams("cannot open " + out_text);
                f << islp::bytes_from_text(islp::expand(g, g.start, 1u << 30));
            }
            if (!out_grammar.empty()) {
                std::ofstream f(out_grammar, std::ios::binary);
                if (!f) throw islp::BadParams("cannot open " + out_grammar);
                islp::serialize_grammar(g, f);
            } else {
                emit(g);
            }
            return 0;
        }
        if (c_balance->parsed()) {
            islp::Grammar g = load_grammar(gpath);
            const std::uint64_t size_in = islp::grammar_size(g);
            const std::uint64_t height_in = islp::height(g);
            islp::Grammar b = islp::balance(g);
            const islp::LengthTable lt = islp::compute_lengths(b);
            // stats line: size_in size_out height_in height_out n
            std::cerr << size_in << " " << islp::grammar_size(b) << " " << height_in
                      << " " << islp::height(b) << " " << lt.of(b.start) << "\n";
            emit(b);
            return 0;
        }
        if (c_reduce->parsed()) {
            emit(islp::reduce_degree(load_grammar(gpath)));
            return 0;
        }
        if (c_access->parsed()) {
            islp::Navigator nav(load_grammar(gpath));
            std::vector<islp::TraceEntry> tr;
            const islp::Symbol s = nav.access(pos, nullptr, trace ? &tr : nullptr);
            if (trace) print_trace(tr);
            std::cout << islp::bytes_from_text({s}) << "\n";
            return 0;
        }
        if (c_extract->parsed()) {
            islp::Navigator nav(load_grammar(gpath));
            std::vector<islp::TraceEntry> tr;
            const islp::Text out = nav.extract(pos, span, nullptr, trace ? &tr : nullptr);
            if (trace) print_trace(tr);
            std::cout << islp::bytes_from_text(out) << "\n";
            return 0;
        }
        if (c_rmq->parsed()) {
            islp::QueryEngine qe(load_grammar(gpath));
            const islp::RmqPair r = qe.rmq(pos, pos2);
            std::cout << r.pos << " " << r.val << "\n";
            return 0;
        }
        if (c_nsv->parsed() || c_psv->parsed()) {
            islp::QueryEngine qe(load_grammar(gpath));
            const islp::Symbol v = (islp::Symbol)thr_value;
            std::cout << (c_nsv->parsed() ? qe.nsv(pos, v) : qe.psv(pos, v)) << "\n";
            return 0;
        }
        if (c_kr->parsed()) {
            islp::KrParams p;
            p.mu = kr_mu;
            p.c = kr_base;
            p.seed = seed;
            islp::Fingerprinter fp(load_grammar(gpath), p);
            std::cout << fp.fingerprint(pos, pos2) << "\n";
            return 0;
        }
        if (c_reverse->parsed()) {
            emit(islp::reverse_grammar(load_grammar(gpath)));
            return 0;
        }
        if (c_morph->parsed()) {
            emit(islp::apply_morphism(load_grammar(gpath), parse_map(read_input(map_path))));
            return 0;
        }
        if (c_edit->parsed()) {
            islp::EditKind kind;
            if (edit_op == "substitute") kind = islp::EditKind::Substitute;
            else if (edit_op == "insert_before") kind = islp::EditKind::InsertBefore;
            else if (edit_op == "insert_after") kind = islp::EditKind::InsertAfter;
            else if (edit_op == "delete") kind = islp::EditKind::Delete;
            else throw islp::BadParams(
                "edit op is substitute, insert_before, insert_after or delete");
            islp::Symbol s = 0;
            if (kind != islp::EditKind::Delete) {
                if (edit_char.size() != 1)
                    throw islp::BadParams("insert and substitute want exactly one byte");
                s = (islp::Symbol)(unsigned char)edit_char[0];
            }
            emit(islp::edit(load_grammar(gpath), kind, edit_pos, s));
            return 0;
        }
        if (c_measures->parsed()) {
            const islp::Text t = islp::text_from_bytes(read_input(tpath));
            const islp::Rational d = islp::delta(t, delta_cap);
            std::cout << t.size() << " " << d.get_num().get_str() << "/"
                      << d.get_den().get_str() << " " << islp::lz76(t) << " "
                      << islp::bwt_runs(t) << " " << islp::bwt_runs_dollar(t) << "\n";
            return 0;
        }
        if (c_stats->parsed()) {
            islp::Grammar g = load_grammar(gpath);
            const islp::LengthTable lt = islp::compute_lengths(g);
            std::cout << "rules " << g.num_rules() << " size " << islp::grammar_size(g)
                      << " degree " << islp::degree(g) << " height " << islp::height(g)
                      << " n " << lt.of(g.start)
                      << " rlslp " << (islp::is_rlslp_form(g) ? "yes" : "no") << "\n";
            return 0;
        }
    } catch (const islp::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
