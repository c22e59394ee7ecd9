// Brute-force reference measures and text families for testing.
//
// Everything here favors obvious correctness over speed: exact suffix-array
// based substring complexity, a left-to-right longest-previous-factor
// parse, and BWT run counts straight from sorted rotations. The *_naive
// variants are even dumber rewrites used to cross-check the main ones on
// short inputs.
#ifndef ISLP_ORACLES_HPP
#define ISLP_ORACLES_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "islp/grammar.hpp"
#include "islp/power_sums.hpp"

namespace islp {

// identity byte mapping; throws BadParams on byte 0 (reserved as sentinel)
Text text_from_bytes(const std::string& bytes);
std::string bytes_from_text(const Text& t);

std::vector<std::uint32_t> suffix_array(const Text& t);
// lcp[i] = longest common prefix of suffixes sa[i-1], sa[i]; lcp[0] = 0
std::vector<std::uint32_t> lcp_array(const Text& t, const std::vector<std::uint32_t>& sa);

// substring complexity: max over k of (distinct k-grams)/k, exact.
// Throws TooLarge beyond the cap.
Rational delta(const Text& t, std::size_t cap = 100000);
// same value, via explicit k-gram sets; quadratic space, tiny inputs only
Rational delta_naive(const Text& t);

// number of phrases of the longest-previous-factor parse where a phrase may
// overlap its source, i.e. the source starts strictly before the phrase
std::uint64_t lz76(const Text& t, std::vector<std::uint64_t>* boundaries = nullptr);
std::uint64_t lz76_naive(const Text& t, std::vector<std::uint64_t>* boundaries = nullptr);

// runs in the Burrows-Wheeler transform of all rotations, and of T$ with a
// sentinel smaller than every symbol
std::uint64_t bwt_runs(const Text& t);
std::uint64_t bwt_runs_dollar(const Text& t);
Text bwt_of_rotations(const Text& t);
Text bwt_with_sentinel(const Text& t); // sentinel encoded as symbol 0

// text families used throughout the tests: prod_{i=1}^{k} a^i b, the
// Fibonacci words, and Thue-Morse
Text gen_s_k(std::uint64_t k);
Grammar grammar_s_k(std::uint64_t k);
Text gen_fibonacci(unsigned i); // F_0 = a, F_1 = b, F_{i+2} = F_{i+1} F_i
Grammar grammar_fibonacci(unsigned i);
Text gen_thue_morse_prefix(std::uint64_t n);
Grammar grammar_thue_morse(unsigned levels); // full word of length 2^levels

// simple run-length grammar compressor: collapse maximal runs, then replace
// the most frequent adjacent pair, repeat; ties broken by the seed
Grammar build_naive_rlslp(const Text& t, std::uint64_t seed = 1);

} // namespace islp

#endif
