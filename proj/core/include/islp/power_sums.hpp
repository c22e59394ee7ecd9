// Exact power sums p_c(k) = sum_{i=1..k} i^c via Bernoulli numbers.
//
// The table precomputes Bernoulli numbers b_0..b_d (convention b_1 = -1/2,
// the one produced by the recurrence sum_{j=0}^{m} binom(m+1,j) b_j = 0)
// together with the binomial coefficients binom(c+1,j), so that each
// evaluation uses the closed form
//
//   p_c(k) = k^c + 1/(c+1) * sum_{j=0}^{c} binom(c+1,j) * b_j * k^{c+1-j}
//
// with O(c) rational operations. All arithmetic is exact (GMP); the result
// of every evaluation is checked to reduce to an integer.
#ifndef ISLP_POWER_SUMS_HPP
#define ISLP_POWER_SUMS_HPP

#include <cstdint>
#include <vector>
#include <gmpxx.h>

namespace islp {

using BigInt = mpz_class;
using Rational = mpq_class;

class PowerSumTable {
public:
    // builds Bernoulli numbers and binomial rows for all c <= max_exponent;
    // O(max_exponent^2) rational operations, done once
    explicit PowerSumTable(unsigned max_exponent);

    unsigned max_exponent() const { return d_; }

    const Rational& bernoulli(unsigned j) const { return bernoulli_.at(j); }

    // p_c(k), exact; ops_out (if given) receives the number of rational
    // operations spent in this call, which is <= 5*(c+1)
    BigInt power_sum(unsigned c, const BigInt& k, std::uint64_t* ops_out = nullptr) const;
    BigInt power_sum(unsigned c, std::uint64_t k, std::uint64_t* ops_out = nullptr) const;

    // number of times i^c is counted for i in [lo..hi], i.e. p_c(hi)-p_c(lo-1);
    // requires 1 <= lo <= hi
    BigInt range_power_sum(unsigned c, std::uint64_t lo, std::uint64_t hi) const;

private:
    unsigned d_;
    std::vector<Rational> bernoulli_;           // b_0..b_d
    // coeff_[c][j] = binom(c+1,j) * b_j, j = 0..c (precomputed, exact)
    std::vector<std::vector<Rational>> coeff_;
};

} // namespace islp

#endif
