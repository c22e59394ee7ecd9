#include "islp/power_sums.hpp"
#include "islp/error.hpp"

#include <cassert>

namespace islp {

PowerSumTable::PowerSumTable(unsigned max_exponent) : d_(max_exponent) {
    // Pascal triangle rows up to d+1, exact integers
    std::vector<std::vector<BigInt>> binom(d_ + 2);
    for (unsigned m = 0; m <= d_ + 1; m++) {
        binom[m].resize(m + 1);
        binom[m][0] = 1;
        binom[m][m] = 1;
        for (unsigned j = 1; j < m; j++)
            binom[m][j] = binom[m - 1][j - 1] + binom[m - 1][j];
    }

    // b_0 = 1, then binom(m+1,m) b_m = - sum_{j<m} binom(m+1,j) b_j
    bernoulli_.resize(d_ + 1);
    bernoulli_[0] = 1;
    for (unsigned m = 1; m <= d_; m++) {
        Rational acc(0);
        for (unsigned j = 0; j < m; j++)
            acc += Rational(binom[m + 1][j]) * bernoulli_[j];
        bernoulli_[m] = -acc / Rational(binom[m + 1][m]);
        bernoulli_[m].canonicalize();
    }

    coeff_.resize(d_ + 1);
    for (unsigned c = 0; c <= d_; c++) {
        coeff_[c].resize(c + 1);
        for (unsigned j = 0; j <= c; j++) {
            coeff_[c][j] = Rational(binom[c + 1][j]) * bernoulli_[j];
            coeff_[c][j].canonicalize();
        }
    }
}

BigInt PowerSumTable::power_sum(unsigned c, const BigInt& k, std::uint64_t* ops_out) const {
    if (c > d_)
        throw BadParams("power_sum: exponent exceeds table degree");
    if (sgn(k) < 0)
        throw BadParams("power_sum: negative argument");

    // p_0(k) = k; the closed form below assumes 0^c = 0 which fails at c=0
    if (c == 0) {
        if (ops_out) *ops_out = 1;
        return k;
    }

    std::uint64_t ops = 0;
    Rational kq(k);
    Rational acc(0);
    Rational kp(kq); // k^{jj+1} through the loop
    Rational kc(kq); // becomes k^c
    for (unsigned jj = 0; jj <= c; jj++) {
        unsigned j = c - jj; // term coeff_[c][j] * k^{c+1-j}, exponent jj+1
        acc += coeff_[c][j] * kp;
        ops += 2;
        if (jj + 1 == c) kc = kp;
        if (jj < c) { kp *= kq; ops++; }
    }

    Rational res = kc + acc / Rational((unsigned long)(c + 1));
    ops += 2;
    res.canonicalize();
    if (res.get_den() != 1)
        throw NonIntegerResult("power_sum: closed form did not reduce to an integer");
    if (ops_out) *ops_out = ops;
    assert(ops <= 5ull * (c + 1));
    return res.get_num();
}

BigInt PowerSumTable::power_sum(unsigned c, std::uint64_t k, std::uint64_t* ops_out) const {
    return power_sum(c, BigInt((unsigned long)k), ops_out);
}

BigInt PowerSumTable::range_power_sum(unsigned c, std::uint64_t lo, std::uint64_t hi) const {
    if (lo < 1 || lo > hi)
        throw BadParams("range_power_sum: need 1 <= lo <= hi");
    return power_sum(c, hi) - power_sum(c, lo - 1);
}

} // namespace islp
