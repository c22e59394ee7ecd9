// Exactness tests for the Bernoulli / Faulhaber table.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "islp/power_sums.hpp"

using namespace islp;

static BigInt brute_power_sum(unsigned c, std::uint64_t k) {
    BigInt s = 0;
    for (std::uint64_t i = 1; i <= k; i++) {
        BigInt p = 1;
        for (unsigned x = 0; x < c; x++) p *= (unsigned long)i;
        s += p;
    }
    return s;
}

TEST_CASE("matches the brute force sum") {
    PowerSumTable tab(10);
    for (unsigned c = 0; c <= 10; c++)
        for (std::uint64_t k : {0, 1, 2, 3, 7, 100, 9999, 10000})
            CHECK(tab.power_sum(c, k) == brute_power_sum(c, k));
}

TEST_CASE("known bernoulli values") {
    PowerSumTable tab(12);
    CHECK(tab.bernoulli(0) == Rational(1));
    CHECK(tab.bernoulli(1) == Rational(-1, 2));
    CHECK(tab.bernoulli(2) == Rational(1, 6));
    CHECK(tab.bernoulli(3) == 0);
    CHECK(tab.bernoulli(4) == Rational(-1, 30));
    CHECK(tab.bernoulli(12) == Rational(-691, 2730));
}

TEST_CASE("bernoulli recurrence holds to degree 64") {
    PowerSumTable tab(64);
    for (unsigned m = 1; m <= 64; m++) {
        // sum_{j=0}^{m} binom(m+1,j) b_j = 0
        Rational acc = 0;
        BigInt binom = 1; // binom(m+1, 0)
        for (unsigned j = 0; j <= m; j++) {
            acc += Rational(binom) * tab.bernoulli(j);
            binom = binom * (long)(m + 1 - j) / (long)(j + 1);
        }
        CHECK(acc == 0);
    }
}

TEST_CASE("evaluation stays within the operation budget") {
    PowerSumTable tab(64);
    for (unsigned c : {0u, 1u, 5u, 32u, 64u}) {
        std::uint64_t ops = 0;
        tab.power_sum(c, (std::uint64_t)123456789, &ops);
        CHECK(ops <= 5 * (std::uint64_t)(c + 1));
    }
}

TEST_CASE("range sums and big arguments") {
    PowerSumTable tab(8);
    for (unsigned c = 0; c <= 8; c++)
        for (std::uint64_t lo : {1, 2, 50})
            for (std::uint64_t hi : {50, 51, 200}) {
                if (lo > hi) continue;
                CHECK(tab.range_power_sum(c, lo, hi) ==
                      brute_power_sum(c, hi) - brute_power_sum(c, lo - 1));
            }
    // closed form keeps exactness far past machine words
    BigInt k = BigInt("123456789123456789");
    BigInt v = tab.power_sum(2, k);
    CHECK(v == k * (k + 1) * (2 * k + 1) / 6);
}
