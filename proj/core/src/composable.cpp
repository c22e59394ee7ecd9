#include "islp/composable.hpp"

namespace islp {

static std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return (std::uint64_t)((unsigned __int128)a * b % m);
}

static std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

bool is_prime_u64(std::uint64_t x) {
    if (x < 2) return false;
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                            23ull, 29ull, 31ull, 37ull}) {
        if (x % p == 0) return x == p;
    }
    std::uint64_t d = x - 1;
    unsigned s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        s++;
    }
    // deterministic witness set for 64-bit integers
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                            23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t y = powmod(a, d, x);
        if (y == 1 || y == x - 1) continue;
        bool composite = true;
        for (unsigned r = 1; r < s; r++) {
            y = mulmod(y, y, x);
            if (y == x - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

Composable<KrValue> kr_composable(KrParams& p) {
    if (!is_prime_u64(p.mu)) throw BadParams("kr: modulus is not prime");
    if (p.mu < 3) throw BadParams("kr: modulus too small");
    if (p.c == 0) {
        std::mt19937_64 rng(p.seed);
        std::uniform_int_distribution<std::uint64_t> pick(2, p.mu - 2);
        p.c = pick(rng);
    }
    if (p.c < 1 || p.c >= p.mu) throw BadParams("kr: base out of range");
    const std::uint64_t mu = p.mu, c = p.c;
    Composable<KrValue> comp;
    comp.identity = KrValue{0, 1};
    comp.single = [mu, c](Symbol s) { return KrValue{s % mu, c % mu}; };
    comp.combine = [mu](const KrValue& u, const KrValue& v) {
        // kappa(XY) = kappa(X) + kappa(Y)*c^|X|, positions weighted left to right
        return KrValue{(u.kappa + mulmod(v.kappa, u.cpow, mu)) % mu,
                       mulmod(u.cpow, v.cpow, mu)};
    };
    return comp;
}

ComposableEngine<KrValue> Fingerprinter::make(const Grammar& g, KrParams& p) {
    Composable<KrValue> c = kr_composable(p);
    // the algebra is exact by construction, skip the random spot check
    return ComposableEngine<KrValue>(g, std::move(c), false);
}

Fingerprinter::Fingerprinter(const Grammar& g, KrParams p)
    : p_(p), eng_(make(g, p_)) {}

} // namespace islp
