#ifndef GST_ZP_HPP
#define GST_ZP_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace gst {

using u64 = std::uint64_t;
using i64 = std::int64_t;

// Scalar arithmetic modulo a prime power p^N.  Moduli are capped at 2^31 so
// that products fit in u64 without intermediate overflow.

inline u64 pow_u64(u64 base, u64 exp) {
    u64 r = 1;
    while (exp) {
        if (exp & 1) r *= base;
        base *= base;
        exp >>= 1;
    }
    return r;
}

inline bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

struct PrimePower {
    long p = 2;
    int N = 1;   // exponent; modulus is p^N
    u64 mod = 2; // p^N

    PrimePower() = default;
    PrimePower(long p_, int N_) : p(p_), N(N_) {
        if (!is_prime_u64(static_cast<u64>(p)))
            throw std::invalid_argument("PrimePower: p = " + std::to_string(p) + " is not prime");
        if (N < 1) throw std::invalid_argument("PrimePower: N must be >= 1");
        mod = 1;
        for (int i = 0; i < N; ++i) {
            mod *= static_cast<u64>(p);
            if (mod > (1ull << 31))
                throw std::invalid_argument("PrimePower: p^N exceeds 2^31");
        }
    }

    u64 reduce(u64 x) const { return x % mod; }
    u64 reduce_signed(i64 x) const {
        i64 m = static_cast<i64>(mod);
        i64 r = x % m;
        if (r < 0) r += m;
        return static_cast<u64>(r);
    }
    u64 add(u64 a, u64 b) const { return (a + b) % mod; }
    u64 sub(u64 a, u64 b) const { return (a + mod - b % mod) % mod; }
    u64 mul(u64 a, u64 b) const { return (a * b) % mod; }
    u64 neg(u64 a) const { return a ? mod - a : 0; }

    // p-adic valuation, capped at N (val(0) = N).
    int val(u64 a) const {
        if (a == 0) return N;
        int v = 0;
        while (a % static_cast<u64>(p) == 0) {
            a /= static_cast<u64>(p);
            ++v;
        }
        return v < N ? v : N;
    }

    bool is_unit(u64 a) const { return a % static_cast<u64>(p) != 0; }

    // Inverse of a unit, by lifting the inverse mod p (Fermat) through p^N.
    u64 inv(u64 a) const {
        a %= mod;
        if (!is_unit(a)) throw std::domain_error("inv: not a unit mod p^N");
        u64 ip = pow_mod(a % static_cast<u64>(p), static_cast<u64>(p - 2), static_cast<u64>(p));
        u64 x = ip; // inverse mod p
        u64 m = static_cast<u64>(p);
        while (m < mod) {
            m = m * m > mod ? mod : m * m;
            // Newton: x <- x(2 - a x)
            u64 ax = (a % m) * (x % m) % m;
            x = (x % m) * ((2 + m - ax) % m) % m;
        }
        return x % mod;
    }

    static u64 pow_mod(u64 base, u64 exp, u64 m) {
        u64 r = 1 % m;
        base %= m;
        while (exp) {
            if (exp & 1) r = r * base % m;
            base = base * base % m;
            exp >>= 1;
        }
        return r;
    }

    // Exact division by p^k; throws if not divisible.
    u64 div_pk(u64 a, int k) const {
        u64 pk = pow_u64(static_cast<u64>(p), static_cast<u64>(k));
        if (a % pk != 0) throw std::domain_error("div_pk: not divisible");
        return a / pk;
    }

    bool operator==(const PrimePower& o) const { return p == o.p && N == o.N; }
};

} // namespace gst

#endif
