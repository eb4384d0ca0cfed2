#pragma once

// Exact rational scalars and the bits of elementary number theory the rest of
// the library leans on: square classes, Legendre/Hilbert symbols, integer
// square roots.  Everything is backed by GMP.

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qorders {

using Int = mpz_class;
using Rat = mpq_class;

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline Int num(const Rat& r) { return r.get_num(); }
inline Int den(const Rat& r) { return r.get_den(); }

// mpq_class leaves two-argument construction uncanonicalized; use this when
// the numerator and denominator are not known to be coprime.
inline Rat frac(const Int& p, const Int& q) {
    Rat r(p, q);
    r.canonicalize();
    return r;
}

inline std::string to_string(const Int& z) { return z.get_str(); }

// Serialized form is "p" or "p/q", always in lowest terms with q > 0.
inline std::string to_string(const Rat& r) {
    if (den(r) == 1) return num(r).get_str();
    return num(r).get_str() + "/" + den(r).get_str();
}

inline Rat parse_rat(const std::string& s) {
    if (s.empty()) throw ParseError("empty rational literal");
    try {
        Rat r(s);
        if (r.get_den() == 0) throw ParseError("zero denominator: " + s);
        r.canonicalize();
        return r;
    } catch (const std::invalid_argument&) {
        throw ParseError("bad rational literal: " + s);
    }
}

inline Int gcd(const Int& a, const Int& b) {
    Int g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline Int lcm(const Int& a, const Int& b) {
    Int l;
    mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return l;
}

// Floor of sqrt(n); n must be non-negative.
inline Int isqrt(const Int& n) {
    if (n < 0) throw std::domain_error("isqrt of negative");
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

inline bool is_square(const Int& n) {
    return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

// Trial-division factorization.  Inputs in this project are discriminant-sized
// (well under 10^6), so nothing cleverer is warranted.
inline std::vector<std::pair<Int, unsigned>> factor(Int n) {
    if (n < 0) n = -n;
    std::vector<std::pair<Int, unsigned>> out;
    if (n <= 1) return out;
    for (Int p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            unsigned e = 0;
            while (n % p == 0) { n /= p; ++e; }
            out.emplace_back(p, e);
        }
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

inline bool is_squarefree(const Int& n) {
    for (const auto& [p, e] : factor(n))
        if (e >= 2) return false;
    return true;
}

// Signed squarefree representative of r modulo nonzero rational squares.
inline Int squarefree_class(const Rat& r) {
    if (r == 0) return 0;
    Int n = num(r) * den(r);
    Int sign = n < 0 ? -1 : 1;
    Int core = 1;
    for (const auto& [p, e] : factor(n))
        if (e % 2) core *= p;
    return sign * core;
}

// Legendre symbol (a|p) for odd prime p.
inline int legendre(Int a, const Int& p) {
    a %= p;
    if (a < 0) a += p;
    if (a == 0) return 0;
    Int e = (p - 1) / 2, r;
    mpz_powm(r.get_mpz_t(), a.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
    return r == 1 ? 1 : -1;
}

inline Int p_valuation(Int& n, const Int& p) {
    Int v = 0;
    while (n % p == 0) { n /= p; ++v; }
    return v;
}

// Hilbert symbol (a,b)_p over Q_p for a prime p (p = 2 included), a,b nonzero
// integers.  Odd p: strip valuations, then the standard Legendre-symbol
// formula; p = 2: the epsilon/omega formula on units mod 8.
inline int hilbert_symbol(Int a, Int b, const Int& p) {
    if (a == 0 || b == 0) throw std::domain_error("hilbert symbol of zero");
    Int alpha = p_valuation(a, p);
    Int beta = p_valuation(b, p);
    // a, b now p-adic units u, v.
    if (p != 2) {
        int s = 1;
        // (-1)^(alpha*beta*(p-1)/2)
        if (alpha % 2 != 0 && beta % 2 != 0 && ((p - 1) / 2) % 2 != 0) s = -s;
        if (beta % 2 != 0) s *= legendre(a, p);
        if (alpha % 2 != 0) s *= legendre(b, p);
        return s;
    }
    auto eps = [](const Int& u) {  // (u-1)/2 mod 2
        Int m = ((u - 1) / 2) % 2;
        return m < 0 ? m + 2 : m;
    };
    auto omega = [](const Int& u) {  // (u^2-1)/8 mod 2
        Int m = ((u * u - 1) / 8) % 2;
        return m < 0 ? m + 2 : m;
    };
    Int expo = eps(a) * eps(b) + alpha * omega(b) + beta * omega(a);
    return expo % 2 == 0 ? 1 : -1;
}

}  // namespace qorders
