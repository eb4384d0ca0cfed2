#pragma once

// Exact arithmetic in rational quaternion algebras (a,b/Q) with basis
// 1, i, j, ij subject to i^2 = a, j^2 = b, ij = -ji, and the orthogonal
// involutions sigma(z) = u * conj(z) * u^{-1} with tr(u) = 0.

#include "qorders/rational.hpp"

#include <array>
#include <stdexcept>

namespace qorders {

struct AlgebraMismatch : std::runtime_error {
    AlgebraMismatch() : std::runtime_error("operands live in different algebras") {}
};
struct DivisionByZero : std::runtime_error {
    DivisionByZero() : std::runtime_error("division by zero quaternion") {}
};

struct QuatAlgebra {
    Rat a, b;

    QuatAlgebra(Rat a_, Rat b_) : a(std::move(a_)), b(std::move(b_)) {
        if (a == 0 || b == 0) throw std::domain_error("algebra parameters must be nonzero");
    }

    bool definite() const { return a < 0 && b < 0; }
    bool operator==(const QuatAlgebra& o) const { return a == o.a && b == o.b; }
    bool operator!=(const QuatAlgebra& o) const { return !(*this == o); }
};

struct Quat {
    QuatAlgebra alg;
    Rat w, x, y, z;  // coordinates in 1, i, j, ij

    Quat(QuatAlgebra A, Rat w_ = 0, Rat x_ = 0, Rat y_ = 0, Rat z_ = 0)
        : alg(std::move(A)), w(std::move(w_)), x(std::move(x_)), y(std::move(y_)), z(std::move(z_)) {}

    Rat coord(int k) const {
        switch (k) {
            case 0: return w;
            case 1: return x;
            case 2: return y;
            default: return z;
        }
    }
    Rat& coord(int k) {
        switch (k) {
            case 0: return w;
            case 1: return x;
            case 2: return y;
            default: return z;
        }
    }

    bool is_zero() const { return w == 0 && x == 0 && y == 0 && z == 0; }

    bool operator==(const Quat& o) const {
        return alg == o.alg && w == o.w && x == o.x && y == o.y && z == o.z;
    }
    bool operator!=(const Quat& o) const { return !(*this == o); }
};

inline void check_same(const Quat& p, const Quat& q) {
    if (p.alg != q.alg) throw AlgebraMismatch{};
}

inline Quat operator+(const Quat& p, const Quat& q) {
    check_same(p, q);
    return {p.alg, p.w + q.w, p.x + q.x, p.y + q.y, p.z + q.z};
}

inline Quat operator-(const Quat& p, const Quat& q) {
    check_same(p, q);
    return {p.alg, p.w - q.w, p.x - q.x, p.y - q.y, p.z - q.z};
}

inline Quat operator-(const Quat& p) { return {p.alg, -p.w, -p.x, -p.y, -p.z}; }

inline Quat operator*(const Rat& c, const Quat& p) {
    return {p.alg, c * p.w, c * p.x, c * p.y, c * p.z};
}

// Structure constants of (a,b/Q): expand (w1 + x1 i + y1 j + z1 ij)(w2 + ...)
// using i^2 = a, j^2 = b, ij = -ji, (ij)^2 = -ab.
inline Quat operator*(const Quat& p, const Quat& q) {
    check_same(p, q);
    const Rat &a = p.alg.a, &b = p.alg.b;
    Rat w = p.w * q.w + a * p.x * q.x + b * p.y * q.y - a * b * p.z * q.z;
    Rat x = p.w * q.x + p.x * q.w - b * p.y * q.z + b * p.z * q.y;
    Rat y = p.w * q.y + p.y * q.w + a * p.x * q.z - a * p.z * q.x;
    Rat z = p.w * q.z + p.z * q.w + p.x * q.y - p.y * q.x;
    return {p.alg, std::move(w), std::move(x), std::move(y), std::move(z)};
}

inline Quat conj(const Quat& p) { return {p.alg, p.w, -p.x, -p.y, -p.z}; }

inline Rat nrm(const Quat& p) {
    const Rat &a = p.alg.a, &b = p.alg.b;
    return p.w * p.w - a * p.x * p.x - b * p.y * p.y + a * b * p.z * p.z;
}

inline Rat tr(const Quat& p) { return 2 * p.w; }

inline Quat inv(const Quat& p) {
    Rat n = nrm(p);
    if (n == 0) throw DivisionByZero{};
    return (Rat(1) / n) * conj(p);
}

inline Quat one(const QuatAlgebra& A) { return {A, 1, 0, 0, 0}; }
inline Quat gen_i(const QuatAlgebra& A) { return {A, 0, 1, 0, 0}; }
inline Quat gen_j(const QuatAlgebra& A) { return {A, 0, 0, 1, 0}; }
inline Quat gen_ij(const QuatAlgebra& A) { return {A, 0, 0, 0, 1}; }

// Orthogonal involution z -> u * conj(z) * u^{-1} with tr(u) = 0.
struct OrthogonalInvolution {
    Quat u;

    explicit OrthogonalInvolution(Quat u_) : u(std::move(u_)) {
        if (tr(u) != 0) throw std::domain_error("involution element must be trace zero");
        if (nrm(u) == 0) throw std::domain_error("involution element must be invertible");
    }
};

inline Quat apply_involution(const OrthogonalInvolution& s, const Quat& q) {
    return s.u * conj(q) * inv(s.u);
}

// disc(ddagger) = -nrm(xi) modulo squares, xi spanning the negated line H^-.
// The negated line of conj-by-u is Q*u itself (sigma(u) = -u when tr(u)=0).
inline Int disc_involution(const OrthogonalInvolution& s) {
    return squarefree_class(-nrm(s.u));
}

}  // namespace qorders
