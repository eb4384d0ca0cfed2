#pragma once

// The twisted Euclidean algorithm with the norm stathm, right GCD
// transcripts, the twisted special linear group SL^sigma(2,O), row
// completion, and factorization into elementary generators.

#include "qorders/covering.hpp"

#include <variant>

namespace qorders {

struct ZeroDivisor : std::runtime_error {
    ZeroDivisor() : std::runtime_error("division by zero") {}
};
struct NotCompatiblePair : std::runtime_error {
    NotCompatiblePair() : std::runtime_error("a*sigma(b) does not lie in the fixed space") {}
};
struct NotCoprime : std::runtime_error {
    NotCoprime() : std::runtime_error("right GCD is not a unit") {}
};
struct NotEuclideanReducible : std::runtime_error {
    NotEuclideanReducible() : std::runtime_error("stathm failed to decrease; order not norm-Euclidean here") {}
};

// Precomputed context for repeated division in a fixed (O, sigma).
struct TwistedContext {
    Order O;
    OrthogonalInvolution sigma;
    SubLattice3 plus;
    RatMat plus_gram;

    TwistedContext(Order o, OrthogonalInvolution s)
        : O(std::move(o)), sigma(std::move(s)), plus(plus_part(O, sigma)), plus_gram(ternary_gram(plus).gram) {}
};

inline bool in_fixed_space(const OrthogonalInvolution& s, const Quat& q) {
    return apply_involution(s, q) == q;
}

// ---------------------------------------------------------------------------
// 2x2 matrices over the algebra

struct SLSigmaMatrix {
    Quat a, b, c, d;

    SLSigmaMatrix(Quat a_, Quat b_, Quat c_, Quat d_)
        : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), d(std::move(d_)) {}

    bool operator==(const SLSigmaMatrix& o) const { return a == o.a && b == o.b && c == o.c && d == o.d; }
};

inline SLSigmaMatrix operator*(const SLSigmaMatrix& m, const SLSigmaMatrix& n) {
    return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d, m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
}

inline SLSigmaMatrix sl_identity(const QuatAlgebra& A) {
    return {one(A), Quat(A), Quat(A), one(A)};
}

inline SLSigmaMatrix operator-(const SLSigmaMatrix& m) { return {-m.a, -m.b, -m.c, -m.d}; }

// hat-involution: ((a,b),(c,d)) -> ((sigma(d), -sigma(b)), (-sigma(c), sigma(a)))
inline SLSigmaMatrix hat_sigma(const OrthogonalInvolution& s, const SLSigmaMatrix& m) {
    return {apply_involution(s, m.d), -apply_involution(s, m.b), -apply_involution(s, m.c),
            apply_involution(s, m.a)};
}

inline bool sl_check(const OrthogonalInvolution& s, const SLSigmaMatrix& m) {
    const QuatAlgebra& A = m.a.alg;
    SLSigmaMatrix id = sl_identity(A);
    SLSigmaMatrix h = hat_sigma(s, m);
    return m * h == id && h * m == id;
}

// Elementary generators of E^sigma(2,O).
struct Translation { Quat tau; };   // ((1, tau), (0, 1)), tau in O^+
struct UnitGen { Quat u; };         // ((u, 0), (0, sigma(u)^{-1})), u a unit
struct Inversion {};                // ((0, 1), (-1, 0))
using Generator = std::variant<Translation, UnitGen, Inversion>;
using GeneratorWord = std::vector<Generator>;

inline SLSigmaMatrix generator_matrix(const OrthogonalInvolution& s, const Generator& g, const QuatAlgebra& A) {
    if (auto* t = std::get_if<Translation>(&g))
        return {one(A), t->tau, Quat(A), one(A)};
    if (auto* u = std::get_if<UnitGen>(&g))
        return {u->u, Quat(A), Quat(A), inv(apply_involution(s, u->u))};
    return {Quat(A), one(A), -one(A), Quat(A)};
}

inline SLSigmaMatrix evaluate_word(const OrthogonalInvolution& s, const GeneratorWord& w, const QuatAlgebra& A) {
    SLSigmaMatrix m = sl_identity(A);
    for (const auto& g : w) m = m * generator_matrix(s, g, A);
    return m;
}

// ---------------------------------------------------------------------------
// Division and the transcript

struct DivideResult {
    Quat q, r;
    bool stathm_decreased;  // false signals the order is not norm-Euclidean at this pair
};

// q in O^+ minimizing nrm(a - b q) = nrm(b) * nrm(b^{-1}a - q); exact CVP of
// b^{-1}a in the rank-3 lattice O^+, lexicographically smallest coefficient
// vector on ties.
inline DivideResult divide_step(const Quat& a, const Quat& b, const TwistedContext& ctx) {
    if (b.is_zero()) throw ZeroDivisor{};
    if (!in_fixed_space(ctx.sigma, a * apply_involution(ctx.sigma, b))) throw NotCompatiblePair{};
    Quat target = inv(b) * a;
    auto coords = span_coords(ctx.plus.basis, target);
    if (!coords) throw NotCompatiblePair{};
    IntVec qc;
    rho_point_coords(ctx.plus_gram, *coords, &qc);
    Quat q(ctx.O.alg());
    for (int k = 0; k < 3; ++k) q = q + Rat(qc[k]) * ctx.plus.basis[k];
    Quat r = a - b * q;
    return {q, r, nrm(r) < nrm(b)};
}

struct EuclideanTranscript {
    std::vector<Quat> r_list, s_list, t_list, q_list;
    bool complete = true;  // false iff the stathm failed to decrease mid-run

    const Quat& gcd() const { return r_list[r_list.size() - 2]; }
    size_t k() const { return r_list.size() - 2; }  // index of the last nonzero remainder slot
};

inline EuclideanTranscript twisted_euclidean(const Quat& a, const Quat& b, const TwistedContext& ctx) {
    const QuatAlgebra& A = ctx.O.alg();
    if (!in_fixed_space(ctx.sigma, a * apply_involution(ctx.sigma, b))) throw NotCompatiblePair{};
    EuclideanTranscript T;
    T.r_list = {a, b};
    T.s_list = {one(A), Quat(A)};
    T.t_list = {Quat(A), -one(A)};
    while (!T.r_list.back().is_zero()) {
        const Quat& r2 = T.r_list[T.r_list.size() - 2];
        const Quat& r1 = T.r_list[T.r_list.size() - 1];
        DivideResult d = divide_step(r2, r1, ctx);
        if (!d.stathm_decreased) {
            T.complete = false;
            return T;
        }
        // The source pseudocode appends t_i to the s-list; that is an evident
        // slip, corrected here per the proof of correctness.
        Quat si = T.s_list[T.s_list.size() - 2] - d.q * T.s_list[T.s_list.size() - 1];
        Quat ti = T.t_list[T.t_list.size() - 2] - d.q * T.t_list[T.t_list.size() - 1];
        T.r_list.push_back(d.r);
        T.s_list.push_back(si);
        T.t_list.push_back(ti);
        T.q_list.push_back(d.q);
    }
    return T;
}

// Property-(4) matrix at the terminal index:
//   E_k = ((t_k, s_k), ((-1)^k t_{k+1}, (-1)^k s_{k+1})) in E^sigma(2,O),
// and (a, b) = (0, -r_k) * E_k.
inline SLSigmaMatrix property4_matrix(const EuclideanTranscript& T) {
    size_t k = T.k();
    Rat sign = k % 2 == 0 ? 1 : -1;
    return {T.t_list[k], T.s_list[k], sign * T.t_list[k + 1], sign * T.s_list[k + 1]};
}

// Generator word for E_k, following the proof's recurrences:
//   G_1 = Inv,  G_{i+1} = Inv * Trans(-q_{i+1}) * G_i        (i odd)
//   G_{i+1} = Unit(-1) * Inv * Trans(q_{i+1}) * G_i          (i even)
// with G_{i} the property-(4) matrix at index i-1; E_k = G_{k+1}.
inline GeneratorWord property4_word(const EuclideanTranscript& T, const TwistedContext& ctx) {
    const QuatAlgebra& A = ctx.O.alg();
    GeneratorWord w{Inversion{}};
    for (size_t i = 1; i <= T.k(); ++i) {
        const Quat& q = T.q_list[i - 1];  // q_{i+1} in the 2-based numbering
        GeneratorWord prefix;
        if (i % 2 == 1) {
            prefix = {Inversion{}, Translation{-q}};
        } else {
            prefix = {UnitGen{-one(A)}, Inversion{}, Translation{q}};
        }
        prefix.insert(prefix.end(), w.begin(), w.end());
        w = std::move(prefix);
    }
    return w;
}

// ---------------------------------------------------------------------------
// Row completion and generator factorization

// A matrix in SL^sigma(2,O) with bottom row (c, d): run the algorithm on the
// row, giving (c, d) = (0, -r_k) * E_k, and left-multiply E_k by the diagonal
// unit matrix with bottom row (0, -r_k).
inline SLSigmaMatrix complete_row(const Quat& c, const Quat& d, const TwistedContext& ctx) {
    const QuatAlgebra& A = ctx.O.alg();
    if (c.is_zero() && d.is_zero()) throw std::domain_error("cannot complete the zero row");
    if (!in_fixed_space(ctx.sigma, c * apply_involution(ctx.sigma, d))) throw NotCompatiblePair{};
    EuclideanTranscript T = twisted_euclidean(c, d, ctx);
    if (!T.complete) throw NotEuclideanReducible{};
    const Quat& g = T.gcd();
    if (nrm(g) != 1) throw NotCoprime{};
    SLSigmaMatrix ek = property4_matrix(T);
    Quat u = -inv(apply_involution(ctx.sigma, g));
    SLSigmaMatrix p{u, Quat(A), Quat(A), inv(apply_involution(ctx.sigma, u))};
    SLSigmaMatrix m = p * ek;
    if (!(m.c == c && m.d == d) || !sl_check(ctx.sigma, m))
        throw std::logic_error("row completion failed verification");
    return m;
}

inline GeneratorWord factor_into_generators(const SLSigmaMatrix& m, const TwistedContext& ctx) {
    const QuatAlgebra& A = ctx.O.alg();
    const OrthogonalInvolution& s = ctx.sigma;
    if (!sl_check(s, m)) throw std::domain_error("input is not in SL^sigma(2,O)");
    GeneratorWord w;
    if (m.b.is_zero()) {
        // ((a,0),(c,d)) = Unit(-a) * Inv * Trans(-d^{-1} c) * Inv, a and d units
        if (nrm(m.a) != 1 || nrm(m.d) != 1) throw std::domain_error("triangular case requires unit diagonal");
        Quat tau = -(inv(m.d) * m.c);
        if (!in_fixed_space(s, tau) || !in_lattice(ctx.plus.basis, tau))
            throw std::domain_error("triangular case payload not in the plus part");
        w = {UnitGen{-m.a}, Inversion{}, Translation{tau}, Inversion{}};
    } else {
        EuclideanTranscript T = twisted_euclidean(m.a, m.b, ctx);
        if (!T.complete) throw NotEuclideanReducible{};
        const Quat& g = T.gcd();
        if (nrm(g) != 1) throw NotCoprime{};
        // the top row satisfies (a, b) = (0, -r_k) * E_k, so
        // M = Unit(-r_k) * Inv * Trans(q) * E_k with q solved from the
        // residual, which must be a translation by an element of O^+.
        GeneratorWord ew = property4_word(T, ctx);
        SLSigmaMatrix ek = property4_matrix(T);
        w = {UnitGen{-g}, Inversion{}};
        SLSigmaMatrix pre = evaluate_word(s, w, A);
        // Trans(q) = (Unit(-r_k) * Inv)^{-1} * M * E_k^{-1}
        SLSigmaMatrix res = hat_sigma(s, pre) * m * hat_sigma(s, ek);
        Quat q = res.b;
        if (!(res.a == one(A) && res.c.is_zero() && res.d == one(A) && in_fixed_space(s, q) &&
              in_lattice(ctx.plus.basis, q)))
            throw std::logic_error("generator factorization residual is not a translation");
        if (!q.is_zero()) w.push_back(Translation{q});
        w.insert(w.end(), ew.begin(), ew.end());
    }
    if (!(evaluate_word(s, w, A) == m)) throw std::logic_error("generator word failed verification");
    return w;
}

// Convenience overloads constructing the context on the fly.
inline DivideResult divide_step(const Quat& a, const Quat& b, const Order& O,
                                const OrthogonalInvolution& s) {
    return divide_step(a, b, TwistedContext(O, s));
}
inline EuclideanTranscript twisted_euclidean(const Quat& a, const Quat& b, const Order& O,
                                             const OrthogonalInvolution& s) {
    return twisted_euclidean(a, b, TwistedContext(O, s));
}
inline SLSigmaMatrix complete_row(const Quat& c, const Quat& d, const Order& O,
                                  const OrthogonalInvolution& s) {
    return complete_row(c, d, TwistedContext(O, s));
}
inline GeneratorWord factor_into_generators(const SLSigmaMatrix& m, const Order& O,
                                            const OrthogonalInvolution& s) {
    return factor_into_generators(m, TwistedContext(O, s));
}

}  // namespace qorders
