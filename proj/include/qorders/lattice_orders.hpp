#pragma once

// Rank-4 lattices and orders in a rational quaternion algebra: canonical HNF
// bases, ring/involution closure, discriminants, ternary norm forms on rank-3
// sublattices, Z-equivalence of definite ternary forms, class-number-1
// certification against the bundled form table, and unit groups.

#include "qorders/linalg.hpp"
#include "qorders/quat.hpp"

#include <algorithm>
#include <functional>
#include <optional>

namespace qorders {

struct NotALattice : std::runtime_error {
    NotALattice() : std::runtime_error("generators do not span a rank-4 lattice") {}
};
struct NotARing : std::runtime_error {
    NotARing() : std::runtime_error("lattice is not closed under multiplication") {}
};
struct MissingOne : std::runtime_error {
    MissingOne() : std::runtime_error("lattice does not contain 1") {}
};
struct NotClosedUnderInvolution : std::runtime_error {
    NotClosedUnderInvolution() : std::runtime_error("order is not closed under the involution") {}
};
struct NotPositiveDefinite : std::runtime_error {
    NotPositiveDefinite() : std::runtime_error("form is not positive definite") {}
};
struct IndefiniteUnsupported : std::runtime_error {
    IndefiniteUnsupported() : std::runtime_error("operation requires a definite algebra") {}
};
struct ClassNumberNotOne : std::runtime_error {
    ClassNumberNotOne() : std::runtime_error("order does not have class number one") {}
};

// ---------------------------------------------------------------------------
// Lattice canonicalization

// Canonical basis of the lattice generated by quaternion rows: scale the
// coordinate matrix integral by the common denominator, row-HNF, rescale.
// The result is unique per lattice, so equality of lattices is equality of
// canonical bases.
inline std::vector<Quat> lattice_basis(const QuatAlgebra& A, const std::vector<Quat>& gens) {
    Int scale = 1;
    for (const auto& g : gens)
        for (int k = 0; k < 4; ++k) scale = lcm(scale, den(g.coord(k)));
    IntMat m(gens.size(), IntVec(4));
    for (size_t r = 0; r < gens.size(); ++r)
        for (int k = 0; k < 4; ++k) {
            Rat v = gens[r].coord(k) * scale;
            m[r][k] = num(v);
        }
    IntMat h = hnf(std::move(m));
    std::vector<Quat> out;
    for (const auto& row : h) {
        bool zero = true;
        for (const auto& v : row)
            if (v != 0) zero = false;
        if (zero) continue;
        out.push_back({A, Rat(row[0], scale), Rat(row[1], scale), Rat(row[2], scale), Rat(row[3], scale)});
    }
    for (auto& q : out)
        for (int k = 0; k < 4; ++k) q.coord(k).canonicalize();
    return out;
}

// Coordinates of q in the given basis (as a rational vector), if q lies in
// the rational span.
inline std::optional<RatVec> span_coords(const std::vector<Quat>& basis, const Quat& q) {
    RatMat m(4, RatVec(basis.size()));
    for (size_t c = 0; c < basis.size(); ++c)
        for (int k = 0; k < 4; ++k) m[k][c] = basis[c].coord(k);
    RatVec rhs(4);
    for (int k = 0; k < 4; ++k) rhs[k] = q.coord(k);
    auto x = solve(m, rhs);
    if (!x) return std::nullopt;
    // verify (solve() does not re-check consistency for rank-deficient input)
    Quat acc(q.alg);
    for (size_t c = 0; c < basis.size(); ++c) acc = acc + (*x)[c] * basis[c];
    if (acc != q) return std::nullopt;
    return x;
}

inline bool in_lattice(const std::vector<Quat>& basis, const Quat& q) {
    auto c = span_coords(basis, q);
    if (!c) return false;
    for (const auto& v : *c)
        if (den(v) != 1) return false;
    return true;
}

struct Lattice {
    QuatAlgebra alg;
    std::vector<Quat> basis;  // canonical, rank 4

    Lattice(const QuatAlgebra& A, const std::vector<Quat>& gens) : alg(A), basis(lattice_basis(A, gens)) {
        if (basis.size() != 4) throw NotALattice{};
    }

    bool operator==(const Lattice& o) const { return alg == o.alg && basis == o.basis; }
};

struct Order {
    Lattice lattice;
    bool contains_one = false;
    bool ring_closed = false;

    const QuatAlgebra& alg() const { return lattice.alg; }
    const std::vector<Quat>& basis() const { return lattice.basis; }
    bool operator==(const Order& o) const { return lattice == o.lattice; }
};

inline Order make_order(const QuatAlgebra& A, const std::vector<Quat>& gens) {
    Order O{Lattice(A, gens)};
    if (!in_lattice(O.basis(), one(A))) throw MissingOne{};
    O.contains_one = true;
    for (const auto& p : O.basis())
        for (const auto& q : O.basis())
            if (!in_lattice(O.basis(), p * q)) throw NotARing{};
    O.ring_closed = true;
    return O;
}

// ---------------------------------------------------------------------------
// Discriminants

// Positive square root of |det(tr(b_i b_j))| on the canonical basis.
inline Int order_disc(const Order& O) {
    RatMat t(4, RatVec(4));
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) t[r][c] = tr(O.basis()[r] * O.basis()[c]);
    Rat d = det(t);
    if (d < 0) d = -d;
    if (den(d) != 1 || !is_square(num(d)))
        throw std::logic_error("trace-form determinant is not a perfect square");
    return isqrt(num(d));
}

// Product of the finite primes where (a,b)_p = -1.
inline Int algebra_disc(const QuatAlgebra& A) {
    if (!A.definite()) throw IndefiniteUnsupported{};
    Int an = num(A.a) * den(A.a), bn = num(A.b) * den(A.b);
    std::vector<Int> primes{2};
    for (const auto& [p, e] : factor(an))
        if (p != 2) primes.push_back(p);
    for (const auto& [p, e] : factor(bn))
        if (p != 2 && std::find(primes.begin(), primes.end(), p) == primes.end()) primes.push_back(p);
    Int d = 1;
    for (const auto& p : primes)
        if (hilbert_symbol(an, bn, p) == -1) d *= p;
    return d;
}

// ---------------------------------------------------------------------------
// Involution-split sublattices

struct SubLattice3 {
    QuatAlgebra alg;
    std::vector<Quat> basis;  // canonical, rank 3
};

// Sublattice of O cut out by a linear condition on quaternions (the saturated
// integer kernel of the condition evaluated on the basis).
inline SubLattice3 cut_sublattice(const Order& O, const std::function<Quat(const Quat&)>& defect,
                                  size_t expected_rank) {
    RatMat cond(4, RatVec(4));  // rows: coordinates of defect(b_c); kernel over columns c
    for (size_t c = 0; c < 4; ++c) {
        Quat d = defect(O.basis()[c]);
        for (int k = 0; k < 4; ++k) cond[k][c] = d.coord(k);
    }
    IntMat ker = int_kernel(cond);
    std::vector<Quat> gens;
    for (const auto& kv : ker) {
        Quat v(O.alg());
        for (size_t c = 0; c < 4; ++c) v = v + Rat(kv[c]) * O.basis()[c];
        gens.push_back(v);
    }
    SubLattice3 out{O.alg(), lattice_basis(O.alg(), gens)};
    if (out.basis.size() != expected_rank)
        throw std::logic_error("sublattice has unexpected rank");
    return out;
}

inline SubLattice3 plus_part(const Order& O, const OrthogonalInvolution& s) {
    return cut_sublattice(O, [&](const Quat& q) { return apply_involution(s, q) - q; }, 3);
}

inline SubLattice3 trace_zero_part(const Order& O) {
    return cut_sublattice(
        O, [&](const Quat& q) { return Quat(O.alg(), tr(q), 0, 0, 0); }, 3);
}

inline bool is_ddagger_order(const Order& O, const OrthogonalInvolution& s) {
    for (const auto& b : O.basis())
        if (!in_lattice(O.basis(), apply_involution(s, b))) return false;
    return true;
}

// disc(O) = disc(H) \cap iota(disc(ddagger)); over Z the ideal intersection
// is the lcm.
inline bool is_maximal_ddagger_order(const Order& O, const OrthogonalInvolution& s) {
    if (!is_ddagger_order(O, s)) throw NotClosedUnderInvolution{};
    Int di = disc_involution(s);
    if (di < 0) di = -di;
    return order_disc(O) == lcm(algebra_disc(O.alg()), di);
}

// ---------------------------------------------------------------------------
// Ternary forms

struct TernaryForm {
    RatMat gram;  // 3x3 symmetric

    bool operator==(const TernaryForm& o) const { return gram == o.gram; }
};

inline Rat bilinear(const Quat& p, const Quat& q) { return tr(p * conj(q)) / 2; }

inline TernaryForm ternary_gram(const SubLattice3& L) {
    RatMat g(3, RatVec(3));
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) g[r][c] = bilinear(L.basis[r], L.basis[c]);
    return {g};
}

inline bool positive_definite(const TernaryForm& f) {
    const RatMat& g = f.gram;
    if (g[0][0] <= 0) return false;
    if (g[0][0] * g[1][1] - g[0][1] * g[1][0] <= 0) return false;
    return det(g) > 0;
}

inline Rat form_eval(const RatMat& g, const IntVec& x) {
    const size_t n = g.size();
    Rat s = 0;
    for (size_t r = 0; r < n; ++r)
        for (size_t c = 0; c < n; ++c) s += g[r][c] * x[r] * x[c];
    return s;
}

inline Rat form_pair(const RatMat& g, const IntVec& x, const IntVec& y) {
    const size_t n = g.size();
    Rat s = 0;
    for (size_t r = 0; r < n; ++r)
        for (size_t c = 0; c < n; ++c) s += g[r][c] * x[r] * y[c];
    return s;
}

// floor(sqrt(r)) for nonnegative rational r.
inline Int rat_sqrt_floor(const Rat& r) {
    Int m = isqrt(num(r) / den(r));
    while ((m + 1) * (m + 1) * den(r) <= num(r)) ++m;
    return m;
}

// All integer vectors x (including 0) with x^T g x <= bound, for positive
// definite g.  Box bounds come from the inverse Gram diagonal:
// x_i^2 <= bound * (g^{-1})_ii.
inline std::vector<std::pair<IntVec, Rat>> enumerate_below(const RatMat& g, const Rat& bound) {
    const size_t n = g.size();
    std::vector<std::pair<IntVec, Rat>> out;
    if (bound < 0) return out;
    RatMat gi = mat_inverse(g);
    std::vector<Int> box(n);
    for (size_t k = 0; k < n; ++k) box[k] = rat_sqrt_floor(bound * gi[k][k]);
    IntVec x(n, 0);
    std::function<void(size_t)> rec = [&](size_t k) {
        if (k == n) {
            Rat v = form_eval(g, x);
            if (v <= bound) out.emplace_back(x, v);
            return;
        }
        for (Int c = -box[k]; c <= box[k]; ++c) {
            x[k] = c;
            rec(k + 1);
        }
    };
    rec(0);
    return out;
}

inline std::vector<IntVec> vectors_of_norm(const RatMat& g, const Rat& n) {
    std::vector<IntVec> out;
    for (auto& [x, v] : enumerate_below(g, n))
        if (v == n) out.push_back(x);
    return out;
}

// Z-equivalence witness U (columns = images of the basis of f2 inside f1)
// with U^T * f1 * U = f2, if one exists.  Exhaustive matching of basis images
// among vectors of the right norms and pairings; finite since definite.
inline std::optional<IntMat> forms_equivalent(const TernaryForm& f1, const TernaryForm& f2) {
    if (!positive_definite(f1) || !positive_definite(f2)) throw NotPositiveDefinite{};
    if (det(f1.gram) != det(f2.gram)) return std::nullopt;
    std::vector<std::vector<IntVec>> cands(3);
    for (int k = 0; k < 3; ++k) {
        cands[k] = vectors_of_norm(f1.gram, f2.gram[k][k]);
        if (cands[k].empty()) return std::nullopt;
    }
    for (const auto& v0 : cands[0]) {
        for (const auto& v1 : cands[1]) {
            if (form_pair(f1.gram, v0, v1) != f2.gram[0][1]) continue;
            for (const auto& v2 : cands[2]) {
                if (form_pair(f1.gram, v0, v2) != f2.gram[0][2]) continue;
                if (form_pair(f1.gram, v1, v2) != f2.gram[1][2]) continue;
                RatMat u(3, RatVec(3));
                for (int r = 0; r < 3; ++r) {
                    u[r][0] = v0[r];
                    u[r][1] = v1[r];
                    u[r][2] = v2[r];
                }
                Rat d = det(u);
                if (d == 1 || d == -1) {
                    IntMat w(3, IntVec(3));
                    for (int r = 0; r < 3; ++r) {
                        w[r][0] = num(u[r][0]);
                        w[r][1] = num(u[r][1]);
                        w[r][2] = num(u[r][2]);
                    }
                    return w;
                }
            }
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// The normalized ternary form of an order (the Brandt–Intrau style invariant
// matched against the bundled table): disc(O) times the norm form on the
// trace-zero part of the dual lattice with respect to the pairing tr(xy).
// Its Gram determinant is disc(O)/4, which is what the table's entries carry.

inline TernaryForm normalized_ternary_form(const Order& O) {
    RatMat t(4, RatVec(4));
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) t[r][c] = tr(O.basis()[r] * O.basis()[c]);
    RatMat ti = mat_inverse(t);
    std::vector<Quat> dual;
    for (int r = 0; r < 4; ++r) {
        Quat v(O.alg());
        for (int c = 0; c < 4; ++c) v = v + ti[r][c] * O.basis()[c];
        dual.push_back(v);
    }
    // trace-zero part of the dual lattice
    RatMat cond(1, RatVec(4));
    for (int c = 0; c < 4; ++c) cond[0][c] = tr(dual[c]);
    IntMat ker = int_kernel(cond);
    std::vector<Quat> gens;
    for (const auto& kv : ker) {
        Quat v(O.alg());
        for (int c = 0; c < 4; ++c) v = v + Rat(kv[c]) * dual[c];
        gens.push_back(v);
    }
    auto tz = lattice_basis(O.alg(), gens);
    if (tz.size() != 3) throw std::logic_error("dual trace-zero part has unexpected rank");
    Rat d(order_disc(O));
    RatMat g(3, RatVec(3));
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) g[r][c] = d * bilinear(tz[r], tz[c]);
    return {g};
}

// Table entries are printed as integral coefficient matrices: diagonal =
// diagonal Gram entries, off-diagonal = full mixed coefficient (twice the
// Gram entry).  calibration: see calibrate_table_convention below.
inline TernaryForm coefficient_to_gram(const IntMat& c) {
    RatMat g(3, RatVec(3));
    for (int r = 0; r < 3; ++r)
        for (int cc = 0; cc < 3; ++cc) g[r][cc] = r == cc ? Rat(c[r][cc]) : Rat(c[r][cc], 2);
    for (auto& row : g)
        for (auto& v : row) v.canonicalize();
    return {g};
}

inline TernaryForm verbatim_gram(const IntMat& c) {
    RatMat g(3, RatVec(3));
    for (int r = 0; r < 3; ++r)
        for (int cc = 0; cc < 3; ++cc) g[r][cc] = Rat(c[r][cc]);
    return {g};
}

enum class TableConvention { CoefficientMatrix, VerbatimGram };

// Decide how the bundled table's matrices encode forms, by matching the
// normalized form of the Hurwitz order under each fixed convention.  Exactly
// one convention can succeed (the other leaves the target unmatched).
inline TableConvention calibrate_table_convention(const std::vector<IntMat>& table) {
    QuatAlgebra A(-1, -1);
    Order hurwitz = make_order(
        A, {one(A), gen_i(A), gen_j(A), Quat(A, Rat(1, 2), Rat(1, 2), Rat(1, 2), Rat(1, 2))});
    TernaryForm f = normalized_ternary_form(hurwitz);
    for (auto conv : {TableConvention::CoefficientMatrix, TableConvention::VerbatimGram}) {
        for (const auto& entry : table) {
            TernaryForm g =
                conv == TableConvention::CoefficientMatrix ? coefficient_to_gram(entry) : verbatim_gram(entry);
            if (!positive_definite(g)) continue;
            if (forms_equivalent(f, g)) return conv;
        }
    }
    throw std::logic_error("table calibration failed: Hurwitz form matches no entry");
}

// Indices (0-based) of table entries equivalent to the order's normalized
// ternary form.
inline std::vector<size_t> match_table_entries(const Order& O, const std::vector<IntMat>& table,
                                               TableConvention conv) {
    if (!O.alg().definite()) throw IndefiniteUnsupported{};
    TernaryForm f = normalized_ternary_form(O);
    std::vector<size_t> hits;
    for (size_t k = 0; k < table.size(); ++k) {
        TernaryForm g =
            conv == TableConvention::CoefficientMatrix ? coefficient_to_gram(table[k]) : verbatim_gram(table[k]);
        if (!positive_definite(g)) continue;
        if (forms_equivalent(f, g)) hits.push_back(k);
    }
    return hits;
}

inline bool has_class_number_one(const Order& O, const std::vector<IntMat>& table, TableConvention conv) {
    return !match_table_entries(O, table, conv).empty();
}

// ---------------------------------------------------------------------------
// Unit group: all lattice points of reduced norm 1, canonically sorted.

inline bool quat_less(const Quat& p, const Quat& q) {
    for (int k = 0; k < 4; ++k) {
        if (p.coord(k) < q.coord(k)) return true;
        if (p.coord(k) > q.coord(k)) return false;
    }
    return false;
}

inline std::vector<Quat> unit_group(const Order& O) {
    if (!O.alg().definite()) throw IndefiniteUnsupported{};
    RatMat g(4, RatVec(4));
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) g[r][c] = bilinear(O.basis()[r], O.basis()[c]);
    std::vector<Quat> units;
    for (const auto& [x, v] : enumerate_below(g, 1)) {
        if (v != 1) continue;
        Quat u(O.alg());
        for (int c = 0; c < 4; ++c) u = u + Rat(x[c]) * O.basis()[c];
        units.push_back(u);
    }
    std::sort(units.begin(), units.end(), quat_less);
    return units;
}

}  // namespace qorders
