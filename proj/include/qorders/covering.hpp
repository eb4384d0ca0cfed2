#pragma once

// Exact covering radius of the rank-3 lattice O^+ under the reduced norm:
// Voronoi-relevant vectors, closest-vector queries, deep holes as Delaunay
// circumcenters, and the norm-Euclidean certificate rho < 1.

#include "qorders/lattice_orders.hpp"

namespace qorders {

struct CoveringCertificate {
    Rat rho;
    Quat deep_hole;                         // point of H^+ attaining rho
    std::vector<IntVec> voronoi_relevant;   // in lattice coordinates
};

// Voronoi-relevant vectors of a positive definite rank-3 Gram: v such that
// +-v are the strict minima of the coset v + 2L.  Candidates live below
// 4 * (max diagonal entry); comparisons stay within the same parity class.
inline std::vector<IntVec> voronoi_relevant(const RatMat& g) {
    Rat maxdiag = g[0][0];
    for (size_t k = 1; k < g.size(); ++k)
        if (g[k][k] > maxdiag) maxdiag = g[k][k];
    auto pts = enumerate_below(g, 4 * maxdiag);
    std::vector<IntVec> rel;
    for (const auto& [v, nv] : pts) {
        bool zero = true;
        for (const auto& c : v)
            if (c != 0) zero = false;
        if (zero) continue;
        bool strict = true;
        for (const auto& [w, nw] : pts) {
            bool same_class = true, same_vec = true, neg_vec = true;
            for (size_t k = 0; k < v.size(); ++k) {
                if ((v[k] - w[k]) % 2 != 0) same_class = false;
                if (w[k] != v[k]) same_vec = false;
                if (w[k] != -v[k]) neg_vec = false;
            }
            if (!same_class || same_vec || neg_vec) continue;
            if (nw <= nv) { strict = false; break; }
        }
        if (strict) rel.push_back(v);
    }
    return rel;
}

// Exact CVP: minimum of nrm(p - tau) over tau in L, p in the rational span
// of L.  Starts from the rounded coordinate vector and searches the exact
// box that could beat it.
inline Rat rho_point_coords(const RatMat& g, const RatVec& target, IntVec* argmin = nullptr) {
    const size_t n = g.size();
    IntVec r0(n);
    for (size_t k = 0; k < n; ++k) {
        // nearest integer to target[k]
        Int fl;
        mpz_fdiv_q(fl.get_mpz_t(), num(target[k]).get_mpz_t(), den(target[k]).get_mpz_t());
        Rat frac = target[k] - Rat(fl);
        r0[k] = frac * 2 >= 1 ? fl + 1 : fl;
    }
    RatVec d0(n);
    for (size_t k = 0; k < n; ++k) d0[k] = target[k] - Rat(r0[k]);
    Rat best = form_eval(g, IntVec(n, 0));
    {
        Rat s = 0;
        for (size_t r = 0; r < n; ++r)
            for (size_t c = 0; c < n; ++c) s += g[r][c] * d0[r] * d0[c];
        best = s;
    }
    IntVec bestv = r0;
    RatMat gi = mat_inverse(g);
    std::vector<Int> box(n);
    for (size_t k = 0; k < n; ++k) box[k] = rat_sqrt_floor(best * gi[k][k]) + 1;
    IntVec x(n);
    std::function<void(size_t)> rec = [&](size_t k) {
        if (k == n) {
            RatVec d(n);
            for (size_t t = 0; t < n; ++t) d[t] = target[t] - Rat(x[t]);
            Rat s = 0;
            for (size_t r = 0; r < n; ++r)
                for (size_t c = 0; c < n; ++c) s += g[r][c] * d[r] * d[c];
            if (s < best || (s == best && x < bestv)) {
                best = s;
                bestv = x;
            }
            return;
        }
        for (Int c = r0[k] - box[k]; c <= r0[k] + box[k]; ++c) {
            x[k] = c;
            rec(k + 1);
        }
    };
    rec(0);
    if (argmin) *argmin = bestv;
    return best;
}

inline RatVec sublattice_coords(const SubLattice3& L, const Quat& p) {
    auto c = span_coords(L.basis, p);
    if (!c) throw std::domain_error("point does not lie in the span of the sublattice");
    return *c;
}

inline Rat rho_point(const Quat& p, const SubLattice3& L) {
    TernaryForm f = ternary_gram(L);
    return rho_point_coords(f.gram, sublattice_coords(L, p));
}

struct GramCovering {
    Rat rho;
    RatVec hole;  // lattice coordinates of a deep hole
    std::vector<IntVec> relevant;
};

// Deep holes of a rank-3 lattice are circumcenters of Delaunay cells; every
// circumcenter is determined by the origin plus an affinely independent
// triple of Voronoi-relevant vectors, and only centers lying in their own
// Voronoi cell count.  rho is the largest such circumradius.
inline GramCovering rho_gram(const RatMat& g) {
    std::vector<IntVec> rel = voronoi_relevant(g);
    Rat best = 0;
    RatVec besthole(3, 0);
    const size_t m = rel.size();
    for (size_t i = 0; i < m; ++i)
        for (size_t j = i + 1; j < m; ++j)
            for (size_t k = j + 1; k < m; ++k) {
                // solve 2 <c, v> = nrm(v) for each of the three vectors
                RatMat mtx(3, RatVec(3));
                RatVec rhs(3);
                const IntVec* vs[3] = {&rel[i], &rel[j], &rel[k]};
                for (int r = 0; r < 3; ++r) {
                    for (int c = 0; c < 3; ++c) {
                        Rat s2 = 0;
                        for (int t = 0; t < 3; ++t) s2 += g[c][t] * (*vs[r])[t];
                        mtx[r][c] = 2 * s2;
                    }
                    rhs[r] = form_eval(g, *vs[r]);
                }
                if (det(mtx) == 0) continue;  // coplanar triple, no circumcenter
                auto c = solve(mtx, rhs);
                if (!c) continue;
                // keep the center only if it lies in the Voronoi cell of 0
                bool inside = true;
                for (const auto& v : rel) {
                    Rat s2 = 0;
                    for (int rr = 0; rr < 3; ++rr) {
                        Rat row = 0;
                        for (int cc = 0; cc < 3; ++cc) row += g[rr][cc] * (*c)[cc];
                        s2 += row * v[rr];
                    }
                    if (2 * s2 > form_eval(g, v)) { inside = false; break; }
                }
                if (!inside) continue;
                Rat r2 = 0;
                for (int rr = 0; rr < 3; ++rr)
                    for (int cc = 0; cc < 3; ++cc) r2 += g[rr][cc] * (*c)[rr] * (*c)[cc];
                if (r2 > best || (r2 == best && *c < besthole)) {
                    best = r2;
                    besthole = *c;
                }
            }
    return {best, besthole, rel};
}

inline CoveringCertificate rho_order(const Order& O, const OrthogonalInvolution& s) {
    SubLattice3 L = plus_part(O, s);
    GramCovering gc = rho_gram(ternary_gram(L).gram);
    Quat hole(O.alg());
    for (int k = 0; k < 3; ++k) hole = hole + gc.hole[k] * L.basis[k];
    return {gc.rho, hole, gc.relevant};
}

struct EuclideanCertificate {
    bool euclidean;
    CoveringCertificate cover;
};

inline EuclideanCertificate is_norm_euclidean(const Order& O, const OrthogonalInvolution& s) {
    CoveringCertificate c = rho_order(O, s);
    return {c.rho < 1, std::move(c)};
}

}  // namespace qorders
