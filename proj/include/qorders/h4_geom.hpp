#pragma once

// Exact upper-half-space H^4 geometry for SL^sigma(2,O): Moebius action,
// rational distance surrogates, perpendicular-bisector half-spaces,
// bounded-pair enumeration, the coarse fundamental domain, and the Dirichlet
// domain algorithm.  H^4 is the subset of H_R with positive k-component;
// a point is alpha + s*k with alpha in the span of 1, i, j and s > 0.
//
// All comparisons stay rational: heights enter only through the squares and
// products s_p * s_q * nrm(k), with nrm(k) = a*b.

#include "qorders/covering.hpp"
#include "qorders/twisted_euclid.hpp"

#include <map>

namespace qorders {

struct DegenerateBisector : std::runtime_error {
    DegenerateBisector() : std::runtime_error("bisector sphere degenerates at nrm(z) <= 1") {}
};
struct BadBasePoint : std::runtime_error {
    BadBasePoint() : std::runtime_error("base point has nontrivial stabilizer or nrm(alpha) > 1") {}
};
struct HeightTooLow : std::runtime_error {
    HeightTooLow() : std::runtime_error("base height must satisfy s^2 * nrm(k) > 2") {}
};
struct NotEuclideanOrder : std::runtime_error {
    NotEuclideanOrder() : std::runtime_error("order is not norm-Euclidean (rho >= 1)") {}
};
struct NonTermination : std::runtime_error {
    explicit NonTermination(const std::string& trace)
        : std::runtime_error("point reduction hit the iteration cap; trace: " + trace) {}
};

inline Rat k_norm(const QuatAlgebra& A) { return A.a * A.b; }  // nrm(ij)

// Rational bounds on square roots: scale-controlled floor/ceiling of sqrt(r).
inline Rat rat_sqrt_lower(const Rat& r, const Int& scale = 1000) {
    if (r < 0) throw std::domain_error("negative radicand");
    Int p = num(r), q = den(r);
    return Rat(isqrt(p * q * scale * scale), q * scale);
}
inline Rat rat_sqrt_upper(const Rat& r, const Int& scale = 1000) {
    if (r < 0) throw std::domain_error("negative radicand");
    Int p = num(r), q = den(r);
    return Rat(isqrt(p * q * scale * scale) + 1, q * scale);
}

// ---------------------------------------------------------------------------
// Points and distance surrogate

struct H4Point {
    Quat alpha;  // components along 1, i, j only
    Rat s;       // coefficient of k; the point is alpha + s*k

    H4Point(Quat a_, Rat s_) : alpha(std::move(a_)), s(std::move(s_)) {
        if (alpha.z != 0) throw std::domain_error("alpha must lie in the span of 1, i, j");
        if (s <= 0) throw std::domain_error("height coefficient must be positive");
    }

    Quat as_quat() const {
        Quat q = alpha;
        q.z = s;
        return q;
    }
    Rat height_sq() const { return s * s * k_norm(alpha.alg); }  // pi_k(z)^2
    bool operator==(const H4Point& o) const { return alpha == o.alpha && s == o.s; }
};

// cosh d(p,q) - 1 = nrm(p - q) / (2 pi_k(p) pi_k(q)); the pi_k product is
// s_p * s_q * nrm(k), hence rational.
inline Rat cosh_surrogate(const H4Point& p, const H4Point& q) {
    return nrm(p.as_quat() - q.as_quat()) / (2 * p.s * q.s * k_norm(p.alpha.alg));
}

// ---------------------------------------------------------------------------
// Moebius action

inline H4Point mobius_apply(const SLSigmaMatrix& m, const H4Point& z) {
    Quat q = z.as_quat();
    Quat w = (m.a * q + m.b) * inv(m.c * q + m.d);
    if (w.z <= 0) throw std::logic_error("Moebius image left the upper half-space");
    Quat al = w;
    al.z = 0;
    return {al, w.z};
}

// g(gamma, z) = nrm(cz + d); satisfies the cocycle identity and
// pi_k(gamma.z) = pi_k(z) / g.
inline Rat height_factor(const SLSigmaMatrix& m, const H4Point& z) {
    return nrm(m.c * z.as_quat() + m.d);
}

// The model ties sigma to the k-direction: the fixed space must be the span
// of 1, i, j.
inline void require_standard_involution(const OrthogonalInvolution& s) {
    const QuatAlgebra& A = s.u.alg;
    if (apply_involution(s, gen_i(A)) != gen_i(A) || apply_involution(s, gen_j(A)) != gen_j(A))
        throw std::domain_error("H^4 geometry requires the involution fixing 1, i and j");
}

// ---------------------------------------------------------------------------
// Half-spaces

enum class Side { Inside, Outside };

struct SphereHS {
    Quat center;  // in the span of 1, i, j
    Rat radius_sq;
    Side side;
};
struct PlaneHS {
    Quat normal;  // in the span of 1, i, j; constraint <normal, w> vs offset
    Rat offset;
    Side side;  // Inside: <normal, w> <= offset
};
struct HalfSpaceH4 {
    std::variant<SphereHS, PlaneHS> kind;
};

// Signed evaluation: <= 0 means the constraint is satisfied.
inline Rat halfspace_defect(const HalfSpaceH4& h, const H4Point& w) {
    Quat q = w.as_quat();
    if (auto* sp = std::get_if<SphereHS>(&h.kind)) {
        Rat d = nrm(q - sp->center) - sp->radius_sq;
        return sp->side == Side::Outside ? -d : d;
    }
    const PlaneHS& pl = std::get<PlaneHS>(h.kind);
    Rat d = bilinear(pl.normal, q) - pl.offset;
    return pl.side == Side::Inside ? d : -d;
}

inline bool satisfies(const HalfSpaceH4& h, const H4Point& w) { return halfspace_defect(h, w) <= 0; }
inline bool strictly_satisfies(const HalfSpaceH4& h, const H4Point& w) { return halfspace_defect(h, w) < 0; }

// Perpendicular bisector of z and gamma.z as a half-space containing z.  With
// s-coordinates s1 = s_z and s2 = s_{gamma z}, the equidistance locus of the
// surrogate is s2 nrm(w - z) = s1 nrm(w - gamma z): a vertical plane when the
// heights agree, otherwise a sphere centered on the boundary.
inline HalfSpaceH4 dirichlet_bisector(const H4Point& z, const H4Point& gz) {
    Rat s1 = z.s, s2 = gz.s;
    Quat zq = z.as_quat(), gq = gz.as_quat();
    if (s1 == s2) {
        Quat n = Rat(2) * (gq - zq);  // k-components cancel
        n.z = 0;
        return {PlaneHS{n, nrm(gq) - nrm(zq), Side::Inside}};
    }
    Quat m = (Rat(1) / (s2 - s1)) * (s2 * zq - s1 * gq);  // k-component vanishes
    m.z = 0;
    Rat r2 = nrm(m) - (s2 * nrm(zq) - s1 * nrm(gq)) / (s2 - s1);
    return {SphereHS{m, r2, s2 > s1 ? Side::Inside : Side::Outside}};
}

// Perpendicular bisector of z and its inverted translate tau - z^{-1},
// computed exactly as the equidistance locus of the two points; a sphere with
// the domain outside whenever nrm(z) > 1.
inline HalfSpaceH4 bisector_halfspace(const H4Point& z, const Quat& tau) {
    Rat n = nrm(z.as_quat());
    if (n <= 1) throw DegenerateBisector{};
    Quat y = tau - inv(z.as_quat());
    Quat b = y;
    b.z = 0;
    return dirichlet_bisector(z, H4Point{b, y.z});
}

// ---------------------------------------------------------------------------
// Lattice helpers

// All integer coordinate vectors x with (x - target)^T g (x - target) <= bound.
inline std::vector<std::pair<IntVec, Rat>> lattice_points_within(const RatMat& g, const RatVec& target,
                                                                 const Rat& bound) {
    std::vector<std::pair<IntVec, Rat>> out;
    if (bound < 0) return out;
    const size_t n = g.size();
    RatMat gi = mat_inverse(g);
    IntVec r0(n);
    for (size_t k = 0; k < n; ++k) {
        Int fl;
        mpz_fdiv_q(fl.get_mpz_t(), num(target[k]).get_mpz_t(), den(target[k]).get_mpz_t());
        r0[k] = fl;
    }
    std::vector<Int> box(n);
    for (size_t k = 0; k < n; ++k) box[k] = rat_sqrt_floor(bound * gi[k][k]) + 2;
    IntVec x(n);
    std::function<void(size_t)> rec = [&](size_t k) {
        if (k == n) {
            RatVec d(n);
            for (size_t t = 0; t < n; ++t) d[t] = Rat(x[t]) - target[t];
            Rat s = 0;
            for (size_t r = 0; r < n; ++r)
                for (size_t c = 0; c < n; ++c) s += g[r][c] * d[r] * d[c];
            if (s <= bound) out.emplace_back(x, s);
            return;
        }
        for (Int c = r0[k] - box[k]; c <= r0[k] + box[k]; ++c) {
            x[k] = c;
            rec(k + 1);
        }
    };
    rec(0);
    return out;
}

inline Quat coords_to_quat(const SubLattice3& L, const IntVec& x) {
    Quat q(L.alg);
    for (int k = 0; k < 3; ++k) q = q + Rat(x[k]) * L.basis[k];
    return q;
}

// ---------------------------------------------------------------------------
// Stabilizer of infinity

inline std::vector<SLSigmaMatrix> stabilizer_infinity(const Order& O, const OrthogonalInvolution& s) {
    require_standard_involution(s);
    const QuatAlgebra& A = O.alg();
    SubLattice3 plus = plus_part(O, s);
    std::vector<SLSigmaMatrix> gens;
    for (const auto& tau : plus.basis) gens.emplace_back(one(A), tau, Quat(A), one(A));
    for (const auto& u : unit_group(O))
        gens.emplace_back(u, Quat(A), Quat(A), inv(apply_involution(s, u)));
    for (const auto& m : gens)
        if (!sl_check(s, m)) throw std::logic_error("stabilizer generator failed the SL^sigma check");
    return gens;
}

// ---------------------------------------------------------------------------
// The Dirichlet cell of Gamma_infinity in the boundary 3-space

namespace detail {

// A plane <n, w> <= off in the plain coordinates (w, x, y) of H^+; the
// pairing carries the weights (1, -a, -b).
struct CellPlane {
    Quat normal;
    Rat offset;
};

inline Rat plane_eval(const CellPlane& p, const Quat& w) { return bilinear(p.normal, w) - p.offset; }

inline std::vector<Quat> cell_vertices(const QuatAlgebra& A, const std::vector<CellPlane>& planes) {
    std::vector<Quat> verts;
    const size_t n = planes.size();
    auto coeffs = [&](const CellPlane& p) {
        return RatVec{p.normal.w, -A.a * p.normal.x, -A.b * p.normal.y};
    };
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
            for (size_t k = j + 1; k < n; ++k) {
                RatMat m{coeffs(planes[i]), coeffs(planes[j]), coeffs(planes[k])};
                if (det(m) == 0) continue;
                auto x = solve(m, RatVec{planes[i].offset, planes[j].offset, planes[k].offset});
                if (!x) continue;
                Quat v(A, (*x)[0], (*x)[1], (*x)[2]);
                bool ok = true;
                for (const auto& p : planes)
                    if (plane_eval(p, v) > 0) { ok = false; break; }
                if (ok && std::find_if(verts.begin(), verts.end(), [&](const Quat& q) { return q == v; }) ==
                              verts.end())
                    verts.push_back(v);
            }
    return verts;
}

// Redundancy pruning for a bounded full-dimensional cell: a plane carries a
// facet exactly when it passes through at least three vertices of the cell
// (a facet is a 2-polygon); a plane meeting the cell in at most an edge is
// redundant.  Exact duplicates are also collapsed.
inline void prune_redundant(const QuatAlgebra& A, std::vector<CellPlane>& planes) {
    std::vector<Quat> verts = cell_vertices(A, planes);
    std::vector<CellPlane> kept;
    for (const auto& p : planes) {
        int on = 0;
        for (const auto& v : verts)
            if (plane_eval(p, v) == 0) ++on;
        if (on < 3) continue;
        bool dup = false;
        for (const auto& q : kept)
            if (q.normal == p.normal && q.offset == p.offset) { dup = true; break; }
        if (!dup) kept.push_back(p);
    }
    planes = kept;
}

struct GammaInfCell {
    std::vector<CellPlane> planes;
    std::vector<Quat> vertices;
};

// Dirichlet cell of Gamma_infinity at alpha: vertical planes from the
// Voronoi-relevant translation vectors of O^+ and from the unit action
// z -> u z sigma(u) (with all translates whose bisectors can reach the
// translation cell), pruned of redundant planes.
inline GammaInfCell gamma_inf_cell(const Order& O, const OrthogonalInvolution& s, const Quat& alpha) {
    const QuatAlgebra& A = O.alg();
    SubLattice3 plus = plus_part(O, s);
    RatMat g = ternary_gram(plus).gram;
    GramCovering cov = rho_gram(g);

    std::vector<CellPlane> planes;
    auto add_bisector = [&](const Quat& m) {
        // closer to alpha than to m: 2 <w, m - alpha> <= nrm m - nrm alpha
        Quat n = m - alpha;
        planes.push_back({Rat(2) * n, nrm(m) - nrm(alpha)});
    };
    for (const auto& v : cov.relevant) add_bisector(alpha + coords_to_quat(plus, v));

    std::vector<Quat> images;
    for (const auto& u : unit_group(O)) {
        Quat m0 = u * alpha * apply_involution(s, u);
        if (m0 == alpha) continue;  // +-1 and any alpha-stabilizing unit
        // bisectors can cut the translation cell only within 4 * rho of alpha
        auto c0 = span_coords(plus.basis, alpha - m0);
        if (!c0) throw std::logic_error("unit image left the boundary 3-space");
        for (const auto& [tc, d2] : lattice_points_within(g, *c0, 4 * cov.rho)) {
            Quat m = m0 + coords_to_quat(plus, tc);
            if (m == alpha) throw BadBasePoint{};
            if (std::find_if(images.begin(), images.end(), [&](const Quat& q) { return q == m; }) ==
                images.end())
                images.push_back(m);
        }
    }
    // Nearest images first: the closest bisectors are the ones most likely to
    // stay active, which keeps the working plane set small below.
    std::sort(images.begin(), images.end(),
              [&](const Quat& p, const Quat& q) { return nrm(p - alpha) < nrm(q - alpha); });

    // Incremental cutting: the cell is the translation cell intersected with
    // the image bisectors, so a candidate that does not cut the current
    // intersection can never cut the final cell and is dropped immediately.
    std::vector<Quat> verts = cell_vertices(A, planes);
    if (verts.empty()) throw std::logic_error("Gamma_infinity cell is unbounded");
    for (const auto& m : images) {
        CellPlane p{Rat(2) * (m - alpha), nrm(m) - nrm(alpha)};
        bool cuts = false;
        for (const auto& v : verts)
            if (plane_eval(p, v) > 0) { cuts = true; break; }
        if (!cuts) continue;
        planes.push_back(p);
        verts = cell_vertices(A, planes);
        if (verts.empty()) throw std::logic_error("Gamma_infinity cell emptied by a unit bisector");
    }

    prune_redundant(A, planes);
    GammaInfCell cell{planes, cell_vertices(A, planes)};
    if (cell.vertices.empty()) throw std::logic_error("Gamma_infinity cell is unbounded");
    return cell;
}

}  // namespace detail

// Trivial stabilizer test for the base point: no unit u != +-1 with
// u alpha sigma(u) - alpha in O^+.
inline bool trivial_stabilizer(const Order& O, const OrthogonalInvolution& s, const Quat& alpha) {
    SubLattice3 plus = plus_part(O, s);
    for (const auto& u : unit_group(O)) {
        Quat m0 = u * alpha * apply_involution(s, u);
        if (u == one(O.alg()) || u == -one(O.alg())) continue;
        if (in_lattice(plus.basis, alpha - m0)) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Default base point

// Height: smallest rational s with s^2 nrm(k) = 9/4 when that square root is
// rational, else the next rational (denominator 100) above sqrt(2 / nrm(k)).
inline Rat default_height(const QuatAlgebra& A) {
    Rat target = Rat(9, 4) / k_norm(A);
    if (is_square(num(target)) && is_square(den(target)))
        return Rat(isqrt(num(target)), isqrt(den(target)));
    return rat_sqrt_upper(2 / k_norm(A), 100);
}

// Deterministic search for alpha: numerator-1 triples 1/d1 + i/d2 + j/d3 with
// denominators up to 13, ordered by norm, kept if alpha lies in its own
// translation cell, nrm(alpha) <= 1, and the unit-action stabilizer is trivial.
inline Quat default_alpha(const Order& O, const OrthogonalInvolution& s) {
    require_standard_involution(s);
    const QuatAlgebra& A = O.alg();
    SubLattice3 plus = plus_part(O, s);
    RatMat g = ternary_gram(plus).gram;
    std::vector<std::tuple<Rat, int, int, int>> cands;
    for (int d1 = 2; d1 <= 13; ++d1)
        for (int d2 = 2; d2 <= 13; ++d2)
            for (int d3 = 2; d3 <= 13; ++d3) {
                Quat al(A, Rat(1, d1), Rat(1, d2), Rat(1, d3));
                cands.emplace_back(nrm(al), d1, d2, d3);
            }
    std::sort(cands.begin(), cands.end());
    for (const auto& [n, d1, d2, d3] : cands) {
        if (n > 1) break;
        Quat al(A, Rat(1, d1), Rat(1, d2), Rat(1, d3));
        auto c = span_coords(plus.basis, al);
        if (!c) continue;
        IntVec arg;
        rho_point_coords(g, *c, &arg);
        if (arg != IntVec(3, 0)) continue;  // not in the cell at the origin
        if (!trivial_stabilizer(O, s, al)) continue;
        return al;
    }
    throw BadBasePoint{};
}

inline H4Point default_base_point(const Order& O, const OrthogonalInvolution& s) {
    return {default_alpha(O, s), default_height(O.alg())};
}

// ---------------------------------------------------------------------------
// Bounded pairs

// All pairs (c, d) in O x O, not both zero, with c sigma(d) in the fixed
// space and nrm(cz + d) < R.  Completeness: nrm(c) < R / pi_k(z)^2 and
// nrm(d) < (sqrt(R) + sqrt(nrm(c) nrm(z)))^2, over-approximated rationally.
inline std::vector<std::pair<Quat, Quat>> enumerate_bounded_pairs(const Order& O,
                                                                  const OrthogonalInvolution& s,
                                                                  const H4Point& z, const Rat& R) {
    if (R <= 0) throw std::domain_error("pair bound must be positive");
    const QuatAlgebra& A = O.alg();
    Quat zq = z.as_quat();
    Rat nz = nrm(zq);
    RatMat g4(4, RatVec(4));
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) g4[r][c] = bilinear(O.basis()[r], O.basis()[c]);

    std::vector<Quat> cs{Quat(A)};
    for (const auto& [cv, nc] : enumerate_below(g4, R / z.height_sq())) {
        if (cv == IntVec(4, 0) || nc >= R / z.height_sq()) continue;
        Quat c(A);
        for (int k = 0; k < 4; ++k) c = c + Rat(cv[k]) * O.basis()[k];
        cs.push_back(c);
    }
    std::vector<std::pair<Quat, Quat>> out;
    for (const auto& c : cs) {
        Rat ncz = nrm(c) * nz;
        Rat dbound = R + ncz + 2 * rat_sqrt_upper(R * ncz);
        for (const auto& [dv, nd] : enumerate_below(g4, dbound)) {
            Quat d(A);
            for (int k = 0; k < 4; ++k) d = d + Rat(dv[k]) * O.basis()[k];
            if (c.is_zero() && d.is_zero()) continue;
            if (!in_fixed_space(s, c * apply_involution(s, d))) continue;
            if (nrm(c * zq + d) < R) out.emplace_back(c, d);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Domains

struct DomainDescription {
    std::vector<HalfSpaceH4> halfspaces;
    std::vector<SLSigmaMatrix> gamma_prime;
    H4Point base_point;
    int cusp_count = 1;
};

namespace detail {

inline void check_base_interior(const DomainDescription& d) {
    for (const auto& h : d.halfspaces)
        if (!strictly_satisfies(h, d.base_point))
            throw std::logic_error("base point is not strictly interior");
}

}  // namespace detail

// Coarse fundamental domain D_z^*: the Gamma_infinity cell at alpha (vertical
// planes) intersected with the outside of every bisector sphere whose
// radius-bounded ball can reach the cell.
inline DomainDescription coarse_domain(const Order& O, const OrthogonalInvolution& s, const Quat& alpha,
                                       const Rat& height) {
    require_standard_involution(s);
    H4Point z{alpha, height};
    if (z.height_sq() <= 2) throw HeightTooLow{};
    if (nrm(alpha) > 1 || !trivial_stabilizer(O, s, alpha)) throw BadBasePoint{};

    SubLattice3 plus = plus_part(O, s);
    RatMat g = ternary_gram(plus).gram;
    detail::GammaInfCell cell = detail::gamma_inf_cell(O, s, alpha);

    DomainDescription dom{{}, {}, z, 1};
    for (const auto& p : cell.planes) dom.halfspaces.push_back({PlaneHS{p.normal, p.offset, Side::Inside}});

    // unit spheres nrm(w - tau) >= 1, the isometric spheres of the elements
    // Inv . Trans(-tau); a sphere matters only when its boundary disk can
    // reach the cell, which sits inside the ball of radius sqrt(rho) at alpha
    GramCovering cov = rho_gram(g);
    Rat reach = 1 + rat_sqrt_upper(cov.rho);
    auto c0 = span_coords(plus.basis, alpha);
    if (!c0) throw std::logic_error("base point left the boundary 3-space");
    for (const auto& [tc, d2] : lattice_points_within(g, *c0, reach * reach))
        dom.halfspaces.push_back({SphereHS{coords_to_quat(plus, tc), Rat(1), Side::Outside}});

    detail::check_base_interior(dom);
    return dom;
}

namespace detail {

inline SLSigmaMatrix canonical_sign(const SLSigmaMatrix& m) {
    SLSigmaMatrix n = -m;
    const Quat* p[4] = {&m.a, &m.b, &m.c, &m.d};
    const Quat* q[4] = {&n.a, &n.b, &n.c, &n.d};
    for (int k = 0; k < 4; ++k) {
        if (quat_less(*p[k], *q[k])) return m;
        if (quat_less(*q[k], *p[k])) return n;
    }
    return m;
}

inline bool sl_less(const SLSigmaMatrix& x, const SLSigmaMatrix& y) {
    const Quat* p[4] = {&x.a, &x.b, &x.c, &x.d};
    const Quat* q[4] = {&y.a, &y.b, &y.c, &y.d};
    for (int k = 0; k < 4; ++k) {
        if (quat_less(*p[k], *q[k])) return true;
        if (quat_less(*q[k], *p[k])) return false;
    }
    return false;
}

}  // namespace detail

// Dirichlet domain: coarse half-spaces plus the bisectors of z against gamma.z
// for every gamma in Gamma' = {gamma : cosh_surrogate(gamma.z, z) <= C_hat},
// where C_hat is a rational over-approximation of cosh(L/2) - 1 computed from
// the farthest vertex of the compact slab of D_z^*.
inline DomainDescription dirichlet_domain(const Order& O, const OrthogonalInvolution& s, const Quat& alpha,
                                          const Rat& height) {
    require_standard_involution(s);
    EuclideanCertificate cert = is_norm_euclidean(O, s);
    if (!cert.euclidean) throw NotEuclideanOrder{};

    DomainDescription dom = coarse_domain(O, s, alpha, height);
    const QuatAlgebra& A = O.alg();
    H4Point z = dom.base_point;
    Rat ab = k_norm(A);
    detail::GammaInfCell cell = detail::gamma_inf_cell(O, s, alpha);

    // floor of the compact slab: height^2 >= 1 - rho, taken at a rational
    // s-coordinate below sqrt((1 - rho) / nrm(k))
    Rat hs = rat_sqrt_lower((1 - cert.cover.rho) / ab);
    if (hs <= 0) throw std::logic_error("degenerate slab floor");
    // cosh L - 1 at the farthest slab vertex (the surrogate is decreasing in
    // the height over the slab, so the floor corner is extremal)
    Rat cl = 0;
    for (const auto& v : cell.vertices) {
        Rat c = (nrm(v - alpha) + ab * (hs - z.s) * (hs - z.s)) / (2 * hs * z.s * ab);
        if (c > cl) cl = c;
    }
    // half-angle: cosh(L/2)^2 <= (cosh L + 1) / 2
    Rat chat = rat_sqrt_upper((cl + 2) / 2) - 1;
    Rat R = 2 * (1 + chat);

    SubLattice3 plus = plus_part(O, s);
    RatMat g = ternary_gram(plus).gram;
    TwistedContext ctx(O, s);
    std::vector<SLSigmaMatrix> gamma;
    auto push = [&](const SLSigmaMatrix& m) {
        SLSigmaMatrix c = detail::canonical_sign(m);
        if (c == sl_identity(A) || c == -sl_identity(A)) return;
        for (const auto& e : gamma)
            if (e == c) return;
        H4Point im = mobius_apply(c, z);
        if (im == z) throw std::logic_error("nontrivial stabilizer element found");
        if (cosh_surrogate(im, z) > chat) return;
        gamma.push_back(c);
    };

    for (const auto& [c, d] : enumerate_bounded_pairs(O, s, z, R)) {
        std::optional<SLSigmaMatrix> m0;
        try {
            m0 = complete_row(c, d, ctx);
        } catch (const NotCoprime&) {
            continue;  // pairs with non-unit GCD generate no group element
        }
        H4Point im0 = mobius_apply(*m0, z);
        // gamma = Trans(beta) * m0; the surrogate caps nrm of the boundary
        // offset: nrm_3(im0.alpha + beta - z.alpha) <= 2*chat*s*s_im*ab - ab*(s_im - s)^2
        Rat bound = 2 * chat * z.s * im0.s * ab - ab * (im0.s - z.s) * (im0.s - z.s);
        if (bound < 0) continue;
        auto tgt = span_coords(plus.basis, z.alpha - im0.alpha);
        if (!tgt) continue;  // image off the fixed boundary: no translate can qualify
        for (const auto& [bc, d2] : lattice_points_within(g, *tgt, bound)) {
            Quat beta = coords_to_quat(plus, bc);
            SLSigmaMatrix tr{one(A), beta, Quat(A), one(A)};
            push(tr * *m0);
        }
    }
    std::sort(gamma.begin(), gamma.end(), detail::sl_less);
    dom.gamma_prime = gamma;
    for (const auto& m : gamma) dom.halfspaces.push_back(dirichlet_bisector(z, mobius_apply(m, z)));
    detail::check_base_interior(dom);
    return dom;
}

// ---------------------------------------------------------------------------
// Point reduction

// Moves w into the coarse domain by alternating Gamma_infinity normalization
// (unit action plus closest-vector translation toward alpha) with inversion
// at the worst violated sphere.  Returns the generator word applied, with
// evaluate_word(word) . w = w'.
inline std::pair<GeneratorWord, H4Point> reduce_point(const Order& O, const OrthogonalInvolution& s,
                                                      const H4Point& w0, const DomainDescription& dom) {
    require_standard_involution(s);
    const QuatAlgebra& A = O.alg();
    SubLattice3 plus = plus_part(O, s);
    RatMat g = ternary_gram(plus).gram;
    std::vector<Quat> units = unit_group(O);
    const Quat& alpha = dom.base_point.alpha;

    GeneratorWord word;
    H4Point w = w0;
    const int cap = 10000;
    for (int iter = 0; iter < cap; ++iter) {
        // Gamma_infinity normalization: best unit rotation + translation
        bool have = false;
        Rat best_d = 0;
        Quat best_u(A), best_tau(A);
        H4Point best_w = w;
        for (const auto& u : units) {
            Quat wu = u * w.as_quat() * apply_involution(s, u);
            Quat wual = wu;
            wual.z = 0;
            auto tc = span_coords(plus.basis, alpha - wual);
            if (!tc) throw std::logic_error("orbit left the rational boundary space");
            IntVec arg;
            rho_point_coords(g, *tc, &arg);
            Quat tau(A);
            for (int k = 0; k < 3; ++k) tau = tau + Rat(arg[k]) * plus.basis[k];
            Quat cand = wual + tau;
            Rat dist = nrm(cand - alpha);
            if (!have || dist < best_d || (dist == best_d && quat_less(cand, best_w.alpha))) {
                have = true;
                best_d = dist;
                best_u = u;
                best_tau = tau;
                best_w = H4Point{cand, wu.z};
            }
        }
        if (!(best_w == w)) {
            GeneratorWord step;
            if (!best_tau.is_zero()) step.push_back(Translation{best_tau});
            if (best_u != one(A)) step.push_back(UnitGen{best_u});
            step.insert(step.end(), word.begin(), word.end());
            word = std::move(step);
            w = best_w;
        }
        // sphere constraints: invert at the tau of the most violated sphere
        bool violated = false;
        Quat inv_tau(A);
        Rat inv_n = 0;
        for (const auto& h : dom.halfspaces) {
            auto* sp = std::get_if<SphereHS>(&h.kind);
            if (!sp || sp->side != Side::Outside) continue;
            if (satisfies(h, w)) continue;
            Quat tau = sp->center;
            Rat n = nrm(w.as_quat() - tau);
            if (!violated || n < inv_n) {
                violated = true;
                inv_tau = tau;
                inv_n = n;
            }
        }
        if (!violated) return {word, w};
        Quat img = -inv(w.as_quat() - inv_tau);
        Quat imal = img;
        imal.z = 0;
        w = H4Point{imal, img.z};
        GeneratorWord step{Inversion{}, Translation{-inv_tau}};
        step.insert(step.end(), word.begin(), word.end());
        word = std::move(step);
    }
    throw NonTermination("base height " + to_string(w.s) + " at alpha norm " + to_string(nrm(w.alpha)));
}

}  // namespace qorders
