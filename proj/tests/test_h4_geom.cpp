#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qorders/json_io.hpp"

using namespace qorders;

namespace {

H4Point random_point(const QuatAlgebra& A, std::mt19937& rng, int spread = 12) {
    auto coeff = [&] { return frac(int(rng() % (2 * spread + 1)) - spread, 1 + int(rng() % 6)); };
    Quat alpha(A, coeff(), coeff(), coeff(), 0);
    return {alpha, frac(1 + int(rng() % 12), 2 + int(rng() % 5))};
}

GeneratorWord random_word(const Order& O, const OrthogonalInvolution& s,
                          const std::vector<Quat>& units, std::mt19937& rng, int len) {
    const QuatAlgebra& A = O.alg();
    SubLattice3 plus = plus_part(O, s);
    GeneratorWord w;
    for (int k = 0; k < len; ++k) {
        switch (rng() % 3) {
            case 0: {
                Quat tau(A);
                for (int t = 0; t < 3; ++t) tau = tau + Rat(int(rng() % 5) - 2) * plus.basis[t];
                if (!tau.is_zero()) w.push_back(Translation{tau});
                break;
            }
            case 1:
                w.push_back(UnitGen{units[rng() % units.size()]});
                break;
            default:
                w.push_back(Inversion{});
        }
    }
    return w;
}

}  // namespace

TEST_CASE("points and the distance surrogate") {
    QuatAlgebra A(-1, -1);
    CHECK_THROWS_AS(H4Point(Quat(A), Rat(0)), std::domain_error);
    CHECK_THROWS_AS(H4Point(gen_ij(A), Rat(1)), std::domain_error);
    H4Point p{one(A), Rat(2)};
    H4Point q{gen_i(A), Rat(1, 2)};
    CHECK(cosh_surrogate(p, p) == Rat(0));
    CHECK(cosh_surrogate(p, q) == cosh_surrogate(q, p));
    CHECK(cosh_surrogate(p, q) > 0);
    CHECK(p.height_sq() == Rat(4));
}

TEST_CASE("moebius action is a group action") {
    Order H = named_order("hurwitz");
    const QuatAlgebra& A = H.alg();
    OrthogonalInvolution s{gen_ij(A)};
    std::vector<Quat> units = unit_group(H);
    std::mt19937 rng(7);
    for (int t = 0; t < 200; ++t) {
        SLSigmaMatrix m = evaluate_word(s, random_word(H, s, units, rng, 4), A);
        SLSigmaMatrix n = evaluate_word(s, random_word(H, s, units, rng, 4), A);
        H4Point z = random_point(A, rng);
        CHECK(mobius_apply(sl_identity(A), z) == z);
        CHECK(mobius_apply(m * n, z) == mobius_apply(m, mobius_apply(n, z)));
    }
}

TEST_CASE("height factor cocycle and transformation law") {
    Order H = named_order("hurwitz");
    const QuatAlgebra& A = H.alg();
    OrthogonalInvolution s{gen_ij(A)};
    std::vector<Quat> units = unit_group(H);
    std::mt19937 rng(9);
    for (int t = 0; t < 200; ++t) {
        SLSigmaMatrix m = evaluate_word(s, random_word(H, s, units, rng, 4), A);
        SLSigmaMatrix n = evaluate_word(s, random_word(H, s, units, rng, 4), A);
        H4Point z = random_point(A, rng);
        CHECK(height_factor(m * n, z) == height_factor(m, mobius_apply(n, z)) * height_factor(n, z));
        CHECK(mobius_apply(m, z).height_sq() * height_factor(m, z) * height_factor(m, z) ==
              z.height_sq());
        // the surrogate is a two-point invariant
        H4Point w = random_point(A, rng);
        CHECK(cosh_surrogate(mobius_apply(m, z), mobius_apply(m, w)) == cosh_surrogate(z, w));
    }
}

TEST_CASE("dirichlet bisectors separate exactly") {
    Order H = named_order("hurwitz");
    const QuatAlgebra& A = H.alg();
    OrthogonalInvolution s{gen_ij(A)};
    std::vector<Quat> units = unit_group(H);
    std::mt19937 rng(13);
    int planes = 0, spheres = 0;
    for (int t = 0; t < 300; ++t) {
        H4Point z = random_point(A, rng, 4);
        SLSigmaMatrix m = evaluate_word(s, random_word(H, s, units, rng, 4), A);
        H4Point gz = mobius_apply(m, z);
        if (gz == z) continue;
        HalfSpaceH4 h = dirichlet_bisector(z, gz);
        (std::holds_alternative<PlaneHS>(h.kind) ? planes : spheres)++;
        for (int u = 0; u < 4; ++u) {
            H4Point w = random_point(A, rng);
            Rat dz = cosh_surrogate(w, z), dgz = cosh_surrogate(w, gz);
            // interior iff closer to z; boundary iff exactly equidistant
            CHECK(strictly_satisfies(h, w) == (dz < dgz));
            CHECK((halfspace_defect(h, w) == 0) == (dz == dgz));
        }
        // points of equal height land on a plane whose boundary is sampleable
        if (auto* pl = std::get_if<PlaneHS>(&h.kind)) {
            (void)pl;
            CHECK(z.height_sq() == gz.height_sq());
        }
    }
    CHECK(planes > 0);
    CHECK(spheres > 0);
}

TEST_CASE("ford sphere at a lattice point") {
    QuatAlgebra A(-1, -1);
    // base point 1 + 2k: the unit sphere about the origin separates it from
    // the inverted image -(1 + 2k)^{-1} with exact center and radius
    H4Point z{one(A), Rat(2)};
    HalfSpaceH4 h = bisector_halfspace(z, Quat(A));
    auto* sp = std::get_if<SphereHS>(&h.kind);
    REQUIRE(sp != nullptr);
    CHECK(sp->center == Rat(-1, 2) * one(A));
    CHECK(sp->radius_sq == Rat(5, 4));
    CHECK(sp->side == Side::Outside);
    // base points on the unit sphere are degenerate
    CHECK_THROWS_AS(bisector_halfspace(H4Point{Quat(A), Rat(1)}, Quat(A)), DegenerateBisector);
}

TEST_CASE("translation cell of the hurwitz cusp group") {
    Order H = named_order("hurwitz");
    OrthogonalInvolution s{gen_ij(H.alg())};
    H4Point bp = default_base_point(H, s);
    CHECK(bp.alpha == Quat(H.alg(), Rat(1, 12), Rat(1, 13), Rat(1, 13), 0));
    CHECK(bp.s == Rat(3, 2));
    CHECK(trivial_stabilizer(H, s, bp.alpha));
    CHECK_FALSE(trivial_stabilizer(H, s, Quat(H.alg())));
}

TEST_CASE("coarse domain structure") {
    Order H = named_order("hurwitz");
    const QuatAlgebra& A = H.alg();
    OrthogonalInvolution s{gen_ij(A)};
    H4Point bp = default_base_point(H, s);
    DomainDescription dom = coarse_domain(H, s, bp.alpha, bp.s);
    int planes = 0, spheres = 0;
    SubLattice3 plus = plus_part(H, s);
    for (const auto& h : dom.halfspaces) {
        CHECK(strictly_satisfies(h, dom.base_point));
        if (auto* sp = std::get_if<SphereHS>(&h.kind)) {
            ++spheres;
            CHECK(sp->radius_sq == Rat(1));
            CHECK(sp->side == Side::Outside);
            CHECK(in_lattice(plus.basis, sp->center));
        } else {
            ++planes;
        }
    }
    CHECK(planes == 7);
    CHECK(spheres == 26);
    CHECK_THROWS_AS(coarse_domain(H, s, Quat(A), bp.s), BadBasePoint);
}

TEST_CASE("dirichlet domain of the hurwitz group") {
    Order H = named_order("hurwitz");
    const QuatAlgebra& A = H.alg();
    OrthogonalInvolution s{gen_ij(A)};
    H4Point bp = default_base_point(H, s);
    DomainDescription dom = dirichlet_domain(H, s, bp.alpha, bp.s);
    CHECK(dom.cusp_count == 1);
    CHECK(dom.halfspaces.size() == 80);
    CHECK(dom.gamma_prime.size() == 47);
    for (const auto& h : dom.halfspaces) CHECK(strictly_satisfies(h, dom.base_point));
    for (const auto& g : dom.gamma_prime) {
        CHECK(sl_check(s, g));
        CHECK_FALSE(mobius_apply(g, dom.base_point) == dom.base_point);
    }

    std::mt19937 rng(21);
    for (int t = 0; t < 40; ++t) {
        H4Point w0 = random_point(A, rng);
        auto [word, w] = reduce_point(H, s, w0, dom);
        for (const auto& h : dom.halfspaces) CHECK(satisfies(h, w));
        // the word certifies the reduction
        SLSigmaMatrix m = evaluate_word(s, word, A);
        CHECK(mobius_apply(m, w0) == w);
        // heights never drop across an inversion step
        H4Point cur = w0;
        Rat prev = cur.height_sq();
        for (auto it = word.rbegin(); it != word.rend(); ++it) {
            cur = mobius_apply(generator_matrix(s, *it, A), cur);
            if (std::holds_alternative<Inversion>(*it)) CHECK(cur.height_sq() >= prev);
            prev = cur.height_sq();
        }
    }
}

TEST_CASE("bounded pair enumeration") {
    Order H = named_order("hurwitz");
    OrthogonalInvolution s{gen_ij(H.alg())};
    H4Point z = default_base_point(H, s);
    auto pairs = enumerate_bounded_pairs(H, s, z, Rat(3));
    CHECK(pairs.size() == 72);
    for (const auto& [c, d] : pairs) {
        CHECK(!(c.is_zero() && d.is_zero()));
        CHECK(in_fixed_space(s, c * apply_involution(s, d)));
        CHECK(nrm(c * z.as_quat() + d) < Rat(3));
    }
}
