#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qorders/quat.hpp"

using namespace qorders;

namespace {

Quat random_quat(const QuatAlgebra& A, std::mt19937& rng) {
    auto coeff = [&] { return frac(int(rng() % 21) - 10, 1 + int(rng() % 6)); };
    return {A, coeff(), coeff(), coeff(), coeff()};
}

}  // namespace

TEST_CASE("rational helpers") {
    CHECK(to_string(Rat(3, 4)) == "3/4");
    CHECK(to_string(Rat(-5)) == "-5");
    CHECK(parse_rat("22/7") == Rat(22, 7));
    CHECK(parse_rat("-3/6") == Rat(-1, 2));
    CHECK_THROWS_AS(parse_rat(""), ParseError);
    CHECK_THROWS_AS(parse_rat("x"), ParseError);
    // frac canonicalizes where the raw two-argument constructor does not
    CHECK(frac(2, 4) == Rat(1, 2));
    CHECK(frac(0, 3) == Rat(0));
    CHECK(to_string(frac(-4, -6)) == "2/3");
}

TEST_CASE("norm weights against the structure constants") {
    QuatAlgebra A(-2, -3);
    CHECK(nrm(gen_i(A)) == Rat(2));
    CHECK(nrm(gen_j(A)) == Rat(3));
    CHECK(nrm(gen_ij(A)) == Rat(6));
    CHECK(gen_i(A) * gen_i(A) == Rat(-2) * one(A));
    CHECK(gen_j(A) * gen_j(A) == Rat(-3) * one(A));
    CHECK(gen_i(A) * gen_j(A) == gen_ij(A));
    CHECK(gen_j(A) * gen_i(A) == -gen_ij(A));
}

TEST_CASE("multiplicativity and conjugation") {
    std::mt19937 rng(11);
    for (auto [a, b] : {std::pair{-1, -1}, {-2, -3}, {-1, -10}, {-2, -26}}) {
        QuatAlgebra A(a, b);
        for (int t = 0; t < 50; ++t) {
            Quat p = random_quat(A, rng), q = random_quat(A, rng);
            CHECK(nrm(p * q) == nrm(p) * nrm(q));
            CHECK(conj(p * q) == conj(q) * conj(p));
            CHECK(p * conj(p) == nrm(p) * one(A));
            CHECK(tr(p + q) == tr(p) + tr(q));
            if (!p.is_zero()) {
                CHECK(p * inv(p) == one(A));
                CHECK(inv(p) * p == one(A));
            }
        }
    }
    CHECK_THROWS_AS(inv(Quat(QuatAlgebra(-1, -1))), DivisionByZero);
}

TEST_CASE("mixing algebras is rejected") {
    QuatAlgebra A(-1, -1), B(-1, -3);
    CHECK_THROWS_AS(one(A) + one(B), AlgebraMismatch);
    CHECK_THROWS_AS(gen_i(A) * gen_j(B), AlgebraMismatch);
}

TEST_CASE("orthogonal involution by ij") {
    QuatAlgebra A(-1, -1);
    OrthogonalInvolution s{gen_ij(A)};
    CHECK(apply_involution(s, one(A)) == one(A));
    CHECK(apply_involution(s, gen_i(A)) == gen_i(A));
    CHECK(apply_involution(s, gen_j(A)) == gen_j(A));
    CHECK(apply_involution(s, gen_ij(A)) == -gen_ij(A));

    std::mt19937 rng(23);
    for (int t = 0; t < 100; ++t) {
        Quat p = random_quat(A, rng), q = random_quat(A, rng);
        // an involution: order two, unital, norm-preserving anti-automorphism
        CHECK(apply_involution(s, apply_involution(s, p)) == p);
        CHECK(apply_involution(s, p * q) == apply_involution(s, q) * apply_involution(s, p));
        CHECK(apply_involution(s, p + q) == apply_involution(s, p) + apply_involution(s, q));
        CHECK(nrm(apply_involution(s, p)) == nrm(p));
    }
}

TEST_CASE("involution discriminant is the squarefree class of -nrm(u)") {
    CHECK(disc_involution(OrthogonalInvolution{gen_ij(QuatAlgebra(-1, -1))}) == Int(-1));
    CHECK(disc_involution(OrthogonalInvolution{gen_ij(QuatAlgebra(-1, -2))}) == Int(-2));
    CHECK(disc_involution(OrthogonalInvolution{gen_ij(QuatAlgebra(-2, -6))}) == Int(-3));
    CHECK(disc_involution(OrthogonalInvolution{gen_ij(QuatAlgebra(-2, -22))}) == Int(-11));
}
