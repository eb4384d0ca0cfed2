#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <map>

#include "qorders/json_io.hpp"

using namespace qorders;

namespace {

std::vector<IntMat> bundled_table2() {
    std::ifstream in(std::string(QORDERS_DATA_DIR) + "/table2_forms.json");
    REQUIRE(in.good());
    json j;
    in >> j;
    return table2_from_json(j);
}

}  // namespace

TEST_CASE("integer divisors") {
    CHECK(divisors(Int(1)) == std::vector<Int>{1});
    CHECK(divisors(Int(12)) == std::vector<Int>{1, 2, 3, 4, 6, 12});
    CHECK(divisors(Int(49)) == std::vector<Int>{1, 7, 49});
}

TEST_CASE("trace ideals") {
    Order H = named_order("hurwitz");
    Order L = named_order("lipschitz");
    OrthogonalInvolution s{gen_ij(H.alg())};
    CHECK(trace_ideal(plus_part(H, s)) == Int(2));
    CHECK(trace_ideal(plus_part(L, OrthogonalInvolution{gen_ij(L.alg())})) == Int(2));
    CHECK(trace_ideal(trace_zero_part(H)) == Int(0));
}

TEST_CASE("involution candidates on small orders") {
    Order L = named_order("lipschitz");
    // disc 4 is not squarefree, so no orthogonal involution survives
    CHECK(candidate_involutions(L).empty());

    Order H = named_order("hurwitz");
    auto cands = candidate_involutions(H);
    CHECK(cands.size() == 2);
    for (const auto& c : cands) {
        CHECK(tr(c.xi) == Rat(0));
        const Order& O2 = c.rebased_order;
        OrthogonalInvolution s2{gen_ij(O2.alg())};
        CHECK(is_ddagger_order(O2, s2));
        CHECK(order_disc(O2) == order_disc(H));
        // the rebased generators reproduce the standard relations
        auto [ip, jp] = c.standard_basis;
        CHECK(ip * jp == -(jp * ip));
        CHECK(ip * ip == (-nrm(ip)) * one(H.alg()));
        CHECK(jp * jp == (-nrm(jp)) * one(H.alg()));
    }

    QuatAlgebra A13(-1, -3);
    Rat h(1, 2);
    Order M13 = make_order(A13, {one(A13), gen_i(A13), Quat(A13, 0, h, h, 0), Quat(A13, h, 0, 0, h)});
    CHECK(candidate_involutions(M13).size() == 3);
}

TEST_CASE("suborders with the same plus part") {
    Order H = named_order("hurwitz");
    OrthogonalInvolution s{gen_ij(H.alg())};
    auto subs = suborders_same_plus_part(H, s);
    CHECK(subs.size() == 2);  // the Hurwitz order itself and the Lipschitz order
    Order L = named_order("lipschitz");
    bool has_self = false, has_lipschitz = false;
    for (const auto& S : subs) {
        if (S == H) has_self = true;
        if (S == L) has_lipschitz = true;
        OrthogonalInvolution sS{gen_ij(S.alg())};
        CHECK(is_ddagger_order(S, sS));
        CHECK(ternary_gram(plus_part(S, sS)).gram == ternary_gram(plus_part(H, s)).gram);
    }
    CHECK(has_self);
    CHECK(has_lipschitz);
}

TEST_CASE("classification pipeline partitions") {
    auto table2 = bundled_table2();
    TableConvention conv = calibrate_table_convention(table2);
    ClassificationReport rep = classify_pipeline(table2, conv);
    CHECK(rep.failures.empty());
    REQUIRE(rep.rows.size() == 26);

    int euclidean_maximal = 0, non_euclidean = 0, euclidean_suborder = 0, rejected = 0;
    for (const auto& row : rep.rows) {
        CHECK(row.euclidean == (row.rho < 1));
        if (row.table_tag == "euclidean-maximal") ++euclidean_maximal;
        else if (row.table_tag == "non-euclidean") ++non_euclidean;
        else if (row.table_tag == "euclidean-suborder") ++euclidean_suborder;
        else ++rejected;
        if (row.maximal) {
            // each maximal row matches exactly its seed's form class
            auto hits = match_table_entries(row.order, table2, conv);
            CHECK(hits == std::vector<size_t>{size_t(row.table2_entry - 1)});
        }
    }
    CHECK(euclidean_maximal == 13);
    CHECK(non_euclidean == 6);
    CHECK(euclidean_suborder == 2);
    CHECK(rejected == 5);

    // the maximal rows agree with the bundled classification keyed by
    // (disc(H), disc(involution), rho, euclidean flag)
    std::ifstream in(std::string(QORDERS_DATA_DIR) + "/table3_orders.json");
    REQUIRE(in.good());
    json j;
    in >> j;
    std::map<std::tuple<std::string, std::string, std::string, bool>, int> want, got;
    for (const auto& jo : j["orders"]) {
        Order O = order_from_json(jo);
        OrthogonalInvolution sO{gen_ij(O.alg())};
        Rat rho = rho_order(O, sO).rho;
        want[{to_string(algebra_disc(O.alg())), to_string(disc_involution(sO)),
              to_string(rho), jo["euclidean"].get<bool>()}]++;
    }
    for (const auto& row : rep.rows) {
        if (!row.maximal) continue;
        got[{to_string(row.disc_H), to_string(row.disc_inv), to_string(row.rho),
             row.euclidean}]++;
    }
    CHECK(want == got);
}

TEST_CASE("euclidean suborders match the bundled non-maximal rows") {
    auto table2 = bundled_table2();
    TableConvention conv = calibrate_table_convention(table2);
    ClassificationReport rep = classify_pipeline(table2, conv);

    std::ifstream in(std::string(QORDERS_DATA_DIR) + "/table3_orders.json");
    REQUIRE(in.good());
    json j;
    in >> j;
    REQUIRE(j["non_maximal"].size() == 2);
    for (const auto& jo : j["non_maximal"]) {
        Order O = order_from_json(jo);
        bool found = false;
        for (const auto& row : rep.rows) {
            if (row.table_tag != "euclidean-suborder") continue;
            if (row.order.alg() == O.alg() && row.order == O) found = true;
        }
        CHECK(found);
    }
}
