#pragma once

// JSON (de)serialization: all rationals travel as exact "p/q" strings,
// orders as {"algebra": {...}, "basis": [[w,x,y,z] x 4]}, quaternions in
// human-facing fields as "1+i"-style expressions.

#include "qorders/h4_geom.hpp"
#include "qorders/order_enum.hpp"

#include <json.hpp>

#include <sstream>

namespace qorders {

using nlohmann::json;

inline json rat_to_json(const Rat& r) { return to_string(r); }

inline Rat rat_from_json(const json& j) {
    if (j.is_number_integer()) return Rat(Int(j.get<long>()));
    if (!j.is_string()) throw ParseError("expected a rational as a \"p/q\" string");
    return parse_rat(j.get<std::string>());
}

// ---------------------------------------------------------------------------
// Quaternions

inline json quat_coords_to_json(const Quat& q) {
    return json::array({to_string(q.w), to_string(q.x), to_string(q.y), to_string(q.z)});
}

inline Quat quat_coords_from_json(const QuatAlgebra& A, const json& j) {
    if (!j.is_array() || j.size() != 4) throw ParseError("expected 4 coordinates");
    return {A, rat_from_json(j[0]), rat_from_json(j[1]), rat_from_json(j[2]), rat_from_json(j[3])};
}

// "1+i-1/2j+3ij" style rendering; 'k' is accepted as a synonym of "ij" on input.
inline std::string quat_to_string(const Quat& q) {
    static const char* units[4] = {"", "i", "j", "ij"};
    std::string out;
    for (int k = 0; k < 4; ++k) {
        Rat c = q.coord(k);
        if (c == 0) continue;
        std::string mag = to_string(c < 0 ? -c : c);
        if (k > 0 && mag == "1") mag.clear();
        out += (c < 0 ? "-" : out.empty() ? "" : "+") + mag + units[k];
    }
    return out.empty() ? "0" : out;
}

inline Quat quat_from_string(const QuatAlgebra& A, const std::string& text) {
    Quat out(A);
    std::string s;
    for (char c : text)
        if (!isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw ParseError("empty quaternion literal");
    size_t pos = 0;
    while (pos < s.size()) {
        int sign = 1;
        if (s[pos] == '+' || s[pos] == '-') {
            sign = s[pos] == '-' ? -1 : 1;
            ++pos;
        }
        size_t start = pos;
        while (pos < s.size() && (isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '/')) ++pos;
        Rat coeff = start == pos ? Rat(1) : parse_rat(s.substr(start, pos - start));
        int unit = 0;
        if (pos < s.size() && (s[pos] == 'i' || s[pos] == 'j' || s[pos] == 'k')) {
            if (s[pos] == 'k') {
                unit = 3;
                ++pos;
            } else if (s[pos] == 'j') {
                unit = 2;
                ++pos;
            } else {
                ++pos;
                if (pos < s.size() && s[pos] == 'j') {
                    unit = 3;
                    ++pos;
                } else {
                    unit = 1;
                }
            }
        } else if (start == pos) {
            throw ParseError("malformed quaternion literal: " + text);
        }
        Quat term(A);
        switch (unit) {
            case 0: term = coeff * one(A); break;
            case 1: term = coeff * gen_i(A); break;
            case 2: term = coeff * gen_j(A); break;
            default: term = coeff * gen_ij(A); break;
        }
        out = out + Rat(sign) * term;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Algebras and orders

inline json algebra_to_json(const QuatAlgebra& A) {
    return {{"a", to_string(A.a)}, {"b", to_string(A.b)}};
}

inline QuatAlgebra algebra_from_json(const json& j) {
    if (!j.contains("a") || !j.contains("b")) throw ParseError("algebra needs fields a and b");
    return {rat_from_json(j["a"]), rat_from_json(j["b"])};
}

inline json order_to_json(const Order& O) {
    json basis = json::array();
    for (const auto& b : O.basis()) basis.push_back(quat_coords_to_json(b));
    return {{"algebra", algebra_to_json(O.alg())}, {"basis", basis}};
}

inline Order order_from_json(const json& j) {
    if (!j.contains("algebra") || !j.contains("basis")) throw ParseError("order needs algebra and basis");
    QuatAlgebra A = algebra_from_json(j["algebra"]);
    std::vector<Quat> gens;
    for (const auto& row : j["basis"]) gens.push_back(quat_coords_from_json(A, row));
    return make_order(A, gens);
}

// Named shortcuts accepted wherever an order document is expected.
inline Order named_order(const std::string& name) {
    QuatAlgebra A(-1, -1);
    if (name == "hurwitz")
        return make_order(A,
                          {one(A), gen_i(A), gen_j(A), Quat(A, Rat(1, 2), Rat(1, 2), Rat(1, 2), Rat(1, 2))});
    if (name == "lipschitz") return make_order(A, {one(A), gen_i(A), gen_j(A), gen_ij(A)});
    throw ParseError("unknown named order: " + name);
}

inline Order order_from_json_or_name(const json& j) {
    if (j.is_string()) return named_order(j.get<std::string>());
    return order_from_json(j);
}

// ---------------------------------------------------------------------------
// Forms and tables

inline json form_to_json(const TernaryForm& f) {
    json rows = json::array();
    for (const auto& r : f.gram) {
        json row = json::array();
        for (const auto& v : r) row.push_back(to_string(v));
        rows.push_back(row);
    }
    return rows;
}

inline std::vector<IntMat> table2_from_json(const json& j) {
    std::vector<IntMat> out;
    for (const auto& entry : j.at("forms")) {
        IntMat m(3, IntVec(3));
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) m[r][c] = Int(entry[r][c].get<long>());
        out.push_back(m);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Matrices, words, domains

inline json sl_to_json(const SLSigmaMatrix& m) {
    return json::array(
        {quat_coords_to_json(m.a), quat_coords_to_json(m.b), quat_coords_to_json(m.c), quat_coords_to_json(m.d)});
}

inline SLSigmaMatrix sl_from_json(const QuatAlgebra& A, const json& j) {
    if (!j.is_array() || j.size() != 4) throw ParseError("matrix needs 4 entries");
    return {quat_coords_from_json(A, j[0]), quat_coords_from_json(A, j[1]), quat_coords_from_json(A, j[2]),
            quat_coords_from_json(A, j[3])};
}

inline json word_to_json(const GeneratorWord& w) {
    json out = json::array();
    for (const auto& g : w) {
        if (auto* t = std::get_if<Translation>(&g))
            out.push_back({{"type", "translation"}, {"tau", quat_to_string(t->tau)}});
        else if (auto* u = std::get_if<UnitGen>(&g))
            out.push_back({{"type", "unit"}, {"u", quat_to_string(u->u)}});
        else
            out.push_back({{"type", "inversion"}});
    }
    return out;
}

inline json point_to_json(const H4Point& p) {
    return {{"alpha", quat_coords_to_json(p.alpha)}, {"s", to_string(p.s)}};
}

inline H4Point point_from_json(const QuatAlgebra& A, const json& j) {
    return {quat_coords_from_json(A, j.at("alpha")), rat_from_json(j.at("s"))};
}

inline json halfspace_to_json(const HalfSpaceH4& h) {
    if (auto* sp = std::get_if<SphereHS>(&h.kind))
        return {{"kind", "sphere"},
                {"center", quat_coords_to_json(sp->center)},
                {"radius_sq", to_string(sp->radius_sq)},
                {"side", sp->side == Side::Outside ? "outside" : "inside"}};
    const PlaneHS& pl = std::get<PlaneHS>(h.kind);
    return {{"kind", "plane"},
            {"normal", quat_coords_to_json(pl.normal)},
            {"offset", to_string(pl.offset)},
            {"side", pl.side == Side::Inside ? "inside" : "outside"}};
}

inline json domain_to_json(const DomainDescription& d) {
    json hs = json::array(), gp = json::array();
    for (const auto& h : d.halfspaces) hs.push_back(halfspace_to_json(h));
    for (const auto& m : d.gamma_prime) gp.push_back(sl_to_json(m));
    return {{"base_point", point_to_json(d.base_point)},
            {"halfspaces", hs},
            {"gamma_prime", gp},
            {"cusps", d.cusp_count}};
}

inline json report_to_json(const ClassificationReport& rep) {
    json rows = json::array();
    for (const auto& r : rep.rows)
        rows.push_back({{"order", order_to_json(r.order)},
                        {"table2_entry", r.table2_entry},
                        {"disc_H", r.disc_H.get_str()},
                        {"disc_inv", r.disc_inv.get_str()},
                        {"rho", to_string(r.rho)},
                        {"euclidean", r.euclidean},
                        {"maximal", r.maximal},
                        {"trace_ideal", r.plus_trace_ideal.get_str()},
                        {"table_tag", r.table_tag}});
    json out = {{"rows", rows}};
    if (!rep.failures.empty()) out["failures"] = rep.failures;
    return out;
}

}  // namespace qorders
