// Batch front end: one job per invocation, JSON in, JSON out.  All rationals
// are emitted as exact "p/q" strings; errors surface as {"error": {code,
// message}} with a nonzero exit status.
#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include "qorders/json_io.hpp"

using namespace qorders;

namespace {

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string data_dir() {
    if (const char* env = std::getenv("QORDERS_DATA_DIR")) return env;
    return QORDERS_DATA_DIR;
}

json load_data(const std::string& name) {
    std::string path = data_dir() + "/" + name;
    std::ifstream in(path);
    if (!in.good()) throw ValidationError("cannot open data file " + path);
    json j;
    in >> j;
    return j;
}

const json& field(const json& doc, const std::string& key) {
    if (!doc.contains(key)) throw ValidationError("missing required field \"" + key + "\"");
    return doc.at(key);
}

Quat quat_from_any(const QuatAlgebra& A, const json& j) {
    if (j.is_string()) return quat_from_string(A, j.get<std::string>());
    if (j.is_number_integer()) return Rat(j.get<long>()) * one(A);
    return quat_coords_from_json(A, j);
}

json transcript_to_json(const EuclideanTranscript& T) {
    auto list = [](const std::vector<Quat>& v) {
        json out = json::array();
        for (const auto& q : v) out.push_back(quat_to_string(q));
        return out;
    };
    return {{"r", list(T.r_list)},
            {"s", list(T.s_list)},
            {"t", list(T.t_list)},
            {"q", list(T.q_list)},
            {"complete", T.complete}};
}

json run_order_info(const json& in) {
    Order O = order_from_json_or_name(field(in, "order"));
    OrthogonalInvolution s{gen_ij(O.alg())};
    return {{"disc", order_disc(O).get_str()},
            {"disc_H", algebra_disc(O.alg()).get_str()},
            {"disc_inv", disc_involution(s).get_str()},
            {"units", unit_group(O).size()},
            {"ddagger", is_ddagger_order(O, s)},
            {"maximal_ddagger", is_maximal_ddagger_order(O, s)}};
}

json run_gcd(const json& in) {
    Order O = order_from_json_or_name(field(in, "order"));
    OrthogonalInvolution s{gen_ij(O.alg())};
    TwistedContext ctx(O, s);
    Quat a = quat_from_any(O.alg(), field(in, "a"));
    Quat b = quat_from_any(O.alg(), field(in, "b"));
    EuclideanTranscript T = twisted_euclidean(a, b, ctx);
    json out = {{"steps", T.q_list.size()},
                {"complete", T.complete},
                {"transcript", transcript_to_json(T)}};
    if (T.complete) out["gcd"] = quat_to_string(T.gcd());
    return out;
}

json run_rho(const json& in) {
    Order O = order_from_json_or_name(field(in, "order"));
    OrthogonalInvolution s{gen_ij(O.alg())};
    EuclideanCertificate cert = is_norm_euclidean(O, s);
    return {{"rho", to_string(cert.cover.rho)},
            {"deep_hole", quat_coords_to_json(cert.cover.deep_hole)},
            {"euclidean", cert.euclidean}};
}

json run_classify(const json&) {
    std::vector<IntMat> table2 = table2_from_json(load_data("table2_forms.json"));
    TableConvention conv = calibrate_table_convention(table2);
    return report_to_json(classify_pipeline(table2, conv));
}

json run_enumerate(const json& in) {
    Order O = order_from_json_or_name(field(in, "order"));
    std::vector<IntMat> table2 = table2_from_json(load_data("table2_forms.json"));
    TableConvention conv = calibrate_table_convention(table2);
    json rows = json::array();
    for (const auto& c : candidate_involutions(O, table2, conv))
        rows.push_back({{"xi", quat_to_string(c.xi)},
                        {"disc_invol", c.disc_invol.get_str()},
                        {"order", order_to_json(c.rebased_order)}});
    return {{"involutions", rows}};
}

json run_dirichlet(const json& in) {
    Order O = order_from_json_or_name(field(in, "order"));
    OrthogonalInvolution s{gen_ij(O.alg())};
    H4Point bp = default_base_point(O, s);
    if (in.contains("alpha")) bp.alpha = quat_from_any(O.alg(), in.at("alpha"));
    if (in.contains("height")) bp.s = rat_from_json(in.at("height"));
    return domain_to_json(dirichlet_domain(O, s, bp.alpha, bp.s));
}

json run_reduce(const json& in, unsigned seed) {
    Order O = order_from_json_or_name(field(in, "order"));
    const QuatAlgebra& A = O.alg();
    OrthogonalInvolution s{gen_ij(A)};
    H4Point bp = default_base_point(O, s);
    DomainDescription dom = dirichlet_domain(O, s, bp.alpha, bp.s);
    H4Point w0 = [&] {
        if (in.contains("point")) return point_from_json(A, in.at("point"));
        // no explicit point: draw one deterministically from the seed
        std::mt19937 rng(seed);
        auto coeff = [&] { return frac(int(rng() % 25) - 12, 1 + int(rng() % 6)); };
        return H4Point{Quat(A, coeff(), coeff(), coeff(), 0),
                       frac(1 + int(rng() % 12), 2 + int(rng() % 5))};
    }();
    auto [word, w] = reduce_point(O, s, w0, dom);
    return {{"input_point", point_to_json(w0)},
            {"word", word_to_json(word)},
            {"reduced_point", point_to_json(w)}};
}

void emit(const std::string& output_path, const json& doc) {
    std::string text = doc.dump(2) + "\n";
    if (output_path.empty()) {
        std::fputs(text.c_str(), stdout);
        return;
    }
    std::string tmp = output_path + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out.good()) throw ValidationError("cannot open output file " + tmp);
        out << text;
    }
    if (std::rename(tmp.c_str(), output_path.c_str()) != 0)
        throw ValidationError("cannot rename output into place: " + output_path);
}

template <typename E>
bool code_if(const std::exception& e, const char* name, std::string& code) {
    if (dynamic_cast<const E*>(&e) == nullptr) return false;
    code = name;
    return true;
}

std::string error_code(const std::exception& e) {
    std::string c = "internal_error";
    code_if<ParseError>(e, "parse_error", c) || code_if<ValidationError>(e, "validation_error", c) ||
        code_if<json::exception>(e, "parse_error", c) ||
        code_if<NotALattice>(e, "not_a_lattice", c) || code_if<NotARing>(e, "not_a_ring", c) ||
        code_if<MissingOne>(e, "missing_one", c) ||
        code_if<NotClosedUnderInvolution>(e, "not_closed_under_involution", c) ||
        code_if<NotPositiveDefinite>(e, "not_positive_definite", c) ||
        code_if<IndefiniteUnsupported>(e, "indefinite_unsupported", c) ||
        code_if<ClassNumberNotOne>(e, "class_number_not_one", c) ||
        code_if<AlgebraMismatch>(e, "algebra_mismatch", c) ||
        code_if<DivisionByZero>(e, "division_by_zero", c) ||
        code_if<ZeroDivisor>(e, "zero_divisor", c) ||
        code_if<NotCompatiblePair>(e, "not_compatible_pair", c) ||
        code_if<NotCoprime>(e, "not_coprime", c) ||
        code_if<NotEuclideanReducible>(e, "not_euclidean_reducible", c) ||
        code_if<DegenerateBisector>(e, "degenerate_bisector", c) ||
        code_if<BadBasePoint>(e, "bad_base_point", c) ||
        code_if<HeightTooLow>(e, "height_too_low", c) ||
        code_if<NotEuclideanOrder>(e, "not_euclidean_order", c) ||
        code_if<NonTermination>(e, "non_termination", c);
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact quaternion-order toolkit"};
    std::string command, input_path, output_path;
    unsigned seed = 0;
    app.add_option("--command", command,
                   "one of order-info, gcd, rho, classify, enumerate, dirichlet, reduce")
        ->required();
    app.add_option("--input", input_path, "input JSON document");
    app.add_option("--output", output_path, "output path (default: stdout)");
    app.add_option("--seed", seed, "seed for randomized workloads");
    CLI11_PARSE(app, argc, argv);

    json in = json::object();
    try {
        if (!input_path.empty()) {
            std::ifstream f(input_path);
            if (!f.good()) throw ValidationError("cannot open input file " + input_path);
            f >> in;
        }
        json out;
        int status = 0;
        if (command == "order-info")
            out = run_order_info(in);
        else if (command == "gcd")
            out = run_gcd(in);
        else if (command == "rho")
            out = run_rho(in);
        else if (command == "classify") {
            out = run_classify(in);
            if (out.contains("failures")) status = 1;
        } else if (command == "enumerate")
            out = run_enumerate(in);
        else if (command == "dirichlet")
            out = run_dirichlet(in);
        else if (command == "reduce")
            out = run_reduce(in, seed);
        else
            throw ValidationError("unknown command: " + command);
        emit(output_path, out);
        return status;
    } catch (const std::exception& e) {
        json err = {{"error", {{"code", error_code(e)}, {"message", e.what()}}}};
        try {
            emit(output_path, err);
        } catch (...) {
            std::fputs((err.dump(2) + "\n").c_str(), stdout);
        }
        return 1;
    }
}
