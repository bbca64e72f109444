#include "mzkit/serialize.hpp"

#include "mzkit/errors.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace mzkit {

json number_to_json(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
    return v;
}

double number_from_json(const json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "+inf" || s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    }
    throw SchemaError("expected a number, got " + j.dump());
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json document(const std::string& schema, json body) {
    json out = {{"schema", schema}, {"version", kSchemaVersion}};
    for (auto& [k, v] : body.items()) out[k] = std::move(v);
    return out;
}

void expect_document(const json& j, const std::string& schema) {
    if (!j.is_object() || !j.contains("schema") || !j.contains("version"))
        throw SchemaError("not a versioned document (expected schema '" + schema + "')");
    if (j.at("schema") != schema)
        throw SchemaError("expected schema '" + schema + "', found '" + j.at("schema").dump() + "'");
    const int v = j.at("version").get<int>();
    if (v != kSchemaVersion) {
        std::ostringstream os;
        os << "schema '" << schema << "' version " << v << " is not supported (current " << kSchemaVersion
           << "); migrate the document by re-running the producing command";
        throw SchemaError(os.str());
    }
}

namespace {

json vec(const Eigen::VectorXd& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(number_to_json(v(i)));
    return a;
}

Eigen::VectorXd vec_from(const json& j) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = number_from_json(j[i]);
    return v;
}

json opt_vec(const std::optional<Eigen::VectorXd>& v) { return v ? vec(*v) : json(nullptr); }

std::optional<Eigen::VectorXd> opt_vec_from(const json& j) {
    if (j.is_null()) return std::nullopt;
    return vec_from(j);
}

json opt_num(const std::optional<double>& v) { return v ? number_to_json(*v) : json(nullptr); }

template <class F>
auto with_schema_errors(F&& f) {
    try {
        return f();
    } catch (const json::exception& e) {
        throw SchemaError(std::string("malformed document: ") + e.what());
    }
}

} // namespace

json to_json(const FrequencySet& q) {
    return document("frequency_set", {{"dim", q.dim()}, {"generator", q.generator()}, {"freqs", q.freqs()}});
}

FrequencySet frequency_set_from_json(const json& j) {
    expect_document(j, "frequency_set");
    return with_schema_errors([&] {
        return FrequencySet(j.at("dim").get<int>(), j.at("freqs").get<std::vector<Frequency>>(),
                            j.at("generator").get<std::string>());
    });
}

json to_json(const GriddedSpace& g) {
    return document("grid", {{"domain", to_string(g.domain())}, {"shape", g.shape()}, {"weights", vec(g.weights())}});
}

GriddedSpace gridded_space_from_json(const json& j) {
    expect_document(j, "grid");
    return with_schema_errors([&] {
        return GriddedSpace(domain_from_string(j.at("domain").get<std::string>()),
                            j.at("shape").get<std::vector<int>>(), vec_from(j.at("weights")));
    });
}

json to_json(const Subspace& s) {
    json flat = json::array();
    for (Eigen::Index i = 0; i < s.basis().rows(); ++i)
        for (Eigen::Index k = 0; k < s.basis().cols(); ++k) flat.push_back(number_to_json(s.basis()(i, k)));
    return document("subspace", {{"label", s.label()},
                                 {"dim", s.dim()},
                                 {"grid", to_json(s.space())},
                                 {"freqs", s.freqs() ? to_json(*s.freqs()) : json(nullptr)},
                                 {"basis", std::move(flat)}});
}

Subspace subspace_from_json(const json& j) {
    expect_document(j, "subspace");
    return with_schema_errors([&] {
        GriddedSpace g = gridded_space_from_json(j.at("grid"));
        const auto n = j.at("dim").get<Eigen::Index>();
        const json& flat = j.at("basis");
        if (static_cast<Eigen::Index>(flat.size()) != n * g.size()) throw SchemaError("basis size mismatch");
        Eigen::MatrixXd b(g.size(), n);
        for (Eigen::Index i = 0; i < g.size(); ++i)
            for (Eigen::Index k = 0; k < n; ++k) b(i, k) = number_from_json(flat[static_cast<std::size_t>(i * n + k)]);
        std::optional<FrequencySet> q;
        if (!j.at("freqs").is_null()) q = frequency_set_from_json(j.at("freqs"));
        return Subspace(std::move(g), std::move(b), j.at("label").get<std::string>(), std::move(q));
    });
}

json to_json(const DesignMeasure& d) {
    json hist = json::array();
    for (double v : d.logdet_history) hist.push_back(number_to_json(v));
    return document("design", {{"weights", vec(d.weights)},
                               {"g_value", number_to_json(d.g_value)},
                               {"iterations", d.iterations},
                               {"converged", d.converged},
                               {"objective_monotone", d.objective_monotone},
                               {"logdet_history", std::move(hist)}});
}

json to_json(const PointSet& p) {
    json params = json::object();
    for (const auto& [k, v] : p.provenance.params) params[k] = number_to_json(v);
    json w = json::array();
    for (double v : p.weights) w.push_back(number_to_json(v));
    return document("point_set", {{"indices", p.indices},
                                  {"weights", std::move(w)},
                                  {"method", p.provenance.method},
                                  {"seed", p.provenance.seed},
                                  {"params", std::move(params)},
                                  {"weight_bound", opt_num(p.weight_bound)}});
}

PointSet point_set_from_json(const json& j) {
    expect_document(j, "point_set");
    return with_schema_errors([&] {
        PointSet p;
        p.indices = j.at("indices").get<std::vector<Eigen::Index>>();
        for (const auto& w : j.at("weights")) p.weights.push_back(number_from_json(w));
        p.provenance.method = j.at("method").get<std::string>();
        p.provenance.seed = j.at("seed").get<std::uint64_t>();
        for (const auto& [k, v] : j.at("params").items()) p.provenance.params[k] = number_from_json(v);
        if (!j.at("weight_bound").is_null()) p.weight_bound = number_from_json(j.at("weight_bound"));
        return p;
    });
}

std::string point_set_csv(const PointSet& p, const GriddedSpace& space) {
    std::ostringstream os;
    for (int a = 0; a < space.dim(); ++a) os << 'x' << (a + 1) << ',';
    os << "weight\n";
    const Eigen::MatrixXd x = p.coordinates(space);
    for (std::size_t j = 0; j < p.size(); ++j) {
        for (int a = 0; a < space.dim(); ++a) os << format_number(x(static_cast<Eigen::Index>(j), a)) << ',';
        os << format_number(p.weights[j]) << '\n';
    }
    return os.str();
}

json to_json(const MZReport& r) {
    return document("mz_report", {{"q", number_to_json(r.q)},
                                  {"m", r.m},
                                  {"C1", number_to_json(r.c1)},
                                  {"C2", number_to_json(r.c2)},
                                  {"method", r.method},
                                  {"tolerance", number_to_json(r.tolerance)},
                                  {"resolution", r.resolution},
                                  {"weight_sum", number_to_json(r.weight_sum)},
                                  {"null_certificate", opt_vec(r.null_certificate)}});
}

MZReport mz_report_from_json(const json& j) {
    expect_document(j, "mz_report");
    return with_schema_errors([&] {
        MZReport r;
        r.q = number_from_json(j.at("q"));
        r.m = j.at("m").get<std::size_t>();
        r.c1 = number_from_json(j.at("C1"));
        r.c2 = number_from_json(j.at("C2"));
        r.method = j.at("method").get<std::string>();
        r.tolerance = number_from_json(j.at("tolerance"));
        r.resolution = j.at("resolution").get<Eigen::Index>();
        r.weight_sum = number_from_json(j.at("weight_sum"));
        r.null_certificate = opt_vec_from(j.at("null_certificate"));
        return r;
    });
}

json to_json(const UniformReport& r) {
    return document("uniform_report", {{"D", number_to_json(r.d)},
                                       {"attaining_index", r.attaining_index},
                                       {"coeffs", vec(r.coeffs)},
                                       {"m", r.m},
                                       {"resolution", r.resolution},
                                       {"tolerance", number_to_json(r.tolerance)},
                                       {"null_certificate", opt_vec(r.null_certificate)}});
}

UniformReport uniform_report_from_json(const json& j) {
    expect_document(j, "uniform_report");
    return with_schema_errors([&] {
        UniformReport r;
        r.d = number_from_json(j.at("D"));
        r.attaining_index = j.at("attaining_index").get<Eigen::Index>();
        r.coeffs = vec_from(j.at("coeffs"));
        r.m = j.at("m").get<std::size_t>();
        r.resolution = j.at("resolution").get<Eigen::Index>();
        r.tolerance = number_from_json(j.at("tolerance"));
        r.null_certificate = opt_vec_from(j.at("null_certificate"));
        return r;
    });
}

json to_json(const VpRecord& v) {
    json coeffs = json::array();
    for (const auto& c : v.coeffs) coeffs.push_back({number_to_json(c.real()), number_to_json(c.imag())});
    json trace = json::array();
    for (double t : v.trace) trace.push_back(number_to_json(t));
    return document("vp_kernel", {{"interpolated", to_json(v.interpolated)},
                                  {"support", to_json(v.support)},
                                  {"coeffs", std::move(coeffs)},
                                  {"M", v.M},
                                  {"l1_norm", number_to_json(v.l1_norm)},
                                  {"resolution", v.resolution},
                                  {"sigma_bound", number_to_json(v.sigma_bound)},
                                  {"sigma_terms", v.sigma_terms},
                                  {"trace", std::move(trace)},
                                  {"iterations", v.iterations}});
}

json to_json(const KernelReport& r) {
    return document("kernel_report", {{"max_l1", number_to_json(r.max_l1)},
                                      {"max_diag_sqrt", number_to_json(r.max_diag_sqrt)},
                                      {"argmax", r.argmax},
                                      {"vp", r.vp ? to_json(*r.vp) : json(nullptr)},
                                      {"sigma_bound", number_to_json(r.sigma_bound)},
                                      {"sigma_terms", r.sigma_terms},
                                      {"m_bound", r.m_bound},
                                      {"resolution", r.resolution},
                                      {"C1", number_to_json(r.c1_const)}});
}

json to_json(const EntropyEstimate& e) {
    json levels = json::array();
    for (std::size_t n = 0; n < e.values.size(); ++n)
        levels.push_back({{"level", n}, {"N_n", e.centers[n]}, {"e_hat", number_to_json(e.values[n])}});
    return document("entropy_estimate", {{"q", number_to_json(e.q)},
                                         {"norm", to_string(e.norm)},
                                         {"n_max", e.n_max},
                                         {"samples", e.samples},
                                         {"seed", e.seed},
                                         {"resolution", e.resolution},
                                         {"centers_in_set", true},
                                         {"levels", std::move(levels)}});
}

EntropyEstimate entropy_estimate_from_json(const json& j) {
    expect_document(j, "entropy_estimate");
    return with_schema_errors([&] {
        EntropyEstimate e;
        e.q = number_from_json(j.at("q"));
        e.norm = entropy_norm_from_string(j.at("norm").get<std::string>());
        e.n_max = j.at("n_max").get<int>();
        e.samples = j.at("samples").get<std::size_t>();
        e.seed = j.at("seed").get<std::uint64_t>();
        e.resolution = j.at("resolution").get<Eigen::Index>();
        for (const auto& l : j.at("levels")) {
            e.centers.push_back(l.at("N_n").get<std::uint64_t>());
            e.values.push_back(number_from_json(l.at("e_hat")));
        }
        return e;
    });
}

std::string entropy_csv(const EntropyEstimate& e) {
    std::ostringstream os;
    os << "level,N_n,e_hat\n";
    for (std::size_t n = 0; n < e.values.size(); ++n)
        os << n << ',' << e.centers[n] << ',' << format_number(e.values[n]) << '\n';
    return os.str();
}

json to_json(const ExcludedSet& b) {
    return document("excluded_set", {{"cells", b.cells},
                                     {"grid_size", b.grid_size},
                                     {"measure", number_to_json(b.measure)},
                                     {"measure_unnormalized", number_to_json(b.measure_unnormalized)},
                                     {"generator", b.generator},
                                     {"seed", b.seed},
                                     {"worst_case_search", b.worst_case_search}});
}

ExcludedSet excluded_set_from_json(const json& j) {
    expect_document(j, "excluded_set");
    return with_schema_errors([&] {
        ExcludedSet b;
        b.cells = j.at("cells").get<std::vector<Eigen::Index>>();
        b.grid_size = j.at("grid_size").get<Eigen::Index>();
        b.measure = number_from_json(j.at("measure"));
        b.measure_unnormalized = number_from_json(j.at("measure_unnormalized"));
        b.generator = j.at("generator").get<std::string>();
        b.seed = j.at("seed").get<std::uint64_t>();
        b.worst_case_search = j.at("worst_case_search").get<bool>();
        return b;
    });
}

json to_json(const RemezReport& r) {
    return document("remez_report", {{"subspace", r.subspace},
                                     {"measure", number_to_json(r.measure)},
                                     {"measure_unnormalized", number_to_json(r.measure_unnormalized)},
                                     {"R", number_to_json(r.r)},
                                     {"attaining_index", r.attaining_index},
                                     {"coeffs", vec(r.coeffs)},
                                     {"null_certificate", opt_vec(r.null_certificate)},
                                     {"resolution", r.resolution},
                                     {"tolerance", number_to_json(r.tolerance)},
                                     {"univariate_bound", opt_num(r.univariate_bound)},
                                     {"univariate_hypothesis", r.univariate_hypothesis},
                                     {"box_bound", opt_num(r.box_bound)},
                                     {"box_hypothesis", r.box_hypothesis},
                                     {"sqrt_dim_factor", opt_num(r.sqrt_dim_factor)}});
}

json to_json(const RemezImplication& r) {
    return document("remez_implication", {{"verdict", to_string(r.verdict)},
                                          {"R", number_to_json(r.r)},
                                          {"D", number_to_json(r.d)},
                                          {"measure", number_to_json(r.measure)},
                                          {"measure_limit", number_to_json(r.measure_limit)},
                                          {"tolerance", number_to_json(r.tolerance)}});
}

} // namespace mzkit
