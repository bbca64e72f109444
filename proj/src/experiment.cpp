#include "mzkit/experiment.hpp"

#include "mzkit/design.hpp"
#include "mzkit/rng.hpp"
#include "mzkit/sample_size.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace mzkit {

namespace fs = std::filesystem;

namespace {

// Object reader that rejects keys it was never asked about.
class Reader {
public:
    Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ValidationError(path_ + " must be an object");
    }

    bool has(const std::string& key) {
        seen_.insert(key);
        return j_.contains(key);
    }

    template <class T>
    T req(const std::string& key) {
        if (!has(key)) throw ValidationError(path_ + " is missing required key '" + key + "'");
        return as<T>(key);
    }

    template <class T>
    T get(const std::string& key, T fallback) {
        return has(key) ? as<T>(key) : fallback;
    }

    template <class T>
    std::optional<T> opt(const std::string& key) {
        if (!has(key)) return std::nullopt;
        return as<T>(key);
    }

    const json& raw(const std::string& key) {
        seen_.insert(key);
        return j_.at(key);
    }

    std::string path(const std::string& key) const { return path_ + "." + key; }

    void finish() const {
        for (const auto& [k, v] : j_.items())
            if (!seen_.count(k)) throw ValidationError("unknown key '" + k + "' in " + path_);
    }

private:
    template <class T>
    T as(const std::string& key) {
        try {
            return j_.at(key).get<T>();
        } catch (const json::exception&) {
            throw ValidationError(path_ + "." + key + " has the wrong type: " + j_.at(key).dump());
        }
    }

    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

const std::set<std::string> kConstantNames = {"c", "C", "C1", "c1", "cd", "Cd"};

// seed slots for steps that did not set one explicitly
enum : std::uint64_t { kPointSlot = 100, kCertifySlot = 200, kVpSlot = 300, kEntropySlot = 400, kRemezSlot = 500 };

std::uint64_t resolve_seed(const ExperimentConfig& cfg, const std::optional<std::uint64_t>& own, std::uint64_t slot) {
    if (own) return *own;
    if (!cfg.seed) throw ValidationError("randomized step without a seed");
    return derive_seed(*cfg.seed, slot);
}

void require_seed(const ExperimentConfig& cfg, const std::optional<std::uint64_t>& own, const std::string& where) {
    if (!own && !cfg.seed)
        throw ValidationError(where + " is randomized and needs a seed (set it there or at the top level)");
}

bool randomized(const PointSpec& p) { return p.method == "iid" || p.method == "christoffel"; }
bool randomized(const CertifySpec& c) { return c.kind == "lq" || c.kind == "ratio"; }
bool randomized(const RemezSpec& r) { return r.kind == "random"; }

SubspaceSpec parse_subspace(Reader r) {
    SubspaceSpec s;
    s.kind = r.req<std::string>("kind");
    if (s.kind == "trig") {
        s.generator = r.req<std::string>("generator");
        if (s.generator == "box") {
            s.n = r.req<std::vector<long>>("n");
            s.dim = static_cast<int>(s.n.size());
        } else if (s.generator == "range") {
            s.lo = r.req<long>("lo");
            s.hi = r.req<long>("hi");
        } else if (s.generator == "hyperbolic_cross") {
            s.dim = r.req<int>("dim");
            s.size = r.req<long>("N");
        } else if (s.generator == "lacunary") {
            s.size = r.req<long>("N");
            s.ratio = r.get<double>("ratio", 2.0);
        } else if (s.generator == "list") {
            s.dim = r.req<int>("dim");
            s.freqs = r.req<std::vector<Frequency>>("freqs");
        } else {
            throw ValidationError("unknown trig generator '" + s.generator + "'");
        }
    } else if (s.kind == "poly") {
        s.generator = "legendre";
        s.dim = r.get<int>("dim", 1);
        s.degree = r.req<int>("degree");
        if (s.degree < 0) throw ValidationError("subspace.degree must be nonnegative");
    } else {
        throw ValidationError("unknown subspace kind '" + s.kind + "'");
    }
    if (s.dim < 1) throw ValidationError("subspace dimension must be >= 1");
    r.finish();
    return s;
}

FrequencySet make_frequencies(const SubspaceSpec& s) {
    if (s.generator == "box") return FrequencySet::box(s.n);
    if (s.generator == "range") return FrequencySet::range(s.lo, s.hi);
    if (s.generator == "hyperbolic_cross") return FrequencySet::hyperbolic_cross(s.dim, s.size);
    if (s.generator == "lacunary") return FrequencySet::lacunary(static_cast<int>(s.size), s.ratio);
    return FrequencySet(s.dim, s.freqs, "list");
}

int subspace_axes(const SubspaceSpec& s) {
    if (s.kind == "trig" && (s.generator == "range" || s.generator == "lacunary")) return 1;
    return s.dim;
}

} // namespace

ExperimentConfig parse_config(const json& j) {
    ExperimentConfig cfg;
    cfg.source = j;
    Reader top(j, "config");
    cfg.seed = top.opt<std::uint64_t>("seed");
    if (!top.has("subspace")) throw ValidationError("config is missing required key 'subspace'");
    cfg.subspace = parse_subspace(Reader(top.raw("subspace"), "subspace"));

    if (top.has("grid")) {
        Reader g(top.raw("grid"), "grid");
        if (!g.has("points")) throw ValidationError("grid is missing required key 'points'");
        const json& pts = g.raw("points");
        if (pts.is_number_integer()) {
            cfg.grid.shape = {pts.get<int>()};
            cfg.grid.repeated = true;
        } else if (pts.is_array()) {
            cfg.grid.shape = pts.get<std::vector<int>>();
        } else {
            throw ValidationError("grid.points must be an integer or an array of integers");
        }
        g.finish();
    } else {
        cfg.grid.shape = {256};
        cfg.grid.repeated = true;
    }
    for (int n : cfg.grid.shape)
        if (n < 2) throw ValidationError("grid needs at least 2 points per axis");

    if (top.has("design")) {
        Reader d(top.raw("design"), "design");
        DesignSpec ds;
        ds.tol = d.get<double>("tol", 0.01);
        ds.max_iters = d.get<int>("max_iters", 200000);
        d.finish();
        if (!(ds.tol > 0.0)) throw ValidationError("design.tol must be positive");
        cfg.design = ds;
    }

    if (top.has("points")) {
        const json& arr = top.raw("points");
        if (!arr.is_array()) throw ValidationError("points must be an array");
        std::set<std::string> names;
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string path = "points[" + std::to_string(i) + "]";
            Reader r(arr[i], path);
            PointSpec p;
            p.method = r.req<std::string>("method");
            p.name = r.get<std::string>("name", p.method + std::to_string(i));
            if (p.method == "equispaced") {
                p.m = r.req<int>("m");
                p.offset = r.get<int>("offset", 0);
            } else if (p.method == "iid") {
                p.m = r.req<int>("m");
            } else if (p.method == "christoffel") {
                p.m = r.req<int>("m");
                p.weighted = r.get<bool>("weighted", true);
            } else if (p.method == "bss") {
                p.b = r.req<double>("b");
            } else if (p.method != "full_grid") {
                throw ValidationError("unknown point method '" + p.method + "' in " + path);
            }
            p.seed = r.opt<std::uint64_t>("seed");
            r.finish();
            if (!names.insert(p.name).second) throw ValidationError("duplicate point set name '" + p.name + "'");
            if (p.method != "bss" && p.method != "full_grid" && p.m < 1)
                throw ValidationError(path + ".m must be >= 1");
            cfg.points.push_back(std::move(p));
        }
    }

    if (top.has("certify")) {
        const json& arr = top.raw("certify");
        if (!arr.is_array()) throw ValidationError("certify must be an array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string path = "certify[" + std::to_string(i) + "]";
            Reader r(arr[i], path);
            CertifySpec c;
            c.kind = r.req<std::string>("kind");
            if (c.kind == "lq") {
                c.q = r.req<double>("q");
                c.trials = r.get<int>("trials", 16);
            } else if (c.kind == "ratio") {
                c.trials = r.get<int>("trials", 16);
            } else if (c.kind != "l2" && c.kind != "uniform") {
                throw ValidationError("unknown certify kind '" + c.kind + "' in " + path);
            }
            c.seed = r.opt<std::uint64_t>("seed");
            r.finish();
            cfg.certify.push_back(c);
        }
    }

    if (top.has("kernels")) {
        Reader r(top.raw("kernels"), "kernels");
        KernelSpec k;
        k.vp_classical = r.opt<int>("vp_classical");
        k.vp_grid = r.get<int>("vp_grid", 4096);
        if (r.has("vp_search")) {
            Reader v(r.raw("vp_search"), "kernels.vp_search");
            VpSearchSpec vs;
            vs.support_n = v.req<std::vector<long>>("support_n");
            vs.iters = v.get<int>("iters", 200);
            vs.restarts = v.get<int>("restarts", 1);
            vs.grid_points = v.get<int>("grid_points", 256);
            vs.seed = v.opt<std::uint64_t>("seed");
            v.finish();
            k.vp_search = vs;
        }
        r.finish();
        cfg.kernels = k;
    }

    if (top.has("entropy")) {
        Reader r(top.raw("entropy"), "entropy");
        EntropySpec e;
        e.q = r.get<double>("q", 2.0);
        e.n_max = r.get<int>("n_max", 3);
        e.samples = r.get<std::size_t>("samples", 1000);
        e.norm = r.get<std::string>("norm", "lq");
        e.seed = r.opt<std::uint64_t>("seed");
        e.ent_b = r.opt<double>("ent_b");
        r.finish();
        entropy_norm_from_string(e.norm);
        cfg.entropy = e;
    }

    if (top.has("remez")) {
        const json& arr = top.raw("remez");
        if (!arr.is_array()) throw ValidationError("remez must be an array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string path = "remez[" + std::to_string(i) + "]";
            Reader r(arr[i], path);
            RemezSpec b;
            b.kind = r.req<std::string>("kind");
            if (b.kind == "interval") {
                b.start = r.get<double>("start", 0.0);
                b.length = r.req<double>("length");
            } else if (b.kind == "random") {
                b.count = r.req<std::size_t>("count");
            } else if (b.kind == "greedy") {
                b.count = r.req<std::size_t>("count");
                b.candidates = r.get<std::size_t>("candidates", 8);
            } else if (b.kind == "cells") {
                b.cells = r.req<std::vector<Eigen::Index>>("cells");
            } else if (b.kind != "empty") {
                throw ValidationError("unknown excluded-set kind '" + b.kind + "' in " + path);
            }
            b.seed = r.opt<std::uint64_t>("seed");
            b.implication = r.get<bool>("implication", false);
            r.finish();
            cfg.remez.push_back(std::move(b));
        }
    }

    if (top.has("sample_size")) {
        const json& arr = top.raw("sample_size");
        if (!arr.is_array()) throw ValidationError("sample_size must be an array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string path = "sample_size[" + std::to_string(i) + "]";
            Reader r(arr[i], path);
            SampleSizeSpec s;
            s.rule = r.req<std::string>("rule");
            try {
                sample_rule_from_string(s.rule);
            } catch (const ArgumentError& e) {
                throw ValidationError(e.what());
            }
            static const std::set<std::string> params = {"N", "q", "H", "delta", "eps", "B", "k", "M", "b"};
            for (const auto& [k, v] : arr[i].items()) {
                if (k == "rule") continue;
                if (!params.count(k)) throw ValidationError("unknown key '" + k + "' in " + path);
                s.params[k] = r.req<double>(k);
            }
            r.finish();
            cfg.sample_size.push_back(std::move(s));
        }
    }

    if (top.has("sweep")) {
        Reader r(top.raw("sweep"), "sweep");
        SweepSpec s;
        s.axis = r.req<std::string>("axis");
        s.values = r.req<std::vector<double>>("values");
        r.finish();
        static const std::set<std::string> axes = {"m", "b", "q", "N", "B"};
        if (!axes.count(s.axis)) throw ValidationError("unknown sweep axis '" + s.axis + "'");
        if (s.values.empty()) throw ValidationError("sweep.values must not be empty");
        cfg.sweep = std::move(s);
    }

    if (top.has("constants")) {
        const json& c = top.raw("constants");
        if (!c.is_object()) throw ValidationError("constants must be an object");
        for (const auto& [k, v] : c.items()) {
            if (!kConstantNames.count(k)) throw ValidationError("unknown constant '" + k + "'");
            if (!v.is_number()) throw ValidationError("constant '" + k + "' must be a number");
            cfg.constants[k] = v.get<double>();
        }
    }

    if (top.has("output")) {
        Reader r(top.raw("output"), "output");
        cfg.output_dir = r.opt<std::string>("dir");
        r.finish();
    }
    top.finish();

    if (cfg.subspace.kind == "trig" && cfg.grid.shape.size() != 1 &&
        static_cast<int>(cfg.grid.shape.size()) != subspace_axes(cfg.subspace))
        throw ValidationError("grid.points has the wrong number of axes");

    for (std::size_t i = 0; i < cfg.points.size(); ++i)
        if (randomized(cfg.points[i])) require_seed(cfg, cfg.points[i].seed, "points[" + std::to_string(i) + "]");
    for (std::size_t i = 0; i < cfg.certify.size(); ++i)
        if (randomized(cfg.certify[i])) require_seed(cfg, cfg.certify[i].seed, "certify[" + std::to_string(i) + "]");
    if (cfg.kernels && cfg.kernels->vp_search) require_seed(cfg, cfg.kernels->vp_search->seed, "kernels.vp_search");
    if (cfg.entropy) require_seed(cfg, cfg.entropy->seed, "entropy");
    for (std::size_t i = 0; i < cfg.remez.size(); ++i)
        if (randomized(cfg.remez[i])) require_seed(cfg, cfg.remez[i].seed, "remez[" + std::to_string(i) + "]");
    return cfg;
}

ExperimentConfig load_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config '" + path.string() + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError("config '" + path.string() + "' is not valid JSON: " + e.what());
    }
    return parse_config(j);
}

std::pair<std::string, double> parse_override(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0) throw ValidationError("override must look like NAME=VALUE: '" + text + "'");
    const std::string name = text.substr(0, eq);
    if (!kConstantNames.count(name)) throw ValidationError("unknown constant '" + name + "'");
    const std::string value = text.substr(eq + 1);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != value.size()) throw ValidationError("override value is not a number: '" + text + "'");
    return {name, v};
}

ExperimentConfig apply_overrides(const ExperimentConfig& cfg, const ConfigOverrides& o) {
    json j = cfg.source;
    if (o.seed) j["seed"] = *o.seed;
    if (o.grid) j["grid"] = {{"points", *o.grid}};
    for (const auto& [k, v] : o.constants) j["constants"][k] = v;
    return parse_config(j);
}

std::string sha256_hex(const std::string& data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw NumericalError("SHA-256 digest failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 15]);
    }
    return out;
}

int exit_code_for(const std::exception& e) {
    if (const auto* r = dynamic_cast<const RunError*>(&e)) return r->exit_code();
    if (dynamic_cast<const NumericalError*>(&e) || dynamic_cast<const DegeneracyError*>(&e) ||
        dynamic_cast<const ResolutionError*>(&e))
        return 3;
    return 2;
}

namespace {

double constant(const ExperimentConfig& cfg, const std::string& name) {
    auto it = cfg.constants.find(name);
    return it == cfg.constants.end() ? 1.0 : it->second;
}

std::string constants_string(const ExperimentConfig& cfg) {
    std::string out;
    for (const auto& [k, v] : cfg.constants) {
        if (!out.empty()) out += ';';
        out += k + "=" + format_number(v);
    }
    return out;
}

ExperimentConfig at_sweep_value(const ExperimentConfig& cfg, const std::string& axis, double v) {
    ExperimentConfig c = cfg;
    const long iv = std::lround(v);
    if (axis == "m") {
        for (auto& p : c.points)
            if (p.method == "equispaced" || p.method == "iid" || p.method == "christoffel") p.m = static_cast<int>(iv);
    } else if (axis == "b") {
        for (auto& p : c.points)
            if (p.method == "bss") p.b = v;
    } else if (axis == "q") {
        for (auto& k : c.certify)
            if (k.kind == "lq") k.q = v;
        if (c.entropy) c.entropy->q = v;
    } else if (axis == "N") {
        auto& s = c.subspace;
        if (s.kind == "poly") s.degree = static_cast<int>(iv);
        else if (s.generator == "box") std::fill(s.n.begin(), s.n.end(), iv);
        else if (s.generator == "range") { s.lo = -iv; s.hi = iv; }
        else if (s.generator == "hyperbolic_cross" || s.generator == "lacunary") s.size = iv;
        else throw ValidationError("sweep axis N does not apply to frequency lists");
    } else if (axis == "B") {
        // random and greedy cell counts follow from the grid size in the pipeline
        for (auto& b : c.remez)
            if (b.kind == "interval") b.length = v * 2.0 * M_PI;
    }
    return c;
}

class Pipeline {
public:
    Pipeline(const ExperimentConfig& cfg, Stage stage, StageResult& out, json context, std::string suffix,
             std::optional<double> sweep_measure)
        : cfg_(cfg), stage_(stage), out_(out), context_(std::move(context)), suffix_(std::move(suffix)),
          sweep_measure_(sweep_measure) {}

    void execute() {
        step("subspace", [&] { build_subspace(); });
        if (stage_ == Stage::Subspace) return;
        if (cfg_.design) step("design", [&] { build_design(); });
        if (stage_ == Stage::Design) return;
        if (needs_points()) step("points", [&] { build_points(); });
        if (stage_ == Stage::Points) return;
        if (wants(Stage::Certify) || implication_requested()) step("certify", [&] { certify(); });
        if (wants(Stage::Kernel) && cfg_.kernels) step("kernels", [&] { kernels(); });
        if (wants(Stage::Entropy) && cfg_.entropy) step("entropy", [&] { entropy(); });
        if (wants(Stage::Remez)) step("remez", [&] { remez(); });
        if (wants(Stage::SampleSize)) step("sample_size", [&] { sample_size(); });
    }

private:
    bool wants(Stage s) const { return stage_ == Stage::All || stage_ == s; }
    bool keep(Stage s) const { return stage_ == Stage::All || stage_ == s; }
    bool implication_requested() const {
        return wants(Stage::Remez) &&
               std::any_of(cfg_.remez.begin(), cfg_.remez.end(), [](const RemezSpec& r) { return r.implication; });
    }
    bool needs_points() const {
        return stage_ == Stage::All || stage_ == Stage::Points || stage_ == Stage::Certify || implication_requested();
    }

    template <class F>
    void step(const std::string& name, F&& f) {
        current_ = name;
        try {
            f();
        } catch (const RunError&) {
            throw;
        } catch (const std::exception& e) {
            throw RunError("step '" + name + "' failed: " + e.what(), name, {}, exit_code_for(e));
        }
    }

    void emit(json doc, Stage s, json extra = json::object()) {
        if (!keep(s)) return;
        json ctx = context_;
        ctx["step"] = current_;
        for (auto& [k, v] : extra.items()) ctx[k] = v;
        doc["context"] = std::move(ctx);
        out_.docs.push_back(std::move(doc));
    }

    void record(json params) {
        params["step"] = current_;
        for (auto& [k, v] : context_.items()) params[k] = v;
        out_.steps.push_back(std::move(params));
    }

    void build_subspace() {
        const SubspaceSpec& ss = cfg_.subspace;
        const int axes = subspace_axes(ss);
        std::vector<int> shape = cfg_.grid.shape;
        if (cfg_.grid.repeated) shape.assign(static_cast<std::size_t>(axes), cfg_.grid.shape[0]);
        if (static_cast<int>(shape.size()) != axes) throw ValidationError("grid.points has the wrong number of axes");
        if (ss.kind == "trig") {
            freqs_ = make_frequencies(ss);
            space_ = GriddedSpace::torus(shape);
            subspace_ = build_trig_subspace(*freqs_, *space_);
            raw_ = trig_raw_basis(*freqs_, *space_);
        } else {
            space_ = GriddedSpace::box(shape);
            subspace_ = build_poly_subspace(ss.degree, *space_);
            raw_ = legendre_raw_basis(ss.degree, *space_);
        }
        context_["subspace"] = subspace_->label();
        record({{"label", subspace_->label()}, {"dim", subspace_->dim()}, {"grid", shape}});
        emit(summary(), Stage::Subspace);
    }

    json summary() const {
        const ChristoffelProfile prof = christoffel(*subspace_);
        return document("subspace_summary", {{"label", subspace_->label()},
                                             {"dim", subspace_->dim()},
                                             {"domain", to_string(space_->domain())},
                                             {"grid", space_->shape()},
                                             {"freqs", freqs_ ? to_json(*freqs_) : json(nullptr)},
                                             {"christoffel_max", number_to_json(prof.h2inf)},
                                             {"christoffel_argmax", prof.argmax},
                                             {"orthonormality_error", number_to_json(subspace_->orthonormality_error())}});
    }

    void build_design() {
        const DesignMeasure d = kw_optimal_design(raw_, *space_, cfg_.design->tol, cfg_.design->max_iters);
        subspace_ = design_subspace(raw_, *space_, d, {}, subspace_->label() + "+design", freqs_);
        context_["subspace"] = subspace_->label();
        record({{"tol", cfg_.design->tol}, {"max_iters", cfg_.design->max_iters}});
        json doc = to_json(d);
        doc.erase("weights");
        doc.erase("logdet_history");
        emit(std::move(doc), Stage::Design);
        if (keep(Stage::Design)) {
            std::ostringstream os;
            os << "index,weight\n";
            for (Eigen::Index i = 0; i < d.weights.size(); ++i) os << i << ',' << format_number(d.weights(i)) << '\n';
            out_.files["design" + suffix_ + ".csv"] = os.str();
        }
    }

    void build_points() {
        const Subspace& s = *subspace_;
        for (std::size_t i = 0; i < cfg_.points.size(); ++i) {
            const PointSpec& p = cfg_.points[i];
            PointSet ps;
            std::uint64_t seed = 0;
            if (p.method == "equispaced") ps = equispaced_points(s.space(), p.m, p.offset);
            else if (p.method == "iid") ps = sample_iid(s.space(), p.m, seed = resolve_seed(cfg_, p.seed, kPointSlot + i));
            else if (p.method == "christoffel")
                ps = sample_christoffel(s, p.m, seed = resolve_seed(cfg_, p.seed, kPointSlot + i), p.weighted);
            else if (p.method == "bss") ps = bss_select(s, p.b);
            else ps = full_grid_points(s.space());
            record({{"points", p.name}, {"method", p.method}, {"m", ps.size()}, {"seed", seed}});
            json doc = to_json(ps);
            emit(std::move(doc), Stage::Points, {{"points", p.name}, {"seed", seed}});
            if (keep(Stage::Points)) out_.files["points_" + p.name + suffix_ + ".csv"] = point_set_csv(ps, s.space());
            points_.push_back({p.name, std::move(ps), seed});
        }
    }

    void certify() {
        const Subspace& s = *subspace_;
        for (const auto& np : points_) {
            for (std::size_t i = 0; i < cfg_.certify.size(); ++i) {
                const CertifySpec& c = cfg_.certify[i];
                json extra = {{"points", np.name}, {"seed", np.seed}};
                if (c.kind == "l2") {
                    emit(to_json(certify_l2(s, np.set)), Stage::Certify, extra);
                } else if (c.kind == "uniform") {
                    UniformReport u = certify_uniform(s, np.set);
                    uniform_[np.name] = u.d;
                    emit(to_json(u), Stage::Certify, extra);
                } else if (c.kind == "lq") {
                    const std::uint64_t seed = resolve_seed(cfg_, c.seed, kCertifySlot + i);
                    extra["certify_seed"] = seed;
                    emit(to_json(certify_lq(s, np.set, c.q, c.trials, seed)), Stage::Certify, extra);
                } else {
                    const std::uint64_t seed = resolve_seed(cfg_, c.seed, kCertifySlot + i);
                    RatioAscentOptions opts;
                    opts.restarts = c.trials;
                    const double d = estimate_uniform_ratio(s, np.set, seed, opts);
                    extra["certify_seed"] = seed;
                    emit(document("uniform_estimate", {{"D_lower", number_to_json(d)}, {"m", np.set.size()}}),
                         Stage::Certify, extra);
                }
            }
        }
        record({{"certify", cfg_.certify.size()}, {"point_sets", points_.size()}});
    }

    void kernels() {
        const KernelSpec& k = *cfg_.kernels;
        std::optional<VpRecord> best;
        if (k.vp_classical) {
            VpRecord v = vp_classical(*k.vp_classical, k.vp_grid);
            if (freqs_ && v.interpolated == *freqs_) best = v;
            emit(to_json(v), Stage::Kernel);
        }
        if (k.vp_search) {
            if (!freqs_) throw ValidationError("kernels.vp_search needs a trig subspace");
            const std::uint64_t seed = resolve_seed(cfg_, k.vp_search->seed, kVpSlot);
            VpSearchOptions opts;
            opts.restarts = k.vp_search->restarts;
            opts.grid_points = k.vp_search->grid_points;
            VpRecord v = vp_search(*freqs_, FrequencySet::box(k.vp_search->support_n), k.vp_search->iters, seed, opts);
            if (!best || v.sigma_bound < best->sigma_bound) best = v;
            emit(to_json(v), Stage::Kernel, {{"seed", seed}});
        }
        emit(to_json(kernel_report(*subspace_, best, constant(cfg_, "C1"))), Stage::Kernel);
        record({{"vp_classical", k.vp_classical ? json(*k.vp_classical) : json(nullptr)},
                {"vp_search", k.vp_search.has_value()}});
    }

    void entropy() {
        const EntropySpec& e = *cfg_.entropy;
        const std::uint64_t seed = resolve_seed(cfg_, e.seed, kEntropySlot);
        const EntropyEstimate est =
            estimate_entropy(*subspace_, e.q, e.n_max, e.samples, seed, entropy_norm_from_string(e.norm));
        emit(to_json(est), Stage::Entropy, {{"seed", seed}});
        out_.files["entropy" + suffix_ + ".csv"] = entropy_csv(est);
        const double n = static_cast<double>(subspace_->dim());
        const EntropyHypothesisCheck probe = check_entropy_hypothesis(est, 1.0, n, e.q);
        const double ent_b = e.ent_b.value_or(probe.min_ent_b);
        const EntropyHypothesisCheck chk = check_entropy_hypothesis(est, ent_b, n, e.q);
        SampleSizeQuery query;
        query.N = n;
        query.q = e.q;
        query.B = ent_b;
        query.C = constant(cfg_, "C");
        json m = nullptr;
        try {
            m = required_m(query, SampleRule::LqEntropy);
        } catch (const ArgumentError&) {
            // overflow: the formula exceeds 64 bits
        }
        emit(document("entropy_check", {{"pass", chk.pass},
                                        {"ent_b", number_to_json(chk.ent_b)},
                                        {"min_ent_b", number_to_json(chk.min_ent_b)},
                                        {"margin", number_to_json(chk.margin)},
                                        {"violating_level", chk.violating_level ? json(*chk.violating_level) : json(nullptr)},
                                        {"rule", to_string(SampleRule::LqEntropy)},
                                        {"m", m}}),
             Stage::Entropy, {{"seed", seed}});
        record({{"q", e.q}, {"n_max", e.n_max}, {"samples", e.samples}, {"seed", seed}, {"norm", e.norm}});
    }

    ExcludedSet build_excluded(const RemezSpec& b, std::size_t i, std::uint64_t& seed) const {
        const GriddedSpace& g = subspace_->space();
        std::size_t count = b.count;
        if (sweep_measure_ && (b.kind == "random" || b.kind == "greedy"))
            count = static_cast<std::size_t>(std::llround(*sweep_measure_ * static_cast<double>(g.size())));
        if (b.kind == "empty") return excluded_empty(g);
        if (b.kind == "interval") return excluded_interval(g, b.start, b.length);
        if (b.kind == "random") return excluded_random(g, count, seed = resolve_seed(cfg_, b.seed, kRemezSlot + i));
        if (b.kind == "greedy") return excluded_greedy(*subspace_, count, b.candidates);
        return excluded_cells(g, b.cells);
    }

    void remez() {
        const RemezConstants rc{constant(cfg_, "c1"), constant(cfg_, "C1"), constant(cfg_, "cd"), constant(cfg_, "Cd")};
        if (freqs_) {
            const RemezThresholds t = remez_thresholds(freqs_->size(), std::nullopt, rc);
            emit(document("remez_thresholds", {{"Q_size", freqs_->size()},
                                               {"sqrt_dim_measure", number_to_json(t.sqrt_dim_measure)},
                                               {"sqrt_dim_factor", number_to_json(t.sqrt_dim_factor)},
                                               {"twelve_measure", number_to_json(t.twelve_measure)},
                                               {"M", number_to_json(t.M)},
                                               {"m_log", number_to_json(t.m_log)}}),
                 Stage::Remez);
        }
        for (std::size_t i = 0; i < cfg_.remez.size(); ++i) {
            const RemezSpec& spec = cfg_.remez[i];
            std::uint64_t seed = 0;
            const ExcludedSet b = build_excluded(spec, i, seed);
            json doc = to_json(remez_constant(*subspace_, b, {}, rc.C1));
            doc["excluded"] = to_json(b);
            emit(std::move(doc), Stage::Remez, {{"seed", seed}, {"excluded_kind", spec.kind}});
            if (!spec.implication) continue;
            for (const auto& np : points_) {
                auto it = uniform_.find(np.name);
                if (it == uniform_.end()) continue;
                const RemezImplication r = remez_from_discretization(*subspace_, np.set, it->second, b);
                if (r.verdict == Verdict::HypothesisUnmet) ++out_.hypothesis_unmet;
                emit(to_json(r), Stage::Remez, {{"points", np.name}, {"seed", seed}, {"excluded_kind", spec.kind}});
            }
        }
        record({{"excluded_sets", cfg_.remez.size()}});
    }

    void sample_size() {
        for (const SampleSizeSpec& s : cfg_.sample_size) {
            SampleSizeQuery q;
            q.c = constant(cfg_, "c");
            q.C = constant(cfg_, "C");
            for (const auto& [k, v] : s.params) {
                if (k == "N") q.N = v;
                else if (k == "q") q.q = v;
                else if (k == "H") q.H = v;
                else if (k == "delta") q.delta = v;
                else if (k == "eps") q.eps = v;
                else if (k == "B") q.B = v;
                else if (k == "k") q.k = v;
                else if (k == "M") q.M = v;
                else if (k == "b") q.b = v;
            }
            if (!q.N && subspace_) q.N = static_cast<double>(subspace_->dim());
            const SampleRule rule = sample_rule_from_string(s.rule);
            json params = json::object();
            for (const auto& [k, v] : s.params) params[k] = number_to_json(v);
            emit(document("sample_size", {{"rule", s.rule},
                                          {"params", std::move(params)},
                                          {"N", number_to_json(*q.N)},
                                          {"value", number_to_json(sample_size_value(q, rule))},
                                          {"m", required_m(q, rule)}}),
                 Stage::SampleSize);
        }
        record({{"rules", cfg_.sample_size.size()}});
    }

    struct NamedPoints {
        std::string name;
        PointSet set;
        std::uint64_t seed;
    };

    const ExperimentConfig& cfg_;
    Stage stage_;
    StageResult& out_;
    json context_;
    std::string suffix_;
    std::optional<double> sweep_measure_;
    std::string current_;
    std::optional<FrequencySet> freqs_;
    std::optional<GriddedSpace> space_;
    std::optional<Subspace> subspace_;
    Eigen::MatrixXd raw_;
    std::vector<NamedPoints> points_;
    std::map<std::string, double> uniform_;
};

void execute(const ExperimentConfig& cfg, Stage stage, StageResult& out) {
    const std::string constants = constants_string(cfg);
    if (!cfg.sweep) {
        Pipeline(cfg, stage, out, {{"constants", constants}}, "", std::nullopt).execute();
        return;
    }
    for (std::size_t i = 0; i < cfg.sweep->values.size(); ++i) {
        const double v = cfg.sweep->values[i];
        const ExperimentConfig c = at_sweep_value(cfg, cfg.sweep->axis, v);
        json ctx = {{"sweep_axis", cfg.sweep->axis}, {"sweep_value", number_to_json(v)}, {"constants", constants}};
        std::optional<double> measure;
        if (cfg.sweep->axis == "B") measure = v;
        Pipeline(c, stage, out, std::move(ctx), "_" + std::to_string(i), measure).execute();
    }
}

std::string now_utc() {
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string field(const json& doc, const char* key) {
    if (!doc.contains(key) || doc.at(key).is_null()) return "";
    const json& v = doc.at(key);
    if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
    if (v.is_number() || v.is_string()) {
        try {
            return format_number(number_from_json(v));
        } catch (const SchemaError&) {
            return v.get<std::string>();
        }
    }
    return v.dump();
}

std::string ctx_field(const json& doc, const char* key) {
    if (!doc.contains("context")) return "";
    return field(doc.at("context"), key);
}

void write_file(const fs::path& path, const std::string& data) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write '" + path.string() + "'");
    out << data;
}

} // namespace

StageResult run_stage(const ExperimentConfig& cfg, Stage stage) {
    StageResult out;
    execute(cfg, stage, out);
    return out;
}

std::string reports_csv(const std::vector<json>& docs) {
    std::ostringstream os;
    os << "report_type,sweep_axis,sweep_value,points,subspace,q,m,C1,C2,D,R,measure,resolution,seed,constants\n";
    for (const json& d : docs) {
        const std::string type = d.value("schema", "");
        std::string q, m, c1, c2, dd, r, meas, res;
        if (type == "mz_report") {
            q = field(d, "q"); m = field(d, "m"); c1 = field(d, "C1"); c2 = field(d, "C2"); res = field(d, "resolution");
        } else if (type == "uniform_report") {
            m = field(d, "m"); dd = field(d, "D"); res = field(d, "resolution");
        } else if (type == "uniform_estimate") {
            m = field(d, "m"); dd = field(d, "D_lower");
        } else if (type == "remez_report") {
            r = field(d, "R"); meas = field(d, "measure"); res = field(d, "resolution");
        } else if (type == "remez_implication") {
            dd = field(d, "D"); r = field(d, "R"); meas = field(d, "measure");
        } else {
            continue;
        }
        os << type << ',' << ctx_field(d, "sweep_axis") << ',' << ctx_field(d, "sweep_value") << ','
           << ctx_field(d, "points") << ',' << ctx_field(d, "subspace") << ',' << q << ',' << m << ',' << c1 << ',' << c2
           << ',' << dd << ',' << r << ',' << meas << ',' << res << ',' << ctx_field(d, "seed") << ','
           << ctx_field(d, "constants") << '\n';
    }
    return os.str();
}

json to_json(const RunManifest& m) {
    json outputs = json::array();
    for (const auto& [p, h] : m.outputs) outputs.push_back({{"path", p}, {"sha256", h}});
    return document("manifest", {{"config_digest", m.config_digest},
                                 {"tool_version", m.tool_version},
                                 {"started", m.started},
                                 {"finished", m.finished},
                                 {"steps", m.steps},
                                 {"outputs", std::move(outputs)},
                                 {"artifact_digest", m.artifact_digest},
                                 {"hypothesis_unmet", m.hypothesis_unmet}});
}

RunManifest run(const ExperimentConfig& cfg, const fs::path& out_dir) {
    RunManifest man;
    man.tool_version = kToolVersion;
    man.config_digest = sha256_hex(cfg.source.dump());
    man.started = now_utc();
    StageResult res;
    std::string failed_step;
    std::string failure;
    int failure_code = 0;
    try {
        execute(cfg, Stage::All, res);
    } catch (const RunError& e) {
        failed_step = e.step();
        failure = e.what();
        failure_code = e.exit_code();
    }

    std::map<std::string, std::string> files = res.files;
    json docs = json::array();
    for (const json& d : res.docs) docs.push_back(d);
    files["reports.json"] = docs.dump(2) + "\n";
    files["reports.csv"] = reports_csv(res.docs);
    files["config.json"] = cfg.source.dump(2) + "\n";

    std::string inventory;
    for (const auto& [path, data] : files) {
        write_file(out_dir / path, data);
        const std::string h = sha256_hex(data);
        man.outputs.emplace_back(path, h);
        inventory += path + " " + h + "\n";
    }
    man.artifact_digest = sha256_hex(inventory);
    man.steps = res.steps;
    man.hypothesis_unmet = res.hypothesis_unmet;
    man.finished = now_utc();
    json mj = to_json(man);
    if (!failed_step.empty()) mj["failed_step"] = failed_step;
    write_file(out_dir / "manifest.json", mj.dump(2) + "\n");

    if (!failed_step.empty()) {
        std::vector<std::string> inv;
        for (const auto& [p, h] : man.outputs) inv.push_back(p);
        inv.push_back("manifest.json");
        throw RunError(failure, failed_step, std::move(inv), failure_code);
    }
    return man;
}

} // namespace mzkit
