#pragma once

#include "mzkit/errors.hpp"
#include "mzkit/serialize.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mzkit {

inline constexpr const char* kToolVersion = "mzkit 1.0.0";

struct SubspaceSpec {
    std::string kind = "trig";       ///< trig | poly
    std::string generator = "box";   ///< box | range | hyperbolic_cross | lacunary | list (trig)
    std::vector<long> n;             ///< box orders
    long lo = 0, hi = 0;             ///< range
    int dim = 1;                     ///< hyperbolic_cross, list, poly
    long size = 0;                   ///< hyperbolic_cross N, lacunary N
    double ratio = 2.0;              ///< lacunary
    std::vector<Frequency> freqs;    ///< list
    int degree = 0;                  ///< poly
};

struct GridSpec {
    std::vector<int> shape; ///< one entry per axis, or a single entry repeated
    bool repeated = false;
};

struct DesignSpec {
    double tol = 0.01;
    int max_iters = 200000;
};

struct PointSpec {
    std::string name;
    std::string method;              ///< equispaced | iid | christoffel | bss | full_grid
    int m = 0;
    int offset = 0;
    std::optional<std::uint64_t> seed;
    bool weighted = true;
    double b = 2.0;
};

struct CertifySpec {
    std::string kind;                ///< l2 | uniform | lq | ratio
    double q = 2.0;
    int trials = 16;
    std::optional<std::uint64_t> seed;
};

struct VpSearchSpec {
    std::vector<long> support_n;
    int iters = 200;
    int restarts = 1;
    int grid_points = 256;
    std::optional<std::uint64_t> seed;
};

struct KernelSpec {
    std::optional<int> vp_classical;
    int vp_grid = 4096;
    std::optional<VpSearchSpec> vp_search;
};

struct EntropySpec {
    double q = 2.0;
    int n_max = 3;
    std::size_t samples = 1000;
    std::string norm = "lq";
    std::optional<std::uint64_t> seed;
    std::optional<double> ent_b;
};

struct RemezSpec {
    std::string kind;                ///< empty | interval | random | greedy | cells
    double start = 0.0;
    double length = 0.0;             ///< radians
    std::size_t count = 0;
    std::size_t candidates = 8;
    std::vector<Eigen::Index> cells;
    std::optional<std::uint64_t> seed;
    bool implication = false;        ///< check against every uniform-certified point set
};

struct SampleSizeSpec {
    std::string rule;
    std::map<std::string, double> params;
};

struct SweepSpec {
    std::string axis;                ///< m | b | q | N | B
    std::vector<double> values;
};

/// Strictly validated experiment description. Every randomized step carries a
/// seed after parsing: explicit, or derived from the top-level seed.
struct ExperimentConfig {
    std::optional<std::uint64_t> seed;
    SubspaceSpec subspace;
    GridSpec grid;
    std::optional<DesignSpec> design;
    std::vector<PointSpec> points;
    std::vector<CertifySpec> certify;
    std::optional<KernelSpec> kernels;
    std::optional<EntropySpec> entropy;
    std::vector<RemezSpec> remez;
    std::vector<SampleSizeSpec> sample_size;
    std::optional<SweepSpec> sweep;
    std::map<std::string, double> constants;
    std::optional<std::string> output_dir;
    json source;                     ///< the document as parsed, for digests
};

/// Throws ValidationError on unknown keys, missing seeds, or bad values.
ExperimentConfig parse_config(const json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Command-line overrides; re-resolves derived seeds.
struct ConfigOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<int> grid;
    std::map<std::string, double> constants;
};
ExperimentConfig apply_overrides(const ExperimentConfig& cfg, const ConfigOverrides& o);
/// Parses NAME=VALUE.
std::pair<std::string, double> parse_override(const std::string& text);

enum class Stage { Subspace, Design, Points, Certify, Kernel, Entropy, Remez, SampleSize, All };

/// Report documents produced by the pipeline up to and including `stage`
/// (prerequisite steps run but only the requested step's documents are kept,
/// except for Stage::All). Each document carries a "context" object.
struct StageResult {
    std::vector<json> docs;
    std::map<std::string, std::string> files; ///< relative path -> contents
    std::vector<json> steps;                  ///< resolved parameters per step
    int hypothesis_unmet = 0;
};

StageResult run_stage(const ExperimentConfig& cfg, Stage stage);

/// A pipeline step failed; carries the step name and the artifacts already written.
class RunError : public Error {
public:
    RunError(const std::string& what, std::string step, std::vector<std::string> inventory, int exit_code)
        : Error(what), step_(std::move(step)), inventory_(std::move(inventory)), exit_code_(exit_code) {}
    const std::string& step() const noexcept { return step_; }
    const std::vector<std::string>& inventory() const noexcept { return inventory_; }
    int exit_code() const noexcept { return exit_code_; }

private:
    std::string step_;
    std::vector<std::string> inventory_;
    int exit_code_;
};

struct RunManifest {
    std::string config_digest;
    std::string tool_version;
    std::string started;
    std::string finished;
    std::vector<json> steps;
    std::vector<std::pair<std::string, std::string>> outputs; ///< path, sha256
    std::string artifact_digest; ///< over output paths and digests, timestamps excluded
    int hypothesis_unmet = 0;
};

json to_json(const RunManifest& m);

/// Runs the whole pipeline and writes reports.json, reports.csv, per-step CSV
/// files and manifest.json into `out_dir`.
RunManifest run(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

/// One CSV line per certification/Remez document, 17 significant digits.
std::string reports_csv(const std::vector<json>& docs);

std::string sha256_hex(const std::string& data);

/// Exit code for an exception escaping a command: 2 validation, 3 numerical.
int exit_code_for(const std::exception& e);

} // namespace mzkit
