#include "mzkit/experiment.hpp"
#include "mzkit/report.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace mzkit;

namespace {

struct CommonFlags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<int> grid;
    std::string out;
    std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool needs_config) {
    auto* c = cmd->add_option("--config", f.config, "experiment config (JSON)");
    if (needs_config) c->required();
    cmd->add_option("--seed", f.seed, "top-level seed");
    cmd->add_option("--grid", f.grid, "grid points per axis");
    cmd->add_option("--out", f.out, "output directory");
    cmd->add_option("--override", f.overrides, "constant override NAME=VALUE")->take_all();
}

ExperimentConfig resolve(const CommonFlags& f) {
    ConfigOverrides o;
    o.seed = f.seed;
    o.grid = f.grid;
    for (const auto& s : f.overrides) o.constants.insert(parse_override(s));
    return apply_overrides(load_config(f.config), o);
}

void write(const fs::path& path, const std::string& data) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write '" + path.string() + "'");
    out << data;
}

int stage_command(const std::string& name, Stage stage, const CommonFlags& f) {
    const StageResult res = run_stage(resolve(f), stage);
    json docs = json::array();
    for (const auto& d : res.docs) docs.push_back(d);
    if (f.out.empty()) {
        std::cout << docs.dump(2) << '\n';
    } else {
        const fs::path dir(f.out);
        write(dir / (name + ".json"), docs.dump(2) + "\n");
        for (const auto& [p, data] : res.files) write(dir / p, data);
        std::cout << "wrote " << (dir / (name + ".json")).string() << '\n';
    }
    return res.hypothesis_unmet > 0 ? 4 : 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sampling discretization toolkit"};
    app.require_subcommand(1);

    const std::vector<std::pair<std::string, Stage>> stages = {
        {"subspace", Stage::Subspace}, {"design", Stage::Design}, {"points", Stage::Points},
        {"certify", Stage::Certify},   {"kernel", Stage::Kernel}, {"entropy", Stage::Entropy},
        {"remez", Stage::Remez}};
    std::map<std::string, CommonFlags> flags;
    std::map<std::string, CLI::App*> cmds;
    for (const auto& [name, stage] : stages) {
        cmds[name] = app.add_subcommand(name, "run the pipeline up to the " + name + " step");
        add_common(cmds[name], flags[name], true);
    }
    CommonFlags run_flags;
    auto* run_cmd = app.add_subcommand("run", "run the full pipeline and write artifacts");
    add_common(run_cmd, run_flags, true);

    std::vector<std::string> report_inputs;
    std::string report_out;
    auto* report_cmd = app.add_subcommand("report", "summarize report files");
    report_cmd->add_option("inputs", report_inputs, "run directories, manifests or report files")->required();
    report_cmd->add_option("--out", report_out, "directory for summary.txt and plot data");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        for (const auto& [name, stage] : stages)
            if (*cmds[name]) return stage_command(name, stage, flags[name]);
        if (*run_cmd) {
            const ExperimentConfig cfg = resolve(run_flags);
            fs::path out = run_flags.out.empty() ? fs::path(cfg.output_dir.value_or("mzkit-out")) : fs::path(run_flags.out);
            const RunManifest m = run(cfg, out);
            std::cout << "wrote " << m.outputs.size() + 1 << " files to " << out.string() << " (artifact digest "
                      << m.artifact_digest << ")\n";
            return m.hypothesis_unmet > 0 ? 4 : 0;
        }
        if (*report_cmd) {
            std::vector<fs::path> paths(report_inputs.begin(), report_inputs.end());
            const ReportOutput r = build_report(load_report_inputs(paths));
            std::cout << r.text;
            if (!report_out.empty()) {
                const fs::path dir(report_out);
                write(dir / "summary.txt", r.text);
                for (const auto& [name, data] : r.plot_files) write(dir / name, data);
            }
            return 0;
        }
    } catch (const RunError& e) {
        std::cerr << "error: " << e.what() << '\n';
        if (!e.inventory().empty()) {
            std::cerr << "partial artifacts:";
            for (const auto& p : e.inventory()) std::cerr << ' ' << p;
            std::cerr << '\n';
        }
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e);
    }
    return 0;
}
