#include "mzkit/report.hpp"

#include "mzkit/errors.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace mzkit {

namespace fs = std::filesystem;

namespace {

json read_json(const fs::path& p) {
    std::ifstream in(p);
    if (!in) throw ValidationError("cannot open '" + p.string() + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw SchemaError("'" + p.string() + "' is not valid JSON: " + e.what());
    }
}

void check_version(const json& d, const fs::path& origin) {
    if (!d.is_object() || !d.contains("schema") || !d.contains("version"))
        throw SchemaError("'" + origin.string() + "' holds a document without schema/version");
    if (d.at("version") != kSchemaVersion)
        throw SchemaError("'" + origin.string() + "': schema '" + d.at("schema").get<std::string>() + "' version " +
                          d.at("version").dump() + " needs migration to version " + std::to_string(kSchemaVersion) +
                          "; re-run the producing command");
}

void collect(const fs::path& p, std::vector<json>& out) {
    if (fs::is_directory(p)) {
        if (fs::exists(p / "manifest.json")) return collect(p / "manifest.json", out);
        if (fs::exists(p / "reports.json")) return collect(p / "reports.json", out);
        throw ValidationError("'" + p.string() + "' contains neither manifest.json nor reports.json");
    }
    const json j = read_json(p);
    if (j.is_array()) {
        for (const json& d : j) {
            check_version(d, p);
            out.push_back(d);
        }
        return;
    }
    check_version(j, p);
    if (j.at("schema") == "manifest") return collect(p.parent_path() / "reports.json", out);
    out.push_back(j);
}

struct Column {
    std::string header;
    std::string key;
    bool context = false;
};

const std::vector<std::string> kOrder = {"subspace_summary", "design",          "point_set",        "mz_report",
                                         "uniform_report",   "uniform_estimate", "vp_kernel",        "kernel_report",
                                         "entropy_estimate", "entropy_check",    "remez_thresholds", "remez_report",
                                         "remez_implication", "sample_size"};

std::vector<Column> columns(const std::string& schema) {
    std::vector<Column> c = {{"sweep", "sweep_value", true}, {"points", "points", true}};
    auto add = [&](std::initializer_list<Column> more) { c.insert(c.end(), more); };
    if (schema == "subspace_summary") add({{"label", "label"}, {"N", "dim"}, {"H", "christoffel_max"}});
    else if (schema == "design") add({{"G", "g_value"}, {"iters", "iterations"}, {"converged", "converged"}});
    else if (schema == "point_set") add({{"method", "method"}, {"seed", "seed"}});
    else if (schema == "mz_report") add({{"q", "q"}, {"m", "m"}, {"C1", "C1"}, {"C2", "C2"}, {"method", "method"}});
    else if (schema == "uniform_report") add({{"m", "m"}, {"D", "D"}, {"resolution", "resolution"}});
    else if (schema == "uniform_estimate") add({{"m", "m"}, {"D_lower", "D_lower"}});
    else if (schema == "vp_kernel") add({{"M", "M"}, {"L1", "l1_norm"}, {"sigma", "sigma_bound"}});
    else if (schema == "kernel_report") add({{"max_L1", "max_l1"}, {"H", "max_diag_sqrt"}, {"sigma", "sigma_bound"}, {"m_bound", "m_bound"}});
    else if (schema == "entropy_estimate") add({{"q", "q"}, {"norm", "norm"}, {"samples", "samples"}});
    else if (schema == "entropy_check") add({{"pass", "pass"}, {"entB", "ent_b"}, {"min_entB", "min_ent_b"}, {"m", "m"}});
    else if (schema == "remez_thresholds") add({{"|Q|", "Q_size"}, {"factor", "sqrt_dim_factor"}, {"measure12", "twelve_measure"}});
    else if (schema == "remez_report") add({{"|B|", "measure"}, {"R", "R"}, {"resolution", "resolution"}});
    else if (schema == "remez_implication") add({{"verdict", "verdict"}, {"|B|", "measure"}, {"R", "R"}, {"D", "D"}});
    else if (schema == "sample_size") add({{"rule", "rule"}, {"N", "N"}, {"m", "m"}});
    return c;
}

std::string cell(const json& doc, const Column& col) {
    const json* src = &doc;
    if (col.context) {
        if (!doc.contains("context")) return "-";
        src = &doc.at("context");
    }
    if (!src->contains(col.key) || src->at(col.key).is_null()) return "-";
    const json& v = src->at(col.key);
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_float()) return format_number(v.get<double>());
    return v.dump();
}

std::string table(const std::string& schema, const std::vector<const json*>& rows) {
    const std::vector<Column> cols = columns(schema);
    std::vector<std::vector<std::string>> cells;
    std::vector<std::size_t> width(cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c) width[c] = cols[c].header.size();
    for (const json* d : rows) {
        std::vector<std::string> row;
        for (std::size_t c = 0; c < cols.size(); ++c) {
            row.push_back(cell(*d, cols[c]));
            width[c] = std::max(width[c], row.back().size());
        }
        cells.push_back(std::move(row));
    }
    std::ostringstream os;
    os << "== " << schema << " (" << rows.size() << ")\n";
    auto line = [&](const std::vector<std::string>& r) {
        std::string s;
        for (std::size_t c = 0; c < r.size(); ++c) {
            if (c) s += "  ";
            s += r[c] + std::string(width[c] - r[c].size(), ' ');
        }
        while (!s.empty() && s.back() == ' ') s.pop_back();
        os << s << '\n';
    };
    std::vector<std::string> head;
    for (const auto& c : cols) head.push_back(c.header);
    line(head);
    for (const auto& r : cells) line(r);
    return os.str();
}

struct Metric {
    std::string schema;
    std::string key;
};

const std::vector<Metric> kPlotMetrics = {{"mz_report", "C1"},        {"mz_report", "C2"}, {"uniform_report", "D"},
                                          {"uniform_estimate", "D_lower"}, {"remez_report", "R"},
                                          {"kernel_report", "max_l1"}, {"sample_size", "m"}};

} // namespace

std::vector<json> load_report_inputs(const std::vector<fs::path>& inputs) {
    if (inputs.empty()) throw ValidationError("no report inputs given");
    std::vector<json> out;
    for (const auto& p : inputs) collect(p, out);
    return out;
}

ReportOutput build_report(const std::vector<json>& docs) {
    std::map<std::string, std::vector<const json*>> groups;
    for (const json& d : docs) groups[d.value("schema", "unknown")].push_back(&d);
    std::vector<std::string> names;
    for (const auto& s : kOrder)
        if (groups.count(s)) names.push_back(s);
    for (const auto& [s, rows] : groups)
        if (std::find(kOrder.begin(), kOrder.end(), s) == kOrder.end()) names.push_back(s);

    ReportOutput out;
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) out.text += '\n';
        out.text += table(names[i], groups[names[i]]);
    }

    for (const Metric& m : kPlotMetrics) {
        auto it = groups.find(m.schema);
        if (it == groups.end()) continue;
        std::map<std::string, std::vector<std::pair<std::string, std::string>>> series;
        for (const json* d : it->second) {
            if (!d->contains("context") || !d->at("context").contains("sweep_axis")) continue;
            if (!d->contains(m.key)) continue;
            const json& ctx = d->at("context");
            std::string name = ctx.at("sweep_axis").get<std::string>() + "-" + m.schema + "-" + m.key;
            if (ctx.contains("points")) name += "-" + ctx.at("points").get<std::string>();
            series[name + ".dat"].emplace_back(cell(*d, {"", "sweep_value", true}), cell(*d, {"", m.key, false}));
        }
        for (auto& [file, pts] : series) {
            std::ostringstream os;
            const std::string axis = file.substr(0, file.find('-'));
            os << "# " << axis << ' ' << m.key << '\n';
            for (const auto& [x, y] : pts) os << x << ' ' << y << '\n';
            out.plot_files[file] = os.str();
        }
    }
    return out;
}

} // namespace mzkit
