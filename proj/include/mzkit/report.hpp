#pragma once

#include "mzkit/serialize.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace mzkit {

/// Report documents from run directories, manifests, reports.json arrays or
/// single document files. Throws SchemaError on version mismatch.
std::vector<json> load_report_inputs(const std::vector<std::filesystem::path>& inputs);

struct ReportOutput {
    std::string text;                               ///< aligned tables grouped by report type
    std::map<std::string, std::string> plot_files;  ///< file name -> "x y" lines
};

/// Groups are ordered by a fixed type order (unknown types last, by name);
/// rows keep input order within a group.
ReportOutput build_report(const std::vector<json>& docs);

} // namespace mzkit
