#pragma once

#include "mzkit/certify.hpp"
#include "mzkit/design.hpp"
#include "mzkit/entropy.hpp"
#include "mzkit/kernels.hpp"
#include "mzkit/pointset.hpp"
#include "mzkit/remez.hpp"
#include "mzkit/subspace.hpp"

#include <json.hpp>

#include <string>

namespace mzkit {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Non-finite numbers are written as the strings "+inf", "-inf" and "nan".
json number_to_json(double v);
double number_from_json(const json& j);

/// Wraps a body as {"schema": name, "version": kSchemaVersion, ...body}.
json document(const std::string& schema, json body);
/// Throws SchemaError when `j` is not a document of `schema` at the current version.
void expect_document(const json& j, const std::string& schema);

json to_json(const FrequencySet& q);
FrequencySet frequency_set_from_json(const json& j);

json to_json(const GriddedSpace& g);
GriddedSpace gridded_space_from_json(const json& j);

/// The basis is stored flat, row-major (grid point by grid point).
json to_json(const Subspace& s);
Subspace subspace_from_json(const json& j);

json to_json(const DesignMeasure& d);

json to_json(const PointSet& p);
PointSet point_set_from_json(const json& j);
/// Header x1..xd,weight; one line per point.
std::string point_set_csv(const PointSet& p, const GriddedSpace& space);

json to_json(const MZReport& r);
MZReport mz_report_from_json(const json& j);

json to_json(const UniformReport& r);
UniformReport uniform_report_from_json(const json& j);

json to_json(const VpRecord& v);
json to_json(const KernelReport& r);

json to_json(const EntropyEstimate& e);
EntropyEstimate entropy_estimate_from_json(const json& j);
/// Header level,N_n,e_hat.
std::string entropy_csv(const EntropyEstimate& e);

json to_json(const ExcludedSet& b);
ExcludedSet excluded_set_from_json(const json& j);

json to_json(const RemezReport& r);
json to_json(const RemezImplication& r);

/// 17 significant digits; non-finite values as +inf, -inf, nan.
std::string format_number(double v);

} // namespace mzkit
