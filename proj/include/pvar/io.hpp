#pragma once

#include <string>
#include <vector>

#include "pvar/calculus.hpp"
#include "pvar/constant.hpp"
#include "pvar/construct.hpp"
#include "pvar/partition.hpp"
#include "pvar/path.hpp"
#include "pvar/schauder.hpp"
#include "pvar/variation.hpp"

namespace pvar {

/// "%.17g".
std::string format_double(double v);

Json to_json(const RefiningTable& table);
RefiningTable refining_from_json(const Json& j);

Json to_json(const CoefficientArray& c);
CoefficientArray coefficients_from_json(const Json& j);

/// {"q", "level", "values", "meta"}; grids that are not q-adic also carry "points".
Json to_json(const SampledPath& path);
SampledPath path_from_json(const Json& j);

Json to_json(const VariationProfile& profile);
/// "level,t,value" rows for every profile in order.
std::string profile_csv(const std::vector<VariationProfile>& profiles);

Json to_json(const UniformMagnitudeSpec& spec);
UniformMagnitudeSpec spec_from_json(const Json& j);

Json to_json(const VariationConstant& c);

/// "t,residual".
std::string residual_csv(const ResidualProfile& r);

Json norm_report(const NormSelector& selector, double value);

/// Grid CSV: one point per line.
std::string grid_csv(const PartitionGrid& grid);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

/// Stable hash of a JSON value's compact serialization.
std::string json_hash(const Json& j);

}  // namespace pvar
