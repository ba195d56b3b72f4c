#pragma once

#include <span>
#include <vector>

#include "json.hpp"
#include "pvar/partition.hpp"

namespace pvar {

using Json = nlohmann::json;

/// Values of a continuous path on one partition level.
struct SampledPath {
  PartitionGrid grid;
  std::vector<double> values;
  Json meta = Json::object();

  int q() const { return grid.q; }
  int level() const { return grid.level; }
  double sup_norm() const;
};

/// Samples f at every grid point.
template <class F>
SampledPath sample(const PartitionGrid& grid, F&& f) {
  SampledPath path{grid, std::vector<double>(grid.points.size())};
  for (std::size_t i = 0; i < grid.points.size(); ++i) path.values[i] = f(grid.points[i]);
  return path;
}

/// Same grid and same values length; throws InvalidArgument naming `what`.
void require_same_grid(const SampledPath& a, const SampledPath& b, const char* what);

/// Sub-samples a q-adic path to a coarser level m by taking every q^(n-m)-th value.
SampledPath restrict_to_level(const SampledPath& path, int m);

/// Index of `t` among the grid points, by exact comparison; throws when t is
/// not a grid point.
std::size_t grid_index(const PartitionGrid& grid, double t);

}  // namespace pvar
