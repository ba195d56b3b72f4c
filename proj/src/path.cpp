#include "pvar/path.hpp"

#include <algorithm>
#include <cmath>

namespace pvar {

double SampledPath::sup_norm() const {
  double s = 0.0;
  for (double v : values) s = std::max(s, std::fabs(v));
  return s;
}

void require_same_grid(const SampledPath& a, const SampledPath& b, const char* what) {
  if (a.values.size() != b.values.size() || a.grid.points != b.grid.points) {
    throw InvalidArgument(std::string(what) + ": paths live on different grids");
  }
}

SampledPath restrict_to_level(const SampledPath& path, int m) {
  if (m < 0 || m > path.level()) {
    throw InvalidArgument("restrict_to_level: level " + std::to_string(m) + " not in [0, " +
                          std::to_string(path.level()) + "]");
  }
  if (path.values.size() != path.grid.points.size() ||
      path.grid.points.size() != int_pow(path.q(), path.level()) + 1) {
    throw InvalidArgument("restrict_to_level: malformed path");
  }
  const std::uint64_t stride = int_pow(path.q(), path.level() - m);
  const std::uint64_t count = int_pow(path.q(), m);
  SampledPath out{PartitionGrid{path.q(), m, std::vector<double>(count + 1)},
                  std::vector<double>(count + 1), path.meta};
  for (std::uint64_t i = 0; i <= count; ++i) {
    out.grid.points[i] = path.grid.points[i * stride];
    out.values[i] = path.values[i * stride];
  }
  return out;
}

std::size_t grid_index(const PartitionGrid& grid, double t) {
  const auto it = std::lower_bound(grid.points.begin(), grid.points.end(), t);
  if (it == grid.points.end() || *it != t) {
    throw InvalidArgument("point " + std::to_string(t) + " is not on the level-" +
                          std::to_string(grid.level) + " grid");
  }
  return static_cast<std::size_t>(it - grid.points.begin());
}

}  // namespace pvar
