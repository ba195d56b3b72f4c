#include "pvar/timechange.hpp"

#include <algorithm>
#include <cmath>

#include "pvar/variation.hpp"

namespace pvar {

SampledPath pullback_path(const SampledPath& x, const HomeomorphismTable& phi) {
  if (x.q() != phi.q()) throw InvalidArgument("pullback: path and table disagree on q");
  if (!x.grid.is_qadic()) throw InvalidArgument("pullback: input path must live on a q-adic grid");
  if (x.level() > phi.top_level()) {
    throw InvalidArgument("pullback: level " + std::to_string(x.level()) + " exceeds the table's top level " +
                          std::to_string(phi.top_level()));
  }
  SampledPath out{PartitionGrid{x.q(), x.level(), phi.level_points(x.level())}, x.values, x.meta};
  out.meta["timechange"] = {{"table_hash", phi.hash()}, {"N", phi.top_level()}};
  return out;
}

double transported_pvar_check(const SampledPath& x, const HomeomorphismTable& phi, double p) {
  const SampledPath pulled = pullback_path(x, phi);
  const auto idx = all_indices(pulled.grid);
  const VariationProfile lhs = pvar_profile(pulled, p, idx);
  std::vector<std::size_t> mapped;
  mapped.reserve(idx.size());
  for (double s : pulled.grid.points) mapped.push_back(grid_index(x.grid, phi.forward(s)));
  const VariationProfile rhs = pvar_profile(x, p, mapped);
  double gap = 0.0;
  for (std::size_t i = 0; i < lhs.values.size(); ++i) gap = std::max(gap, std::fabs(lhs.values[i] - rhs.values[i]));
  return gap;
}

TransportedRecipe transported_recipe(std::span<const double> H, double p, const HomeomorphismTable& phi,
                                     const UniformMagnitudeSpec& spec, double constant, int n,
                                     const Limits& limits) {
  if (phi.q() != spec.q) throw InvalidArgument("transported recipe: table and spec disagree on q");
  if (n < 1 || n > phi.top_level()) throw InvalidArgument("transported recipe: level outside the table");
  const PartitionGrid grid = qadic_grid(spec.q, n, limits);
  if (H.size() != grid.points.size()) throw InvalidArgument("transported recipe: need one H sample per level-n point");
  if (H.front() != 0.0) throw InvalidArgument("transported recipe: H(0) must be 0");
  for (std::size_t i = 1; i < H.size(); ++i) {
    if (!(H[i] >= H[i - 1])) throw InvalidArgument("transported recipe: H must be non-decreasing");
  }
  // h(i/q^n) = H(s_i) because phi^{-1}(i/q^n) = s_i.
  const auto& u = grid.points;
  const std::size_t last = u.size() - 1;
  SampledPath hprime{grid, std::vector<double>(u.size())};
  hprime.values[0] = (H[1] - H[0]) / (u[1] - u[0]);
  hprime.values[last] = (H[last] - H[last - 1]) / (u[last] - u[last - 1]);
  for (std::size_t i = 1; i < last; ++i) hprime.values[i] = (H[i + 1] - H[i - 1]) / (u[i + 1] - u[i - 1]);

  TransportedRecipe out{{}, recipe(hprime, p, spec, constant, limits), hprime.values};
  out.y = pullback_path(out.qadic.y, phi);
  out.y.meta["hprime"] = "central-difference";
  return out;
}

}  // namespace pvar
