#include "pvar/variation.hpp"

#include <algorithm>
#include <cmath>

namespace pvar {

std::vector<std::size_t> default_eval_indices(const PartitionGrid& grid, int cap) {
  const int m = std::min(grid.level, cap);
  const std::uint64_t stride = int_pow(grid.q, grid.level - m);
  const std::uint64_t count = int_pow(grid.q, m);
  std::vector<std::size_t> idx(count + 1);
  for (std::uint64_t i = 0; i <= count; ++i) idx[i] = i * stride;
  return idx;
}

std::vector<std::size_t> all_indices(const PartitionGrid& grid) {
  std::vector<std::size_t> idx(grid.points.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  return idx;
}

std::vector<double> variation_terms(const SampledPath& path, double p) {
  if (!(p > 1.0)) throw InvalidArgument("p-th variation needs p > 1");
  if (path.values.size() != path.grid.points.size() || path.values.empty()) {
    throw InvalidArgument("path values and grid differ in length");
  }
  std::vector<double> terms(path.values.size() - 1);
  for (std::size_t i = 0; i < terms.size(); ++i) {
    terms[i] = abs_pow(path.values[i + 1] - path.values[i], p);
  }
  return terms;
}

VariationProfile pvar_profile(const SampledPath& path, double p, std::span<const std::size_t> eval_indices) {
  const auto terms = variation_terms(path, p);
  for (std::size_t r = 0; r < eval_indices.size(); ++r) {
    if (eval_indices[r] >= path.values.size() || (r > 0 && eval_indices[r] <= eval_indices[r - 1])) {
      throw InvalidArgument("eval indices must be strictly increasing grid indices");
    }
  }
  VariationProfile prof{p, path.level(), {eval_indices.begin(), eval_indices.end()}, {}, {}};
  prof.eval_points.reserve(eval_indices.size());
  for (std::size_t i : eval_indices) prof.eval_points.push_back(path.grid.points[i]);
  prof.values = blocked_prefix_sums(terms, eval_indices);
  return prof;
}

VariationProfile pvar_profile(const SampledPath& path, double p) {
  const auto idx = path.grid.is_qadic() ? default_eval_indices(path.grid) : all_indices(path.grid);
  return pvar_profile(path, p, idx);
}

VariationProfile pvar_profile_at(const SampledPath& path, double p, std::span<const double> eval_points) {
  std::vector<std::size_t> idx;
  idx.reserve(eval_points.size());
  for (double t : eval_points) idx.push_back(grid_index(path.grid, t));
  return pvar_profile(path, p, idx);
}

double level_sum(const SampledPath& path, double p) { return pairwise_sum(variation_terms(path, p)); }

NormResult pvar_norm(std::span<const SampledPath> levels, double p) {
  if (levels.empty()) throw InvalidArgument("pvar_norm: no levels supplied");
  NormResult out;
  double best = -1.0;
  for (std::size_t n = 0; n < levels.size(); ++n) {
    const double root = std::pow(level_sum(levels[n], p), 1.0 / p);
    out.level_roots.push_back(root);
    if (root > best) {
      best = root;
      out.argmax_level = levels[n].level();
    }
  }
  out.value = std::fabs(levels.front().values.front()) + best;
  return out;
}

std::string to_string(Trend t) {
  switch (t) {
    case Trend::Bounded: return "bounded";
    case Trend::Growing: return "growing";
    case Trend::Vanishing: return "vanishing";
  }
  return "unknown";
}

TrendRow classify_trend(std::span<const double> values, double base, double tol) {
  if (values.size() < 4) throw InvalidArgument("trend classification needs at least 4 levels");
  TrendRow row;
  row.last = values.back();
  const std::size_t start = values.size() / 2;
  const auto tail = values.subspan(start);
  if (std::any_of(tail.begin(), tail.end(), [](double v) { return !(v > 0.0); })) {
    row.trend = Trend::Vanishing;
    row.slope = -INFINITY;
    return row;
  }
  const double nn = static_cast<double>(tail.size());
  double mx = 0.0;
  double my = 0.0;
  std::vector<double> ys(tail.size());
  for (std::size_t i = 0; i < tail.size(); ++i) {
    ys[i] = std::log(tail[i]) / std::log(base);
    mx += static_cast<double>(i);
    my += ys[i];
  }
  mx /= nn;
  my /= nn;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < tail.size(); ++i) {
    const double dx = static_cast<double>(i) - mx;
    sxy += dx * (ys[i] - my);
    sxx += dx * dx;
  }
  row.slope = sxy / sxx;
  row.trend = row.slope > tol ? Trend::Growing : row.slope < -tol ? Trend::Vanishing : Trend::Bounded;
  return row;
}

std::vector<TrendRow> variation_index_estimate(const CoefficientArray& coeffs, std::span<const double> ps) {
  if (coeffs.depth() < 4) throw InvalidArgument("variation index estimate needs >= 4 coefficient levels");
  std::vector<TrendRow> rows;
  for (double p : ps) {
    std::vector<double> xs(static_cast<std::size_t>(coeffs.depth()));
    for (int m = 0; m < coeffs.depth(); ++m) xs[static_cast<std::size_t>(m)] = xi(coeffs, p, m);
    TrendRow row = classify_trend(xs, static_cast<double>(coeffs.q));
    row.p = p;
    rows.push_back(row);
  }
  return rows;
}

std::vector<double> stieltjes_against_profile(const SampledPath& w, const VariationProfile& profile) {
  if (w.values.size() != w.grid.points.size()) throw InvalidArgument("stieltjes: malformed integrand");
  std::vector<double> out(profile.values.size());
  double acc = 0.0;
  double prev_v = 0.0;
  std::size_t prev_i = 0;
  for (std::size_t r = 0; r < profile.values.size(); ++r) {
    const std::size_t i = grid_index(w.grid, profile.eval_points[r]);
    if (r > 0 && i <= prev_i) throw InvalidArgument("stieltjes: eval points not increasing");
    acc += w.values[prev_i] * (profile.values[r] - prev_v);
    out[r] = acc;
    prev_v = profile.values[r];
    prev_i = i;
  }
  return out;
}

}  // namespace pvar
