#pragma once

#include <span>
#include <string>
#include <vector>

#include "pvar/path.hpp"
#include "pvar/schauder.hpp"

namespace pvar {

/// Discrete p-th variation t -> sum_j |x(t_{j+1} ^ t) - x(t_j ^ t)|^p on one
/// level, recorded at a sorted subset of the grid points.
struct VariationProfile {
  double p = 2.0;
  int level = 0;
  std::vector<std::size_t> eval_indices;
  std::vector<double> eval_points;
  std::vector<double> values;
};

/// Grid indices of the level-min(n, cap) points inside a q-adic level-n grid.
std::vector<std::size_t> default_eval_indices(const PartitionGrid& grid, int cap = 10);

/// Every grid index.
std::vector<std::size_t> all_indices(const PartitionGrid& grid);

/// Per-interval terms |x(t_{i+1}) - x(t_i)|^p.
std::vector<double> variation_terms(const SampledPath& path, double p);

VariationProfile pvar_profile(const SampledPath& path, double p, std::span<const std::size_t> eval_indices);
VariationProfile pvar_profile(const SampledPath& path, double p);
/// Eval points given as reals; each must be an exact grid point.
VariationProfile pvar_profile_at(const SampledPath& path, double p, std::span<const double> eval_points);

/// [x]^(p) at t = 1.
double level_sum(const SampledPath& path, double p);

struct NormResult {
  double value = 0.0;
  int argmax_level = 0;
  std::vector<double> level_roots;  ///< ([x]^(p)_n(1))^(1/p) per level
};

/// |x(0)| + max_n ([x]^(p)_n(1))^(1/p) over the supplied levels.
NormResult pvar_norm(std::span<const SampledPath> levels, double p);

enum class Trend { Bounded, Growing, Vanishing };
std::string to_string(Trend t);

struct TrendRow {
  double p = 0.0;
  double slope = 0.0;  ///< log_q slope per level over the tail
  Trend trend = Trend::Bounded;
  double last = 0.0;
};

/// Least-squares slope of log_base(values) over the last half of the
/// sequence. Slopes within +-tol are Bounded; a tail containing zeros is
/// Vanishing.
TrendRow classify_trend(std::span<const double> values, double base = 2.0, double tol = 0.02);

/// Trend of xi_m for each p in `ps`.
std::vector<TrendRow> variation_index_estimate(const CoefficientArray& coeffs, std::span<const double> ps);

/// Left-point Riemann-Stieltjes sums of w against the profile, one per eval
/// point; the profile is taken to start from 0 at t = 0.
std::vector<double> stieltjes_against_profile(const SampledPath& w, const VariationProfile& profile);

}  // namespace pvar
