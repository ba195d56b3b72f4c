#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "pvar/path.hpp"
#include "pvar/schauder.hpp"
#include "pvar/variation.hpp"

namespace pvar {

enum class SignRule { Plus, Seeded, Explicit };

/// Coefficients theta_{m,k} = c_m sigma_{m,k} (q = 2) or
/// theta_{m,k,l} = c_m a_l (q >= 3) for levels m < levels.
struct UniformMagnitudeSpec {
  int q = 2;
  double p = 2.0;
  std::vector<double> c_values;  ///< empty: c_m = q^(m(1/2 - 1/p))
  SignRule signs = SignRule::Plus;
  std::uint64_t seed = 0;
  std::vector<std::vector<int>> explicit_signs;  ///< [m][k] in {-1, +1}
  std::vector<double> a;                         ///< empty: all ones
  int levels = 16;

  double c(int m) const;
  /// y_m = q^(m(1/p - 1/2)) c_m.
  double y(int m) const;
  /// rho = q^(-(1 - 1/p)).
  double rho() const;
  int sigma(int m, std::uint64_t k) const;
  std::vector<double> branch() const;

  /// Throws InvalidArgument when the spec is inconsistent.
  void validate() const;
};

CoefficientArray build_reference(const UniformMagnitudeSpec& spec, const Limits& limits = Limits::from_env());

/// synthesize(build_reference(spec), n) with the spec and its hash in meta.
/// Needs n <= spec.levels.
SampledPath reference_path(const UniformMagnitudeSpec& spec, int n, const Limits& limits = Limits::from_env());

struct IncrementDecomposition {
  double series_value = 0.0;       ///< sum_j rho^j y_{n-j} (sign or eta term)
  double synthesized_value = 0.0;  ///< q^(n/p) (x((k+1)/q^n) - x(k/q^n))
  std::vector<int> signs;          ///< eps_j(k), j = 1..n (q = 2 only)
  DigitVector digits;              ///< d_j(k), j = 1..n
};

/// Level signs eps_j(k) = sigma_{n-j, kappa} * gamma(2, 1, d_j(k)), q = 2.
std::vector<int> level_signs(const UniformMagnitudeSpec& spec, int n, std::uint64_t k);

/// `path` must be the level-n reference path of `spec`.
IncrementDecomposition increment_decomposition(const UniformMagnitudeSpec& spec, const SampledPath& path,
                                               std::uint64_t k);
IncrementDecomposition increment_decomposition(const UniformMagnitudeSpec& spec, int n, std::uint64_t k);

struct SignMatrixReport {
  int n = 0;
  std::uint64_t rows = 0;
  std::uint64_t distinct = 0;
  bool bijection = false;
  double level_value = 0.0;  ///< [x]^(p)_n(1) from the synthesized path
  double expectation = 0.0;  ///< average of |sum_j rho^j y_{n-j} e_j|^p over all sign patterns
  double gap = 0.0;
};

/// Checks that k -> (eps_1(k), ..., eps_n(k)) is a bijection onto {-1,+1}^n
/// and compares the level sum with the average over all sign patterns.
SignMatrixReport sign_matrix(const UniformMagnitudeSpec& spec, int n, const Limits& limits = Limits::from_env());

/// max over blocks r of |V_{n,m}(r) - q^(-m) [x]^(p)_n(1)| where V_{n,m}(r)
/// is the part of the level-n sum inside the r-th level-m interval.
double block_equipartition_gap(const SampledPath& path, double p, int m);

struct TransportResult {
  SampledPath y;
  VariationProfile predicted;
};

/// y = g x and the predicted profile int_0^t |g|^p d[x]^(p).
TransportResult transport_multiply(const SampledPath& g, const SampledPath& x, const VariationProfile& x_profile,
                                   double p);

/// A target variation h with h(0) = 0 and its derivative.
struct TargetFamily {
  std::string name;
  std::function<double(double)> h;
  std::function<double(double)> hprime;

  static TargetFamily linear();
  static TargetFamily exponential(double a = 1.0);  ///< e^(a t) - 1
  static TargetFamily logarithmic(double b = 1.0);  ///< log(1 + b t)
  static TargetFamily by_name(const std::string& name, double param = 1.0);
};

struct RecipeResult {
  SampledPath y;
  SampledPath x;
  SampledPath g;
  std::vector<double> target;  ///< cumulative trapezoid of h' at every grid point
  TrendRow vanishing;          ///< level trend of [g]^(p)
  bool warning = false;        ///< true when that trend is not vanishing
};

/// y = (h'/C)^(1/p) x where x is the reference path of `spec` on the grid of
/// `hprime` (a q-adic grid of level <= spec.levels).
RecipeResult recipe(const SampledPath& hprime, double p, const UniformMagnitudeSpec& spec, double constant,
                    const Limits& limits = Limits::from_env());

/// x + shift; requires shift > sup |x|.
SampledPath shifted_reference(const SampledPath& x, double shift);

/// Degree-n Bernstein polynomial of z evaluated on `grid` by de Casteljau.
SampledPath bernstein(const std::function<double(double)>& z, int n, const PartitionGrid& grid);
/// Uses z's own grid; z(k/n) must be available, so the grid must contain
/// every k/n (checked exactly).
SampledPath bernstein(const SampledPath& z, int n);

/// Boundary and levels < n from x, levels >= n from y.
CoefficientArray splice(const CoefficientArray& x, const CoefficientArray& y, int n);

}  // namespace pvar
