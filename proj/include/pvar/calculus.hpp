#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "pvar/path.hpp"
#include "pvar/variation.hpp"

namespace pvar {

/// f and its derivatives f', ..., f^(order).
struct FunctionWithDerivatives {
  std::string name;
  std::vector<std::function<double(double)>> d;  ///< d[k] = f^(k)

  int order() const { return static_cast<int>(d.size()) - 1; }
  double operator()(int k, double y) const { return d.at(static_cast<std::size_t>(k))(y); }

  /// sum_i c_i y^i, with all derivatives (zero beyond the degree) up to `order`.
  static FunctionWithDerivatives polynomial(std::vector<double> coeffs, int order);
  /// exp(y); every derivative is exp.
  static FunctionWithDerivatives exponential(int order);
  /// sin(y).
  static FunctionWithDerivatives sine(int order);
};

struct DerivativeCheck {
  double max_rel_error = 0.0;
  int worst_order = 0;
  bool pass = true;
};

/// Central differences (step h) of f^(k-1) against f^(k) at the given points.
DerivativeCheck check_derivatives(const FunctionWithDerivatives& f, std::span<const double> points,
                                  double h = 1e-5, double tol = 1e-4);

/// Compensated sums sum_{t_i < t} sum_{k=1}^{p-1} f^(k)(y_i)/k! (y_{i+1} - y_i)^k
/// at each eval index. p must be an even integer.
std::vector<double> follmer_sum(const FunctionWithDerivatives& f, const SampledPath& y, int p,
                                std::span<const std::size_t> eval_indices);

struct ResidualProfile {
  int level = 0;
  std::vector<double> t;
  std::vector<double> residual;
  double sup = 0.0;
};

/// f(y(t)) - f(y(0)) - follmer_sum(t) - (1/p!) int_0^t f^(p)(y) d[y]^(p)_n,
/// with the correction integral taken against the level-n profile of y.
ResidualProfile change_of_variable_residual(const FunctionWithDerivatives& f, const SampledPath& y, int p,
                                            std::span<const std::size_t> eval_indices);
ResidualProfile change_of_variable_residual(const FunctionWithDerivatives& f, const SampledPath& y, int p);

struct NormSelector {
  enum class Kind { Holder, TvPlusSup, Lp, Sup };
  Kind kind = Kind::Sup;
  double param = 0.0;  ///< alpha for Holder, exponent for Lp

  static NormSelector holder(double alpha);
  static NormSelector tv_plus_sup();
  static NormSelector lp(double p);
  static NormSelector sup();
  /// "holder:0.5", "tv_plus_sup", "lp:2", "sup".
  static NormSelector parse(const std::string& s);

  std::string name() const;
  void validate() const;
  /// Grid-level constant K with sup|g| and the L^p grid norm bounded by K ||g||.
  double embedding_constant() const { return 1.0; }
};

/// Grid-restricted norm. The Holder quotient runs over all grid pairs.
double grid_norm(const SampledPath& g, const NormSelector& selector);

/// Grid Holder seminorm max_{i<j} |g_j - g_i| / (t_j - t_i)^alpha.
double holder_seminorm(const SampledPath& g, double alpha);

/// grid_norm(y / xbar).
double transported_norm(const SampledPath& y, const SampledPath& xbar, const NormSelector& selector);

/// C sum_{t_i < t} |g_i|^p (t_{i+1} - t_i) at every grid point: the variation
/// of g x when x has variation C t.
std::vector<double> predicted_profile(const SampledPath& g, double p, double constant);

struct StabilityBound {
  double lhs = 0.0;
  double rhs_l1 = 0.0;
  double rhs_local_lip = 0.0;
};

/// lhs = sup_t |predicted_1(t) - predicted_2(t)|,
/// rhs_l1 = C || |g1|^p - |g2|^p ||_{L^1},
/// rhs_local_lip = p C K^p (||g1||^(p-1) + ||g2||^(p-1)) ||g1 - g2|| in the selector's norm.
StabilityBound stability_bound(const SampledPath& g1, const SampledPath& g2, double p, double constant,
                               const NormSelector& selector = NormSelector::sup());

}  // namespace pvar
