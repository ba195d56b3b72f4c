#include "pvar/calculus.hpp"

#include <algorithm>
#include <cmath>

namespace pvar {

namespace {

double factorial(int k) {
  double r = 1.0;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

void require_even(int p) {
  if (p < 2 || p % 2 != 0) {
    throw InvalidArgument("compensated sums need an even integer p; odd or fractional p is not supported");
  }
}

}  // namespace

FunctionWithDerivatives FunctionWithDerivatives::polynomial(std::vector<double> coeffs, int order) {
  if (order < 0) throw InvalidArgument("derivative order must be >= 0");
  FunctionWithDerivatives f;
  f.name = "polynomial";
  std::vector<double> c = std::move(coeffs);
  for (int k = 0; k <= order; ++k) {
    f.d.emplace_back([c](double y) {
      double v = 0.0;
      for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * y + *it;
      return v;
    });
    std::vector<double> next;
    for (std::size_t i = 1; i < c.size(); ++i) next.push_back(c[i] * static_cast<double>(i));
    c = std::move(next);
  }
  return f;
}

FunctionWithDerivatives FunctionWithDerivatives::exponential(int order) {
  FunctionWithDerivatives f;
  f.name = "exp";
  for (int k = 0; k <= order; ++k) f.d.emplace_back([](double y) { return std::exp(y); });
  return f;
}

FunctionWithDerivatives FunctionWithDerivatives::sine(int order) {
  FunctionWithDerivatives f;
  f.name = "sin";
  for (int k = 0; k <= order; ++k) {
    switch (k % 4) {
      case 0: f.d.emplace_back([](double y) { return std::sin(y); }); break;
      case 1: f.d.emplace_back([](double y) { return std::cos(y); }); break;
      case 2: f.d.emplace_back([](double y) { return -std::sin(y); }); break;
      default: f.d.emplace_back([](double y) { return -std::cos(y); }); break;
    }
  }
  return f;
}

DerivativeCheck check_derivatives(const FunctionWithDerivatives& f, std::span<const double> points, double h,
                                  double tol) {
  DerivativeCheck out;
  for (int k = 1; k <= f.order(); ++k) {
    for (double y : points) {
      const double fd = (f(k - 1, y + h) - f(k - 1, y - h)) / (2.0 * h);
      const double exact = f(k, y);
      const double err = std::fabs(fd - exact) / std::max(1.0, std::fabs(exact));
      if (err > out.max_rel_error) {
        out.max_rel_error = err;
        out.worst_order = k;
      }
    }
  }
  out.pass = out.max_rel_error <= tol;
  return out;
}

std::vector<double> follmer_sum(const FunctionWithDerivatives& f, const SampledPath& y, int p,
                                std::span<const std::size_t> eval_indices) {
  require_even(p);
  if (f.order() < p - 1) throw InvalidArgument("compensated sum needs derivatives up to order p-1");
  const auto& v = y.values;
  std::vector<double> terms(v.size() - 1);
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    const double delta = v[i + 1] - v[i];
    double s = 0.0;
    double power = 1.0;
    for (int k = 1; k < p; ++k) {
      power *= delta;
      s += f(k, v[i]) / factorial(k) * power;
    }
    terms[i] = s;
  }
  return blocked_prefix_sums(terms, eval_indices);
}

ResidualProfile change_of_variable_residual(const FunctionWithDerivatives& f, const SampledPath& y, int p,
                                            std::span<const std::size_t> eval_indices) {
  require_even(p);
  if (f.order() < p) throw InvalidArgument("change-of-variable residual needs derivatives up to order p");
  const auto& v = y.values;
  // Each term is f(y_{i+1}) - f(y_i) minus its compensated sum and correction;
  // summing these local remainders equals the telescoped definition.
  std::vector<double> terms(v.size() - 1);
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    const double delta = v[i + 1] - v[i];
    double s = f(0, v[i + 1]) - f(0, v[i]);
    double power = 1.0;
    for (int k = 1; k < p; ++k) {
      power *= delta;
      s -= f(k, v[i]) / factorial(k) * power;
    }
    s -= f(p, v[i]) / factorial(p) * abs_pow(delta, p);
    terms[i] = s;
  }
  ResidualProfile out;
  out.level = y.level();
  out.residual = blocked_prefix_sums(terms, eval_indices);
  for (std::size_t i : eval_indices) out.t.push_back(y.grid.points[i]);
  for (double r : out.residual) out.sup = std::max(out.sup, std::fabs(r));
  return out;
}

ResidualProfile change_of_variable_residual(const FunctionWithDerivatives& f, const SampledPath& y, int p) {
  const auto idx = all_indices(y.grid);
  return change_of_variable_residual(f, y, p, idx);
}

NormSelector NormSelector::holder(double alpha) { return {Kind::Holder, alpha}; }
NormSelector NormSelector::tv_plus_sup() { return {Kind::TvPlusSup, 0.0}; }
NormSelector NormSelector::lp(double p) { return {Kind::Lp, p}; }
NormSelector NormSelector::sup() { return {Kind::Sup, 0.0}; }

NormSelector NormSelector::parse(const std::string& s) {
  const auto colon = s.find(':');
  const std::string head = s.substr(0, colon);
  double param = 0.0;
  if (colon != std::string::npos) {
    try {
      param = std::stod(s.substr(colon + 1));
    } catch (const std::exception&) {
      throw InvalidArgument("bad norm parameter in '" + s + "'");
    }
  }
  NormSelector sel;
  if (head == "holder") {
    sel = holder(colon == std::string::npos ? 0.5 : param);
  } else if (head == "tv_plus_sup") {
    sel = tv_plus_sup();
  } else if (head == "lp") {
    sel = lp(colon == std::string::npos ? 2.0 : param);
  } else if (head == "sup") {
    sel = sup();
  } else {
    throw InvalidArgument("unknown norm '" + s + "' (expected holder:a, tv_plus_sup, lp:p or sup)");
  }
  sel.validate();
  return sel;
}

std::string NormSelector::name() const {
  switch (kind) {
    case Kind::Holder: return "holder:" + std::to_string(param);
    case Kind::TvPlusSup: return "tv_plus_sup";
    case Kind::Lp: return "lp:" + std::to_string(param);
    case Kind::Sup: return "sup";
  }
  return "unknown";
}

void NormSelector::validate() const {
  if (kind == Kind::Holder && !(param > 0.0 && param < 1.0)) throw InvalidArgument("holder exponent must lie in (0,1)");
  if (kind == Kind::Lp && !(param >= 1.0)) throw InvalidArgument("lp exponent must be >= 1");
}

double holder_seminorm(const SampledPath& g, double alpha) {
  const auto& t = g.grid.points;
  const auto& v = g.values;
  const auto n = static_cast<std::uint64_t>(t.size());
  if (n * n > (std::uint64_t{1} << 32)) {
    throw BudgetExceeded("grid Holder quotient over " + std::to_string(n) + " points exceeds the pair budget");
  }
  double best = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    for (std::size_t j = i + 1; j < t.size(); ++j) {
      best = std::max(best, std::fabs(v[j] - v[i]) / std::pow(t[j] - t[i], alpha));
    }
  }
  return best;
}

double grid_norm(const SampledPath& g, const NormSelector& selector) {
  selector.validate();
  if (g.values.size() != g.grid.points.size() || g.values.empty()) throw InvalidArgument("grid_norm: malformed path");
  const auto& t = g.grid.points;
  const auto& v = g.values;
  switch (selector.kind) {
    case NormSelector::Kind::Sup: return g.sup_norm();
    case NormSelector::Kind::Holder: return std::fabs(v.front()) + holder_seminorm(g, selector.param);
    case NormSelector::Kind::TvPlusSup: {
      double tv = 0.0;
      for (std::size_t i = 1; i < v.size(); ++i) tv += std::fabs(v[i] - v[i - 1]);
      return g.sup_norm() + tv;
    }
    case NormSelector::Kind::Lp: {
      double s = 0.0;
      for (std::size_t i = 0; i + 1 < v.size(); ++i) s += abs_pow(v[i], selector.param) * (t[i + 1] - t[i]);
      return std::pow(s, 1.0 / selector.param);
    }
  }
  return 0.0;
}

double transported_norm(const SampledPath& y, const SampledPath& xbar, const NormSelector& selector) {
  require_same_grid(y, xbar, "transported_norm");
  SampledPath g = y;
  for (std::size_t i = 0; i < g.values.size(); ++i) {
    if (!(xbar.values[i] > 0.0)) throw InvalidArgument("transported_norm: reference must be strictly positive");
    g.values[i] = y.values[i] / xbar.values[i];
  }
  return grid_norm(g, selector);
}

std::vector<double> predicted_profile(const SampledPath& g, double p, double constant) {
  const auto& t = g.grid.points;
  std::vector<double> out(t.size(), 0.0);
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    acc += abs_pow(g.values[i], p) * (t[i + 1] - t[i]);
    out[i + 1] = constant * acc;
  }
  return out;
}

StabilityBound stability_bound(const SampledPath& g1, const SampledPath& g2, double p, double constant,
                               const NormSelector& selector) {
  require_same_grid(g1, g2, "stability_bound");
  if (!(p > 1.0)) throw InvalidArgument("stability_bound: p must be > 1");
  const auto& t = g1.grid.points;
  // Sequential sums of the signed and absolute terms, so |partial| <= total
  // survives rounding.
  double partial = 0.0;
  double sup_partial = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    const double w = (abs_pow(g1.values[i], p) - abs_pow(g2.values[i], p)) * (t[i + 1] - t[i]);
    partial += w;
    total += std::fabs(w);
    sup_partial = std::max(sup_partial, std::fabs(partial));
  }
  StabilityBound out;
  out.lhs = constant * sup_partial;
  out.rhs_l1 = constant * total;
  SampledPath diff = g1;
  for (std::size_t i = 0; i < diff.values.size(); ++i) diff.values[i] = g1.values[i] - g2.values[i];
  const double k = selector.embedding_constant();
  out.rhs_local_lip = p * constant * std::pow(k, p) *
                      (std::pow(grid_norm(g1, selector), p - 1.0) + std::pow(grid_norm(g2, selector), p - 1.0)) *
                      grid_norm(diff, selector);
  return out;
}

}  // namespace pvar
