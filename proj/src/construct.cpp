#include "pvar/construct.hpp"

#include <algorithm>
#include <cmath>

#include "pvar/io.hpp"

namespace pvar {

double UniformMagnitudeSpec::c(int m) const {
  if (!c_values.empty()) return c_values.at(static_cast<std::size_t>(m));
  return std::pow(static_cast<double>(q), m * (0.5 - 1.0 / p));
}

double UniformMagnitudeSpec::y(int m) const { return std::pow(static_cast<double>(q), m * (1.0 / p - 0.5)) * c(m); }

double UniformMagnitudeSpec::rho() const { return std::pow(static_cast<double>(q), -(1.0 - 1.0 / p)); }

int UniformMagnitudeSpec::sigma(int m, std::uint64_t k) const {
  switch (signs) {
    case SignRule::Plus: return 1;
    case SignRule::Seeded: {
      const std::uint64_t heap = int_pow(q, m) + k;
      return (splitmix64(splitmix64(seed) ^ heap) >> 63) != 0 ? -1 : 1;
    }
    case SignRule::Explicit:
      return explicit_signs.at(static_cast<std::size_t>(m)).at(static_cast<std::size_t>(k));
  }
  return 1;
}

std::vector<double> UniformMagnitudeSpec::branch() const {
  if (!a.empty()) return a;
  return std::vector<double>(static_cast<std::size_t>(q - 1), 1.0);
}

void UniformMagnitudeSpec::validate() const {
  if (q < 2) throw InvalidArgument("spec: q must be >= 2");
  if (!(p > 1.0) || !std::isfinite(p)) throw InvalidArgument("spec: p must be a finite number > 1");
  if (levels < 1) throw InvalidArgument("spec: levels must be >= 1");
  if (!a.empty()) {
    if (a.size() != static_cast<std::size_t>(q - 1)) {
      throw InvalidArgument("spec: branch weights a need q-1 = " + std::to_string(q - 1) + " entries");
    }
    if (std::all_of(a.begin(), a.end(), [](double v) { return v == 0.0; })) {
      throw InvalidArgument("spec: branch weights a must not all vanish");
    }
    if (!std::all_of(a.begin(), a.end(), [](double v) { return std::isfinite(v); })) {
      throw InvalidArgument("spec: branch weights must be finite");
    }
  }
  if (q >= 3 && signs != SignRule::Plus) {
    throw InvalidArgument("spec: for q >= 3 coefficients are c_m a_l; only plus signs are supported");
  }
  if (!c_values.empty()) {
    if (c_values.size() < static_cast<std::size_t>(levels)) {
      throw InvalidArgument("spec: c_rule lists " + std::to_string(c_values.size()) + " magnitudes for " +
                            std::to_string(levels) + " levels");
    }
    if (!std::all_of(c_values.begin(), c_values.end(), [](double v) { return std::isfinite(v); })) {
      throw InvalidArgument("spec: magnitudes must be finite");
    }
  }
  if (signs == SignRule::Explicit) {
    if (explicit_signs.size() < static_cast<std::size_t>(levels)) {
      throw InvalidArgument("spec: explicit signs must cover every level");
    }
    for (int m = 0; m < levels; ++m) {
      const auto& row = explicit_signs[static_cast<std::size_t>(m)];
      if (row.size() != int_pow(q, m)) {
        throw InvalidArgument("spec: explicit signs at level " + std::to_string(m) + " need q^m entries");
      }
      for (int s : row) {
        if (s != 1 && s != -1) throw InvalidArgument("spec: explicit signs must be +1 or -1");
      }
    }
  }
}

CoefficientArray build_reference(const UniformMagnitudeSpec& spec, const Limits& limits) {
  spec.validate();
  CoefficientArray c = CoefficientArray::zeros(spec.q, spec.levels, limits);
  const auto a = spec.branch();
  for (int m = 0; m < spec.levels; ++m) {
    const double cm = spec.c(m);
    const std::uint64_t count = int_pow(spec.q, m);
    for (std::uint64_t k = 0; k < count; ++k) {
      const double s = cm * spec.sigma(m, k);
      for (int l = 1; l < spec.q; ++l) c.at(m, k, l) = s * a[static_cast<std::size_t>(l - 1)];
    }
  }
  return c;
}

SampledPath reference_path(const UniformMagnitudeSpec& spec, int n, const Limits& limits) {
  if (n < 0 || n > spec.levels) {
    throw InvalidArgument("reference path level " + std::to_string(n) + " exceeds the spec's " +
                          std::to_string(spec.levels) + " levels");
  }
  UniformMagnitudeSpec truncated = spec;
  truncated.levels = std::max(1, n);
  if (!truncated.c_values.empty()) truncated.c_values.resize(static_cast<std::size_t>(truncated.levels));
  if (truncated.signs == SignRule::Explicit) truncated.explicit_signs.resize(static_cast<std::size_t>(truncated.levels));
  SampledPath path = synthesize(build_reference(truncated, limits), n, limits);
  const Json sj = to_json(spec);
  path.meta["spec"] = sj;
  path.meta["spec_hash"] = hex64(fnv1a(sj.dump()));
  path.meta["seed"] = spec.seed;
  return path;
}

std::vector<int> level_signs(const UniformMagnitudeSpec& spec, int n, std::uint64_t k) {
  if (spec.q != 2) throw InvalidArgument("level signs are defined for q = 2");
  const DigitVector d = digits(k, n, 2);
  std::vector<int> eps(static_cast<std::size_t>(n));
  for (int j = 1; j <= n; ++j) {
    const int m = n - j;
    const int haar = d[static_cast<std::size_t>(j - 1)] == 0 ? 1 : -1;
    eps[static_cast<std::size_t>(j - 1)] = spec.sigma(m, ancestor_index(m, n, k, 2)) * haar;
  }
  return eps;
}

IncrementDecomposition increment_decomposition(const UniformMagnitudeSpec& spec, const SampledPath& path,
                                               std::uint64_t k) {
  spec.validate();
  const int n = path.level();
  const int q = spec.q;
  if (path.q() != q) throw InvalidArgument("increment decomposition: path and spec disagree on q");
  if (n < 1 || n > spec.levels) throw InvalidArgument("increment decomposition: level out of range");
  if (k >= int_pow(q, n)) throw InvalidArgument("increment decomposition: k out of range");
  IncrementDecomposition out;
  out.digits = digits(k, n, q);
  const auto eta_d = eta_table(spec.branch(), q);
  const double rho = spec.rho();
  double series = 0.0;
  for (int j = 1; j <= n; ++j) {
    const int m = n - j;
    const int sg = spec.sigma(m, ancestor_index(m, n, k, q));
    const int d = out.digits[static_cast<std::size_t>(j - 1)];
    series += std::pow(rho, j) * spec.y(m) * sg * eta_d[static_cast<std::size_t>(d)];
  }
  out.series_value = series;
  out.synthesized_value = std::pow(static_cast<double>(q), n / spec.p) * (path.values[k + 1] - path.values[k]);
  if (q == 2) out.signs = level_signs(spec, n, k);
  return out;
}

IncrementDecomposition increment_decomposition(const UniformMagnitudeSpec& spec, int n, std::uint64_t k) {
  return increment_decomposition(spec, reference_path(spec, n), k);
}

SignMatrixReport sign_matrix(const UniformMagnitudeSpec& spec, int n, const Limits& limits) {
  spec.validate();
  if (spec.q != 2) throw InvalidArgument("sign matrix is defined for q = 2");
  if (n < 1 || n > spec.levels) throw InvalidArgument("sign matrix: level out of range");
  const std::uint64_t rows = checked_pow(2, n, std::min<std::uint64_t>(limits.max_intervals, 1u << 20));
  SignMatrixReport rep;
  rep.n = n;
  rep.rows = rows;
  std::vector<bool> seen(rows, false);
  for (std::uint64_t k = 0; k < rows; ++k) {
    std::uint64_t pattern = 0;
    for (int j = 1; j <= n; ++j) {
      const int m = n - j;
      const int haar = ((k >> (j - 1)) & 1u) == 0 ? 1 : -1;
      if (spec.sigma(m, k >> j) * haar < 0) pattern |= std::uint64_t{1} << (j - 1);
    }
    if (!seen[pattern]) {
      seen[pattern] = true;
      ++rep.distinct;
    }
  }
  rep.bijection = rep.distinct == rows;

  const double a1 = spec.branch().front();
  const double rho = spec.rho();
  std::vector<double> w(static_cast<std::size_t>(n));
  for (int j = 1; j <= n; ++j) w[static_cast<std::size_t>(j - 1)] = std::pow(rho, j) * spec.y(n - j) * a1;
  std::vector<double> terms(rows);
  for (std::uint64_t e = 0; e < rows; ++e) {
    double v = 0.0;
    for (int j = 0; j < n; ++j) v += ((e >> j) & 1u) != 0 ? -w[static_cast<std::size_t>(j)] : w[static_cast<std::size_t>(j)];
    terms[e] = abs_pow(v, spec.p);
  }
  rep.expectation = pairwise_sum(terms) / static_cast<double>(rows);
  rep.level_value = level_sum(reference_path(spec, n, limits), spec.p);
  rep.gap = std::fabs(rep.level_value - rep.expectation);
  return rep;
}

double block_equipartition_gap(const SampledPath& path, double p, int m) {
  const int n = path.level();
  if (m < 0 || m > n) throw InvalidArgument("equipartition: block level must lie in [0, n]");
  const auto terms = variation_terms(path, p);
  const double total = pairwise_sum(terms);
  const std::uint64_t blocks = int_pow(path.q(), m);
  const std::uint64_t width = int_pow(path.q(), n - m);
  const double share = total / static_cast<double>(blocks);
  double gap = 0.0;
  for (std::uint64_t r = 0; r < blocks; ++r) {
    const double v = pairwise_sum(std::span<const double>(terms).subspan(r * width, width));
    gap = std::max(gap, std::fabs(v - share));
  }
  return gap;
}

TransportResult transport_multiply(const SampledPath& g, const SampledPath& x, const VariationProfile& x_profile,
                                   double p) {
  require_same_grid(g, x, "transport_multiply");
  if (!(p > 1.0)) throw InvalidArgument("transport_multiply: p must be > 1");
  if (x_profile.p != p) throw InvalidArgument("transport_multiply: profile exponent differs from p");
  TransportResult out{x, x_profile};
  SampledPath weight = g;
  for (std::size_t i = 0; i < g.values.size(); ++i) {
    out.y.values[i] = g.values[i] * x.values[i];
    weight.values[i] = abs_pow(g.values[i], p);
  }
  out.y.meta["transport"] = true;
  out.predicted.values = stieltjes_against_profile(weight, x_profile);
  return out;
}

TargetFamily TargetFamily::linear() {
  return {"linear", [](double t) { return t; }, [](double) { return 1.0; }};
}

TargetFamily TargetFamily::exponential(double a) {
  return {"exp", [a](double t) { return std::expm1(a * t); }, [a](double t) { return a * std::exp(a * t); }};
}

TargetFamily TargetFamily::logarithmic(double b) {
  if (!(b > -1.0)) throw InvalidArgument("log target needs b > -1");
  return {"log", [b](double t) { return std::log1p(b * t); }, [b](double t) { return b / (1.0 + b * t); }};
}

TargetFamily TargetFamily::by_name(const std::string& name, double param) {
  if (name == "linear" || name == "t") return linear();
  if (name == "exp") return exponential(param);
  if (name == "log") return logarithmic(param);
  throw InvalidArgument("unknown target '" + name + "' (expected linear, exp or log)");
}

RecipeResult recipe(const SampledPath& hprime, double p, const UniformMagnitudeSpec& spec, double constant,
                    const Limits& limits) {
  if (!(p > 1.0)) throw InvalidArgument("recipe: p must be > 1");
  if (spec.p != p) throw InvalidArgument("recipe: spec exponent differs from p");
  if (!(constant > 0.0) || !std::isfinite(constant)) throw InvalidArgument("recipe: constant must be positive");
  if (!hprime.grid.is_qadic() || hprime.q() != spec.q) {
    throw InvalidArgument("recipe: h' must be sampled on the spec's q-adic grid");
  }
  for (std::size_t i = 0; i < hprime.values.size(); ++i) {
    const double v = hprime.values[i];
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw InvalidArgument("recipe: h' sample " + std::to_string(i) + " is negative or not finite");
    }
  }
  const int n = hprime.level();
  RecipeResult out{{}, reference_path(spec, n, limits), hprime, {}, {}, false};
  out.g.meta = Json::object();
  for (double& v : out.g.values) v = std::pow(v / constant, 1.0 / p);
  out.y = out.x;
  for (std::size_t i = 0; i < out.y.values.size(); ++i) out.y.values[i] = out.g.values[i] * out.x.values[i];
  out.y.meta["recipe"] = {{"constant", constant}, {"p", p}};

  const auto& t = hprime.grid.points;
  out.target.assign(t.size(), 0.0);
  for (std::size_t i = 1; i < t.size(); ++i) {
    out.target[i] = out.target[i - 1] + 0.5 * (hprime.values[i - 1] + hprime.values[i]) * (t[i] - t[i - 1]);
  }

  if (n >= 3) {
    std::vector<double> sums;
    for (int m = 0; m <= n; ++m) sums.push_back(level_sum(restrict_to_level(out.g, m), p));
    out.vanishing = classify_trend(sums, static_cast<double>(spec.q));
    out.vanishing.p = p;
    out.warning = out.vanishing.trend != Trend::Vanishing;
  }
  return out;
}

SampledPath shifted_reference(const SampledPath& x, double shift) {
  const double sup = x.sup_norm();
  if (!(shift > sup)) {
    throw InvalidArgument("shift must exceed sup|x| = " + std::to_string(sup));
  }
  SampledPath out = x;
  for (double& v : out.values) v += shift;
  out.meta["shift"] = shift;
  return out;
}

SampledPath bernstein(const std::function<double(double)>& z, int n, const PartitionGrid& grid) {
  if (n < 1) throw InvalidArgument("bernstein: degree must be >= 1");
  std::vector<double> coef(static_cast<std::size_t>(n + 1));
  for (int k = 0; k <= n; ++k) coef[static_cast<std::size_t>(k)] = z(static_cast<double>(k) / n);
  SampledPath out{grid, std::vector<double>(grid.points.size())};
  std::vector<double> b(coef.size());
  for (std::size_t i = 0; i < grid.points.size(); ++i) {
    const double t = grid.points[i];
    const double s = 1.0 - t;
    b = coef;
    for (int r = 1; r <= n; ++r) {
      for (int k = 0; k + r <= n; ++k) {
        b[static_cast<std::size_t>(k)] = s * b[static_cast<std::size_t>(k)] + t * b[static_cast<std::size_t>(k + 1)];
      }
    }
    out.values[i] = b.front();
  }
  out.meta["bernstein_degree"] = n;
  return out;
}

SampledPath bernstein(const SampledPath& z, int n) {
  if (n < 1) throw InvalidArgument("bernstein: degree must be >= 1");
  std::vector<double> nodes(static_cast<std::size_t>(n + 1));
  for (int k = 0; k <= n; ++k) {
    nodes[static_cast<std::size_t>(k)] = z.values[grid_index(z.grid, static_cast<double>(k) / n)];
  }
  return bernstein([&](double t) { return nodes[static_cast<std::size_t>(std::lround(t * n))]; }, n, z.grid);
}

CoefficientArray splice(const CoefficientArray& x, const CoefficientArray& y, int n) {
  if (x.q != y.q) throw InvalidArgument("splice: arrays have different q");
  if (n < 0) throw InvalidArgument("splice: crossover level must be >= 0");
  if (x.depth() < n || y.depth() < n) {
    throw InvalidArgument("splice: both arrays need at least " + std::to_string(n) + " levels");
  }
  CoefficientArray out = y;
  out.x0 = x.x0;
  out.x1 = x.x1;
  for (int m = 0; m < n; ++m) out.levels[static_cast<std::size_t>(m)] = x.levels[static_cast<std::size_t>(m)];
  return out;
}

}  // namespace pvar
