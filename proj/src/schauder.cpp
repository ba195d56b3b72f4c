#include "pvar/schauder.hpp"

#include <algorithm>
#include <cmath>

namespace pvar {

namespace {

void check_basis_index(int q, int m, std::uint64_t k, int l) {
  if (q < 2) throw InvalidArgument("q must be >= 2");
  if (m < 0) throw InvalidArgument("level m must be >= 0");
  if (l < 1 || l > q - 1) throw InvalidArgument("branch l must lie in 1..q-1");
  if (k >= int_pow(q, m)) throw InvalidArgument("index k out of range for level m");
}

double half_power(int q, int m) { return std::pow(static_cast<double>(q), 0.5 * m); }

}  // namespace

double gamma(int q, int l, int d) {
  if (q < 2) throw InvalidArgument("q must be >= 2");
  if (l < 1 || l > q - 1) throw InvalidArgument("gamma: l must lie in 1..q-1");
  if (d < 0 || d > q - 1) throw InvalidArgument("gamma: d must lie in 0..q-1");
  const double qd = q;
  const double ld = l;
  if (d < l) return std::sqrt(qd / (ld * (ld + 1.0)));
  if (d == l) return -std::sqrt(qd * ld / (ld + 1.0));
  return 0.0;
}

GammaMatrix::GammaMatrix(int q) : q_(q) {
  if (q < 2) throw InvalidArgument("q must be >= 2");
  g_.resize(static_cast<std::size_t>((q - 1) * q));
  prefix_.resize(static_cast<std::size_t>((q - 1) * (q + 1)));
  for (int l = 1; l < q; ++l) {
    double acc = 0.0;
    for (int d = 0; d < q; ++d) {
      g_[index(l, d)] = gamma(q, l, d);
      prefix_[static_cast<std::size_t>((l - 1) * (q + 1) + d)] = acc;
      acc += g_[index(l, d)];
    }
    prefix_[static_cast<std::size_t>((l - 1) * (q + 1) + q)] = acc;
  }
}

double eta(std::span<const double> a, int q, int d) {
  if (a.size() != static_cast<std::size_t>(q - 1)) {
    throw InvalidArgument("eta: branch weights need q-1 = " + std::to_string(q - 1) + " entries");
  }
  double s = 0.0;
  for (int l = 1; l < q; ++l) s += a[static_cast<std::size_t>(l - 1)] * gamma(q, l, d);
  return s;
}

std::vector<double> eta_table(std::span<const double> a, int q) {
  std::vector<double> out(static_cast<std::size_t>(q));
  for (int d = 0; d < q; ++d) out[static_cast<std::size_t>(d)] = eta(a, q, d);
  return out;
}

double haar_eval(int q, int m, std::uint64_t k, int l, double t) {
  check_basis_index(q, m, k, l);
  const double scaled = t * static_cast<double>(int_pow(q, m)) - static_cast<double>(k);
  if (!(scaled >= 0.0 && scaled < 1.0)) return 0.0;
  const int d = std::min(q - 1, static_cast<int>(std::floor(scaled * q)));
  return half_power(q, m) * gamma(q, l, d);
}

double schauder_eval(int q, int m, std::uint64_t k, int l, double t) {
  check_basis_index(q, m, k, l);
  const double scaled = t * static_cast<double>(int_pow(q, m)) - static_cast<double>(k);
  if (!(scaled > 0.0 && scaled < 1.0)) return 0.0;
  const double s = scaled * q;
  const int d = std::min(q - 1, static_cast<int>(std::floor(s)));
  const double r = s - d;
  const GammaMatrix gm(q);
  return half_power(q, m) / static_cast<double>(int_pow(q, m + 1)) *
         (gm.prefix(l, d) + r * gm(l, d));
}

double schauder_at_grid(const GammaMatrix& gm, int m, std::uint64_t k, int l, std::uint64_t j, int n) {
  const int q = gm.q();
  check_basis_index(q, m, k, l);
  if (n <= m) return 0.0;
  const std::uint64_t span = int_pow(q, n - m);
  const std::uint64_t start = k * span;
  if (j <= start || j >= start + span) return 0.0;
  const std::uint64_t u = j - start;
  const std::uint64_t c = span / static_cast<std::uint64_t>(q);
  const int d = static_cast<int>(u / c);
  const auto r = static_cast<double>(u % c);
  return half_power(q, m) / static_cast<double>(int_pow(q, n)) *
         (static_cast<double>(c) * gm.prefix(l, d) + r * gm(l, d));
}

CoefficientArray CoefficientArray::zeros(int q, int depth, const Limits& limits) {
  if (q < 2) throw InvalidArgument("q must be >= 2");
  if (depth < 0) throw InvalidArgument("coefficient depth must be >= 0");
  CoefficientArray c{q, 0.0, 0.0, {}};
  for (int m = 0; m < depth; ++m) {
    const std::uint64_t count = checked_pow(q, m, limits.max_intervals);
    c.levels.emplace_back(count * static_cast<std::uint64_t>(q - 1), 0.0);
  }
  return c;
}

void CoefficientArray::validate() const {
  if (q < 2) throw InvalidArgument("coefficient array: q must be >= 2");
  if (!std::isfinite(x0) || !std::isfinite(x1)) {
    throw InvalidArgument("coefficient array: boundary values must be finite");
  }
  for (int m = 0; m < depth(); ++m) {
    const auto& lv = levels[static_cast<std::size_t>(m)];
    if (lv.size() != int_pow(q, m) * static_cast<std::uint64_t>(q - 1)) {
      throw InvalidArgument("coefficient array: level " + std::to_string(m) + " has " +
                            std::to_string(lv.size()) + " entries, expected q^m (q-1)");
    }
    for (double v : lv) {
      if (!std::isfinite(v)) {
        throw InvalidArgument("coefficient array: non-finite entry at level " + std::to_string(m));
      }
    }
  }
}

CoefficientArray analyze(const SampledPath& path) {
  const int q = path.q();
  const int n = path.level();
  if (n < 1) throw InvalidArgument("analyze: need a grid of level >= 1");
  if (!path.grid.is_qadic()) throw InvalidArgument("analyze: input grid is not q-adic");
  if (path.values.size() != path.grid.points.size()) {
    throw InvalidArgument("analyze: values and grid differ in length");
  }
  const GammaMatrix gm(q);
  CoefficientArray c = CoefficientArray::zeros(q, n, Limits{path.grid.points.size()});
  c.x0 = path.values.front();
  c.x1 = path.values.back();
  const auto& x = path.values;
  std::vector<double> incr(static_cast<std::size_t>(q));
  for (int m = 0; m < n; ++m) {
    const std::uint64_t span = int_pow(q, n - m);
    const std::uint64_t child = span / static_cast<std::uint64_t>(q);
    const double scale = half_power(q, m);
    const std::uint64_t count = int_pow(q, m);
    for (std::uint64_t k = 0; k < count; ++k) {
      const std::uint64_t base = k * span;
      if (q == 2) {
        c.at(m, k, 1) = scale * (2.0 * x[base + child] - x[base] - x[base + span]);
        continue;
      }
      for (int d = 0; d < q; ++d) {
        const std::uint64_t left = base + static_cast<std::uint64_t>(d) * child;
        incr[static_cast<std::size_t>(d)] = x[left + child] - x[left];
      }
      for (int l = 1; l < q; ++l) {
        double s = 0.0;
        for (int d = 0; d < q; ++d) s += gm(l, d) * incr[static_cast<std::size_t>(d)];
        c.at(m, k, l) = scale * s;
      }
    }
  }
  return c;
}

SampledPath synthesize(const CoefficientArray& coeffs, int n, const Limits& limits) {
  coeffs.validate();
  if (n < 0) throw InvalidArgument("synthesize: level must be >= 0");
  const int q = coeffs.q;
  const GammaMatrix gm(q);
  SampledPath path{qadic_grid(q, n, limits), {}};
  const std::uint64_t count = int_pow(q, n);
  path.values.resize(count + 1);
  const auto qu = static_cast<std::uint64_t>(q);
  const double inv = 1.0 / static_cast<double>(count);
  std::vector<double> scale(static_cast<std::size_t>(n));
  for (int m = 0; m < n; ++m) scale[static_cast<std::size_t>(m)] = half_power(q, m) * inv;
  for (std::uint64_t j = 0; j <= count; ++j) {
    const double t = path.grid.points[j];
    double v = (1.0 - t) * coeffs.x0 + t * coeffs.x1;
    std::uint64_t span = count;
    const int stored = std::min(n, coeffs.depth());
    for (int m = 0; m < stored; ++m, span /= qu) {
      const std::uint64_t u = j % span;
      if (u == 0) continue;
      const std::uint64_t k = j / span;
      const std::uint64_t c = span / qu;
      const int d = static_cast<int>(u / c);
      const auto r = static_cast<double>(u % c);
      const auto cd = static_cast<double>(c);
      double s = 0.0;
      for (int l = 1; l < q; ++l) s += coeffs.at(m, k, l) * (cd * gm.prefix(l, d) + r * gm(l, d));
      v += scale[static_cast<std::size_t>(m)] * s;
    }
    path.values[j] = v;
  }
  path.meta["truncation_level"] = n;
  return path;
}

double xi(const CoefficientArray& coeffs, double p, int m) {
  if (!(p > 1.0)) throw InvalidArgument("xi: p must be > 1");
  if (m < 0 || m >= coeffs.depth()) throw InvalidArgument("xi: level not stored");
  const auto& lv = coeffs.levels[static_cast<std::size_t>(m)];
  std::vector<double> terms(lv.size());
  std::transform(lv.begin(), lv.end(), terms.begin(), [p](double v) { return abs_pow(v, p); });
  return std::pow(static_cast<double>(coeffs.q), -0.5 * m * p) * pairwise_sum(terms);
}

double xi_uniform(int q, double p, int m, double c_m) {
  if (!(p > 1.0)) throw InvalidArgument("xi: p must be > 1");
  return std::pow(static_cast<double>(q), m * (1.0 - 0.5 * p)) * abs_pow(c_m, p);
}

double holder_bound(const CoefficientArray& coeffs, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("holder_bound: alpha must lie in (0,1)");
  double best = 0.0;
  for (int m = 0; m < coeffs.depth(); ++m) {
    double mx = 0.0;
    for (double v : coeffs.levels[static_cast<std::size_t>(m)]) mx = std::max(mx, std::fabs(v));
    best = std::max(best, std::pow(static_cast<double>(coeffs.q), m * (alpha - 0.5)) * mx);
  }
  return best;
}

}  // namespace pvar
