#pragma once

// Slow, direct reference implementations. Nothing here shares code with the
// library beyond the data types.

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

namespace oracle {

inline double pow_int(double b, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

// gamma written out from the definition.
inline double gamma(int q, int l, int d) {
  if (d < l) return std::sqrt(static_cast<double>(q) / (l * (l + 1.0)));
  if (d == l) return -std::sqrt(static_cast<double>(q) * l / (l + 1.0));
  return 0.0;
}

inline double haar(int q, int m, std::uint64_t k, int l, double t) {
  const double qm = pow_int(q, m);
  const double left = k / qm;
  const double right = (k + 1) / qm;
  if (t < left || t >= right) return 0.0;
  for (int d = 0; d < q; ++d) {
    const double a = left + d / (qm * q);
    const double b = left + (d + 1) / (qm * q);
    if (t >= a && t < b) return std::sqrt(qm) * gamma(q, l, d);
  }
  return 0.0;
}

// Midpoint quadrature of the Haar function; exact up to rounding when the
// step divides every child interval.
inline double schauder(int q, int m, std::uint64_t k, int l, double t, int steps = 1 << 14) {
  const double h = t / steps;
  double s = 0.0;
  for (int i = 0; i < steps; ++i) s += haar(q, m, k, l, (i + 0.5) * h);
  return s * h;
}

// sum_j |x(t_{j+1} ^ t) - x(t_j ^ t)|^p with explicit clamping.
inline double pvar(const std::vector<double>& pts, const std::vector<double>& vals, double p, double t,
                   const std::function<double(double)>& x_at) {
  double s = 0.0;
  for (std::size_t j = 0; j + 1 < pts.size(); ++j) {
    const double a = std::min(pts[j], t);
    const double b = std::min(pts[j + 1], t);
    const double xa = a == pts[j] ? vals[j] : x_at(a);
    const double xb = b == pts[j + 1] ? vals[j + 1] : x_at(b);
    s += std::pow(std::fabs(xb - xa), p);
  }
  return s;
}

// E|sum_{j=1}^J rho^j eps_j|^p over all 2^J Rademacher strings, by brute force.
inline double rademacher_moment(double p, double rho, int J) {
  const std::uint64_t n = std::uint64_t{1} << J;
  double s = 0.0;
  for (std::uint64_t e = 0; e < n; ++e) {
    double z = 0.0;
    for (int j = 1; j <= J; ++j) z += ((e >> (j - 1)) & 1u ? -1.0 : 1.0) * std::pow(rho, j);
    s += std::pow(std::fabs(z), p);
  }
  return s / static_cast<double>(n);
}

inline double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Bernstein polynomial from the binomial formula.
inline double bernstein(const std::function<double(double)>& z, int n, double t) {
  double s = 0.0;
  for (int k = 0; k <= n; ++k) s += z(static_cast<double>(k) / n) * binomial(n, k) * std::pow(t, k) * std::pow(1.0 - t, n - k);
  return s;
}

}  // namespace oracle
