#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pvar/path.hpp"

namespace pvar {

/// q-adic Haar weights: sqrt(q/(l(l+1))) for d < l, -sqrt(q l/(l+1)) for
/// d == l, and 0 for d > l. For q = 2 this is (1, -1).
double gamma(int q, int l, int d);

/// All gamma(q, l, d) for l = 1..q-1, d = 0..q-1, plus their running sums
/// G(l, d) = sum_{d' < d} gamma(q, l, d').
class GammaMatrix {
 public:
  explicit GammaMatrix(int q);

  int q() const { return q_; }
  double operator()(int l, int d) const { return g_[index(l, d)]; }
  double prefix(int l, int d) const { return prefix_[static_cast<std::size_t>((l - 1) * (q_ + 1) + d)]; }

 private:
  std::size_t index(int l, int d) const { return static_cast<std::size_t>((l - 1) * q_ + d); }

  int q_;
  std::vector<double> g_;
  std::vector<double> prefix_;
};

/// eta_d(a) = sum_l a_l gamma(q, l, d); `a` has q-1 entries.
double eta(std::span<const double> a, int q, int d);
std::vector<double> eta_table(std::span<const double> a, int q);

/// Haar function psi_{m,k,l}(t), half-open children.
double haar_eval(int q, int m, std::uint64_t k, int l, double t);

/// Schauder function e_{m,k,l}(t) = integral of psi_{m,k,l} over [0, t].
double schauder_eval(int q, int m, std::uint64_t k, int l, double t);

/// e_{m,k,l}(j / q^n) computed from integer offsets, so the zeros at coarse
/// grid points are exact.
double schauder_at_grid(const GammaMatrix& gm, int m, std::uint64_t k, int l, std::uint64_t j, int n);

/// Faber-Schauder coefficients theta_{m,k,l} for m = 0..depth-1 together with
/// the boundary values. Level m stores q^m (q-1) entries, entry (k, l) at
/// k*(q-1) + l-1.
struct CoefficientArray {
  int q = 2;
  double x0 = 0.0;
  double x1 = 0.0;
  std::vector<std::vector<double>> levels;

  int depth() const { return static_cast<int>(levels.size()); }
  int branches() const { return q - 1; }

  double& at(int m, std::uint64_t k, int l) {
    return levels[static_cast<std::size_t>(m)][k * static_cast<std::uint64_t>(q - 1) + static_cast<std::uint64_t>(l - 1)];
  }
  double at(int m, std::uint64_t k, int l) const {
    return levels[static_cast<std::size_t>(m)][k * static_cast<std::uint64_t>(q - 1) + static_cast<std::uint64_t>(l - 1)];
  }

  static CoefficientArray zeros(int q, int depth, const Limits& limits = Limits::from_env());

  /// Throws InvalidArgument on wrong shapes or non-finite entries.
  void validate() const;

  friend bool operator==(const CoefficientArray&, const CoefficientArray&) = default;
};

/// Coefficients of levels 0..n-1 from samples on the level-n q-adic grid.
CoefficientArray analyze(const SampledPath& path);

/// Samples on the level-n q-adic grid. Coefficient levels >= n are never read
/// (their Schauder functions vanish on this grid); missing levels below n
/// count as zero.
SampledPath synthesize(const CoefficientArray& coeffs, int n, const Limits& limits = Limits::from_env());

/// xi_m = q^(-m p/2) sum_{k,l} |theta_{m,k,l}|^p.
double xi(const CoefficientArray& coeffs, double p, int m);

/// The uniform-magnitude form q^(m(1-p/2)) c_m^p.
double xi_uniform(int q, double p, int m, double c_m);

/// sup over stored levels of q^(m(alpha-1/2)) max_{k,l} |theta_{m,k,l}|.
double holder_bound(const CoefficientArray& coeffs, double alpha);

}  // namespace pvar
