#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "pvar/numeric.hpp"

namespace pvar {

enum class ConstantMethod { Exact, MonteCarlo, Closed };
std::string to_string(ConstantMethod m);
ConstantMethod constant_method_from_string(const std::string& s);

struct ConstantOptions {
  int J = 0;                         ///< truncation depth; 0 picks one from target_tail
  double target_tail = 1e-6;         ///< used when J == 0
  std::uint64_t samples = 1000000;   ///< Monte Carlo sample count
  std::uint64_t seed = 0;
  int strata_depth = 10;             ///< Monte Carlo strata: the first digits
  std::uint64_t max_work = std::uint64_t{1} << 32;  ///< leaves or samples
  unsigned threads = 0;              ///< 0: hardware concurrency
};

/// C_{p,q,a} = E |sum_{j>=1} rho^j eta_{D_j}(a)|^p with D_j iid uniform digits.
struct VariationConstant {
  double value = 0.0;
  ConstantMethod method = ConstantMethod::Exact;
  double error_bound = 0.0;  ///< tail bound plus 3 standard errors (Monte Carlo)
  double tail_bound = 0.0;
  double std_error = 0.0;
  int J = 0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

/// Bound on |E|Z|^p - E|Z_J|^p| where Z_J keeps the first J digits.
double truncation_bound(double p, int q, std::span<const double> a, int J);

/// Smallest J with truncation_bound below `target`.
int truncation_for(double p, int q, std::span<const double> a, double target);

VariationConstant variation_constant(double p, int q, std::span<const double> a, ConstantMethod method,
                                     const ConstantOptions& options = {});

}  // namespace pvar
