#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pvar {

/// Raised when an argument violates an operation's precondition.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a request would exceed a configured work or memory budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Work and memory budgets shared by the grid-producing operations.
struct Limits {
  /// Largest number of partition intervals q^n a grid may hold.
  std::uint64_t max_intervals = std::uint64_t{1} << 24;

  /// Defaults, with PVAR_MAX_INTERVALS overriding max_intervals when set.
  static Limits from_env();
};

/// q^n as an integer; throws BudgetExceeded when it exceeds `cap`.
std::uint64_t checked_pow(int q, int n, std::uint64_t cap);

/// q^n with no budget (throws BudgetExceeded only on 64-bit overflow).
std::uint64_t int_pow(int q, int n);

/// Fixed-order pairwise (cascade) summation. The reduction tree depends only
/// on the length of the input, so results are bit-reproducible.
double pairwise_sum(std::span<const double> xs);

/// |x|^p with exact multiplication for small integer exponents.
double abs_pow(double x, double p);

/// Running sums of `terms` evaluated at the sorted cut indices: out[r] is the
/// sum of terms[0 .. cuts[r]). Each block between consecutive cuts is reduced
/// pairwise, then blocks are accumulated left to right.
std::vector<double> blocked_prefix_sums(std::span<const double> terms,
                                        std::span<const std::size_t> cuts);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes);
std::uint64_t fnv1a(std::span<const double> values);
std::string hex64(std::uint64_t h);

/// SplitMix64 finalizer; used to derive per-index random bits from a seed.
std::uint64_t splitmix64(std::uint64_t x);

}  // namespace pvar
