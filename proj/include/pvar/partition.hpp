#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pvar/numeric.hpp"

namespace pvar {

/// One level of a partition sequence: q^level + 1 strictly increasing points
/// from 0 to 1.
struct PartitionGrid {
  int q = 2;
  int level = 0;
  std::vector<double> points;

  std::size_t intervals() const { return points.empty() ? 0 : points.size() - 1; }

  /// True when points[i] == i / q^level exactly (the values qadic_grid emits).
  bool is_qadic() const;

  /// Mesh: the longest interval.
  double mesh() const;

  friend bool operator==(const PartitionGrid&, const PartitionGrid&) = default;
};

/// The level-n q-adic grid {i / q^n}. Points are computed as correctly
/// rounded integer ratios, so grids of different levels agree bitwise on
/// shared points.
PartitionGrid qadic_grid(int q, int n, const Limits& limits = Limits::from_env());

/// Base-q digits d_1..d_n of k, least significant first.
using DigitVector = std::vector<int>;

DigitVector digits(std::uint64_t k, int n, int q);
std::uint64_t from_digits(const DigitVector& d, int q);

/// Index of the level-m interval containing level-n interval k, i.e.
/// floor(k / q^(n-m)). m == n returns k itself.
std::uint64_t ancestor_index(int m, int n, std::uint64_t k, int q);

/// A finite prefix (levels 0..N) of a q-refining partition sequence.
struct RefiningTable {
  int q = 2;
  std::vector<PartitionGrid> levels;

  int top_level() const { return static_cast<int>(levels.size()) - 1; }

  /// The q-adic sequence itself.
  static RefiningTable qadic(int q, int N, const Limits& limits = Limits::from_env());

  /// t_i^n = warp(i / q^n) for an increasing warp with warp(0)=0, warp(1)=1.
  /// Nesting holds exactly because i/q^n and qi/q^(n+1) round identically.
  template <class Warp>
  static RefiningTable warped(int q, int N, Warp&& warp,
                              const Limits& limits = Limits::from_env()) {
    RefiningTable table = qadic(q, N, limits);
    for (auto& grid : table.levels) {
      for (double& t : grid.points) t = warp(t);
    }
    return table;
  }

  /// A random refining table: each interval is split into q children whose
  /// lengths are proportional to weights drawn uniformly from [0.5, 1.5].
  static RefiningTable random(int q, int N, std::uint64_t seed,
                              const Limits& limits = Limits::from_env());
};

struct RefiningViolation {
  int level = 0;
  std::int64_t index = -1;  ///< point index, or -1 for level-wide problems
  std::string what;
};

struct RefiningReport {
  bool pass = false;
  std::vector<RefiningViolation> violations;
  double mesh = 0.0;  ///< mesh of the finest level
};

/// Checks counts, monotonicity, endpoints and the nesting rule
/// levels[n].points[i] == levels[n+1].points[q*i]. When `mesh_threshold` is
/// given, a finest-level mesh at or above it is also a violation; this is the
/// finite stand-in for density of the union of all levels.
RefiningReport validate_refining(const RefiningTable& table,
                                 std::optional<double> mesh_threshold = std::nullopt);

/// The time change phi of a dense q-refining sequence, pinned at the finest
/// stored level N by phi(t_i^N) = i / q^N and linear in between.
class HomeomorphismTable {
 public:
  HomeomorphismTable(int q, int N, std::vector<double> source);

  int q() const { return q_; }
  int top_level() const { return N_; }

  /// Table points s_i = t_i^N.
  const std::vector<double>& source() const { return source_; }
  /// Their images i / q^N.
  const std::vector<double>& target() const { return target_; }

  /// phi(t); exact at table points.
  double forward(double t) const;
  /// phi^{-1}(u); exact at q-adic points of level <= N.
  double inverse(double u) const;

  /// Points of the level-n partition t_i^n = s_{i q^(N-n)}.
  std::vector<double> level_points(int n) const;

  /// Stable content hash of the source points.
  std::string hash() const;

 private:
  int q_;
  int N_;
  std::vector<double> source_;
  std::vector<double> target_;
};

/// Builds phi from a table that passes validate_refining; throws
/// InvalidArgument otherwise.
HomeomorphismTable build_homeomorphism(const RefiningTable& table);

}  // namespace pvar
