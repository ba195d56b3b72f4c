#include "pvar/partition.hpp"

#include <algorithm>
#include <random>

namespace pvar {

namespace {

void require_base(int q) {
  if (q < 2) throw InvalidArgument("branching factor q must be >= 2");
}

double unit_double(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

bool PartitionGrid::is_qadic() const {
  if (q < 2 || level < 0) return false;
  const std::uint64_t count = int_pow(q, level);
  if (points.size() != count + 1) return false;
  const auto denom = static_cast<double>(count);
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i] != static_cast<double>(i) / denom) return false;
  }
  return true;
}

double PartitionGrid::mesh() const {
  double m = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    m = std::max(m, points[i] - points[i - 1]);
  }
  return m;
}

PartitionGrid qadic_grid(int q, int n, const Limits& limits) {
  require_base(q);
  if (n < 0) throw InvalidArgument("qadic_grid: level must be >= 0");
  const std::uint64_t count = checked_pow(q, n, limits.max_intervals);
  PartitionGrid grid{q, n, std::vector<double>(count + 1)};
  const auto denom = static_cast<double>(count);
  for (std::uint64_t i = 0; i <= count; ++i) {
    grid.points[i] = static_cast<double>(i) / denom;
  }
  return grid;
}

DigitVector digits(std::uint64_t k, int n, int q) {
  require_base(q);
  if (n < 0) throw InvalidArgument("digits: level must be >= 0");
  if (k >= int_pow(q, n)) {
    throw InvalidArgument("digits: index " + std::to_string(k) + " out of range for " +
                          std::to_string(q) + "^" + std::to_string(n));
  }
  DigitVector d(static_cast<std::size_t>(n));
  const auto base = static_cast<std::uint64_t>(q);
  for (auto& digit : d) {
    digit = static_cast<int>(k % base);
    k /= base;
  }
  return d;
}

std::uint64_t from_digits(const DigitVector& d, int q) {
  std::uint64_t k = 0;
  for (auto it = d.rbegin(); it != d.rend(); ++it) {
    k = k * static_cast<std::uint64_t>(q) + static_cast<std::uint64_t>(*it);
  }
  return k;
}

std::uint64_t ancestor_index(int m, int n, std::uint64_t k, int q) {
  require_base(q);
  if (m < 0 || m > n) {
    throw InvalidArgument("ancestor_index: need 0 <= m <= n (got m=" + std::to_string(m) +
                          ", n=" + std::to_string(n) + ")");
  }
  if (k >= int_pow(q, n)) throw InvalidArgument("ancestor_index: k out of range");
  return k / int_pow(q, n - m);
}

RefiningTable RefiningTable::qadic(int q, int N, const Limits& limits) {
  require_base(q);
  if (N < 0) throw InvalidArgument("refining table needs N >= 0");
  RefiningTable table{q, {}};
  for (int n = 0; n <= N; ++n) table.levels.push_back(qadic_grid(q, n, limits));
  return table;
}

RefiningTable RefiningTable::random(int q, int N, std::uint64_t seed, const Limits& limits) {
  require_base(q);
  if (N < 0) throw InvalidArgument("refining table needs N >= 0");
  checked_pow(q, N, limits.max_intervals);
  std::mt19937_64 rng(seed);
  RefiningTable table{q, {PartitionGrid{q, 0, {0.0, 1.0}}}};
  std::vector<double> weights(static_cast<std::size_t>(q));
  for (int n = 1; n <= N; ++n) {
    const auto& coarse = table.levels.back().points;
    PartitionGrid fine{q, n, {}};
    fine.points.reserve((coarse.size() - 1) * static_cast<std::size_t>(q) + 1);
    for (std::size_t i = 0; i + 1 < coarse.size(); ++i) {
      double total = 0.0;
      for (auto& w : weights) {
        w = 0.5 + unit_double(rng);
        total += w;
      }
      const double left = coarse[i];
      const double width = coarse[i + 1] - left;
      fine.points.push_back(left);
      double acc = 0.0;
      for (int d = 0; d + 1 < q; ++d) {
        acc += weights[static_cast<std::size_t>(d)];
        fine.points.push_back(left + width * (acc / total));
      }
    }
    fine.points.push_back(1.0);
    table.levels.push_back(std::move(fine));
  }
  return table;
}

RefiningReport validate_refining(const RefiningTable& table,
                                 std::optional<double> mesh_threshold) {
  RefiningReport report;
  if (table.levels.empty()) {
    report.violations.push_back({0, -1, "table has no levels"});
    return report;
  }
  if (table.q < 2) {
    report.violations.push_back({0, -1, "q must be >= 2"});
    return report;
  }
  for (std::size_t n = 0; n < table.levels.size(); ++n) {
    const auto level = static_cast<int>(n);
    const auto& pts = table.levels[n].points;
    const std::uint64_t expected = int_pow(table.q, level) + 1;
    if (pts.size() != expected) {
      report.violations.push_back({level, -1,
                                   "expected " + std::to_string(expected) + " points, found " +
                                       std::to_string(pts.size())});
      continue;
    }
    if (pts.front() != 0.0) report.violations.push_back({level, 0, "first point is not 0"});
    if (pts.back() != 1.0) {
      report.violations.push_back(
          {level, static_cast<std::int64_t>(pts.size() - 1), "last point is not 1"});
    }
    for (std::size_t i = 1; i < pts.size(); ++i) {
      if (!(pts[i] > pts[i - 1])) {
        report.violations.push_back(
            {level, static_cast<std::int64_t>(i), "points not strictly increasing"});
      }
    }
    if (n == 0) continue;
    const auto& coarse = table.levels[n - 1].points;
    if (coarse.size() != int_pow(table.q, level - 1) + 1) continue;
    for (std::size_t i = 0; i < coarse.size(); ++i) {
      if (coarse[i] != pts[i * static_cast<std::size_t>(table.q)]) {
        report.violations.push_back({level - 1, static_cast<std::int64_t>(i),
                                     "nesting broken: t_i^n != t_{qi}^{n+1}"});
      }
    }
  }
  report.mesh = table.levels.back().mesh();
  if (mesh_threshold && !(report.mesh < *mesh_threshold)) {
    report.violations.push_back(
        {table.top_level(), -1, "finest mesh is not below the density threshold"});
  }
  report.pass = report.violations.empty();
  return report;
}

HomeomorphismTable::HomeomorphismTable(int q, int N, std::vector<double> source)
    : q_(q), N_(N), source_(std::move(source)) {
  require_base(q);
  const std::uint64_t count = int_pow(q, N);
  if (source_.size() != count + 1) {
    throw InvalidArgument("homeomorphism table needs q^N + 1 source points");
  }
  if (source_.front() != 0.0 || source_.back() != 1.0) {
    throw InvalidArgument("homeomorphism table must map 0 to 0 and 1 to 1");
  }
  for (std::size_t i = 1; i < source_.size(); ++i) {
    if (!(source_[i] > source_[i - 1])) {
      throw InvalidArgument("homeomorphism table is not strictly increasing at index " +
                            std::to_string(i));
    }
  }
  target_.resize(source_.size());
  const auto denom = static_cast<double>(count);
  for (std::size_t i = 0; i < target_.size(); ++i) {
    target_[i] = static_cast<double>(i) / denom;
  }
}

namespace {

// Monotone piecewise-linear map from xs to ys, exact at knots.
double interpolate(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw InvalidArgument("time change evaluated outside [0,1]");
  const auto it = std::lower_bound(xs.begin(), xs.end(), x);
  const auto i = static_cast<std::size_t>(it - xs.begin());
  if (*it == x) return ys[i];
  const double w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
  return ys[i - 1] + w * (ys[i] - ys[i - 1]);
}

}  // namespace

double HomeomorphismTable::forward(double t) const { return interpolate(source_, target_, t); }

double HomeomorphismTable::inverse(double u) const { return interpolate(target_, source_, u); }

std::vector<double> HomeomorphismTable::level_points(int n) const {
  if (n < 0 || n > N_) {
    throw InvalidArgument("level " + std::to_string(n) + " exceeds the table's top level " +
                          std::to_string(N_));
  }
  const std::uint64_t stride = int_pow(q_, N_ - n);
  const std::uint64_t count = int_pow(q_, n);
  std::vector<double> pts(count + 1);
  for (std::uint64_t i = 0; i <= count; ++i) pts[i] = source_[i * stride];
  return pts;
}

std::string HomeomorphismTable::hash() const { return hex64(fnv1a(source_)); }

HomeomorphismTable build_homeomorphism(const RefiningTable& table) {
  const RefiningReport report = validate_refining(table);
  if (!report.pass) {
    const auto& v = report.violations.front();
    throw InvalidArgument("refining table invalid at level " + std::to_string(v.level) +
                          ", index " + std::to_string(v.index) + ": " + v.what);
  }
  return HomeomorphismTable(table.q, table.top_level(), table.levels.back().points);
}

}  // namespace pvar
