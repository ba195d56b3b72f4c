#include <cmath>
#include <random>

#include "doctest.h"
#include "pvar/calculus.hpp"
#include "pvar/construct.hpp"

using namespace pvar;
using doctest::Approx;

namespace {

UniformMagnitudeSpec dyadic(double p, int levels) {
  UniformMagnitudeSpec s;
  s.p = p;
  s.levels = levels;
  return s;
}

SampledPath random_walk(int n, std::uint64_t seed, double step) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, step);
  auto path = sample(qadic_grid(2, n), [](double) { return 0.0; });
  for (std::size_t i = 1; i < path.values.size(); ++i) path.values[i] = path.values[i - 1] + nd(rng);
  return path;
}

}  // namespace

TEST_CASE("derivative tables are consistent") {
  const std::vector<double> pts{-1.0, -0.3, 0.0, 0.4, 1.2};
  CHECK(check_derivatives(FunctionWithDerivatives::exponential(4), pts).pass);
  CHECK(check_derivatives(FunctionWithDerivatives::sine(5), pts).pass);
  CHECK(check_derivatives(FunctionWithDerivatives::polynomial({1.0, -2.0, 0.5, 3.0}, 5), pts).pass);
  auto broken = FunctionWithDerivatives::sine(2);
  broken.d[2] = [](double y) { return std::sin(y); };
  CHECK_FALSE(check_derivatives(broken, pts).pass);

  const auto poly = FunctionWithDerivatives::polynomial({0.0, 0.0, 1.0}, 3);
  CHECK(poly(0, 3.0) == 9.0);
  CHECK(poly(1, 3.0) == 6.0);
  CHECK(poly(2, 3.0) == 2.0);
  CHECK(poly(3, 3.0) == 0.0);
}

TEST_CASE("compensated sum examples") {
  // f = y on the identity path: the sum is y(t) itself.
  const auto id = sample(qadic_grid(2, 6), [](double t) { return t; });
  const auto idx = all_indices(id.grid);
  const auto lin = follmer_sum(FunctionWithDerivatives::polynomial({0.0, 1.0}, 1), id, 2, idx);
  for (std::size_t i = 0; i < idx.size(); ++i) CHECK(lin[i] == Approx(id.grid.points[i]).epsilon(1e-14));

  // f = y^2, p = 2: sum 2 y_i dy_i.
  const auto sq = follmer_sum(FunctionWithDerivatives::polynomial({0.0, 0.0, 1.0}, 2), id, 2, idx);
  const double h = 1.0 / 64.0;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    const double t = id.grid.points[i];
    CHECK(sq[i] == Approx(t * t - t * h).epsilon(1e-12));
  }
  CHECK(sq.front() == 0.0);

  CHECK_THROWS_AS(follmer_sum(FunctionWithDerivatives::exponential(3), id, 3, idx), InvalidArgument);
  CHECK_THROWS_AS(follmer_sum(FunctionWithDerivatives::exponential(1), id, 4, idx), InvalidArgument);
}

TEST_CASE("polynomials of degree at most p leave no residual") {
  const auto y = random_walk(12, 8, 0.05);
  const auto sq = change_of_variable_residual(FunctionWithDerivatives::polynomial({0.3, -1.0, 1.0}, 2), y, 2);
  CHECK(sq.sup <= 1e-12);
  CHECK(sq.residual.size() == y.values.size());
  CHECK(sq.t.back() == 1.0);

  const auto x4 = reference_path(dyadic(4.0, 14), 14);
  const auto quart = change_of_variable_residual(FunctionWithDerivatives::polynomial({0.0, 0.0, 0.0, 0.0, 1.0}, 4), x4, 4);
  CHECK(quart.sup <= 1e-12);
}

TEST_CASE("residual of a smooth function shrinks under refinement") {
  const auto top = reference_path(dyadic(2.0, 16), 16);
  double prev = INFINITY;
  for (int n : {8, 10, 12, 14, 16}) {
    const auto r = change_of_variable_residual(FunctionWithDerivatives::exponential(2), restrict_to_level(top, n), 2);
    CHECK(r.sup < prev);
    prev = r.sup;
  }
  CHECK(prev < 1e-3);
}

TEST_CASE("compensated sums depend continuously on the path") {
  const auto x = reference_path(dyadic(2.0, 14), 14);
  const auto f = FunctionWithDerivatives::sine(2);
  const auto idx = default_eval_indices(x.grid);
  const auto base = follmer_sum(f, x, 2, idx);
  double prev = INFINITY;
  for (int k : {2, 6, 10}) {
    auto xk = x;
    const double eps = std::ldexp(1.0, -k);
    for (std::size_t i = 0; i < xk.values.size(); ++i) {
      const double t = x.grid.points[i];
      xk.values[i] += eps * std::sin(M_PI * t);
    }
    const auto s = follmer_sum(f, xk, 2, idx);
    const auto r = change_of_variable_residual(f, xk, 2, idx);
    double gap = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) gap = std::max(gap, std::fabs(s[i] - base[i]));
    CHECK(gap < prev);
    prev = gap;
    CHECK(r.sup < 1e-2);
  }
}

TEST_CASE("norm selectors") {
  const auto id = sample(qadic_grid(2, 6), [](double t) { return t; });
  CHECK(grid_norm(id, NormSelector::sup()) == 1.0);
  CHECK(grid_norm(id, NormSelector::tv_plus_sup()) == Approx(2.0));
  CHECK(grid_norm(id, NormSelector::holder(0.5)) == Approx(1.0));
  const auto three = sample(qadic_grid(2, 6), [](double) { return -3.0; });
  CHECK(grid_norm(three, NormSelector::lp(2.0)) == Approx(3.0));
  CHECK(grid_norm(three, NormSelector::holder(0.3)) == 3.0);

  CHECK(NormSelector::parse("holder:0.25").param == 0.25);
  CHECK(NormSelector::parse("lp:3").kind == NormSelector::Kind::Lp);
  CHECK(NormSelector::parse("tv_plus_sup").kind == NormSelector::Kind::TvPlusSup);
  CHECK_THROWS_AS(NormSelector::parse("holder:1.5"), InvalidArgument);
  CHECK_THROWS_AS(NormSelector::parse("energy"), InvalidArgument);
  CHECK_THROWS_AS(NormSelector::parse("lp:x"), InvalidArgument);
  CHECK(NormSelector::parse(NormSelector::lp(2.0).name()).param == 2.0);
}

TEST_CASE("transported norm is an isometry") {
  UniformMagnitudeSpec s = dyadic(2.0, 10);
  s.signs = SignRule::Seeded;
  s.seed = 2;
  const auto x = reference_path(s, 10);
  const auto xbar = shifted_reference(x, x.sup_norm() + 0.5);
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 5; ++trial) {
    const auto g = sample(x.grid, [&](double) { return u(rng); });
    auto y = g;
    for (std::size_t i = 0; i < y.values.size(); ++i) y.values[i] = g.values[i] * xbar.values[i];
    for (const auto& sel : {NormSelector::sup(), NormSelector::tv_plus_sup(), NormSelector::lp(3.0), NormSelector::holder(0.5)}) {
      const double a = transported_norm(y, xbar, sel);
      const double b = grid_norm(g, sel);
      CHECK(std::fabs(a - b) <= 1e-12 * std::max(1.0, b));
    }
  }
  CHECK_THROWS_AS(transported_norm(x, x, NormSelector::sup()), InvalidArgument);
}

TEST_CASE("holder quotient refuses huge grids") {
  CHECK_THROWS_AS(holder_seminorm(sample(qadic_grid(2, 17), [](double t) { return t; }), 0.5), BudgetExceeded);
}

TEST_CASE("predicted profile and stability") {
  const auto grid = qadic_grid(2, 10);
  const auto one = sample(grid, [](double) { return 1.0; });
  const auto pp = predicted_profile(one, 3.0, 2.0);
  for (std::size_t i = 0; i < pp.size(); ++i) CHECK(pp[i] == Approx(2.0 * grid.points[i]).epsilon(1e-14));

  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (double p : {1.5, 2.0, 3.0}) {
    for (int trial = 0; trial < 6; ++trial) {
      const auto g1 = sample(grid, [&](double) { return u(rng); });
      auto g2 = g1;
      for (double& v : g2.values) v += 0.1 * u(rng);
      for (const auto& sel : {NormSelector::sup(), NormSelector::lp(2.0), NormSelector::tv_plus_sup(), NormSelector::holder(0.5)}) {
        const auto b = stability_bound(g1, g2, p, 1.3, sel);
        CHECK(b.lhs <= b.rhs_l1);
        CHECK(b.lhs <= b.rhs_local_lip);
      }
      const auto b = stability_bound(g1, g2, p, 1.3);
      const auto p1 = predicted_profile(g1, p, 1.3);
      const auto p2 = predicted_profile(g2, p, 1.3);
      double direct = 0.0;
      for (std::size_t i = 0; i < p1.size(); ++i) direct = std::max(direct, std::fabs(p1[i] - p2[i]));
      CHECK(b.lhs == Approx(direct).epsilon(1e-10));
    }
  }
  const auto same = stability_bound(one, one, 2.0, 1.0);
  CHECK(same.lhs == 0.0);
  CHECK(same.rhs_local_lip == 0.0);
}
