#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "pvar/construct.hpp"
#include "pvar/variation.hpp"

using namespace pvar;
using doctest::Approx;

TEST_CASE("profile examples") {
  const auto line = sample(qadic_grid(2, 3), [](double t) { return t; });
  CHECK(pvar_profile(line, 2.0).values.back() == Approx(0.125));

  const auto flat = sample(qadic_grid(2, 5), [](double) { return 3.0; });
  for (double v : pvar_profile(flat, 2.0).values) CHECK(v == 0.0);

  const auto peak = sample(qadic_grid(2, 1), [](double t) { return schauder_eval(2, 0, 0, 1, t); });
  CHECK(level_sum(peak, 2.0) == 0.5);
  CHECK_THROWS_AS(pvar_profile(line, 1.0), InvalidArgument);
}

TEST_CASE("profiles agree with the clamped definition") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> nd;
  const auto grid = qadic_grid(3, 4);
  const auto x = sample(grid, [&](double) { return nd(rng); });
  const auto prof = pvar_profile(x, 2.5, all_indices(grid));
  for (std::size_t i = 0; i < grid.points.size(); i += 7) {
    const double expected = oracle::pvar(grid.points, x.values, 2.5, grid.points[i], [&](double t) {
      for (std::size_t j = 0; j < grid.points.size(); ++j) {
        if (grid.points[j] == t) return x.values[j];
      }
      return std::nan("");
    });
    CHECK(prof.values[i] == Approx(expected).epsilon(1e-13));
  }
}

TEST_CASE("profile eval points") {
  const auto x = sample(qadic_grid(2, 12), [](double t) { return std::sin(7.0 * t); });
  const auto def = pvar_profile(x, 2.0);
  CHECK(def.eval_points.size() == 1025);
  CHECK(def.eval_points.front() == 0.0);
  CHECK(def.values.front() == 0.0);
  for (std::size_t i = 1; i < def.values.size(); ++i) CHECK(def.values[i] >= def.values[i - 1]);

  const std::vector<double> pts{0.0, 0.25, 0.5, 1.0};
  const auto at = pvar_profile_at(x, 2.0, pts);
  CHECK(at.values.back() == Approx(def.values.back()));
  const std::vector<double> off{0.1};
  CHECK_THROWS_AS(pvar_profile_at(x, 2.0, off), InvalidArgument);
  const std::vector<std::size_t> unsorted{4, 2};
  CHECK_THROWS_AS(pvar_profile(x, 2.0, unsorted), InvalidArgument);
}

TEST_CASE("pvar norm") {
  std::vector<SampledPath> consts;
  for (int n = 0; n <= 4; ++n) consts.push_back(sample(qadic_grid(2, n), [](double) { return -2.5; }));
  CHECK(pvar_norm(consts, 2.0).value == 2.5);

  std::vector<SampledPath> lines;
  for (int n = 0; n <= 10; ++n) lines.push_back(sample(qadic_grid(2, n), [](double t) { return t; }));
  const auto r = pvar_norm(lines, 2.0);
  CHECK(r.value == Approx(1.0));
  CHECK(r.argmax_level == 0);

  UniformMagnitudeSpec spec;
  const auto ref = reference_path(spec, 16);
  std::vector<SampledPath> levels;
  for (int n = 0; n <= 16; ++n) levels.push_back(restrict_to_level(ref, n));
  const auto rn = pvar_norm(levels, 2.0);
  CHECK(rn.value == Approx(std::sqrt(1.0 - std::ldexp(1.0, -16))).epsilon(1e-12));
  CHECK(rn.argmax_level == 16);
  CHECK_THROWS_AS(pvar_norm(std::vector<SampledPath>{}, 2.0), InvalidArgument);
}

TEST_CASE("variation index estimate") {
  UniformMagnitudeSpec spec;
  spec.p = 3.0;
  spec.levels = 12;
  const auto coeffs = build_reference(spec);
  const std::vector<double> ps{2.0, 2.5, 3.0, 4.0};
  const auto rows = variation_index_estimate(coeffs, ps);
  CHECK(rows[0].trend == Trend::Growing);
  CHECK(rows[1].trend == Trend::Growing);
  CHECK(rows[2].trend == Trend::Bounded);
  CHECK(rows[3].trend == Trend::Vanishing);
  CHECK(rows[0].slope == Approx(1.0 - 2.0 / 3.0));

  const auto affine = analyze(sample(qadic_grid(2, 8), [](double t) { return 1.0 + t; }));
  auto exact_affine = affine;
  for (auto& lv : exact_affine.levels) std::fill(lv.begin(), lv.end(), 0.0);
  for (const auto& row : variation_index_estimate(exact_affine, ps)) CHECK(row.trend == Trend::Vanishing);

  const std::vector<double> ones(10, 1.0);
  CHECK(std::fabs(classify_trend(ones).slope) <= 1e-9);
  CHECK(classify_trend(ones).trend == Trend::Bounded);
  CHECK_THROWS_AS(variation_index_estimate(CoefficientArray::zeros(2, 3), ps), InvalidArgument);
}

TEST_CASE("stieltjes against a profile") {
  const auto x = sample(qadic_grid(2, 10), [](double t) { return std::cos(5.0 * t); });
  const auto prof = pvar_profile(x, 2.0);
  const auto one = sample(x.grid, [](double) { return 1.0; });
  const auto s1 = stieltjes_against_profile(one, prof);
  for (std::size_t i = 0; i < s1.size(); ++i) CHECK(s1[i] == Approx(prof.values[i]).epsilon(1e-14));
  const auto three = sample(x.grid, [](double) { return 3.0; });
  const auto s3 = stieltjes_against_profile(three, prof);
  for (std::size_t i = 0; i < s3.size(); ++i) CHECK(s3[i] == Approx(3.0 * prof.values[i]).epsilon(1e-14));

  // Exact linear profile C u against w(u) = u.
  const double C = 0.7;
  VariationProfile lin{2.0, 10, all_indices(x.grid), x.grid.points, {}};
  for (double t : x.grid.points) lin.values.push_back(C * t);
  const auto w = sample(x.grid, [](double u) { return u; });
  const auto s = stieltjes_against_profile(w, lin);
  for (std::size_t i = 0; i < s.size(); i += 50) {
    const double t = x.grid.points[i];
    CHECK(std::fabs(s[i] - C * t * t / 2.0) <= C * x.grid.mesh());
  }
  const auto coarse = sample(qadic_grid(2, 3), [](double) { return 1.0; });
  CHECK_THROWS_AS(stieltjes_against_profile(coarse, prof), InvalidArgument);
}

TEST_CASE("higher exponents give smaller roots") {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 10; ++trial) {
    const auto x = sample(qadic_grid(2, 9), [&](double) { return nd(rng); });
    for (int n = 0; n <= 9; ++n) {
      const auto xn = restrict_to_level(x, n);
      double prev = INFINITY;
      for (double p : {1.5, 2.0, 3.0, 4.5}) {
        const double root = std::pow(level_sum(xn, p), 1.0 / p);
        CHECK(root <= prev * (1.0 + 1e-12));
        prev = root;
      }
    }
  }
}

TEST_CASE("Holder paths have geometrically decaying variation") {
  // x(t) = t is C^alpha for every alpha < 1 with norm 1; alpha p > 1.
  const double alpha = 0.75;
  const double p = 2.0;
  for (int n = 0; n <= 14; ++n) {
    const auto x = sample(qadic_grid(2, n), [](double t) { return t; });
    CHECK(level_sum(x, p) <= std::pow(2.0, n * (1.0 - alpha * p)) * (1.0 + 1e-12));
  }
}

TEST_CASE("splice differs from y by a function affine on level-n cells") {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> nd;
  auto x = CoefficientArray::zeros(2, 12);
  auto y = CoefficientArray::zeros(2, 12);
  for (auto* c : {&x, &y}) {
    c->x0 = nd(rng);
    c->x1 = nd(rng);
    for (auto& lv : c->levels) {
      for (double& v : lv) v = nd(rng);
    }
  }
  const int n = 4;
  const auto s = splice(x, y, n);
  std::vector<double> gaps;
  for (int m = n; m <= 12; ++m) {
    const auto vs = synthesize(s, m);
    const auto vy = synthesize(y, m);
    SampledPath diff = vs;
    for (std::size_t i = 0; i < diff.values.size(); ++i) diff.values[i] = vs.values[i] - vy.values[i];
    // second differences vanish inside each level-n cell
    const std::size_t cell = std::size_t{1} << (m - n);
    for (std::size_t i = 1; i + 1 < diff.values.size(); ++i) {
      if (i % cell == 0) continue;
      CHECK(std::fabs(diff.values[i + 1] - 2.0 * diff.values[i] + diff.values[i - 1]) < 1e-12);
    }
    const double root_gap = std::fabs(std::sqrt(level_sum(vs, 2.0)) - std::sqrt(level_sum(vy, 2.0)));
    const double bound = std::sqrt(level_sum(diff, 2.0));
    CHECK(root_gap <= bound + 1e-12);
    gaps.push_back(bound);
  }
  for (std::size_t i = 1; i < gaps.size(); ++i) CHECK(gaps[i] == Approx(gaps[i - 1] / std::sqrt(2.0)).epsilon(1e-9));
}
