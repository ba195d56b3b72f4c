#include <cmath>

#include "doctest.h"
#include "pvar/timechange.hpp"

using namespace pvar;
using doctest::Approx;

namespace {

UniformMagnitudeSpec dyadic(double p, int levels) {
  UniformMagnitudeSpec s;
  s.p = p;
  s.levels = levels;
  return s;
}

}  // namespace

TEST_CASE("pullback keeps the values and swaps the grid") {
  const auto phi = build_homeomorphism(RefiningTable::random(2, 10, 4));
  UniformMagnitudeSpec s = dyadic(2.0, 8);
  s.signs = SignRule::Seeded;
  s.seed = 8;
  const auto x = reference_path(s, 8);
  const auto y = pullback_path(x, phi);
  CHECK(y.values == x.values);
  CHECK(y.grid.points == phi.level_points(8));
  CHECK(y.meta["timechange"]["N"] == 10);
  CHECK(y.meta["timechange"]["table_hash"] == phi.hash());
  CHECK_THROWS_AS(pullback_path(reference_path(dyadic(2.0, 12), 12), phi), InvalidArgument);
  CHECK_THROWS_AS(pullback_path(y, phi), InvalidArgument);
}

TEST_CASE("variation is invariant under the time change") {
  for (double p : {1.5, 2.0, 3.0}) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      const auto phi = build_homeomorphism(RefiningTable::random(2, 12, seed));
      const auto x = reference_path(dyadic(p, 12), 12);
      CHECK(transported_pvar_check(x, phi, p) <= 1e-12);
      CHECK(transported_pvar_check(restrict_to_level(x, 7), phi, p) <= 1e-12);
    }
  }
  const auto warp = build_homeomorphism(RefiningTable::warped(2, 10, [](double t) { return t * t; }));
  CHECK(transported_pvar_check(reference_path(dyadic(2.0, 10), 10), warp, 2.0) <= 1e-12);

  UniformMagnitudeSpec t;
  t.q = 3;
  t.a = {1.0, 1.0};
  t.levels = 6;
  const auto phi3 = build_homeomorphism(RefiningTable::random(3, 6, 5));
  CHECK(transported_pvar_check(reference_path(t, 6), phi3, 2.0) <= 1e-12);
  CHECK_THROWS_AS(pullback_path(reference_path(dyadic(2.0, 4), 4), phi3), InvalidArgument);
}

TEST_CASE("identity table changes nothing") {
  const auto phi = build_homeomorphism(RefiningTable::qadic(2, 9));
  const auto x = reference_path(dyadic(2.0, 9), 9);
  const auto y = pullback_path(x, phi);
  CHECK(y.grid.points == x.grid.points);
  CHECK(transported_pvar_check(x, phi, 2.0) == 0.0);
}

TEST_CASE("transported recipe hits the target along the refining sequence") {
  const int n = 14;
  const auto phi = build_homeomorphism(RefiningTable::warped(2, n, [](double t) { return t * t; }));
  const auto pts = phi.level_points(n);
  const auto H = TargetFamily::exponential(1.0);
  std::vector<double> samples(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) samples[i] = H.h(pts[i]);
  const UniformMagnitudeSpec s = dyadic(2.0, 16);
  const auto tr = transported_recipe(samples, 2.0, phi, s, 1.0, n);
  CHECK(tr.y.grid.points == pts);
  CHECK(tr.y.values == tr.qadic.y.values);
  CHECK(tr.y.meta["hprime"] == "central-difference");
  const auto prof = pvar_profile(tr.y, 2.0);
  double worst = 0.0;
  for (std::size_t i = 0; i < prof.values.size(); i += 97) {
    worst = std::max(worst, std::fabs(prof.values[i] - H.h(prof.eval_points[i])));
  }
  CHECK(worst <= 0.02 * (1.0 + H.h(1.0)));

  auto bad = samples;
  bad[3] = bad[2] - 1.0;
  CHECK_THROWS_AS(transported_recipe(bad, 2.0, phi, s, 1.0, n), InvalidArgument);
  bad = samples;
  bad[0] = 0.5;
  CHECK_THROWS_AS(transported_recipe(bad, 2.0, phi, s, 1.0, n), InvalidArgument);
  CHECK_THROWS_AS(transported_recipe(samples, 2.0, phi, s, 1.0, n + 1), InvalidArgument);
}
