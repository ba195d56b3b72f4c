#include "pvar/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>

#include "pvar/calculus.hpp"
#include "pvar/constant.hpp"
#include "pvar/construct.hpp"
#include "pvar/schauder.hpp"
#include "pvar/timechange.hpp"
#include "pvar/variation.hpp"

namespace pvar {

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void check(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail += (detail.empty() ? "" : "; ") + std::string("FAILED ") + what;
    }
  }
  void note(const std::string& s) { detail += (detail.empty() ? "" : "; ") + s; }
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

UniformMagnitudeSpec dyadic_spec(double p, int levels = 16) {
  UniformMagnitudeSpec s;
  s.q = 2;
  s.p = p;
  s.levels = levels;
  return s;
}

UniformMagnitudeSpec ternary_spec(int levels) {
  UniformMagnitudeSpec s;
  s.q = 3;
  s.p = 2.0;
  s.a = {1.0, 1.0};
  s.levels = levels;
  return s;
}

double exact_constant(double p) {
  return variation_constant(p, 2, {}, ConstantMethod::Exact).value;
}

Outcome level_identity() {
  Outcome o;
  const SampledPath top = reference_path(dyadic_spec(2.0), 16);
  double worst = 0.0;
  for (int n = 0; n <= 16; ++n) {
    const double v = level_sum(restrict_to_level(top, n), 2.0);
    worst = std::max(worst, std::fabs(v - (1.0 - std::ldexp(1.0, -n))));
  }
  o.check(worst <= 1e-12, "level identity");
  o.note("max |[x]_n(1) - (1 - 2^-n)| = " + sci(worst) + " over n <= 16");
  return o;
}

Outcome linear_variation() {
  Outcome o;
  for (double p : {2.0, 3.0, 4.0}) {
    const double cp = exact_constant(p);
    const SampledPath x = reference_path(dyadic_spec(p), 16);
    const auto idx = default_eval_indices(x.grid, 4);
    const VariationProfile prof = pvar_profile(x, p, idx);
    const double total = prof.values.back();
    double lin = 0.0;
    for (std::size_t i = 0; i < prof.values.size(); ++i) {
      lin = std::max(lin, std::fabs(prof.values[i] - prof.eval_points[i] * total));
    }
    const double gap = std::fabs(total - cp);
    o.check(gap <= 1e-2 && lin <= 1e-2, "p=" + sci(p));
    o.note("p=" + sci(p) + ": |V16-C|=" + sci(gap) + " (C=" + sci(cp) + "), linearity " + sci(lin));
  }
  return o;
}

Outcome oracle_agreement() {
  Outcome o;
  for (double p : {2.0, 4.0}) {
    const VariationConstant ex = variation_constant(p, 2, {}, ConstantMethod::Exact);
    ConstantOptions mc_opt;
    mc_opt.samples = 1000000;
    mc_opt.seed = 0;
    const VariationConstant mc = variation_constant(p, 2, {}, ConstantMethod::MonteCarlo, mc_opt);
    const VariationConstant cf = variation_constant(p, 2, {}, ConstantMethod::Closed);
    const VariationConstant* all[] = {&ex, &mc, &cf};
    double worst_abs = 0.0;
    double worst_z = 0.0;
    for (int i = 0; i < 3; ++i) {
      for (int j = i + 1; j < 3; ++j) {
        const auto& a = *all[i];
        const auto& b = *all[j];
        const double diff = std::fabs(a.value - b.value);
        const double deterministic = a.tail_bound + b.tail_bound +
                                     (a.method == ConstantMethod::Closed ? a.error_bound : 0.0) +
                                     (b.method == ConstantMethod::Closed ? b.error_bound : 0.0);
        const double se = std::hypot(a.std_error, b.std_error);
        worst_abs = std::max(worst_abs, diff);
        o.check(diff <= 1e-3, "p=" + sci(p) + " " + to_string(a.method) + "/" + to_string(b.method) + " absolute");
        o.check(diff <= 3.0 * se + deterministic,
                "p=" + sci(p) + " " + to_string(a.method) + "/" + to_string(b.method) + " beyond 3 SE");
        if (se > 0.0) worst_z = std::max(worst_z, std::max(0.0, diff - deterministic) / se);
      }
    }
    o.note("p=" + sci(p) + ": exact " + sci(ex.value) + ", mc " + sci(mc.value) + " (se " + sci(mc.std_error) +
           "), closed " + sci(cf.value) + ", max diff " + sci(worst_abs) + ", max z " + sci(worst_z));
  }
  return o;
}

Outcome sign_bijection() {
  Outcome o;
  double worst = 0.0;
  UniformMagnitudeSpec plus = dyadic_spec(2.0, 12);
  UniformMagnitudeSpec seeded = plus;
  seeded.signs = SignRule::Seeded;
  seeded.seed = 1;
  for (const auto* spec : {&plus, &seeded}) {
    for (int n = 1; n <= 12; ++n) {
      const SignMatrixReport r = sign_matrix(*spec, n);
      o.check(r.bijection, "bijection at n=" + std::to_string(n));
      worst = std::max(worst, r.gap);
    }
  }
  o.check(worst <= 1e-12, "expectation identity");
  o.note("bijection for n <= 12 (plus, seeded); max expectation gap " + sci(worst));
  return o;
}

Outcome increment_identity() {
  Outcome o;
  struct Case {
    UniformMagnitudeSpec spec;
  };
  const UniformMagnitudeSpec cases[] = {dyadic_spec(2.0, 10), dyadic_spec(3.0, 10), ternary_spec(10)};
  for (const auto& spec : cases) {
    const SampledPath x = reference_path(spec, 10);
    double worst = 0.0;
    for (std::uint64_t k = 0; k + 1 < x.values.size(); ++k) {
      const IncrementDecomposition d = increment_decomposition(spec, x, k);
      worst = std::max(worst, std::fabs(d.series_value - d.synthesized_value));
    }
    const std::string tag = "(q,p)=(" + std::to_string(spec.q) + "," + sci(spec.p) + ")";
    o.check(worst <= 1e-12, tag);
    o.note(tag + " gap " + sci(worst));
  }
  return o;
}

std::vector<TargetFamily> recipe_targets() {
  return {TargetFamily::linear(), TargetFamily::exponential(1.0), TargetFamily::logarithmic(1.0)};
}

RecipeResult run_recipe(const TargetFamily& h, double constant, int n) {
  const SampledPath hp = sample(qadic_grid(2, n), h.hprime);
  return recipe(hp, 2.0, dyadic_spec(2.0), constant);
}

Outcome recipe_check() {
  Outcome o;
  const double c2 = exact_constant(2.0);
  for (const auto& h : recipe_targets()) {
    const RecipeResult r = run_recipe(h, c2, 16);
    const VariationProfile prof = pvar_profile(r.y, 2.0);
    double worst = 0.0;
    for (std::size_t i = 0; i < prof.values.size(); ++i) {
      worst = std::max(worst, std::fabs(prof.values[i] - h.h(prof.eval_points[i])));
    }
    const double tol = 0.02 * (1.0 + h.h(1.0));
    o.check(worst <= tol, "h=" + h.name);
    o.note("h=" + h.name + ": sup gap " + sci(worst) + " (tol " + sci(tol) + ")");
  }
  return o;
}

Outcome qadic_convergence() {
  Outcome o;
  const double v = level_sum(reference_path(ternary_spec(10), 10), 2.0);
  o.check(std::fabs(v - 1.0) <= 2e-2, "q=3 level sum");
  o.note("[x]_10(1) = " + sci(v) + ", gap " + sci(std::fabs(v - 1.0)));
  return o;
}

Outcome ito_check() {
  Outcome o;
  const double c2 = exact_constant(2.0);
  const auto square = FunctionWithDerivatives::polynomial({0.0, 0.0, 1.0}, 2);
  const auto quartic = FunctionWithDerivatives::polynomial({0.0, 0.0, 0.0, 0.0, 1.0}, 2);
  for (const auto& h : recipe_targets()) {
    const RecipeResult r = run_recipe(h, c2, 16);
    const double exact_sup = change_of_variable_residual(square, restrict_to_level(r.y, 14), 2).sup;
    o.check(exact_sup <= 1e-12, "y^2 residual for h=" + h.name);
    std::vector<double> quartic_sup;
    for (int n : {12, 14, 16}) quartic_sup.push_back(change_of_variable_residual(quartic, restrict_to_level(r.y, n), 2).sup);
    o.check(quartic_sup[2] <= 5e-2 && quartic_sup[0] > quartic_sup[1] && quartic_sup[1] > quartic_sup[2],
            "y^4 residual trend for h=" + h.name);
    o.note("h=" + h.name + ": y^2 " + sci(exact_sup) + ", y^4 " + sci(quartic_sup[0]) + " > " + sci(quartic_sup[1]) +
           " > " + sci(quartic_sup[2]));
  }
  return o;
}

Outcome time_change() {
  Outcome o;
  const auto square = RefiningTable::warped(2, 10, [](double t) { return t * t; });
  const HomeomorphismTable phi_sq = build_homeomorphism(square);
  const double gap_sq = transported_pvar_check(reference_path(dyadic_spec(2.0, 10), 10), phi_sq, 2.0);
  const HomeomorphismTable phi_rand = build_homeomorphism(RefiningTable::random(3, 10, 0));
  const double gap_rand = transported_pvar_check(reference_path(ternary_spec(10), 10), phi_rand, 2.0);
  o.check(gap_sq <= 1e-12, "square-root table");
  o.check(gap_rand <= 1e-12, "random q=3 table");
  o.note("gap square-root " + sci(gap_sq) + ", random q=3 " + sci(gap_rand));
  return o;
}

Outcome stability() {
  Outcome o;
  const double c2 = variation_constant(2.0, 2, {}, ConstantMethod::Closed).value;
  const PartitionGrid grid = qadic_grid(2, 10);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  int violations = 0;
  int lip_violations = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const SampledPath g1 = sample(grid, [&](double) { return u(rng); });
    const SampledPath g2 = sample(grid, [&](double) { return u(rng); });
    const StabilityBound b = stability_bound(g1, g2, 2.0, c2);
    if (!(b.lhs <= b.rhs_l1)) ++violations;
    if (!(b.rhs_l1 <= b.rhs_local_lip * (1.0 + 1e-12))) ++lip_violations;
  }
  const StabilityBound eq = stability_bound(sample(grid, [](double) { return 1.0; }),
                                            sample(grid, [](double) { return 0.0; }), 2.0, c2);
  o.check(violations == 0, "lhs <= rhs_L1");
  o.check(lip_violations == 0, "rhs_L1 <= local Lipschitz bound");
  o.check(eq.lhs == eq.rhs_l1 && std::fabs(eq.lhs - c2) <= 1e-12, "equality case");
  o.note("100 pairs, " + std::to_string(violations) + " violations; equality case lhs " + sci(eq.lhs) + ", rhs " +
         sci(eq.rhs_l1));
  return o;
}

Outcome bernstein_bound() {
  Outcome o;
  const PartitionGrid grid = qadic_grid(2, 8);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst_ratio = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const SampledPath z = sample(grid, [&](double) { return u(rng); });
    for (int n : {4, 16, 64}) {
      const double quotient = holder_seminorm(bernstein(z, n), 0.5);
      const double bound = (2.0 * n + 1.0) * z.sup_norm();
      worst_ratio = std::max(worst_ratio, quotient / bound);
    }
  }
  o.check(worst_ratio <= 1.0, "Holder quotient bound");
  o.note("max quotient / ((2n+1)|z|) = " + sci(worst_ratio));
  return o;
}

CoefficientArray random_coefficients(std::mt19937_64& rng, int depth) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  CoefficientArray c = CoefficientArray::zeros(2, depth);
  c.x0 = u(rng);
  c.x1 = u(rng);
  for (auto& lv : c.levels) {
    for (double& v : lv) v = u(rng);
  }
  return c;
}

Outcome splice_check() {
  Outcome o;
  constexpr int kDepth = 10;
  constexpr double kAlpha = 0.5;
  std::mt19937_64 rng(3);
  double worst_agree = 0.0;
  double worst_ratio = 0.0;
  bool xi_equal = true;
  for (int trial = 0; trial < 4; ++trial) {
    const CoefficientArray x = random_coefficients(rng, kDepth);
    const CoefficientArray y = random_coefficients(rng, kDepth);
    const SampledPath xs = synthesize(x, kDepth);
    const SampledPath ys = synthesize(y, kDepth);
    const double hx = grid_norm(xs, NormSelector::holder(kAlpha));
    const double cy = holder_seminorm(ys, kAlpha);
    for (int n : {0, 2, 4, 6}) {
      const CoefficientArray s = splice(x, y, n);
      const SampledPath ss = synthesize(s, kDepth);
      const std::uint64_t stride = int_pow(2, kDepth - n);
      double dist = 0.0;
      for (std::size_t i = 0; i < ss.values.size(); ++i) {
        const double d = std::fabs(ss.values[i] - xs.values[i]);
        dist = std::max(dist, d);
        if (i % stride == 0) worst_agree = std::max(worst_agree, d);
      }
      for (int m = n; m < kDepth; ++m) xi_equal = xi_equal && xi(s, 2.0, m) == xi(y, 2.0, m);
      worst_ratio = std::max(worst_ratio, dist / ((hx + cy) * std::pow(2.0, -n * kAlpha)));
    }
  }
  o.check(worst_agree <= 1e-12, "agreement at level-n points");
  o.check(xi_equal, "xi equality");
  o.check(worst_ratio <= 1.0, "sup-distance bound");
  o.note("agreement gap " + sci(worst_agree) + ", xi equal " + (xi_equal ? "yes" : "no") + ", distance/bound " +
         sci(worst_ratio));
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double budget;
  std::function<Outcome()> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> list = {
      {1, "exact dyadic level identity", 1.0, level_identity},
      {2, "linear p-variation convergence", 10.0, linear_variation},
      {3, "variation constant oracle agreement", 30.0, oracle_agreement},
      {4, "sign-matrix bijection", 5.0, sign_bijection},
      {5, "increment identity", 5.0, increment_identity},
      {6, "prescribed-variation recipe", 20.0, recipe_check},
      {7, "q-adic convergence", 20.0, qadic_convergence},
      {8, "Follmer-Ito exactness", 10.0, ito_check},
      {9, "time-change transport identity", 5.0, time_change},
      {10, "stability bounds", 5.0, stability},
      {11, "Bernstein Holder bound", 5.0, bernstein_bound},
      {12, "splice mechanics", 5.0, splice_check},
  };
  return list;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(std::span<const int> only) {
  std::vector<CriterionResult> out;
  for (const auto& c : criteria()) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    CriterionResult r{c.id, c.name, false, 0.0, c.budget, {}};
    const auto start = std::chrono::steady_clock::now();
    try {
      const Outcome o = c.run();
      r.checks_pass = o.ok;
      r.detail = o.detail;
    } catch (const std::exception& e) {
      r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (r.checks_pass && r.seconds > r.budget_seconds) r.detail += "; over time budget";
    out.push_back(std::move(r));
  }
  return out;
}

std::string format_result(const CriterionResult& r) {
  char head[160];
  std::snprintf(head, sizeof head, "%s %2d  %-36s (%.2f s / %.0f s)  ", r.pass() ? "PASS" : "FAIL", r.id,
                r.name.c_str(), r.seconds, r.budget_seconds);
  return head + r.detail;
}

}  // namespace pvar
