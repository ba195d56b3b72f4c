#include "pvar/cli.hpp"

#include <cmath>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "pvar/acceptance.hpp"
#include "pvar/calculus.hpp"
#include "pvar/constant.hpp"
#include "pvar/construct.hpp"
#include "pvar/io.hpp"
#include "pvar/timechange.hpp"

namespace pvar::cli {

namespace {

struct Options {
  // shared
  std::string output;
  std::string input;
  std::string spec_file;
  int q = 2;
  double p = 2.0;
  int levels = 16;
  std::uint64_t seed = 0;
  std::vector<double> a;
  // build
  std::string signs = "plus";
  std::string coeffs_out;
  // analyze
  std::optional<int> expect_levels;
  std::optional<int> expect_q;
  std::string json_out;
  std::vector<double> index_ps;
  // constant
  std::string method = "exact";
  int J = 0;
  std::uint64_t samples = 1000000;
  int strata = 10;
  // recipe / timechange
  std::string target = "linear";
  double param = 1.0;
  std::string profile_out;
  // ito
  std::string f = "poly:0,0,1";
  // timechange
  std::string table_file;
  std::string warp = "square";
  int table_levels = 10;
  std::string table_out;
  std::string H;
  // selftest
  std::vector<int> only;
};

UniformMagnitudeSpec spec_from_options(const Options& o) {
  if (!o.spec_file.empty()) return spec_from_json(read_json_file(o.spec_file));
  UniformMagnitudeSpec s;
  s.q = o.q;
  s.p = o.p;
  s.levels = o.levels;
  s.a = o.a;
  s.seed = o.seed;
  if (o.signs == "plus") {
    s.signs = SignRule::Plus;
  } else if (o.signs == "seeded") {
    s.signs = SignRule::Seeded;
  } else {
    throw InvalidArgument("--signs must be plus or seeded (explicit signs go through --spec)");
  }
  s.validate();
  return s;
}

// Every option of the subcommand with its resolved value.
Json resolved_config(const CLI::App& sub) {
  Json cfg = {{"subcommand", sub.get_name()}};
  for (const CLI::Option* opt : sub.get_options()) {
    if (opt->get_name() == "--help") continue;
    const std::string key = opt->get_name();
    if (opt->count() > 0) {
      const auto& res = opt->results();
      cfg[key] = res.size() == 1 ? Json(res.front()) : Json(res);
    } else {
      cfg[key] = opt->get_default_str();
    }
  }
  return cfg;
}

void write_manifest(const std::string& artifact, const Json& config) {
  Json manifest = {{"config", config}, {"config_hash", json_hash(config)}, {"artifact", artifact}};
  write_text_file(artifact + ".manifest.json", manifest.dump(2) + "\n");
}

void write_json_artifact(const std::string& path, Json body, const Json& config) {
  if (body.is_object()) {
    if (!body.contains("meta") || !body["meta"].is_object()) body["meta"] = Json::object();
    body["meta"]["config_hash"] = json_hash(config);
  }
  write_text_file(path, body.dump() + "\n");
  write_manifest(path, config);
}

FunctionWithDerivatives parse_function(const std::string& s, int order) {
  if (s == "exp") return FunctionWithDerivatives::exponential(order);
  if (s == "sin") return FunctionWithDerivatives::sine(order);
  if (s.rfind("poly:", 0) == 0) {
    std::vector<double> coeffs;
    std::stringstream ss(s.substr(5));
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        coeffs.push_back(std::stod(item));
      } catch (const std::exception&) {
        throw InvalidArgument("bad polynomial coefficient '" + item + "'");
      }
    }
    if (coeffs.empty()) throw InvalidArgument("polynomial needs coefficients");
    return FunctionWithDerivatives::polynomial(coeffs, order);
  }
  throw InvalidArgument("unknown function '" + s + "' (expected poly:c0,c1,..., exp or sin)");
}

int even_p(double p) {
  if (p != std::round(p) || static_cast<int>(p) % 2 != 0 || p < 2) {
    throw InvalidArgument("ito needs an even integer --p; odd or fractional p is not supported");
  }
  return static_cast<int>(p);
}

int run_build(const Options& o, const Json& cfg, std::ostream& out) {
  if (o.output.empty()) throw InvalidArgument("build needs -o");
  const UniformMagnitudeSpec spec = spec_from_options(o);
  const SampledPath path = reference_path(spec, spec.levels);
  write_json_artifact(o.output, to_json(path), cfg);
  if (!o.coeffs_out.empty()) write_json_artifact(o.coeffs_out, to_json(build_reference(spec)), cfg);
  out << "wrote " << path.values.size() << " values at level " << path.level() << " to " << o.output << "\n";
  return 0;
}

int run_analyze(const Options& o, const Json& cfg, std::ostream& out) {
  if (o.output.empty()) throw InvalidArgument("analyze needs -o");
  const Json j = read_json_file(o.input);
  const SampledPath path = path_from_json(j);
  if (o.expect_levels && *o.expect_levels != path.level()) {
    throw InvalidArgument("input has level " + std::to_string(path.level()) + " but --levels is " +
                          std::to_string(*o.expect_levels));
  }
  if (o.expect_q && *o.expect_q != path.q()) {
    throw InvalidArgument("input has q=" + std::to_string(path.q()) + " but --q is " + std::to_string(*o.expect_q));
  }
  if (path.meta.contains("truncation_level") && path.meta["truncation_level"] != path.level()) {
    throw InvalidArgument("input metadata truncation_level disagrees with its level");
  }
  if (path.meta.contains("spec") && path.meta["spec"].value("q", path.q()) != path.q()) {
    throw InvalidArgument("input metadata spec q disagrees with its q");
  }
  if (!path.grid.is_qadic()) throw InvalidArgument("analyze expects a q-adic path");
  std::vector<VariationProfile> profiles;
  for (int n = 0; n <= path.level(); ++n) profiles.push_back(pvar_profile(restrict_to_level(path, n), o.p));
  write_text_file(o.output, profile_csv(profiles));
  write_manifest(o.output, cfg);
  if (!o.json_out.empty()) {
    Json arr = Json::array();
    for (const auto& prof : profiles) arr.push_back(to_json(prof));
    write_json_artifact(o.json_out, Json{{"profiles", arr}}, cfg);
  }
  const double last = profiles.back().values.back();
  out << "level " << path.level() << " p=" << format_double(o.p) << " value " << format_double(last);
  if (profiles.size() > 1) {
    out << " cauchy gap " << format_double(std::fabs(last - profiles[profiles.size() - 2].values.back()));
  }
  out << "\n";
  if (!o.index_ps.empty() && path.level() >= 4) {
    const CoefficientArray coeffs = analyze(path);
    for (const auto& row : variation_index_estimate(coeffs, o.index_ps)) {
      out << "p=" << format_double(row.p) << " xi slope " << format_double(row.slope) << " " << to_string(row.trend)
          << "\n";
    }
  }
  return 0;
}

int run_constant(const Options& o, const Json& cfg, std::ostream& out) {
  ConstantOptions opt;
  opt.J = o.J;
  opt.samples = o.samples;
  opt.seed = o.seed;
  opt.strata_depth = o.strata;
  const VariationConstant c = variation_constant(o.p, o.q, o.a, constant_method_from_string(o.method), opt);
  Json report = to_json(c);
  report["p"] = o.p;
  report["q"] = o.q;
  report["meta"] = {{"config_hash", json_hash(cfg)}};
  if (!o.output.empty()) write_json_artifact(o.output, report, cfg);
  out << report.dump() << "\n";
  return 0;
}

SampledPath sampled_target(const TargetFamily& h, const PartitionGrid& grid) { return sample(grid, h.hprime); }

int run_recipe(const Options& o, const Json& cfg, std::ostream& out, std::ostream& err) {
  if (o.output.empty()) throw InvalidArgument("recipe needs -o");
  const UniformMagnitudeSpec spec = spec_from_options(o);
  const TargetFamily h = TargetFamily::by_name(o.target, o.param);
  const VariationConstant c = variation_constant(spec.p, spec.q, spec.branch(), ConstantMethod::Exact);
  const RecipeResult r = recipe(sampled_target(h, qadic_grid(spec.q, spec.levels)), spec.p, spec, c.value);
  if (r.warning) {
    err << "warning: (h')^(1/p) does not show vanishing p-th variation (trend " << to_string(r.vanishing.trend)
        << ", slope " << format_double(r.vanishing.slope) << ")\n";
  }
  SampledPath y = r.y;
  y.meta["target"] = {{"name", h.name}, {"param", o.param}};
  y.meta["constant"] = to_json(c);
  write_json_artifact(o.output, to_json(y), cfg);
  const VariationProfile prof = pvar_profile(y, spec.p);
  double worst = 0.0;
  for (std::size_t i = 0; i < prof.values.size(); ++i) {
    worst = std::max(worst, std::fabs(prof.values[i] - h.h(prof.eval_points[i])));
  }
  if (!o.profile_out.empty()) {
    write_text_file(o.profile_out, profile_csv({prof}));
    write_manifest(o.profile_out, cfg);
  }
  out << "recipe " << h.name << " level " << y.level() << " sup |[y] - h| " << format_double(worst) << "\n";
  return 0;
}

int run_ito(const Options& o, const Json& cfg, std::ostream& out) {
  if (o.output.empty()) throw InvalidArgument("ito needs -o");
  const int p = even_p(o.p);
  SampledPath y;
  if (!o.input.empty()) {
    y = path_from_json(read_json_file(o.input));
  } else {
    y = reference_path(spec_from_options(o), o.levels);
  }
  const FunctionWithDerivatives f = parse_function(o.f, p);
  const ResidualProfile r = change_of_variable_residual(f, y, p);
  write_text_file(o.output, residual_csv(r));
  write_manifest(o.output, cfg);
  out << "level " << y.level() << " sup residual " << format_double(r.sup) << "\n";
  return 0;
}

RefiningTable table_from_options(const Options& o) {
  if (!o.table_file.empty()) return refining_from_json(read_json_file(o.table_file));
  if (o.warp == "square") return RefiningTable::warped(o.q, o.table_levels, [](double t) { return t * t; });
  if (o.warp == "identity") return RefiningTable::qadic(o.q, o.table_levels);
  if (o.warp == "random") return RefiningTable::random(o.q, o.table_levels, o.seed);
  throw InvalidArgument("--warp must be square, identity or random");
}

int run_timechange(const Options& o, const Json& cfg, std::ostream& out) {
  if (o.output.empty()) throw InvalidArgument("timechange needs -o");
  const RefiningTable table = table_from_options(o);
  const HomeomorphismTable phi = build_homeomorphism(table);
  if (!o.table_out.empty()) write_json_artifact(o.table_out, to_json(table), cfg);
  if (!o.H.empty()) {
    UniformMagnitudeSpec spec = spec_from_options(o);
    spec.q = phi.q();
    const int n = std::min(spec.levels, phi.top_level());
    const TargetFamily H = TargetFamily::by_name(o.H, o.param);
    const auto pts = phi.level_points(n);
    std::vector<double> samples(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) samples[i] = H.h(pts[i]);
    const VariationConstant c = variation_constant(spec.p, spec.q, spec.branch(), ConstantMethod::Exact);
    const TransportedRecipe tr = transported_recipe(samples, spec.p, phi, spec, c.value, n);
    write_json_artifact(o.output, to_json(tr.y), cfg);
    const VariationProfile prof = pvar_profile(tr.y, spec.p);
    double worst = 0.0;
    for (std::size_t i = 0; i < prof.values.size(); ++i) {
      worst = std::max(worst, std::fabs(prof.values[i] - H.h(prof.eval_points[i])));
    }
    out << "transported recipe " << H.name << " level " << n << " sup |[y] - H| " << format_double(worst) << "\n";
    return 0;
  }
  if (o.input.empty()) throw InvalidArgument("timechange needs --input or --target");
  const SampledPath x = path_from_json(read_json_file(o.input));
  const SampledPath pulled = pullback_path(x, phi);
  write_json_artifact(o.output, to_json(pulled), cfg);
  out << "identity gap " << format_double(transported_pvar_check(x, phi, o.p)) << "\n";
  return 0;
}

int run_selftest(const Options& o, std::ostream& out) {
  const auto results = run_acceptance(o.only);
  int failed = 0;
  for (const auto& r : results) {
    out << format_result(r) << "\n";
    if (!r.pass()) ++failed;
  }
  out << (results.size() - static_cast<std::size_t>(failed)) << "/" << results.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}

void add_spec_options(CLI::App* sub, Options& o) {
  sub->add_option("--q", o.q, "branching factor")->check(CLI::Range(2, 64));
  sub->add_option("--p", o.p, "variation exponent");
  sub->add_option("--levels", o.levels, "coefficient levels / grid level")->check(CLI::Range(1, 62));
  sub->add_option("--signs", o.signs, "plus or seeded");
  sub->add_option("--seed", o.seed, "random seed");
  sub->add_option("--a", o.a, "branch weights (q-1 values)")->delimiter(',');
  sub->add_option("--spec", o.spec_file, "spec JSON (overrides the flags above)");
}

}  // namespace

int execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Paths with prescribed p-th variation", "pvar"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  Options o;

  auto* build = app.add_subcommand("build", "synthesize a reference path");
  build->option_defaults()->always_capture_default();
  add_spec_options(build, o);
  build->add_option("-o,--output", o.output, "path JSON")->required();
  build->add_option("--coeffs", o.coeffs_out, "also write the coefficient array");

  auto* analyze_cmd = app.add_subcommand("analyze", "variation profiles of a sampled path");
  analyze_cmd->option_defaults()->always_capture_default();
  analyze_cmd->add_option("input", o.input, "path JSON")->required();
  analyze_cmd->add_option("--p", o.p, "variation exponent");
  analyze_cmd->add_option("--levels", o.expect_levels, "expected level of the input");
  analyze_cmd->add_option("--q", o.expect_q, "expected q of the input");
  analyze_cmd->add_option("-o,--output", o.output, "profile CSV")->required();
  analyze_cmd->add_option("--json", o.json_out, "profile JSON");
  analyze_cmd->add_option("--index-p", o.index_ps, "exponents for the xi trend table")->delimiter(',');

  auto* constant = app.add_subcommand("constant", "variation constant C_{p,q,a}");
  constant->option_defaults()->always_capture_default();
  constant->add_option("--p", o.p, "variation exponent");
  constant->add_option("--q", o.q, "branching factor")->check(CLI::Range(2, 64));
  constant->add_option("--a", o.a, "branch weights")->delimiter(',');
  constant->add_option("--method", o.method, "exact, mc or closed");
  constant->add_option("--J", o.J, "truncation depth (0: automatic)")->check(CLI::Range(0, 4096));
  constant->add_option("--N", o.samples, "Monte Carlo samples");
  constant->add_option("--seed", o.seed, "random seed");
  constant->add_option("--strata", o.strata, "Monte Carlo strata depth")->check(CLI::Range(0, 40));
  constant->add_option("-o,--output", o.output, "report JSON");

  auto* recipe_cmd = app.add_subcommand("recipe", "path with prescribed p-th variation");
  recipe_cmd->option_defaults()->always_capture_default();
  add_spec_options(recipe_cmd, o);
  recipe_cmd->add_option("--target", o.target, "h: linear, exp or log");
  recipe_cmd->add_option("--param", o.param, "exp rate a or log scale b");
  recipe_cmd->add_option("-o,--output", o.output, "path JSON")->required();
  recipe_cmd->add_option("--profile", o.profile_out, "profile CSV");

  auto* ito = app.add_subcommand("ito", "change-of-variable residual");
  ito->option_defaults()->always_capture_default();
  add_spec_options(ito, o);
  ito->add_option("--input", o.input, "path JSON (default: the reference path)");
  ito->add_option("--f", o.f, "poly:c0,c1,..., exp or sin");
  ito->add_option("-o,--output", o.output, "residual CSV")->required();

  auto* tc = app.add_subcommand("timechange", "transport along a q-refining sequence");
  tc->option_defaults()->always_capture_default();
  add_spec_options(tc, o);
  tc->add_option("--table", o.table_file, "refining table JSON");
  tc->add_option("--warp", o.warp, "square, identity or random (when no --table)");
  tc->add_option("--N", o.table_levels, "table levels (when no --table)")->check(CLI::Range(0, 62));
  tc->add_option("--table-out", o.table_out, "write the table JSON");
  tc->add_option("--input", o.input, "q-adic path JSON to pull back");
  tc->add_option("--target", o.H, "run the transported recipe for H: linear, exp or log");
  tc->add_option("--param", o.param, "target parameter");
  tc->add_option("-o,--output", o.output, "path JSON")->required();

  auto* selftest = app.add_subcommand("selftest", "run the acceptance suite");
  selftest->add_option("--only", o.only, "criterion ids")->delimiter(',');

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  try {
    const Json cfg = resolved_config(*sub);
    const std::string name = sub->get_name();
    if (name == "build") return run_build(o, cfg, out);
    if (name == "analyze") return run_analyze(o, cfg, out);
    if (name == "constant") return run_constant(o, cfg, out);
    if (name == "recipe") return run_recipe(o, cfg, out, err);
    if (name == "ito") return run_ito(o, cfg, out);
    if (name == "timechange") return run_timechange(o, cfg, out);
    return run_selftest(o, out);
  } catch (const BudgetExceeded& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

int execute(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return execute(args, std::cout, std::cerr);
}

}  // namespace pvar::cli
