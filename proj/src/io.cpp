#include "pvar/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace pvar {

namespace {

template <class T>
T field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InvalidArgument(std::string("missing JSON field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw InvalidArgument(std::string("bad JSON field '") + key + "': " + e.what());
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json to_json(const RefiningTable& table) {
  Json levels = Json::array();
  for (const auto& g : table.levels) levels.push_back(g.points);
  return {{"q", table.q}, {"levels", levels}};
}

RefiningTable refining_from_json(const Json& j) {
  RefiningTable t{field<int>(j, "q"), {}};
  const auto levels = field<std::vector<std::vector<double>>>(j, "levels");
  for (std::size_t n = 0; n < levels.size(); ++n) {
    t.levels.push_back(PartitionGrid{t.q, static_cast<int>(n), levels[n]});
  }
  return t;
}

Json to_json(const CoefficientArray& c) {
  return {{"q", c.q}, {"boundary", {c.x0, c.x1}}, {"levels", c.levels}};
}

CoefficientArray coefficients_from_json(const Json& j) {
  CoefficientArray c;
  c.q = field<int>(j, "q");
  const auto b = field<std::vector<double>>(j, "boundary");
  if (b.size() != 2) throw InvalidArgument("coefficient boundary needs two values");
  c.x0 = b[0];
  c.x1 = b[1];
  c.levels = field<std::vector<std::vector<double>>>(j, "levels");
  c.validate();
  return c;
}

Json to_json(const SampledPath& path) {
  Json j = {{"q", path.q()}, {"level", path.level()}, {"values", path.values}, {"meta", path.meta}};
  if (!path.grid.is_qadic()) j["points"] = path.grid.points;
  return j;
}

SampledPath path_from_json(const Json& j) {
  const int q = field<int>(j, "q");
  const int level = field<int>(j, "level");
  SampledPath path;
  if (j.contains("points")) {
    path.grid = PartitionGrid{q, level, field<std::vector<double>>(j, "points")};
  } else {
    path.grid = qadic_grid(q, level);
  }
  path.values = field<std::vector<double>>(j, "values");
  if (j.contains("meta")) path.meta = j.at("meta");
  if (path.values.size() != path.grid.points.size()) {
    throw InvalidArgument("path JSON: " + std::to_string(path.values.size()) + " values for a grid of " +
                          std::to_string(path.grid.points.size()) + " points");
  }
  return path;
}

Json to_json(const VariationProfile& profile) {
  return {{"p", profile.p}, {"level", profile.level}, {"t", profile.eval_points}, {"values", profile.values}};
}

std::string profile_csv(const std::vector<VariationProfile>& profiles) {
  std::string out = "level,t,value\n";
  for (const auto& prof : profiles) {
    for (std::size_t i = 0; i < prof.values.size(); ++i) {
      out += std::to_string(prof.level) + "," + format_double(prof.eval_points[i]) + "," +
             format_double(prof.values[i]) + "\n";
    }
  }
  return out;
}

Json to_json(const UniformMagnitudeSpec& spec) {
  Json j = {{"q", spec.q}, {"p", spec.p}, {"levels", spec.levels}};
  j["c_rule"] = spec.c_values.empty() ? Json("default") : Json(spec.c_values);
  switch (spec.signs) {
    case SignRule::Plus: j["signs"] = "plus"; break;
    case SignRule::Seeded: j["signs"] = {{"seed", spec.seed}}; break;
    case SignRule::Explicit: j["signs"] = spec.explicit_signs; break;
  }
  j["a"] = spec.branch();
  return j;
}

UniformMagnitudeSpec spec_from_json(const Json& j) {
  UniformMagnitudeSpec s;
  s.q = field<int>(j, "q");
  s.p = field<double>(j, "p");
  if (j.contains("levels")) s.levels = field<int>(j, "levels");
  if (j.contains("c_rule")) {
    const Json& c = j.at("c_rule");
    if (c.is_string()) {
      if (c.get<std::string>() != "default") throw InvalidArgument("c_rule must be \"default\" or a list");
    } else {
      s.c_values = field<std::vector<double>>(j, "c_rule");
    }
  }
  if (j.contains("signs")) {
    const Json& sg = j.at("signs");
    if (sg.is_string()) {
      if (sg.get<std::string>() != "plus") throw InvalidArgument("signs must be \"plus\", {\"seed\": n} or a list");
      s.signs = SignRule::Plus;
    } else if (sg.is_object()) {
      s.signs = SignRule::Seeded;
      s.seed = field<std::uint64_t>(sg, "seed");
    } else {
      s.signs = SignRule::Explicit;
      s.explicit_signs = field<std::vector<std::vector<int>>>(j, "signs");
    }
  }
  if (j.contains("a")) s.a = field<std::vector<double>>(j, "a");
  s.validate();
  return s;
}

Json to_json(const VariationConstant& c) {
  Json j = {{"value", c.value}, {"method", to_string(c.method)}, {"error_bound", c.error_bound}};
  if (c.method != ConstantMethod::Closed) {
    j["J"] = c.J;
    j["tail_bound"] = c.tail_bound;
  }
  if (c.method == ConstantMethod::MonteCarlo) {
    j["samples"] = c.samples;
    j["seed"] = c.seed;
    j["std_error"] = c.std_error;
  }
  return j;
}

std::string residual_csv(const ResidualProfile& r) {
  std::string out = "t,residual\n";
  for (std::size_t i = 0; i < r.t.size(); ++i) out += format_double(r.t[i]) + "," + format_double(r.residual[i]) + "\n";
  return out;
}

Json norm_report(const NormSelector& selector, double value) {
  return {{"selector", selector.name()}, {"value", value}};
}

std::string grid_csv(const PartitionGrid& grid) {
  std::string out;
  for (double t : grid.points) out += format_double(t) + "\n";
  return out;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InvalidArgument("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write '" + path + "'");
  out << text;
  if (!out) throw InvalidArgument("write to '" + path + "' failed");
}

std::string json_hash(const Json& j) { return hex64(fnv1a(j.dump())); }

}  // namespace pvar
