#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "pvar/cli.hpp"
#include "pvar/construct.hpp"
#include "pvar/io.hpp"

using namespace pvar;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("pvar_test_" + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::execute(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("json round trips") {
  const auto table = RefiningTable::random(3, 4, 9);
  CHECK(refining_from_json(to_json(table)).levels == table.levels);

  UniformMagnitudeSpec s;
  s.p = 3.0;
  s.levels = 6;
  s.signs = SignRule::Seeded;
  s.seed = 42;
  const auto c = build_reference(s);
  CHECK(coefficients_from_json(Json::parse(to_json(c).dump())) == c);

  const auto x = reference_path(s, 6);
  const auto back = path_from_json(Json::parse(to_json(x).dump()));
  CHECK(back.values == x.values);
  CHECK(back.grid == x.grid);

  {
    SampledPath w{PartitionGrid{2, 2, {0.0, 0.1, 0.5, 0.7, 1.0}}, {0.0, 1.0, -1.0, 2.0, 0.5}};
    const auto wb = path_from_json(to_json(w));
    CHECK(wb.grid.points == w.grid.points);
    CHECK(wb.values == w.values);
  }

  const auto sb = spec_from_json(to_json(s));
  CHECK(sb.p == s.p);
  CHECK(sb.seed == 42);
  CHECK(sb.signs == SignRule::Seeded);
  CHECK(build_reference(sb) == c);

  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(json_hash(to_json(s)) == json_hash(to_json(sb)));
  CHECK_THROWS_AS(path_from_json(Json::parse(R"({"q":2,"level":3,"values":[0,1]})")), InvalidArgument);
  CHECK_THROWS_AS(spec_from_json(Json::parse(R"({"q":2,"p":"two"})")), InvalidArgument);
}

TEST_CASE("profile csv") {
  const auto x = reference_path(UniformMagnitudeSpec{}, 3);
  const auto csv = profile_csv({pvar_profile(x, 2.0)});
  CHECK(csv.rfind("level,t,value\n", 0) == 0);
  CHECK(csv.find("3,1,0.87") != std::string::npos);
}

TEST_CASE("cli build and analyze") {
  TempDir dir;
  const auto path = dir / "x.json";
  REQUIRE(run({"build", "--p", "2", "--levels", "16", "-o", path}).code == 0);
  CHECK(fs::exists(path + ".manifest.json"));
  const Json j = read_json_file(path);
  CHECK(j["meta"].contains("config_hash"));

  const auto csv = dir / "prof.csv";
  const auto r = run({"analyze", path, "--p", "2", "-o", csv});
  REQUIRE(r.code == 0);
  CHECK(slurp(csv).find("16,1,0.9999847412109") != std::string::npos);

  CHECK(run({"analyze", path, "--levels", "12", "-o", csv}).code == 2);
  CHECK(run({"analyze", dir / "missing.json", "-o", csv}).code == 2);
  std::ofstream(dir / "junk.json") << "{not json";
  CHECK(run({"analyze", dir / "junk.json", "-o", csv}).code == 2);
  CHECK(run({"build", "--bogus", "-o", path}).code == 2);
  CHECK(run({"build", "--p", "0.5", "-o", path}).code == 2);
}

TEST_CASE("cli output is byte-identical across runs") {
  TempDir dir;
  const std::vector<std::string> args{"build", "--p", "3", "--levels", "10", "--signs", "seeded", "--seed", "5", "-o",
                                      dir / "a.json"};
  REQUIRE(run(args).code == 0);
  const auto first = slurp(dir / "a.json");
  const auto manifest = slurp(dir / "a.json.manifest.json");
  REQUIRE(run(args).code == 0);
  CHECK(slurp(dir / "a.json") == first);
  CHECK(slurp(dir / "a.json.manifest.json") == manifest);

  auto other = args;
  other[8] = "6";
  REQUIRE(run(other).code == 0);
  CHECK(slurp(dir / "a.json") != first);
}

TEST_CASE("cli constant") {
  const auto r = run({"constant", "--p", "2", "--J", "25"});
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(std::fabs(j["value"].get<double>() - 1.0) <= j["error_bound"].get<double>());
  CHECK(j["method"] == "exact");
  CHECK(run({"constant", "--p", "3", "--method", "closed"}).code == 2);
  CHECK(run({"constant", "--p", "2", "--J", "40"}).code == 3);
}

TEST_CASE("cli recipe, ito and timechange") {
  TempDir dir;
  auto r = run({"recipe", "--p", "2", "--levels", "12", "--target", "exp", "-o", dir / "y.json", "--profile", dir / "y.csv"});
  REQUIRE(r.code == 0);
  CHECK(r.err.empty());
  CHECK(fs::exists(dir / "y.csv"));

  r = run({"ito", "--p", "4", "--levels", "12", "--f", "poly:0,0,0,0,1", "-o", dir / "res.csv"});
  REQUIRE(r.code == 0);
  CHECK(slurp(dir / "res.csv").rfind("t,residual\n", 0) == 0);
  CHECK(run({"ito", "--p", "3", "--levels", "6", "-o", dir / "res.csv"}).code == 2);

  REQUIRE(run({"build", "--levels", "8", "-o", dir / "x.json"}).code == 0);
  r = run({"timechange", "--warp", "random", "--N", "10", "--input", dir / "x.json", "--table-out", dir / "t.json",
           "-o", dir / "z.json"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("identity gap 0") != std::string::npos);
  r = run({"timechange", "--table", dir / "t.json", "--target", "log", "--levels", "10", "-o", dir / "w.json"});
  CHECK(r.code == 0);

  Json bad = read_json_file(dir / "t.json");
  bad["levels"][3][5] = 0.99;
  write_text_file(dir / "bad.json", bad.dump());
  r = run({"timechange", "--table", dir / "bad.json", "--input", dir / "x.json", "-o", dir / "z.json"});
  CHECK(r.code == 2);
  CHECK(r.err.find("level") != std::string::npos);
}

TEST_CASE("cli budget") {
  TempDir dir;
  setenv("PVAR_MAX_INTERVALS", "1000", 1);
  const auto r = run({"build", "--levels", "12", "-o", dir / "x.json"});
  unsetenv("PVAR_MAX_INTERVALS");
  CHECK(r.code == 3);
  CHECK(run({"build", "--levels", "12", "-o", dir / "x.json"}).code == 0);
}

TEST_CASE("cli selftest subset") {
  const auto r = run({"selftest", "--only", "1,2"});
  CHECK(r.code == 0);
  CHECK(r.out.find("2/2 criteria passed") != std::string::npos);
}
