#include <cstdlib>
#include <filesystem>

#include "doctest.h"
#include "filippov/errors.hpp"
#include "filippov/io.hpp"
#include "filippov/models.hpp"
#include "filippov/scenarios.hpp"

using namespace filippov;

#ifndef FILIPPOV_DATA_DIR
#define FILIPPOV_DATA_DIR "data"
#endif

namespace {

const std::string kData = FILIPPOV_DATA_DIR;

const char* kMinimal = R"({
  "f": [[1, 0, 1]],
  "X": [[[0, 0, -1]], [[0, 0, 0.5]]],
  "Y": [[[0, 0, 1]], [[0, 0, 0.5]]],
  "K": [-1, 1, -1, 1],
  "sigma": {"kind": "vertical-line", "x0": 0, "alpha": -1, "beta": 1}
})";

std::string schema_error(const std::string& text) {
  try {
    parse_system(text);
  } catch (const SchemaError& e) {
    return e.what();
  }
  return "";
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
  const auto k = s.find(from);
  REQUIRE(k != std::string::npos);
  return s.replace(k, from.size(), to);
}

}  // namespace

TEST_CASE("shipped scenario files load to the registered systems") {
  for (const auto& name : scenario_names()) {
    const std::string path = kData + "/scenarios/" + name + ".json";
    const PiecewiseSystem sys = load_system(path);
    CHECK(sys == builtin_scenario(name).system);
    CHECK(sys.name == name);
  }
  CHECK(load_system(kData + "/scenarios/linear-center-center.json") == linear_center_center());
  const PiecewiseSystem tz = load_system(kData + "/scenarios/three-zone.json");
  CHECK(tz.curve().f() == Poly2({{2, 0, 1.0}, {0, 0, -1.0}}));
  CHECK(tz.X() == three_zone().X());
}

TEST_CASE("shipped scenario files round-trip byte for byte") {
  for (const auto& name : scenario_names()) {
    const std::string path = kData + "/scenarios/" + name + ".json";
    const std::string text = read_text(path);
    CHECK(dump_scenario(load_scenario(path)) == text);
    CHECK(dump_scenario(builtin_scenario(name)) == text);
  }
}

TEST_CASE("system dump round-trips") {
  for (const auto& name : scenario_names()) {
    const PiecewiseSystem sys = builtin_scenario(name).system;
    const std::string a = dump_system(sys);
    CHECK(parse_system(a) == sys);
    CHECK(dump_system(parse_system(a)) == a);
  }
}

TEST_CASE("parse errors carry line and column") {
  CHECK_THROWS_AS(parse_system(""), ParseError);
  try {
    parse_system("{\n  \"f\": [[1, 0, 1]],\n  \"X\": [}\n", "bad.json");
    FAIL("no error");
  } catch (const ParseError& e) {
    const std::string w = e.what();
    CHECK(w.rfind("bad.json:3:", 0) == 0);
  }
}

TEST_CASE("schema errors name the field") {
  CHECK(parse_system(kMinimal).K() == Box{-1, 1, -1, 1});
  CHECK(schema_error(replace(kMinimal, "\"K\"", "\"Q\"")).find("'Q'") != std::string::npos);
  CHECK(schema_error(replace(kMinimal, "[[0, 0, -1]]", "[[0, 0]]")).find("X[0][0]") != std::string::npos);
  CHECK(schema_error(replace(kMinimal, "vertical-line", "spiral")).find("sigma.kind") != std::string::npos);
  CHECK(schema_error(replace(kMinimal, "\"x0\": 0", "\"x0\": \"a\"")).find("sigma.x0") != std::string::npos);
  CHECK(schema_error(replace(kMinimal, "[-1, 1, -1, 1]", "[1, -1, -1, 1]")).find("'K'") != std::string::npos);
  CHECK(schema_error(replace(kMinimal, "\"alpha\": -1", "\"alpha\": -1, \"gamma\": 2"))
            .find("sigma.gamma") != std::string::npos);
  CHECK(schema_error(replace(kMinimal, "[[1, 0, 1]]", "[]")).find("'f'") != std::string::npos);
}

TEST_CASE("circle and parametric charts parse") {
  const std::string circ = replace(kMinimal, R"({"kind": "vertical-line", "x0": 0, "alpha": -1, "beta": 1})",
                                   R"({"kind": "circle", "center": [0, 0], "radius": 0.5, "alpha": 0, "beta": 6.28})");
  CHECK(parse_system(circ).curve().chart(0).kind == ChartKind::Circle);
  const std::string par = replace(kMinimal, R"({"kind": "vertical-line", "x0": 0, "alpha": -1, "beta": 1})",
                                  R"({"kind": "explicit-parametric", "px": [0], "py": [0, 1], "alpha": -1, "beta": 1})");
  const PiecewiseSystem sys = parse_system(par);
  CHECK(sys.curve().chart(0).point(0.25) == Vec2{0, 0.25});
  CHECK(dump_system(parse_system(dump_system(sys))) == dump_system(sys));
}

TEST_CASE("run configuration") {
  const RunConfig c = parse_run_config(
      R"({"system": "s.json", "p0": [1, 2], "seed": 4, "tolerances": {"flow": 1e-10}, "csv": "o.csv"})");
  CHECK(c.p0 == Vec2{1, 2});
  CHECK(*c.seed == 4u);
  CHECK(c.apply(Tolerances{}).flow == 1e-10);
  CHECK_THROWS_AS(parse_run_config(R"({"system": "s.json", "colour": 1})"), ConfigError);
  CHECK_THROWS_AS(parse_run_config(R"({"system": "s.json", "tolerances": {"flow": 1e-1}})"), ConfigError);
  CHECK_THROWS_AS(parse_run_config(R"({"system": "s.json", "tolerances": {"flow": 1e-15}})"), ConfigError);
  CHECK_THROWS_AS(parse_run_config(R"({"system": "s.json", "tolerances": {"wobble": 1e-5}})"), ConfigError);
  CHECK(parse_run_config(R"({"system": "s.json"})", "dir/run.json").system == "dir/s.json");
}

TEST_CASE("tolerance environment overrides") {
  ::setenv("FILIPPOV_TOL_CYCLE", "2e-6", 1);
  CHECK(Tolerances{}.with_env_overrides().cycle == 2e-6);
  ::setenv("FILIPPOV_TOL_CYCLE", "0.5", 1);
  CHECK_THROWS_AS(Tolerances{}.with_env_overrides(), ConfigError);
  ::unsetenv("FILIPPOV_TOL_CYCLE");
}

TEST_CASE("CSV and SVG are deterministic") {
  const HybridModel m(linear_center_center());
  const Trajectory a = simulate(m, Start{{2, 0}}, 100, Policy::seeded_random(3));
  const Trajectory b = simulate(m, Start{{2, 0}}, 100, Policy::seeded_random(3));
  const std::string csv = trajectory_csv(a);
  CHECK(csv == trajectory_csv(b));
  CHECK(csv.rfind("t,x,y,mode,arc_index,event_flag\n", 0) == 0);
  SvgLayers la, lb;
  la.trajectory = &a;
  lb.trajectory = &b;
  CHECK(render_svg(m, la) == render_svg(m, lb));
}

TEST_CASE("SVG content") {
  const HybridModel m(linear_center_center());
  const std::string empty = render_svg(m, SvgLayers{});
  CHECK(empty.rfind("<svg", 0) == 0);
  CHECK(empty.find("viewBox=\"0 0 800 800\"") != std::string::npos);
  // both region kinds, the tangency and the pseudo-equilibrium
  CHECK(empty.find("#1f77b4") != std::string::npos);
  CHECK(empty.find("#d62728") != std::string::npos);
  CHECK(empty.find("T2 (0,-1)") != std::string::npos);
  CHECK(empty.find("PE (0,") != std::string::npos);
  CHECK(empty.find("stroke-width=\"1.5\"") == std::string::npos);  // no arcs
  const LambdaRegion L = construct_lambda(m, -1.0);
  SvgLayers with;
  with.lambda = &L;
  CHECK(render_svg(m, with).find("fill-opacity=\"0.3\"") != std::string::npos);
}

TEST_CASE("write errors raise IoError") {
  CHECK_THROWS_AS(write_text("/nonexistent-dir/x.svg", "x"), IoError);
  CHECK_THROWS_AS(read_text("/nonexistent-dir/x.json"), IoError);
}
