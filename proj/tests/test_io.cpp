#include <doctest.h>

#include <cstdlib>
#include <string>

#include "homog/error.hpp"
#include "homog/io/config.hpp"
#include "homog/io/csv.hpp"
#include "homog/io/svg.hpp"
#include "instances.hpp"

using namespace homog;
using namespace homog::io;

namespace {

std::string config_error(const std::string& text) {
  try {
    parse_config_text(text, "cfg");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

const char* kMinimal =
    R"({"coefficient": {"spec": {"type": "constant", "value": 1.0}}, "f": {"type": "constant", "value": 1.0}})";

}  // namespace

TEST_CASE("minimal config takes the defaults") {
  const auto c = parse_config_text(kMinimal, "cfg");
  CHECK(c.eps == default_eps_ladder());
  CHECK(c.variants.size() == 3);
  CHECK(c.variants[2].sign == 0);
  CHECK(c.mc.paths == 100000);
  CHECK(c.out_dir == "out");
  CHECK(c.coefficient.is_constant());
}

TEST_CASE("function specs round trip through JSON") {
  const FunctionSpec specs[] = {
      FunctionSpec::constant(0.1),
      FunctionSpec::polynomial({1.0 / 3.0, -2.0, 0.5}),
      FunctionSpec::trig(2.0, {0.1, 0.0}, {1.0, -0.3}, 2.0),
      FunctionSpec::piecewise_constant({0.0, 0.3, 1.0}, {1.0, 2.5}),
  };
  for (const auto& f : specs) {
    const auto back = function_from_json(nlohmann::json::parse(function_to_json(f).dump()), "/f");
    for (double x : {0.0, 0.123, 0.5, 0.97}) CHECK(back(x) == f(x));
  }
}

TEST_CASE("config errors name the offending key") {
  CHECK(config_error(R"({"f": {"type": "constant", "value": 1.0}})").find("/coefficient") != std::string::npos);
  CHECK(config_error(R"({"coefficient": {"spec": {"type": "constant", "value": 1.0}},
                         "f": {"type": "constant", "value": 1.0}, "eps": [0.125, 0.3]})")
            .find("/eps/1") != std::string::npos);
  CHECK(config_error(R"({"coefficient": {"spec": {"type": "constant", "value": -1.0}},
                         "f": {"type": "constant", "value": 1.0}})")
            .find("/coefficient/spec") != std::string::npos);
  CHECK(config_error(R"({"coefficient": {"spec": {"type": "wavelet"}},
                         "f": {"type": "constant", "value": 1.0}})")
            .find("/coefficient/spec/type") != std::string::npos);
  CHECK(config_error(R"({"coefficient": {"spec": {"type": "constant", "value": 1.0}},
                         "f": {"type": "constant", "value": 1.0}, "colour": 3})")
            .find("/colour") != std::string::npos);
  CHECK(config_error(R"({"coefficient": {"spec": {"type": "constant", "value": 1.0}},
                         "f": {"type": "constant", "value": "one"}})")
            .find("/f/value") != std::string::npos);
  CHECK(config_error("{not json").find("cfg") == 0);
  CHECK(config_error(R"({"coefficient": {"spec": {"type": "constant", "value": 1.0}},
                         "f": {"type": "constant", "value": 1.0}, "eps": [0.3], "relaxed": true})")
            .empty());
}

TEST_CASE("doubles survive the CSV text form") {
  for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 1.0 - 1e-16}) {
    CHECK(std::strtod(format_double(x).c_str(), nullptr) == x);
  }
  CsvTable t;
  t.header = {"a", "b"};
  t.add({"1", "2"});
  CHECK(t.render() == "a,b\n1,2\n");
  CHECK_THROWS(t.add({"only one"}));
}

TEST_CASE("solution table layout") {
  SolutionField f;
  f.grid = uniform_grid(2);
  f.values = {0.0, 0.125, 0.0};
  const auto t = solution_table(f);
  CHECK(t.header == std::vector<std::string>{"x", "value", "provenance"});
  REQUIRE(t.rows.size() == 3);
  CHECK(t.rows[1][0] == "0.5");
  CHECK(t.rows[1][1] == "0.125");
}

TEST_CASE("convergence figure structure") {
  const std::vector<ErrorVariant> vs{ErrorVariant::raw()};
  const std::vector<double> ladder{0.125, 0.0625, 0.03125};
  const auto r = sweep(testing::main_coefficient(), testing::sin_pi(), ladder, vs);
  const std::string svg = render_convergence_svg(r);
  CHECK(svg.rfind("<?xml", 0) == 0);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("class=\"fit\"") != std::string::npos);
  CHECK(svg.find("raw") != std::string::npos);
  CHECK_THROWS_AS(render_convergence_svg(ConvergenceReport{}), PreconditionError);
  CHECK_THROWS_AS(render_lines_svg("empty", {}), PreconditionError);
  CHECK(render_lines_svg("line", {Polyline{"u", {0.0, 1.0}, {0.0, 1.0}}}).find("polyline") != std::string::npos);
}
