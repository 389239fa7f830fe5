#include "homog/io/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "homog/error.hpp"

namespace homog::io {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError((where.empty() ? std::string("/") : where) + ": " + what);
}

void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : allowed) known = known || it.key() == k;
    if (!known) fail(where + "/" + it.key(), "unknown key");
  }
}

const json& require(const json& j, const std::string& where, const char* key) {
  if (!j.contains(key)) fail(where + "/" + key, "missing required key");
  return j.at(key);
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number, got " + std::string(j.type_name()));
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(where, "expected a finite number");
  return v;
}

std::vector<double> numbers(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], where + "/" + std::to_string(i)));
  return out;
}

std::uint64_t count(const json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 0)
    fail(where, "expected a non-negative integer");
  return j.get<std::uint64_t>();
}

bool boolean(const json& j, const std::string& where) {
  if (!j.is_boolean()) fail(where, "expected true or false");
  return j.get<bool>();
}

std::string text(const json& j, const std::string& where) {
  if (!j.is_string()) fail(where, "expected a string");
  return j.get<std::string>();
}

template <class F>
auto wrap_precondition(const std::string& where, F&& make) {
  try {
    return make();
  } catch (const PreconditionError& e) {
    fail(where, e.what());
  }
}

ErrorVariant parse_variant(const std::string& name, const std::string& where) {
  if (name == "corrected") return ErrorVariant{ErrorKind::Corrected, 0};
  return wrap_precondition(where, [&] { return ErrorVariant::parse(name); });
}

}  // namespace

FunctionSpec function_from_json(const json& j, const std::string& where) {
  if (!j.is_object()) fail(where, "expected a function object with a \"type\" key");
  const std::string type = text(require(j, where, "type"), where + "/type");
  if (type == "constant") {
    check_keys(j, where, {"type", "value"});
    return FunctionSpec::constant(number(require(j, where, "value"), where + "/value"));
  }
  if (type == "polynomial") {
    check_keys(j, where, {"type", "coefficients"});
    auto c = numbers(require(j, where, "coefficients"), where + "/coefficients");
    return wrap_precondition(where, [&] { return FunctionSpec::polynomial(std::move(c)); });
  }
  if (type == "trig") {
    check_keys(j, where, {"type", "mean", "cos", "sin", "period"});
    const double mean = j.contains("mean") ? number(j.at("mean"), where + "/mean") : 0.0;
    auto cs = j.contains("cos") ? numbers(j.at("cos"), where + "/cos") : std::vector<double>{};
    auto ss = j.contains("sin") ? numbers(j.at("sin"), where + "/sin") : std::vector<double>{};
    const double period = j.contains("period") ? number(j.at("period"), where + "/period") : 1.0;
    return wrap_precondition(where, [&] { return FunctionSpec::trig(mean, cs, ss, period); });
  }
  if (type == "piecewise") {
    check_keys(j, where, {"type", "breakpoints", "values"});
    auto b = numbers(require(j, where, "breakpoints"), where + "/breakpoints");
    auto v = numbers(require(j, where, "values"), where + "/values");
    return wrap_precondition(where, [&] { return FunctionSpec::piecewise_constant(b, v); });
  }
  fail(where + "/type", "unknown function type \"" + type +
                            "\" (expected constant, polynomial, trig or piecewise)");
}

json function_to_json(const FunctionSpec& f) {
  return std::visit(
      [](const auto& rep) -> json {
        using T = std::decay_t<decltype(rep)>;
        if constexpr (std::is_same_v<T, Constant>) {
          return {{"type", "constant"}, {"value", rep.value}};
        } else if constexpr (std::is_same_v<T, Polynomial>) {
          return {{"type", "polynomial"}, {"coefficients", rep.coefficients}};
        } else if constexpr (std::is_same_v<T, TrigSeries>) {
          return {{"type", "trig"}, {"mean", rep.mean}, {"cos", rep.cosines},
                  {"sin", rep.sines}, {"period", rep.period}};
        } else if constexpr (std::is_same_v<T, PiecewiseConstant>) {
          return {{"type", "piecewise"}, {"breakpoints", rep.breakpoints}, {"values", rep.values}};
        } else {
          throw ConfigError("function class has no config representation");
        }
      },
      f.variant());
}

PathParams ExperimentConfig::path_params() const {
  return PathParams{mc.x, mc.t, mc.dt, mc.paths, mc.seed};
}

ExperimentConfig parse_config(const json& j) {
  if (!j.is_object()) fail("", "configuration must be a JSON object");
  check_keys(j, "", {"coefficient", "f", "eps", "variants", "grid", "relaxed", "monte_carlo",
                     "output"});
  ExperimentConfig c;

  const json& coeff = require(j, "", "coefficient");
  if (!coeff.is_object()) fail("/coefficient", "expected an object");
  check_keys(coeff, "/coefficient", {"convention", "spec"});
  const std::string convention =
      coeff.contains("convention") ? text(coeff.at("convention"), "/coefficient/convention") : "a";
  const auto spec = function_from_json(require(coeff, "/coefficient", "spec"), "/coefficient/spec");
  if (convention == "a") {
    c.coefficient = wrap_precondition("/coefficient/spec", [&] {
      return PeriodicCoefficient::from_profile(spec);
    });
  } else if (convention == "inverse") {
    c.coefficient = wrap_precondition("/coefficient/spec", [&] {
      return PeriodicCoefficient::from_reciprocal(spec);
    });
  } else {
    fail("/coefficient/convention", "expected \"a\" or \"inverse\"");
  }

  c.f = function_from_json(require(j, "", "f"), "/f");

  if (j.contains("relaxed")) c.relaxed = boolean(j.at("relaxed"), "/relaxed");
  if (j.contains("eps")) {
    c.eps = numbers(j.at("eps"), "/eps");
    if (c.eps.empty()) fail("/eps", "expected at least one value");
  } else {
    c.eps = default_eps_ladder();
  }
  for (std::size_t i = 0; i < c.eps.size(); ++i) {
    const std::string where = "/eps/" + std::to_string(i);
    if (!(c.eps[i] > 0.0 && c.eps[i] <= 1.0)) fail(where, "eps must lie in (0, 1]");
    if (!c.relaxed && !is_integral_inverse(c.eps[i]))
      fail(where, "1/eps must be an integer (set \"relaxed\": true to override)");
  }

  if (j.contains("variants")) {
    const json& v = j.at("variants");
    if (!v.is_array() || v.empty()) fail("/variants", "expected a non-empty array of names");
    for (std::size_t i = 0; i < v.size(); ++i) {
      const std::string where = "/variants/" + std::to_string(i);
      c.variants.push_back(parse_variant(text(v[i], where), where));
    }
  } else {
    c.variants = {ErrorVariant::raw(), ErrorVariant::averaged(),
                  ErrorVariant{ErrorKind::Corrected, 0}};
  }

  if (j.contains("grid")) {
    const json& g = j.at("grid");
    if (!g.is_object()) fail("/grid", "expected an object");
    check_keys(g, "/grid", {"intervals"});
    if (g.contains("intervals")) c.intervals = count(g.at("intervals"), "/grid/intervals");
  }

  if (j.contains("monte_carlo")) {
    const json& m = j.at("monte_carlo");
    if (!m.is_object()) fail("/monte_carlo", "expected an object");
    check_keys(m, "/monte_carlo", {"x", "t", "dt", "paths", "seed", "bridge"});
    if (m.contains("x")) c.mc.x = number(m.at("x"), "/monte_carlo/x");
    if (m.contains("t")) c.mc.t = number(m.at("t"), "/monte_carlo/t");
    if (m.contains("dt")) c.mc.dt = number(m.at("dt"), "/monte_carlo/dt");
    if (m.contains("paths")) c.mc.paths = count(m.at("paths"), "/monte_carlo/paths");
    if (m.contains("seed")) c.mc.seed = count(m.at("seed"), "/monte_carlo/seed");
    if (m.contains("bridge")) c.mc.bridge = boolean(m.at("bridge"), "/monte_carlo/bridge");
    if (!(c.mc.x > 0.0 && c.mc.x < 1.0)) fail("/monte_carlo/x", "must lie in (0,1)");
    if (!(c.mc.t > 0.0)) fail("/monte_carlo/t", "must be positive");
    if (!(c.mc.dt > 0.0)) fail("/monte_carlo/dt", "must be positive");
    if (c.mc.paths == 0) fail("/monte_carlo/paths", "must be positive");
  }

  if (j.contains("output")) {
    const json& o = j.at("output");
    if (!o.is_object()) fail("/output", "expected an object");
    check_keys(o, "/output", {"dir", "svg"});
    if (o.contains("dir")) c.out_dir = text(o.at("dir"), "/output/dir");
    if (o.contains("svg")) c.svg = boolean(o.at("svg"), "/output/svg");
  }
  return c;
}

ExperimentConfig parse_config_text(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  try {
    return parse_config(j);
  } catch (const ConfigError& e) {
    throw ConfigError(origin + ":" + e.what());
  }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open configuration file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path.string());
}

}  // namespace homog::io
