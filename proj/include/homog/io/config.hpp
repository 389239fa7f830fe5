#pragma once

// JSON experiment configuration. The schema is described in docs/config.md.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "homog/convergence.hpp"
#include "homog/fk.hpp"

namespace homog::io {

struct MonteCarloConfig {
  double x = 0.5;
  double t = 0.25;
  double dt = 1e-5;
  std::uint64_t paths = 100000;
  std::uint64_t seed = 1;
  bool bridge = true;
};

struct ExperimentConfig {
  PeriodicCoefficient coefficient = PeriodicCoefficient::from_profile(FunctionSpec::constant(1.0));
  FunctionSpec f = FunctionSpec::constant(1.0);
  std::vector<double> eps;
  /// Variants for `converge`; a Corrected entry with sign 0 requests calibration.
  std::vector<ErrorVariant> variants;
  /// Sampling grid; 0 selects default_grid_size(eps).
  std::size_t intervals = 0;
  bool relaxed = false;
  MonteCarloConfig mc;
  std::filesystem::path out_dir = "out";
  bool svg = true;

  PathParams path_params() const;
};

/// Parses a FunctionSpec object; `where` is the JSON pointer used in messages.
FunctionSpec function_from_json(const nlohmann::json& j, const std::string& where = "");
nlohmann::json function_to_json(const FunctionSpec& f);

/// Throws ConfigError (with a JSON pointer or line/column) on malformed
/// input or values outside the module preconditions.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig parse_config_text(const std::string& text, const std::string& origin = "<string>");
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace homog::io
