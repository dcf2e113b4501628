#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace isoprof {

/// Effective options of one CLI invocation; serializable so a run can be
/// reproduced from its --dump-config output via --config.
struct RunConfig {
  std::string subcommand;
  std::string model_path;
  std::string out_dir = ".";
  int grid = 2048;          // envelope volume grid
  int modes = 64;           // pseudo-ball trig modes
  int samples = 512;        // CSV sample rows
  int curve_samples = 256;  // pseudo-ball curve dump
  double tol = -1.0;        // kernel tolerance override; <= 0 keeps defaults
  double v_min = -1.0;      // <= 0: model-scaled default
  double v_max = -1.0;
  std::string centers = "16x16";
  std::string center = "0,0";
  std::vector<double> volumes;
  std::vector<double> rhos;
  std::string family;
  double param = -1.0;
  double r = -1.0;
  double volume = -1.0;
};

nlohmann::ordered_json config_to_json(const RunConfig& cfg);
RunConfig config_from_json(const nlohmann::ordered_json& j);

/// Exit codes: 0 success, 2 validation error, 3 solver failure.
int run_cli(const std::vector<std::string>& args);

}  // namespace isoprof
