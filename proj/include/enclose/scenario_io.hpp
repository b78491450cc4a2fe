#pragma once

// JSON scenario files. Every physical quantity carries its unit in the key
// name; unknown keys are rejected. Omitted sections take the defaults of
// ScenarioConfig (the built-in case parameters).
//
// {
//   "name": "case1",
//   "pursuer":   {"x_m": -100, "y_m": 0, "heading_deg": 20, "speed_mps": 40},
//   "target":    {"x_m": 0, "y_m": 0, "heading_deg": 40, "speed_mps": 10},
//   "reference": {"base_m": 75, "terms": [
//                   {"amplitude_m": 2, "frequency_radps": 1, "phase": "sin"},
//                   {"amplitude_m": 15, "frequency_radps": 1, "phase": "cos"}]},
//   "maneuver":  {"kind": "product_sinusoid", "bias_mps2": 1.5, "amplitude_mps2": -5,
//                 "cos_frequency_radps": 0.6283185307179586,
//                 "sin_frequency_radps": 0.3141592653589793},
//   "weights":   {"q": [[1e8, 0], [0, 1e8]], "r": 4e4, "lambda_per_s": 0.01},
//   "gains":     {"alpha1": 10, "alpha2": 10, "beta": 0.5, "l": [0, 1]},
//   "simulation": {"dt_s": 0.001, "horizon_s": 60, "a_p_max_mps2": 98.1,
//                  "curvature_known": true, "eta0": 1},
//   "output":    {"dir": "out", "csv": "case1.csv", "metrics": "case1_metrics.txt",
//                 "log_decimation": 10}
// }

#include <filesystem>
#include <string>
#include <string_view>

#include "enclose/simulator.hpp"

namespace enclose {

struct OutputSettings {
  std::filesystem::path dir = "out";
  std::string csv;      // empty: <name>.csv
  std::string metrics;  // empty: <name>_metrics.txt

  std::filesystem::path csv_path(const std::string& name) const;
  std::filesystem::path metrics_path(const std::string& name) const;
};

struct ScenarioFile {
  ScenarioConfig config;
  OutputSettings output;
};

/// Parses and validates. Throws GuidanceError(invalid_config) listing every
/// schema problem with its JSON path.
ScenarioFile parse_scenario(std::string_view text);
ScenarioFile load_scenario_file(const std::filesystem::path& path);
std::string dump_scenario(const ScenarioFile& file);

}  // namespace enclose
