#pragma once

// Batch drivers. Each entry point has an OpenMP version and a serial
// reference; the tests require them to agree bit for bit.

#include <span>
#include <vector>

#include "enclose/simulator.hpp"

namespace enclose {

/// Runs independent scenarios, one Simulator per run.
std::vector<RunResult> run_batch(std::span<const ScenarioConfig> configs,
                                 const RunOptions& opts = {.keep_log = false});
std::vector<RunResult> run_batch_serial(std::span<const ScenarioConfig> configs,
                                        const RunOptions& opts = {.keep_log = false});

struct RankSample {
  double sigma_p = 0.0;
  int output_controllability = 0;
  int state_detectability = 0;
};

struct RankScanSettings {
  int samples = 3600;       // grid points on (-pi, pi); 0 is included when even
  double theta_dot = -0.5;  // [rad/s]
  double r_d = 75.0;        // [m]
  double rddot_d = 0.0;     // [m/s^2]
  double eta = 1.0;
  Weights weights;
};

/// Output-controllability and state-detectability ranks over the open grid
/// sigma_i = -pi + i * 2 pi / samples, i = 1 .. samples - 1.
std::vector<RankSample> rank_scan(const RankScanSettings& settings);
std::vector<RankSample> rank_scan_serial(const RankScanSettings& settings);

}  // namespace enclose
