#include "enclose/sweep.hpp"

#include <cmath>
#include <numbers>

namespace enclose {

namespace {

RunResult run_one(const ScenarioConfig& cfg, const RunOptions& opts) {
  try {
    return run_scenario(cfg, opts);
  } catch (const GuidanceError& e) {
    // invalid configuration: no steps were taken
    RunResult r;
    r.failure = RunFailure{e.code(), e.what(), 0.0};
    return r;
  }
}

RankSample rank_at(const RankScanSettings& st, int i) {
  const double sigma = -std::numbers::pi + 2.0 * std::numbers::pi * i / st.samples;
  RelativeState rel;
  rel.r = st.r_d;
  rel.sigma_p = sigma;
  rel.v_theta = st.theta_dot * st.r_d;
  const ReferenceSample ref{st.r_d, 0.0, st.rddot_d};
  const auto sys = build_sdc(rel, ref, st.eta, st.weights);
  return {sigma, output_controllability_rank(sys), state_detectability_rank(sys, st.weights)};
}

}  // namespace

std::vector<RunResult> run_batch(std::span<const ScenarioConfig> configs, const RunOptions& opts) {
  std::vector<RunResult> out(configs.size());
  const auto n = static_cast<long>(configs.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = run_one(configs[static_cast<std::size_t>(i)], opts);
  }
  return out;
}

std::vector<RunResult> run_batch_serial(std::span<const ScenarioConfig> configs,
                                        const RunOptions& opts) {
  std::vector<RunResult> out;
  out.reserve(configs.size());
  for (const auto& cfg : configs) out.push_back(run_one(cfg, opts));
  return out;
}

std::vector<RankSample> rank_scan(const RankScanSettings& settings) {
  const int n = std::max(settings.samples - 1, 0);
  std::vector<RankSample> out(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(static)
  for (int i = 1; i <= n; ++i) out[static_cast<std::size_t>(i - 1)] = rank_at(settings, i);
  return out;
}

std::vector<RankSample> rank_scan_serial(const RankScanSettings& settings) {
  std::vector<RankSample> out;
  for (int i = 1; i < settings.samples; ++i) out.push_back(rank_at(settings, i));
  return out;
}

}  // namespace enclose
