// enclose: command-line front end for the target-enclosing guidance simulator.
//
//   enclose case1 .. case4          built-in engagements
//   enclose simulate <scenario.json>
//   enclose check-gains [--alpha1 --alpha2 --beta]
//   enclose check-ranks [--samples --theta-dot]
//   enclose sweep [--cases 1,2,3,4 --alpha1 ... --alpha2 ... --dts ...]
//
// Exit status: 0 ok, 1 a check or invariant monitor failed, 2 bad input,
// 3 simulation aborted (partial outputs are still written).

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "enclose/angles.hpp"
#include "enclose/ism.hpp"
#include "enclose/scenario_io.hpp"
#include "enclose/sweep.hpp"
#include "enclose/trajectory_io.hpp"

namespace fs = std::filesystem;
using namespace enclose;

namespace {

enum Exit { kOk = 0, kCheckFailed = 1, kBadInput = 2, kAborted = 3 };

struct Overrides {
  std::string config;
  std::string out;
  std::optional<double> dt;
  std::optional<double> horizon;
  bool curvature_unknown = false;
  std::optional<int> decimation;
};

void apply(const Overrides& o, ScenarioFile& f) {
  if (!o.out.empty()) f.output.dir = o.out;
  if (o.dt) f.config.dt = *o.dt;
  if (o.horizon) f.config.horizon = *o.horizon;
  if (o.curvature_unknown) f.config.curvature_known = false;
  if (o.decimation) f.config.log_decimation = *o.decimation;
  f.config.validate();
}

std::ofstream open_out(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream os(p, std::ios::binary);
  if (!os) throw GuidanceError(ErrorCode::invalid_config, "cannot write " + p.string());
  return os;
}

int run_file(const ScenarioFile& f) {
  const auto& cfg = f.config;
  const auto result = run_scenario(cfg);
  {
    auto os = open_out(f.output.csv_path(cfg.name));
    write_csv(os, result.log);
  }
  const auto kv = metrics_entries(cfg, result);
  {
    auto os = open_out(f.output.metrics_path(cfg.name));
    write_key_values(os, kv);
  }
  write_key_values(std::cout, kv);
  if (result.failure) {
    std::cerr << "simulation aborted at t = " << result.failure->time << " s ("
              << to_string(result.failure->code) << "): " << result.failure->message << "\n";
    return kAborted;
  }
  return result.metrics.monitors_passed(cfg) ? kOk : kCheckFailed;
}

int cmd_case(int n, const Overrides& o) {
  ScenarioFile f;
  f.config = builtin_case(n);
  apply(o, f);
  return run_file(f);
}

int cmd_simulate(const std::string& positional, const Overrides& o) {
  const std::string path = positional.empty() ? o.config : positional;
  if (path.empty()) {
    std::cerr << "simulate: a scenario file is required (positional or --config)\n";
    return kBadInput;
  }
  auto f = load_scenario_file(path);
  apply(o, f);
  return run_file(f);
}

int cmd_check_gains(const StGains& g, const Overrides& o) {
  const auto rep = check_gains(g);
  const fs::path dir = o.out.empty() ? fs::path("out") : fs::path(o.out);
  {
    auto os = open_out(dir / "check_gains.csv");
    os << "index,real_per_s,imag_per_s\n";
    for (std::size_t i = 0; i < rep.psi_eigs.size(); ++i) {
      os << i << "," << format_double(rep.psi_eigs[i].real()) << ","
         << format_double(rep.psi_eigs[i].imag()) << "\n";
    }
  }
  const KeyValues kv = {
      {"alpha1", format_double(g.alpha1)},
      {"alpha2", format_double(g.alpha2)},
      {"beta", format_double(g.beta)},
      {"psi_eig0_real", format_double(rep.psi_eigs[0].real())},
      {"psi_eig0_imag", format_double(rep.psi_eigs[0].imag())},
      {"psi_eig1_real", format_double(rep.psi_eigs[1].real())},
      {"psi_eig1_imag", format_double(rep.psi_eigs[1].imag())},
      {"gains_positive", rep.gains_positive ? "true" : "false"},
      {"beta_in_range", rep.beta_in_range ? "true" : "false"},
      {"hurwitz", rep.hurwitz ? "true" : "false"},
      {"pass", rep.ok() ? "true" : "false"},
  };
  auto os = open_out(dir / "check_gains_metrics.txt");
  write_key_values(os, kv);
  write_key_values(std::cout, kv);
  if (!rep.ok()) std::cerr << "gain check failed: " << rep.summary() << "\n";
  return rep.ok() ? kOk : kCheckFailed;
}

int cmd_check_ranks(int samples, double theta_dot, const Overrides& o) {
  RankScanSettings st;
  st.samples = samples;
  st.theta_dot = theta_dot;
  const auto scan = rank_scan(st);
  const fs::path dir = o.out.empty() ? fs::path("out") : fs::path(o.out);
  {
    auto os = open_out(dir / "check_ranks.csv");
    os << "sigma_p_rad,sin_sigma_p,output_controllability_rank,state_detectability_rank\n";
    for (const auto& s : scan) {
      os << format_double(s.sigma_p) << "," << format_double(std::sin(s.sigma_p)) << ","
         << s.output_controllability << "," << s.state_detectability << "\n";
    }
  }

  // Contiguous runs of rank-deficient grid points.
  std::vector<std::pair<double, double>> deficient;
  bool claim_holds = true;
  long min_detect = 3;
  for (std::size_t i = 0; i < scan.size(); ++i) {
    min_detect = std::min<long>(min_detect, scan[i].state_detectability);
    if (scan[i].output_controllability >= 2) continue;
    const bool near_singular = std::abs(std::sin(scan[i].sigma_p)) < sdre::kSingularSine;
    claim_holds = claim_holds && near_singular;
    if (!deficient.empty() && i > 0 && scan[i - 1].output_controllability < 2) {
      deficient.back().second = scan[i].sigma_p;
    } else {
      deficient.emplace_back(scan[i].sigma_p, scan[i].sigma_p);
    }
  }
  std::string ranges;
  for (const auto& [lo, hi] : deficient) {
    ranges += (ranges.empty() ? "" : " ") + ("[" + format_double(lo) + "," + format_double(hi) + "]");
  }
  const double guard_halfwidth = std::asin(sdre::kSingularSine);
  const KeyValues kv = {
      {"samples", std::to_string(scan.size())},
      {"theta_dot_radps", format_double(theta_dot)},
      {"rank_deficient_points",
       std::to_string(std::count_if(scan.begin(), scan.end(),
                                    [](const RankSample& s) { return s.output_controllability < 2; }))},
      {"rank_deficient_ranges_rad", ranges.empty() ? "none" : ranges},
      {"singular_neighborhoods_rad",
       "|sigma_p - c| < " + format_double(guard_halfwidth) + " for c in {-pi, 0, pi}"},
      {"min_state_detectability_rank", std::to_string(min_detect)},
      {"rank_two_outside_singular_neighborhoods", claim_holds ? "true" : "false"},
  };
  auto os = open_out(dir / "check_ranks_metrics.txt");
  write_key_values(os, kv);
  write_key_values(std::cout, kv);
  return claim_holds ? kOk : kCheckFailed;
}

int cmd_sweep(const std::vector<int>& cases, const std::vector<double>& alpha1s,
              const std::vector<double>& alpha2s, const std::vector<double>& dts,
              const Overrides& o) {
  std::vector<ScenarioFile> bases;
  if (!o.config.empty()) {
    bases.push_back(load_scenario_file(o.config));
  } else {
    for (int n : cases) bases.push_back({builtin_case(n), {}});
  }
  std::vector<ScenarioConfig> grid;
  fs::path dir = o.out.empty() ? fs::path("out") : fs::path(o.out);
  for (auto base : bases) {
    apply(o, base);
    const std::vector<double> a1 = alpha1s.empty() ? std::vector{base.config.gains.alpha1} : alpha1s;
    const std::vector<double> a2 = alpha2s.empty() ? std::vector{base.config.gains.alpha2} : alpha2s;
    const std::vector<double> ds = dts.empty() ? std::vector{base.config.dt} : dts;
    for (double x1 : a1)
      for (double x2 : a2)
        for (double d : ds) {
          ScenarioConfig c = base.config;
          c.gains.alpha1 = x1;
          c.gains.alpha2 = x2;
          c.dt = d;
          c.name = base.config.name + "_a1_" + format_double(x1) + "_a2_" + format_double(x2) +
                   "_dt_" + format_double(d);
          grid.push_back(c);
        }
  }
  const auto results = run_batch(grid);

  auto os = open_out(dir / "sweep.csv");
  const auto header = metrics_entries(grid.front(), results.front());
  bool first = true;
  for (const auto& [k, _] : header) {
    if (k.rfind("failure", 0) == 0) continue;
    os << (first ? "" : ",") << k;
    first = false;
  }
  os << ",failure_code\n";
  long passed = 0;
  long aborted = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto kv = metrics_entries(grid[i], results[i]);
    std::string failure = "none";
    first = true;
    for (const auto& [k, v] : kv) {
      if (k == "failure_code") failure = v;
      if (k.rfind("failure", 0) == 0) continue;
      os << (first ? "" : ",") << v;
      first = false;
    }
    os << "," << failure << "\n";
    passed += results[i].metrics.monitors_passed(grid[i]);
    aborted += results[i].failure.has_value();
  }
  const KeyValues summary = {{"runs", std::to_string(grid.size())},
                             {"monitors_passed", std::to_string(passed)},
                             {"aborted", std::to_string(aborted)}};
  auto ms = open_out(dir / "sweep_metrics.txt");
  write_key_values(ms, summary);
  write_key_values(std::cout, summary);
  if (aborted) return kAborted;
  return passed == static_cast<long>(grid.size()) ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Target-enclosing guidance simulator (SDRE + integral-sliding supertwisting)"};
  app.require_subcommand(1);
  app.fallthrough();

  Overrides o;
  double dt = 0.0, horizon = 0.0;
  int decimation = 0;
  app.add_option("--config", o.config, "Scenario JSON file")->envname("ENCLOSE_CONFIG");
  app.add_option("--out", o.out, "Output directory")->envname("ENCLOSE_OUT");
  auto* dt_opt = app.add_option("--dt", dt, "Integration step [s]")->envname("ENCLOSE_DT");
  auto* hz_opt =
      app.add_option("--horizon", horizon, "Simulated time [s]")->envname("ENCLOSE_HORIZON");
  app.add_flag("--curvature-unknown", o.curvature_unknown,
               "Treat the reference curvature as part of the disturbance")
      ->envname("ENCLOSE_CURVATURE_UNKNOWN");
  auto* dec_opt = app.add_option("--decimation", decimation, "Log every n-th step")
                      ->envname("ENCLOSE_DECIMATION");

  std::vector<CLI::App*> cases;
  for (int n = 1; n <= 4; ++n) {
    cases.push_back(app.add_subcommand("case" + std::to_string(n),
                                       "Run built-in engagement case " + std::to_string(n)));
  }

  std::string scenario_path;
  auto* simulate = app.add_subcommand("simulate", "Run a scenario file");
  simulate->add_option("scenario", scenario_path, "Scenario JSON file");

  StGains gains;
  auto* check_gains_cmd = app.add_subcommand("check-gains", "Check supertwisting gains");
  check_gains_cmd->add_option("--alpha1", gains.alpha1);
  check_gains_cmd->add_option("--alpha2", gains.alpha2);
  check_gains_cmd->add_option("--beta", gains.beta);

  int samples = 3600;
  double theta_dot = -0.5;
  auto* check_ranks_cmd =
      app.add_subcommand("check-ranks", "Output-controllability rank over the look angle");
  check_ranks_cmd->add_option("--samples", samples)->check(CLI::Range(4, 10000000));
  check_ranks_cmd->add_option("--theta-dot", theta_dot, "LOS rate [rad/s]");

  std::vector<int> sweep_cases{1, 2, 3, 4};
  std::vector<double> alpha1s, alpha2s, dts;
  auto* sweep = app.add_subcommand("sweep", "Run a grid of scenarios and tabulate metrics");
  sweep->add_option("--cases", sweep_cases)->delimiter(',')->check(CLI::Range(1, 4));
  sweep->add_option("--alpha1", alpha1s)->delimiter(',');
  sweep->add_option("--alpha2", alpha2s)->delimiter(',');
  sweep->add_option("--dts", dts, "Step sizes [s]")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kBadInput;
  }
  if (*dt_opt) o.dt = dt;
  if (*hz_opt) o.horizon = horizon;
  if (*dec_opt) o.decimation = decimation;

  try {
    for (int n = 1; n <= 4; ++n) {
      if (*cases[static_cast<std::size_t>(n - 1)]) return cmd_case(n, o);
    }
    if (*simulate) return cmd_simulate(scenario_path, o);
    if (*check_gains_cmd) return cmd_check_gains(gains, o);
    if (*check_ranks_cmd) return cmd_check_ranks(samples, theta_dot, o);
    if (*sweep) return cmd_sweep(sweep_cases, alpha1s, alpha2s, dts, o);
  } catch (const GuidanceError& e) {
    std::cerr << "error (" << to_string(e.code()) << "):\n" << e.what() << "\n";
    return e.code() == ErrorCode::invalid_config ? kBadInput : kAborted;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  }
  return kBadInput;
}
