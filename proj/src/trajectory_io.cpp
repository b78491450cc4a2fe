#include "enclose/trajectory_io.hpp"

#include <charconv>
#include <cstdio>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>

#include "enclose/reference.hpp"

namespace enclose {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_csv(std::ostream& os, const TrajectoryLog& log) {
  const auto& names = TrajectoryLog::column_names();
  for (std::size_t i = 0; i < names.size(); ++i) os << (i ? "," : "") << names[i];
  os << '\n';
  for (const auto& rec : log.records) {
    double row[TrajectoryLog::kColumns];
    std::memcpy(row, &rec, sizeof(rec));
    for (std::size_t i = 0; i < TrajectoryLog::kColumns; ++i) {
      os << (i ? "," : "") << format_double(row[i]);
    }
    os << '\n';
  }
}

std::vector<LogRecord> read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) {
    throw GuidanceError(ErrorCode::invalid_config, "empty trajectory file");
  }
  const auto& names = TrajectoryLog::column_names();
  std::string expected;
  for (std::size_t i = 0; i < names.size(); ++i) expected += (i ? "," : "") + names[i];
  if (line != expected) {
    throw GuidanceError(ErrorCode::invalid_config, "unexpected trajectory header");
  }

  std::vector<LogRecord> out;
  long line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    double row[TrajectoryLog::kColumns];
    std::size_t col = 0;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      if (col == TrajectoryLog::kColumns) {
        ++col;
        break;
      }
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), row[col]);
      if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size()) {
        throw GuidanceError(ErrorCode::invalid_config,
                            "bad number on line " + std::to_string(line_no));
      }
      ++col;
    }
    if (col != TrajectoryLog::kColumns) {
      throw GuidanceError(ErrorCode::invalid_config,
                          "wrong column count on line " + std::to_string(line_no));
    }
    LogRecord rec;
    std::memcpy(&rec, row, sizeof(rec));
    out.push_back(rec);
  }
  return out;
}

KeyValues metrics_entries(const ScenarioConfig& cfg, const RunResult& result) {
  const auto& m = result.metrics;
  auto f = format_double;
  KeyValues kv = {
      {"name", cfg.name},
      {"completed", m.completed ? "true" : "false"},
      {"monitors_passed", m.monitors_passed(cfg) ? "true" : "false"},
      {"curvature_known", cfg.curvature_known ? "true" : "false"},
      {"dt_s", f(cfg.dt)},
      {"horizon_s", f(cfg.horizon)},
      {"steps", std::to_string(m.steps)},
      {"convergence_time_s", f(m.convergence_time)},
      {"max_abs_a_p_mps2", f(m.max_abs_a_p)},
      {"terminal_window_s", f(m.terminal_window)},
      {"terminal_mean_abs_rho_m", f(m.terminal_mean_abs_rho)},
      {"terminal_mean_sigma_p_rad", f(m.terminal_mean_sigma_p)},
      {"terminal_mean_a_p_mps2", f(m.terminal_mean_a_p)},
      {"saturation_duty", f(m.saturation_duty)},
      {"guard_fraction", f(m.guard_fraction)},
      {"max_care_residual", f(m.max_care_residual)},
      {"max_spectral_abscissa_per_s", f(m.max_spectral_abscissa)},
      {"s_initial_mps", f(m.s_initial)},
      {"max_abs_s_mps", f(m.max_abs_s)},
      {"max_abs_s_after_transient_mps", f(m.max_abs_s_after_transient)},
      {"max_speed_drift_mps", f(m.max_speed_drift)},
      {"warm_solves", std::to_string(m.warm_solves)},
      {"cold_solves", std::to_string(m.cold_solves)},
      {"disturbance_bound_mps2",
       f(disturbance_bound(cfg.reference, cfg.maneuver, cfg.pursuer.v, cfg.target.v,
                           cfg.horizon))},
  };
  if (result.failure) {
    kv.emplace_back("failure_code", to_string(result.failure->code));
    kv.emplace_back("failure_time_s", f(result.failure->time));
    std::string msg = result.failure->message;
    for (auto& c : msg) {
      if (c == '\n') c = ' ';
    }
    kv.emplace_back("failure_message", msg);
  }
  return kv;
}

void write_key_values(std::ostream& os, const KeyValues& kv) {
  for (const auto& [k, v] : kv) os << k << " = " << v << '\n';
}

std::map<std::string, std::string> read_key_values(std::istream& is) {
  std::map<std::string, std::string> out;
  std::string line;
  while (std::getline(is, line)) {
    const auto eq = line.find(" = ");
    if (eq == std::string::npos) continue;
    out[line.substr(0, eq)] = line.substr(eq + 3);
  }
  return out;
}

}  // namespace enclose
