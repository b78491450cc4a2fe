#pragma once

// CSV trajectories and flat `key = value` metrics files.
//
// The CSV has one header row (TrajectoryLog::column_names(), units in the
// suffix) and one row per logged step. Values are written with 17
// significant digits, so reading a file back reproduces the doubles exactly.

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "enclose/simulator.hpp"

namespace enclose {

void write_csv(std::ostream& os, const TrajectoryLog& log);
/// Throws GuidanceError(invalid_config) on a header or column-count mismatch.
std::vector<LogRecord> read_csv(std::istream& is);

std::string format_double(double v);

using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// Metrics of one run in emission order, including failure details.
KeyValues metrics_entries(const ScenarioConfig& cfg, const RunResult& result);
void write_key_values(std::ostream& os, const KeyValues& kv);
std::map<std::string, std::string> read_key_values(std::istream& is);

}  // namespace enclose
