#include <doctest.h>

#include <cstdlib>
#include <cstring>
#include <numbers>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "enclose/errors.hpp"
#include "enclose/scenario_io.hpp"
#include "enclose/trajectory_io.hpp"

using namespace enclose;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const auto d = fs::temp_directory_path() / ("enclose_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(ENCLOSE_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string error_text(std::string_view json) {
  try {
    parse_scenario(json);
  } catch (const GuidanceError& e) {
    CHECK(e.code() == ErrorCode::invalid_config);
    return e.what();
  }
  return {};
}

const char* kMinimal = R"({"pursuer": {"x_m": -100, "y_m": 0, "heading_deg": 20, "speed_mps": 40},
                           "target": {"x_m": 0, "y_m": 0, "heading_deg": 40, "speed_mps": 10}})";

}  // namespace

TEST_CASE("CSV round trip is exact") {
  auto cfg = builtin_case(1);
  cfg.horizon = 3;
  const auto r = run_scenario(cfg);
  std::stringstream ss;
  write_csv(ss, r.log);
  const auto back = read_csv(ss);
  REQUIRE(back.size() == r.log.records.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(std::memcmp(&back[i], &r.log.records[i], sizeof(LogRecord)) == 0);
  }
}

TEST_CASE("CSV reader rejects damaged files") {
  std::stringstream empty;
  CHECK_THROWS_AS(read_csv(empty), GuidanceError);
  std::stringstream bad_header("t,x\n1,2\n");
  CHECK_THROWS_AS(read_csv(bad_header), GuidanceError);

  TrajectoryLog log;
  log.records.push_back(LogRecord{});
  std::stringstream ok;
  write_csv(ok, log);
  const std::string text = ok.str();
  std::stringstream short_row(text.substr(0, text.rfind(',')) + "\n");
  CHECK_THROWS_AS(read_csv(short_row), GuidanceError);
  std::stringstream long_row(text.substr(0, text.size() - 1) + ",0\n");
  CHECK_THROWS_AS(read_csv(long_row), GuidanceError);
  std::stringstream junk(text.substr(0, text.size() - 2) + "x\n");
  CHECK_THROWS_AS(read_csv(junk), GuidanceError);
}

TEST_CASE("key-value files") {
  KeyValues kv = {{"a", "1"}, {"b_m", "2.5"}, {"name", "case one"}};
  std::stringstream ss;
  write_key_values(ss, kv);
  CHECK(ss.str() == "a = 1\nb_m = 2.5\nname = case one\n");
  const auto m = read_key_values(ss);
  CHECK(m.at("b_m") == "2.5");
  CHECK(m.at("name") == "case one");
}

TEST_CASE("minimal scenario takes defaults") {
  const auto f = parse_scenario(kMinimal);
  CHECK(f.config.dt == 1e-3);
  CHECK(f.config.horizon == 60);
  CHECK(f.config.pursuer.gamma == doctest::Approx(20 * std::numbers::pi / 180));
  CHECK(f.config.reference.is_constant());
  CHECK(f.output.csv_path("x") == fs::path("out") / "x.csv");
}

TEST_CASE("scenario files round trip") {
  for (int n = 1; n <= 4; ++n) {
    ScenarioFile f{builtin_case(n), {}};
    f.config.curvature_known = n % 2 == 0;
    f.output.dir = "runs";
    const auto text = dump_scenario(f);
    const auto back = parse_scenario(text);
    CHECK(dump_scenario(back) == text);
    CHECK(back.config.maneuver.kind == f.config.maneuver.kind);
    CHECK(back.config.reference.terms.size() == f.config.reference.terms.size());
    CHECK(back.config.curvature_known == f.config.curvature_known);
  }
}

TEST_CASE("schema problems are reported with their paths") {
  CHECK(error_text("{").find("malformed JSON") != std::string::npos);
  CHECK(error_text(R"({"target": {"speed_mps": 1}})").find("$.pursuer") != std::string::npos);

  std::string s = kMinimal;
  s.insert(1, R"("speed": 3, )");
  CHECK(error_text(s).find("$.speed: unknown key") != std::string::npos);

  s = kMinimal;
  s.insert(1, R"("simulation": {"dt_s": "fast", "horizon": 5}, )");
  const auto msg = error_text(s);
  CHECK(msg.find("$.simulation.dt_s: expected a number") != std::string::npos);
  CHECK(msg.find("$.simulation.horizon: unknown key") != std::string::npos);

  s = kMinimal;
  s.insert(1, R"("reference": {"terms": [{"amplitude_m": 1, "frequency_radps": 1, "phase": "tan"}]}, )");
  CHECK(error_text(s).find("$.reference.terms[0].phase") != std::string::npos);

  s = kMinimal;
  s.insert(1, R"("weights": {"q": [1, 2]}, )");
  CHECK(error_text(s).find("$.weights.q") != std::string::npos);

  // schema-valid but physically invalid
  s = kMinimal;
  s.insert(1, R"("gains": {"alpha1": -1}, )");
  CHECK(error_text(s).find("gains") != std::string::npos);
}

TEST_CASE("command line: built-in case") {
  const auto dir = scratch("case");
  REQUIRE(run_cli("case4 --horizon 3 --out " + dir.string()) == 0);
  const auto csv = slurp(dir / "case4.csv");
  std::ifstream mf(dir / "case4_metrics.txt");
  const auto m = read_key_values(mf);
  CHECK(m.at("completed") == "true");
  CHECK(m.at("monitors_passed") == "true");
  CHECK(m.at("horizon_s") == "3");
  std::stringstream ss(csv);
  CHECK(read_csv(ss).size() == 300);

  // identical bytes on a second invocation
  REQUIRE(run_cli("case4 --horizon 3 --out " + dir.string()) == 0);
  CHECK(slurp(dir / "case4.csv") == csv);

  REQUIRE(run_cli("case2 --horizon 2 --decimation 1 --curvature-unknown --out " +
                  dir.string()) == 0);
  std::ifstream mf2(dir / "case2_metrics.txt");
  const auto m2 = read_key_values(mf2);
  CHECK(m2.at("curvature_known") == "false");
  CHECK(m2.at("steps") == "2000");
}

TEST_CASE("command line: environment overrides") {
  const auto dir = scratch("env");
  REQUIRE(run_cli("case3 --out " + dir.string()) != 2);  // sanity of paths
  const std::string env = "ENCLOSE_HORIZON=1.5 ENCLOSE_OUT=" + dir.string() + "/e ";
  const std::string cmd = env + ENCLOSE_CLI_PATH + " case3 > /dev/null 2>&1";
  REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
  std::ifstream mf(dir / "e" / "case3_metrics.txt");
  CHECK(read_key_values(mf).at("horizon_s") == "1.5");
}

TEST_CASE("command line: scenario file and errors") {
  const auto dir = scratch("file");
  std::string text = kMinimal;
  text.insert(1, R"("name": "mine", "simulation": {"horizon_s": 2}, "output": {"dir": ")" +
                     dir.string() + R"(", "csv": "traj.csv"}, )");
  std::ofstream(dir / "s.json") << text;
  CHECK(run_cli("simulate " + (dir / "s.json").string()) == 0);
  CHECK(fs::exists(dir / "traj.csv"));
  CHECK(fs::exists(dir / "mine_metrics.txt"));
  CHECK(run_cli("simulate --config " + (dir / "s.json").string() + " --dt 0.002") == 0);

  std::ofstream(dir / "bad.json") << R"({"pursuer": {"speed": 1}})";
  CHECK(run_cli("simulate " + (dir / "bad.json").string()) == 2);
  CHECK(run_cli("simulate " + (dir / "missing.json").string()) == 2);
  CHECK(run_cli("case4 --dt -1") == 2);
  CHECK(run_cli("nonsense") == 2);
  CHECK(run_cli("") == 2);
}

TEST_CASE("command line: aborted run keeps partial output") {
  const auto dir = scratch("abort");
  std::string text = kMinimal;
  text.insert(1, R"("weights": {"lambda_per_s": 1.0}, "simulation": {"horizon_s": 10}, "output": {"dir": ")" +
                     dir.string() + R"("}, )");
  std::ofstream(dir / "s.json") << text;
  CHECK(run_cli("simulate " + (dir / "s.json").string()) == 3);
  std::ifstream mf(dir / "scenario_metrics.txt");
  const auto m = read_key_values(mf);
  CHECK(m.at("completed") == "false");
  CHECK(m.at("failure_code") == "auxiliary_state_collapse");
  std::ifstream cf(dir / "scenario.csv");
  CHECK(read_csv(cf).size() > 100);
}

TEST_CASE("command line: diagnostics") {
  const auto dir = scratch("diag");
  CHECK(run_cli("check-gains --out " + dir.string()) == 0);
  std::ifstream g(dir / "check_gains_metrics.txt");
  const auto gm = read_key_values(g);
  CHECK(std::stod(gm.at("psi_eig0_real")) == doctest::Approx(-3.618034));
  CHECK(std::stod(gm.at("psi_eig1_real")) == doctest::Approx(-1.381966));
  CHECK(run_cli("check-gains --alpha1 0 --out " + dir.string()) == 1);

  CHECK(run_cli("check-ranks --samples 360 --out " + dir.string()) == 0);
  std::ifstream r(dir / "check_ranks_metrics.txt");
  const auto rm = read_key_values(r);
  CHECK(rm.at("rank_two_outside_singular_neighborhoods") == "true");
  CHECK(rm.at("min_state_detectability_rank") == "3");
  CHECK(rm.at("rank_deficient_points") == "1");

  CHECK(run_cli("sweep --cases 2,4 --alpha1 8,10 --horizon 2 --out " + dir.string()) == 0);
  std::ifstream sm(dir / "sweep_metrics.txt");
  CHECK(read_key_values(sm).at("runs") == "4");
  std::ifstream sc(dir / "sweep.csv");
  std::string line;
  int rows = 0;
  while (std::getline(sc, line)) ++rows;
  CHECK(rows == 5);
}
