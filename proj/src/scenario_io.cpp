#include "enclose/scenario_io.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "enclose/angles.hpp"

namespace enclose {

using nlohmann::json;

std::filesystem::path OutputSettings::csv_path(const std::string& name) const {
  return dir / (csv.empty() ? name + ".csv" : csv);
}

std::filesystem::path OutputSettings::metrics_path(const std::string& name) const {
  return dir / (metrics.empty() ? name + "_metrics.txt" : metrics);
}

namespace {

// Collects schema problems instead of stopping at the first one.
class Diagnostics {
 public:
  void add(const std::string& path, const std::string& msg) { items_.push_back(path + ": " + msg); }
  bool empty() const { return items_.empty(); }
  std::string joined() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < items_.size(); ++i) os << (i ? "\n" : "") << items_[i];
    return os.str();
  }

 private:
  std::vector<std::string> items_;
};

// Wraps one JSON object and reports keys nobody asked for.
class Section {
 public:
  Section(const json& j, std::string path, Diagnostics& diag)
      : j_(j), path_(std::move(path)), diag_(diag) {
    if (!j_.is_object()) diag_.add(path_, "expected an object");
  }
  ~Section() {
    if (!j_.is_object()) return;
    for (const auto& [key, _] : j_.items()) {
      if (!seen_.count(key)) diag_.add(path_ + "." + key, "unknown key");
    }
  }

  const json* find(const std::string& key) {
    seen_.insert(key);
    if (!j_.is_object()) return nullptr;
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  std::string child(const std::string& key) const { return path_ + "." + key; }

  void number(const std::string& key, double& out) {
    if (const json* v = find(key)) {
      if (v->is_number()) {
        out = v->get<double>();
      } else {
        diag_.add(child(key), "expected a number");
      }
    }
  }

  void integer(const std::string& key, int& out) {
    if (const json* v = find(key)) {
      if (v->is_number_integer()) {
        out = v->get<int>();
      } else {
        diag_.add(child(key), "expected an integer");
      }
    }
  }

  void boolean(const std::string& key, bool& out) {
    if (const json* v = find(key)) {
      if (v->is_boolean()) {
        out = v->get<bool>();
      } else {
        diag_.add(child(key), "expected true or false");
      }
    }
  }

  void string(const std::string& key, std::string& out) {
    if (const json* v = find(key)) {
      if (v->is_string()) {
        out = v->get<std::string>();
      } else {
        diag_.add(child(key), "expected a string");
      }
    }
  }

  Diagnostics& diag() { return diag_; }

 private:
  const json& j_;
  std::string path_;
  Diagnostics& diag_;
  std::set<std::string> seen_;
};

void read_vehicle(Section& parent, const std::string& key, VehicleState& v, bool required) {
  const json* node = parent.find(key);
  if (!node) {
    if (required) parent.diag().add(parent.child(key), "missing required section");
    return;
  }
  Section s(*node, parent.child(key), parent.diag());
  double heading_deg = rad_to_deg(v.gamma);
  s.number("x_m", v.x);
  s.number("y_m", v.y);
  s.number("heading_deg", heading_deg);
  s.number("speed_mps", v.v);
  v.gamma = deg_to_rad(heading_deg);
}

void read_reference(Section& parent, ReferenceProfile& ref) {
  const json* node = parent.find("reference");
  if (!node) return;
  Section s(*node, parent.child("reference"), parent.diag());
  s.number("base_m", ref.base);
  if (const json* terms = s.find("terms")) {
    if (!terms->is_array()) {
      s.diag().add(s.child("terms"), "expected an array");
      return;
    }
    ref.terms.clear();
    for (std::size_t i = 0; i < terms->size(); ++i) {
      Section t((*terms)[i], s.child("terms") + "[" + std::to_string(i) + "]", s.diag());
      SinusoidTerm term;
      std::string phase = "sin";
      t.number("amplitude_m", term.amplitude);
      t.number("frequency_radps", term.frequency);
      t.string("phase", phase);
      if (phase == "sin") {
        term.phase = Phase::sin;
      } else if (phase == "cos") {
        term.phase = Phase::cos;
      } else {
        s.diag().add(t.child("phase"), "expected \"sin\" or \"cos\"");
      }
      ref.terms.push_back(term);
    }
  }
}

void read_maneuver(Section& parent, ManeuverProfile& m) {
  const json* node = parent.find("maneuver");
  if (!node) return;
  Section s(*node, parent.child("maneuver"), parent.diag());
  std::string kind = "zero";
  s.string("kind", kind);
  if (kind == "zero") {
    m.kind = ManeuverProfile::Kind::zero;
  } else if (kind == "constant") {
    m.kind = ManeuverProfile::Kind::constant;
  } else if (kind == "product_sinusoid") {
    m.kind = ManeuverProfile::Kind::product_sinusoid;
  } else {
    s.diag().add(s.child("kind"), "expected zero, constant or product_sinusoid");
  }
  s.number("bias_mps2", m.bias);
  s.number("amplitude_mps2", m.amplitude);
  s.number("cos_frequency_radps", m.cos_frequency);
  s.number("sin_frequency_radps", m.sin_frequency);
}

void read_weights(Section& parent, Weights& w) {
  const json* node = parent.find("weights");
  if (!node) return;
  Section s(*node, parent.child("weights"), parent.diag());
  if (const json* q = s.find("q")) {
    const bool ok = q->is_array() && q->size() == 2 && (*q)[0].is_array() &&
                    (*q)[1].is_array() && (*q)[0].size() == 2 && (*q)[1].size() == 2;
    bool numeric = ok;
    if (ok) {
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) numeric = numeric && (*q)[i][j].is_number();
    }
    if (!numeric) {
      s.diag().add(s.child("q"), "expected a 2x2 array of numbers");
    } else {
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) w.Q(i, j) = (*q)[i][j].get<double>();
    }
  }
  s.number("r", w.R);
  s.number("lambda_per_s", w.lambda);
}

void read_gains(Section& parent, StGains& g) {
  const json* node = parent.find("gains");
  if (!node) return;
  Section s(*node, parent.child("gains"), parent.diag());
  s.number("alpha1", g.alpha1);
  s.number("alpha2", g.alpha2);
  s.number("beta", g.beta);
  if (const json* l = s.find("l")) {
    if (!l->is_array() || l->size() != 2 || !(*l)[0].is_number() || !(*l)[1].is_number()) {
      s.diag().add(s.child("l"), "expected two numbers");
    } else {
      g.L << (*l)[0].get<double>(), (*l)[1].get<double>();
    }
  }
}

void read_simulation(Section& parent, ScenarioConfig& cfg) {
  const json* node = parent.find("simulation");
  if (!node) return;
  Section s(*node, parent.child("simulation"), parent.diag());
  s.number("dt_s", cfg.dt);
  s.number("horizon_s", cfg.horizon);
  s.number("a_p_max_mps2", cfg.a_p_max);
  s.boolean("curvature_known", cfg.curvature_known);
  s.number("eta0", cfg.eta0);
}

void read_output(Section& parent, ScenarioFile& f) {
  const json* node = parent.find("output");
  if (!node) return;
  Section s(*node, parent.child("output"), parent.diag());
  std::string dir = f.output.dir.string();
  s.string("dir", dir);
  f.output.dir = dir;
  s.string("csv", f.output.csv);
  s.string("metrics", f.output.metrics);
  s.integer("log_decimation", f.config.log_decimation);
}

}  // namespace

ScenarioFile parse_scenario(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw GuidanceError(ErrorCode::invalid_config, std::string("malformed JSON: ") + e.what());
  }

  ScenarioFile f;
  Diagnostics diag;
  {
    Section top(root, "$", diag);
    top.string("name", f.config.name);
    read_vehicle(top, "pursuer", f.config.pursuer, true);
    read_vehicle(top, "target", f.config.target, true);
    read_reference(top, f.config.reference);
    read_maneuver(top, f.config.maneuver);
    read_weights(top, f.config.weights);
    read_gains(top, f.config.gains);
    read_simulation(top, f.config);
    read_output(top, f);
  }
  if (!diag.empty()) throw GuidanceError(ErrorCode::invalid_config, diag.joined());
  f.config.validate();
  return f;
}

ScenarioFile load_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw GuidanceError(ErrorCode::invalid_config, "cannot open scenario file " + path.string());
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string dump_scenario(const ScenarioFile& f) {
  const auto& c = f.config;
  auto vehicle = [](const VehicleState& v) {
    return json{{"x_m", v.x}, {"y_m", v.y}, {"heading_deg", rad_to_deg(v.gamma)}, {"speed_mps", v.v}};
  };
  json terms = json::array();
  for (const auto& t : c.reference.terms) {
    terms.push_back({{"amplitude_m", t.amplitude},
                     {"frequency_radps", t.frequency},
                     {"phase", t.phase == Phase::sin ? "sin" : "cos"}});
  }
  const char* kind = c.maneuver.kind == ManeuverProfile::Kind::zero       ? "zero"
                     : c.maneuver.kind == ManeuverProfile::Kind::constant ? "constant"
                                                                          : "product_sinusoid";
  json j = {
      {"name", c.name},
      {"pursuer", vehicle(c.pursuer)},
      {"target", vehicle(c.target)},
      {"reference", {{"base_m", c.reference.base}, {"terms", terms}}},
      {"maneuver",
       {{"kind", kind},
        {"bias_mps2", c.maneuver.bias},
        {"amplitude_mps2", c.maneuver.amplitude},
        {"cos_frequency_radps", c.maneuver.cos_frequency},
        {"sin_frequency_radps", c.maneuver.sin_frequency}}},
      {"weights",
       {{"q", {{c.weights.Q(0, 0), c.weights.Q(0, 1)}, {c.weights.Q(1, 0), c.weights.Q(1, 1)}}},
        {"r", c.weights.R},
        {"lambda_per_s", c.weights.lambda}}},
      {"gains",
       {{"alpha1", c.gains.alpha1},
        {"alpha2", c.gains.alpha2},
        {"beta", c.gains.beta},
        {"l", {c.gains.L(0), c.gains.L(1)}}}},
      {"simulation",
       {{"dt_s", c.dt},
        {"horizon_s", c.horizon},
        {"a_p_max_mps2", c.a_p_max},
        {"curvature_known", c.curvature_known},
        {"eta0", c.eta0}}},
      {"output",
       {{"dir", f.output.dir.string()},
        {"csv", f.output.csv},
        {"metrics", f.output.metrics},
        {"log_decimation", c.log_decimation}}},
  };
  return j.dump(2) + "\n";
}

}  // namespace enclose
