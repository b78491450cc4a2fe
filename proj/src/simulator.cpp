#include "enclose/simulator.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "enclose/angles.hpp"

namespace enclose {

long ScenarioConfig::steps() const {
  return static_cast<long>(std::llround(horizon / dt));
}

void ScenarioConfig::validate() const {
  std::ostringstream err;
  auto fail = [&](const std::string& m) { err << (err.tellp() > 0 ? "; " : "") << m; };

  if (!(pursuer.v > 0.0)) fail("pursuer speed must be positive");
  if (!(target.v >= 0.0)) fail("target speed must be non-negative");
  if (!(pursuer.v > target.v)) fail("pursuer must be faster than the target");
  if (!(dt > 0.0)) fail("dt must be positive");
  if (!(horizon > dt)) fail("horizon must exceed dt");
  if (!(a_p_max > 0.0)) fail("a_p_max must be positive");
  if (log_decimation < 1) fail("log decimation must be >= 1");
  if (!(std::abs(eta0) >= sdre::kEtaFloor)) fail("initial eta below floor");
  if (std::hypot(pursuer.x - target.x, pursuer.y - target.y) == 0.0) {
    fail("pursuer and target start at the same position");
  }
  if (!(weights.R > 0.0)) fail("R must be positive");
  if (!(weights.lambda > 0.0)) fail("Lambda must be positive");
  if (!weights.Q.isApprox(weights.Q.transpose()) ||
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(weights.Q).eigenvalues().minCoeff() <
          -1e-12 * std::max(1.0, weights.Q.norm())) {
    fail("Q must be symmetric positive semidefinite");
  }
  const auto gains_report = check_gains(gains);
  if (!gains_report.ok()) fail("supertwisting gains: " + gains_report.summary());
  if (gains.L.isZero(0.0)) fail("L must not be zero");
  if (dt > 0.0 && horizon > dt) {
    const auto ex = sample_extrema(reference, maneuver, horizon);
    if (!(ex.r_d_min > 0.0)) fail("standoff radius must stay positive over the horizon");
  }
  if (err.tellp() > 0) throw GuidanceError(ErrorCode::invalid_config, err.str());
}

ScenarioConfig builtin_case(int n) {
  if (n < 1 || n > 4) {
    throw GuidanceError(ErrorCode::invalid_config, "unknown built-in case " + std::to_string(n));
  }
  ScenarioConfig cfg;
  cfg.name = "case" + std::to_string(n);
  cfg.pursuer = {-100.0, 0.0, deg_to_rad(20.0), 40.0};
  cfg.target = {0.0, 0.0, deg_to_rad(40.0), n == 4 ? 0.0 : 10.0};

  if (n == 1 || n == 2) {
    cfg.reference = {75.0, {{2.0, 1.0, Phase::sin}, {15.0, 1.0, Phase::cos}}};
  } else {
    cfg.reference = ReferenceProfile::constant(75.0);
  }
  if (n == 1 || n == 3) {
    cfg.maneuver = ManeuverProfile::product_sinusoid(1.5, -5.0, 0.2 * std::numbers::pi,
                                                     0.1 * std::numbers::pi);
  }
  return cfg;
}

Simulator::Simulator(ScenarioConfig cfg) : cfg_(std::move(cfg)) { cfg_.validate(); }

SimState Simulator::initial_state() const {
  SimState s;
  s.pursuer = cfg_.pursuer;
  s.target = cfg_.target;
  s.pursuer.gamma = wrap_angle(s.pursuer.gamma);
  s.target.gamma = wrap_angle(s.target.gamma);
  s.eta = cfg_.eta0;
  return s;
}

ControlSample Simulator::control(const SimState& s) {
  ControlSample u;
  u.t = s.t;
  u.rel = relative_state(s.pursuer, s.target);
  u.ref = eval_reference(cfg_.reference, s.t);
  u.a_t = eval_maneuver(cfg_.maneuver, s.t);
  u.x = {u.rel.r - u.ref.r_d, u.rel.v_r - u.ref.rdot_d, s.eta};
  u.guard = std::abs(std::sin(u.rel.sigma_p)) < sdre::kSingularSine;

  const SdcOptions opts{cfg_.curvature_known, sdre::kSingularSine};
  last_sys_ = build_sdc(u.rel, u.ref, s.eta, cfg_.weights, opts);
  last_sol_ = tracker_.solve(last_sys_, cfg_.weights);
  u.care_residual = last_sol_.residual_norm;
  u.spectral_abscissa = last_sol_.spectral_abscissa();

  u.a_pn = nominal_accel(last_sol_, last_sys_, u.x, cfg_.weights);
  u.a_pd = u.guard ? prev_a_pd_ : disturbance_accel(s.sliding, last_sys_, cfg_.gains);
  prev_a_pd_ = u.a_pd;

  u.a_p_cmd = u.a_pn + u.a_pd;
  u.a_p = std::clamp(u.a_p_cmd, -cfg_.a_p_max, cfg_.a_p_max);
  u.saturated = std::abs(u.a_p_cmd) > cfg_.a_p_max;
  last_ = u;
  return u;
}

SimState Simulator::step(const SimState& s) {
  try {
    const auto u = control(s);
    return advance(s, u);
  } catch (const GuidanceError& e) {
    throw e.at_time(s.t);
  }
}

SimState Simulator::advance(const SimState& s, const ControlSample& u) const {
  using Vec = Eigen::Matrix<double, 9, 1>;
  const double vp = s.pursuer.v;
  const double vt = s.target.v;
  const double w_dot = w_rate(s.sliding, cfg_.gains);  // held with the command
  const SdcOptions opts{cfg_.curvature_known, sdre::kSingularSine};

  auto deriv = [&](double tau, const Vec& X) {
    const VehicleState P{X(0), X(1), X(2), vp};
    const VehicleState T{X(3), X(4), X(5), vt};
    const auto rel = relative_state(P, T);
    const auto ref = eval_reference(cfg_.reference, tau);
    const AccelCommand cmd{u.a_p, eval_maneuver(cfg_.maneuver, tau)};
    const auto rates = engagement_derivatives(rel, P, T, cmd);
    const AugmentedState x{rel.r - ref.r_d, rel.v_r - ref.rdot_d, X(6)};
    const double rdd = rho_ddot(rel, rates.theta_dot, cmd, T, ref.rddot_d);
    const auto sub = build_sdc(rel, ref, X(6), cfg_.weights, opts);
    Vec d;
    d << rates.pursuer.x_dot, rates.pursuer.y_dot, rates.pursuer.gamma_dot, rates.target.x_dot,
        rates.target.y_dot, rates.target.gamma_dot, -cfg_.weights.lambda * X(6),
        manifold_rate(sub, x, u.a_pn, Eigen::Vector2d(x.rho_dot, rdd), cfg_.gains), w_dot;
    return d;
  };

  Vec X;
  X << s.pursuer.x, s.pursuer.y, s.pursuer.gamma, s.target.x, s.target.y, s.target.gamma, s.eta,
      s.sliding.s, s.sliding.w;
  const double h = cfg_.dt;
  const Vec k1 = deriv(s.t, X);
  const Vec k2 = deriv(s.t + 0.5 * h, X + 0.5 * h * k1);
  const Vec k3 = deriv(s.t + 0.5 * h, X + 0.5 * h * k2);
  const Vec k4 = deriv(s.t + h, X + h * k3);
  X += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

  SimState next;
  next.pursuer = {X(0), X(1), wrap_angle(X(2)), vp};
  next.target = {X(3), X(4), wrap_angle(X(5)), vt};
  next.eta = X(6);
  next.sliding = {X(7), X(8)};
  next.t = s.t + h;
  return next;
}

const std::vector<std::string>& TrajectoryLog::column_names() {
  static const std::vector<std::string> names = {
      "t_s",           "pursuer_x_m",     "pursuer_y_m",    "pursuer_gamma_rad",
      "target_x_m",    "target_y_m",      "target_gamma_rad", "r_m",
      "theta_rad",     "sigma_p_rad",     "v_r_mps",        "v_theta_mps",
      "rho_m",         "rho_dot_mps",     "r_d_m",          "rdot_d_mps",
      "rddot_d_mps2",  "eta",             "s_mps",          "w_mps2",
      "a_pn_mps2",     "a_pd_mps2",       "a_p_mps2",       "a_t_mps2",
      "care_residual", "spectral_abscissa_per_s", "guard",  "saturated"};
  return names;
}

bool RunMetrics::monitors_passed(const ScenarioConfig& cfg) const {
  return completed && s_initial == 0.0 && max_abs_a_p <= cfg.a_p_max &&
         max_care_residual <= sdre::kResidualTolerance && max_spectral_abscissa < 0.0 &&
         max_speed_drift == 0.0 && std::isfinite(terminal_mean_abs_rho) &&
         std::isfinite(terminal_mean_sigma_p) && std::isfinite(terminal_mean_a_p);
}

namespace {

LogRecord make_record(const SimState& s, const ControlSample& u) {
  return {s.t,
          s.pursuer.x,
          s.pursuer.y,
          s.pursuer.gamma,
          s.target.x,
          s.target.y,
          s.target.gamma,
          u.rel.r,
          u.rel.theta,
          u.rel.sigma_p,
          u.rel.v_r,
          u.rel.v_theta,
          u.x.rho,
          u.x.rho_dot,
          u.ref.r_d,
          u.ref.rdot_d,
          u.ref.rddot_d,
          s.eta,
          s.sliding.s,
          s.sliding.w,
          u.a_pn,
          u.a_pd,
          u.a_p,
          u.a_t,
          u.care_residual,
          u.spectral_abscissa,
          u.guard ? 1.0 : 0.0,
          u.saturated ? 1.0 : 0.0};
}

class MetricsAccumulator {
 public:
  MetricsAccumulator(const ScenarioConfig& cfg)
      : cfg_(cfg),
        window_(std::min(kTerminalWindow, cfg.horizon)),
        window_start_(cfg.horizon - window_) {}

  void add(long k, const SimState& s, const ControlSample& u) {
    auto& m = m_;
    if (k == 0) m.s_initial = s.sliding.s;
    ++m.steps;
    m.max_abs_a_p = std::max(m.max_abs_a_p, std::abs(u.a_p));
    m.max_care_residual = std::max(m.max_care_residual, u.care_residual);
    m.max_spectral_abscissa = k == 0 ? u.spectral_abscissa
                                     : std::max(m.max_spectral_abscissa, u.spectral_abscissa);
    m.max_abs_s = std::max(m.max_abs_s, std::abs(s.sliding.s));
    if (s.t >= kTransientEnd - 1e-9) {
      m.max_abs_s_after_transient = std::max(m.max_abs_s_after_transient, std::abs(s.sliding.s));
    }
    m.max_speed_drift = std::max({m.max_speed_drift, std::abs(s.pursuer.v - cfg_.pursuer.v),
                                  std::abs(s.target.v - cfg_.target.v)});
    saturated_ += u.saturated;
    guarded_ += u.guard;
    if (std::abs(u.x.rho) >= kConvergenceThreshold) {
      last_violation_ = k;
    }
    last_index_ = k;
    times_.push_back(s.t);
    if (s.t >= window_start_ - 1e-9) {
      ++n_window_;
      sum_abs_rho_ += std::abs(u.x.rho);
      sum_sin_ += std::sin(u.rel.sigma_p);
      sum_cos_ += std::cos(u.rel.sigma_p);
      sum_a_p_ += u.a_p;
    }
  }

  RunMetrics finish(const RiccatiTracker& tracker, bool completed) {
    auto m = m_;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    m.completed = completed;
    m.terminal_window = window_;
    m.warm_solves = tracker.warm_solves();
    m.cold_solves = tracker.cold_solves();
    if (m.steps > 0) {
      m.saturation_duty = static_cast<double>(saturated_) / m.steps;
      m.guard_fraction = static_cast<double>(guarded_) / m.steps;
    }
    if (n_window_ > 0) {
      m.terminal_mean_abs_rho = sum_abs_rho_ / n_window_;
      m.terminal_mean_sigma_p = std::atan2(sum_sin_, sum_cos_);
      m.terminal_mean_a_p = sum_a_p_ / n_window_;
    } else {
      m.terminal_mean_abs_rho = m.terminal_mean_sigma_p = m.terminal_mean_a_p = nan;
    }
    if (last_violation_ < 0) {
      m.convergence_time = 0.0;
    } else if (last_violation_ >= last_index_) {
      m.convergence_time = nan;
    } else {
      m.convergence_time = times_[static_cast<std::size_t>(last_violation_ + 1)];
    }
    return m;
  }

 private:
  const ScenarioConfig& cfg_;
  double window_;
  double window_start_;
  RunMetrics m_;
  long saturated_ = 0;
  long guarded_ = 0;
  long last_violation_ = -1;
  long last_index_ = -1;
  std::vector<double> times_;
  long n_window_ = 0;
  double sum_abs_rho_ = 0.0;
  double sum_sin_ = 0.0;
  double sum_cos_ = 0.0;
  double sum_a_p_ = 0.0;
};

}  // namespace

RunResult run_scenario(const ScenarioConfig& cfg, const RunOptions& opts) {
  RunResult out;
  Simulator sim(cfg);
  out.log.dt = cfg.dt;
  out.log.decimation = cfg.log_decimation;

  const long n = cfg.steps();
  if (opts.keep_log) out.log.records.reserve(static_cast<std::size_t>(n / cfg.log_decimation + 1));
  MetricsAccumulator acc(sim.config());

  SimState s = sim.initial_state();
  bool completed = true;
  for (long k = 0; k < n; ++k) {
    try {
      SimState next = sim.step(s);
      const auto& u = sim.last_control();
      if (opts.keep_log && k % cfg.log_decimation == 0) out.log.records.push_back(make_record(s, u));
      acc.add(k, s, u);
      s = std::move(next);
    } catch (const GuidanceError& e) {
      out.failure = RunFailure{e.code(), e.what(), e.time().value_or(s.t)};
      completed = false;
      break;
    }
  }
  out.metrics = acc.finish(sim.riccati(), completed);
  return out;
}

RelativeDegreeReport verify_relative_degree(const TrajectoryLog& log, double rel_tol) {
  RelativeDegreeReport rep;
  if (log.decimation != 1 || log.records.size() < 3) return rep;
  const auto& r = log.records;
  const double h = log.dt;
  for (std::size_t k = 1; k + 1 < r.size(); ++k) {
    const bool skip = r[k - 1].guard != 0.0 || r[k].guard != 0.0 || r[k - 1].saturated != 0.0 ||
                      r[k].saturated != 0.0;
    if (skip) {
      ++rep.excluded;
      continue;
    }
    const double fd = (r[k + 1].rho - 2.0 * r[k].rho + r[k - 1].rho) / (h * h);
    const RelativeState rel{r[k].r, r[k].theta, r[k].sigma_p, r[k].v_r, r[k].v_theta};
    const VehicleState target{r[k].target_x, r[k].target_y, r[k].target_gamma, 0.0};
    const AccelCommand cmd{0.5 * (r[k - 1].a_p + r[k].a_p), r[k].a_t};
    const double theta_dot = rel.theta_dot();
    const double exact = rho_ddot(rel, theta_dot, cmd, target, r[k].rddot_d);
    const double scale = std::max(rho_ddot_scale(rel, theta_dot, cmd, target, r[k].rddot_d),
                                  std::numeric_limits<double>::min());
    const double err = std::abs(fd - exact) / scale;
    ++rep.checked;
    if (std::isfinite(err) && err <= rel_tol) ++rep.passed;
    rep.max_rel_error = std::max(rep.max_rel_error, std::isfinite(err) ? err : INFINITY);
  }
  return rep;
}

}  // namespace enclose
