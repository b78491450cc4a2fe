#pragma once

// Isolated supertwisting loop
//   S_dot = -alpha1 |S|^beta sign(S) + w + d(t),  w_dot = -alpha2 sign(S)
// integrated with RK4 at a fine step.

#include <cmath>
#include <functional>

#include "enclose/ism.hpp"

namespace enclose::testing {

struct StBenchResult {
  double settle_time;     // last time |S| was above the band (0 if never)
  double max_abs_s_late;  // max |S| over [t_check, horizon]
};

inline StBenchResult run_st_bench(double s0, const std::function<double(double)>& d,
                                  const StGains& g, double band, double t_check,
                                  double horizon = 10.0, double h = 1e-4) {
  auto rhs = [&](double t, double s, double w, double& ds, double& dw) {
    const SlidingState sl{s, w};
    ds = supertwisting_term(sl, g) + d(t);
    dw = w_rate(sl, g);
  };
  double s = s0, w = 0.0, t = 0.0;
  StBenchResult out{0.0, 0.0};
  const long n = std::lround(horizon / h);
  for (long k = 0; k < n; ++k) {
    double k1s, k1w, k2s, k2w, k3s, k3w, k4s, k4w;
    rhs(t, s, w, k1s, k1w);
    rhs(t + h / 2, s + h / 2 * k1s, w + h / 2 * k1w, k2s, k2w);
    rhs(t + h / 2, s + h / 2 * k2s, w + h / 2 * k2w, k3s, k3w);
    rhs(t + h, s + h * k3s, w + h * k3w, k4s, k4w);
    s += h / 6 * (k1s + 2 * k2s + 2 * k3s + k4s);
    w += h / 6 * (k1w + 2 * k2w + 2 * k3w + k4w);
    t = (k + 1) * h;
    if (std::abs(s) > band) out.settle_time = t;
    if (t >= t_check) out.max_abs_s_late = std::max(out.max_abs_s_late, std::abs(s));
  }
  return out;
}

}  // namespace enclose::testing
