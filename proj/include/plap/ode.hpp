#pragma once

// Embedded Cash-Karp 4(5) Runge-Kutta integration for two-component systems,
// with adaptive step control and exact landing on a list of observation
// times.  Step underflow (forced by a non-integrable singularity) raises
// OdeError instead of silently stalling.

#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace plap {

struct OdeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using State2 = std::array<double, 2>;

struct OdeOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double initial_step_fraction = 1e-6;  // of the total interval
  double min_step_fraction = 1e-15;     // underflow threshold
};

namespace detail {

template <class RHS>
void cash_karp_step(const RHS& f, double t, const State2& y, double h, State2& y5,
                    State2& err) {
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 3.0 / 10, a42 = -9.0 / 10, a43 = 6.0 / 5;
  static constexpr double a51 = -11.0 / 54, a52 = 5.0 / 2, a53 = -70.0 / 27, a54 = 35.0 / 27;
  static constexpr double a61 = 1631.0 / 55296, a62 = 175.0 / 512, a63 = 575.0 / 13824,
                          a64 = 44275.0 / 110592, a65 = 253.0 / 4096;
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 3.0 / 5, c5 = 1.0, c6 = 7.0 / 8;
  static constexpr double b1 = 37.0 / 378, b3 = 250.0 / 621, b4 = 125.0 / 594,
                          b6 = 512.0 / 1771;
  static constexpr double d1 = 2825.0 / 27648, d3 = 18575.0 / 48384, d4 = 13525.0 / 55296,
                          d5 = 277.0 / 14336, d6 = 1.0 / 4;

  State2 k1, k2, k3, k4, k5, k6, tmp;
  f(t, y, k1);
  for (int i = 0; i < 2; ++i) tmp[i] = y[i] + h * a21 * k1[i];
  f(t + c2 * h, tmp, k2);
  for (int i = 0; i < 2; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
  f(t + c3 * h, tmp, k3);
  for (int i = 0; i < 2; ++i) tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
  f(t + c4 * h, tmp, k4);
  for (int i = 0; i < 2; ++i)
    tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
  f(t + c5 * h, tmp, k5);
  for (int i = 0; i < 2; ++i)
    tmp[i] =
        y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
  f(t + c6 * h, tmp, k6);

  for (int i = 0; i < 2; ++i) {
    const double hi5 = b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b6 * k6[i];
    const double hi4 = d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i];
    y5[i] = y[i] + h * hi5;
    err[i] = h * (hi5 - hi4);
  }
}

}  // namespace detail

/**
 * Integrates y' = rhs(t, y) from obs.front() to obs.back(), calling
 * observe(index, t, y) at every observation time (including the first).
 * Observation times must be strictly increasing.
 */
template <class RHS, class Observer>
void integrate_observed(const RHS& rhs, State2 y, const std::vector<double>& obs,
                        const OdeOptions& opt, Observer&& observe) {
  if (obs.size() < 2) throw std::invalid_argument("integrate_observed: need >= 2 times");
  const double span = obs.back() - obs.front();
  if (!(span > 0.0))
    throw std::invalid_argument("integrate_observed: times must be increasing");

  double t = obs.front();
  double h_full = span * opt.initial_step_fraction;  // controller's step proposal
  const double h_min = span * opt.min_step_fraction;
  observe(size_t{0}, t, y);

  State2 y5, err;
  for (size_t k = 1; k < obs.size(); ++k) {
    const double target = obs[k];
    while (t < target) {
      const bool clipped = t + h_full >= target;
      const double h = clipped ? target - t : h_full;
      detail::cash_karp_step(rhs, t, y, h, y5, err);
      double err_norm = 0.0;
      for (int i = 0; i < 2; ++i) {
        const double scale =
            opt.abs_tol + opt.rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
        err_norm = std::max(err_norm, std::abs(err[i]) / scale);
      }
      if (err_norm <= 1.0) {
        t += h;
        y = y5;
        // A clipped landing step leaves the controller's proposal alone.
        if (!clipped) {
          const double grow = err_norm > 0.0 ? 0.9 * std::pow(err_norm, -0.2) : 5.0;
          h_full = std::max(h * std::min(5.0, std::max(0.2, grow)), h_min);
        }
      } else {
        if (h <= h_min * (1.0 + 1e-12)) {
          std::ostringstream msg;
          msg << "integrate_observed: step underflow at t = " << t << " (h = " << h
              << ", error ratio = " << err_norm << ")";
          throw OdeError(msg.str());
        }
        h_full = std::max(h * std::max(0.1, 0.9 * std::pow(err_norm, -0.25)), h_min);
      }
    }
    observe(k, t, y);
  }
}

}  // namespace plap
