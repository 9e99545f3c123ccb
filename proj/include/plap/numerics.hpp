#pragma once

// Small numerical kernels shared across the library: adaptive quadrature,
// bracketed root finding, finite differences.  No external dependencies.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace plap {

inline constexpr double pi = 3.14159265358979323846264338327950288;

namespace detail {

template <class F>
double simpson_rec(const F& f, double a, double m, double b, double fa, double fm, double fb,
                   double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_rec(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Trapezoid rule for samples g on an ordered (possibly nonuniform) grid t.
inline double trapezoid_on_grid(const std::vector<double>& t, const std::vector<double>& g) {
  double acc = 0.0;
  for (size_t i = 0; i + 1 < t.size(); ++i)
    acc += 0.5 * (g[i] + g[i + 1]) * (t[i + 1] - t[i]);
  return acc;
}

// Adaptive Simpson quadrature with an absolute tolerance.  Endpoint values are
// evaluated, so the integrand must be finite on all of [a, b].
template <class F>
double integrate(const F& f, double a, double b, double abs_tol = 1e-12, int max_depth = 48) {
  if (!(b >= a)) throw std::invalid_argument("integrate: interval end precedes start");
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson_rec(f, a, m, b, fa, fm, fb, whole, abs_tol, max_depth);
}

// Bisection on a bracketed sign change.  Requires f(lo) and f(hi) of opposite
// sign (or zero); returns the bracket midpoint once |hi - lo| <= x_tol.
template <class F>
double bisect(const F& f, double lo, double hi, double x_tol, int max_iter = 200) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo < 0.0) == (fhi < 0.0))
    throw std::invalid_argument("bisect: endpoints do not bracket a sign change");
  for (int i = 0; i < max_iter && (hi - lo) > x_tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = f(mid);
    if (fmid == 0.0) return mid;
    if ((fmid < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Solves g(x) = target for strictly increasing g on [lo, hi].
template <class F>
double invert_increasing(const F& g, double target, double lo, double hi, double x_tol) {
  return bisect([&](double x) { return g(x) - target; }, lo, hi, x_tol);
}

// Second-order central differences, Richardson-extrapolated to fourth order.
template <class F>
double d1_richardson(const F& f, double x, double h) {
  const auto d1 = [&](double s) { return (f(x + s) - f(x - s)) / (2.0 * s); };
  return (4.0 * d1(0.5 * h) - d1(h)) / 3.0;
}

template <class F>
double d2_richardson(const F& f, double x, double h) {
  const auto d2 = [&](double s) { return (f(x + s) - 2.0 * f(x) + f(x - s)) / (s * s); };
  return (4.0 * d2(0.5 * h) - d2(h)) / 3.0;
}

inline double sqr(double x) { return x * x; }

// sgn(u) |u|^e with sgn(0) = 0; the odd power map used throughout the
// quasilinear flux algebra.
inline double signed_pow(double u, double e) {
  if (u == 0.0) return 0.0;
  return u > 0.0 ? std::pow(u, e) : -std::pow(-u, e);
}

}  // namespace plap
