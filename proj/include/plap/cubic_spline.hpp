#pragma once

// Cubic spline interpolation on a strictly increasing knot vector with
// clamped (prescribed slope) or natural boundary conditions.  Second
// derivatives at the knots are obtained from the standard tridiagonal system
// via the Thomas algorithm.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace plap {

class CubicSpline {
 public:
  struct Boundary {
    bool clamped = false;
    double slope = 0.0;
  };

  static Boundary natural() { return Boundary{false, 0.0}; }
  static Boundary clamped(double slope) { return Boundary{true, slope}; }

  CubicSpline(std::vector<double> x, std::vector<double> y, Boundary left, Boundary right)
      : x_(std::move(x)), y_(std::move(y)) {
    const size_t n = x_.size();
    if (n < 2 || y_.size() != n)
      throw std::invalid_argument("CubicSpline: need at least two matching knots");
    for (size_t i = 0; i + 1 < n; ++i)
      if (!(x_[i] < x_[i + 1]))
        throw std::invalid_argument("CubicSpline: knots must be strictly increasing");

    // Tridiagonal system for the knot second derivatives m_.
    std::vector<double> a(n, 0.0), b(n, 0.0), c(n, 0.0), d(n, 0.0);
    const auto h = [&](size_t i) { return x_[i + 1] - x_[i]; };
    const auto dy = [&](size_t i) { return (y_[i + 1] - y_[i]) / h(i); };

    if (left.clamped) {
      b[0] = h(0) / 3.0;
      c[0] = h(0) / 6.0;
      d[0] = dy(0) - left.slope;
    } else {
      b[0] = 1.0;
    }
    for (size_t i = 1; i + 1 < n; ++i) {
      a[i] = h(i - 1) / 6.0;
      b[i] = (h(i - 1) + h(i)) / 3.0;
      c[i] = h(i) / 6.0;
      d[i] = dy(i) - dy(i - 1);
    }
    if (right.clamped) {
      a[n - 1] = h(n - 2) / 6.0;
      b[n - 1] = h(n - 2) / 3.0;
      d[n - 1] = right.slope - dy(n - 2);
    } else {
      b[n - 1] = 1.0;
    }

    for (size_t i = 1; i < n; ++i) {
      const double w = a[i] / b[i - 1];
      b[i] -= w * c[i - 1];
      d[i] -= w * d[i - 1];
    }
    m_.assign(n, 0.0);
    m_[n - 1] = d[n - 1] / b[n - 1];
    for (size_t i = n - 1; i-- > 0;) m_[i] = (d[i] - c[i] * m_[i + 1]) / b[i];
  }

  double operator()(double t) const { return eval(t, 0); }
  double derivative(double t) const { return eval(t, 1); }
  double second_derivative(double t) const { return eval(t, 2); }

  double front() const { return x_.front(); }
  double back() const { return x_.back(); }

 private:
  std::vector<double> x_, y_, m_;

  size_t segment(double t) const {
    // Evaluation clamps to the end segments; extrapolation is the segment's
    // own cubic, callers are expected to stay within [front, back].
    size_t lo = 0, hi = x_.size() - 1;
    while (hi - lo > 1) {
      const size_t mid = (lo + hi) / 2;
      (x_[mid] <= t ? lo : hi) = mid;
    }
    return lo;
  }

  double eval(double t, int order) const {
    const size_t i = segment(t);
    const double h = x_[i + 1] - x_[i];
    const double u = x_[i + 1] - t, v = t - x_[i];
    switch (order) {
      case 0:
        return m_[i] * u * u * u / (6.0 * h) + m_[i + 1] * v * v * v / (6.0 * h) +
               (y_[i] / h - m_[i] * h / 6.0) * u + (y_[i + 1] / h - m_[i + 1] * h / 6.0) * v;
      case 1:
        return -m_[i] * u * u / (2.0 * h) + m_[i + 1] * v * v / (2.0 * h) +
               (y_[i + 1] - y_[i]) / h - (m_[i + 1] - m_[i]) * h / 6.0;
      default:
        return (m_[i] * u + m_[i + 1] * v) / h;
    }
  }
};

}  // namespace plap
