#pragma once

// Test-only reference implementations, kept deliberately independent of the
// library code paths they are used to check.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace oracles {

inline constexpr double pi = 3.14159265358979323846264338327950288;

// Composite trapezoid rule on a uniform grid; the deliberately naive
// counterpart to the library's adaptive quadrature.
template <class F>
double trapezoid(const F& f, double a, double b, int cells) {
  double acc = 0.5 * (f(a) + f(b));
  const double h = (b - a) / cells;
  for (int i = 1; i < cells; ++i) acc += f(a + i * h);
  return acc * h;
}

// One-dimensional generalized half-period: pi_p = 2 pi / (p sin(pi/p)).
// The first eigenvalue of the p-Laplacian string on [0, T] with a free left
// end and a fixed right end is (p - 1) (pi_p / (2 T))^p.
inline double pi_p(double p) { return 2.0 * pi / (p * std::sin(pi / p)); }

inline double string_eigenvalue_mixed(double p, double T) {
  return (p - 1.0) * std::pow(pi_p(p) / (2.0 * T), p);
}

// Bessel J0 through its integral representation, evaluated with a composite
// Simpson rule; accurate to ~1e-14 for the arguments used here.
inline double bessel_j0(double x) {
  const int cells = 256;  // even
  const double h = pi / cells;
  double acc = std::cos(x * std::sin(0.0)) + std::cos(x * std::sin(pi));
  for (int i = 1; i < cells; ++i) acc += (i % 2 ? 4.0 : 2.0) * std::cos(x * std::sin(i * h));
  return acc * h / 3.0 / pi;
}

// First positive zero of J0, located by bisection on [2, 3].
inline double bessel_j0_first_zero() {
  double lo = 2.0, hi = 3.0;
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (bessel_j0(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

// Sort-based decreasing rearrangement of (value, mass) cells: sort by value
// descending, accumulate masses, and read the step function off the prefix
// sums.  Evaluation at s picks the cell whose cumulative interval contains s.
struct SortedRearrangement {
  std::vector<double> value;  // descending
  std::vector<double> cum;    // cum[i] = mass of { values >= value[i] }
  double total = 0.0;

  double eval(double s) const {
    if (s <= 0.0) return value.front();
    const auto it = std::lower_bound(cum.begin(), cum.end(), s);
    if (it == cum.end()) return value.back();
    return value[static_cast<size_t>(it - cum.begin())];
  }
};

inline SortedRearrangement sort_rearrange(std::vector<double> values, std::vector<double> masses) {
  std::vector<size_t> idx(values.size());
  std::iota(idx.begin(), idx.end(), size_t{0});
  std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return values[a] > values[b]; });
  SortedRearrangement out;
  out.value.reserve(idx.size());
  out.cum.reserve(idx.size());
  double acc = 0.0;
  for (size_t k : idx) {
    acc += masses[k];
    out.value.push_back(values[k]);
    out.cum.push_back(acc);
  }
  out.total = acc;
  return out;
}

}  // namespace oracles
