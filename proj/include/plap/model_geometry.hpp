#pragma once

/**
 * @file model_geometry.hpp
 * @brief Closed-form geometry of the simply connected constant-curvature
 *        model spaces: generalized sine, radial Laplacian, sphere areas and
 *        ball volumes.
 *
 * All distances are geodesic.  For curvature K > 0 the model is the round
 * sphere of diameter pi/sqrt(K); quantities are undefined past the diameter
 * and the corresponding radii are rejected with std::domain_error.
 */

#include <cmath>
#include <stdexcept>
#include <string>

#include "numerics.hpp"

namespace plap {

/// Constant-curvature model space of dimension n and sectional curvature K.
struct ModelSpace {
  int n;
  double K;
};

/**
 * @brief Validating factory for ModelSpace.
 * @throws std::invalid_argument for n < 2 or non-finite K.
 */
inline ModelSpace make_model(int n, double K) {
  if (n < 2) throw std::invalid_argument("make_model: dimension must be at least 2");
  if (!std::isfinite(K)) throw std::invalid_argument("make_model: curvature must be finite");
  return ModelSpace{n, K};
}

/// Diameter of the model space; +infinity when K <= 0.
inline double model_diameter(const ModelSpace& m) {
  return m.K > 0.0 ? pi / std::sqrt(m.K) : std::numeric_limits<double>::infinity();
}

/**
 * @brief Generalized sine sn_K: solution of y'' + K y = 0, y(0)=0, y'(0)=1.
 *
 * Evaluates sin(sqrt(K) t)/sqrt(K), t, or sinh(sqrt(-K) t)/sqrt(-K) depending
 * on the sign of K.  Near K t^2 = 0 a Taylor expansion keeps the value smooth
 * in K, so K -> 0 limits match the flat case to rounding.
 */
inline double sn(double K, double t) {
  const double x = K * t * t;
  if (std::abs(x) < 1e-6) return t * (1.0 - x / 6.0 + x * x / 120.0);
  if (K > 0.0) {
    const double s = std::sqrt(K);
    return std::sin(s * t) / s;
  }
  const double s = std::sqrt(-K);
  return std::sinh(s * t) / s;
}

/// Derivative of sn_K (generalized cosine).
inline double sn_prime(double K, double t) {
  const double x = K * t * t;
  if (std::abs(x) < 1e-6) return 1.0 - x / 2.0 + x * x / 24.0;
  if (K > 0.0) return std::cos(std::sqrt(K) * t);
  return std::cosh(std::sqrt(-K) * t);
}

/// Second derivative of sn_K, equal to -K sn_K.
inline double sn_second(double K, double t) { return -K * sn(K, t); }

/**
 * @brief Surface area of the unit (n-1)-sphere, 2 pi^{n/2} / Gamma(n/2).
 */
inline double unit_sphere_area(int n) {
  if (n < 2) throw std::invalid_argument("unit_sphere_area: dimension must be at least 2");
  return 2.0 * std::pow(pi, 0.5 * n) / std::tgamma(0.5 * n);
}

namespace detail {
inline void require_radius_in_model(const ModelSpace& m, double t, const char* who,
                                    bool allow_diameter) {
  if (!(t > 0.0)) throw std::domain_error(std::string(who) + ": radius must be positive");
  if (m.K > 0.0) {
    const double diam = model_diameter(m);
    const double cap = allow_diameter ? diam * (1.0 + 1e-9) : diam;
    if (t > cap)
      throw std::domain_error(std::string(who) + ": radius exceeds the model diameter");
  }
}
}  // namespace detail

/**
 * @brief Laplacian of the distance function at radius t,
 *        (n-1) sn_K'(t) / sn_K(t).
 * @throws std::domain_error for t <= 0, or t >= diameter when K > 0.
 */
inline double model_laplacian_of_r(const ModelSpace& m, double t) {
  detail::require_radius_in_model(m, t, "model_laplacian_of_r", false);
  if (m.K > 0.0 && t >= model_diameter(m))
    throw std::domain_error("model_laplacian_of_r: radius exceeds the model diameter");
  return (m.n - 1) * sn_prime(m.K, t) / sn(m.K, t);
}

/// Mean curvature of the geodesic sphere of radius t (inward normal),
/// coinciding with the radial Laplacian of the distance function.
inline double mean_curvature_geodesic_sphere(const ModelSpace& m, double t) {
  return model_laplacian_of_r(m, t);
}

/**
 * @brief Area of the geodesic sphere of radius r: C_n sn_K(r)^{n-1}.
 *
 * Radii within 1e-9 (relative) of the diameter are clamped so the area
 * degenerates to exactly zero instead of a signed rounding residue.
 */
inline double model_sphere_area(const ModelSpace& m, double r) {
  detail::require_radius_in_model(m, r, "model_sphere_area", true);
  double s = sn(m.K, r);
  if (m.K > 0.0 && r > model_diameter(m) * (1.0 - 1e-9)) s = std::max(s, 0.0);
  return unit_sphere_area(m.n) * std::pow(s, m.n - 1);
}

/**
 * @brief Volume of the geodesic ball of radius r, by adaptive quadrature of
 *        the sphere-area profile (absolute tolerance 1e-12).
 */
inline double model_ball_volume(const ModelSpace& m, double r) {
  if (r == 0.0) return 0.0;
  detail::require_radius_in_model(m, r, "model_ball_volume", true);
  const double cn = unit_sphere_area(m.n);
  const double diam = model_diameter(m);
  const auto area = [&](double t) {
    double s = sn(m.K, t);
    if (m.K > 0.0 && t > diam * (1.0 - 1e-9)) s = std::max(s, 0.0);
    return cn * std::pow(s, m.n - 1);
  };
  return integrate(area, 0.0, std::min(r, diam), 1e-12);
}

/// Total volume of the model space (finite only for K > 0).
inline double model_total_volume(const ModelSpace& m) {
  if (!(m.K > 0.0))
    throw std::domain_error("model_total_volume: total volume is finite only for K > 0");
  return model_ball_volume(m, model_diameter(m));
}

}  // namespace plap
