#pragma once

// Ricci curvature of warped products and the integral smallness quantities
// built from it: the curvature deficit below a reference level (n-1)K and the
// excess of the radial Laplacian over its model value.  Norms are normalized
// L^q norms over pole-centered balls.

#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "model_geometry.hpp"
#include "numerics.hpp"
#include "warped_profile.hpp"

namespace plap {

namespace detail {

inline void check_interior(const WarpedProfile& p, double t, const char* who) {
  if (!(t > 0.0) || !(t < p.domain_end))
    throw std::domain_error(std::string(who) + ": t must lie strictly inside (0, D)");
}

// Radius cap for quantities that reference the model of curvature K.
inline double model_cap(double K) {
  return K > 0.0 ? pi / std::sqrt(K) : std::numeric_limits<double>::infinity();
}

}  // namespace detail

/// Ricci eigenvalue in the radial direction, -(n-1) phi''/phi.
inline double ricci_radial(const WarpedProfile& p, double t) {
  detail::check_interior(p, t, "ricci_radial");
  return -(p.n - 1) * p.phi_second(t) / p.phi(t);
}

/// Ricci eigenvalue on the spherical directions,
/// -phi''/phi + (n-2)(1 - phi'^2)/phi^2.
inline double ricci_tangential(const WarpedProfile& p, double t) {
  detail::check_interior(p, t, "ricci_tangential");
  const double phi = p.phi(t);
  return -p.phi_second(t) / phi + (p.n - 2) * (1.0 - sqr(p.phi_prime(t))) / sqr(phi);
}

/// Smallest Ricci eigenvalue rho(t).
inline double ricci_min(const WarpedProfile& p, double t) {
  return std::min(ricci_radial(p, t), ricci_tangential(p, t));
}

/// Pointwise curvature deficit ((n-1)K - rho(t))_+ .
inline double ricci_deficit(const WarpedProfile& p, double K, double t) {
  return std::max(0.0, (p.n - 1) * K - ricci_min(p, t));
}

/// Excess of the radial Laplacian over the model value,
/// ((n-1)(phi'/phi - sn_K'/sn_K))_+ ; requires t below the model diameter.
inline double laplacian_excess(const WarpedProfile& p, double K, double t) {
  detail::check_interior(p, t, "laplacian_excess");
  if (!(t < detail::model_cap(K)))
    throw std::domain_error("laplacian_excess: t reaches past the model diameter");
  const double raw =
      (p.n - 1) * (p.phi_prime(t) / p.phi(t) - sn_prime(K, t) / sn(K, t));
  return std::max(0.0, raw);
}

/// Boundary area of the pole-centered ball of radius r.
inline double boundary_area(const WarpedProfile& p, double r) {
  if (!(r > 0.0) || r > p.domain_end * (1.0 + 1e-12))
    throw std::domain_error("boundary_area: radius outside (0, D]");
  return unit_sphere_area(p.n) * std::pow(std::max(0.0, p.phi(std::min(r, p.domain_end))),
                                          p.n - 1);
}

/// Volume of the pole-centered ball of radius r (adaptive quadrature).
inline double ball_volume(const WarpedProfile& p, double r) {
  if (r == 0.0) return 0.0;
  if (!(r > 0.0) || r > p.domain_end * (1.0 + 1e-12))
    throw std::domain_error("ball_volume: radius outside [0, D]");
  r = std::min(r, p.domain_end);
  const double cn = unit_sphere_area(p.n);
  const int nm1 = p.n - 1;
  const auto area = [&](double t) { return cn * std::pow(std::max(0.0, p.phi(t)), nm1); };
  return integrate(area, 0.0, r, 1e-12);
}

/// Total volume of a closed profile.
inline double profile_total_volume(const WarpedProfile& p) {
  if (!p.closed)
    throw std::domain_error("profile_total_volume: profile does not close up");
  return ball_volume(p, p.domain_end);
}

namespace detail {

// Normalized L^q norm of g over the pole ball of radius R:
// ((1/vol B) \int_0^R g(t)^q dA(t))^{1/q}.  Within a relative margin of the
// poles the integrand is forced to zero; the area weight vanishes there and
// the guard keeps 0/0 expressions in g out of the quadrature.
template <class G>
double normalized_lq(const WarpedProfile& p, double R, double q, const G& g) {
  const double vol = ball_volume(p, R);
  const double cn = unit_sphere_area(p.n);
  const int nm1 = p.n - 1;
  const double guard = 1e-11 * p.domain_end;
  const auto integrand = [&](double t) {
    if (t < guard || t > p.domain_end - guard) return 0.0;
    return std::pow(g(t), q) * cn * std::pow(p.phi(t), nm1);
  };
  const double raw = integrate(integrand, 0.0, R, 1e-12);
  return std::pow(std::max(0.0, raw) / vol, 1.0 / q);
}

inline double resolve_radius(const WarpedProfile& p, double radius, const char* who) {
  if (std::isnan(radius)) {
    if (!p.closed)
      throw std::invalid_argument(std::string(who) +
                                  ": open profiles need an explicit ball radius");
    return p.domain_end;
  }
  if (!(radius > 0.0) || radius > p.domain_end * (1.0 + 1e-12))
    throw std::domain_error(std::string(who) + ": radius outside (0, D]");
  return std::min(radius, p.domain_end);
}

}  // namespace detail

inline constexpr double whole_manifold = std::numeric_limits<double>::quiet_NaN();

/**
 * @brief Normalized integral norm of the curvature deficit,
 *        ((1/vol B_R) \int_{B_R} ((n-1)K - rho)_+^q dvol)^{1/q}.
 *
 * Needs q > n/2 so that the smallness scale is subcritical.  The radius
 * defaults to the whole manifold for closed profiles.
 */
inline double integral_curvature_norm(const WarpedProfile& p, double K, double q,
                                      double radius = whole_manifold) {
  if (!(q > 0.5 * p.n))
    throw std::invalid_argument("integral_curvature_norm: requires q > n/2");
  const double R = detail::resolve_radius(p, radius, "integral_curvature_norm");
  return detail::normalized_lq(p, R, q, [&](double t) { return ricci_deficit(p, K, t); });
}

/**
 * @brief Normalized L^s norm of the radial Laplacian excess over the pole
 *        ball of radius R; s >= 1.
 */
inline double psi_norm(const WarpedProfile& p, double K, double s,
                       double radius = whole_manifold) {
  if (!(s >= 1.0)) throw std::invalid_argument("psi_norm: requires s >= 1");
  const double R = detail::resolve_radius(p, radius, "psi_norm");
  if (!(R <= detail::model_cap(K) * (1.0 + 1e-12)))
    throw std::domain_error("psi_norm: ball reaches past the model diameter");
  return detail::normalized_lq(p, R, s, [&](double t) { return laplacian_excess(p, K, t); });
}

/// Largest K with rho >= (n-1)K on the sampling grid (so the deficit vanishes).
inline double auto_min_curvature(const WarpedProfile& p, int grid = 4096) {
  double rho_min = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid; ++i) {
    const double t = p.domain_end * (i + 0.5) / grid;
    rho_min = std::min(rho_min, ricci_min(p, t));
  }
  return rho_min / (p.n - 1);
}

/// Gridded curvature summary plus the requested deficit norms.
struct CurvatureReport {
  std::vector<double> grid;        ///< midpoint sample radii
  std::vector<double> rho;         ///< smallest Ricci eigenvalue per sample
  std::vector<double> deficit;     ///< ((n-1)K - rho)_+ per sample
  std::vector<double> psi;         ///< Laplacian excess per sample (NaN past model diameter)
  double rho_min = 0.0;
  double K = 0.0;
  std::map<double, double> norms;  ///< q -> normalized deficit norm
  std::map<double, double> norm_refinement_delta;  ///< q -> |grid norm @2N - @N|
};

/**
 * @brief Samples rho, the deficit and the Laplacian excess on a midpoint grid
 *        and computes the deficit norms for each requested q.
 *
 * The refinement delta compares a trapezoid evaluation of each norm on the
 * sampling grid against one at twice the resolution, as a convergence
 * diagnostic for tabulated profiles.
 */
inline CurvatureReport curvature_report(const WarpedProfile& p, double K,
                                        const std::vector<double>& qs,
                                        double radius = whole_manifold, int grid_n = 4096) {
  const double R = detail::resolve_radius(p, radius, "curvature_report");
  CurvatureReport rep;
  rep.K = K;
  rep.grid.reserve(grid_n);
  const double cap = detail::model_cap(K);
  for (int i = 0; i < grid_n; ++i) {
    const double t = R * (i + 0.5) / grid_n;
    rep.grid.push_back(t);
    rep.rho.push_back(ricci_min(p, t));
    rep.deficit.push_back(std::max(0.0, (p.n - 1) * K - rep.rho.back()));
    rep.psi.push_back(t < cap ? laplacian_excess(p, K, t)
                              : std::numeric_limits<double>::quiet_NaN());
  }
  rep.rho_min = *std::min_element(rep.rho.begin(), rep.rho.end());

  const double vol = ball_volume(p, R);
  const double cn = unit_sphere_area(p.n);
  const auto grid_norm = [&](double q, int cells) {
    double acc = 0.0;
    const double h = R / cells;
    for (int i = 0; i < cells; ++i) {
      const double t = (i + 0.5) * h;
      acc += std::pow(ricci_deficit(p, K, t), q) * cn * std::pow(p.phi(t), p.n - 1) * h;
    }
    return std::pow(acc / vol, 1.0 / q);
  };
  for (double q : qs) {
    rep.norms[q] = integral_curvature_norm(p, K, q, R);
    rep.norm_refinement_delta[q] = std::abs(grid_norm(q, 2 * grid_n) - grid_norm(q, grid_n));
  }
  return rep;
}

}  // namespace plap
