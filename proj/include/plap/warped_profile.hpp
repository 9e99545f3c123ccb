#pragma once

/**
 * @file warped_profile.hpp
 * @brief Rotationally symmetric metrics dr^2 + phi(r)^2 g_{S^{n-1}} described
 *        by their warping profile phi on [0, D].
 *
 * A profile is smooth at the pole (phi(0) = 0, phi'(0) = 1).  Closed profiles
 * additionally satisfy phi(D) = 0, phi'(D) = -1, giving a smooth closed
 * manifold; open profiles describe a geodesic ball of radius D.
 */

#include <cmath>
#include <fstream>
#include <functional>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cubic_spline.hpp"
#include "model_geometry.hpp"
#include "numerics.hpp"

namespace plap {

struct WarpedProfile {
  int n = 2;              ///< manifold dimension
  double domain_end = 0;  ///< D, the radial extent
  bool closed = false;    ///< phi vanishes again at D
  std::string name;       ///< stable identifier echoed in reports
  std::function<double(double)> phi, phi_prime, phi_second;
};

namespace detail {

inline void check_dimension(int n, const char* who) {
  if (n < 2) throw std::invalid_argument(std::string(who) + ": dimension must be at least 2");
}

// Interior positivity is a structural requirement; sampled rather than proven.
inline void check_positive_interior(const WarpedProfile& p, const char* who) {
  const int cells = 8192;
  for (int i = 1; i < cells; ++i) {
    const double t = p.domain_end * i / cells;
    if (!(p.phi(t) > 0.0)) {
      std::ostringstream msg;
      msg << who << ": profile is not positive at t = " << t;
      throw std::invalid_argument(msg.str());
    }
  }
}

}  // namespace detail

/// Round sphere profile phi = sn_K on [0, pi/sqrt(K)]; requires K > 0.
inline WarpedProfile make_sphere_profile(int n, double K) {
  detail::check_dimension(n, "make_sphere_profile");
  if (!(K > 0.0))
    throw std::invalid_argument("make_sphere_profile: needs positive curvature");
  WarpedProfile p;
  p.n = n;
  p.domain_end = pi / std::sqrt(K);
  p.closed = true;
  p.name = "sphere";
  p.phi = [K](double t) { return sn(K, t); };
  p.phi_prime = [K](double t) { return sn_prime(K, t); };
  p.phi_second = [K](double t) { return -K * sn(K, t); };
  return p;
}

/// Euclidean profile phi = t on [0, D].
inline WarpedProfile make_flat_profile(int n, double D) {
  detail::check_dimension(n, "make_flat_profile");
  if (!(D > 0.0)) throw std::invalid_argument("make_flat_profile: domain end must be positive");
  WarpedProfile p;
  p.n = n;
  p.domain_end = D;
  p.closed = false;
  p.name = "flat";
  p.phi = [](double t) { return t; };
  p.phi_prime = [](double) { return 1.0; };
  p.phi_second = [](double) { return 0.0; };
  return p;
}

/// Hyperbolic profile phi = sinh t on [0, D].
inline WarpedProfile make_hyperbolic_profile(int n, double D) {
  detail::check_dimension(n, "make_hyperbolic_profile");
  if (!(D > 0.0))
    throw std::invalid_argument("make_hyperbolic_profile: domain end must be positive");
  WarpedProfile p;
  p.n = n;
  p.domain_end = D;
  p.closed = false;
  p.name = "hyperbolic";
  p.phi = [](double t) { return std::sinh(t); };
  p.phi_prime = [](double t) { return std::cosh(t); };
  p.phi_second = [](double t) { return std::sinh(t); };
  return p;
}

/**
 * @brief Perturbed round profile phi(t) = sin t + a sin(m t) sin^2 t on
 *        [0, pi].
 *
 * For integer m >= 2 the pole conditions phi(0) = phi(pi) = 0, phi'(0) = 1,
 * phi'(pi) = -1 hold identically in a, so the profile stays a smooth closed
 * manifold.  Positivity on the interior restricts |a|; it is checked on a
 * fine grid at construction.
 */
inline WarpedProfile make_perturbed_sphere_profile(int n, double a, int m) {
  detail::check_dimension(n, "make_perturbed_sphere_profile");
  if (m < 2)
    throw std::invalid_argument(
        "make_perturbed_sphere_profile: modulation index m must be an integer >= 2");
  if (!std::isfinite(a))
    throw std::invalid_argument("make_perturbed_sphere_profile: amplitude must be finite");
  WarpedProfile p;
  p.n = n;
  p.domain_end = pi;
  p.closed = true;
  {
    std::ostringstream nm;
    nm << "perturbed-sphere:" << a << "," << m;
    p.name = nm.str();
  }
  const double md = m;
  p.phi = [a, md](double t) { return std::sin(t) + a * std::sin(md * t) * sqr(std::sin(t)); };
  p.phi_prime = [a, md](double t) {
    return std::cos(t) +
           a * (md * std::cos(md * t) * sqr(std::sin(t)) + std::sin(md * t) * std::sin(2.0 * t));
  };
  p.phi_second = [a, md](double t) {
    return -std::sin(t) + a * (-md * md * std::sin(md * t) * sqr(std::sin(t)) +
                               2.0 * md * std::cos(md * t) * std::sin(2.0 * t) +
                               2.0 * std::sin(md * t) * std::cos(2.0 * t));
  };
  detail::check_positive_interior(p, "make_perturbed_sphere_profile");
  return p;
}

/**
 * @brief Loads a tabulated profile from a CSV file with columns t, phi and a
 *        mandatory header line.
 *
 * The table must start at (0, 0) with strictly increasing t and positive
 * interior phi.  The data are interpolated by a cubic spline clamped to
 * phi'(0) = 1; when the final value vanishes the profile is treated as
 * closed and the right end is clamped to phi'(D) = -1, otherwise the right
 * boundary condition is natural.
 */
inline WarpedProfile make_table_profile(int n, const std::string& path) {
  detail::check_dimension(n, "make_table_profile");
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("make_table_profile: cannot open '" + path + "'");

  std::string line;
  if (!std::getline(in, line))
    throw std::invalid_argument("make_table_profile: '" + path + "' is empty");
  {
    std::istringstream probe(line);
    double a, b;
    char comma;
    if (probe >> a >> comma >> b)
      throw std::invalid_argument("make_table_profile: '" + path +
                                  "' must start with a header line, found numeric data");
  }

  std::vector<double> ts, phis;
  size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::istringstream ss(line);
    double t, v;
    char comma;
    if (!(ss >> t >> comma >> v) || comma != ',') {
      std::ostringstream msg;
      msg << "make_table_profile: '" << path << "' row " << row << ": expected 't,phi'";
      throw std::invalid_argument(msg.str());
    }
    ts.push_back(t);
    phis.push_back(v);
  }
  if (ts.size() < 4)
    throw std::invalid_argument("make_table_profile: '" + path + "' needs at least 4 data rows");
  if (ts.front() != 0.0 || phis.front() != 0.0)
    throw std::invalid_argument("make_table_profile: '" + path + "' must start at t=0, phi=0");
  double max_phi = 0.0;
  for (size_t i = 0; i + 1 < ts.size(); ++i) {
    if (!(ts[i] < ts[i + 1])) {
      std::ostringstream msg;
      msg << "make_table_profile: '" << path << "' row " << (i + 2)
          << ": t values must be strictly increasing";
      throw std::invalid_argument(msg.str());
    }
    max_phi = std::max(max_phi, phis[i]);
  }
  max_phi = std::max(max_phi, phis.back());
  const bool closed = std::abs(phis.back()) <= 1e-9 * max_phi;
  for (size_t i = 1; i + 1 < ts.size(); ++i) {
    if (!(phis[i] > 0.0)) {
      std::ostringstream msg;
      msg << "make_table_profile: '" << path << "' row " << (i + 2)
          << ": interior phi must be positive";
      throw std::invalid_argument(msg.str());
    }
  }
  if (!closed && !(phis.back() > 0.0))
    throw std::invalid_argument("make_table_profile: '" + path +
                                "' final phi must be positive (open) or zero (closed)");

  auto spline = std::make_shared<CubicSpline>(
      ts, phis, CubicSpline::clamped(1.0),
      closed ? CubicSpline::clamped(-1.0) : CubicSpline::natural());

  WarpedProfile p;
  p.n = n;
  p.domain_end = ts.back();
  p.closed = closed;
  p.name = "table:" + path;
  p.phi = [spline](double t) { return (*spline)(t); };
  p.phi_prime = [spline](double t) { return spline->derivative(t); };
  p.phi_second = [spline](double t) { return spline->second_derivative(t); };
  detail::check_positive_interior(p, "make_table_profile");
  return p;
}

/**
 * @brief Parses the profile mini-language used by the command line:
 *        sphere | flat | hyperbolic | perturbed-sphere:<a>,<m> | table:<path>.
 *
 * @param spec      profile description string
 * @param n         manifold dimension
 * @param K         curvature used by the sphere family (ignored otherwise)
 * @param open_end  domain end for the open families (flat, hyperbolic)
 */
inline WarpedProfile profile_from_spec(const std::string& spec, int n, double K,
                                       double open_end) {
  if (spec == "sphere") return make_sphere_profile(n, K);
  if (spec == "flat") return make_flat_profile(n, open_end);
  if (spec == "hyperbolic") return make_hyperbolic_profile(n, open_end);
  const std::string pert = "perturbed-sphere:";
  if (spec.rfind(pert, 0) == 0) {
    std::istringstream args(spec.substr(pert.size()));
    double a;
    long m;
    char comma;
    if (!(args >> a >> comma >> m) || comma != ',' || (args >> std::ws, !args.eof()))
      throw std::invalid_argument("profile_from_spec: expected perturbed-sphere:<a>,<m>");
    return make_perturbed_sphere_profile(n, a, static_cast<int>(m));
  }
  const std::string table = "table:";
  if (spec.rfind(table, 0) == 0) return make_table_profile(n, spec.substr(table.size()));
  throw std::invalid_argument("profile_from_spec: unknown profile '" + spec + "'");
}

}  // namespace plap
