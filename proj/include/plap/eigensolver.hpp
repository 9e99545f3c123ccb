#pragma once

/**
 * @file eigensolver.hpp
 * @brief First eigenvalues of the radial p-Laplacian
 *        (A |f'|^{p-2} f')' = -lambda A |f|^{p-2} f on [0, T]
 * by shooting on the flux formulation, plus an independent Rayleigh-quotient
 * grid minimizer used for cross-checks.
 *
 * The weight A is the area of the geodesic sphere of radius t; it either
 * vanishes at the pole like A ~ c t^k (regular pole) or is bounded away from
 * zero (interval problems, where the left end carries a natural/Neumann
 * condition).  Shooting starts at delta = T * 1e-6 with f = 1 and the flux
 * integrated through the pole model, and bisects lambda on a Sturm-type sign
 * criterion.  Eigenfunctions are normalized to f(0) = 1.
 */

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "model_geometry.hpp"
#include "numerics.hpp"
#include "ode.hpp"
#include "warped_profile.hpp"

namespace plap {

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class BoundaryCondition { dirichlet, neumann };

/// Radial eigenvalue problem on [0, T] with weight A.
struct RadialProblem {
  std::function<double(double)> weight;  ///< A(t), positive on (0, T)
  double T = 1.0;
  double p = 2.0;
  BoundaryCondition bc = BoundaryCondition::dirichlet;  ///< condition at T
  double pole_coeff = 1.0;  ///< A(t) ~ pole_coeff * t^pole_power near 0
  int pole_power = 0;       ///< 0 for interval problems (A(0) > 0)
  std::string name;
};

/// One-dimensional half-period of the p-trigonometric sine.
inline double pi_p(double p) {
  if (!(p > 1.0)) throw std::invalid_argument("pi_p: requires p > 1");
  return 2.0 * pi / (p * std::sin(pi / p));
}

namespace detail {
inline void check_p(double p, const char* who) {
  if (!(p > 1.0)) throw std::invalid_argument(std::string(who) + ": requires p > 1");
}
}  // namespace detail

/// Dirichlet problem on the pole ball of radius `radius` of a warped profile.
inline RadialProblem ball_problem(const WarpedProfile& prof, double radius, double p) {
  detail::check_p(p, "ball_problem");
  if (!(radius > 0.0) || radius > prof.domain_end * (1.0 + 1e-12))
    throw std::domain_error("ball_problem: radius outside (0, D]");
  RadialProblem pr;
  const double cn = unit_sphere_area(prof.n);
  const int nm1 = prof.n - 1;
  pr.weight = [phi = prof.phi, cn, nm1](double t) {
    return cn * std::pow(std::max(0.0, phi(t)), nm1);
  };
  pr.T = std::min(radius, prof.domain_end);
  pr.p = p;
  pr.bc = BoundaryCondition::dirichlet;
  pr.pole_coeff = cn;
  pr.pole_power = nm1;
  pr.name = prof.name + ":ball";
  return pr;
}

/// Dirichlet problem on the ball around the far pole of a closed profile,
/// in the reversed coordinate u = D - t; the boundary sits at t = inner.
inline RadialProblem reversed_ball_problem(const WarpedProfile& prof, double inner, double p) {
  detail::check_p(p, "reversed_ball_problem");
  if (!prof.closed)
    throw std::domain_error("reversed_ball_problem: needs a closed profile");
  if (!(inner > 0.0) || !(inner < prof.domain_end))
    throw std::domain_error("reversed_ball_problem: boundary outside (0, D)");
  RadialProblem pr;
  const double cn = unit_sphere_area(prof.n);
  const int nm1 = prof.n - 1;
  const double D = prof.domain_end;
  pr.weight = [phi = prof.phi, cn, nm1, D](double u) {
    return cn * std::pow(std::max(0.0, phi(D - u)), nm1);
  };
  pr.T = D - inner;
  pr.p = p;
  pr.bc = BoundaryCondition::dirichlet;
  pr.pole_coeff = cn;
  pr.pole_power = nm1;
  pr.name = prof.name + ":ball-reversed";
  return pr;
}

/// Dirichlet problem on the geodesic ball of radius r in the model space.
inline RadialProblem model_ball_problem(const ModelSpace& m, double r, double p) {
  detail::check_p(p, "model_ball_problem");
  if (!(r > 0.0)) throw std::domain_error("model_ball_problem: radius must be positive");
  if (m.K > 0.0 && !(r < model_diameter(m)))
    throw std::domain_error("model_ball_problem: radius must stay below the model diameter");
  RadialProblem pr;
  const double cn = unit_sphere_area(m.n);
  const int nm1 = m.n - 1;
  const double K = m.K;
  pr.weight = [cn, nm1, K](double t) { return cn * std::pow(std::max(0.0, sn(K, t)), nm1); };
  pr.T = r;
  pr.p = p;
  pr.bc = BoundaryCondition::dirichlet;
  pr.pole_coeff = cn;
  pr.pole_power = nm1;
  std::ostringstream nm;
  nm << "model:n=" << m.n << ",K=" << m.K;
  pr.name = nm.str();
  return pr;
}

/// Interval problem with weight bounded away from zero (A(0) > 0).
inline RadialProblem interval_problem(std::function<double(double)> A, double T, double p,
                                      BoundaryCondition bc = BoundaryCondition::dirichlet) {
  detail::check_p(p, "interval_problem");
  if (!(T > 0.0)) throw std::invalid_argument("interval_problem: T must be positive");
  RadialProblem pr;
  pr.pole_coeff = A(0.0);
  if (!(pr.pole_coeff > 0.0))
    throw std::invalid_argument("interval_problem: weight must be positive at 0");
  pr.weight = std::move(A);
  pr.T = T;
  pr.p = p;
  pr.bc = bc;
  pr.pole_power = 0;
  pr.name = "interval";
  return pr;
}

struct SolveOptions {
  double tol = 1e-8;             ///< relative bracket tolerance on lambda
  int grid_size = 2048;          ///< observation samples between delta and T
  bool validate_nodal = true;    ///< Neumann: check the nodal-domain identity
  double nodal_tol_factor = 10;  ///< nodal identity tolerance, in units of tol
};

struct EigenResult {
  double lambda = 0.0;
  std::vector<double> grid;    ///< sample radii, beginning at 0
  std::vector<double> f;       ///< eigenfunction samples, f(0) = 1
  std::vector<double> fprime;  ///< df/dt samples
  std::vector<double> flux;    ///< w = A |f'|^{p-2} f'
  int zero_count = 0;          ///< interior sign changes of f
  double bracket_width = 0.0;  ///< final bisection bracket (hi - lo)
  /// Relative sup-defect of the flux identity, computed by trapezoid sums on
  /// the sample grid.  O(h^2) for p >= 2; O(h^p) when p < 2 because |f|^{p-1}
  /// loses smoothness at zeros of f.
  double residual = 0.0;
  double nodal_radius = std::numeric_limits<double>::quiet_NaN();  ///< Neumann only
  double terminal_flux = std::numeric_limits<double>::quiet_NaN();  ///< Neumann only
};

namespace detail {

struct Shot {
  std::vector<double> t, f, w;
  int sign_changes = 0;      // all sign changes of f along the samples
  int first_change = -1;     // sample index before the first change
  double min_f = 1.0;
  double f_end = 0.0, w_end = 0.0;
};

// Integrates the flux system from delta to t_end, sampling on a uniform grid.
inline Shot shoot(const RadialProblem& pr, double lambda, double t_end, int grid_size) {
  const double delta = pr.T * 1e-6;
  const double q = 1.0 / (pr.p - 1.0);
  const double pm1 = pr.p - 1.0;
  const auto rhs = [&](double t, const State2& y, State2& dy) {
    const double A = pr.weight(t);
    dy[0] = signed_pow(y[1] / A, q);
    dy[1] = -lambda * A * signed_pow(y[0], pm1);
  };

  Shot s;
  s.t.resize(grid_size);
  for (int i = 0; i < grid_size; ++i)
    s.t[i] = delta + (t_end - delta) * i / (grid_size - 1);
  s.f.resize(grid_size);
  s.w.resize(grid_size);

  State2 y0;
  y0[0] = 1.0;
  y0[1] = -lambda * pr.pole_coeff * std::pow(delta, pr.pole_power + 1) / (pr.pole_power + 1);
  try {
    integrate_observed(rhs, y0, s.t, OdeOptions{}, [&](size_t k, double, const State2& y) {
      s.f[k] = y[0];
      s.w[k] = y[1];
    });
  } catch (const OdeError& e) {
    std::ostringstream msg;
    msg << "shoot: integration failed for problem '" << pr.name << "' at lambda = " << lambda
        << ": " << e.what();
    throw SolverError(msg.str());
  }

  for (int i = 0; i + 1 < grid_size; ++i) {
    if ((s.f[i] > 0.0 && s.f[i + 1] <= 0.0) || (s.f[i] < 0.0 && s.f[i + 1] >= 0.0)) {
      if (s.first_change < 0) s.first_change = i;
      ++s.sign_changes;
    }
  }
  s.min_f = *std::min_element(s.f.begin(), s.f.end());
  s.f_end = s.f.back();
  s.w_end = s.w.back();
  return s;
}

// Relative sup-norm defect of w(t) + lambda (head + int_delta^t A |f|^{p-2} f).
inline double flux_residual(const RadialProblem& pr, double lambda, const Shot& s) {
  const double delta = s.t.front();
  double head = pr.pole_coeff * std::pow(delta, pr.pole_power + 1) / (pr.pole_power + 1);
  double defect = 0.0, scale = 0.0, cum = 0.0;
  double prev_g = pr.weight(delta) * signed_pow(s.f.front(), pr.p - 1.0);
  for (size_t i = 0; i < s.t.size(); ++i) {
    if (i > 0) {
      const double g = pr.weight(s.t[i]) * signed_pow(s.f[i], pr.p - 1.0);
      cum += 0.5 * (g + prev_g) * (s.t[i] - s.t[i - 1]);
      prev_g = g;
    }
    defect = std::max(defect, std::abs(s.w[i] + lambda * (head + cum)));
    scale = std::max(scale, std::abs(s.w[i]));
  }
  return scale > 0.0 ? defect / scale : defect;
}

inline EigenResult package(const RadialProblem& pr, double lambda, double bracket,
                           const Shot& s) {
  EigenResult r;
  r.lambda = lambda;
  r.bracket_width = bracket;
  const size_t n = s.t.size();
  r.grid.reserve(n + 1);
  r.f.reserve(n + 1);
  r.fprime.reserve(n + 1);
  r.flux.reserve(n + 1);
  r.grid.push_back(0.0);
  r.f.push_back(1.0);
  r.fprime.push_back(0.0);
  r.flux.push_back(0.0);
  const double q = 1.0 / (pr.p - 1.0);
  for (size_t i = 0; i < n; ++i) {
    r.grid.push_back(s.t[i]);
    r.f.push_back(s.f[i]);
    r.flux.push_back(s.w[i]);
    r.fprime.push_back(signed_pow(s.w[i] / pr.weight(s.t[i]), q));
  }
  r.residual = flux_residual(pr, lambda, s);
  return r;
}

}  // namespace detail

/**
 * @brief First Dirichlet eigenvalue by shooting.
 *
 * Bisection on lambda: the solution started at the pole stays positive for
 * lambda below the eigenvalue and dips through zero above it.  The bracket
 * is grown by doubling from a one-dimensional string heuristic and collapsed
 * to a relative width of opts.tol; the returned eigenvalue is the bracket
 * midpoint.
 */
inline EigenResult solve_first_dirichlet(const RadialProblem& pr, SolveOptions opts = {}) {
  detail::check_p(pr.p, "solve_first_dirichlet");
  if (pr.bc != BoundaryCondition::dirichlet)
    throw std::invalid_argument("solve_first_dirichlet: problem is not Dirichlet at T");

  const auto too_high = [&](double lambda) {
    return detail::shoot(pr, lambda, pr.T, opts.grid_size).min_f <= 0.0;
  };

  const double guess = (pr.p - 1.0) * std::pow(pi_p(pr.p) / (2.0 * pr.T), pr.p);
  double lo = 0.0, hi = guess;
  int doublings = 0;
  while (!too_high(hi)) {
    lo = hi;
    hi *= 2.0;
    if (++doublings > 60) {
      std::ostringstream msg;
      msg << "solve_first_dirichlet: no sign change up to lambda = " << hi << " for problem '"
          << pr.name << "'";
      throw SolverError(msg.str());
    }
  }
  while (hi - lo > 0.5 * opts.tol * (hi + lo)) {
    const double mid = 0.5 * (lo + hi);
    (too_high(mid) ? hi : lo) = mid;
  }

  const double lambda = 0.5 * (lo + hi);
  const detail::Shot shot = detail::shoot(pr, lambda, pr.T, opts.grid_size);
  EigenResult r = detail::package(pr, lambda, hi - lo, shot);
  // Interior sign changes exclude the terminal cell, where the boundary zero
  // itself may be straddled by the bracket midpoint.
  r.zero_count = 0;
  for (size_t i = 0; i + 2 < shot.f.size(); ++i)
    if ((shot.f[i] > 0.0 && shot.f[i + 1] <= 0.0) ||
        (shot.f[i] < 0.0 && shot.f[i + 1] >= 0.0))
      ++r.zero_count;
  if (std::abs(shot.f_end) >= 1e-6) {
    std::ostringstream msg;
    msg << "solve_first_dirichlet: terminal value " << shot.f_end
        << " did not collapse with the bracket (problem '" << pr.name << "', lambda ~ "
        << lambda << ")";
    throw SolverError(msg.str());
  }
  return r;
}

/// First Dirichlet eigenvalue of the geodesic ball of radius r in the model.
inline EigenResult solve_first_dirichlet_model(const ModelSpace& m, double r, double p,
                                               SolveOptions opts = {}) {
  return solve_first_dirichlet(model_ball_problem(m, r, p), opts);
}

/**
 * @brief First nontrivial Neumann eigenvalue of a closed profile, within the
 *        radial class, by shooting between the poles.
 *
 * The criterion distinguishing the two sides of the eigenvalue is the
 * terminal flux: below it the branch dives (w < 0 at the far pole), above it
 * the solution turns back up (w > 0, or a second interior zero appears).
 * The eigenfunction has exactly one interior zero; its radius is refined by
 * re-integration and, when opts.validate_nodal is set, the Dirichlet
 * eigenvalues of the two nodal balls are checked against lambda.
 */
inline EigenResult solve_first_neumann_radial(const WarpedProfile& prof, double p,
                                              SolveOptions opts = {}) {
  detail::check_p(p, "solve_first_neumann_radial");
  if (!prof.closed)
    throw std::domain_error("solve_first_neumann_radial: needs a closed profile");

  RadialProblem pr = ball_problem(prof, prof.domain_end, p);
  pr.bc = BoundaryCondition::neumann;
  pr.name = prof.name + ":closed";
  const double D = prof.domain_end;
  const double t_end = D * (1.0 - 1e-6);

  const auto too_high = [&](const detail::Shot& s) {
    return s.sign_changes >= 2 || s.w_end > 0.0;
  };

  double hi = (p - 1.0) * std::pow(pi_p(p) / D, p);
  double lo = 0.0;
  int doublings = 0;
  while (!too_high(detail::shoot(pr, hi, t_end, opts.grid_size))) {
    lo = hi;
    hi *= 2.0;
    if (++doublings > 60)
      throw SolverError("solve_first_neumann_radial: bracket growth failed for profile '" +
                        prof.name + "'");
  }
  while (hi - lo > 0.5 * opts.tol * (hi + lo)) {
    const double mid = 0.5 * (lo + hi);
    (too_high(detail::shoot(pr, mid, t_end, opts.grid_size)) ? hi : lo) = mid;
  }

  const double lambda = 0.5 * (lo + hi);
  const detail::Shot shot = detail::shoot(pr, lambda, t_end, opts.grid_size);
  EigenResult r = detail::package(pr, lambda, hi - lo, shot);
  r.terminal_flux = shot.w_end;
  // Count nodal crossings by flux size.  At a genuine crossing w is extremal
  // (w' = -lambda A |f|^{p-2} f vanishes exactly there); when the bracket
  // midpoint lands marginally above the eigenvalue the leftover terminal
  // flux makes f diverge through zero inside the far-pole cells, where
  // |w| stays at the w_end scale.  The factor-10 floor separates the two
  // regimes by many orders of magnitude at any reasonable tolerance.
  r.zero_count = 0;
  const double flux_floor = 10.0 * std::abs(shot.w_end);
  for (size_t i = 0; i + 1 < shot.f.size(); ++i)
    if (((shot.f[i] > 0.0 && shot.f[i + 1] <= 0.0) ||
         (shot.f[i] < 0.0 && shot.f[i + 1] >= 0.0)) &&
        std::abs(shot.w[i]) > flux_floor)
      ++r.zero_count;
  if (r.zero_count != 1) {
    std::ostringstream msg;
    msg << "solve_first_neumann_radial: converged eigenfunction has " << r.zero_count
        << " interior zeros (profile '" << prof.name << "', lambda ~ " << lambda << ")";
    throw SolverError(msg.str());
  }

  // Refine the nodal radius by bisection with short re-integrations from the
  // last sample before the crossing.
  {
    const int k = shot.first_change;
    const double q = 1.0 / (p - 1.0), pm1 = p - 1.0;
    const auto rhs = [&](double t, const State2& y, State2& dy) {
      const double A = pr.weight(t);
      dy[0] = signed_pow(y[1] / A, q);
      dy[1] = -lambda * A * signed_pow(y[0], pm1);
    };
    const State2 y_at_k{shot.f[k], shot.w[k]};
    const auto f_at = [&](double t) {
      if (t <= shot.t[k]) return shot.f[k];
      double f_val = shot.f[k];
      integrate_observed(rhs, y_at_k, {shot.t[k], t}, OdeOptions{},
                         [&](size_t, double, const State2& s2) { f_val = s2[0]; });
      return f_val;
    };
    r.nodal_radius = bisect(f_at, shot.t[k], shot.t[k + 1], 1e-13 * D);
  }

  if (opts.validate_nodal) {
    SolveOptions sub = opts;
    sub.validate_nodal = false;
    const double lam_plus = solve_first_dirichlet(ball_problem(prof, r.nodal_radius, p), sub)
                                .lambda;
    const double lam_minus =
        solve_first_dirichlet(reversed_ball_problem(prof, r.nodal_radius, p), sub).lambda;
    const double tol = opts.nodal_tol_factor * opts.tol;
    if (std::abs(lam_plus - lambda) > tol * lambda ||
        std::abs(lam_minus - lambda) > tol * lambda) {
      std::ostringstream msg;
      msg << "solve_first_neumann_radial: nodal-domain identity failed for profile '"
          << prof.name << "': lambda = " << lambda << ", ball eigenvalues " << lam_plus
          << " / " << lam_minus;
      throw SolverError(msg.str());
    }
  }
  return r;
}

/**
 * @brief Discrete p-Rayleigh quotient of samples f on the uniform grid
 *        t_i = i T / (N-1): midpoint-weight gradient sum over trapezoid mass.
 */
inline double p_rayleigh_quotient(const RadialProblem& pr, const std::vector<double>& f) {
  const size_t N = f.size();
  if (N < 3) throw std::invalid_argument("p_rayleigh_quotient: need at least 3 samples");
  const double h = pr.T / (N - 1);
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i + 1 < N; ++i)
    num += pr.weight((i + 0.5) * h) * std::pow(std::abs(f[i + 1] - f[i]) / h, pr.p) * h;
  for (size_t i = 0; i < N; ++i) {
    const double w = (i == 0 || i + 1 == N) ? 0.5 : 1.0;
    den += w * pr.weight(i * h) * std::pow(std::abs(f[i]), pr.p) * h;
  }
  if (!(den > 0.0)) throw std::invalid_argument("p_rayleigh_quotient: zero mass");
  return num / den;
}

struct MinimizeOptions {
  int max_iterations = 200000;  ///< across all continuation levels
  double rel_tol = 1e-10;       ///< stop when the accepted step moves R less
  bool left_dirichlet = false;  ///< clamp f(0) = 0 too (string problems)
};

struct RayleighResult {
  double lambda = 0.0;
  std::vector<double> f;  ///< minimizer samples on the uniform grid
  int iterations = 0;
};

/**
 * @brief Independent eigenvalue estimate: projected gradient descent with
 *        backtracking on the discrete p-Rayleigh quotient.
 *
 * Coarse-to-fine continuation (doubling from 16 cells) keeps plain gradient
 * descent effective; each level stops once an accepted step changes the
 * quotient by less than rel_tol.  Neumann problems are recentered after
 * every step so the p-mean constraint sum A |f|^{p-2} f = 0 holds.
 */
inline RayleighResult rayleigh_minimize_grid(const RadialProblem& pr, int grid_size = 1024,
                                             MinimizeOptions opts = {}) {
  detail::check_p(pr.p, "rayleigh_minimize_grid");
  if (grid_size < 8) throw std::invalid_argument("rayleigh_minimize_grid: grid too small");
  const bool neumann = pr.bc == BoundaryCondition::neumann;
  const double p = pr.p;

  std::vector<int> levels;
  for (int g = 16; g <= grid_size; g *= 2) levels.push_back(g);
  if (levels.empty() || levels.back() != grid_size) levels.push_back(grid_size);

  std::vector<double> f;
  int total_iter = 0;

  for (size_t li = 0; li < levels.size(); ++li) {
    const int N = levels[li];  // cells; N+1 nodes
    const double h = pr.T / N;
    std::vector<double> t(N + 1), A(N + 1), Am(N), wt(N + 1);
    for (int i = 0; i <= N; ++i) {
      t[i] = i * h;
      A[i] = pr.weight(t[i]);
      wt[i] = (i == 0 || i == N) ? 0.5 : 1.0;
    }
    for (int i = 0; i < N; ++i) Am[i] = pr.weight((i + 0.5) * h);

    if (li == 0) {
      f.assign(N + 1, 0.0);
      for (int i = 0; i <= N; ++i) {
        if (neumann)
          f[i] = std::cos(pi * t[i] / pr.T);
        else if (opts.left_dirichlet)
          f[i] = std::sin(pi * t[i] / pr.T);
        else
          f[i] = std::cos(0.5 * pi * t[i] / pr.T);
      }
    } else {
      // Linear interpolation from the previous level (half the resolution).
      std::vector<double> fine(N + 1);
      for (int i = 0; i <= N; ++i) {
        const double x = static_cast<double>(i) * (f.size() - 1) / N;
        const int j = std::min(static_cast<int>(x), static_cast<int>(f.size()) - 2);
        const double u = x - j;
        fine[i] = (1.0 - u) * f[j] + u * f[j + 1];
      }
      f = std::move(fine);
    }

    const auto project = [&](std::vector<double>& v) {
      if (!neumann) v[N] = 0.0;
      if (opts.left_dirichlet) v[0] = 0.0;
      if (neumann) {
        // Recenter: find c with sum wt A |v - c|^{p-2} (v - c) = 0.
        const auto moment = [&](double c) {
          double s = 0.0;
          for (int i = 0; i <= N; ++i) s += wt[i] * A[i] * signed_pow(v[i] - c, p - 1.0);
          return -s;  // decreasing in c, negated for the sign-change solver
        };
        const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
        const double c = bisect(moment, *mn - 1e-12, *mx + 1e-12, 1e-14);
        for (auto& x : v) x -= c;
      }
      double sup = 0.0;
      for (double x : v) sup = std::max(sup, std::abs(x));
      if (sup > 0.0)
        for (auto& x : v) x /= sup;
    };

    const auto quotient = [&](const std::vector<double>& v, double& num, double& den) {
      num = den = 0.0;
      for (int i = 0; i < N; ++i)
        num += Am[i] * std::pow(std::abs(v[i + 1] - v[i]) / h, p) * h;
      for (int i = 0; i <= N; ++i)
        den += wt[i] * A[i] * std::pow(std::abs(v[i]), p) * h;
      if (!(den > 0.0)) throw SolverError("rayleigh_minimize_grid: mass collapsed");
    };

    project(f);
    double num, den;
    quotient(f, num, den);
    double R = num / den;

    std::vector<double> grad(N + 1), trial(N + 1);
    double step = 0.1;
    while (total_iter < opts.max_iterations) {
      ++total_iter;
      // grad R = (p/den) [ dNum - R dDen ] nodewise.
      for (int i = 0; i <= N; ++i) {
        double g = 0.0;
        if (i > 0) g += Am[i - 1] * signed_pow((f[i] - f[i - 1]) / h, p - 1.0);
        if (i < N) g -= Am[i] * signed_pow((f[i + 1] - f[i]) / h, p - 1.0);
        g -= R * wt[i] * A[i] * signed_pow(f[i], p - 1.0) * h;
        grad[i] = p / den * g;
      }
      if (!neumann) grad[N] = 0.0;
      if (opts.left_dirichlet) grad[0] = 0.0;

      bool accepted = false;
      double R_new = R;
      for (int bt = 0; bt < 60; ++bt) {
        for (int i = 0; i <= N; ++i) trial[i] = f[i] - step * grad[i];
        project(trial);
        double num2, den2;
        quotient(trial, num2, den2);
        if (num2 / den2 < R) {
          R_new = num2 / den2;
          f = trial;
          num = num2;
          den = den2;
          accepted = true;
          step *= 1.3;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) break;  // flat to double precision along -grad
      const double change = (R - R_new) / R_new;
      R = R_new;
      if (change < opts.rel_tol) break;
    }
    if (total_iter >= opts.max_iterations) {
      std::ostringstream msg;
      msg << "rayleigh_minimize_grid: iteration budget exhausted at quotient " << R
          << " (problem '" << pr.name << "')";
      throw SolverError(msg.str());
    }
    if (li + 1 == levels.size()) {
      RayleighResult out;
      out.lambda = R;
      out.f = f;
      out.iterations = total_iter;
      return out;
    }
  }
  throw SolverError("rayleigh_minimize_grid: no levels");  // unreachable
}

}  // namespace plap
