#pragma once

/**
 * @file verify.hpp
 * @brief Named verification suites over a single profile configuration, plus
 *        one-axis parameter sweeps.  This is the layer the CLI drives: each
 *        suite expands a configuration into a deterministic list of check
 *        rows, executes them on a worker pool, and returns them in task
 *        order, so report files are byte-stable for a fixed configuration
 *        regardless of the job count.
 */

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "comparison.hpp"
#include "curvature.hpp"
#include "eigensolver.hpp"
#include "model_geometry.hpp"
#include "rearrangement.hpp"
#include "report.hpp"
#include "warped_profile.hpp"

namespace plap {

/// One resolved run configuration shared by the suites and sweeps.  The
/// profile is kept as its spec string so sweeps can rebuild it along a
/// profile-family axis.
struct VerifyConfig {
  std::string profile_spec = "sphere";
  int n = 2;
  double open_end = 1.0;  ///< domain length for open profiles (flat, hyperbolic)
  double K = 1.0;
  bool auto_K = false;  ///< replace K by the profile's minimal sectional floor
  double p = 2.0;
  double q = 2.0;
  double radius = whole_manifold;  ///< NaN = suite-specific default
  double alpha = 1.0;
  double sobolev_constant = 1.0;  ///< caller-supplied C_s; not derived anywhere
  bool neumann = false;           ///< warped-eigen: solve the Neumann problem
  SolveOptions solver;
  int jobs = 0;  ///< worker threads; 0 = hardware concurrency
};

inline WarpedProfile resolve_profile(const VerifyConfig& cfg) {
  return profile_from_spec(cfg.profile_spec, cfg.n, cfg.K, cfg.open_end);
}

inline double resolve_K(const WarpedProfile& prof, const VerifyConfig& cfg) {
  return cfg.auto_K ? auto_min_curvature(prof) : cfg.K;
}

/// Canonical one-line echo of everything that determines the output rows.
/// The job count is deliberately excluded: it changes scheduling only, and
/// reports must hash identically across it.
inline std::string config_echo(const std::string& command, const VerifyConfig& cfg) {
  std::ostringstream os;
  os << "command=" << command << " profile=" << cfg.profile_spec << " n=" << cfg.n
     << " open_end=" << format_quantity(cfg.open_end)
     << " K=" << (cfg.auto_K ? std::string("auto-min") : format_quantity(cfg.K))
     << " p=" << format_quantity(cfg.p) << " q=" << format_quantity(cfg.q)
     << " radius=" << format_quantity(cfg.radius) << " alpha=" << format_quantity(cfg.alpha)
     << " C_s=" << format_quantity(cfg.sobolev_constant)
     << " bc=" << (cfg.neumann ? "neumann" : "dirichlet")
     << " tol=" << format_quantity(cfg.solver.tol) << " grid=" << cfg.solver.grid_size;
  return os.str();
}

namespace detail {

/// Runs the tasks on `jobs` threads (0 = hardware concurrency); results land
/// at their task index, so the output order never depends on scheduling.
inline std::vector<BoundReport> run_indexed(const std::vector<std::function<BoundReport()>>& tasks,
                                            int jobs) {
  std::vector<BoundReport> rows(tasks.size());
  if (tasks.empty()) return rows;
  unsigned workers = jobs > 0 ? static_cast<unsigned>(jobs)
                              : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, tasks.size());
  if (workers <= 1) {
    for (size_t i = 0; i < tasks.size(); ++i) rows[i] = tasks[i]();
    return rows;
  }
  std::atomic<size_t> next{0};
  const auto worker = [&] {
    for (size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1))
      rows[i] = tasks[i]();
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return rows;
}

/// Wraps a row computation so a runtime failure (solver breakdown, stray
/// precondition) is recorded in-row instead of tearing the suite down.
inline std::function<BoundReport()> guarded(std::string check,
                                            std::vector<std::pair<std::string, double>> inputs,
                                            std::function<BoundReport()> body) {
  return [check = std::move(check), inputs = std::move(inputs), body = std::move(body)]() {
    try {
      return body();
    } catch (const std::exception& e) {
      BoundReport row;
      row.check = check;
      row.inputs = inputs;
      row.verdict = Verdict::violated;
      row.note = std::string("error: ") + e.what();
      return row;
    }
  };
}

inline double radius_or(const VerifyConfig& cfg, double fallback) {
  return std::isnan(cfg.radius) ? fallback : cfg.radius;
}

/// Admissible radial test functions for the pointwise suites: strictly
/// decreasing away from the pole on the stated interval.
inline std::vector<RadialTestFunction> decreasing_test_functions() {
  return {cosine_test(), concave_parabola_test(), gaussian_test()};
}

inline double test_function_cap(const RadialTestFunction& f, double domain_cap) {
  // cos t turns increasing past pi; the others decrease on all of t > 0.
  if (f.name == "cos(t)") return std::min(domain_cap, plap::pi);
  return domain_cap;
}

}  // namespace detail

/// Pointwise gradient-Bochner identity residuals over the built-in test
/// functions.  At p = 2 the identity is evaluated symbolically and the budget
/// is pure roundoff; away from p = 2 the outer Laplacian uses Richardson
/// differences and the budget is the truncation of the default step.
inline std::vector<BoundReport> verify_bochner(const VerifyConfig& cfg) {
  const WarpedProfile prof = resolve_profile(cfg);
  const double p = cfg.p;
  const double fd_step = 1e-3;
  const double budget = p == 2.0 ? 1e-8 : 5e-4;
  std::vector<std::function<BoundReport()>> tasks;
  for (const auto& f : detail::decreasing_test_functions()) {
    const double cap = detail::test_function_cap(f, prof.domain_end) * 0.95;
    for (double frac : {0.2, 0.4, 0.6, 0.8}) {
      const double t = frac * cap;
      std::vector<std::pair<std::string, double>> inputs{
          {"n", double(prof.n)}, {"p", p}, {"t", t}};
      tasks.push_back(detail::guarded("p-bochner", inputs, [&prof, p, f, t, fd_step, budget] {
        BoundReport row;
        row.check = "p-bochner";
        row.input("n", prof.n);
        row.input("p", p);
        row.input("t", t);
        row.lhs = std::abs(p_bochner_residual(prof, p, f, t, fd_step));
        row.rhs = budget;
        row.slack = row.rhs - row.lhs;
        row.tol_band = tolerance_band();
        row.verdict = judge(row.slack, row.tol_band);
        if (p != 2.0) row.extra("fd_step", fd_step);
        row.note = "f = " + f.name;
        return row;
      }));
    }
  }
  return detail::run_indexed(tasks, cfg.jobs);
}

/// Pointwise p-Laplacian comparison rows on a (test function, radius) grid.
inline std::vector<BoundReport> verify_p_comparison(const VerifyConfig& cfg) {
  const WarpedProfile prof = resolve_profile(cfg);
  const double K = resolve_K(prof, cfg);
  const double domain_cap = std::min(prof.domain_end, detail::model_cap(K));
  std::vector<std::function<BoundReport()>> tasks;
  for (const auto& f : detail::decreasing_test_functions()) {
    const double cap = detail::test_function_cap(f, domain_cap) * 0.95;
    for (double frac : {0.15, 0.35, 0.55, 0.75}) {
      const double t = frac * cap;
      std::vector<std::pair<std::string, double>> inputs{
          {"n", double(prof.n)}, {"K", K}, {"p", cfg.p}, {"t", t}};
      tasks.push_back(
          detail::guarded("p-laplace-comparison", inputs, [&prof, K, p = cfg.p, f, t, name = f.name] {
            BoundReport row = p_laplace_comparison_check(prof, K, p, f, t);
            row.note = "f = " + name;
            return row;
          }));
    }
  }
  return detail::run_indexed(tasks, cfg.jobs);
}

/// Volume doubling rows at nested radius pairs (r, r/2).
inline std::vector<BoundReport> verify_doubling(const VerifyConfig& cfg) {
  const WarpedProfile prof = resolve_profile(cfg);
  const double K = resolve_K(prof, cfg);
  const double r_max =
      detail::radius_or(cfg, std::min(prof.domain_end, detail::model_cap(K)) * 0.9);
  std::vector<std::function<BoundReport()>> tasks;
  for (double frac : {0.3, 0.5, 0.7, 1.0}) {
    const double r = frac * r_max;
    std::vector<std::pair<std::string, double>> inputs{
        {"n", double(prof.n)}, {"K", K}, {"q", cfg.q}, {"r", r}, {"r0", 0.5 * r}};
    tasks.push_back(detail::guarded("volume-doubling", inputs, [&prof, K, q = cfg.q, r] {
      return volume_doubling_check(prof, K, q, r, 0.5 * r);
    }));
  }
  return detail::run_indexed(tasks, cfg.jobs);
}

/// Norm-level Laplacian comparison diagnostics at a ladder of radii.
inline std::vector<BoundReport> verify_laplace_norm(const VerifyConfig& cfg) {
  const WarpedProfile prof = resolve_profile(cfg);
  const double K = resolve_K(prof, cfg);
  const double r_max =
      detail::radius_or(cfg, std::min(prof.domain_end, detail::model_cap(K)));
  std::vector<std::function<BoundReport()>> tasks;
  for (double frac : {0.25, 0.5, 0.75, 1.0}) {
    const double r = frac * r_max;
    std::vector<std::pair<std::string, double>> inputs{
        {"n", double(prof.n)}, {"K", K}, {"q", cfg.q}, {"r", r}};
    tasks.push_back(detail::guarded("laplace-comparison-norm", inputs, [&prof, K, q = cfg.q, r] {
      return laplace_comparison_norm_check(prof, K, q, r);
    }));
  }
  return detail::run_indexed(tasks, cfg.jobs);
}

/// Dirichlet eigenvalue gap rows with the full error chain, at a radius
/// ladder (or the single configured radius).
inline std::vector<BoundReport> verify_cheng(const VerifyConfig& cfg) {
  const WarpedProfile prof = resolve_profile(cfg);
  const double K = resolve_K(prof, cfg);
  const double cap = std::min(prof.domain_end, detail::model_cap(K)) * 0.999;
  std::vector<double> radii;
  if (std::isnan(cfg.radius))
    for (double frac : {0.35, 0.55, 0.75}) radii.push_back(frac * cap);
  else
    radii.push_back(cfg.radius);
  std::vector<std::function<BoundReport()>> tasks;
  for (double r : radii) {
    std::vector<std::pair<std::string, double>> inputs{
        {"n", double(prof.n)}, {"K", K}, {"p", cfg.p}, {"q", cfg.q}, {"r", r}};
    tasks.push_back(
        detail::guarded("cheng-gap", inputs, [&prof, K, p = cfg.p, q = cfg.q, r, opts = cfg.solver] {
          return cheng_gap_check(prof, K, p, q, r, opts);
        }));
  }
  return detail::run_indexed(tasks, cfg.jobs);
}

/// Neumann lower-bound row at the measured curvature norm, with the discard
/// threshold of the caller-supplied Sobolev constant attached.
inline std::vector<BoundReport> verify_lichnerowicz(const VerifyConfig& cfg) {
  const WarpedProfile prof = resolve_profile(cfg);
  const double K = resolve_K(prof, cfg);
  std::vector<std::function<BoundReport()>> tasks;
  std::vector<std::pair<std::string, double>> inputs{
      {"n", double(prof.n)}, {"K", K}, {"p", cfg.p}, {"q", cfg.q}};
  tasks.push_back(detail::guarded(
      "lichnerowicz", inputs,
      [&prof, K, p = cfg.p, q = cfg.q, cs = cfg.sobolev_constant, opts = cfg.solver] {
        BoundReport row = lichnerowicz_empirical_check(prof, K, p, q, opts);
        row.input("C_s", cs);
        row.extra("discard_threshold", sobolev_threshold(p, cs));
        return row;
      }));
  return detail::run_indexed(tasks, cfg.jobs);
}

/// Faber-Krahn row (pole ball vs volume-matched model ball) with the
/// symmetrization replay.
inline std::vector<BoundReport> verify_faber_krahn(const VerifyConfig& cfg) {
  const WarpedProfile prof = resolve_profile(cfg);
  const double K = resolve_K(prof, cfg);
  const double r = detail::radius_or(cfg, 0.5 * prof.domain_end);
  std::vector<std::function<BoundReport()>> tasks;
  std::vector<std::pair<std::string, double>> inputs{{"n", double(prof.n)}, {"K", K},
                                                     {"p", cfg.p},          {"q", cfg.q},
                                                     {"r", r},              {"alpha", cfg.alpha}};
  tasks.push_back(detail::guarded(
      "faber-krahn", inputs,
      [&prof, K, p = cfg.p, q = cfg.q, r, alpha = cfg.alpha, opts = cfg.solver] {
        return faber_krahn_check(prof, K, p, q, r, alpha, opts);
      }));
  return detail::run_indexed(tasks, cfg.jobs);
}

/// Neumann sharp comparison row with the nodal-domain identity replay.
inline std::vector<BoundReport> verify_obata(const VerifyConfig& cfg) {
  const WarpedProfile prof = resolve_profile(cfg);
  const double K = resolve_K(prof, cfg);
  std::vector<std::function<BoundReport()>> tasks;
  std::vector<std::pair<std::string, double>> inputs{
      {"n", double(prof.n)}, {"K", K}, {"p", cfg.p}, {"alpha", cfg.alpha}};
  tasks.push_back(detail::guarded(
      "obata", inputs, [&prof, K, p = cfg.p, q = cfg.q, alpha = cfg.alpha, opts = cfg.solver] {
        return obata_check(prof, K, p, q, alpha, opts);
      }));
  return detail::run_indexed(tasks, cfg.jobs);
}

/// Isoperimetric sharp-constant rows at a radius ladder (or the single
/// configured radius).
inline std::vector<BoundReport> verify_isoperimetric(const VerifyConfig& cfg) {
  const WarpedProfile prof = resolve_profile(cfg);
  const double K = resolve_K(prof, cfg);
  std::vector<double> radii;
  if (std::isnan(cfg.radius))
    for (double frac : {0.25, 0.5, 0.75}) radii.push_back(frac * prof.domain_end);
  else
    radii.push_back(cfg.radius);
  std::vector<std::function<BoundReport()>> tasks;
  for (double r : radii) {
    std::vector<std::pair<std::string, double>> inputs{
        {"n", double(prof.n)}, {"K", K}, {"q", cfg.q}, {"r", r}, {"alpha", cfg.alpha}};
    tasks.push_back(
        detail::guarded("isoperimetric", inputs, [&prof, K, q = cfg.q, r, alpha = cfg.alpha] {
          return isoperimetric_check(prof, K, q, r, alpha);
        }));
  }
  return detail::run_indexed(tasks, cfg.jobs);
}

/// Level-set bookkeeping rows for the Dirichlet ground state of a pole ball:
/// one row per quantile level plus a summary row for the co-area derivative
/// identity.
inline std::vector<BoundReport> verify_coarea(const VerifyConfig& cfg) {
  const WarpedProfile prof = resolve_profile(cfg);
  const double r = detail::radius_or(cfg, 0.5 * prof.domain_end);
  const double p = cfg.p;
  const EigenResult sol = solve_first_dirichlet(ball_problem(prof, r, p), cfg.solver);
  const auto thresholds = value_quantile_thresholds(sol.f, 16);
  const LevelSetProfile audit = coarea_audit(prof, sol.grid, sol.f, thresholds, p);

  std::vector<BoundReport> rows;
  rows.reserve(audit.rows.size() + 1);
  for (const auto& level : audit.rows) {
    BoundReport row;
    row.check = "coarea-level";
    row.input("n", prof.n);
    row.input("p", p);
    row.input("r", r);
    row.input("threshold", level.threshold);
    row.lhs = level.area;
    row.rhs = std::pow(level.coarea, (p - 1.0) / p) * std::pow(level.flux_power, 1.0 / p);
    row.slack = row.rhs - row.lhs;
    row.tol_band = tolerance_band();
    row.extra("volume", level.volume);
    row.extra("coarea", level.coarea);
    row.extra("flux_power", level.flux_power);
    if (level.critical) {
      row.verdict = Verdict::inconclusive;
      row.note = "critical level; boundary integrals untrusted";
    } else {
      row.verdict = judge(row.slack, row.tol_band);
    }
    rows.push_back(row);
  }

  // Co-area derivative identity, midpoint-discretized between adjacent
  // levels: d/dc vol({f > c}) = -int 1/|grad f|.  First order in the level
  // spacing, so the budget scales with it.
  double worst = 0.0;
  double scale = 0.0;
  int used = 0;
  for (size_t j = 0; j + 1 < audit.rows.size(); ++j) {
    const auto& hi = audit.rows[j];
    const auto& lo = audit.rows[j + 1];
    if (hi.critical || lo.critical) continue;
    const double fd = (hi.volume - lo.volume) / (hi.threshold - lo.threshold);
    const double mid = -0.5 * (hi.coarea + lo.coarea);
    worst = std::max(worst, std::abs(fd - mid));
    scale = std::max(scale, std::abs(mid));
    ++used;
  }
  BoundReport deriv;
  deriv.check = "coarea-derivative";
  deriv.input("n", prof.n);
  deriv.input("p", p);
  deriv.input("r", r);
  deriv.input("levels", double(thresholds.size()));
  deriv.lhs = worst;
  deriv.rhs = 0.5 * scale;
  deriv.slack = deriv.rhs - deriv.lhs;
  deriv.tol_band = tolerance_band();
  deriv.extra("pairs_used", double(used));
  deriv.verdict = used > 0 ? judge(deriv.slack, deriv.tol_band) : Verdict::inconclusive;
  deriv.note = "worst |dV/dc + coarea| across adjacent levels";
  rows.push_back(deriv);
  return rows;
}

inline const std::vector<std::string>& verify_suite_names() {
  static const std::vector<std::string> names{
      "bochner",       "p-comparison", "doubling",    "laplace-norm",  "cheng",
      "lichnerowicz",  "faber-krahn",  "obata",       "isoperimetric", "coarea"};
  return names;
}

/// Runs one named suite (or "all") and stamps each row with its suite name.
inline std::vector<BoundReport> run_verify_suite(const std::string& suite,
                                                 const VerifyConfig& cfg) {
  const auto dispatch = [&cfg](const std::string& name) -> std::vector<BoundReport> {
    if (name == "bochner") return verify_bochner(cfg);
    if (name == "p-comparison") return verify_p_comparison(cfg);
    if (name == "doubling") return verify_doubling(cfg);
    if (name == "laplace-norm") return verify_laplace_norm(cfg);
    if (name == "cheng") return verify_cheng(cfg);
    if (name == "lichnerowicz") return verify_lichnerowicz(cfg);
    if (name == "faber-krahn") return verify_faber_krahn(cfg);
    if (name == "obata") return verify_obata(cfg);
    if (name == "isoperimetric") return verify_isoperimetric(cfg);
    if (name == "coarea") return verify_coarea(cfg);
    throw std::invalid_argument("run_verify_suite: unknown suite '" + name + "'");
  };
  std::vector<BoundReport> rows;
  if (suite == "all") {
    for (const auto& name : verify_suite_names()) {
      auto part = dispatch(name);
      for (auto& row : part) row.suite = name;
      rows.insert(rows.end(), std::make_move_iterator(part.begin()),
                  std::make_move_iterator(part.end()));
    }
    return rows;
  }
  rows = dispatch(suite);
  for (auto& row : rows) row.suite = suite;
  return rows;
}

/// Single-solve measurement row for the model ball problem.
inline BoundReport measure_model_eigen(const VerifyConfig& cfg) {
  const ModelSpace m = make_model(cfg.n, cfg.K);
  const double r = detail::radius_or(cfg, 1.0);
  const EigenResult sol = solve_first_dirichlet_model(m, r, cfg.p, cfg.solver);
  BoundReport row;
  row.suite = "measure";
  row.check = "model-eigen";
  row.input("n", cfg.n);
  row.input("K", cfg.K);
  row.input("r", r);
  row.input("p", cfg.p);
  row.lhs = sol.lambda;
  row.verdict = Verdict::inconclusive;
  row.extra("residual", sol.residual);
  row.extra("bracket_width", sol.bracket_width);
  row.note = "measurement";
  return row;
}

/// Single-solve measurement row on a warped profile: Dirichlet pole ball by
/// default, or the closed-manifold Neumann problem.
inline BoundReport measure_warped_eigen(const VerifyConfig& cfg) {
  const WarpedProfile prof = resolve_profile(cfg);
  BoundReport row;
  row.suite = "measure";
  row.check = cfg.neumann ? "warped-eigen-neumann" : "warped-eigen";
  row.input("n", prof.n);
  row.input("p", cfg.p);
  EigenResult sol;
  if (cfg.neumann) {
    sol = solve_first_neumann_radial(prof, cfg.p, cfg.solver);
    row.extra("nodal_radius", sol.nodal_radius);
  } else {
    const double r =
        detail::radius_or(cfg, prof.closed ? 0.5 * prof.domain_end : prof.domain_end);
    row.input("r", r);
    sol = solve_first_dirichlet(ball_problem(prof, r, cfg.p), cfg.solver);
  }
  row.lhs = sol.lambda;
  row.verdict = Verdict::inconclusive;
  row.extra("residual", sol.residual);
  row.extra("bracket_width", sol.bracket_width);
  row.note = "measurement";
  return row;
}

/// Curvature summary row: deficit norm at the configured exponent, plus the
/// profile's curvature floor.
inline BoundReport measure_curvature(const VerifyConfig& cfg) {
  const WarpedProfile prof = resolve_profile(cfg);
  const double K = resolve_K(prof, cfg);
  const CurvatureReport rep = curvature_report(prof, K, {cfg.q}, cfg.radius);
  BoundReport row;
  row.suite = "measure";
  row.check = "curvature";
  row.input("n", prof.n);
  row.input("K", K);
  row.input("q", cfg.q);
  if (!std::isnan(cfg.radius)) row.input("r", cfg.radius);
  row.lhs = rep.norms.at(cfg.q);
  row.measured_norm = rep.norms.at(cfg.q);
  row.verdict = Verdict::inconclusive;
  row.extra("rho_min", rep.rho_min);
  row.extra("curvature_floor", rep.rho_min / (prof.n - 1));
  row.extra("refinement_delta", rep.norm_refinement_delta.at(cfg.q));
  row.note = "measurement";
  return row;
}

namespace detail {

inline VerifyConfig apply_axis(const VerifyConfig& base, const std::string& axis, double value) {
  VerifyConfig cfg = base;
  if (axis == "p") {
    cfg.p = value;
  } else if (axis == "q") {
    cfg.q = value;
  } else if (axis == "K") {
    cfg.K = value;
    cfg.auto_K = false;
  } else if (axis == "r" || axis == "radius") {
    cfg.radius = value;
  } else if (axis == "alpha") {
    cfg.alpha = value;
  } else if (axis == "a") {
    const std::string prefix = "perturbed-sphere:";
    if (base.profile_spec.rfind(prefix, 0) != 0)
      throw std::invalid_argument("sweep axis 'a' needs a perturbed-sphere profile");
    const std::string args = base.profile_spec.substr(prefix.size());
    const auto comma = args.find(',');
    if (comma == std::string::npos)
      throw std::invalid_argument("sweep axis 'a': malformed perturbed-sphere spec");
    std::ostringstream spec;
    spec << prefix << format_quantity(value) << ',' << args.substr(comma + 1);
    cfg.profile_spec = spec.str();
  } else {
    throw std::invalid_argument("unknown sweep axis '" + axis + "'");
  }
  return cfg;
}

}  // namespace detail

/// One-axis sweep of a verify suite or a measurement command.  Each value's
/// rows carry the axis echoed as their first input; values run concurrently
/// and per-value failures are recorded in their rows.
inline std::vector<BoundReport> run_sweep(const std::string& target, const std::string& axis,
                                          const std::vector<double>& values,
                                          const VerifyConfig& base) {
  if (values.empty()) throw std::invalid_argument("run_sweep: no axis values");
  const bool is_suite = std::find(verify_suite_names().begin(), verify_suite_names().end(),
                                  target) != verify_suite_names().end();
  if (!is_suite && target != "model-eigen" && target != "warped-eigen" && target != "curvature")
    throw std::invalid_argument("run_sweep: unknown target '" + target + "'");

  (void)detail::apply_axis(base, axis, values.front());  // validates the axis up front

  std::vector<std::vector<BoundReport>> blocks(values.size());
  std::vector<std::function<BoundReport()>> tasks;
  // One task per value; inner suites run single-threaded so the pool is not
  // oversubscribed and row order stays by construction.
  std::atomic<size_t> next{0};
  const auto compute_block = [&](size_t i) {
    VerifyConfig cfg = detail::apply_axis(base, axis, values[i]);
    cfg.jobs = 1;
    try {
      if (target == "model-eigen")
        blocks[i] = {measure_model_eigen(cfg)};
      else if (target == "warped-eigen")
        blocks[i] = {measure_warped_eigen(cfg)};
      else if (target == "curvature")
        blocks[i] = {measure_curvature(cfg)};
      else
        blocks[i] = run_verify_suite(target, cfg);
    } catch (const std::exception& e) {
      BoundReport row;
      row.suite = target;
      row.check = "sweep-row";
      row.verdict = Verdict::violated;
      row.note = std::string("error: ") + e.what();
      blocks[i] = {row};
    }
    for (auto& row : blocks[i]) {
      if (row.suite.empty()) row.suite = target;
      bool has_axis = false;
      for (const auto& [k, v] : row.inputs) has_axis = has_axis || k == axis;
      if (!has_axis) row.inputs.insert(row.inputs.begin(), {axis, values[i]});
    }
  };
  unsigned workers = base.jobs > 0 ? static_cast<unsigned>(base.jobs)
                                   : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, values.size());
  if (workers <= 1) {
    for (size_t i = 0; i < values.size(); ++i) compute_block(i);
  } else {
    const auto worker = [&] {
      for (size_t i = next.fetch_add(1); i < values.size(); i = next.fetch_add(1))
        compute_block(i);
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::vector<BoundReport> rows;
  for (auto& block : blocks)
    rows.insert(rows.end(), std::make_move_iterator(block.begin()),
                std::make_move_iterator(block.end()));
  return rows;
}

}  // namespace plap
