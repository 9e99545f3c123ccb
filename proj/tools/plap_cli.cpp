/**
 * @file plap_cli.cpp
 * @brief Command-line runner: eigenvalue measurements, curvature reports,
 *        verification suites, and one-axis parameter sweeps.
 *
 * Exit status contract: 0 when every emitted row holds (or is inconclusive
 * by design), 1 when any row is violated or a solve breaks down at runtime,
 * 2 for configuration errors.  Configuration problems are collected and
 * reported in one consolidated listing, and no output file is created.
 */

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <plap/plap.hpp>

namespace {

constexpr const char* kVersion = "0.1.0";

struct Options {
  plap::VerifyConfig cfg;
  std::string K_spec = "1";
  std::string suite;       // verify
  std::string target;      // sweep
  std::string axis;        // sweep
  std::vector<double> values;  // sweep
  std::string out;         // explicit output path; empty = command default
};

double extra_of(const plap::BoundReport& row, const std::string& key) {
  for (const auto& [k, v] : row.extras)
    if (k == key) return v;
  return std::numeric_limits<double>::quiet_NaN();
}

/// --K accepts a number or the literal auto-min (profile curvature floor).
void parse_K(const std::string& spec, bool allow_auto, plap::VerifyConfig& cfg,
             std::vector<std::string>& errors) {
  if (spec == "auto-min") {
    if (allow_auto)
      cfg.auto_K = true;
    else
      errors.push_back("--K: auto-min is not meaningful for this command; pass a number");
    return;
  }
  char* end = nullptr;
  const double v = std::strtod(spec.c_str(), &end);
  if (end == spec.c_str() || *end != '\0' || !std::isfinite(v)) {
    errors.push_back("--K: expected a number or auto-min, got '" + spec + "'");
    return;
  }
  cfg.K = v;
  cfg.auto_K = false;
}

void validate_common(const Options& o, std::vector<std::string>& errors) {
  if (o.cfg.n < 2) errors.push_back("--n: dimension must be at least 2");
  if (!(o.cfg.p > 1.0) || !std::isfinite(o.cfg.p)) errors.push_back("--p: requires p > 1");
  if (!(o.cfg.q >= 0.0) || !std::isfinite(o.cfg.q))
    errors.push_back("--q: must be a nonnegative number");
  if (!(o.cfg.alpha > 0.0) || !std::isfinite(o.cfg.alpha))
    errors.push_back("--alpha: must be positive");
  if (!(o.cfg.sobolev_constant > 0.0) || !std::isfinite(o.cfg.sobolev_constant))
    errors.push_back("--C_s: must be positive");
  if (!(o.cfg.solver.tol > 0.0) || !std::isfinite(o.cfg.solver.tol))
    errors.push_back("--tol: must be positive");
  if (o.cfg.solver.grid_size < 64) errors.push_back("--grid: needs at least 64 samples");
  if (o.cfg.jobs < 0) errors.push_back("--jobs: must be nonnegative (0 = all cores)");
  if (!(o.cfg.open_end > 0.0) || !std::isfinite(o.cfg.open_end))
    errors.push_back("--length: must be positive");
  if (!std::isnan(o.cfg.radius) &&
      (!(o.cfg.radius > 0.0) || !std::isfinite(o.cfg.radius)))
    errors.push_back("--radius: must be positive and finite");
}

std::optional<plap::WarpedProfile> build_profile(const Options& o,
                                                 std::vector<std::string>& errors) {
  try {
    return plap::resolve_profile(o.cfg);
  } catch (const std::exception& e) {
    errors.push_back(std::string("--profile: ") + e.what());
    return std::nullopt;
  }
}

void validate_radius_range(const Options& o, const std::optional<plap::WarpedProfile>& prof,
                           std::vector<std::string>& errors) {
  if (std::isnan(o.cfg.radius) || !prof || !(o.cfg.radius > 0.0)) return;
  if (prof->closed ? !(o.cfg.radius < prof->domain_end)
                   : !(o.cfg.radius <= prof->domain_end)) {
    std::ostringstream msg;
    msg << "--radius: must lie inside the profile domain (0, "
        << plap::format_quantity(prof->domain_end) << (prof->closed ? ")" : "]");
    errors.push_back(msg.str());
  }
}

/// Parameter demands of each verify suite, used for up-front validation.
struct SuiteNeeds {
  bool norm_q = false;    ///< computes an integral curvature norm from q
  bool positive_K = false;
  bool p_at_least_2 = false;
  bool closed_profile = false;
};

SuiteNeeds needs_of(const std::string& suite) {
  if (suite == "doubling" || suite == "laplace-norm" || suite == "cheng")
    return {true, false, false, false};
  if (suite == "lichnerowicz") return {true, true, true, true};
  if (suite == "faber-krahn" || suite == "isoperimetric") return {true, true, false, true};
  if (suite == "obata") return {true, true, false, true};
  if (suite == "all") return {true, true, true, true};
  return {};  // bochner, p-comparison, coarea
}

void validate_suite(const Options& o, const std::string& suite,
                    const std::optional<plap::WarpedProfile>& prof,
                    std::vector<std::string>& errors) {
  const SuiteNeeds needs = needs_of(suite);
  if (needs.norm_q) {
    const bool norm_skipped = suite == "obata" && o.cfg.q == 0.0;
    if (!norm_skipped && !(o.cfg.q > 0.5 * o.cfg.n))
      errors.push_back("--q: integral curvature norms need q > n/2");
  }
  if (needs.p_at_least_2 && !(o.cfg.p >= 2.0))
    errors.push_back("--p: the lichnerowicz suite needs p >= 2");
  if (needs.closed_profile && prof && !prof->closed)
    errors.push_back("--profile: suite '" + suite + "' needs a closed profile");
  if (needs.positive_K && prof) {
    try {
      const double K = plap::resolve_K(*prof, o.cfg);
      if (!(K > 0.0))
        errors.push_back("--K: suite '" + suite + "' needs K > 0 (resolved K = " +
                         plap::format_quantity(K) + ")");
    } catch (const std::exception& e) {
      errors.push_back(std::string("--K: auto-min failed: ") + e.what());
    }
  }
}

int fail_config(const std::vector<std::string>& errors) {
  std::cerr << "configuration errors:\n";
  for (const auto& e : errors) std::cerr << "  - " << e << "\n";
  return 2;
}

/// Default report location: $PLAP_OUT_DIR when set, else the working
/// directory; an explicit --out always wins.
std::string resolve_out_path(const Options& o, const std::string& default_name) {
  if (!o.out.empty()) return o.out;
  const char* dir = std::getenv("PLAP_OUT_DIR");
  return ((dir && *dir) ? std::filesystem::path(dir) : std::filesystem::path("."))
             .append(default_name)
             .string();
}

/// Serializes fully before touching the filesystem, so a failed run never
/// leaves a partial file behind.
bool write_rows(const std::string& path, const std::vector<plap::BoundReport>& rows,
                const std::string& echo, double solver_tol) {
  std::ostringstream buf;
  plap::write_report_csv(buf, rows, kVersion, echo, solver_tol);
  std::ofstream file(path, std::ios::binary);
  if (!file) {
    std::cerr << "error: cannot open output file '" << path << "'\n";
    return false;
  }
  file << buf.str();
  return static_cast<bool>(file);
}

struct VerdictCounts {
  int holds = 0, violated = 0, inconclusive = 0;
};

VerdictCounts count_verdicts(const std::vector<plap::BoundReport>& rows) {
  VerdictCounts c;
  for (const auto& r : rows) {
    if (r.verdict == plap::Verdict::holds)
      ++c.holds;
    else if (r.verdict == plap::Verdict::violated)
      ++c.violated;
    else
      ++c.inconclusive;
  }
  return c;
}

void print_summary(const std::string& what, const std::vector<plap::BoundReport>& rows,
                   const VerdictCounts& c) {
  std::cout << what << ": " << rows.size() << " rows (" << c.holds << " holds, " << c.violated
            << " violated, " << c.inconclusive << " inconclusive)\n";
  for (const auto& r : rows) {
    if (r.verdict != plap::Verdict::violated) continue;
    std::cout << "  violated: " << r.suite << "/" << r.check;
    for (const auto& [k, v] : r.inputs) std::cout << ' ' << k << '=' << plap::format_quantity(v);
    std::cout << " slack=" << plap::format_quantity(r.slack);
    if (!r.note.empty()) std::cout << " (" << r.note << ")";
    std::cout << "\n";
  }
}

int run_model_eigen(const Options& o) {
  std::vector<std::string> errors;
  validate_common(o, errors);
  if (std::isnan(o.cfg.radius)) errors.push_back("--r: a ball radius is required");
  if (o.cfg.K > 0.0 && !std::isnan(o.cfg.radius) &&
      !(o.cfg.radius < plap::pi / std::sqrt(o.cfg.K)))
    errors.push_back("--r: ball radius must be below the model diameter pi/sqrt(K)");
  if (!errors.empty()) return fail_config(errors);

  plap::BoundReport row;
  try {
    row = plap::measure_model_eigen(o.cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  std::cout << "lambda = " << plap::format_quantity(row.lhs) << "\n"
            << "residual = " << plap::format_quantity(extra_of(row, "residual")) << "\n"
            << "bracket_width = " << plap::format_quantity(extra_of(row, "bracket_width"))
            << "\n";
  if (!o.out.empty() &&
      !write_rows(o.out, {row}, plap::config_echo("model-eigen", o.cfg), o.cfg.solver.tol))
    return 1;
  return 0;
}

int run_warped_eigen(const Options& o) {
  std::vector<std::string> errors;
  validate_common(o, errors);
  const auto prof = build_profile(o, errors);
  validate_radius_range(o, prof, errors);
  if (o.cfg.neumann && prof && !prof->closed)
    errors.push_back("--neumann: needs a closed profile");
  if (!errors.empty()) return fail_config(errors);

  plap::BoundReport row;
  try {
    row = plap::measure_warped_eigen(o.cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  std::cout << (o.cfg.neumann ? "mu = " : "lambda = ") << plap::format_quantity(row.lhs) << "\n"
            << "residual = " << plap::format_quantity(extra_of(row, "residual")) << "\n"
            << "bracket_width = " << plap::format_quantity(extra_of(row, "bracket_width"))
            << "\n";
  if (o.cfg.neumann)
    std::cout << "nodal_radius = " << plap::format_quantity(extra_of(row, "nodal_radius"))
              << "\n";
  if (!o.out.empty() &&
      !write_rows(o.out, {row}, plap::config_echo("warped-eigen", o.cfg), o.cfg.solver.tol))
    return 1;
  return 0;
}

int run_curvature(const Options& o) {
  std::vector<std::string> errors;
  validate_common(o, errors);
  const auto prof = build_profile(o, errors);
  validate_radius_range(o, prof, errors);
  if (!(o.cfg.q > 0.5 * o.cfg.n))
    errors.push_back("--q: integral curvature norms need q > n/2");
  if (!errors.empty()) return fail_config(errors);

  plap::BoundReport row;
  try {
    row = plap::measure_curvature(o.cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  const double K = plap::resolve_K(*prof, o.cfg);
  std::cout << "profile = " << o.cfg.profile_spec << " (n = " << o.cfg.n << ")\n"
            << "K = " << plap::format_quantity(K) << (o.cfg.auto_K ? " (auto-min)" : "") << "\n"
            << "rho_min = " << plap::format_quantity(extra_of(row, "rho_min")) << "\n"
            << "curvature_floor = " << plap::format_quantity(extra_of(row, "curvature_floor"))
            << "\n"
            << "norm[q=" << plap::format_quantity(o.cfg.q)
            << "] = " << plap::format_quantity(row.measured_norm) << "\n"
            << "refinement_delta = " << plap::format_quantity(extra_of(row, "refinement_delta"))
            << "\n";
  if (!o.out.empty() &&
      !write_rows(o.out, {row}, plap::config_echo("curvature", o.cfg), o.cfg.solver.tol))
    return 1;
  return 0;
}

int run_verify(const Options& o) {
  std::vector<std::string> errors;
  const auto& names = plap::verify_suite_names();
  const bool known =
      o.suite == "all" || std::find(names.begin(), names.end(), o.suite) != names.end();
  if (!known) {
    std::string listing;
    for (const auto& n : names) listing += n + ", ";
    errors.push_back("unknown suite '" + o.suite + "' (choose one of: " + listing + "all)");
  }
  validate_common(o, errors);
  const auto prof = build_profile(o, errors);
  validate_radius_range(o, prof, errors);
  if (known) validate_suite(o, o.suite, prof, errors);
  if (!errors.empty()) return fail_config(errors);

  std::vector<plap::BoundReport> rows;
  try {
    rows = plap::run_verify_suite(o.suite, o.cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  const std::string path = resolve_out_path(o, o.suite + ".csv");
  if (!write_rows(path, rows, plap::config_echo("verify " + o.suite, o.cfg), o.cfg.solver.tol))
    return 1;
  const VerdictCounts c = count_verdicts(rows);
  print_summary("verify " + o.suite, rows, c);
  std::cout << "wrote " << path << "\n";
  return c.violated > 0 ? 1 : 0;
}

int run_sweep(const Options& o) {
  std::vector<std::string> errors;
  const auto& names = plap::verify_suite_names();
  const bool is_suite = std::find(names.begin(), names.end(), o.target) != names.end();
  const bool is_measurement =
      o.target == "model-eigen" || o.target == "warped-eigen" || o.target == "curvature";
  if (!is_suite && !is_measurement)
    errors.push_back("unknown sweep target '" + o.target +
                     "' (a verify suite, model-eigen, warped-eigen, or curvature)");

  static const std::vector<std::string> axes{"a", "p", "q", "K", "r", "radius", "alpha"};
  if (std::find(axes.begin(), axes.end(), o.axis) == axes.end())
    errors.push_back("--axis: unknown axis '" + o.axis + "' (a, p, q, K, r, radius, alpha)");
  if (o.axis == "a" && o.cfg.profile_spec.rfind("perturbed-sphere:", 0) != 0)
    errors.push_back("--axis a: needs a perturbed-sphere profile to vary");
  for (double v : o.values)
    if (!std::isfinite(v)) {
      errors.push_back("--values: all axis values must be finite");
      break;
    }

  // Base-configuration validation, skipping whatever the axis replaces;
  // swept values that break a precondition are recorded in their rows.
  Options base = o;
  if (o.axis == "p") base.cfg.p = 2.0;
  if (o.axis == "q") base.cfg.q = std::max(o.cfg.q, o.cfg.n + 1.0);
  if (o.axis == "K") {
    base.cfg.K = 1.0;
    base.cfg.auto_K = false;
  }
  if (o.axis == "r" || o.axis == "radius") base.cfg.radius = plap::whole_manifold;
  if (o.axis == "alpha") base.cfg.alpha = 1.0;
  validate_common(base, errors);
  const bool profile_free = o.target == "model-eigen";
  std::optional<plap::WarpedProfile> prof;
  if (!profile_free) {
    prof = build_profile(base, errors);
    validate_radius_range(base, prof, errors);
  }
  if (o.target == "model-eigen" && base.cfg.auto_K)
    errors.push_back("--K: auto-min is not meaningful for model-eigen; pass a number");
  if (o.target == "warped-eigen" && base.cfg.neumann && prof && !prof->closed)
    errors.push_back("--neumann: needs a closed profile");
  if (o.target == "curvature" && o.axis != "q" && !(base.cfg.q > 0.5 * base.cfg.n))
    errors.push_back("--q: integral curvature norms need q > n/2");
  if (is_suite && o.axis != "q" && o.axis != "p" && o.axis != "K")
    validate_suite(base, o.target, prof, errors);
  if (!errors.empty()) return fail_config(errors);

  std::vector<plap::BoundReport> rows;
  try {
    rows = plap::run_sweep(o.target, o.axis, o.values, o.cfg);
  } catch (const std::exception& e) {
    return fail_config({e.what()});
  }

  std::ostringstream command;
  command << "sweep " << o.target << " axis=" << o.axis << " values=";
  for (size_t i = 0; i < o.values.size(); ++i)
    command << (i ? "," : "") << plap::format_quantity(o.values[i]);
  const std::string path = resolve_out_path(o, "sweep-" + o.target + "-" + o.axis + ".csv");
  if (!write_rows(path, rows, plap::config_echo(command.str(), o.cfg), o.cfg.solver.tol))
    return 1;
  const VerdictCounts c = count_verdicts(rows);
  print_summary(command.str(), rows, c);
  std::cout << "wrote " << path << "\n";
  // Sweeps are data-gathering runs: rows may legitimately violate along the
  // axis (that is often the point), so only configuration problems fail.
  return 0;
}

void add_solver_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--tol", o.cfg.solver.tol, "relative eigenvalue bracket tolerance")
      ->capture_default_str();
  cmd->add_option("--grid", o.cfg.solver.grid_size, "observation grid size for solves")
      ->capture_default_str();
}

void add_profile_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--profile", o.cfg.profile_spec,
                  "sphere | flat | hyperbolic | perturbed-sphere:<a>,<m> | table:<path>")
      ->capture_default_str();
  cmd->add_option("--n", o.cfg.n, "manifold dimension")->capture_default_str();
  cmd->add_option("--K", o.K_spec, "model curvature (number, or auto-min for the profile floor)")
      ->capture_default_str();
  cmd->add_option("--length", o.cfg.open_end,
                  "domain length for the open profile families (flat, hyperbolic)")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"p-Laplacian eigenvalues and curvature comparison checks on rotationally "
               "symmetric manifolds"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  CLI::App* model = app.add_subcommand("model-eigen",
                                       "first Dirichlet eigenvalue of a constant-curvature ball");
  model->add_option("--n", o.cfg.n, "manifold dimension")->capture_default_str();
  model->add_option("--K", o.K_spec, "model curvature (a number)")->capture_default_str();
  model->add_option("--r", o.cfg.radius, "ball radius")->required();
  model->add_option("--p", o.cfg.p, "p-Laplacian exponent")->capture_default_str();
  add_solver_flags(model, o);
  model->add_option("--out", o.out, "also write the measurement as a report row");

  CLI::App* warped = app.add_subcommand("warped-eigen",
                                        "first eigenvalue on a warped profile");
  add_profile_flags(warped, o);
  warped->add_option("--radius", o.cfg.radius,
                     "pole ball radius (default: half the domain on closed profiles, else all)");
  warped->add_option("--p", o.cfg.p, "p-Laplacian exponent")->capture_default_str();
  warped->add_flag("--neumann", o.cfg.neumann,
                   "first nontrivial Neumann eigenvalue of the closed manifold");
  add_solver_flags(warped, o);
  warped->add_option("--out", o.out, "also write the measurement as a report row");

  CLI::App* curv = app.add_subcommand("curvature", "integral curvature norm report");
  add_profile_flags(curv, o);
  curv->add_option("--q", o.cfg.q, "norm exponent (q > n/2)")->capture_default_str();
  curv->add_option("--radius", o.cfg.radius, "restrict to the pole ball of this radius");
  curv->add_option("--out", o.out, "also write the report as a row");

  CLI::App* verify = app.add_subcommand("verify", "run a named verification suite");
  verify->add_option("suite", o.suite, "bochner | p-comparison | doubling | laplace-norm | "
                                       "cheng | lichnerowicz | faber-krahn | obata | "
                                       "isoperimetric | coarea | all")
      ->required();
  add_profile_flags(verify, o);
  verify->add_option("--p", o.cfg.p, "p-Laplacian exponent")->capture_default_str();
  verify->add_option("--q", o.cfg.q, "curvature norm exponent")->capture_default_str();
  verify->add_option("--radius", o.cfg.radius, "ball radius (default: suite-specific ladder)");
  verify->add_option("--alpha", o.cfg.alpha, "comparison constant the verdicts are judged at")
      ->capture_default_str();
  verify->add_option("--C_s", o.cfg.sobolev_constant, "Sobolev constant for discard thresholds")
      ->capture_default_str();
  add_solver_flags(verify, o);
  verify->add_option("--jobs", o.cfg.jobs, "worker threads (0 = all cores)")
      ->capture_default_str();
  verify->add_option("--out", o.out, "report path (default: <suite>.csv under $PLAP_OUT_DIR)");

  CLI::App* sweep = app.add_subcommand("sweep", "rerun a suite or measurement along one axis");
  sweep->add_option("target", o.target,
                    "a verify suite, model-eigen, warped-eigen, or curvature")
      ->required();
  sweep->add_option("--axis", o.axis, "a | p | q | K | r | radius | alpha")->required();
  sweep->add_option("--values", o.values, "comma-separated axis values")
      ->required()
      ->delimiter(',');
  add_profile_flags(sweep, o);
  sweep->add_option("--p", o.cfg.p, "p-Laplacian exponent")->capture_default_str();
  sweep->add_option("--q", o.cfg.q, "curvature norm exponent")->capture_default_str();
  sweep->add_option("--radius", o.cfg.radius, "ball radius");
  sweep->add_option("--alpha", o.cfg.alpha, "comparison constant")->capture_default_str();
  sweep->add_option("--C_s", o.cfg.sobolev_constant, "Sobolev constant")->capture_default_str();
  sweep->add_flag("--neumann", o.cfg.neumann, "warped-eigen target: Neumann eigenvalue");
  add_solver_flags(sweep, o);
  sweep->add_option("--jobs", o.cfg.jobs, "worker threads (0 = all cores)")
      ->capture_default_str();
  sweep->add_option("--out", o.out,
                    "table path (default: sweep-<target>-<axis>.csv under $PLAP_OUT_DIR)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;  // malformed invocations are configuration errors
  }

  {
    // --K is shared text; commands differ only in whether auto-min resolves.
    std::vector<std::string> errors;
    const bool allow_auto = app.got_subcommand(curv) || app.got_subcommand(verify) ||
                            app.got_subcommand(sweep);
    parse_K(o.K_spec, allow_auto, o.cfg, errors);
    if (!errors.empty()) return fail_config(errors);
  }

  if (app.got_subcommand(model)) return run_model_eigen(o);
  if (app.got_subcommand(warped)) return run_warped_eigen(o);
  if (app.got_subcommand(curv)) return run_curvature(o);
  if (app.got_subcommand(verify)) return run_verify(o);
  return run_sweep(o);
}
