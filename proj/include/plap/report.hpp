#pragma once

/**
 * @file report.hpp
 * @brief Uniform result carrier for all inequality checks, plus the CSV
 *        report writer used by the verification suites and the CLI.
 *
 * Every check reports the two sides of its inequality, the signed slack in
 * the check's own orientation, the relevant measured curvature norm, and a
 * verdict.  Reports are self-describing: the full input tuple and all named
 * intermediate quantities travel with the row.
 */

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace plap {

enum class Verdict { holds, violated, inconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::violated: return "violated";
    default: return "inconclusive";
  }
}

/// Verdict band: inequality checks must not fail on solver noise, so the
/// band grows with the eigenvalue bisection bracket when solvers are involved.
inline double tolerance_band(double bracket_width = 0.0) {
  return std::max(1e-8, 100.0 * bracket_width);
}

inline Verdict judge(double slack, double tol_band) {
  if (std::isnan(slack)) return Verdict::inconclusive;
  return slack >= -tol_band ? Verdict::holds : Verdict::violated;
}

struct BoundReport {
  std::string suite;  ///< verification suite that produced the row
  std::string check;  ///< kebab-case name of the specific inequality
  double lhs = std::numeric_limits<double>::quiet_NaN();
  double rhs = std::numeric_limits<double>::quiet_NaN();
  double slack = std::numeric_limits<double>::quiet_NaN();  ///< per-check orientation
  double measured_norm = std::numeric_limits<double>::quiet_NaN();
  double tol_band = 0.0;
  Verdict verdict = Verdict::inconclusive;
  std::vector<std::pair<std::string, double>> inputs;  ///< echoed parameters
  std::vector<std::pair<std::string, double>> extras;  ///< named intermediates
  std::string note;  ///< free-form annotation (per-row failure capture)

  void input(const std::string& k, double v) { inputs.emplace_back(k, v); }
  void extra(const std::string& k, double v) { extras.emplace_back(k, v); }
};

/// Shortest-round-trip-ish fixed formatting: %.12g everywhere, so identical
/// configs produce byte-identical files on every run.
inline std::string format_quantity(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

/// FNV-1a, used to stamp reports with a configuration fingerprint.
inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

namespace detail {

inline void append_key(std::vector<std::string>& keys, const std::string& k) {
  for (const auto& existing : keys)
    if (existing == k) return;
  keys.push_back(k);
}

inline std::string csv_escape(const std::string& s) {
  bool needs_quotes = false;
  for (char c : s)
    if (c == ',' || c == '"' || c == '\n') needs_quotes = true;
  if (!needs_quotes) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace detail

/**
 * Writes the rows as comma-separated text.  The column set is the union of
 * the rows' input and extra keys in first-appearance order, so files stay
 * self-describing across mixed suites; absent values are left empty.
 * The leading comment block records version, config hash, and tolerance
 * settings; it deliberately contains nothing run-dependent.
 */
inline void write_report_csv(std::ostream& os, const std::vector<BoundReport>& rows,
                             const std::string& version, const std::string& config_echo,
                             double solver_tol) {
  char hash_hex[20];
  std::snprintf(hash_hex, sizeof hash_hex, "%016llx",
                static_cast<unsigned long long>(fnv1a(config_echo)));
  os << "# plap " << version << "\n";
  os << "# config " << hash_hex << "\n";
  os << "# solver_tol " << format_quantity(solver_tol) << "\n";
  os << "# tol_band_floor " << format_quantity(tolerance_band()) << "\n";

  std::vector<std::string> in_keys, ex_keys;
  for (const auto& r : rows) {
    for (const auto& [k, v] : r.inputs) detail::append_key(in_keys, k);
    for (const auto& [k, v] : r.extras) detail::append_key(ex_keys, k);
  }

  os << "suite,check";
  for (const auto& k : in_keys) os << ',' << k;
  os << ",lhs,rhs,slack,measured_norm,verdict";
  for (const auto& k : ex_keys) os << ',' << k;
  os << ",note\n";

  const auto lookup = [](const std::vector<std::pair<std::string, double>>& kv,
                         const std::string& key, std::string& out) {
    for (const auto& [k, v] : kv)
      if (k == key) {
        out = format_quantity(v);
        return;
      }
    out.clear();
  };

  std::string cell;
  for (const auto& r : rows) {
    os << detail::csv_escape(r.suite) << ',' << detail::csv_escape(r.check);
    for (const auto& k : in_keys) {
      lookup(r.inputs, k, cell);
      os << ',' << cell;
    }
    os << ',' << format_quantity(r.lhs) << ',' << format_quantity(r.rhs) << ','
       << format_quantity(r.slack) << ',' << format_quantity(r.measured_norm) << ','
       << to_string(r.verdict);
    for (const auto& k : ex_keys) {
      lookup(r.extras, k, cell);
      os << ',' << cell;
    }
    os << ',' << detail::csv_escape(r.note) << "\n";
  }
}

}  // namespace plap
