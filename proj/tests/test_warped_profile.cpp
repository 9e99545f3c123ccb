#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "oracles.hpp"
#include "plap/cubic_spline.hpp"
#include "plap/curvature.hpp"
#include "plap/warped_profile.hpp"

using Catch::Approx;
using namespace plap;

namespace {

// Rescaled profile c * phi(t / c): curvatures scale by 1/c^2, volumes by c^n.
WarpedProfile rescale(const WarpedProfile& p, double c) {
  WarpedProfile q = p;
  q.domain_end = c * p.domain_end;
  q.phi = [c, base = p.phi](double t) { return c * base(t / c); };
  q.phi_prime = [c, base = p.phi_prime](double t) { return base(t / c); };
  q.phi_second = [c, base = p.phi_second](double t) { return base(t / c) / c; };
  return q;
}

std::filesystem::path write_table(const std::string& name, int rows, bool closed) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path);
  out << "t,phi\n";
  out.precision(17);
  const double end = closed ? oracles::pi : 1.5;
  for (int i = 0; i <= rows; ++i) {
    const double t = end * i / rows;
    out << t << "," << std::sin(t) << "\n";
  }
  return path;
}

}  // namespace

TEST_CASE("cubic spline reproduces smooth data with clamped ends", "[spline]") {
  std::vector<double> x, y;
  for (int i = 0; i <= 60; ++i) {
    x.push_back(oracles::pi * i / 60.0);
    y.push_back(std::sin(x.back()));
  }
  CubicSpline s(x, y, CubicSpline::clamped(1.0), CubicSpline::clamped(-1.0));
  for (double t : {0.3, 1.0, 2.0, 3.0}) {
    CHECK(s(t) == Approx(std::sin(t)).margin(1e-7));
    CHECK(s.derivative(t) == Approx(std::cos(t)).margin(1e-5));
    CHECK(s.second_derivative(t) == Approx(-std::sin(t)).margin(1e-3));
  }
  CHECK(s.derivative(0.0) == Approx(1.0).margin(1e-12));
  CHECK(s.derivative(oracles::pi) == Approx(-1.0).margin(1e-12));

  CHECK_THROWS_AS(CubicSpline({0.0, 0.0, 1.0}, {0.0, 1.0, 2.0}, CubicSpline::natural(),
                              CubicSpline::natural()),
                  std::invalid_argument);
}

TEST_CASE("round profile has constant Ricci curvature (n-1)K", "[curvature]") {
  for (int n : {2, 3, 5}) {
    for (double K : {0.5, 1.0, 2.0}) {
      const WarpedProfile p = make_sphere_profile(n, K);
      for (double frac : {0.1, 0.5, 0.9}) {
        const double t = frac * p.domain_end;
        CHECK(ricci_radial(p, t) == Approx((n - 1) * K).epsilon(1e-10));
        CHECK(ricci_tangential(p, t) == Approx((n - 1) * K).epsilon(1e-10));
        CHECK(ricci_deficit(p, K, t) == 0.0);
        if (t < model_diameter(make_model(n, K)))
          CHECK(laplacian_excess(p, K, t) == Approx(0.0).margin(1e-10));
      }
      CHECK(integral_curvature_norm(p, K, 0.75 * n) == Approx(0.0).margin(1e-12));
    }
  }
}

TEST_CASE("flat and hyperbolic profiles have their space-form curvatures", "[curvature]") {
  const WarpedProfile flat = make_flat_profile(3, 2.0);
  CHECK(ricci_radial(flat, 1.0) == 0.0);
  CHECK(ricci_tangential(flat, 1.0) == 0.0);
  // Against reference level K = 1 the deficit is the constant (n-1)K = 2.
  CHECK(ricci_deficit(flat, 1.0, 0.7) == Approx(2.0));
  for (double q : {2.0, 3.0})
    CHECK(integral_curvature_norm(flat, 1.0, q, 1.0) == Approx(2.0).epsilon(1e-10));
  CHECK(laplacian_excess(flat, 1.0, 1.0) ==
        Approx(2.0 * (1.0 / 1.0 - std::cos(1.0) / std::sin(1.0))).epsilon(1e-12));

  const WarpedProfile hyp = make_hyperbolic_profile(2, 2.0);
  CHECK(ricci_radial(hyp, 0.8) == Approx(-1.0).epsilon(1e-12));
  CHECK(ricci_tangential(hyp, 0.8) == Approx(-1.0).epsilon(1e-12));
  CHECK(integral_curvature_norm(hyp, 0.0, 2.0, 1.5) == Approx(1.0).epsilon(1e-10));
}

TEST_CASE("perturbed sphere profile: construction and curvature", "[curvature]") {
  const WarpedProfile p = make_perturbed_sphere_profile(2, 0.05, 2);
  CHECK(p.closed);
  CHECK(p.domain_end == Approx(oracles::pi));

  // Analytic derivatives agree with finite differences of phi itself.
  for (double t : {0.4, 1.1, 2.0, 2.8}) {
    CHECK(p.phi_prime(t) ==
          Approx(d1_richardson(p.phi, t, 1e-3)).margin(1e-9));
    CHECK(p.phi_second(t) ==
          Approx(d2_richardson(p.phi, t, 1e-3)).margin(1e-6));
  }

  // Smooth pole closure: phi'(0) = 1, phi'(pi) = -1 for any amplitude.
  CHECK(p.phi(1e-8) == Approx(1e-8).epsilon(1e-6));
  CHECK(p.phi_prime(0.0) == Approx(1.0));
  CHECK(p.phi_prime(oracles::pi) == Approx(-1.0));

  CHECK_THROWS_AS(make_perturbed_sphere_profile(2, 0.05, 1), std::invalid_argument);
  CHECK_THROWS_AS(make_perturbed_sphere_profile(2, 2.0, 2), std::invalid_argument);

  CHECK_THROWS_AS(ricci_min(p, 0.0), std::domain_error);
  CHECK_THROWS_AS(ricci_min(p, 4.0), std::domain_error);
}

TEST_CASE("ball volumes on profiles match brute-force quadrature", "[curvature]") {
  const WarpedProfile p = make_perturbed_sphere_profile(2, 0.05, 2);
  const double ref = oracles::trapezoid(
      [&](double t) { return 2.0 * oracles::pi * p.phi(t); }, 0.0, 1.0, 400000);
  CHECK(ball_volume(p, 1.0) == Approx(ref).epsilon(1e-10));

  const WarpedProfile s = make_sphere_profile(3, 1.0);
  CHECK(ball_volume(s, oracles::pi / 2) == Approx(oracles::pi * oracles::pi).epsilon(1e-11));
  CHECK(profile_total_volume(s) == Approx(2.0 * plap::sqr(oracles::pi)).epsilon(1e-11));
  CHECK(boundary_area(s, oracles::pi / 2) == Approx(4.0 * oracles::pi).epsilon(1e-12));

  CHECK_THROWS_AS(ball_volume(p, 4.0), std::domain_error);
  CHECK_THROWS_AS(profile_total_volume(make_flat_profile(2, 1.0)), std::domain_error);
}

TEST_CASE("deficit norms against brute-force quadrature", "[curvature]") {
  const WarpedProfile p = make_perturbed_sphere_profile(2, 0.08, 3);
  const double K = 1.0, q = 2.0, R = 2.0;
  const double vol = ball_volume(p, R);
  const double ref_raw = oracles::trapezoid(
      [&](double t) {
        return plap::sqr(ricci_deficit(p, K, t)) * 2.0 * oracles::pi * p.phi(t);
      },
      1e-9, R, 400000);
  CHECK(integral_curvature_norm(p, K, q, R) ==
        Approx(std::sqrt(ref_raw / vol)).epsilon(1e-8));

  const double s = 4.0;
  const double psi_raw = oracles::trapezoid(
      [&](double t) {
        return std::pow(laplacian_excess(p, K, t), s) * 2.0 * oracles::pi * p.phi(t);
      },
      1e-9, R, 400000);
  CHECK(psi_norm(p, K, s, R) == Approx(std::pow(psi_raw / vol, 1.0 / s)).epsilon(1e-8));
}

TEST_CASE("norm preconditions and monotonicity", "[curvature]") {
  const WarpedProfile p = make_perturbed_sphere_profile(2, 0.06, 2);
  CHECK_THROWS_AS(integral_curvature_norm(p, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(psi_norm(p, 1.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(psi_norm(p, 4.0, 2.0), std::domain_error);  // model cap pi/2 < D
  CHECK_THROWS_AS(integral_curvature_norm(make_flat_profile(2, 1.0), 1.0, 2.0),
                  std::invalid_argument);  // open profile without a radius

  // Normalized norms are nondecreasing in the exponent (power mean) and in
  // the reference curvature level (pointwise monotone deficit).
  const double n15 = integral_curvature_norm(p, 1.0, 1.5);
  const double n2 = integral_curvature_norm(p, 1.0, 2.0);
  const double n3 = integral_curvature_norm(p, 1.0, 3.0);
  CHECK(n15 <= n2 + 1e-12);
  CHECK(n2 <= n3 + 1e-12);
  CHECK(integral_curvature_norm(p, 0.8, 2.0) <= n2 + 1e-12);
  CHECK(n2 <= integral_curvature_norm(p, 1.2, 2.0) + 1e-12);
}

TEST_CASE("curvature quantities obey the metric rescaling law", "[curvature]") {
  const WarpedProfile p = make_perturbed_sphere_profile(3, 0.05, 2);
  const double c = 2.0;
  const WarpedProfile pc = rescale(p, c);
  const double K = 1.0, t = 1.2, R = 2.0;

  CHECK(ricci_min(pc, c * t) == Approx(ricci_min(p, t) / (c * c)).epsilon(1e-10));
  CHECK(ball_volume(pc, c * R) == Approx(std::pow(c, p.n) * ball_volume(p, R)).epsilon(1e-10));
  CHECK(integral_curvature_norm(pc, K / (c * c), 2.0, c * R) ==
        Approx(integral_curvature_norm(p, K, 2.0, R) / (c * c)).epsilon(1e-8));
  CHECK(laplacian_excess(pc, K / (c * c), c * t) ==
        Approx(laplacian_excess(p, K, t) / c).epsilon(1e-9));
}

TEST_CASE("auto-min curvature level", "[curvature]") {
  CHECK(auto_min_curvature(make_sphere_profile(2, 2.0)) == Approx(2.0).epsilon(1e-9));
  const WarpedProfile p = make_perturbed_sphere_profile(2, 0.05, 2);
  const double k0 = auto_min_curvature(p);
  CHECK(k0 < 1.0);
  CHECK(integral_curvature_norm(p, k0, 2.0) == Approx(0.0).margin(1e-8));
}

TEST_CASE("curvature report collects grids and norms", "[curvature]") {
  const WarpedProfile p = make_perturbed_sphere_profile(2, 0.05, 2);
  const CurvatureReport rep = curvature_report(p, 1.0, {1.5, 2.0});
  REQUIRE(rep.grid.size() == 4096);
  CHECK(rep.rho.size() == rep.grid.size());
  CHECK(rep.deficit.size() == rep.grid.size());
  CHECK(rep.rho_min < 1.0);
  CHECK(rep.norms.at(2.0) == Approx(integral_curvature_norm(p, 1.0, 2.0)).epsilon(1e-12));
  CHECK(rep.norm_refinement_delta.at(2.0) < 1e-5);
  for (size_t i = 1; i < rep.grid.size(); ++i) CHECK(rep.grid[i] > rep.grid[i - 1]);

  // Reference level above the profile's model cap: psi is undefined there.
  const CurvatureReport capped = curvature_report(p, 4.0, {2.0});
  CHECK(std::isnan(capped.psi.back()));
  CHECK(!std::isnan(capped.psi.front()));
}

TEST_CASE("tabulated profile loading", "[profile]") {
  const auto path = write_table("plap_table_ok.csv", 400, true);
  const WarpedProfile p = make_table_profile(2, path.string());
  CHECK(p.closed);
  CHECK(p.domain_end == Approx(oracles::pi));
  CHECK(p.phi(1.0) == Approx(std::sin(1.0)).margin(1e-8));
  CHECK(p.phi_prime(1.0) == Approx(std::cos(1.0)).margin(1e-6));
  CHECK(p.phi_second(1.0) == Approx(-std::sin(1.0)).margin(1e-3));
  CHECK(ricci_min(p, 1.0) == Approx(1.0).margin(2e-3));
  std::filesystem::remove(path);

  const auto open_path = write_table("plap_table_open.csv", 300, false);
  const WarpedProfile open_p = make_table_profile(3, open_path.string());
  CHECK(!open_p.closed);
  CHECK(open_p.domain_end == Approx(1.5));
  std::filesystem::remove(open_path);
}

TEST_CASE("tabulated profile rejection messages", "[profile]") {
  namespace fs = std::filesystem;
  const auto tmp = fs::temp_directory_path();

  const auto bad_header = tmp / "plap_table_noheader.csv";
  std::ofstream(bad_header) << "0.0,0.0\n0.1,0.1\n0.2,0.2\n0.3,0.3\n0.4,0.4\n";
  CHECK_THROWS_WITH(make_table_profile(2, bad_header.string()),
                    Catch::Matchers::ContainsSubstring("header"));

  const auto bad_order = tmp / "plap_table_order.csv";
  std::ofstream(bad_order) << "t,phi\n0,0\n0.2,0.2\n0.1,0.1\n0.4,0.4\n";
  CHECK_THROWS_WITH(make_table_profile(2, bad_order.string()),
                    Catch::Matchers::ContainsSubstring("increasing"));

  const auto bad_start = tmp / "plap_table_start.csv";
  std::ofstream(bad_start) << "t,phi\n0,0.5\n0.1,0.6\n0.2,0.7\n0.3,0.8\n";
  CHECK_THROWS_WITH(make_table_profile(2, bad_start.string()),
                    Catch::Matchers::ContainsSubstring("start at t=0"));

  const auto bad_sign = tmp / "plap_table_sign.csv";
  std::ofstream(bad_sign) << "t,phi\n0,0\n0.1,0.1\n0.2,-0.05\n0.3,0.1\n0.4,0.2\n";
  CHECK_THROWS_WITH(make_table_profile(2, bad_sign.string()),
                    Catch::Matchers::ContainsSubstring("positive"));

  CHECK_THROWS_WITH(make_table_profile(2, (tmp / "plap_no_such_file.csv").string()),
                    Catch::Matchers::ContainsSubstring("cannot open"));

  for (const auto& f : {bad_header, bad_order, bad_start, bad_sign}) fs::remove(f);
}

TEST_CASE("profile mini-language", "[profile]") {
  CHECK(profile_from_spec("sphere", 2, 1.0, 0.0).closed);
  CHECK(profile_from_spec("flat", 3, 0.0, 2.0).domain_end == Approx(2.0));
  CHECK(profile_from_spec("hyperbolic", 2, -1.0, 2.5).name == "hyperbolic");
  const WarpedProfile p = profile_from_spec("perturbed-sphere:0.05,2", 2, 1.0, 0.0);
  CHECK(p.phi(1.0) == Approx(std::sin(1.0) + 0.05 * std::sin(2.0) * plap::sqr(std::sin(1.0))));
  CHECK_THROWS_AS(profile_from_spec("perturbed-sphere:0.05", 2, 1.0, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(profile_from_spec("moebius", 2, 1.0, 0.0), std::invalid_argument);
}
