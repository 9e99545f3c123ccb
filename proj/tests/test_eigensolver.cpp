#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include <plap/eigensolver.hpp>
#include <plap/model_geometry.hpp>
#include <plap/warped_profile.hpp>

#include "oracles.hpp"

using namespace plap;
using Catch::Approx;

namespace {

RadialProblem unit_string(double p, double T) {
  return interval_problem([](double) { return 1.0; }, T, p);
}

// Trapezoid sum over the (possibly nonuniform) result grid.
double grid_trapezoid(const std::vector<double>& t, const std::vector<double>& g) {
  double s = 0.0;
  for (size_t i = 0; i + 1 < t.size(); ++i) s += 0.5 * (g[i] + g[i + 1]) * (t[i + 1] - t[i]);
  return s;
}

}  // namespace

TEST_CASE("free-fixed string matches the p-trigonometric eigenvalue") {
  // Oracle: the first eigenvalue of (|f'|^{p-2} f')' = -lambda |f|^{p-2} f
  // with f'(0) = 0, f(T) = 0 is (p-1) (pi_p / 2T)^p.
  for (double p : {1.5, 2.0, 3.0, 4.0}) {
    for (double T : {1.0, 2.5}) {
      const auto r = solve_first_dirichlet(unit_string(p, T));
      const double expected = oracles::string_eigenvalue_mixed(p, T);
      INFO("p = " << p << ", T = " << T);
      CHECK(r.lambda == Approx(expected).epsilon(1e-6));
      // The residual diagnostic is quadrature-limited to O(h^p) for p < 2.
      CHECK(r.residual < (p < 2.0 ? 2e-5 : 1e-6));
      CHECK(r.bracket_width <= 1.5e-8 * r.lambda);
      CHECK(r.zero_count == 0);
    }
  }
}

TEST_CASE("flat disc ground state reproduces the Bessel eigenvalue") {
  // Oracle: lambda_1 of the unit disc (p = 2) is the squared first zero of
  // the Bessel function J_0, located by an independent quadrature bisection.
  const double j01 = oracles::bessel_j0_first_zero();
  const auto m = make_model(2, 0.0);

  const auto r1 = solve_first_dirichlet_model(m, 1.0, 2.0);
  CHECK(r1.lambda == Approx(j01 * j01).epsilon(1e-6));
  CHECK(r1.residual < 1e-6);

  // Dirichlet eigenvalues scale as radius^-2 in the flat case.
  const auto r2 = solve_first_dirichlet_model(m, 2.0, 2.0);
  CHECK(r2.lambda == Approx(0.25 * j01 * j01).epsilon(1e-6));
}

TEST_CASE("hemisphere eigenvalue equals dimension times curvature") {
  // cos(sqrt(K) t) is the ground state of the hemisphere, with lambda = n K.
  for (auto [n, K] : {std::pair{2, 1.0}, std::pair{3, 2.0}}) {
    const auto m = make_model(n, K);
    const double r = 0.5 * pi / std::sqrt(K);
    const auto res = solve_first_dirichlet_model(m, r, 2.0);
    INFO("n = " << n << ", K = " << K);
    CHECK(res.lambda == Approx(n * K).epsilon(1e-6));
  }
}

TEST_CASE("ball eigenvalues shrink as the ball grows") {
  const auto m = make_model(2, 0.0);
  const double a = solve_first_dirichlet_model(m, 0.5, 2.5).lambda;
  const double b = solve_first_dirichlet_model(m, 1.0, 2.5).lambda;
  const double c = solve_first_dirichlet_model(m, 1.5, 2.5).lambda;
  CHECK(a > b);
  CHECK(b > c);
  CHECK(c > 0.0);
}

TEST_CASE("eigenvalue moves continuously in p") {
  const auto m = make_model(2, 0.0);
  const double mid = solve_first_dirichlet_model(m, 1.0, 2.0).lambda;
  const double up = solve_first_dirichlet_model(m, 1.0, 2.001).lambda;
  const double down = solve_first_dirichlet_model(m, 1.0, 1.999).lambda;
  CHECK(std::abs(up - mid) < 0.05 * mid);
  CHECK(std::abs(down - mid) < 0.05 * mid);
}

TEST_CASE("ground state is monotone with nonpositive flux") {
  const auto m = make_model(2, 0.0);
  const auto r = solve_first_dirichlet_model(m, 1.0, 3.0);
  REQUIRE(r.grid.size() == r.f.size());
  REQUIRE(r.grid.size() == r.flux.size());
  CHECK(r.grid.front() == 0.0);
  CHECK(r.f.front() == 1.0);
  for (size_t i = 0; i < r.f.size(); ++i) {
    CHECK(r.flux[i] <= 0.0);
    CHECK(r.fprime[i] <= 0.0);
    CHECK(r.f[i] >= -1e-5);
    CHECK(r.f[i] <= 1.0 + 1e-12);
  }
  CHECK(r.zero_count == 0);
  CHECK(r.residual < 1e-6);
}

TEST_CASE("reversed coordinates give the same eigenvalue on a round sphere") {
  const auto prof = make_sphere_profile(2, 1.0);
  const double forward = solve_first_dirichlet(ball_problem(prof, 1.0, 2.5)).lambda;
  const double backward =
      solve_first_dirichlet(reversed_ball_problem(prof, pi - 1.0, 2.5)).lambda;
  CHECK(backward == Approx(forward).epsilon(1e-6));
}

TEST_CASE("round sphere Neumann eigenvalue and nodal structure") {
  // Oracle: the first nontrivial eigenvalue of the round n-sphere of
  // curvature K at p = 2 is n K, with eigenfunction cos(sqrt(K) t).
  for (auto [n, K] : {std::pair{2, 1.0}, std::pair{2, 2.0}, std::pair{3, 1.0}}) {
    const auto prof = make_sphere_profile(n, K);
    const auto r = solve_first_neumann_radial(prof, 2.0);
    INFO("n = " << n << ", K = " << K);
    CHECK(r.lambda == Approx(n * K).epsilon(1e-5));
    CHECK(r.zero_count == 1);
    CHECK(r.nodal_radius == Approx(0.5 * pi / std::sqrt(K)).margin(1e-6));
    CHECK(r.residual < 1e-6);

    // The flux vanishes at the far pole.
    double wmax = 0.0;
    for (double w : r.flux) wmax = std::max(wmax, std::abs(w));
    CHECK(std::abs(r.terminal_flux) <= 1e-4 * wmax);

    // p-mean constraint: the weighted odd power of f integrates to zero.
    const double cn = unit_sphere_area(n);
    std::vector<double> odd(r.grid.size()), even(r.grid.size());
    for (size_t i = 0; i < r.grid.size(); ++i) {
      const double A = cn * std::pow(prof.phi(r.grid[i]), n - 1);
      odd[i] = A * signed_pow(r.f[i], 1.0);
      even[i] = A * std::abs(r.f[i]);
    }
    CHECK(std::abs(grid_trapezoid(r.grid, odd)) <= 1e-4 * grid_trapezoid(r.grid, even));
  }
}

TEST_CASE("Neumann solve stays clean in higher dimensions") {
  // The steep far-pole weight sin^{n-1} t makes the shot diverge through
  // zero inside the terminal cells whenever the bracket midpoint lands a
  // hair above the eigenvalue; the nodal count must not mistake that
  // boundary artifact for a second interior zero.
  for (auto [n, K, p] : {std::tuple{4, 1.0, 2.0}, std::tuple{5, 1.0, 3.0},
                         std::tuple{5, 0.5, 3.0}, std::tuple{6, 1.0, 2.0}}) {
    const auto prof = make_sphere_profile(n, K);
    const auto r = solve_first_neumann_radial(prof, p);
    INFO("n = " << n << ", K = " << K << ", p = " << p);
    CHECK(r.zero_count == 1);
    CHECK(r.nodal_radius == Approx(0.5 * pi / std::sqrt(K)).margin(1e-5));
    if (p == 2.0) CHECK(r.lambda == Approx(n * K).epsilon(1e-5));
  }
}

TEST_CASE("nonlinear Neumann eigenfunction stays antisymmetric on the sphere") {
  // The reflection t -> pi - t maps eigenfunctions to eigenfunctions, and the
  // first nontrivial one is unique up to scale, so its zero sits at the
  // equator for every p.
  const auto prof = make_sphere_profile(3, 1.0);
  const auto r = solve_first_neumann_radial(prof, 2.7);
  CHECK(r.nodal_radius == Approx(0.5 * pi).margin(1e-5));
  CHECK(r.zero_count == 1);
}

TEST_CASE("variational minimizer agrees with shooting") {
  SECTION("flat disc, p = 2") {
    const auto m = make_model(2, 0.0);
    const auto pr = model_ball_problem(m, 1.0, 2.0);
    const double shot = solve_first_dirichlet(pr).lambda;
    const auto min = rayleigh_minimize_grid(pr, 1024);
    CHECK(min.lambda == Approx(shot).epsilon(1e-3));
  }
  SECTION("hyperbolic ball, p = 2") {
    const auto m = make_model(2, -1.0);
    const auto pr = model_ball_problem(m, 1.5, 2.0);
    const double shot = solve_first_dirichlet(pr).lambda;
    const auto min = rayleigh_minimize_grid(pr, 1024);
    CHECK(min.lambda == Approx(shot).epsilon(1e-3));
  }
  SECTION("flat disc, p = 3") {
    const auto m = make_model(2, 0.0);
    const auto pr = model_ball_problem(m, 1.0, 3.0);
    const double shot = solve_first_dirichlet(pr).lambda;
    const auto min = rayleigh_minimize_grid(pr, 512);
    CHECK(min.lambda == Approx(shot).epsilon(2e-3));
  }
  SECTION("fixed-fixed string recovers pi squared") {
    auto pr = unit_string(2.0, 1.0);
    MinimizeOptions opts;
    opts.left_dirichlet = true;
    const auto min = rayleigh_minimize_grid(pr, 1024, opts);
    CHECK(min.lambda == Approx(oracles::pi * oracles::pi).epsilon(1e-3));
  }
  SECTION("Neumann sphere, p = 2") {
    const auto prof = make_sphere_profile(2, 1.0);
    auto pr = ball_problem(prof, pi, 2.0);
    pr.bc = BoundaryCondition::neumann;
    const auto min = rayleigh_minimize_grid(pr, 1024);
    CHECK(min.lambda == Approx(2.0).epsilon(2e-3));
  }
}

TEST_CASE("discrete Rayleigh quotient reproduces the Bessel quotient") {
  const double j01 = oracles::bessel_j0_first_zero();
  const auto m = make_model(2, 0.0);
  const auto pr = model_ball_problem(m, 1.0, 2.0);
  const int N = 4097;
  std::vector<double> f(N);
  for (int i = 0; i < N; ++i) f[i] = oracles::bessel_j0(j01 * i / (N - 1.0));
  CHECK(p_rayleigh_quotient(pr, f) == Approx(j01 * j01).epsilon(1e-4));
}

TEST_CASE("eigensolver input validation") {
  const auto m = make_model(2, 1.0);
  const auto sphere = make_sphere_profile(2, 1.0);
  const auto open = make_flat_profile(2, 1.0);

  CHECK_THROWS_AS(pi_p(1.0), std::invalid_argument);
  CHECK_THROWS_AS(ball_problem(sphere, 0.0, 2.0), std::domain_error);
  CHECK_THROWS_AS(ball_problem(sphere, 4.0, 2.0), std::domain_error);
  CHECK_THROWS_AS(ball_problem(sphere, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(model_ball_problem(m, pi, 2.0), std::domain_error);
  CHECK_THROWS_AS(reversed_ball_problem(open, 0.5, 2.0), std::domain_error);
  CHECK_THROWS_AS(reversed_ball_problem(sphere, pi, 2.0), std::domain_error);
  CHECK_THROWS_AS(interval_problem([](double) { return 1.0; }, 0.0, 2.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(interval_problem([](double) { return 0.0; }, 1.0, 2.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(solve_first_neumann_radial(open, 2.0), std::domain_error);

  auto neumann = ball_problem(sphere, 1.0, 2.0);
  neumann.bc = BoundaryCondition::neumann;
  CHECK_THROWS_AS(solve_first_dirichlet(neumann), std::invalid_argument);

  CHECK_THROWS_AS(rayleigh_minimize_grid(ball_problem(sphere, 1.0, 2.0), 4),
                  std::invalid_argument);
  CHECK_THROWS_AS(p_rayleigh_quotient(ball_problem(sphere, 1.0, 2.0), {1.0, 0.0}),
                  std::invalid_argument);
}
