#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "plap/model_geometry.hpp"

using Catch::Approx;
using namespace plap;

TEST_CASE("generalized sine matches closed forms", "[model]") {
  CHECK(sn(1.0, pi / 2) == Approx(1.0).epsilon(1e-14));
  CHECK(sn(0.0, 2.0) == Approx(2.0).epsilon(1e-14));
  CHECK(sn(-1.0, 1.0) == Approx(std::sinh(1.0)).epsilon(1e-14));
  CHECK(sn(-1.0, 1.0) == Approx(1.1752011936438014).epsilon(1e-12));
  CHECK(sn(4.0, pi / 4) == Approx(0.5).epsilon(1e-14));

  CHECK(sn_prime(1.0, pi / 3) == Approx(0.5).epsilon(1e-14));
  CHECK(sn_prime(0.0, 5.0) == Approx(1.0));
  CHECK(sn_prime(-1.0, 1.0) == Approx(std::cosh(1.0)).epsilon(1e-14));
}

TEST_CASE("generalized sine solves y'' + K y = 0", "[model]") {
  for (double K : {-2.0, -1.0, 0.0, 0.5, 1.0, 3.0}) {
    for (double t : {0.1, 0.5, 1.0, 1.4}) {
      const double ypp = d2_richardson([&](double x) { return sn(K, x); }, t, 1e-3);
      CHECK(ypp + K * sn(K, t) == Approx(0.0).margin(1e-7));
    }
  }
}

TEST_CASE("generalized sine is smooth across the series/closed-form seam", "[model]") {
  // |K| t^2 = 1e-6 is the switch point; probe both sides of it.
  const double K = 1.0;
  const double t_seam = std::sqrt(1e-6 / K);
  const double below = sn(K, t_seam * 0.999);
  const double above = sn(K, t_seam * 1.001);
  CHECK(above - below == Approx(t_seam * 0.002).epsilon(1e-6));

  // Flat limit: the deviation from the identity is bounded by |K| t^3 / 6.
  for (double t : {0.3, 1.0, 2.5}) {
    CHECK(sn(1e-12, t) == Approx(t).margin(1e-12 * t * t * t));
    CHECK(sn(-1e-12, t) == Approx(t).margin(1e-12 * t * t * t));
  }
}

TEST_CASE("radial Laplacian of the distance function", "[model]") {
  CHECK(model_laplacian_of_r(make_model(3, 0.0), 1.0) == Approx(2.0).epsilon(1e-14));
  CHECK(model_laplacian_of_r(make_model(2, 1.0), pi / 2) == Approx(0.0).margin(1e-14));
  CHECK(model_laplacian_of_r(make_model(2, 1.0), 1.0) ==
        Approx(0.6420926159343306).epsilon(1e-13));  // cot(1)
  CHECK(model_laplacian_of_r(make_model(4, -1.0), 2.0) ==
        Approx(3.0 / std::tanh(2.0)).epsilon(1e-13));

  CHECK(mean_curvature_geodesic_sphere(make_model(3, 1.0), 0.4) ==
        Approx(model_laplacian_of_r(make_model(3, 1.0), 0.4)));

  CHECK_THROWS_AS(model_laplacian_of_r(make_model(2, 1.0), 0.0), std::domain_error);
  CHECK_THROWS_AS(model_laplacian_of_r(make_model(2, 1.0), 3.5), std::domain_error);
  CHECK_THROWS_AS(make_model(1, 0.0), std::invalid_argument);
}

TEST_CASE("unit sphere areas", "[model]") {
  CHECK(unit_sphere_area(2) == Approx(2.0 * pi).epsilon(1e-14));
  CHECK(unit_sphere_area(3) == Approx(4.0 * pi).epsilon(1e-14));
  CHECK(unit_sphere_area(4) == Approx(2.0 * pi * pi).epsilon(1e-14));
  CHECK(unit_sphere_area(5) == Approx(8.0 * pi * pi / 3.0).epsilon(1e-14));
}

TEST_CASE("geodesic sphere areas", "[model]") {
  CHECK(model_sphere_area(make_model(2, 1.0), pi / 2) == Approx(2.0 * pi).epsilon(1e-14));
  CHECK(model_sphere_area(make_model(3, 0.0), 2.0) == Approx(16.0 * pi).epsilon(1e-14));
  CHECK(model_sphere_area(make_model(2, -1.0), 1.0) ==
        Approx(2.0 * pi * std::sinh(1.0)).epsilon(1e-14));
  // Degenerates to zero at the diameter instead of leaving a signed residue.
  CHECK(model_sphere_area(make_model(2, 1.0), pi) >= 0.0);
  CHECK(model_sphere_area(make_model(2, 1.0), pi) == Approx(0.0).margin(1e-12));
}

TEST_CASE("geodesic ball volumes", "[model]") {
  CHECK(model_ball_volume(make_model(2, 0.0), 1.0) == Approx(pi).epsilon(1e-12));
  CHECK(model_ball_volume(make_model(2, 1.0), pi) == Approx(4.0 * pi).epsilon(1e-12));
  CHECK(model_ball_volume(make_model(3, 1.0), pi / 2) == Approx(pi * pi).epsilon(1e-12));
  CHECK(model_ball_volume(make_model(3, 0.0), 2.0) ==
        Approx(4.0 / 3.0 * pi * 8.0).epsilon(1e-12));

  // Hyperbolic ball checked against a brute-force trapezoid quadrature.
  const ModelSpace h3 = make_model(3, -1.0);
  const double ref = oracles::trapezoid(
      [&](double t) { return 4.0 * pi * plap::sqr(std::sinh(t)); }, 0.0, 2.0, 200000);
  CHECK(model_ball_volume(h3, 2.0) == Approx(ref).epsilon(1e-9));
}

TEST_CASE("total volumes of positively curved models", "[model]") {
  CHECK(model_total_volume(make_model(2, 1.0)) == Approx(4.0 * pi).epsilon(1e-12));
  CHECK(model_total_volume(make_model(3, 1.0)) == Approx(2.0 * pi * pi).epsilon(1e-12));
  CHECK(model_total_volume(make_model(2, 4.0)) == Approx(pi).epsilon(1e-12));
  CHECK_THROWS_AS(model_total_volume(make_model(2, 0.0)), std::domain_error);
}

TEST_CASE("ball volume derivative recovers sphere area", "[model]") {
  for (double K : {-1.0, 0.0, 1.0}) {
    const ModelSpace m = make_model(3, K);
    for (double r : {0.5, 1.0, 1.5}) {
      const double dv =
          d1_richardson([&](double x) { return model_ball_volume(m, x); }, r, 1e-3);
      CHECK(dv == Approx(model_sphere_area(m, r)).epsilon(1e-8));
    }
  }
}

TEST_CASE("volume symmetry about the equator for K > 0", "[model]") {
  for (int n : {2, 3, 4}) {
    const ModelSpace m = make_model(n, 2.0);
    const double diam = model_diameter(m);
    const double total = model_total_volume(m);
    for (double frac : {0.2, 0.35, 0.5}) {
      const double r = frac * diam;
      CHECK(model_ball_volume(m, r) + model_ball_volume(m, diam - r) ==
            Approx(total).epsilon(1e-10));
    }
  }
}

TEST_CASE("ball volume is continuous in curvature at K = 0", "[model]") {
  const double r = 1.3;
  for (int n : {2, 4}) {
    const double flat = model_ball_volume(make_model(n, 0.0), r);
    CHECK(model_ball_volume(make_model(n, 1e-10), r) == Approx(flat).epsilon(1e-9));
    CHECK(model_ball_volume(make_model(n, -1e-10), r) == Approx(flat).epsilon(1e-9));
  }
}
