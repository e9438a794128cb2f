#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hconv/hyp3.hpp"
#include "test_util.hpp"

using namespace hconv;
using namespace hconv::testutil;

TEST_CASE("distance: identity, radial closed form, isometry invariance") {
  HPoint o = HPoint::origin();
  CHECK(distance(o, o) == doctest::Approx(0.0).epsilon(1e-12));

  // Poincare-ball point (0,0,0.5) is at hyperbolic distance 2 artanh(1/2) = ln 3.
  ModelMap mm;
  HPoint p = mm.from_poincare(Vec3(0, 0, 0.5));
  CHECK(distance(o, p) == doctest::Approx(std::log(3.0)).epsilon(1e-12));

  auto g = rng();
  for (int k = 0; k < 50; ++k) {
    HPoint a = random_point(g), b = random_point(g);
    HIsometry L = HIsometry::random(g);
    CHECK(std::abs(distance(L.apply(a), L.apply(b)) - distance(a, b)) < 1e-8);
  }

  Vec4 bad(1.0, std::nan(""), 0.0, 0.0);
  bad[0] = std::sqrt(2.0);
  CHECK_THROWS(HPoint(bad));
}

TEST_CASE("Minkowski form preserved by isometry products and inverses") {
  auto g = rng(7);
  for (int k = 0; k < 40; ++k) {
    HIsometry a = HIsometry::random(g), b = HIsometry::random(g);
    CHECK(a.compose(b).lorentz_residual() < 1e-8);
    CHECK(a.inverse().lorentz_residual() < 1e-8);
    CHECK((a.compose(a.inverse()).L - Mat4::Identity()).cwiseAbs().maxCoeff() < 1e-8);
    CHECK(a.L(0, 0) > 0.0);
  }
}

TEST_CASE("model maps round-trip") {
  auto g = rng(11);
  ModelMap mm;
  for (int k = 0; k < 50; ++k) {
    HPoint p = random_point(g, 2.0);
    CHECK(mm.round_trip_residual(p) < 1e-9);
    HPoint q = mm.from_klein(mm.to_klein(p));
    CHECK((q.x - p.x).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("visual_log_density: special angles") {
  HPoint o = HPoint::origin();

  SUBCASE("delta = 0 gives y = 0 for all xi") {
    auto g = rng(3);
    for (int k = 0; k < 10; ++k) CHECK(visual_log_density(random_ideal(g), o, o) == 0.0);
  }

  SUBCASE("theta = 0: ray through m1 gives y = delta") {
    double delta = 0.7;
    HPoint m1 = HIsometry::translation(Vec3(1, 0, 0), delta).apply(o);
    IdealPoint xi(Vec3(1, 0, 0));
    CHECK(visual_log_density(xi, o, m1) == doctest::Approx(delta).epsilon(1e-12));
  }

  SUBCASE("theta = pi/2, delta = 1 gives -log cosh 1") {
    HPoint m1 = HIsometry::translation(Vec3(0, 0, 1), 1.0).apply(o);
    IdealPoint xi(Vec3(1, 0, 0));
    CHECK(visual_log_density(xi, o, m1) ==
          doctest::Approx(-std::log(std::cosh(1.0))).epsilon(1e-12));
  }
}

TEST_CASE("visual_log_density_dtheta: closed form and finite differences") {
  CHECK(visual_log_density_dtheta(0.0, 0.5) == 0.0);
  CHECK(visual_log_density_dtheta(kPi / 2, 1.0) == doctest::Approx(-std::tanh(1.0)).epsilon(1e-12));
  CHECK_THROWS(visual_log_density_dtheta(0.3, 0.0));
  CHECK_THROWS(visual_log_density_dtheta(0.3, -1.0));

  // Matches finite differences of eq. y(theta) = -log(cosh d - cos t sinh d).
  auto y = [](double t, double d) { return -std::log(std::cosh(d) - std::cos(t) * std::sinh(d)); };
  const double h = 1e-5;
  for (double d : {0.05, 0.3, 1.0, 2.5}) {
    for (double t = 0.1; t < kPi; t += 0.23) {
      double fd = (y(t + h, d) - y(t - h, d)) / (2 * h);
      double an = visual_log_density_dtheta(t, d);
      CHECK(std::abs(an - fd) < 1e-6 * (1.0 + std::abs(an)));
    }
  }
}

TEST_CASE("busemann_rate: anchors, monotonicity, limit") {
  HPoint o = HPoint::origin();
  auto g = rng(5);

  SUBCASE("m1 = m0 gives 1 for all t") {
    IdealPoint xi = random_ideal(g);
    for (double t : {0.0, 0.5, 3.0}) CHECK(busemann_rate(o, o, xi, t) == doctest::Approx(1.0));
  }

  SUBCASE("t = 0 gives e^delta") {
    double delta = 0.9;
    HPoint m1 = HIsometry::translation(Vec3(0, 1, 0), delta).apply(o);
    IdealPoint xi(Vec3(1, 0, 0));
    CHECK(busemann_rate(m1, o, xi, 0.0) == doctest::Approx(std::exp(delta)).epsilon(1e-12));
  }

  SUBCASE("delta = 1, theta = pi/2, t = 20 gives cosh 1") {
    HPoint m1 = HIsometry::translation(Vec3(0, 0, 1), 1.0).apply(o);
    IdealPoint xi(Vec3(1, 0, 0));
    CHECK(std::abs(busemann_rate(m1, o, xi, 20.0) - std::cosh(1.0)) < 1e-6);
  }

  SUBCASE("monotone in t toward the limit; limit matches e^{-y} at t = 30") {
    for (int k = 0; k < 20; ++k) {
      HPoint m1 = random_point(g);
      IdealPoint xi = random_ideal(g);
      double prev = busemann_rate(m1, o, xi, 0.0);
      for (double t = 0.5; t <= 10.0; t += 0.5) {
        double cur = busemann_rate(m1, o, xi, t);
        CHECK(cur <= prev + 1e-12);
        prev = cur;
      }
      double limit = busemann_rate(m1, o, xi, 30.0);
      CHECK(std::abs(limit - std::exp(-visual_log_density(xi, o, m1))) < 1e-6);
    }
  }

  CHECK_THROWS(busemann_rate(o, o, IdealPoint(Vec3(1, 0, 0)), -1.0));
}

TEST_CASE("visual log-density cocycle along a geodesic") {
  HPoint o = HPoint::origin();
  auto g = rng(13);
  HPoint m1 = HIsometry::translation(Vec3(1, 0, 0), 0.5).apply(o);
  HPoint m2 = HIsometry::translation(Vec3(1, 0, 0), 1.3).apply(o);
  for (int k = 0; k < 40; ++k) {
    IdealPoint xi = random_ideal(g);
    double y01 = visual_log_density(xi, o, m1);
    double y12 = visual_log_density(xi, m1, m2);
    double y02 = visual_log_density(xi, o, m2);
    CHECK(std::abs(y02 - (y01 + y12)) < 1e-7);
  }
}

TEST_CASE("isometries act compatibly on ideal points") {
  auto g = rng(17);
  for (int k = 0; k < 20; ++k) {
    HIsometry L = HIsometry::random(g);
    HPoint m0 = random_point(g), m1 = random_point(g);
    IdealPoint xi = random_ideal(g);
    // Visual log-density is equivariant.
    double before = visual_log_density(xi, m0, m1);
    double after = visual_log_density(L.apply(xi), L.apply(m0), L.apply(m1));
    CHECK(std::abs(before - after) < 1e-9);
  }
  // translate_to_origin does what it says.
  for (int k = 0; k < 10; ++k) {
    HPoint p = random_point(g, 1.5);
    HPoint q = HIsometry::translate_to_origin(p).apply(p);
    CHECK(distance(q, HPoint::origin()) < 1e-9);
  }
}

TEST_CASE("ideal point chart coordinates are consistent") {
  auto g = rng(19);
  for (int k = 0; k < 30; ++k) {
    IdealPoint xi = random_ideal(g);
    if (xi.v[2] < -0.99) continue;  // chart coordinate blows up near the south pole
    IdealPoint back = IdealPoint::from_chart(xi.chart_coords);
    CHECK((back.v - xi.v).norm() < 1e-9);
  }
}
