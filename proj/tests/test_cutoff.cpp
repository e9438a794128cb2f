#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hconv/cutoff.hpp"

using namespace hconv;

TEST_CASE("build_cutoff: the four conditions certify at every knot") {
  CutoffFunction phi = build_cutoff(0.2);
  CHECK(phi.evaluate(0.0) == 0.0);
  CHECK(phi.evaluate(2.0) == 1.0);
  CHECK(phi.evaluate(-0.5) == -0.5);
  CHECK(phi.evaluate(2.7) == 1.0);

  CutoffCertificate cert = phi.certify();
  CHECK(cert.ok);
  CHECK(cert.min_margin >= 0.0);
  CHECK(cert.min_dphi >= 0.0);
  CHECK(cert.max_dphi <= 1.0);
  CHECK(cert.max_second_derivative <= 1e-12);
  CHECK(cert.max_identity_defect == 0.0);
  CHECK(cert.max_plateau_defect == 0.0);

  // phi'(x) e^{-2(phi(x)-x)} <= 1 at all knots, and phi(x) = x is the
  // equality anchor below 0.
  for (const auto& k : phi.knots) {
    CHECK(k.dphi * std::exp(-2.0 * (k.phi - k.x)) <= 1.0 + 1e-15);
    if (k.x <= 0.0) {
      CHECK(k.phi == k.x);
      CHECK(k.margin == 0.0);
    }
    if (k.x >= 0.0) CHECK(k.phi <= k.x + 1e-15);  // phi below the identity
  }
}

TEST_CASE("build_cutoff: certification stable under step halving") {
  CutoffFunction fine = build_cutoff(0.2, 5e-4);
  CutoffCertificate cert = fine.certify();
  CHECK(cert.ok);
  CHECK(cert.min_margin >= -1e-10);
  // Interval padding |phi''| step/2 shrinks with the step.
  CutoffFunction coarse = build_cutoff(0.2, 1e-3);
  CHECK(fine.certify().min_padded_margin >= coarse.certify().min_padded_margin - 1e-10);
}

TEST_CASE("build_cutoff: parameter validation and corrupted knots") {
  CHECK_THROWS(build_cutoff(0.0));
  CHECK_THROWS(build_cutoff(0.5));
  CHECK_THROWS(build_cutoff(-0.1));
  CHECK_THROWS(build_cutoff(0.2, 2e-3));  // step above the certification grid

  CutoffFunction phi = build_cutoff(0.25);
  phi.knots[2500].dphi = 1.5;  // violates phi' <= 1 and the margin
  CutoffCertificate cert = phi.certify();
  CHECK_FALSE(cert.ok);
  CHECK(cert.violating_knot == 2500);
  CHECK(cert.message.find("knot") != std::string::npos);
}

TEST_CASE("phi_n: exact shift") {
  CutoffFunction phi = build_cutoff(0.2);
  for (double x : {-0.7, 0.0, 0.3, 1.0, 1.9, 2.0, 2.5}) {
    CHECK(phi_n(phi, 0, x) == doctest::Approx(phi.evaluate(x)).epsilon(1e-15));
  }
  for (int n : {0, 1, 3, 7}) {
    CHECK(phi_n(phi, n, double(n)) == doctest::Approx(double(n)).epsilon(1e-15));
    CHECK(phi_n(phi, n, n + 2.0) == doctest::Approx(n + 1.0).epsilon(1e-15));
    CHECK(phi_n(phi, n, n - 5.0) == doctest::Approx(n - 5.0).epsilon(1e-15));
    CHECK(phi_n(phi, n, n + 9.0) == doctest::Approx(n + 1.0).epsilon(1e-15));
  }
}

TEST_CASE("build_hn: exact regimes and collar flags") {
  CutoffFunction phi = build_cutoff(0.2);
  ConformalMetricField base = equidistant_disk_field(512, 1.02, 1.0);

  SUBCASE("u <= n cells carry h_n = h; complement is exactly n+1") {
    HnField hn = build_hn(base, phi, 2);
    const Chart& ch = base.chart;
    long interior = 0, complement = 0;
    for (int j = 0; j < ch.ny; ++j)
      for (int i = 0; i < ch.nx; ++i) {
        if (base.masked(i, j)) {
          if (base.u(i, j) <= 2.0) {
            CHECK(std::abs(hn.field.north.u(i, j) - base.u(i, j)) < 1e-14);
            ++interior;
          }
        } else {
          CHECK(hn.field.north.u(i, j) == 3.0);
          ++complement;
        }
      }
    CHECK(interior > 1000);
    CHECK(complement > 1000);
    // Monotone: h_n <= h on U.  Exact knot-wise (phi(x) <= x for x >= 0);
    // cell-wise up to the ~1e-12 overshoot of the Hermite evaluation at the
    // bridge junction.
    for (const auto& k : phi.knots)
      if (k.x >= 0.0) CHECK(k.phi <= k.x);
    for (int j = 0; j < ch.ny; ++j)
      for (int i = 0; i < ch.nx; ++i)
        if (base.masked(i, j)) CHECK(hn.field.north.u(i, j) <= base.u(i, j) + 2e-11);
  }

  SUBCASE("eventual stationarity on a compact submask") {
    double sup_u = 0.0;
    const Chart& ch = base.chart;
    for (int j = 0; j < ch.ny; ++j)
      for (int i = 0; i < ch.nx; ++i)
        if (base.masked(i, j) && std::abs(ch.cz(i, j)) <= 0.5)
          sup_u = std::max(sup_u, base.u(i, j));
    for (int n : {int(std::ceil(sup_u)), 5}) {
      HnField hn = build_hn(base, phi, n);
      for (int j = 0; j < ch.ny; ++j)
        for (int i = 0; i < ch.nx; ++i)
          if (base.masked(i, j) && std::abs(ch.cz(i, j)) <= 0.5)
            CHECK(std::abs(hn.field.north.u(i, j) - base.u(i, j)) < 1e-14);
    }
  }

  SUBCASE("collar flags appear when u < n+2 next to the complement") {
    ConformalMetricField coarse = equidistant_disk_field(128, 1.02, 1.0);
    HnField hn0 = build_hn(coarse, phi, 0);
    CHECK(hn0.collar_flags.empty());
    HnField hn5 = build_hn(coarse, phi, 5);
    CHECK(!hn5.collar_flags.empty());
    CHECK_THROWS(curvature_report(hn5, coarse, phi, 1.0 / std::cosh(1.0) / std::cosh(1.0), 0.7));
  }
}

TEST_CASE("region decomposition partitions the base chart") {
  ConformalMetricField base = equidistant_disk_field(256, 1.02, 1.0);
  for (int n : {0, 1, 4}) {
    RegionDecomposition rd = region_decomposition(base, n);
    CHECK(rd.partition_ok);
    long le_n = 0, mid = 0, gt = 0;
    for (int j = 0; j < 256; ++j)
      for (int i = 0; i < 256; ++i) {
        le_n += rd.u_le_n(i, j);
        mid += rd.u_n_to_np1(i, j);
        gt += rd.u_gt_np1(i, j);
        CHECK(int(rd.u_le_np1(i, j)) == int(rd.u_le_n(i, j)) + int(rd.u_n_to_np1(i, j)));
      }
    CHECK(le_n + mid + gt == 256 * 256);
    CHECK(gt > 0);  // contains the complement of U
  }
}

TEST_CASE("kmax_estimate") {
  CutoffFunction phi = build_cutoff(0.2);

  SUBCASE("C = 0 reduces to sup (1 - phi') e^{-2 phi}") {
    double expected = 0.0;
    for (const auto& k : phi.knots)
      if (k.x >= 0.0 && k.x <= 2.0)
        expected = std::max(expected, (1.0 - k.dphi) * std::exp(-2.0 * k.phi));
    CHECK(kmax_estimate(0.4, 0.0, phi) == doctest::Approx(expected).epsilon(1e-12));
  }

  SUBCASE("strictly increasing in C") {
    double k0 = kmax_estimate(0.4, 0.0, phi);
    double k1 = kmax_estimate(0.4, 0.5, phi);
    double k2 = kmax_estimate(0.4, 1.0, phi);
    CHECK(k1 > k0);
    CHECK(k2 > k1);
  }

  CHECK_THROWS(kmax_estimate(0.0, 1.0, phi));
  CHECK_THROWS(kmax_estimate(0.4, -1.0, phi));
}

TEST_CASE("curvature report: three regimes on the equidistant disk datum") {
  CutoffFunction phi = build_cutoff(0.2);
  ConformalMetricField base = equidistant_disk_field(1024, 1.02, 1.0);
  const double K_exact = -1.0 / (std::cosh(1.0) * std::cosh(1.0));
  const double eps = -K_exact;  // K = -sech^2(1) = -eps exactly
  const double C = measured_gradient_bound(base);
  // True sup ||du||_h = sech(1) ~ 0.648; the measurement may overshoot
  // slightly (safe direction for the K_max bound).
  CHECK(C < 0.75);
  CHECK(C > 0.6);

  for (int n : {0, 1, 3}) {
    HnField hn = build_hn(base, phi, n);
    CHECK(hn.collar_flags.empty());
    ApproxCurvatureReport rep = curvature_report(hn, base, phi, eps, C, K_exact);
    CAPTURE(n);
    CHECK(rep.pass);
    // inf u = log cosh 1 > 0: the u <= 0 region is empty for n = 0.
    if (n == 0) CHECK(rep.interior.cells == 0);
    else CHECK(rep.interior.cells > 1000);
    CHECK(rep.transition.cells > 100);
    CHECK(rep.plateau.cells > 10000);
    CHECK(rep.interior.max_abs_err < 1e-3);
    CHECK(rep.plateau.max_abs_err < 1e-4);
    CHECK(rep.transition.min_K >= -1.0 + eps - 1e-3);
    CHECK(rep.transition.max_K <= rep.kmax + 1e-3);
    CHECK(rep.first_term_min >= -1.0 + eps - 1e-3);
    CHECK(rep.first_term_max <= 1e-6);
    // The n = 0 plateau value is e^{-2}.
    if (n == 0) CHECK(std::abs(rep.plateau.min_K - 0.1353352832366127) < 1e-4);
  }
}

TEST_CASE("kmax bound dominates the measured transition maximum") {
  CutoffFunction phi = build_cutoff(0.2);
  ConformalMetricField base = equidistant_disk_field(1024, 1.02, 1.0);
  const double K_exact = -1.0 / (std::cosh(1.0) * std::cosh(1.0));
  const double C = measured_gradient_bound(base);
  for (int n : {0, 2}) {
    HnField hn = build_hn(base, phi, n);
    ApproxCurvatureReport rep = curvature_report(hn, base, phi, -K_exact, C, K_exact);
    CHECK(rep.transition.max_K <= rep.kmax + 1e-3);
  }
}
