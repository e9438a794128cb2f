#pragma once

// The certified cut-off function phi, the shifted functions phi_n, the
// approximating full-sphere metrics h_n, and the three-regime curvature
// report for the approximation sequence.
//
// phi satisfies, on knots at step <= 1e-3 over [-1, 3]:
//   (1) phi(x) = x for x <= 0,
//   (2) phi(x) = 1 for x >= 2,
//   (3) phi' in [0,1], phi'' <= 0 on [0,2],
//   (4) phi'(x) <= e^{2(phi(x)-x)} on [0,2]  (margin >= 0 at every knot).

#include <optional>
#include <string>
#include <vector>

#include "hconv/conformal.hpp"

namespace hconv {

struct CutoffKnot {
  double x = 0.0, phi = 0.0, dphi = 0.0;
  double margin = 0.0;  // e^{2(phi-x)} - phi'
};

struct CutoffCertificate {
  bool ok = false;
  double min_margin = 0.0;
  double min_padded_margin = 0.0;  // margin - |phi''| * step / 2
  double min_dphi = 0.0, max_dphi = 0.0;
  double max_second_derivative = 0.0;  // finite-difference phi'' on [0,2]
  double max_identity_defect = 0.0;    // |phi(x)-x| on x<=0
  double max_plateau_defect = 0.0;     // |phi(x)-1| on x>=2
  int violating_knot = -1;
  std::string message = "ok";
};

struct CutoffFunction {
  std::vector<CutoffKnot> knots;  // uniform step over [-1, 3]
  double bridge_epsilon = 0.0;
  double step = 1e-3;

  /// Evaluation from the knots (cubic Hermite); exact x / 1 outside [0,2].
  double evaluate(double x) const;
  double derivative(double x) const;

  CutoffCertificate certify(double second_derivative_tol = 1e-12) const;
};

/// Builds the concrete cut-off: the identity up to 1-eps, then a concave
/// quintic-smoothstep bridge in slope space reaching 1 at 1+eps.  The
/// certificate is checked before returning; a failure aborts with the
/// violating knot.
CutoffFunction build_cutoff(double bridge_epsilon, double step = 1e-3);

/// phi_n(x) = n + phi(x - n).
double phi_n(const CutoffFunction& phi, int n, double x);

/// Full-sphere approximating metric h_n built from a base datum (U, h): log
/// density phi_n(u) on U, exactly n+1 on the complement.  The base field must
/// be masked inside the unit disk of its chart.
struct HnField {
  SphereField field;
  int n = 0;
  /// Masked cells adjacent to the complement with u < n+2 (h_n smoothness
  /// across the boundary is not certified at grid resolution there).
  std::vector<std::pair<int, int>> collar_flags;
};

HnField build_hn(const ConformalMetricField& base, const CutoffFunction& phi, int n);

/// The region decomposition of the sphere used by the injectivity-radius
/// argument; masks live on the base chart, the opposite hemisphere belongs
/// entirely to the n+1 < u region (it is in the complement of U).
struct RegionDecomposition {
  GridB u_le_n;        // x in U, u <= n
  GridB u_n_to_np1;    // x in U, n < u <= n+1
  GridB u_le_np1;      // union of the two above
  GridB u_gt_np1;      // complement of U plus u > n+1
  bool partition_ok = true;
};

RegionDecomposition region_decomposition(const ConformalMetricField& base, int n);

/// Upper bound on the curvature of h_n in the transition region:
///   K_max = sup over bridge knots of (1-phi') e^{-2 phi} + e^{2(x-phi)} (-phi'') C^2,
/// with e^{-2 phi_n(u)} <= e^{-2 phi(x)} and u - phi_n(u) = x - phi(x) <= 1
/// certified on the knots.  The first term of the curvature expansion is
/// nonpositive and does not contribute to the upper bound.
double kmax_estimate(double epsilon, double gradient_bound, const CutoffFunction& phi);

struct RegionStats {
  double min_K = 0.0, max_K = 0.0;
  double max_abs_err = 0.0;  // vs the regime's expected value, where one exists
  long cells = 0;
};

struct CurvatureReportEntry {
  ChartKind chart;
  int i = 0, j = 0;
  double K = 0.0;
  std::string what;
};

struct ApproxCurvatureReport {
  int n = 0;
  double epsilon = 0.0, gradient_bound = 0.0, kmax = 0.0;
  RegionStats interior;    // u <= n: K_n = K
  RegionStats transition;  // n < u < n+2: window [-1+eps - tol, kmax + tol]
  RegionStats plateau;     // u >= n+2 and complement: K_n = e^{-2(n+1)}
  double first_term_min = 0.0, first_term_max = 0.0;  // transition cells
  std::vector<CurvatureReportEntry> violations;
  bool pass = false;
};

struct ApproxTolerances {
  double interior = 1e-3;
  double plateau = 1e-4;
  double window = 1e-3;
};

/// Computes K_n on both charts, classifies cells by the base u, and verifies
/// the three-regime description.  `expected_K`, when given, is the exact base
/// curvature (constant-curvature data); otherwise the discrete base curvature
/// is the reference.  Collar flags on the h_n field must be acknowledged.
ApproxCurvatureReport curvature_report(const HnField& hn, const ConformalMetricField& base,
                                       const CutoffFunction& phi, double epsilon,
                                       double gradient_bound,
                                       std::optional<double> expected_K = std::nullopt,
                                       const ApproxTolerances& tol = {},
                                       bool acknowledge_collar_flags = false);

/// Empirical sup of ||du||_h over the base field (the constant C fed to
/// kmax_estimate when no analytic bound is available).
double measured_gradient_bound(const ConformalMetricField& base);

}  // namespace hconv
