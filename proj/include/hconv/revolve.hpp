#pragma once

// Constructive realization of rotationally symmetric metrics
// d rho^2 + f(rho)^2 d theta^2 as surfaces of revolution in H^3, in Fermi
// cylindrical coordinates (r, theta, z) around a geodesic axis with ambient
// metric dr^2 + sinh^2 r d theta^2 + cosh^2 r dz^2.  Matching the theta
// coefficient forces r = arsinh(f); the isometry condition then reads
// r'^2 + cosh^2(r) z'^2 = 1, i.e. z' = sqrt(1 + f^2 - f'^2)/(1 + f^2).

#include <string>
#include <vector>

#include "hconv/surfaces.hpp"

namespace hconv {

/// Rotationally symmetric metric given by arclength samples of f and f' on
/// [0, L], uniformly spaced.  f(0) = 0 describes a closed cap, f(0) > 0 an
/// annular band.
struct ProfileMetric {
  std::vector<double> rho, f, df;

  double length() const { return rho.back(); }
  double spacing() const { return rho[1] - rho[0]; }

  void validate() const;

  /// Admissibility f'^2 <= 1 + f^2; equality is allowed on flagged samples
  /// (planar contact), a strict violation is an error in realize().
  struct Admissibility {
    bool ok = true;
    double first_violation_rho = -1.0;
    std::vector<int> equality_samples;
  };
  Admissibility admissibility(double tol = 1e-10) const;

  static ProfileMetric from_function(const std::function<double(double)>& f,
                                     const std::function<double(double)>& df, double L, int n);
  static ProfileMetric sphere(double r, int n);       // f = sinh(r) sin(rho/sinh r)
  static ProfileMetric horosphere(double L, int n);   // f = rho
  static ProfileMetric equidistant(double d, double L, int n);  // f = cosh(d) sinh(rho/cosh d)
  static ProfileMetric plane(double L, int n);        // f = sinh(rho)
};

struct RevolutionSurface {
  ProfileMetric profile;
  std::vector<double> r, z;            // Fermi coordinates per sample
  double isometry_residual = 0.0;      // max |r'^2 + cosh^2(r) z'^2 - 1| at samples
  double integration_consistency = 0;  // max |dz_fd - z'| after quadrature
  std::vector<int> planar_contact;     // samples where f'^2 = 1 + f^2 (z' = 0)

  /// Analytic-jet patch over [rho_first, rho_last] x [0, 2pi], excluding the
  /// degenerate cap samples (one-sided by construction of the range).
  SurfacePatch patch(int n_theta) const;
};

/// Realizes the profile: r = arsinh f, z by classical 4th-order quadrature at
/// the fixed sample step.  Throws naming the first violating rho when the
/// admissibility invariant fails, or when f is not positive on (0, L).
RevolutionSurface realize(const ProfileMetric& profile);

struct RoundTripReport {
  double sup_residual = 0.0;          // induced metric vs d rho^2 + f^2 d theta^2 (exact jets)
  double sup_residual_sampled = 0.0;  // same via centered differences of the node samples
  double l2_residual = 0.0;
  double min_kappa2 = 0.0;            // convexity monitor
  long nonconvex_samples = 0;
};

RoundTripReport round_trip_check(const ProfileMetric& profile, const RevolutionSurface& surface,
                                 int n_theta = 64);

enum class SurfaceClass { Sphere, Horosphere, Equidistant, Plane, Generic };

struct Classification {
  SurfaceClass kind = SurfaceClass::Generic;
  double parameter = 0.0;  // radius (sphere) or distance (equidistant)
  double kappa_mean = 0.0;
  double umbilicity_defect = 0.0;
};

const char* to_string(SurfaceClass c);

/// Classification by principal-curvature statistics: umbilic with kappa > 1
/// is a sphere of radius arcoth(kappa), kappa = 1 (1e-5) a horosphere,
/// kappa in (0,1) an equidistant at distance artanh(kappa), kappa = 0 a
/// plane; anything else is generic.
Classification classify(const RevolutionSurface& surface, int n_theta = 64);

}  // namespace hconv
