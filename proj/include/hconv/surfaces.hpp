#pragma once

// Parameterized surfaces in H^3: fundamental forms and the shape operator,
// Gauss-Codazzi residuals, the hyperbolic Gauss map with its quasiconformal
// dilatation, the parallel-surface (tube) area factor, principal-curvature
// window checks, and boundary-data assembly.
//
// Conventions: the unit normal is oriented toward the exterior of the convex
// side, so II = I B is positive semi-definite on locally convex surfaces and
// the Gauss equation reads det B = K + 1 (fixed by the horosphere:
// det B = 1, K = 0).

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hconv/chart.hpp"
#include "hconv/hyp3.hpp"

namespace hconv {

/// Pointwise jet of an immersion into the hyperboloid.
struct SurfaceJet {
  Vec4 X = Vec4::Zero();
  Vec4 Xs = Vec4::Zero(), Xt = Vec4::Zero();
  Vec4 Xss = Vec4::Zero(), Xst = Vec4::Zero(), Xtt = Vec4::Zero();
};

/// Sampled parameterized immersion.  Analytic families provide exact jets;
/// pure grids fall back to centered differences (boundary nodes excluded).
struct SurfacePatch {
  std::string family = "sampled";
  double s0 = 0, s1 = 1, t0 = 0, t1 = 1;
  int ns = 0, nt = 0;                              // node counts (node-centered)
  std::vector<Vec4> X;                             // row-major (i + ns*j), size ns*nt
  std::function<SurfaceJet(double, double)> jets;  // null for sampled patches
  HPoint interior_ref;                             // a point on the concave side
  bool periodic_t = false;                         // t wraps (t1 identifies with t0)

  double ds() const { return (s1 - s0) / (ns - 1); }
  double dt() const { return (t1 - t0) / (nt - 1); }
  double sc(int i) const { return s0 + i * ds(); }
  double tc(int j) const { return t0 + j * dt(); }
  const Vec4& node(int i, int j) const { return X[size_t(j) * ns + i]; }

  static SurfacePatch from_samples(std::vector<Vec4> nodes, int ns, int nt, double s0, double s1,
                                   double t0, double t1, const HPoint& interior_ref);

  // Registered analytic families.
  static SurfacePatch geodesic_sphere(double r, int ns, int nt, double theta0 = 0.15,
                                      double theta1 = kPi - 0.15, double phi0 = 0.0,
                                      double phi1 = 2.0 * kPi);
  static SurfacePatch horosphere(double half_extent, int ns, int nt);
  static SurfacePatch equidistant(double d, double rho1, int ns, int nt, double rho0 = 0.05);
  /// Radial graph over the sphere: R(nu) = r + amp * nu_x nu_z.
  static SurfacePatch perturbed_sphere(double r, double amp, int ns, int nt,
                                       double theta0 = 0.3, double theta1 = kPi - 0.3);
};

struct FormSample {
  Eigen::Matrix2d I = Eigen::Matrix2d::Zero();
  Eigen::Matrix2d II = Eigen::Matrix2d::Zero();
  Eigen::Matrix2d III = Eigen::Matrix2d::Zero();
  Eigen::Matrix2d B = Eigen::Matrix2d::Zero();
  double kappa1 = 0, kappa2 = 0;  // kappa1 >= kappa2
  Vec4 normal = Vec4::Zero();
  bool valid = false;
};

struct FundamentalForms {
  int ns = 0, nt = 0;
  std::vector<FormSample> samples;
  long excluded = 0;               // near-degenerate samples
  double max_II_consistency = 0;   // |II - I B|
  double max_III_consistency = 0;  // |III - B^T I B|
  double max_selfadjoint = 0;      // |I B - (I B)^T|

  const FormSample& at(int i, int j) const { return samples[size_t(j) * ns + i]; }
};

/// Forms per sample; principal curvatures as eigenvalues of B.  `use_jets`
/// can force the sampled (finite-difference) path on analytic patches.
FundamentalForms fundamental_forms(const SurfacePatch& patch, bool use_jets = true);

/// Intrinsic curvature from the first fundamental form alone (Brioschi with
/// centered differences on the E,F,G grids); independent of the shape
/// operator path.
struct IntrinsicCurvature {
  GridD K;
  GridB valid;
};
IntrinsicCurvature intrinsic_curvature_brioschi(const FundamentalForms& forms, double ds, double dt);

struct GaussCodazzi {
  GridD gauss_res;    // |det B - (K + 1)|
  GridD codazzi_res;  // I-norm of (nabla_s B)(t) - (nabla_t B)(s)
  GridB valid;
  double max_gauss = 0, max_codazzi = 0;
};

GaussCodazzi gauss_codazzi_residual(const FundamentalForms& forms, const IntrinsicCurvature& K,
                                    double ds, double dt);

struct GaussMapField {
  int ns = 0, nt = 0;
  std::vector<IdealPoint> G;
  GridD dilatation;  // (1 + kappa1)/(1 + kappa2) >= 1
  GridB valid;
  double sup_dilatation = 1.0;
};

/// Hyperbolic Gauss map G = endpoint of the exterior normal ray, with the
/// quasiconformal dilatation from dG = Id + B.  Throws if some principal
/// curvature is <= -1 (the identification degenerates).
GaussMapField gauss_map(const SurfacePatch& patch, const FundamentalForms& forms);

/// Area-distortion factor of the distance-t normal offset:
///   cosh^2(t) + cosh(t) sinh(t) tr(B) + sinh^2(t) det(B).
double parallel_area_factor(const Eigen::Matrix2d& B, double t);

/// Shape operator of the distance-t offset of an umbilic sample:
/// kappa_t = (kappa + tanh t)/(1 + kappa tanh t).
double offset_principal_curvature(double kappa, double t);

enum class WindowMode { ConvexWindow, NearUmbilic };

struct WindowReport {
  long total = 0, passed = 0;
  double min_kappa = 0, max_kappa = 0;
  double max_umbilic_defect = 0;  // sup |kappa_i - 1| where |K_intrinsic| <= K0
  long near_flat_cells = 0;
  bool all_pass = false;
};

struct WindowParams {
  double lo = 0.0, hi = 0.0;
  const IntrinsicCurvature* intrinsic = nullptr;  // NearUmbilic statistics
  double K0 = 0.0;
};

WindowReport curvature_window_check(const FundamentalForms& forms, WindowMode mode,
                                    const WindowParams& params);

// ---------------------------------------------------------------------------
// Boundary data assembly
// ---------------------------------------------------------------------------

struct BoundaryDataSample {
  Vec3 dir;        // Gauss image on the sphere
  double u = 0.0;  // log-density of the pushed-forward metric vs c1
  double dilatation = 1.0;
  int i = 0, j = 0;
};

struct BoundaryData {
  std::vector<BoundaryDataSample> samples;
  double coverage_fraction = 0.0;  // image area / 4 pi
  double sup_dilatation = 1.0;
};

/// U = Gauss image of the patch, h = pushforward of the induced metric
/// through G as a log-density vs c1.  A Gauss-map fold (two samples mapping
/// within chordal 1e-7 from distant parameters) is an error.
BoundaryData boundary_data_assembly(const SurfacePatch& patch, const FundamentalForms& forms,
                                    const GaussMapField& gmap);

}  // namespace hconv
