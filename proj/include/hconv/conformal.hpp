#pragma once

// Conformal metric fields h = e^{2u} c1 on chart grids, curvature by
// conformal change of metric, gradient norms, the u = v + w + x factor
// decomposition against the hyperbolic and Thurston metrics of a quasidisk,
// and the short-loop (injectivity radius) falsifier on full-sphere fields.
//
// Sign conventions follow the positive Laplacian Delta_h u = -tr(D du), so
// K_bar = e^{-2u}(Delta_{c1} u + K) and u == 0 gives K == 1.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hconv/chart.hpp"
#include "hconv/domains.hpp"

namespace hconv {

/// Log-density grid u of h = e^{2u} c1 over a chart, with a domain mask.
/// The background metric c1 is the visual metric of the hyperboloid origin.
struct ConformalMetricField {
  Chart chart;
  GridD u;
  GridB mask;

  ConformalMetricField() = default;
  ConformalMetricField(const Chart& c, GridD u_, GridB mask_);

  bool masked(int i, int j) const { return mask(i, j) != 0; }
  void validate() const;
};

struct CurvatureField {
  GridD K;
  GridB valid;
};

/// K = e^{-2u}(Delta_{c1} u + 1) by the 5-point stencil in chart coordinates,
/// with the chart's conformal factor folded in analytically.  Cells without a
/// full stencil inside the mask are excluded via valid, never extrapolated.
CurvatureField curvature(const ConformalMetricField& field);

/// Curvature of e^{2a} g where g = e^{2b} c1, using the discrete Laplacian of
/// `a` rescaled by the base density and the discrete base curvature.  Agrees
/// cell-wise with curvature() on a+b up to rounding (composition identity).
CurvatureField curvature_rel(const ConformalMetricField& a, const ConformalMetricField& base);

enum class MetricRef : std::uint8_t { H, C1, Hminus1, Thurston };

struct GradientField {
  GridD norm;
  GridB valid;
};

/// ||du|| in the requested conformal metric; the rescaling rule
/// ||du||_{e^{2a} g} = e^{-a} ||du||_g is applied analytically.  The
/// hyperbolic/Thurston references require a quasidisk attachment.
GradientField gradient_norm(const ConformalMetricField& field, MetricRef metric,
                            const QuasidiskDomain* domain = nullptr);

/// Cells within `width` of the mask boundary (reported as unreliable).
GridB collar_mask(const GridB& mask, int width);

/// Full-sphere field as a two-chart atlas.  Each chart's grid covers
/// [-extent, extent]^2 with extent > 1 so that every point of the closed
/// hemisphere disk |z| <= 1 has interior stencils; the unit disks of the two
/// charts tile the sphere (transition z -> 1/z along the equator).
struct SphereField {
  ConformalMetricField north, south;

  static SphereField sample(int resolution, double extent,
                            const std::function<double(const Vec3&)>& log_density);

  /// Log-density at an arbitrary sphere point (bicubic in the owning chart).
  double value_at(const Vec3& v) const;

  /// Integral over the sphere of fn(cell sphere point, K_cell, u_cell) against
  /// the h-area element; cells straddling the equator are weighted by the
  /// subsampled fraction of the cell inside the owning unit disk.
  double integrate_curvature() const;

  /// max |u_N(z) - u_S(1/z)| over a band around the equator (atlas
  /// cross-validation; includes interpolation error).
  double overlap_residual() const;
};

/// Total curvature minus 4*pi, relative to 4*pi.
double gauss_bonnet_defect(const SphereField& field);

// ---------------------------------------------------------------------------
// Factor decomposition u = v + w + x
// ---------------------------------------------------------------------------

struct FactorBounds {
  double sup_abs_v = 0.0, sup_abs_w = 0.0;
  double sup_dv_hm1 = 0.0, sup_dw_hm1 = 0.0, sup_dx_th = 0.0;
  int cells = 0, excluded = 0;
};

struct FactorDecomposition {
  GridD v, w, x;
  GridB valid;
  FactorBounds bounds;

  /// max |v + w + x - u| over valid cells.
  double consistency_residual(const ConformalMetricField& field) const;
};

/// v = log(h/h_{-1})/2, w = log(h_{-1}/h_Th)/2, x = log(h_Th/c1)/2, sampled on
/// the field's masked cells; cells the domain parameterization cannot cover
/// are excluded and counted.
FactorDecomposition factor_decomposition(const ConformalMetricField& field,
                                         const QuasidiskDomain& domain);

// ---------------------------------------------------------------------------
// Short-loop search
// ---------------------------------------------------------------------------

struct Loop {
  std::vector<Vec3> pts;  // closed polyline (last connects to first)
  double length = 0.0;
};

struct LoopSearchOptions {
  int seeds = 24;
  int vertices = 128;
  int max_iters = 6000;
  std::uint64_t rng_seed = 12345;
};

/// Metric length of a closed polyline in h = e^{2u} c1.
double loop_length(const SphereField& field, const std::vector<Vec3>& pts);

/// Seeded curve-shortening relaxation.  Returns locally length-minimized
/// closed loops below the budget; an empty result is evidence, not a proof.
/// Collapsing loops (length -> 0) are discarded.
std::vector<Loop> short_loop_search(const SphereField& field, double length_budget,
                                    const LoopSearchOptions& opt = {});

// ---------------------------------------------------------------------------
// Registered analytic fields (known closed-form curvature)
// ---------------------------------------------------------------------------

struct AnalyticField {
  std::string name;
  std::function<double(Complex)> u;        // log-density vs c1 in the north chart
  std::function<double(Complex)> K;        // exact curvature
  double extent = 1.0;                     // grid covers [-extent, extent]^2
  double mask_radius = 0.0;                // 0: full extent; else mask |z| <= r
};

/// The ten fields used by the curvature-operator validation suite.
std::vector<AnalyticField> registered_fields();

ConformalMetricField sample_field(const AnalyticField& f, int resolution);

struct FieldErrorStats {
  /// max |K_num - K_exact| over valid cells outside the 2-cell collar.
  double max_err = 0.0;
  /// Same, restricted to the fixed disk |z| <= shrink * field radius; used
  /// for convergence-order measurements (the collar moves with resolution).
  double max_err_interior = 0.0;
};

FieldErrorStats analytic_field_error(const AnalyticField& f, int resolution,
                                     double interior_shrink = 0.9);

/// The complete constant-curvature disk datum: U = unit chart disk
/// (a hemisphere), u = log cosh(d) + log((1+r^2)/(1-r^2)), K = -sech^2(d).
ConformalMetricField equidistant_disk_field(int resolution, double extent = 1.02,
                                            double d = 1.0);

}  // namespace hconv
