#pragma once

// Quasidisk domains on the sphere, their hyperbolic and Thurston metrics,
// ideal convex hulls in the Klein model, and the closest-point (horoball)
// projection used to compare the Thurston metric with visual metrics.
//
// All metric densities are returned as log-densities against the fixed
// spherical metric c1 (the visual metric of the hyperboloid origin).

#include <optional>
#include <vector>

#include "hconv/chart.hpp"
#include "hconv/hyp3.hpp"

namespace hconv {

/// Open round disk in the c1 spherical geometry: {v : dist(v, center) < radius}.
struct SphericalCap {
  Vec3 center{0, 0, 1};
  double radius = 0.0;

  bool contains(const Vec3& v, double slack = 0.0) const {
    return sphere_distance(center, v) < radius + slack;
  }
};

/// Log-density (vs c1) at p of the complete hyperbolic metric of the cap:
///   e^x = sin(rho) / (cos(sigma) - cos(rho)),  sigma = dist(p, center) < rho.
double cap_hyperbolic_log_density(const SphericalCap& cap, const Vec3& p);

/// Simply connected domain given by a finite power series f(z) = sum a_k z^k,
/// injective on the closed unit disk, mapping into the north chart.
class QuasidiskDomain {
 public:
  QuasidiskDomain(std::vector<Complex> coefficients, double qc_constant_hint = 1.0);

  const std::vector<Complex>& coefficients() const { return coeffs_; }
  double qc_constant_hint() const { return qc_hint_; }

  Complex map(Complex z) const;
  Complex map_derivative(Complex z) const;

  /// Boundary samples f(e^{i theta}) as sphere points, uniformly in theta.
  std::vector<Vec3> boundary_samples(int n) const;

  /// Numerical inversion of the conformal map (Newton); nullopt outside U0.
  std::optional<Complex> invert(Complex xi) const;

  bool contains(Complex xi) const;

  /// Log-density vs c1 of the complete hyperbolic metric h_{-1} at the chart
  /// point xi.  Throws if xi is not in the domain.
  double hyperbolic_log_density(Complex xi) const;

 private:
  std::vector<Complex> coeffs_;
  double qc_hint_ = 1.0;
  std::vector<Complex> sample_z_, sample_f_;  // coarse inversion seeds
};

/// Maximal inscribed round disk through a point.
struct MaximalDisk {
  Complex center_chart{0, 0};
  double spherical_radius = 0.0;
  int tangency_count = 0;
  bool saturated = false;  // tangent along (numerically) the whole boundary
  SphericalCap cap;
};

/// Maximal disk of the domain containing the chart point xi, found by
/// minimizing the inscribed-cap hyperbolic density at xi over cap centers,
/// with the radius always pushed to the boundary clearance.
MaximalDisk maximal_disk(const QuasidiskDomain& domain, Complex xi, int boundary_samples = 2048);

/// Thurston metric log-density vs c1 at xi (density of the maximal disk).
double thurston_log_density(const QuasidiskDomain& domain, Complex xi, int boundary_samples = 2048);

/// Finite set of ideal points (>= 3, or >= 2 with the degeneracy flag).
struct IdealPointSet {
  std::vector<IdealPoint> points;
  bool allow_degenerate = false;

  explicit IdealPointSet(std::vector<IdealPoint> pts, bool allow_two = false);
};

struct HullFace {
  Vec4 plane;              // unit spacelike 4-vector, hull on the nonpositive side
  std::vector<int> cycle;  // vertex indices, oriented
};

struct HullEdge {
  int v0 = -1, v1 = -1;
  int f0 = -1, f1 = -1;
  double interior_dihedral = 0.0;  // angle between the two support planes inside the hull
};

struct ConvexHullBoundary {
  std::vector<IdealPoint> vertices;
  std::vector<HullFace> faces;
  std::vector<HullEdge> edges;
  bool planar = false;   // all points cocircular: single totally geodesic polygon
  bool segment = false;  // two points: degenerate geodesic, no faces

  /// max over (vertex, face) of <N_v, plane> (should be <= tol for convexity).
  double convexity_residual() const;
};

/// Boundary of the hyperbolic convex hull of the ideal points (a Euclidean
/// convex hull in the Klein model).
ConvexHullBoundary ideal_hull(const IdealPointSet& points);

/// Closest-point projection of xi onto the hull boundary: the point where the
/// horoball family at xi first touches the hull.  Throws if xi is one of the
/// hull's ideal points.
HPoint hull_projection(const ConvexHullBoundary& hull, const IdealPoint& xi);

/// Complement representations supported for Thurston/visual comparisons.
struct DomainComplement {
  enum class Kind { Disk, Points };
  Kind kind = Kind::Points;
  SphericalCap disk;                // complement = closed cap (Kind::Disk)
  std::vector<IdealPoint> points;   // Kind::Points

  static DomainComplement make_disk(const SphericalCap& cap);
  static DomainComplement make_points(std::vector<IdealPoint> pts);

  DomainComplement transformed(const HIsometry& iso) const;

  /// Spherical distance from c to the complement set.
  double clearance(const Vec3& c) const;
  bool in_domain(const Vec3& v) const;
};

/// Thurston log-density vs c1 at xi for the domain CP^1 minus the complement.
/// For point complements the maximal cap is found exactly by enumerating caps
/// tangent to pairs (1-D search on the bisector, `search_grid` initial cells)
/// and triples (closed form).
double thurston_log_density(const DomainComplement& complement, const IdealPoint& xi,
                            int search_grid = 512);

/// Same, returning the maximal disk itself.
MaximalDisk maximal_disk(const DomainComplement& complement, const IdealPoint& xi,
                         int search_grid = 512);

/// Base point m1 in the convex hull of the complement: minimizes the maximum
/// normalized Busemann value over the complement's ideal points (axis foot for
/// disk complements, geodesic midpoint for 2-point complements).
HPoint base_point(const DomainComplement& complement);

/// |log h_Th(xi) - log c_m(xi)| where m is the horoball projection of xi on
/// the hull of the complement; both densities vs c1.
double thurston_visual_check(const DomainComplement& complement, const IdealPoint& xi,
                             int search_grid = 512);

}  // namespace hconv
