#pragma once

// Models of hyperbolic 3-space.
//
// The canonical internal model is the hyperboloid
//   H^3 = { x in R^{3,1} : <x,x> = -1, x_0 > 0 }
// with the Minkowski form of signature (-,+,+,+).  The Poincare and Klein
// balls are provided as views.  Ideal points live on the unit sphere
// (directions of null rays seen from the origin (1,0,0,0)), and the fixed
// spherical metric c1 used everywhere else in the library is the visual
// metric of that origin.

#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace hconv {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;

constexpr double kPi = 3.14159265358979323846;

/// Minkowski inner product, signature (-,+,+,+).
inline double mdot(const Vec4& a, const Vec4& b) {
  return -a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}

/// A point of H^3 in hyperboloid coordinates: <x,x> = -1, x0 > 0.
struct HPoint {
  Vec4 x{1.0, 0.0, 0.0, 0.0};

  HPoint() = default;
  explicit HPoint(const Vec4& v);

  /// Normalization defect |<x,x> + 1|.
  double constraint_residual() const { return std::abs(mdot(x, x) + 1.0); }

  static HPoint origin() { return HPoint(); }
  /// Point of the upper hyperboloid over spatial coordinates p (Klein-scaled
  /// by x0); p need not be small but |p| is unrestricted only on input to
  /// from_spatial via normalization.
  static HPoint from_spatial(const Vec3& p);
};

/// An ideal point of H^3, i.e. a point of the sphere at infinity.  Stores the
/// unit direction vector and its coordinate in the fixed (north) stereographic
/// chart.  The chart coordinate of the south pole is infinite; callers that
/// need finite coordinates near the south pole should use the south chart
/// explicitly (see chart.hpp).
struct IdealPoint {
  Vec3 v{0.0, 0.0, 1.0};
  std::complex<double> chart_coords{0.0, 0.0};

  IdealPoint() = default;
  explicit IdealPoint(const Vec3& dir);
  static IdealPoint from_chart(std::complex<double> z);

  /// Null vector (1, v) representing the point on the light cone.
  Vec4 null_vec() const { return Vec4(1.0, v[0], v[1], v[2]); }

  double chordal_distance(const IdealPoint& o) const { return (v - o.v).norm(); }
};

/// Orientation-preserving isometry of H^3 as a Lorentz matrix preserving the
/// upper sheet.
struct HIsometry {
  Mat4 L = Mat4::Identity();

  HIsometry() = default;
  explicit HIsometry(const Mat4& m) : L(m) {}

  /// max |L^T J L - J|.
  double lorentz_residual() const;
  bool is_valid(double tol = 1e-8) const;

  HIsometry compose(const HIsometry& rhs) const { return HIsometry(L * rhs.L); }
  HIsometry inverse() const;

  HPoint apply(const HPoint& p) const;
  IdealPoint apply(const IdealPoint& xi) const;

  static HIsometry identity() { return HIsometry(); }
  static HIsometry rotation(const Vec3& axis, double angle);
  /// Pure translation along the unit spatial direction, by hyperbolic length s.
  static HIsometry translation(const Vec3& unit_dir, double s);
  /// Isometry taking m to the origin (pure translation along the axis
  /// origin-m).
  static HIsometry translate_to_origin(const HPoint& m);
  static HIsometry random(std::mt19937_64& rng, double max_rapidity = 2.0);
};

/// Conversions between the hyperboloid, Poincare-ball and Klein-ball models.
struct ModelMap {
  double tolerance = 1e-9;

  Vec3 to_poincare(const HPoint& p) const { return p.x.tail<3>() / (1.0 + p.x[0]); }
  HPoint from_poincare(const Vec3& b) const;
  Vec3 to_klein(const HPoint& p) const { return p.x.tail<3>() / p.x[0]; }
  HPoint from_klein(const Vec3& k) const;

  /// Round-trip defect through the Poincare ball.
  double round_trip_residual(const HPoint& p) const;
};

/// Hyperbolic distance d = arcosh(-<p,q>).  Rejects non-finite inputs.
double distance(const HPoint& p, const HPoint& q);

/// Unit tangent vector at p pointing toward q (p != q).
Vec4 direction_to(const HPoint& p, const HPoint& q);

/// Unit tangent vector at p pointing toward the ideal point xi.
Vec4 direction_to_ideal(const HPoint& p, const IdealPoint& xi);

/// Point at arclength t along the geodesic ray from p toward xi.
HPoint point_along_ray(const HPoint& p, const IdealPoint& xi, double t);

/// Geodesic midpoint of p and q.
HPoint geodesic_midpoint(const HPoint& p, const HPoint& q);

/// Angle at m0 between the ray toward xi and the segment toward m1.
double angle_at(const HPoint& m0, const IdealPoint& xi, const HPoint& m1);

/// Log-density y(xi) of the visual metric comparison c_{m1} = e^{2y} c_{m0}:
///   y = -log(cosh(delta) - cos(theta) sinh(delta)),
/// delta = d(m0,m1), theta the angle at m0 between the ray to xi and the
/// segment to m1.
double visual_log_density(const IdealPoint& xi, const HPoint& m0, const HPoint& m1);

/// Derivative dy(d_theta) = -sin(theta) / (coth(delta) - cos(theta)).
/// Requires delta > 0.
double visual_log_density_dtheta(double theta, double delta);

/// e^{l(t)-t} where l(t) is the distance from m1 to the point at parameter t
/// along the ray m0 -> xi.  Converges to cosh(delta) - cos(theta) sinh(delta).
double busemann_rate(const HPoint& m1, const HPoint& m0, const IdealPoint& xi, double t);

/// Normalized Busemann value at x for the ideal point xi: log(-<x, N_xi>),
/// zero at the origin.
double busemann_value(const IdealPoint& xi, const HPoint& x);

}  // namespace hconv
