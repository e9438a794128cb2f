#include "hconv/hyp3.hpp"

#include <cmath>
#include <stdexcept>

namespace hconv {

namespace {

const Mat4 kMinkJ = [] {
  Mat4 j = Mat4::Identity();
  j(0, 0) = -1.0;
  return j;
}();

void require_finite(const Vec4& x, const char* what) {
  if (!x.allFinite()) throw std::invalid_argument(std::string(what) + ": non-finite coordinates");
}

}  // namespace

HPoint::HPoint(const Vec4& v) : x(v) {
  require_finite(v, "HPoint");
  if (x[0] <= 0.0) throw std::invalid_argument("HPoint: not on the upper sheet (x0 <= 0)");
  double q = -mdot(x, x);
  // The defect scales like eps * |x|^2 for far-out points; accept and
  // renormalize anything within that budget, reject grossly off-shell input.
  // Beyond ~e^18 the constraint underflows entirely; keep such points as is.
  double scale = 1.0 + x.squaredNorm();
  if (std::abs(q - 1.0) > 1e-4 * scale) throw std::invalid_argument("HPoint: <x,x> != -1");
  if (q > 0.5 && std::abs(q - 1.0) > 1e-16) x /= std::sqrt(q);
}

HPoint HPoint::from_spatial(const Vec3& p) {
  Vec4 x;
  x[0] = std::sqrt(1.0 + p.squaredNorm());
  x.tail<3>() = p;
  return HPoint(x);
}

IdealPoint::IdealPoint(const Vec3& dir) {
  if (!dir.allFinite() || dir.norm() < 1e-12)
    throw std::invalid_argument("IdealPoint: invalid direction");
  v = dir.normalized();
  chart_coords = {v[0] / (1.0 + v[2]), v[1] / (1.0 + v[2])};
}

IdealPoint IdealPoint::from_chart(std::complex<double> z) {
  double r2 = std::norm(z);
  Vec3 v(2.0 * z.real() / (1.0 + r2), 2.0 * z.imag() / (1.0 + r2), (1.0 - r2) / (1.0 + r2));
  return IdealPoint(v);
}

double HIsometry::lorentz_residual() const {
  return (L.transpose() * kMinkJ * L - kMinkJ).cwiseAbs().maxCoeff();
}

bool HIsometry::is_valid(double tol) const {
  return L.allFinite() && lorentz_residual() <= tol && L(0, 0) > 0.0;
}

HIsometry HIsometry::inverse() const { return HIsometry(kMinkJ * L.transpose() * kMinkJ); }

HPoint HIsometry::apply(const HPoint& p) const {
  Vec4 y = L * p.x;
  // Products of many isometries can drift off-shell by a few ulp; project back.
  double q = -mdot(y, y);
  if (q <= 0.0) throw std::runtime_error("HIsometry::apply: image left the hyperboloid");
  return HPoint(y / std::sqrt(q));
}

IdealPoint HIsometry::apply(const IdealPoint& xi) const {
  Vec4 n = L * xi.null_vec();
  if (n[0] <= 0.0) throw std::runtime_error("HIsometry::apply: null image not future-pointing");
  return IdealPoint(Vec3(n.tail<3>() / n[0]));
}

HIsometry HIsometry::rotation(const Vec3& axis, double angle) {
  Mat4 m = Mat4::Identity();
  m.block<3, 3>(1, 1) = Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
  return HIsometry(m);
}

HIsometry HIsometry::translation(const Vec3& unit_dir, double s) {
  Vec3 n = unit_dir.normalized();
  Vec4 e0(1.0, 0.0, 0.0, 0.0);
  Vec4 en(0.0, n[0], n[1], n[2]);
  Mat4 m = Mat4::Identity();
  // Acts as a boost on span{e0, en}, identity on the orthogonal complement.
  m += (std::cosh(s) - 1.0) * (e0 * e0.transpose() + en * en.transpose());
  m += std::sinh(s) * (e0 * en.transpose() + en * e0.transpose());
  return HIsometry(m);
}

HIsometry HIsometry::translate_to_origin(const HPoint& m) {
  double d = distance(HPoint::origin(), m);
  if (d < 1e-14) return identity();
  Vec3 dir = m.x.tail<3>().normalized();
  return translation(dir, -d);
}

HIsometry HIsometry::random(std::mt19937_64& rng, double max_rapidity) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  auto rand_rot = [&] {
    Eigen::Quaterniond q(gauss(rng), gauss(rng), gauss(rng), gauss(rng));
    q.normalize();
    Mat4 m = Mat4::Identity();
    m.block<3, 3>(1, 1) = q.toRotationMatrix();
    return HIsometry(m);
  };
  HIsometry b = translation(Vec3(1, 0, 0), max_rapidity * unif(rng));
  return rand_rot().compose(b).compose(rand_rot());
}

HPoint ModelMap::from_poincare(const Vec3& b) const {
  double r2 = b.squaredNorm();
  if (r2 >= 1.0) throw std::invalid_argument("ModelMap::from_poincare: |b| >= 1");
  Vec4 x;
  x[0] = (1.0 + r2) / (1.0 - r2);
  x.tail<3>() = 2.0 * b / (1.0 - r2);
  return HPoint(x);
}

HPoint ModelMap::from_klein(const Vec3& k) const {
  double r2 = k.squaredNorm();
  if (r2 >= 1.0) throw std::invalid_argument("ModelMap::from_klein: |k| >= 1");
  double x0 = 1.0 / std::sqrt(1.0 - r2);
  Vec4 x;
  x[0] = x0;
  x.tail<3>() = k * x0;
  return HPoint(x);
}

double ModelMap::round_trip_residual(const HPoint& p) const {
  HPoint q = from_poincare(to_poincare(p));
  return (q.x - p.x).cwiseAbs().maxCoeff();
}

double distance(const HPoint& p, const HPoint& q) {
  require_finite(p.x, "distance");
  require_finite(q.x, "distance");
  double c = -mdot(p.x, q.x);
  return std::acosh(std::max(1.0, c));
}

Vec4 direction_to(const HPoint& p, const HPoint& q) {
  double c = -mdot(p.x, q.x);  // cosh(delta)
  double s = std::sqrt(std::max(0.0, c * c - 1.0));
  if (s < 1e-14) throw std::invalid_argument("direction_to: coincident points");
  return (q.x - c * p.x) / s;
}

Vec4 direction_to_ideal(const HPoint& p, const IdealPoint& xi) {
  Vec4 n = xi.null_vec();
  double s = -mdot(p.x, n);  // > 0 always
  return n / s - p.x;
}

HPoint point_along_ray(const HPoint& p, const IdealPoint& xi, double t) {
  Vec4 w = direction_to_ideal(p, xi);
  return HPoint(std::cosh(t) * p.x + std::sinh(t) * w);
}

HPoint geodesic_midpoint(const HPoint& p, const HPoint& q) {
  Vec4 s = p.x + q.x;
  double n = -mdot(s, s);
  return HPoint(s / std::sqrt(n));
}

double angle_at(const HPoint& m0, const IdealPoint& xi, const HPoint& m1) {
  Vec4 wi = direction_to_ideal(m0, xi);
  Vec4 wm = direction_to(m0, m1);
  double c = std::clamp(mdot(wi, wm), -1.0, 1.0);
  return std::acos(c);
}

double visual_log_density(const IdealPoint& xi, const HPoint& m0, const HPoint& m1) {
  double delta = distance(m0, m1);
  if (delta < 1e-14) return 0.0;
  Vec4 wi = direction_to_ideal(m0, xi);
  Vec4 wm = direction_to(m0, m1);
  double ct = std::clamp(mdot(wi, wm), -1.0, 1.0);
  // Argument of the log is >= e^{-delta} > 0.
  return -std::log(std::cosh(delta) - ct * std::sinh(delta));
}

double visual_log_density_dtheta(double theta, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("visual_log_density_dtheta: delta <= 0");
  return -std::sin(theta) / (1.0 / std::tanh(delta) - std::cos(theta));
}

double busemann_rate(const HPoint& m1, const HPoint& m0, const IdealPoint& xi, double t) {
  if (t < 0.0) throw std::invalid_argument("busemann_rate: t < 0");
  if (distance(m0, m1) < 1e-15) return 1.0;
  // cosh l(t) = -<m1, gamma(t)> with gamma = cosh(t) m0 + sinh(t) w; computed
  // directly so that large t never materializes an off-shell point.
  Vec4 w = direction_to_ideal(m0, xi);
  double coshl = -(std::cosh(t) * mdot(m1.x, m0.x) + std::sinh(t) * mdot(m1.x, w));
  double l = std::acosh(std::max(1.0, coshl));
  return std::exp(l - t);
}

double busemann_value(const IdealPoint& xi, const HPoint& x) {
  return std::log(-mdot(x.x, xi.null_vec()));
}

}  // namespace hconv
