#include "hconv/chart.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hconv {

Vec3 chart_to_sphere(ChartKind kind, Complex z) {
  double x = z.real(), y = z.imag(), r2 = std::norm(z);
  double d = 1.0 + r2;
  if (kind == ChartKind::North) return Vec3(2.0 * x / d, 2.0 * y / d, (1.0 - r2) / d);
  return Vec3(2.0 * x / d, -2.0 * y / d, (r2 - 1.0) / d);
}

Complex sphere_to_chart(ChartKind kind, const Vec3& v) {
  if (kind == ChartKind::North) return {v[0] / (1.0 + v[2]), v[1] / (1.0 + v[2])};
  return {v[0] / (1.0 - v[2]), -v[1] / (1.0 - v[2])};
}

double sphere_distance(const Vec3& a, const Vec3& b) {
  // atan2 form is accurate for both small and near-pi angles.
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

Chart::Chart(ChartKind k, int nx_, int ny_, double x0_, double x1_, double y0_, double y1_)
    : kind(k), nx(nx_), ny(ny_), x0(x0_), x1(x1_), y0(y0_), y1(y1_) {
  if (nx < 16 || ny < 16) throw std::invalid_argument("Chart: resolution below 16x16");
  if (!(x1 > x0) || !(y1 > y0)) throw std::invalid_argument("Chart: empty extent");
}

double bilinear(const Chart& chart, const GridD& g, Complex z) {
  double fi, fj;
  chart.locate(z, fi, fj);
  int i0 = (int)std::floor(fi), j0 = (int)std::floor(fj);
  i0 = std::clamp(i0, 0, chart.nx - 2);
  j0 = std::clamp(j0, 0, chart.ny - 2);
  double tx = std::clamp(fi - i0, 0.0, 1.0), ty = std::clamp(fj - j0, 0.0, 1.0);
  double v00 = g(i0, j0), v10 = g(i0 + 1, j0), v01 = g(i0, j0 + 1), v11 = g(i0 + 1, j0 + 1);
  return (1 - tx) * ((1 - ty) * v00 + ty * v01) + tx * ((1 - ty) * v10 + ty * v11);
}

namespace {
inline double catmull(double p0, double p1, double p2, double p3, double t) {
  return p1 + 0.5 * t * (p2 - p0 + t * (2 * p0 - 5 * p1 + 4 * p2 - p3 + t * (3 * (p1 - p2) + p3 - p0)));
}
}  // namespace

double bicubic(const Chart& chart, const GridD& g, Complex z) {
  double fi, fj;
  chart.locate(z, fi, fj);
  int i1 = (int)std::floor(fi), j1 = (int)std::floor(fj);
  i1 = std::clamp(i1, 1, chart.nx - 3);
  j1 = std::clamp(j1, 1, chart.ny - 3);
  double tx = std::clamp(fi - i1, 0.0, 1.0), ty = std::clamp(fj - j1, 0.0, 1.0);
  double col[4];
  for (int dj = -1; dj <= 2; ++dj) {
    col[dj + 1] = catmull(g(i1 - 1, j1 + dj), g(i1, j1 + dj), g(i1 + 1, j1 + dj),
                          g(i1 + 2, j1 + dj), tx);
  }
  return catmull(col[0], col[1], col[2], col[3], ty);
}

}  // namespace hconv
