#pragma once

// Stereographic charts of the sphere and cell-centered grids.
//
// Two charts are used: "north" (z = (v1 + i v2)/(1 + v3), good near the north
// pole) and "south" (z = (v1 - i v2)/(1 - v3)).  The transition map between
// them is z -> 1/z, holomorphic, and each chart's unit disk covers one closed
// hemisphere.  The round metric c1 of curvature +1 has density
// lambda(z) = 2/(1+|z|^2) against |dz| in either chart.

#include <complex>
#include <cstdint>
#include <vector>

#include "hconv/hyp3.hpp"

namespace hconv {

using Complex = std::complex<double>;

enum class ChartKind : std::uint8_t { North, South };

Vec3 chart_to_sphere(ChartKind kind, Complex z);
Complex sphere_to_chart(ChartKind kind, const Vec3& v);

/// Density of the round metric c1 against the Euclidean chart metric.
inline double c1_chart_density(Complex z) { return 2.0 / (1.0 + std::norm(z)); }
inline double c1_chart_log_density(Complex z) { return std::log(c1_chart_density(z)); }

/// Spherical (angular) distance between unit vectors.
double sphere_distance(const Vec3& a, const Vec3& b);

template <class T>
struct Grid {
  int nx = 0, ny = 0;
  std::vector<T> a;

  Grid() = default;
  Grid(int nx_, int ny_, T fill = T()) : nx(nx_), ny(ny_), a(size_t(nx_) * ny_, fill) {}
  T& operator()(int i, int j) { return a[size_t(j) * nx + i]; }
  const T& operator()(int i, int j) const { return a[size_t(j) * nx + i]; }
  bool in_bounds(int i, int j) const { return i >= 0 && i < nx && j >= 0 && j < ny; }
};

using GridD = Grid<double>;
using GridB = Grid<std::uint8_t>;

/// Cell-centered rectangular grid in one stereographic chart.
struct Chart {
  ChartKind kind = ChartKind::North;
  int nx = 0, ny = 0;
  double x0 = 0, x1 = 0, y0 = 0, y1 = 0;

  Chart() = default;
  Chart(ChartKind k, int nx_, int ny_, double x0_, double x1_, double y0_, double y1_);

  double dx() const { return (x1 - x0) / nx; }
  double dy() const { return (y1 - y0) / ny; }
  double cx(int i) const { return x0 + (i + 0.5) * dx(); }
  double cy(int j) const { return y0 + (j + 0.5) * dy(); }
  Complex cz(int i, int j) const { return {cx(i), cy(j)}; }
  Vec3 cell_sphere_point(int i, int j) const { return chart_to_sphere(kind, cz(i, j)); }

  /// Fractional grid index of a chart point (for interpolation).
  void locate(Complex z, double& fi, double& fj) const {
    fi = (z.real() - x0) / dx() - 0.5;
    fj = (z.imag() - y0) / dy() - 0.5;
  }
  bool contains(Complex z) const {
    return z.real() >= x0 && z.real() <= x1 && z.imag() >= y0 && z.imag() <= y1;
  }
};

/// Bilinear interpolation of a grid at fractional index coordinates; clamps to
/// the boundary cells.
double bilinear(const Chart& chart, const GridD& g, Complex z);

/// Cubic (Catmull-Rom) interpolation, used where bilinear's O(h^2) kinks in
/// the first derivative would pollute downstream differences.
double bicubic(const Chart& chart, const GridD& g, Complex z);

}  // namespace hconv
