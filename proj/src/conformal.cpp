#include "hconv/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace hconv {

ConformalMetricField::ConformalMetricField(const Chart& c, GridD u_, GridB mask_)
    : chart(c), u(std::move(u_)), mask(std::move(mask_)) {
  validate();
}

void ConformalMetricField::validate() const {
  if (u.nx != chart.nx || u.ny != chart.ny || mask.nx != chart.nx || mask.ny != chart.ny)
    throw std::invalid_argument("ConformalMetricField: grid/chart size mismatch");
  for (int j = 0; j < chart.ny; ++j)
    for (int i = 0; i < chart.nx; ++i)
      if (mask(i, j) && !std::isfinite(u(i, j)))
        throw std::invalid_argument("ConformalMetricField: non-finite u on a masked cell");
}

CurvatureField curvature(const ConformalMetricField& field) {
  const Chart& ch = field.chart;
  CurvatureField out;
  out.K = GridD(ch.nx, ch.ny, 0.0);
  out.valid = GridB(ch.nx, ch.ny, 0);
  const double idx2 = 1.0 / (ch.dx() * ch.dx());
  const double idy2 = 1.0 / (ch.dy() * ch.dy());
  for (int j = 1; j < ch.ny - 1; ++j) {
    for (int i = 1; i < ch.nx - 1; ++i) {
      if (!field.masked(i, j) || !field.masked(i - 1, j) || !field.masked(i + 1, j) ||
          !field.masked(i, j - 1) || !field.masked(i, j + 1))
        continue;
      double u0 = field.u(i, j);
      double lap_eucl = (field.u(i - 1, j) - 2.0 * u0 + field.u(i + 1, j)) * idx2 +
                        (field.u(i, j - 1) - 2.0 * u0 + field.u(i, j + 1)) * idy2;
      double lam = c1_chart_density(ch.cz(i, j));
      double lap_c1 = -lap_eucl / (lam * lam);
      out.K(i, j) = std::exp(-2.0 * u0) * (lap_c1 + 1.0);
      out.valid(i, j) = 1;
    }
  }
  return out;
}

CurvatureField curvature_rel(const ConformalMetricField& a, const ConformalMetricField& base) {
  if (a.chart.nx != base.chart.nx || a.chart.ny != base.chart.ny)
    throw std::invalid_argument("curvature_rel: mismatched charts");
  CurvatureField kb = curvature(base);
  const Chart& ch = a.chart;
  CurvatureField out;
  out.K = GridD(ch.nx, ch.ny, 0.0);
  out.valid = GridB(ch.nx, ch.ny, 0);
  const double idx2 = 1.0 / (ch.dx() * ch.dx());
  const double idy2 = 1.0 / (ch.dy() * ch.dy());
  for (int j = 1; j < ch.ny - 1; ++j) {
    for (int i = 1; i < ch.nx - 1; ++i) {
      if (!kb.valid(i, j)) continue;
      if (!a.masked(i, j) || !a.masked(i - 1, j) || !a.masked(i + 1, j) || !a.masked(i, j - 1) ||
          !a.masked(i, j + 1))
        continue;
      double a0 = a.u(i, j);
      double lap_eucl = (a.u(i - 1, j) - 2.0 * a0 + a.u(i + 1, j)) * idx2 +
                        (a.u(i, j - 1) - 2.0 * a0 + a.u(i, j + 1)) * idy2;
      double lam = c1_chart_density(ch.cz(i, j));
      // Delta_g a = e^{-2b} Delta_{c1} a for g = e^{2b} c1.
      double lap_base = -std::exp(-2.0 * base.u(i, j)) * lap_eucl / (lam * lam);
      out.K(i, j) = std::exp(-2.0 * a0) * (lap_base + kb.K(i, j));
      out.valid(i, j) = 1;
    }
  }
  return out;
}

GradientField gradient_norm(const ConformalMetricField& field, MetricRef metric,
                            const QuasidiskDomain* domain) {
  if ((metric == MetricRef::Hminus1 || metric == MetricRef::Thurston) && domain == nullptr)
    throw std::invalid_argument("gradient_norm: hyperbolic/Thurston reference needs a domain");
  const Chart& ch = field.chart;
  GradientField out;
  out.norm = GridD(ch.nx, ch.ny, 0.0);
  out.valid = GridB(ch.nx, ch.ny, 0);
  for (int j = 1; j < ch.ny - 1; ++j) {
    for (int i = 1; i < ch.nx - 1; ++i) {
      if (!field.masked(i, j) || !field.masked(i - 1, j) || !field.masked(i + 1, j) ||
          !field.masked(i, j - 1) || !field.masked(i, j + 1))
        continue;
      double gx = (field.u(i + 1, j) - field.u(i - 1, j)) / (2.0 * ch.dx());
      double gy = (field.u(i, j + 1) - field.u(i, j - 1)) / (2.0 * ch.dy());
      Complex z = ch.cz(i, j);
      double norm_c1 = std::hypot(gx, gy) / c1_chart_density(z);
      double a;  // log-density of the reference metric vs c1
      switch (metric) {
        case MetricRef::C1: a = 0.0; break;
        case MetricRef::H: a = field.u(i, j); break;
        case MetricRef::Hminus1: {
          try {
            a = domain->hyperbolic_log_density(z);
          } catch (const std::exception&) {
            continue;  // cell outside the domain: excluded
          }
          break;
        }
        case MetricRef::Thurston: {
          try {
            a = thurston_log_density(*domain, z);
          } catch (const std::exception&) {
            continue;
          }
          break;
        }
        default: a = 0.0;
      }
      out.norm(i, j) = std::exp(-a) * norm_c1;
      out.valid(i, j) = 1;
    }
  }
  return out;
}

GridB collar_mask(const GridB& mask, int width) {
  GridB out(mask.nx, mask.ny, 0);
  for (int j = 0; j < mask.ny; ++j) {
    for (int i = 0; i < mask.nx; ++i) {
      if (!mask(i, j)) continue;
      bool near_boundary = false;
      for (int dj = -width; dj <= width && !near_boundary; ++dj) {
        for (int di = -width; di <= width && !near_boundary; ++di) {
          int ii = i + di, jj = j + dj;
          if (!mask.in_bounds(ii, jj) || !mask(ii, jj)) near_boundary = true;
        }
      }
      if (near_boundary) out(i, j) = 1;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// SphereField
// ---------------------------------------------------------------------------

SphereField SphereField::sample(int resolution, double extent,
                                const std::function<double(const Vec3&)>& log_density) {
  if (extent <= 1.0) throw std::invalid_argument("SphereField: extent must exceed 1");
  SphereField out;
  for (ChartKind kind : {ChartKind::North, ChartKind::South}) {
    Chart ch(kind, resolution, resolution, -extent, extent, -extent, extent);
    GridD u(resolution, resolution, 0.0);
    GridB mask(resolution, resolution, 1);
    for (int j = 0; j < resolution; ++j)
      for (int i = 0; i < resolution; ++i) u(i, j) = log_density(ch.cell_sphere_point(i, j));
    ConformalMetricField f(ch, std::move(u), std::move(mask));
    (kind == ChartKind::North ? out.north : out.south) = std::move(f);
  }
  return out;
}

double SphereField::value_at(const Vec3& v) const {
  Complex zn = sphere_to_chart(ChartKind::North, v);
  if (std::abs(zn) <= 1.0) return bicubic(north.chart, north.u, zn);
  return bicubic(south.chart, south.u, sphere_to_chart(ChartKind::South, v));
}

namespace {

// Fraction of the cell inside the unit disk, subsampled on straddling cells.
double cell_disk_weight(const Chart& ch, int i, int j) {
  double x = ch.cx(i), y = ch.cy(j), hx = 0.5 * ch.dx(), hy = 0.5 * ch.dy();
  double rmin = std::hypot(std::max(0.0, std::abs(x) - hx), std::max(0.0, std::abs(y) - hy));
  double rmax = std::hypot(std::abs(x) + hx, std::abs(y) + hy);
  if (rmax <= 1.0) return 1.0;
  if (rmin >= 1.0) return 0.0;
  const int s = 8;
  int in = 0;
  for (int b = 0; b < s; ++b)
    for (int a = 0; a < s; ++a)
      if (std::hypot(x + (2.0 * (a + 0.5) / s - 1.0) * hx, y + (2.0 * (b + 0.5) / s - 1.0) * hy) <=
          1.0)
        ++in;
  return double(in) / (s * s);
}

}  // namespace

double SphereField::integrate_curvature() const {
  double total = 0.0;
  for (const ConformalMetricField* f : {&north, &south}) {
    CurvatureField K = curvature(*f);
    const Chart& ch = f->chart;
    double da = ch.dx() * ch.dy();
    for (int j = 0; j < ch.ny; ++j) {
      for (int i = 0; i < ch.nx; ++i) {
        if (!K.valid(i, j)) continue;
        double w = cell_disk_weight(ch, i, j);
        if (w == 0.0) continue;
        double lam = c1_chart_density(ch.cz(i, j));
        total += w * K.K(i, j) * std::exp(2.0 * f->u(i, j)) * lam * lam * da;
      }
    }
  }
  return total;
}

double SphereField::overlap_residual() const {
  double worst = 0.0;
  const Chart& ch = north.chart;
  for (int j = 0; j < ch.ny; ++j) {
    for (int i = 0; i < ch.nx; ++i) {
      Complex z = ch.cz(i, j);
      double r = std::abs(z);
      if (r < 0.95 || r > 1.05) continue;
      Complex zs = 1.0 / z;
      double us = bicubic(south.chart, south.u, zs);
      worst = std::max(worst, std::abs(us - north.u(i, j)));
    }
  }
  return worst;
}

double gauss_bonnet_defect(const SphereField& field) {
  return std::abs(field.integrate_curvature() - 4.0 * kPi) / (4.0 * kPi);
}

// ---------------------------------------------------------------------------
// Factor decomposition
// ---------------------------------------------------------------------------

double FactorDecomposition::consistency_residual(const ConformalMetricField& field) const {
  double worst = 0.0;
  for (int j = 0; j < field.chart.ny; ++j)
    for (int i = 0; i < field.chart.nx; ++i)
      if (valid(i, j))
        worst = std::max(worst, std::abs(v(i, j) + w(i, j) + x(i, j) - field.u(i, j)));
  return worst;
}

FactorDecomposition factor_decomposition(const ConformalMetricField& field,
                                         const QuasidiskDomain& domain) {
  const Chart& ch = field.chart;
  FactorDecomposition out;
  out.v = GridD(ch.nx, ch.ny, 0.0);
  out.w = GridD(ch.nx, ch.ny, 0.0);
  out.x = GridD(ch.nx, ch.ny, 0.0);
  out.valid = GridB(ch.nx, ch.ny, 0);

  for (int j = 0; j < ch.ny; ++j) {
    for (int i = 0; i < ch.nx; ++i) {
      if (!field.masked(i, j)) continue;
      Complex z = ch.cz(i, j);
      double hm1, th;
      try {
        hm1 = domain.hyperbolic_log_density(z);
        th = thurston_log_density(domain, z);
      } catch (const std::exception&) {
        ++out.bounds.excluded;  // domain parameterization does not cover the cell
        continue;
      }
      out.v(i, j) = field.u(i, j) - hm1;
      out.w(i, j) = hm1 - th;
      out.x(i, j) = th;
      out.valid(i, j) = 1;
      ++out.bounds.cells;
      out.bounds.sup_abs_v = std::max(out.bounds.sup_abs_v, std::abs(out.v(i, j)));
      out.bounds.sup_abs_w = std::max(out.bounds.sup_abs_w, std::abs(out.w(i, j)));
    }
  }

  // Gradient sups: dv and dw against h_{-1}, dx against h_Th (the reference
  // metrics of the factor bounds).  Centered differences where the stencil is
  // valid.
  auto grad_sup = [&](const GridD& g, bool use_thurston) {
    double sup = 0.0;
    for (int j = 1; j < ch.ny - 1; ++j) {
      for (int i = 1; i < ch.nx - 1; ++i) {
        if (!out.valid(i, j) || !out.valid(i - 1, j) || !out.valid(i + 1, j) ||
            !out.valid(i, j - 1) || !out.valid(i, j + 1))
          continue;
        double gx = (g(i + 1, j) - g(i - 1, j)) / (2.0 * ch.dx());
        double gy = (g(i, j + 1) - g(i, j - 1)) / (2.0 * ch.dy());
        Complex z = ch.cz(i, j);
        double nc1 = std::hypot(gx, gy) / c1_chart_density(z);
        double ref = use_thurston ? out.x(i, j) : (out.w(i, j) + out.x(i, j));
        sup = std::max(sup, std::exp(-ref) * nc1);
      }
    }
    return sup;
  };
  out.bounds.sup_dv_hm1 = grad_sup(out.v, false);
  out.bounds.sup_dw_hm1 = grad_sup(out.w, false);
  out.bounds.sup_dx_th = grad_sup(out.x, true);
  return out;
}

// ---------------------------------------------------------------------------
// Short-loop search
// ---------------------------------------------------------------------------

double loop_length(const SphereField& field, const std::vector<Vec3>& pts) {
  double total = 0.0;
  const int n = int(pts.size());
  for (int k = 0; k < n; ++k) {
    const Vec3 &a = pts[k], &b = pts[(k + 1) % n];
    Vec3 mid = (a + b).normalized();
    // Two-piece midpoint rule along the great-circle segment.
    Vec3 m1 = (a + mid).normalized(), m2 = (mid + b).normalized();
    total += std::exp(field.value_at(m1)) * sphere_distance(a, mid) +
             std::exp(field.value_at(m2)) * sphere_distance(mid, b);
  }
  return total;
}

namespace {

std::vector<Vec3> resample_loop(const std::vector<Vec3>& pts, int n) {
  const int m = int(pts.size());
  std::vector<double> cum(m + 1, 0.0);
  for (int k = 0; k < m; ++k) cum[k + 1] = cum[k] + sphere_distance(pts[k], pts[(k + 1) % m]);
  std::vector<Vec3> out;
  out.reserve(n);
  for (int k = 0; k < n; ++k) {
    double target = cum[m] * k / n;
    int seg = int(std::upper_bound(cum.begin(), cum.end(), target) - cum.begin()) - 1;
    seg = std::clamp(seg, 0, m - 1);
    double t = (target - cum[seg]) / std::max(1e-300, cum[seg + 1] - cum[seg]);
    Vec3 a = pts[seg], b = pts[(seg + 1) % m];
    double ang = sphere_distance(a, b);
    if (ang < 1e-14) { out.push_back(a); continue; }
    out.push_back((std::sin((1 - t) * ang) * a + std::sin(t * ang) * b).normalized());
  }
  return out;
}

}  // namespace

std::vector<Loop> short_loop_search(const SphereField& field, double length_budget,
                                    const LoopSearchOptions& opt) {
  if (!(length_budget > 0.0)) throw std::invalid_argument("short_loop_search: budget <= 0");
  std::mt19937_64 rng(opt.rng_seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  // Deterministic great circles about a fixed axis sweep first, then circles
  // about random axes at varying colatitudes.
  const double q3 = 1.0 / std::sqrt(3.0);
  const Vec3 fixed_axes[] = {Vec3(0, 0, 1),        Vec3(1, 0, 0),         Vec3(0, 1, 0),
                             Vec3(q3, q3, q3),     Vec3(q3, -q3, q3),     Vec3(-q3, q3, q3),
                             Vec3(q3, q3, -q3)};
  const int n_fixed = int(std::size(fixed_axes));

  std::vector<Loop> found;
  for (int s = 0; s < opt.seeds; ++s) {
    Vec3 axis;
    double colat;
    if (s < n_fixed) {
      axis = fixed_axes[s];
      colat = kPi / 2.0;
    } else {
      axis = Vec3(gauss(rng), gauss(rng), gauss(rng)).normalized();
      colat = kPi / 2.0 * (0.4 + 0.6 * (s % 5) / 4.0);
    }
    Vec3 t1 = (std::abs(axis[2]) < 0.9 ? Vec3(0, 0, 1) : Vec3(1, 0, 0)).cross(axis).normalized();
    Vec3 t2 = axis.cross(t1);
    std::vector<Vec3> loop(opt.vertices);
    for (int k = 0; k < opt.vertices; ++k) {
      double th = 2.0 * kPi * k / opt.vertices;
      loop[k] = std::cos(colat) * axis + std::sin(colat) * (std::cos(th) * t1 + std::sin(th) * t2);
    }

    double len = loop_length(field, loop);
    double step = 0.02;
    bool collapsed = false, stationary = false;
    int quiet_sweeps = 0;
    for (int it = 0; it < opt.max_iters; ++it) {
      if (it % 40 == 39 && it < opt.max_iters / 2) {
        loop = resample_loop(loop, opt.vertices);
        len = loop_length(field, loop);
      }
      // One pass of projected gradient descent on the vertex positions.
      std::vector<Vec3> next = loop;
      const double eps = 1e-6;
      for (int k = 0; k < opt.vertices; ++k) {
        const Vec3& p = loop[k];
        const Vec3 &pm = loop[(k + opt.vertices - 1) % opt.vertices],
                   &pp = loop[(k + 1) % opt.vertices];
        auto local = [&](const Vec3& q) {
          Vec3 m1 = (pm + q).normalized(), m2 = (q + pp).normalized();
          return std::exp(field.value_at((pm + m1).normalized())) * sphere_distance(pm, m1) +
                 std::exp(field.value_at((m1 + q).normalized())) * sphere_distance(m1, q) +
                 std::exp(field.value_at((q + m2).normalized())) * sphere_distance(q, m2) +
                 std::exp(field.value_at((m2 + pp).normalized())) * sphere_distance(m2, pp);
        };
        Vec3 b1 = (std::abs(p[2]) < 0.9 ? Vec3(0, 0, 1) : Vec3(1, 0, 0)).cross(p).normalized();
        Vec3 b2 = p.cross(b1);
        double g1 = (local((p + eps * b1).normalized()) - local((p - eps * b1).normalized())) /
                    (2.0 * eps);
        double g2 = (local((p + eps * b2).normalized()) - local((p - eps * b2).normalized())) /
                    (2.0 * eps);
        next[k] = (p - step * (g1 * b1 + g2 * b2)).normalized();
      }
      double nlen = loop_length(field, next);
      if (nlen <= len) {
        double improve = len - nlen;
        loop = std::move(next);
        len = nlen;
        step = std::min(step * 1.05, 0.05);
        // A loop is only reported once the relaxation is stationary;
        // anything still descending at the iteration budget is discarded
        // (typically a loop collapsing to a point).
        if (improve < 1e-10 * std::max(1.0, len)) {
          if (++quiet_sweeps >= 5) { stationary = true; break; }
        } else {
          quiet_sweeps = 0;
        }
      } else {
        step *= 0.5;
        quiet_sweeps = 0;
        if (step < 1e-10) { stationary = true; break; }
      }
      double c1len = 0.0;
      for (int k = 0; k < opt.vertices; ++k)
        c1len += sphere_distance(loop[k], loop[(k + 1) % opt.vertices]);
      if (len < 1e-2 || c1len < 0.15) { collapsed = true; break; }
    }
    if (!stationary || collapsed || len >= length_budget) continue;
    bool duplicate = false;
    for (const auto& other : found)
      if (std::abs(other.length - len) < 1e-3) duplicate = true;
    if (!duplicate) found.push_back(Loop{loop, len});
  }
  std::sort(found.begin(), found.end(), [](const Loop& a, const Loop& b) { return a.length < b.length; });
  return found;
}

// ---------------------------------------------------------------------------
// Registered analytic fields
// ---------------------------------------------------------------------------

namespace {

// Curvature of e^{2u} c1 for radial u(r): K = e^{-2u}(1 + (1+r^2)^2/4 * L)
// with L = -(u'' + u'/r) the flat Laplacian with reversed sign folded in
// below per field.
double radial_curvature(double u, double lap_eucl, double r2) {
  double q = (1.0 + r2) * (1.0 + r2) / 4.0;  // 1/lambda^2
  return std::exp(-2.0 * u) * (1.0 - q * lap_eucl);
}

}  // namespace

std::vector<AnalyticField> registered_fields() {
  std::vector<AnalyticField> out;

  out.push_back({"round", [](Complex) { return 0.0; }, [](Complex) { return 1.0; }, 1.4, 0.0});
  out.push_back({"scaled", [](Complex) { return 1.0; },
                 [](Complex) { return std::exp(-2.0); }, 1.4, 0.0});

  for (double s : {0.5, 1.0, 2.0}) {
    out.push_back({"pinch_s" + std::to_string(s).substr(0, 3),
                   [s](Complex z) { return std::log(2.0 / (1.0 + s * std::norm(z))); },
                   [s](Complex z) {
                     double r2 = std::norm(z);
                     double a = 1.0 + s * r2, b = 1.0 + r2;
                     return (a * a + s * b * b) / 4.0;
                   },
                   1.2, 0.0});
  }

  // Gaussian bump: u = A exp(-r^2/w).
  {
    const double A = 0.8, w = 0.5;
    out.push_back({"bump",
                   [=](Complex z) { return A * std::exp(-std::norm(z) / w); },
                   [=](Complex z) {
                     double r2 = std::norm(z);
                     double u = A * std::exp(-r2 / w);
                     double lap = u * (4.0 * r2 / (w * w) - 4.0 / w);
                     return radial_curvature(u, lap, r2);
                   },
                   1.4, 0.0});
  }

  // Linear tilt: harmonic u, so K = e^{-2u} exactly.
  out.push_back({"tilt",
                 [](Complex z) { return 0.3 * z.real() + 0.2 * z.imag(); },
                 [](Complex z) { return std::exp(-2.0 * (0.3 * z.real() + 0.2 * z.imag())); }, 1.2,
                 0.0});

  // Visual metric of a boosted point: round of curvature exactly 1.
  {
    const double delta = 0.7;
    out.push_back({"boosted_visual",
                   [=](Complex z) {
                     double r2 = std::norm(z);
                     double v3 = (1.0 - r2) / (1.0 + r2);
                     return -std::log(std::cosh(delta) - v3 * std::sinh(delta));
                   },
                   [](Complex) { return 1.0; }, 1.4, 0.0});
  }

  // Complete equidistant metric on the hemisphere disk, masked to r <= 0.85.
  out.push_back({"equidistant_disk",
                 [](Complex z) {
                   double r2 = std::norm(z);
                   return std::log(std::cosh(1.0)) + std::log1p(r2) - std::log1p(-r2);
                 },
                 [](Complex) { return -1.0 / (std::cosh(1.0) * std::cosh(1.0)); }, 0.88, 0.85});

  // Complete hyperbolic metric on the hemisphere disk, masked to r <= 0.8.
  out.push_back({"hyperbolic_disk",
                 [](Complex z) {
                   double r2 = std::norm(z);
                   return std::log1p(r2) - std::log1p(-r2);
                 },
                 [](Complex) { return -1.0; }, 0.83, 0.8});

  return out;
}

ConformalMetricField sample_field(const AnalyticField& f, int resolution) {
  Chart ch(ChartKind::North, resolution, resolution, -f.extent, f.extent, -f.extent, f.extent);
  GridD u(resolution, resolution, 0.0);
  GridB mask(resolution, resolution, 0);
  for (int j = 0; j < resolution; ++j) {
    for (int i = 0; i < resolution; ++i) {
      Complex z = ch.cz(i, j);
      if (f.mask_radius > 0.0 && std::abs(z) > f.mask_radius) continue;
      u(i, j) = f.u(z);
      mask(i, j) = 1;
    }
  }
  return ConformalMetricField(ch, std::move(u), std::move(mask));
}

FieldErrorStats analytic_field_error(const AnalyticField& f, int resolution,
                                     double interior_shrink) {
  ConformalMetricField field = sample_field(f, resolution);
  CurvatureField K = curvature(field);
  GridB collar = collar_mask(field.mask, 2);
  double R = f.mask_radius > 0.0 ? f.mask_radius : f.extent;
  FieldErrorStats st;
  for (int j = 0; j < field.chart.ny; ++j) {
    for (int i = 0; i < field.chart.nx; ++i) {
      if (!K.valid(i, j)) continue;
      Complex z = field.chart.cz(i, j);
      double err = std::abs(K.K(i, j) - f.K(z));
      if (!collar(i, j)) st.max_err = std::max(st.max_err, err);
      if (std::abs(z) <= interior_shrink * R) st.max_err_interior = std::max(st.max_err_interior, err);
    }
  }
  return st;
}

ConformalMetricField equidistant_disk_field(int resolution, double extent, double d) {
  Chart ch(ChartKind::North, resolution, resolution, -extent, extent, -extent, extent);
  GridD u(resolution, resolution, 0.0);
  GridB mask(resolution, resolution, 0);
  const double c = std::log(std::cosh(d));
  for (int j = 0; j < resolution; ++j) {
    for (int i = 0; i < resolution; ++i) {
      Complex z = ch.cz(i, j);
      double r2 = std::norm(z);
      if (r2 >= 1.0) continue;
      u(i, j) = c + std::log1p(r2) - std::log1p(-r2);
      mask(i, j) = 1;
    }
  }
  return ConformalMetricField(ch, std::move(u), std::move(mask));
}

}  // namespace hconv
