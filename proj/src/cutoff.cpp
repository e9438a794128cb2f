#include "hconv/cutoff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hconv {

namespace {

constexpr double kInfD = std::numeric_limits<double>::infinity();

// Quintic smoothstep and its integral (the bridge lives in slope space:
// phi' = 1 - S(t)).
inline double smooth5(double t) { return t * t * t * (10.0 + t * (-15.0 + 6.0 * t)); }
inline double smooth5_int(double t) {
  double t4 = t * t * t * t;
  return t4 * (2.5 + t * (-3.0 + t));
}

}  // namespace

double CutoffFunction::evaluate(double x) const {
  if (x <= 0.0) return x;
  if (x >= 2.0) return 1.0;
  const double x0 = knots.front().x;
  double f = (x - x0) / step;
  int k = std::clamp(int(f), 0, int(knots.size()) - 2);
  double t = std::clamp(f - k, 0.0, 1.0);
  const CutoffKnot &a = knots[k], &b = knots[k + 1];
  double h = step;
  double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * a.phi + (t3 - 2 * t2 + t) * h * a.dphi +
         (-2 * t3 + 3 * t2) * b.phi + (t3 - t2) * h * b.dphi;
}

double CutoffFunction::derivative(double x) const {
  if (x <= 0.0) return 1.0;
  if (x >= 2.0) return 0.0;
  const double x0 = knots.front().x;
  double f = (x - x0) / step;
  int k = std::clamp(int(f), 0, int(knots.size()) - 2);
  double t = std::clamp(f - k, 0.0, 1.0);
  const CutoffKnot &a = knots[k], &b = knots[k + 1];
  double h = step;
  double t2 = t * t;
  return ((6 * t2 - 6 * t) * a.phi + (3 * t2 - 4 * t + 1) * h * a.dphi +
          (-6 * t2 + 6 * t) * b.phi + (3 * t2 - 2 * t) * h * b.dphi) /
         h;
}

CutoffCertificate CutoffFunction::certify(double second_derivative_tol) const {
  CutoffCertificate cert;
  cert.min_margin = kInfD;
  cert.min_padded_margin = kInfD;
  cert.min_dphi = kInfD;
  cert.max_dphi = -kInfD;
  cert.max_second_derivative = -kInfD;
  const int n = int(knots.size());
  for (int k = 0; k < n; ++k) {
    const CutoffKnot& kn = knots[k];
    if (kn.x <= 0.0)
      cert.max_identity_defect = std::max(cert.max_identity_defect, std::abs(kn.phi - kn.x));
    if (kn.x >= 2.0)
      cert.max_plateau_defect = std::max(cert.max_plateau_defect, std::abs(kn.phi - 1.0));
    if (kn.x < 0.0 || kn.x > 2.0) continue;

    cert.min_dphi = std::min(cert.min_dphi, kn.dphi);
    cert.max_dphi = std::max(cert.max_dphi, kn.dphi);

    double second = 0.0;
    if (k > 0 && k + 1 < n) second = (knots[k + 1].dphi - knots[k - 1].dphi) / (2.0 * step);
    cert.max_second_derivative = std::max(cert.max_second_derivative, second);

    double margin = std::exp(2.0 * (kn.phi - kn.x)) - kn.dphi;
    double padded = margin - std::abs(second) * step / 2.0;
    if (margin < cert.min_margin) {
      cert.min_margin = margin;
      if (margin < 0.0) cert.violating_knot = k;
    }
    cert.min_padded_margin = std::min(cert.min_padded_margin, padded);
  }
  cert.ok = cert.min_margin >= 0.0 && cert.min_dphi >= 0.0 && cert.max_dphi <= 1.0 &&
            cert.max_second_derivative <= second_derivative_tol &&
            cert.max_identity_defect <= 1e-12 && cert.max_plateau_defect <= 1e-12;
  if (!cert.ok) {
    cert.message = "certification failed";
    if (cert.violating_knot >= 0)
      cert.message += " at knot x = " + std::to_string(knots[cert.violating_knot].x);
  }
  return cert;
}

CutoffFunction build_cutoff(double bridge_epsilon, double step) {
  if (!(bridge_epsilon > 0.0 && bridge_epsilon < 0.5))
    throw std::invalid_argument("build_cutoff: bridge_epsilon outside (0, 0.5)");
  if (!(step > 0.0 && step <= 1e-3)) throw std::invalid_argument("build_cutoff: step > 1e-3");

  const double a = 1.0 - bridge_epsilon, b = 1.0 + bridge_epsilon;
  auto phi_exact = [&](double x) {
    if (x <= a) return x;
    if (x >= b) return 1.0;
    double t = (x - a) / (2.0 * bridge_epsilon);
    return a + (x - a) - 2.0 * bridge_epsilon * smooth5_int(t);
  };
  auto dphi_exact = [&](double x) {
    if (x <= a) return 1.0;
    if (x >= b) return 0.0;
    return 1.0 - smooth5((x - a) / (2.0 * bridge_epsilon));
  };

  CutoffFunction out;
  out.bridge_epsilon = bridge_epsilon;
  out.step = step;
  const int n = int(std::lround(4.0 / step)) + 1;
  out.knots.resize(n);
  for (int k = 0; k < n; ++k) {
    double x = -1.0 + k * step;
    CutoffKnot kn;
    kn.x = x;
    kn.phi = phi_exact(x);
    kn.dphi = dphi_exact(x);
    kn.margin = std::exp(2.0 * (kn.phi - kn.x)) - kn.dphi;
    out.knots[k] = kn;
  }
  CutoffCertificate cert = out.certify();
  if (!cert.ok) throw std::runtime_error("build_cutoff: " + cert.message);
  return out;
}

double phi_n(const CutoffFunction& phi, int n, double x) { return n + phi.evaluate(x - n); }

// ---------------------------------------------------------------------------
// h_n construction
// ---------------------------------------------------------------------------

HnField build_hn(const ConformalMetricField& base, const CutoffFunction& phi, int n) {
  if (n < 0) throw std::invalid_argument("build_hn: n < 0");
  const Chart& ch = base.chart;
  if (ch.kind != ChartKind::North)
    throw std::invalid_argument("build_hn: base field must live in the north chart");
  const double plateau = n + 1.0;

  HnField out;
  out.n = n;

  // North chart: phi_n(u) on the mask, n+1 elsewhere.
  {
    GridD u(ch.nx, ch.ny, plateau);
    GridB mask(ch.nx, ch.ny, 1);
    for (int j = 0; j < ch.ny; ++j) {
      for (int i = 0; i < ch.nx; ++i) {
        if (!base.masked(i, j)) continue;
        if (std::abs(ch.cz(i, j)) > 1.0)
          throw std::invalid_argument("build_hn: mask extends beyond the chart's unit disk");
        u(i, j) = phi_n(phi, n, base.u(i, j));
        // Collar check: masked cell adjacent to the complement must already
        // be saturated (u >= n+2) for h_n to be smooth across dU at grid
        // resolution.
        bool adjacent = false;
        for (auto [di, dj] : {std::pair{1, 0}, std::pair{-1, 0}, std::pair{0, 1}, std::pair{0, -1}}) {
          int ii = i + di, jj = j + dj;
          if (!base.mask.in_bounds(ii, jj) || !base.masked(ii, jj)) adjacent = true;
        }
        if (adjacent && base.u(i, j) < n + 2.0) out.collar_flags.push_back({i, j});
      }
    }
    out.field.north = ConformalMetricField(ch, std::move(u), std::move(mask));
  }

  // South chart: the opposite hemisphere is in the complement (exactly n+1);
  // the band beyond the south unit disk belongs to U and takes phi_n of the
  // interpolated base u (only its saturated part influences reported cells).
  {
    Chart sch(ChartKind::South, ch.nx, ch.ny, ch.x0, ch.x1, ch.y0, ch.y1);
    GridD u(sch.nx, sch.ny, plateau);
    GridB mask(sch.nx, sch.ny, 1);
    for (int j = 0; j < sch.ny; ++j) {
      for (int i = 0; i < sch.nx; ++i) {
        Complex zs = sch.cz(i, j);
        double rs = std::abs(zs);
        if (rs <= 1.0) continue;  // complement hemisphere
        Complex zn = 1.0 / zs;    // transition to the north chart
        double fi, fj;
        ch.locate(zn, fi, fj);
        int i0 = int(std::floor(fi)), j0 = int(std::floor(fj));
        bool covered = true;
        for (int dj2 = 0; dj2 <= 1 && covered; ++dj2)
          for (int di2 = 0; di2 <= 1 && covered; ++di2)
            if (!base.mask.in_bounds(i0 + di2, j0 + dj2) || !base.masked(i0 + di2, j0 + dj2))
              covered = false;
        if (covered) u(i, j) = phi_n(phi, n, bilinear(ch, base.u, zn));
      }
    }
    out.field.south = ConformalMetricField(sch, std::move(u), std::move(mask));
  }
  return out;
}

RegionDecomposition region_decomposition(const ConformalMetricField& base, int n) {
  const Chart& ch = base.chart;
  RegionDecomposition out;
  out.u_le_n = GridB(ch.nx, ch.ny, 0);
  out.u_n_to_np1 = GridB(ch.nx, ch.ny, 0);
  out.u_le_np1 = GridB(ch.nx, ch.ny, 0);
  out.u_gt_np1 = GridB(ch.nx, ch.ny, 0);
  for (int j = 0; j < ch.ny; ++j) {
    for (int i = 0; i < ch.nx; ++i) {
      if (!base.masked(i, j)) {
        out.u_gt_np1(i, j) = 1;  // complement of U
        continue;
      }
      double u = base.u(i, j);
      if (u <= n) out.u_le_n(i, j) = 1;
      else if (u <= n + 1.0) out.u_n_to_np1(i, j) = 1;
      else out.u_gt_np1(i, j) = 1;
      if (u <= n + 1.0) out.u_le_np1(i, j) = 1;
    }
  }
  for (int j = 0; j < ch.ny && out.partition_ok; ++j)
    for (int i = 0; i < ch.nx; ++i)
      if (out.u_le_n(i, j) + out.u_n_to_np1(i, j) + out.u_gt_np1(i, j) != 1) {
        out.partition_ok = false;
        break;
      }
  return out;
}

double kmax_estimate(double epsilon, double gradient_bound, const CutoffFunction& phi) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("kmax_estimate: epsilon");
  if (gradient_bound < 0.0) throw std::invalid_argument("kmax_estimate: C < 0");
  const double C2 = gradient_bound * gradient_bound;
  double kmax = 0.0;
  const int n = int(phi.knots.size());
  for (int k = 0; k < n; ++k) {
    const CutoffKnot& kn = phi.knots[k];
    if (kn.x < 0.0 || kn.x > 2.0) continue;
    double second = 0.0;
    if (k > 0 && k + 1 < n) second = (phi.knots[k + 1].dphi - phi.knots[k - 1].dphi) / (2.0 * phi.step);
    double term2 = (1.0 - kn.dphi) * std::exp(-2.0 * kn.phi);
    double term3 = std::exp(2.0 * (kn.x - kn.phi)) * std::max(0.0, -second) * C2;
    kmax = std::max(kmax, term2 + term3);
  }
  return kmax;
}

double measured_gradient_bound(const ConformalMetricField& base) {
  // The 2-cell collar along the mask boundary is marked unreliable (centered
  // differences across the blow-up of u); the sup is taken outside it.
  GradientField g = gradient_norm(base, MetricRef::H);
  GridB collar = collar_mask(base.mask, 2);
  double sup = 0.0;
  for (int j = 0; j < base.chart.ny; ++j)
    for (int i = 0; i < base.chart.nx; ++i)
      if (g.valid(i, j) && !collar(i, j)) sup = std::max(sup, g.norm(i, j));
  return sup;
}

// ---------------------------------------------------------------------------
// Curvature report
// ---------------------------------------------------------------------------

namespace {

void fold_stat(RegionStats& s, double K, double err) {
  if (s.cells == 0) {
    s.min_K = s.max_K = K;
  } else {
    s.min_K = std::min(s.min_K, K);
    s.max_K = std::max(s.max_K, K);
  }
  s.max_abs_err = std::max(s.max_abs_err, err);
  ++s.cells;
}

}  // namespace

ApproxCurvatureReport curvature_report(const HnField& hn, const ConformalMetricField& base,
                                       const CutoffFunction& phi, double epsilon,
                                       double gradient_bound, std::optional<double> expected_K,
                                       const ApproxTolerances& tol, bool acknowledge_collar_flags) {
  if (!hn.collar_flags.empty() && !acknowledge_collar_flags)
    throw std::runtime_error("curvature_report: unacknowledged collar flags on h_n");

  ApproxCurvatureReport rep;
  rep.n = hn.n;
  rep.epsilon = epsilon;
  rep.gradient_bound = gradient_bound;
  rep.kmax = kmax_estimate(epsilon, gradient_bound, phi);
  rep.first_term_min = 0.0;
  rep.first_term_max = -1.0;
  const int n = hn.n;
  const double plateau_K = std::exp(-2.0 * (n + 1.0));

  CurvatureField Kbase;
  if (!expected_K) Kbase = curvature(base);

  for (const ConformalMetricField* f : {&hn.field.north, &hn.field.south}) {
    const bool is_north = (f == &hn.field.north);
    CurvatureField K = curvature(*f);
    const Chart& ch = f->chart;
    for (int j = 0; j < ch.ny; ++j) {
      for (int i = 0; i < ch.nx; ++i) {
        if (!K.valid(i, j)) continue;
        if (std::abs(ch.cz(i, j)) > 1.0) continue;  // counted by the other chart
        double k = K.K(i, j);

        // Classify by the base u (south disk cells are all complement).
        bool in_U = is_north && base.masked(i, j);
        double u = in_U ? base.u(i, j) : kInfD;

        if (in_U && u <= n) {
          double ref = expected_K ? *expected_K : (Kbase.valid(i, j) ? Kbase.K(i, j) : k);
          double err = std::abs(k - ref);
          fold_stat(rep.interior, k, err);
          if (err > tol.interior)
            rep.violations.push_back({ch.kind, i, j, k, "interior |K_n - K| > tol"});
        } else if (in_U && u < n + 2.0) {
          fold_stat(rep.transition, k, 0.0);
          if (k < -1.0 + epsilon - tol.window || k > rep.kmax + tol.window)
            rep.violations.push_back({ch.kind, i, j, k, "transition K_n outside window"});
          // First term of the three-term expansion, bounded in [-1+eps, 0].
          double ref = expected_K ? *expected_K : (Kbase.valid(i, j) ? Kbase.K(i, j) : 0.0);
          double pn = phi_n(phi, n, u);
          double t1 = phi.derivative(u - n) * std::exp(2.0 * (u - pn)) * ref;
          if (rep.first_term_max < rep.first_term_min) {
            rep.first_term_min = rep.first_term_max = t1;
          } else {
            rep.first_term_min = std::min(rep.first_term_min, t1);
            rep.first_term_max = std::max(rep.first_term_max, t1);
          }
          if (t1 < -1.0 + epsilon - tol.window || t1 > tol.window)
            rep.violations.push_back({ch.kind, i, j, t1, "transition first term outside [-1+eps, 0]"});
        } else {
          double err = std::abs(k - plateau_K);
          fold_stat(rep.plateau, k, err);
          if (err > tol.plateau)
            rep.violations.push_back({ch.kind, i, j, k, "plateau |K_n - e^{-2(n+1)}| > tol"});
        }
      }
    }
  }
  rep.pass = rep.violations.empty();
  return rep;
}

}  // namespace hconv
