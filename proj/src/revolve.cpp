#include "hconv/revolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

namespace hconv {

namespace {

// Cubic Hermite interpolation on a uniform grid of (value, derivative) pairs.
struct Hermite1D {
  double x0 = 0.0, h = 1.0;
  const std::vector<double>*y = nullptr, *dy = nullptr;

  double eval(double x) const {
    const auto &Y = *y, &D = *dy;
    int n = int(Y.size());
    double f = (x - x0) / h;
    int k = std::clamp(int(std::floor(f)), 0, n - 2);
    double t = std::clamp(f - k, 0.0, 1.0), t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * Y[k] + (t3 - 2 * t2 + t) * h * D[k] +
           (-2 * t3 + 3 * t2) * Y[k + 1] + (t3 - t2) * h * D[k + 1];
  }
  double deriv(double x) const {
    const auto &Y = *y, &D = *dy;
    int n = int(Y.size());
    double f = (x - x0) / h;
    int k = std::clamp(int(std::floor(f)), 0, n - 2);
    double t = std::clamp(f - k, 0.0, 1.0), t2 = t * t;
    return ((6 * t2 - 6 * t) * Y[k] + (3 * t2 - 4 * t + 1) * h * D[k] +
            (-6 * t2 + 6 * t) * Y[k + 1] + (3 * t2 - 2 * t) * h * D[k + 1]) /
           h;
  }
};

double zprime_of(double f, double df) {
  double p = 1.0 + f * f;
  double q = p - df * df;
  // Planar contact: at (numerical) admissibility equality z' is exactly 0.
  if (q < 1e-12 * p) return 0.0;
  return std::sqrt(q) / p;
}

}  // namespace

void ProfileMetric::validate() const {
  size_t n = rho.size();
  if (n < 8 || f.size() != n || df.size() != n)
    throw std::invalid_argument("ProfileMetric: need >= 8 consistent samples");
  double h = spacing();
  for (size_t k = 1; k < n; ++k)
    if (std::abs((rho[k] - rho[k - 1]) - h) > 1e-9 * std::max(1.0, rho.back()))
      throw std::invalid_argument("ProfileMetric: samples not uniformly spaced");
  for (size_t k = 0; k < n; ++k) {
    bool endpoint = (k == 0 || k + 1 == n);
    if (f[k] < 0.0 || (!endpoint && !(f[k] > 0.0)))
      throw std::invalid_argument("ProfileMetric: f must be positive on the interior, rho = " +
                                  std::to_string(rho[k]));
  }
}

ProfileMetric::Admissibility ProfileMetric::admissibility(double tol) const {
  Admissibility adm;
  for (size_t k = 0; k < rho.size(); ++k) {
    double slack = 1.0 + f[k] * f[k] - df[k] * df[k];
    if (slack < -tol) {
      adm.ok = false;
      adm.first_violation_rho = rho[k];
      return adm;
    }
    if (slack <= tol) adm.equality_samples.push_back(int(k));
  }
  return adm;
}

ProfileMetric ProfileMetric::from_function(const std::function<double(double)>& f,
                                           const std::function<double(double)>& df, double L,
                                           int n) {
  ProfileMetric p;
  p.rho.resize(n);
  p.f.resize(n);
  p.df.resize(n);
  for (int k = 0; k < n; ++k) {
    p.rho[k] = L * k / (n - 1);
    p.f[k] = f(p.rho[k]);
    p.df[k] = df(p.rho[k]);
  }
  return p;
}

ProfileMetric ProfileMetric::sphere(double r, int n) {
  double S = std::sinh(r);
  return from_function([S](double x) { return S * std::sin(x / S); },
                       [S](double x) { return std::cos(x / S); }, kPi * S, n);
}

ProfileMetric ProfileMetric::horosphere(double L, int n) {
  return from_function([](double x) { return x; }, [](double) { return 1.0; }, L, n);
}

ProfileMetric ProfileMetric::equidistant(double d, double L, int n) {
  double C = std::cosh(d);
  return from_function([C](double x) { return C * std::sinh(x / C); },
                       [C](double x) { return std::cosh(x / C); }, L, n);
}

ProfileMetric ProfileMetric::plane(double L, int n) {
  return from_function([](double x) { return std::sinh(x); },
                       [](double x) { return std::cosh(x); }, L, n);
}

RevolutionSurface realize(const ProfileMetric& profile) {
  profile.validate();
  auto adm = profile.admissibility();
  if (!adm.ok)
    throw std::runtime_error("realize: admissibility f'^2 <= 1 + f^2 violated at rho = " +
                             std::to_string(adm.first_violation_rho));

  RevolutionSurface out;
  out.profile = profile;
  out.planar_contact = adm.equality_samples;
  const size_t n = profile.rho.size();
  const double h = profile.spacing();
  Hermite1D fH{profile.rho[0], h, &profile.f, &profile.df};

  out.r.resize(n);
  out.z.resize(n);
  for (size_t k = 0; k < n; ++k) out.r[k] = std::asinh(profile.f[k]);
  out.z[0] = 0.0;
  auto rhs = [&](double s) { return zprime_of(fH.eval(s), fH.deriv(s)); };
  for (size_t k = 0; k + 1 < n; ++k) {
    double s = profile.rho[k];
    double k1 = rhs(s);
    double k2 = rhs(s + 0.5 * h);
    double k3 = k2;  // autonomous in z: k2 == k3 for the classical scheme
    double k4 = rhs(s + h);
    out.z[k + 1] = out.z[k] + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }

  // Residual of the isometry condition from the defining formulas at samples,
  // and consistency of the quadrature against the integrand.
  for (size_t k = 0; k < n; ++k) {
    double f = profile.f[k], df = profile.df[k];
    double rp = df / std::sqrt(1.0 + f * f);
    double zp = zprime_of(f, df);
    double res = std::abs(rp * rp + std::cosh(out.r[k]) * std::cosh(out.r[k]) * zp * zp - 1.0);
    // At planar-contact samples z' = 0 and the residual reduces to
    // |r'^2 - 1| = 0 as well.
    out.isometry_residual = std::max(out.isometry_residual, res);
    if (k > 0 && k + 1 < n) {
      double zfd = (out.z[k + 1] - out.z[k - 1]) / (2.0 * h);
      double ztrue = zp;
      // Second-order FD of z vs the integrand: bounded by the quadrature
      // error plus O(h^2 z'''); reported, not asserted.
      out.integration_consistency =
          std::max(out.integration_consistency, std::abs(zfd - ztrue));
    }
  }
  return out;
}

SurfacePatch RevolutionSurface::patch(int n_theta) const {
  const auto& p = profile;
  const size_t n = p.rho.size();
  size_t first = 0, last = n - 1;
  while (first < last && p.f[first] <= 1e-8) ++first;
  while (last > first && p.f[last] <= 1e-8) --last;
  if (last - first < 4) throw std::runtime_error("RevolutionSurface: profile degenerate");

  SurfacePatch sp;
  sp.family = "revolution";
  sp.periodic_t = true;
  sp.s0 = p.rho[first];
  sp.s1 = p.rho[last];
  sp.t0 = 0.0;
  sp.t1 = 2.0 * kPi;
  sp.ns = int(last - first + 1);
  sp.nt = n_theta;
  double zmid = 0.5 * (z.front() + z.back());
  sp.interior_ref = HPoint(Vec4(std::cosh(zmid), 0.0, 0.0, std::sinh(zmid)));

  const double h = p.spacing();
  // z' samples and second differences of f' for the curvature jets.
  auto zs = std::make_shared<std::vector<double>>(z);
  auto zp = std::make_shared<std::vector<double>>(n);
  auto ddf = std::make_shared<std::vector<double>>(n);
  auto f_copy = std::make_shared<std::vector<double>>(p.f);
  auto df_copy = std::make_shared<std::vector<double>>(p.df);
  for (size_t k = 0; k < n; ++k) (*zp)[k] = zprime_of(p.f[k], p.df[k]);
  for (size_t k = 0; k < n; ++k) {
    if (k == 0) (*ddf)[k] = (-3.0 * p.df[0] + 4.0 * p.df[1] - p.df[2]) / (2.0 * h);
    else if (k + 1 == n)
      (*ddf)[k] = (3.0 * p.df[n - 1] - 4.0 * p.df[n - 2] + p.df[n - 3]) / (2.0 * h);
    else (*ddf)[k] = (p.df[k + 1] - p.df[k - 1]) / (2.0 * h);
  }

  double x0 = p.rho[0];
  sp.jets = [x0, h, f_copy, df_copy, ddf, zs, zp](double s, double th) {
    Hermite1D fh{x0, h, f_copy.get(), df_copy.get()};
    Hermite1D dfh{x0, h, df_copy.get(), ddf.get()};
    Hermite1D zh{x0, h, zs.get(), zp.get()};
    double f = fh.eval(s), df = fh.deriv(s), d2f = dfh.deriv(s);
    double r = std::asinh(f);
    double q = 1.0 + f * f;
    double sq = std::sqrt(q);
    double rp = df / sq;
    double rpp = d2f / sq - f * df * df / (q * sq);
    double Q = std::max(0.0, q - df * df);
    double zpv = std::sqrt(Q) / q;
    double zppv = 0.0;
    if (Q > 1e-14)
      zppv = ((f * df - df * d2f) / std::sqrt(Q) * q - std::sqrt(Q) * 2.0 * f * df) / (q * q);
    double zv = zh.eval(s);

    double cr = std::cosh(r), sr = std::sinh(r), cz = std::cosh(zv), sz = std::sinh(zv);
    double ct = std::cos(th), st = std::sin(th);
    Vec4 X(cr * cz, sr * ct, sr * st, cr * sz);
    Vec4 A(sr * cz, cr * ct, cr * st, sr * sz);    // dX/dr
    Vec4 Bv(cr * sz, 0.0, 0.0, cr * cz);           // dX/dz
    Vec4 Az(sr * sz, 0.0, 0.0, sr * cz);           // dA/dz = dBv/dr
    Vec4 Bz(cr * cz, 0.0, 0.0, cr * sz);           // dBv/dz

    SurfaceJet jet;
    jet.X = X;
    jet.Xs = rp * A + zpv * Bv;
    jet.Xt = Vec4(0.0, -sr * st, sr * ct, 0.0);
    jet.Xss = rpp * A + zppv * Bv + rp * rp * X + 2.0 * rp * zpv * Az + zpv * zpv * Bz;
    jet.Xst = rp * cr * Vec4(0.0, -st, ct, 0.0);
    jet.Xtt = Vec4(0.0, -sr * ct, -sr * st, 0.0);
    return jet;
  };

  sp.X.resize(size_t(sp.ns) * sp.nt);
  for (int j = 0; j < sp.nt; ++j)
    for (int i = 0; i < sp.ns; ++i) sp.X[size_t(j) * sp.ns + i] = sp.jets(sp.sc(i), sp.tc(j)).X;
  return sp;
}

RoundTripReport round_trip_check(const ProfileMetric& profile, const RevolutionSurface& surface,
                                 int n_theta) {
  SurfacePatch sp = surface.patch(n_theta);
  RoundTripReport rep;
  rep.min_kappa2 = std::numeric_limits<double>::infinity();

  for (int pass = 0; pass < 2; ++pass) {
    bool use_jets = (pass == 0);
    FundamentalForms forms = fundamental_forms(sp, use_jets);
    double sup = 0.0, l2 = 0.0;
    long cells = 0;
    for (int j = 0; j < forms.nt; ++j) {
      for (int i = 0; i < forms.ns; ++i) {
        const FormSample& fs = forms.at(i, j);
        if (!fs.valid) continue;
        double s = sp.sc(i);
        Hermite1D fH{profile.rho[0], profile.spacing(), &profile.f, &profile.df};
        double f = fH.eval(s);
        double res = std::max({std::abs(fs.I(0, 0) - 1.0), std::abs(fs.I(0, 1)),
                               std::abs(fs.I(1, 1) - f * f)});
        sup = std::max(sup, res);
        l2 += res * res;
        ++cells;
        if (use_jets) {
          rep.min_kappa2 = std::min(rep.min_kappa2, fs.kappa2);
          if (fs.kappa2 < -1e-9) ++rep.nonconvex_samples;
        }
      }
    }
    if (use_jets) {
      rep.sup_residual = sup;
      rep.l2_residual = std::sqrt(l2 / std::max(1L, cells));
    } else {
      rep.sup_residual_sampled = sup;
    }
  }
  return rep;
}

const char* to_string(SurfaceClass c) {
  switch (c) {
    case SurfaceClass::Sphere: return "sphere";
    case SurfaceClass::Horosphere: return "horosphere";
    case SurfaceClass::Equidistant: return "equidistant";
    case SurfaceClass::Plane: return "plane";
    default: return "generic";
  }
}

Classification classify(const RevolutionSurface& surface, int n_theta) {
  SurfacePatch sp = surface.patch(n_theta);
  FundamentalForms forms = fundamental_forms(sp);
  Classification cls;
  double sum = 0.0;
  long cnt = 0;
  for (const auto& fs : forms.samples) {
    if (!fs.valid) continue;
    sum += 0.5 * (fs.kappa1 + fs.kappa2);
    cls.umbilicity_defect = std::max(cls.umbilicity_defect, fs.kappa1 - fs.kappa2);
    ++cnt;
  }
  if (cnt == 0) return cls;
  double kappa = sum / cnt;
  cls.kappa_mean = kappa;
  // Also require the mean curvature to be constant across samples.
  double spread = 0.0;
  for (const auto& fs : forms.samples)
    if (fs.valid) spread = std::max(spread, std::abs(0.5 * (fs.kappa1 + fs.kappa2) - kappa));
  if (cls.umbilicity_defect > 1e-4 || spread > 1e-4) {
    cls.kind = SurfaceClass::Generic;
    return cls;
  }
  const double tol = 1e-5;
  if (std::abs(kappa - 1.0) <= tol) {
    cls.kind = SurfaceClass::Horosphere;
  } else if (kappa > 1.0) {
    cls.kind = SurfaceClass::Sphere;
    cls.parameter = std::atanh(1.0 / kappa);  // arcoth
  } else if (kappa > tol) {
    cls.kind = SurfaceClass::Equidistant;
    cls.parameter = std::atanh(kappa);
  } else if (std::abs(kappa) <= tol) {
    cls.kind = SurfaceClass::Plane;
  } else {
    cls.kind = SurfaceClass::Generic;
  }
  return cls;
}

}  // namespace hconv
