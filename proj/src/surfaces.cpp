#include "hconv/surfaces.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace hconv {

namespace {

inline double det3(double a, double b, double c, double d, double e, double f, double g, double h,
                   double i) {
  return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g);
}

// w_mu = eps_{mu a b c} p^a q^b r^c; the Minkowski-orthogonal direction is
// n = (-w0, w1, w2, w3), since mdot(n, v) = w . v (Euclidean).
Vec4 mink_normal_dir(const Vec4& p, const Vec4& q, const Vec4& r) {
  Vec4 w;
  w[0] = +det3(p[1], p[2], p[3], q[1], q[2], q[3], r[1], r[2], r[3]);
  w[1] = -det3(p[0], p[2], p[3], q[0], q[2], q[3], r[0], r[2], r[3]);
  w[2] = +det3(p[0], p[1], p[3], q[0], q[1], q[3], r[0], r[1], r[3]);
  w[3] = -det3(p[0], p[1], p[2], q[0], q[1], q[2], r[0], r[1], r[2]);
  return Vec4(-w[0], w[1], w[2], w[3]);
}

SurfaceJet fd_jet(const SurfacePatch& p, int i, int j) {
  SurfaceJet jet;
  const double ds = p.ds(), dt = p.dt();
  jet.X = p.node(i, j);
  jet.Xs = (p.node(i + 1, j) - p.node(i - 1, j)) / (2.0 * ds);
  jet.Xt = (p.node(i, j + 1) - p.node(i, j - 1)) / (2.0 * dt);
  jet.Xss = (p.node(i + 1, j) - 2.0 * p.node(i, j) + p.node(i - 1, j)) / (ds * ds);
  jet.Xtt = (p.node(i, j + 1) - 2.0 * p.node(i, j) + p.node(i, j - 1)) / (dt * dt);
  jet.Xst = (p.node(i + 1, j + 1) - p.node(i + 1, j - 1) - p.node(i - 1, j + 1) +
             p.node(i - 1, j - 1)) /
            (4.0 * ds * dt);
  return jet;
}

}  // namespace

SurfacePatch SurfacePatch::from_samples(std::vector<Vec4> nodes, int ns, int nt, double s0,
                                        double s1, double t0, double t1,
                                        const HPoint& interior_ref) {
  if (ns < 3 || nt < 3) throw std::invalid_argument("SurfacePatch: need at least 3x3 nodes");
  if (int(nodes.size()) != ns * nt) throw std::invalid_argument("SurfacePatch: node count mismatch");
  SurfacePatch p;
  p.X = std::move(nodes);
  p.ns = ns;
  p.nt = nt;
  p.s0 = s0;
  p.s1 = s1;
  p.t0 = t0;
  p.t1 = t1;
  p.interior_ref = interior_ref;
  return p;
}

FundamentalForms fundamental_forms(const SurfacePatch& patch, bool use_jets) {
  if (patch.ns < 3 || patch.nt < 3) throw std::invalid_argument("fundamental_forms: patch too small");
  const bool analytic = use_jets && bool(patch.jets);
  FundamentalForms out;
  out.ns = patch.ns;
  out.nt = patch.nt;
  out.samples.resize(size_t(patch.ns) * patch.nt);

  for (int j = 0; j < patch.nt; ++j) {
    for (int i = 0; i < patch.ns; ++i) {
      FormSample& fs = out.samples[size_t(j) * patch.ns + i];
      if (!analytic && (i == 0 || j == 0 || i == patch.ns - 1 || j == patch.nt - 1)) continue;
      SurfaceJet jet = analytic ? patch.jets(patch.sc(i), patch.tc(j)) : fd_jet(patch, i, j);

      fs.I << mdot(jet.Xs, jet.Xs), mdot(jet.Xs, jet.Xt), mdot(jet.Xs, jet.Xt),
          mdot(jet.Xt, jet.Xt);
      double detI = fs.I.determinant();
      if (!(detI >= 1e-10)) {
        ++out.excluded;
        continue;
      }
      Vec4 n = mink_normal_dir(jet.X, jet.Xs, jet.Xt);
      double nn = mdot(n, n);
      if (!(nn > 0.0)) {
        ++out.excluded;
        continue;
      }
      n /= std::sqrt(nn);
      if (mdot(n, patch.interior_ref.x) > 0.0) n = -n;
      fs.normal = n;

      fs.II << -mdot(n, jet.Xss), -mdot(n, jet.Xst), -mdot(n, jet.Xst), -mdot(n, jet.Xtt);
      fs.B = fs.I.inverse() * fs.II;
      fs.III = fs.II * fs.I.inverse() * fs.II;

      // (kappa1 - kappa2)^2 written to avoid the tr^2 - 4 det cancellation,
      // which costs sqrt(eps) accuracy on umbilic samples.
      double tr = fs.B.trace();
      double d11 = fs.B(0, 0) - fs.B(1, 1);
      double disc = std::sqrt(std::max(0.0, d11 * d11 + 4.0 * fs.B(0, 1) * fs.B(1, 0)));
      fs.kappa1 = 0.5 * (tr + disc);
      fs.kappa2 = 0.5 * (tr - disc);
      fs.valid = true;

      out.max_II_consistency =
          std::max(out.max_II_consistency, (fs.II - fs.I * fs.B).cwiseAbs().maxCoeff());
      out.max_III_consistency = std::max(
          out.max_III_consistency, (fs.III - fs.B.transpose() * fs.I * fs.B).cwiseAbs().maxCoeff());
      Eigen::Matrix2d ib = fs.I * fs.B;
      out.max_selfadjoint = std::max(out.max_selfadjoint, (ib - ib.transpose()).cwiseAbs().maxCoeff());
    }
  }
  return out;
}

IntrinsicCurvature intrinsic_curvature_brioschi(const FundamentalForms& forms, double ds,
                                                double dt) {
  const int ns = forms.ns, nt = forms.nt;
  IntrinsicCurvature out;
  out.K = GridD(ns, nt, 0.0);
  out.valid = GridB(ns, nt, 0);
  auto ok = [&](int i, int j) {
    return i >= 0 && i < ns && j >= 0 && j < nt && forms.at(i, j).valid;
  };
  auto E = [&](int i, int j) { return forms.at(i, j).I(0, 0); };
  auto F = [&](int i, int j) { return forms.at(i, j).I(0, 1); };
  auto G = [&](int i, int j) { return forms.at(i, j).I(1, 1); };

  for (int j = 1; j < nt - 1; ++j) {
    for (int i = 1; i < ns - 1; ++i) {
      bool stencil = true;
      for (int dj = -1; dj <= 1 && stencil; ++dj)
        for (int di = -1; di <= 1 && stencil; ++di)
          if (!ok(i + di, j + dj)) stencil = false;
      if (!stencil) continue;

      double Es = (E(i + 1, j) - E(i - 1, j)) / (2 * ds), Et = (E(i, j + 1) - E(i, j - 1)) / (2 * dt);
      double Gs = (G(i + 1, j) - G(i - 1, j)) / (2 * ds), Gt = (G(i, j + 1) - G(i, j - 1)) / (2 * dt);
      double Fs = (F(i + 1, j) - F(i - 1, j)) / (2 * ds), Ft = (F(i, j + 1) - F(i, j - 1)) / (2 * dt);
      double Ett = (E(i, j + 1) - 2 * E(i, j) + E(i, j - 1)) / (dt * dt);
      double Gss = (G(i + 1, j) - 2 * G(i, j) + G(i - 1, j)) / (ds * ds);
      double Fst = (F(i + 1, j + 1) - F(i + 1, j - 1) - F(i - 1, j + 1) + F(i - 1, j - 1)) /
                   (4 * ds * dt);

      double e = E(i, j), f = F(i, j), g = G(i, j);
      double m1 = det3(-0.5 * Ett + Fst - 0.5 * Gss, 0.5 * Es, Fs - 0.5 * Et,  //
                       Ft - 0.5 * Gs, e, f,                                    //
                       0.5 * Gt, f, g);
      double m2 = det3(0.0, 0.5 * Et, 0.5 * Gs,  //
                       0.5 * Et, e, f,           //
                       0.5 * Gs, f, g);
      double den = e * g - f * f;
      out.K(i, j) = (m1 - m2) / (den * den);
      out.valid(i, j) = 1;
    }
  }
  return out;
}

GaussCodazzi gauss_codazzi_residual(const FundamentalForms& forms, const IntrinsicCurvature& K,
                                    double ds, double dt) {
  const int ns = forms.ns, nt = forms.nt;
  GaussCodazzi out;
  out.gauss_res = GridD(ns, nt, 0.0);
  out.codazzi_res = GridD(ns, nt, 0.0);
  out.valid = GridB(ns, nt, 0);

  for (int j = 1; j < nt - 1; ++j) {
    for (int i = 1; i < ns - 1; ++i) {
      if (!K.valid(i, j)) continue;
      bool stencil = forms.at(i, j).valid && forms.at(i + 1, j).valid && forms.at(i - 1, j).valid &&
                     forms.at(i, j + 1).valid && forms.at(i, j - 1).valid;
      if (!stencil) continue;
      const FormSample& fs = forms.at(i, j);

      out.gauss_res(i, j) = std::abs(fs.B.determinant() - (K.K(i, j) + 1.0));

      // Christoffel symbols of I by centered differences.
      Eigen::Matrix2d dI[2];
      dI[0] = (forms.at(i + 1, j).I - forms.at(i - 1, j).I) / (2 * ds);
      dI[1] = (forms.at(i, j + 1).I - forms.at(i, j - 1).I) / (2 * dt);
      Eigen::Matrix2d Iinv = fs.I.inverse();
      double Gamma[2][2][2];
      for (int k = 0; k < 2; ++k)
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b) {
            double sum = 0.0;
            for (int l = 0; l < 2; ++l)
              sum += Iinv(k, l) * (dI[a](b, l) + dI[b](a, l) - dI[l](a, b));
            Gamma[k][a][b] = 0.5 * sum;
          }
      Eigen::Matrix2d dB[2];
      dB[0] = (forms.at(i + 1, j).B - forms.at(i - 1, j).B) / (2 * ds);
      dB[1] = (forms.at(i, j + 1).B - forms.at(i, j - 1).B) / (2 * dt);
      // V^c = (nabla_1 B)(e_2)^c - (nabla_2 B)(e_1)^c; the lower-index
      // Christoffel terms cancel by symmetry.
      Eigen::Vector2d V;
      for (int c = 0; c < 2; ++c) {
        double v = dB[0](c, 1) - dB[1](c, 0);
        for (int d = 0; d < 2; ++d)
          v += Gamma[c][0][d] * fs.B(d, 1) - Gamma[c][1][d] * fs.B(d, 0);
        V[c] = v;
      }
      out.codazzi_res(i, j) = std::sqrt(std::max(0.0, double(V.transpose() * fs.I * V)));
      out.valid(i, j) = 1;
      out.max_gauss = std::max(out.max_gauss, out.gauss_res(i, j));
      out.max_codazzi = std::max(out.max_codazzi, out.codazzi_res(i, j));
    }
  }
  return out;
}

GaussMapField gauss_map(const SurfacePatch& patch, const FundamentalForms& forms) {
  GaussMapField out;
  out.ns = forms.ns;
  out.nt = forms.nt;
  out.G.resize(size_t(forms.ns) * forms.nt);
  out.dilatation = GridD(forms.ns, forms.nt, 1.0);
  out.valid = GridB(forms.ns, forms.nt, 0);
  for (int j = 0; j < forms.nt; ++j) {
    for (int i = 0; i < forms.ns; ++i) {
      const FormSample& fs = forms.at(i, j);
      if (!fs.valid) continue;
      if (fs.kappa2 <= -1.0)
        throw std::runtime_error("gauss_map: principal curvature <= -1, normal ray degenerate");
      Vec4 X = patch.node(i, j);
      Vec4 N = X + fs.normal;
      out.G[size_t(j) * forms.ns + i] = IdealPoint(Vec3(N.tail<3>() / N[0]));
      double dil = (1.0 + fs.kappa1) / (1.0 + fs.kappa2);
      out.dilatation(i, j) = dil;
      out.valid(i, j) = 1;
      out.sup_dilatation = std::max(out.sup_dilatation, dil);
    }
  }
  return out;
}

double parallel_area_factor(const Eigen::Matrix2d& B, double t) {
  double c = std::cosh(t), s = std::sinh(t);
  return c * c + c * s * B.trace() + s * s * B.determinant();
}

double offset_principal_curvature(double kappa, double t) {
  double th = std::tanh(t);
  return (kappa + th) / (1.0 + kappa * th);
}

WindowReport curvature_window_check(const FundamentalForms& forms, WindowMode mode,
                                    const WindowParams& params) {
  WindowReport rep;
  bool first = true;
  double lo = params.lo, hi = params.hi;
  if (mode == WindowMode::NearUmbilic) {
    lo = 1.0 - params.lo;  // params.lo doubles as k0 in near-umbilic mode
    hi = 1.0 + params.lo;
  }
  for (int j = 0; j < forms.nt; ++j) {
    for (int i = 0; i < forms.ns; ++i) {
      const FormSample& fs = forms.at(i, j);
      if (!fs.valid) continue;
      ++rep.total;
      if (first) {
        rep.min_kappa = fs.kappa2;
        rep.max_kappa = fs.kappa1;
        first = false;
      } else {
        rep.min_kappa = std::min(rep.min_kappa, fs.kappa2);
        rep.max_kappa = std::max(rep.max_kappa, fs.kappa1);
      }
      if (fs.kappa2 >= lo && fs.kappa1 <= hi) ++rep.passed;
      if (mode == WindowMode::NearUmbilic && params.intrinsic && params.intrinsic->valid(i, j) &&
          std::abs(params.intrinsic->K(i, j)) <= params.K0) {
        ++rep.near_flat_cells;
        rep.max_umbilic_defect =
            std::max({rep.max_umbilic_defect, std::abs(fs.kappa1 - 1.0), std::abs(fs.kappa2 - 1.0)});
      }
    }
  }
  rep.all_pass = rep.passed == rep.total && rep.total > 0;
  return rep;
}

// ---------------------------------------------------------------------------
// Boundary data assembly
// ---------------------------------------------------------------------------

BoundaryData boundary_data_assembly(const SurfacePatch& patch, const FundamentalForms& forms,
                                    const GaussMapField& gmap) {
  BoundaryData out;
  const int ns = forms.ns, nt = forms.nt;
  SurfaceJet jet;
  const bool analytic = bool(patch.jets);

  // Fold detection: bucket Gauss images on an angular lattice, compare within
  // neighboring buckets.
  std::map<std::tuple<int, int, int>, std::vector<std::pair<int, int>>> bins;
  auto key_of = [](const Vec3& v) {
    return std::tuple<int, int, int>(int(std::floor(v[0] / 1e-3)), int(std::floor(v[1] / 1e-3)),
                                     int(std::floor(v[2] / 1e-3)));
  };

  double area = 0.0;
  for (int j = 0; j < nt; ++j) {
    for (int i = 0; i < ns; ++i) {
      const FormSample& fs = forms.at(i, j);
      if (!fs.valid || !gmap.valid(i, j)) continue;
      if (analytic) jet = patch.jets(patch.sc(i), patch.tc(j));
      else jet = fd_jet(patch, i, j);

      // dG from the Weingarten map: d(X + n) = (Id + B) applied in the
      // coordinate basis.
      Vec4 Ns = jet.Xs + fs.B(0, 0) * jet.Xs + fs.B(1, 0) * jet.Xt;
      Vec4 Nt = jet.Xt + fs.B(0, 1) * jet.Xs + fs.B(1, 1) * jet.Xt;
      Vec4 N = jet.X + fs.normal;
      Vec3 v = N.tail<3>() / N[0];
      Vec3 vs = (Ns.tail<3>() - v * Ns[0]) / N[0];
      Vec3 vt = (Nt.tail<3>() - v * Nt[0]) / N[0];
      Eigen::Matrix2d Gc1;
      Gc1 << vs.dot(vs), vs.dot(vt), vs.dot(vt), vt.dot(vt);
      double detG = Gc1.determinant();
      if (!(detG > 1e-300)) continue;

      BoundaryDataSample smp;
      smp.dir = gmap.G[size_t(j) * ns + i].v;
      smp.u = 0.25 * std::log(fs.I.determinant() / detG);
      smp.dilatation = gmap.dilatation(i, j);
      smp.i = i;
      smp.j = j;
      out.samples.push_back(smp);
      out.sup_dilatation = std::max(out.sup_dilatation, smp.dilatation);
      if (i > 0 && j > 0 && i < ns - 1 && j < nt - 1) area += std::sqrt(detG) * patch.ds() * patch.dt();

      auto [kx, ky, kz] = key_of(smp.dir);
      for (int dz = -1; dz <= 1; ++dz)
        for (int dy = -1; dy <= 1; ++dy)
          for (int dx = -1; dx <= 1; ++dx) {
            auto it = bins.find({kx + dx, ky + dy, kz + dz});
            if (it == bins.end()) continue;
            for (auto [pi, pj] : it->second) {
              int dj2 = std::abs(pj - j);
              if (patch.periodic_t) dj2 = std::min(dj2, nt - 1 - dj2);
              if (std::abs(pi - i) + dj2 <= 2) continue;
              const Vec3& other = gmap.G[size_t(pj) * ns + pi].v;
              if ((other - smp.dir).norm() < 1e-7)
                throw std::runtime_error("boundary_data_assembly: Gauss-map fold detected");
            }
          }
      bins[{kx, ky, kz}].push_back({i, j});
    }
  }
  out.coverage_fraction = area / (4.0 * kPi);
  return out;
}

// ---------------------------------------------------------------------------
// Registered analytic families
// ---------------------------------------------------------------------------

namespace {

struct SphereDirs {
  Vec3 nu, nu_t, nu_p, nu_tt, nu_tp, nu_pp;
};

SphereDirs sphere_dirs(double th, double ph) {
  double st = std::sin(th), ct = std::cos(th), sp = std::sin(ph), cp = std::cos(ph);
  SphereDirs d;
  d.nu = Vec3(st * cp, st * sp, ct);
  d.nu_t = Vec3(ct * cp, ct * sp, -st);
  d.nu_p = Vec3(-st * sp, st * cp, 0);
  d.nu_tt = -d.nu;
  d.nu_tp = Vec3(-ct * sp, ct * cp, 0);
  d.nu_pp = Vec3(-st * cp, -st * sp, 0);
  return d;
}

Vec4 lift(double time, const Vec3& space) {
  Vec4 v;
  v[0] = time;
  v.tail<3>() = space;
  return v;
}

}  // namespace

SurfacePatch SurfacePatch::geodesic_sphere(double r, int ns, int nt, double theta0, double theta1,
                                           double phi0, double phi1) {
  SurfacePatch p;
  p.family = "sphere";
  p.periodic_t = std::abs((phi1 - phi0) - 2.0 * kPi) < 1e-12;
  p.s0 = theta0;
  p.s1 = theta1;
  p.t0 = phi0;
  p.t1 = phi1;
  p.ns = ns;
  p.nt = nt;
  p.interior_ref = HPoint::origin();
  const double C = std::cosh(r), S = std::sinh(r);
  p.jets = [C, S](double th, double ph) {
    SphereDirs d = sphere_dirs(th, ph);
    SurfaceJet j;
    j.X = lift(C, S * d.nu);
    j.Xs = lift(0, S * d.nu_t);
    j.Xt = lift(0, S * d.nu_p);
    j.Xss = lift(0, S * d.nu_tt);
    j.Xst = lift(0, S * d.nu_tp);
    j.Xtt = lift(0, S * d.nu_pp);
    return j;
  };
  p.X.resize(size_t(ns) * nt);
  for (int j = 0; j < nt; ++j)
    for (int i = 0; i < ns; ++i) p.X[size_t(j) * ns + i] = p.jets(p.sc(i), p.tc(j)).X;
  return p;
}

SurfacePatch SurfacePatch::horosphere(double half_extent, int ns, int nt) {
  SurfacePatch p;
  p.family = "horosphere";
  p.s0 = -half_extent;
  p.s1 = half_extent;
  p.t0 = -half_extent;
  p.t1 = half_extent;
  p.ns = ns;
  p.nt = nt;
  p.interior_ref = HPoint(Vec4(std::cosh(0.5), 0, 0, std::sinh(0.5)));
  p.jets = [](double x, double y) {
    double q = 0.5 * (x * x + y * y);
    SurfaceJet j;
    j.X = Vec4(1.0 + q, x, y, q);
    j.Xs = Vec4(x, 1, 0, x);
    j.Xt = Vec4(y, 0, 1, y);
    j.Xss = Vec4(1, 0, 0, 1);
    j.Xst = Vec4(0, 0, 0, 0);
    j.Xtt = Vec4(1, 0, 0, 1);
    return j;
  };
  p.X.resize(size_t(ns) * nt);
  for (int j = 0; j < nt; ++j)
    for (int i = 0; i < ns; ++i) p.X[size_t(j) * ns + i] = p.jets(p.sc(i), p.tc(j)).X;
  return p;
}

SurfacePatch SurfacePatch::equidistant(double d, double rho1, int ns, int nt, double rho0) {
  SurfacePatch p;
  p.family = "equidistant";
  p.periodic_t = true;
  p.s0 = rho0;
  p.s1 = rho1;
  p.t0 = 0.0;
  p.t1 = 2.0 * kPi;
  p.ns = ns;
  p.nt = nt;
  p.interior_ref = HPoint::origin();
  const double C = std::cosh(d), S = std::sinh(d);
  p.jets = [C, S](double rho, double psi) {
    double ch = std::cosh(rho), sh = std::sinh(rho), cp = std::cos(psi), sp = std::sin(psi);
    SurfaceJet j;
    j.X = Vec4(C * ch, C * sh * cp, C * sh * sp, S);
    j.Xs = Vec4(C * sh, C * ch * cp, C * ch * sp, 0);
    j.Xt = Vec4(0, -C * sh * sp, C * sh * cp, 0);
    j.Xss = Vec4(C * ch, C * sh * cp, C * sh * sp, 0);
    j.Xst = Vec4(0, -C * ch * sp, C * ch * cp, 0);
    j.Xtt = Vec4(0, -C * sh * cp, -C * sh * sp, 0);
    return j;
  };
  p.X.resize(size_t(ns) * nt);
  for (int j = 0; j < nt; ++j)
    for (int i = 0; i < ns; ++i) p.X[size_t(j) * ns + i] = p.jets(p.sc(i), p.tc(j)).X;
  return p;
}

SurfacePatch SurfacePatch::perturbed_sphere(double r, double amp, int ns, int nt, double theta0,
                                            double theta1) {
  SurfacePatch p;
  p.family = "perturbed_sphere";
  p.periodic_t = true;
  p.s0 = theta0;
  p.s1 = theta1;
  p.t0 = 0.0;
  p.t1 = 2.0 * kPi;
  p.ns = ns;
  p.nt = nt;
  p.interior_ref = HPoint::origin();
  // Radial graph R = r + amp * nu_x nu_z; g and its derivatives in (theta,
  // phi): g = sin th cos th cos ph.
  p.jets = [r, amp](double th, double ph) {
    SphereDirs d = sphere_dirs(th, ph);
    double st = std::sin(th), ct = std::cos(th), sp = std::sin(ph), cp = std::cos(ph);
    double g = st * ct * cp;
    double g_t = std::cos(2 * th) * cp;
    double g_tt = -2.0 * std::sin(2 * th) * cp;
    double g_p = -st * ct * sp;
    double g_pp = -st * ct * cp;
    double g_tp = -std::cos(2 * th) * sp;
    double R = r + amp * g, Rt = amp * g_t, Rp = amp * g_p;
    double Rtt = amp * g_tt, Rpp = amp * g_pp, Rtp = amp * g_tp;
    double C = std::cosh(R), S = std::sinh(R);
    SurfaceJet j;
    j.X = lift(C, S * d.nu);
    j.Xs = lift(S * Rt, C * Rt * d.nu + S * d.nu_t);
    j.Xt = lift(S * Rp, C * Rp * d.nu + S * d.nu_p);
    j.Xss = lift(C * Rt * Rt + S * Rtt,
                 S * Rt * Rt * d.nu + C * Rtt * d.nu + 2 * C * Rt * d.nu_t + S * d.nu_tt);
    j.Xst = lift(C * Rt * Rp + S * Rtp, S * Rt * Rp * d.nu + C * Rtp * d.nu + C * Rt * d.nu_p +
                                            C * Rp * d.nu_t + S * d.nu_tp);
    j.Xtt = lift(C * Rp * Rp + S * Rpp,
                 S * Rp * Rp * d.nu + C * Rpp * d.nu + 2 * C * Rp * d.nu_p + S * d.nu_pp);
    return j;
  };
  p.X.resize(size_t(ns) * nt);
  for (int j = 0; j < nt; ++j)
    for (int i = 0; i < ns; ++i) p.X[size_t(j) * ns + i] = p.jets(p.sc(i), p.tc(j)).X;
  return p;
}

}  // namespace hconv
