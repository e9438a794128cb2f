#include "hconv/domains.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

namespace hconv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Orthonormal tangent basis at a unit vector.
void tangent_basis(const Vec3& c, Vec3& t1, Vec3& t2) {
  Vec3 ref = std::abs(c[2]) < 0.9 ? Vec3(0, 0, 1) : Vec3(1, 0, 0);
  t1 = (ref - ref.dot(c) * c).normalized();
  t2 = c.cross(t1);
}

double golden_min(const std::function<double(double)>& f, double a, double b, int iters) {
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int k = 0; k < iters; ++k) {
    if (f1 < f2) {
      b = x2; x2 = x1; f2 = f1;
      x1 = b - gr * (b - a); f1 = f(x1);
    } else {
      a = x1; x1 = x2; f1 = f2;
      x2 = a + gr * (b - a); f2 = f(x2);
    }
  }
  return f1 < f2 ? x1 : x2;
}

}  // namespace

double cap_hyperbolic_log_density(const SphericalCap& cap, const Vec3& p) {
  double sigma = sphere_distance(cap.center, p.normalized());
  double den = std::cos(sigma) - std::cos(cap.radius);
  if (!(den > 0.0))
    throw std::invalid_argument("cap_hyperbolic_log_density: point not inside the cap");
  return std::log(std::sin(cap.radius)) - std::log(den);
}

// ---------------------------------------------------------------------------
// QuasidiskDomain
// ---------------------------------------------------------------------------

QuasidiskDomain::QuasidiskDomain(std::vector<Complex> coefficients, double qc_constant_hint)
    : coeffs_(std::move(coefficients)), qc_hint_(qc_constant_hint) {
  if (coeffs_.size() < 2) throw std::invalid_argument("QuasidiskDomain: need degree >= 1");
  if (qc_hint_ < 1.0) throw std::invalid_argument("QuasidiskDomain: qc hint < 1");

  // Validate injectivity and a nonvanishing derivative on a 64x64 sample of
  // the disk.
  const int n = 64;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      Complex z(-1.0 + 2.0 * (i + 0.5) / n, -1.0 + 2.0 * (j + 0.5) / n);
      if (std::norm(z) > 1.0) continue;
      if (std::abs(map_derivative(z)) < 1e-12)
        throw std::invalid_argument("QuasidiskDomain: vanishing derivative on the disk");
      sample_z_.push_back(z);
      sample_f_.push_back(map(z));
    }
  }
  for (size_t p = 0; p < sample_z_.size(); ++p) {
    for (size_t q = p + 1; q < sample_z_.size(); ++q) {
      if (std::abs(sample_f_[p] - sample_f_[q]) < 1e-9 &&
          std::abs(sample_z_[p] - sample_z_[q]) > 1e-9)
        throw std::invalid_argument("QuasidiskDomain: map not injective on disk samples");
    }
  }
}

Complex QuasidiskDomain::map(Complex z) const {
  Complex acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

Complex QuasidiskDomain::map_derivative(Complex z) const {
  Complex acc = 0.0;
  for (size_t k = coeffs_.size() - 1; k >= 1; --k) acc = acc * z + double(k) * coeffs_[k];
  return acc;
}

std::vector<Vec3> QuasidiskDomain::boundary_samples(int n) const {
  std::vector<Vec3> out;
  out.reserve(n);
  for (int k = 0; k < n; ++k) {
    double th = 2.0 * kPi * k / n;
    out.push_back(chart_to_sphere(ChartKind::North, map(Complex(std::cos(th), std::sin(th)))));
  }
  return out;
}

std::optional<Complex> QuasidiskDomain::invert(Complex xi) const {
  // Seed with the nearest coarse sample, then Newton.
  size_t best = 0;
  double bd = kInf;
  for (size_t k = 0; k < sample_f_.size(); ++k) {
    double d = std::abs(sample_f_[k] - xi);
    if (d < bd) { bd = d; best = k; }
  }
  Complex z = sample_z_[best];
  for (int it = 0; it < 60; ++it) {
    Complex f = map(z) - xi;
    if (std::abs(f) < 1e-13) break;
    Complex df = map_derivative(z);
    if (std::abs(df) < 1e-14) return std::nullopt;
    Complex step = f / df;
    if (std::abs(step) > 0.5) step *= 0.5 / std::abs(step);
    z -= step;
    if (std::abs(z) > 1.5) return std::nullopt;
  }
  if (std::abs(map(z) - xi) > 1e-10) return std::nullopt;
  if (std::abs(z) > 1.0 + 1e-9) return std::nullopt;
  return z;
}

bool QuasidiskDomain::contains(Complex xi) const {
  // Winding number of the boundary polyline.
  const int n = 1024;
  double winding = 0.0;
  Complex prev = map(Complex(1.0, 0.0)) - xi;
  for (int k = 1; k <= n; ++k) {
    double th = 2.0 * kPi * k / n;
    Complex cur = map(Complex(std::cos(th), std::sin(th))) - xi;
    winding += std::arg(cur / prev);
    prev = cur;
  }
  return std::abs(winding) > kPi;
}

double QuasidiskDomain::hyperbolic_log_density(Complex xi) const {
  auto z = invert(xi);
  if (!z) throw std::runtime_error("hyperbolic_log_density: point not in the domain");
  double r2 = std::norm(*z);
  double dens_chart = 2.0 / ((1.0 - r2) * std::abs(map_derivative(*z)));
  return std::log(dens_chart) - c1_chart_log_density(xi);
}

// ---------------------------------------------------------------------------
// Maximal disks
// ---------------------------------------------------------------------------

namespace {

struct ClearanceOracle {
  // Columns are boundary/complement sample directions.
  Eigen::Matrix3Xd pts;

  double operator()(const Vec3& c) const {
    double best = -1.0;
    for (int k = 0; k < pts.cols(); ++k) {
      double d = pts.col(k).dot(c);
      if (d > best) best = d;
    }
    return std::acos(std::clamp(best, -1.0, 1.0));
  }
  int count_tangent(const Vec3& c, double rho, double tol) const {
    int n = 0;
    for (int k = 0; k < pts.cols(); ++k) {
      double d = std::acos(std::clamp(pts.col(k).dot(c), -1.0, 1.0));
      if (std::abs(d - rho) < tol) ++n;
    }
    return n;
  }
};

double cap_log_density_at(const Vec3& c, double rho, const Vec3& xi, bool& ok) {
  double sigma = sphere_distance(c, xi);
  double den = std::cos(sigma) - std::cos(rho);
  if (!(den > 0.0) || rho <= 0.0 || rho >= kPi) { ok = false; return kInf; }
  ok = true;
  return std::log(std::sin(rho)) - std::log(den);
}

// Minimize the inscribed-cap density at xi over cap centers: a coarse
// Fibonacci-sphere scan seeds staged local-grid refinement.  The radius is
// always the clearance (density is strictly decreasing in the radius), and
// the minimum value is well conditioned even though the minimizing center
// can slide along the nearly flat medial-axis valley.
MaximalDisk maximal_cap_search(const ClearanceOracle& clearance, const Vec3& xi) {
  auto eval = [&](const Vec3& c, bool& ok) {
    return cap_log_density_at(c, clearance(c), xi, ok);
  };
  bool ok = false;
  double dens_xi = eval(xi, ok);
  if (!ok) throw std::runtime_error("maximal_disk: seed cap invalid (point on the boundary?)");

  // Near the boundary the admissible caps form a narrow crescent, so a
  // coarse global scan alone can miss the basin.  Run an adaptive-width
  // local walk (the window shrinks only when the minimizer stays interior)
  // from xi itself and from the best global sample, keep the better result.
  Vec3 fib_seed = xi;
  double fib_best = dens_xi;
  const int nfib = 1024;
  const double ga = kPi * (3.0 - std::sqrt(5.0));
  for (int k = 0; k < nfib; ++k) {
    double zc = 1.0 - 2.0 * (k + 0.5) / nfib;
    double rr = std::sqrt(1.0 - zc * zc);
    Vec3 cand(rr * std::cos(ga * k), rr * std::sin(ga * k), zc);
    bool vok = false;
    double v = eval(cand, vok);
    if (vok && v < fib_best) {
      fib_best = v;
      fib_seed = cand;
    }
  }

  auto walk = [&](Vec3 c, double& value) {
    bool vok = false;
    value = eval(c, vok);
    double width = std::min(0.05, std::max(1e-4, clearance(c) / 3.0));
    for (int stage = 0; stage < 300 && width > 1e-10; ++stage) {
      Vec3 t1, t2;
      tangent_basis(c, t1, t2);
      Vec3 center = c;
      for (int b = -4; b <= 4; ++b) {
        for (int a = -4; a <= 4; ++a) {
          if (a == 0 && b == 0) continue;
          Vec3 cand = (center + width * (a / 4.0) * t1 + width * (b / 4.0) * t2).normalized();
          double v = eval(cand, vok);
          if (vok && v < value - 1e-16) {
            value = v;
            c = cand;
          }
        }
      }
      if (sphere_distance(c, center) >= 0.7 * width) {
        width = std::min(width * 1.5, 0.1);  // still traveling: keep or grow
      } else {
        width *= 0.25;
      }
    }
    return c;
  };
  double v1, v2;
  Vec3 c1 = walk(xi, v1);
  Vec3 c2 = walk(fib_seed, v2);
  Vec3 c = v1 <= v2 ? c1 : c2;
  MaximalDisk out;
  out.cap.center = c;
  out.cap.radius = clearance(c);
  out.center_chart = sphere_to_chart(ChartKind::North, c);
  out.spherical_radius = out.cap.radius;
  out.tangency_count = clearance.count_tangent(c, out.cap.radius, 1e-5);
  out.saturated = out.tangency_count > int(0.9 * clearance.pts.cols());
  return out;
}

}  // namespace

MaximalDisk maximal_disk(const QuasidiskDomain& domain, Complex xi, int boundary_samples) {
  if (!domain.contains(xi)) throw std::invalid_argument("maximal_disk: xi not inside the domain");
  Vec3 xis = chart_to_sphere(ChartKind::North, xi);
  auto bnd = domain.boundary_samples(boundary_samples);
  ClearanceOracle oracle;
  oracle.pts.resize(3, bnd.size());
  for (size_t k = 0; k < bnd.size(); ++k) oracle.pts.col(k) = bnd[k];
  if (oracle(xis) < 1e-6)
    throw std::runtime_error("maximal_disk: xi within 1e-6 of the domain boundary (ill-conditioned)");
  return maximal_cap_search(oracle, xis);
}

double thurston_log_density(const QuasidiskDomain& domain, Complex xi, int boundary_samples) {
  MaximalDisk d = maximal_disk(domain, xi, boundary_samples);
  return cap_hyperbolic_log_density(d.cap, chart_to_sphere(ChartKind::North, xi));
}

// ---------------------------------------------------------------------------
// Ideal point sets and hulls
// ---------------------------------------------------------------------------

IdealPointSet::IdealPointSet(std::vector<IdealPoint> pts, bool allow_two)
    : points(std::move(pts)), allow_degenerate(allow_two) {
  size_t min_pts = allow_degenerate ? 2 : 3;
  if (points.size() < min_pts)
    throw std::invalid_argument("IdealPointSet: fewer than the minimum number of points");
  for (size_t i = 0; i < points.size(); ++i)
    for (size_t j = i + 1; j < points.size(); ++j)
      if (points[i].chordal_distance(points[j]) < 1e-9)
        throw std::invalid_argument("IdealPointSet: points not pairwise distinct");
}

double ConvexHullBoundary::convexity_residual() const {
  double worst = -kInf;
  for (const auto& f : faces)
    for (const auto& v : vertices) worst = std::max(worst, mdot(v.null_vec(), f.plane));
  return worst;
}

namespace {

Vec4 lorentz_plane(const Vec3& n, double d) {
  double s = std::sqrt(std::max(1e-300, 1.0 - d * d));
  return Vec4(d, n[0], n[1], n[2]) / s;
}

struct Tri {
  int a, b, c;
  Vec3 n;
  double d;
  bool alive = true;
};

Tri make_tri(int a, int b, int c, const std::vector<Vec3>& P, const Vec3& interior) {
  Tri t{a, b, c, Vec3::Zero(), 0.0, true};
  Vec3 n = (P[b] - P[a]).cross(P[c] - P[a]);
  double nn = n.norm();
  if (nn < 1e-14) throw std::runtime_error("ideal_hull: degenerate face");
  n /= nn;
  double d = n.dot(P[a]);
  if (n.dot(interior) > d) {
    std::swap(t.b, t.c);
    n = -n;
    d = -d;
  }
  t.n = n;
  t.d = d;
  return t;
}

// Walk once around the boundary edges of a merged face and return the vertex
// cycle.
std::vector<int> walk_cycle(const std::vector<std::pair<int, int>>& dir_edges) {
  std::map<int, int> succ;
  for (auto [u, v] : dir_edges) succ[u] = v;
  std::vector<int> cycle;
  int start = dir_edges.front().first, cur = start;
  do {
    cycle.push_back(cur);
    auto it = succ.find(cur);
    if (it == succ.end()) throw std::runtime_error("ideal_hull: open face boundary");
    cur = it->second;
  } while (cur != start && cycle.size() <= succ.size() + 1);
  if (cur != start) throw std::runtime_error("ideal_hull: face boundary did not close");
  return cycle;
}

ConvexHullBoundary planar_hull(const IdealPointSet& pts, const Vec3& n_in, double d) {
  ConvexHullBoundary hull;
  hull.vertices = pts.points;
  hull.planar = true;
  Vec3 n = n_in;
  if (d < 0) { n = -n; d = -d; }
  // Angular order around the circle center d*n.
  Vec3 t1, t2;
  tangent_basis(n, t1, t2);
  std::vector<std::pair<double, int>> order;
  for (size_t k = 0; k < pts.points.size(); ++k) {
    const Vec3& v = pts.points[k].v;
    order.push_back({std::atan2(v.dot(t2), v.dot(t1)), int(k)});
  }
  std::sort(order.begin(), order.end());
  HullFace face;
  face.plane = lorentz_plane(n, d);
  for (auto& [ang, idx] : order) face.cycle.push_back(idx);
  hull.faces.push_back(face);
  for (size_t k = 0; k < face.cycle.size(); ++k) {
    HullEdge e;
    e.v0 = face.cycle[k];
    e.v1 = face.cycle[(k + 1) % face.cycle.size()];
    e.f0 = e.f1 = 0;
    e.interior_dihedral = 0.0;
    hull.edges.push_back(e);
  }
  return hull;
}

}  // namespace

ConvexHullBoundary ideal_hull(const IdealPointSet& pts) {
  const auto& points = pts.points;
  std::vector<Vec3> P;
  for (const auto& p : points) P.push_back(p.v);
  const int n = int(P.size());

  if (n == 2) {
    ConvexHullBoundary hull;
    hull.vertices = points;
    hull.segment = true;
    HullEdge e;
    e.v0 = 0;
    e.v1 = 1;
    hull.edges.push_back(e);
    return hull;
  }

  // Initial simplex: spread-out quadruple, or detect the coplanar case.
  int i0 = 0, i1 = 1;
  double best = -1.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if ((P[i] - P[j]).squaredNorm() > best) { best = (P[i] - P[j]).squaredNorm(); i0 = i; i1 = j; }
  int i2 = -1;
  best = 1e-14;
  for (int i = 0; i < n; ++i) {
    double a = (P[i1] - P[i0]).cross(P[i] - P[i0]).squaredNorm();
    if (a > best) { best = a; i2 = i; }
  }
  if (i2 < 0) throw std::invalid_argument("ideal_hull: all points on one geodesic");
  Vec3 n0 = (P[i1] - P[i0]).cross(P[i2] - P[i0]).normalized();
  double d0 = n0.dot(P[i0]);
  int i3 = -1;
  best = 1e-9;
  for (int i = 0; i < n; ++i) {
    double h = std::abs(n0.dot(P[i]) - d0);
    if (h > best) { best = h; i3 = i; }
  }
  if (i3 < 0) return planar_hull(pts, n0, d0);  // cocircular

  Vec3 interior = 0.25 * (P[i0] + P[i1] + P[i2] + P[i3]);
  std::vector<Tri> tris = {make_tri(i0, i1, i2, P, interior), make_tri(i0, i1, i3, P, interior),
                           make_tri(i0, i2, i3, P, interior), make_tri(i1, i2, i3, P, interior)};

  // Incremental insertion.  Ideal points of a sphere are always extreme, so
  // every point ends up a vertex; near-coplanar insertions are resolved by the
  // visibility threshold and the face merge below.
  const double eps_vis = 1e-11;
  for (int p = 0; p < n; ++p) {
    if (p == i0 || p == i1 || p == i2 || p == i3) continue;
    std::vector<char> vis(tris.size(), 0);
    bool any = false;
    for (size_t f = 0; f < tris.size(); ++f) {
      if (!tris[f].alive) continue;
      if (tris[f].n.dot(P[p]) - tris[f].d > eps_vis) { vis[f] = 1; any = true; }
    }
    if (!any) continue;
    // Horizon: directed edges of visible faces whose twin is hidden.
    std::set<std::pair<int, int>> vis_edges;
    for (size_t f = 0; f < tris.size(); ++f) {
      if (!tris[f].alive || !vis[f]) continue;
      const Tri& t = tris[f];
      vis_edges.insert({t.a, t.b});
      vis_edges.insert({t.b, t.c});
      vis_edges.insert({t.c, t.a});
    }
    std::vector<std::pair<int, int>> horizon;
    for (auto [u, v] : vis_edges)
      if (!vis_edges.count({v, u})) horizon.push_back({u, v});
    for (size_t f = 0; f < tris.size(); ++f)
      if (tris[f].alive && vis[f]) tris[f].alive = false;
    for (auto [u, v] : horizon) tris.push_back(make_tri(u, v, p, P, interior));
  }

  // Merge coplanar adjacent triangles into polygonal faces.
  std::vector<int> alive_ids;
  for (size_t f = 0; f < tris.size(); ++f)
    if (tris[f].alive) alive_ids.push_back(int(f));
  std::vector<int> group(alive_ids.size(), -1);
  int ngroups = 0;
  for (size_t a = 0; a < alive_ids.size(); ++a) {
    if (group[a] >= 0) continue;
    group[a] = ngroups;
    // Flood within the same support plane.
    bool grew = true;
    while (grew) {
      grew = false;
      for (size_t b = 0; b < alive_ids.size(); ++b) {
        if (group[b] >= 0) continue;
        const Tri& tb = tris[alive_ids[b]];
        for (size_t c = 0; c < alive_ids.size(); ++c) {
          if (group[c] != group[a]) continue;
          const Tri& tc = tris[alive_ids[c]];
          if ((tb.n - tc.n).norm() < 1e-9 && std::abs(tb.d - tc.d) < 1e-9) {
            group[b] = group[a];
            grew = true;
            break;
          }
        }
      }
    }
    ++ngroups;
  }

  ConvexHullBoundary hull;
  hull.vertices = points;
  for (int g = 0; g < ngroups; ++g) {
    std::set<std::pair<int, int>> dir;
    Vec3 nsum = Vec3::Zero();
    double dsum = 0.0;
    int cnt = 0;
    for (size_t a = 0; a < alive_ids.size(); ++a) {
      if (group[a] != g) continue;
      const Tri& t = tris[alive_ids[a]];
      nsum += t.n;
      dsum += t.d;
      ++cnt;
      for (auto e : {std::pair{t.a, t.b}, std::pair{t.b, t.c}, std::pair{t.c, t.a}}) {
        auto rev = std::pair{e.second, e.first};
        if (dir.count(rev)) dir.erase(rev);  // internal edge of the merged face
        else dir.insert(e);
      }
    }
    HullFace face;
    Vec3 nn = (nsum / cnt).normalized();
    face.plane = lorentz_plane(nn, dsum / cnt);
    face.cycle = walk_cycle(std::vector<std::pair<int, int>>(dir.begin(), dir.end()));
    hull.faces.push_back(face);
  }

  // Edges between merged faces, with interior dihedral angles.
  std::map<std::pair<int, int>, std::vector<int>> edge_faces;
  for (size_t f = 0; f < hull.faces.size(); ++f) {
    const auto& cyc = hull.faces[f].cycle;
    for (size_t k = 0; k < cyc.size(); ++k) {
      int u = cyc[k], v = cyc[(k + 1) % cyc.size()];
      edge_faces[{std::min(u, v), std::max(u, v)}].push_back(int(f));
    }
  }
  for (auto& [uv, fl] : edge_faces) {
    if (fl.size() != 2) throw std::runtime_error("ideal_hull: non-manifold edge");
    HullEdge e;
    e.v0 = uv.first;
    e.v1 = uv.second;
    e.f0 = fl[0];
    e.f1 = fl[1];
    double c = -mdot(hull.faces[fl[0]].plane, hull.faces[fl[1]].plane);
    e.interior_dihedral = std::acos(std::clamp(c, -1.0, 1.0));
    hull.edges.push_back(e);
  }
  return hull;
}

namespace {

// Minimizer of the Busemann function of N over the hyperbolic plane <x,e>=0:
// x = N/|t| - sign(t) e with t = <N,e>; the minimum value of -<x,N> is |t|.
bool plane_busemann_min(const Vec4& N, const Vec4& e, HPoint& m, double& value) {
  double t = mdot(N, e);
  if (std::abs(t) < 1e-14) return false;  // xi on the plane's ideal circle
  Vec4 x = N / std::abs(t) - (t > 0 ? 1.0 : -1.0) * e;
  m = HPoint(x);
  value = std::abs(t);
  return true;
}

// Minimizer over the geodesic with ideal endpoints P, Q: parameterize
// x(s) = (P e^s + Q e^{-s})/sqrt(2 pq); a e^s + b e^{-s} is minimal at
// e^{2s} = b/a.
void edge_busemann_min(const Vec4& N, const Vec4& P, const Vec4& Q, HPoint& m, double& value) {
  double a = -mdot(P, N), b = -mdot(Q, N), pq = -mdot(P, Q);
  double e_s = std::sqrt(std::sqrt(b / a));  // guards overflow when b/a is extreme
  e_s *= e_s;
  Vec4 x = (P * e_s + Q / e_s) / std::sqrt(2.0 * pq);
  m = HPoint(x);
  value = std::sqrt(2.0 * a * b / pq);
}

// Side vector of the polygon edge (vi, vj) within the face plane e: unit
// spacelike q with <q,vi> = <q,vj> = <q,e> = 0, oriented nonpositive on the
// polygon.
Vec4 face_side_vector(const Vec4& e, const Vec4& Vi, const Vec4& Vj, const Vec4& Vother) {
  // Solve the 3 orthogonality conditions by a null-space computation.
  Eigen::Matrix<double, 3, 4> A;
  Mat4 J = Mat4::Identity();
  J(0, 0) = -1.0;
  A.row(0) = (J * Vi).transpose();
  A.row(1) = (J * Vj).transpose();
  A.row(2) = (J * e).transpose();
  Eigen::JacobiSVD<Eigen::Matrix<double, 3, 4>> svd(A, Eigen::ComputeFullV);
  Vec4 q = svd.matrixV().col(3);
  double qq = mdot(q, q);
  if (qq <= 0) throw std::runtime_error("hull_projection: degenerate side vector");
  q /= std::sqrt(qq);
  if (mdot(q, Vother) > 0) q = -q;
  return q;
}

}  // namespace

HPoint hull_projection(const ConvexHullBoundary& hull, const IdealPoint& xi) {
  for (const auto& v : hull.vertices)
    if (v.chordal_distance(xi) < 1e-9)
      throw std::invalid_argument("hull_projection: xi is an ideal point of the hull");
  Vec4 N = xi.null_vec();
  double best = kInf;
  HPoint argmin;
  bool found = false;

  for (const auto& f : hull.faces) {
    HPoint m;
    double val;
    if (!plane_busemann_min(N, f.plane, m, val)) continue;
    if (val >= best) continue;
    // Keep only minimizers inside the face polygon.
    bool inside = true;
    const auto& cyc = f.cycle;
    for (size_t k = 0; k < cyc.size() && inside; ++k) {
      Vec4 Vi = hull.vertices[cyc[k]].null_vec();
      Vec4 Vj = hull.vertices[cyc[(k + 1) % cyc.size()]].null_vec();
      Vec4 Vo = hull.vertices[cyc[(k + 2) % cyc.size()]].null_vec();
      Vec4 q = face_side_vector(f.plane, Vi, Vj, Vo);
      if (mdot(q, m.x) > 1e-9) inside = false;
    }
    if (inside) { best = val; argmin = m; found = true; }
  }
  for (const auto& e : hull.edges) {
    HPoint m;
    double val;
    edge_busemann_min(N, hull.vertices[e.v0].null_vec(), hull.vertices[e.v1].null_vec(), m, val);
    if (val < best) { best = val; argmin = m; found = true; }
  }
  if (!found) throw std::runtime_error("hull_projection: no candidate (degenerate hull?)");
  return argmin;
}

// ---------------------------------------------------------------------------
// DomainComplement
// ---------------------------------------------------------------------------

DomainComplement DomainComplement::make_disk(const SphericalCap& cap) {
  DomainComplement c;
  c.kind = Kind::Disk;
  c.disk = cap;
  if (!(cap.radius > 0.0 && cap.radius < kPi))
    throw std::invalid_argument("DomainComplement: disk radius out of (0, pi)");
  return c;
}

DomainComplement DomainComplement::make_points(std::vector<IdealPoint> pts) {
  if (pts.size() < 2) throw std::invalid_argument("DomainComplement: need >= 2 points");
  DomainComplement c;
  c.kind = Kind::Points;
  c.points = std::move(pts);
  return c;
}

DomainComplement DomainComplement::transformed(const HIsometry& iso) const {
  if (kind == Kind::Points) {
    std::vector<IdealPoint> out;
    for (const auto& p : points) out.push_back(iso.apply(p));
    return make_points(out);
  }
  // Map three boundary points and recover the image cap through them; pick the
  // side containing the image of the cap center.
  Vec3 t1, t2;
  tangent_basis(disk.center, t1, t2);
  Vec3 imgs[3];
  for (int k = 0; k < 3; ++k) {
    double a = 2.0 * kPi * k / 3.0;
    Vec3 bp = std::cos(disk.radius) * disk.center +
              std::sin(disk.radius) * (std::cos(a) * t1 + std::sin(a) * t2);
    imgs[k] = iso.apply(IdealPoint(bp)).v;
  }
  Vec3 c = (imgs[1] - imgs[0]).cross(imgs[2] - imgs[0]).normalized();
  Vec3 center_img = iso.apply(IdealPoint(disk.center)).v;
  if (c.dot(center_img) < 0) c = -c;
  SphericalCap cap;
  cap.center = c;
  cap.radius = sphere_distance(c, imgs[0]);
  return make_disk(cap);
}

double DomainComplement::clearance(const Vec3& c) const {
  if (kind == Kind::Disk) return sphere_distance(c, disk.center) - disk.radius;
  double best = kInf;
  for (const auto& p : points) best = std::min(best, sphere_distance(c, p.v));
  return best;
}

bool DomainComplement::in_domain(const Vec3& v) const {
  if (kind == Kind::Disk) return sphere_distance(v, disk.center) > disk.radius + 1e-12;
  for (const auto& p : points)
    if (sphere_distance(v, p.v) < 1e-9) return false;
  return true;
}

namespace {

struct CapCandidate {
  Vec3 center;
  double rho = 0.0;
  double log_density = kInf;
  int tangency = 0;
};

// Density of the cap centered at c with radius equal to the clearance.
bool eval_candidate(const DomainComplement& comp, const Vec3& c, const Vec3& xi, CapCandidate& out) {
  double rho = comp.clearance(c);
  if (!(rho > 0.0 && rho < kPi)) return false;
  double sigma = sphere_distance(c, xi);
  double den = std::cos(sigma) - std::cos(rho);
  if (!(den > 1e-300)) return false;
  out.center = c;
  out.rho = rho;
  out.log_density = std::log(std::sin(rho)) - std::log(den);
  return true;
}

// Enumerate caps tangent to pairs (1-D bisector search) and triples
// (circumscribed caps) of the complement's points.
CapCandidate best_cap_points(const DomainComplement& comp, const Vec3& xi, int search_grid) {
  const auto& pts = comp.points;
  const int np = int(pts.size());
  CapCandidate best;

  for (int i = 0; i < np; ++i) {
    for (int j = i + 1; j < np; ++j) {
      const Vec3 &pi = pts[i].v, &pj = pts[j].v;
      Vec3 d = (pi - pj).normalized();
      Vec3 a = pi + pj;
      Vec3 b;
      if (a.norm() > 1e-9) {
        a.normalize();
        b = d.cross(a);
      } else {  // antipodal pair: any orthonormal completion of d
        tangent_basis(d, a, b);
      }
      auto dens = [&](double psi) {
        Vec3 c = std::cos(psi) * a + std::sin(psi) * b;
        CapCandidate cand;
        if (!eval_candidate(comp, c, xi, cand)) return kInf;
        return cand.log_density;
      };
      // Coarse scan, then golden refinement of each local minimum.
      std::vector<double> f(search_grid);
      for (int k = 0; k < search_grid; ++k) f[k] = dens(2.0 * kPi * k / search_grid);
      for (int k = 0; k < search_grid; ++k) {
        double fk = f[k];
        if (!std::isfinite(fk)) continue;
        double fl = f[(k + search_grid - 1) % search_grid];
        double fr = f[(k + 1) % search_grid];
        if (fk > fl || fk > fr) continue;
        double psi0 = 2.0 * kPi * (k - 1) / search_grid;
        double psi1 = 2.0 * kPi * (k + 1) / search_grid;
        double psi = golden_min(dens, psi0, psi1, 80);
        CapCandidate cand;
        if (eval_candidate(comp, std::cos(psi) * a + std::sin(psi) * b, xi, cand) &&
            cand.log_density < best.log_density)
          best = cand;
      }
    }
  }
  for (int i = 0; i < np; ++i) {
    for (int j = i + 1; j < np; ++j) {
      for (int k = j + 1; k < np; ++k) {
        Vec3 cn = (pts[j].v - pts[i].v).cross(pts[k].v - pts[i].v);
        if (cn.norm() < 1e-13) continue;
        cn.normalize();
        for (int sgn = -1; sgn <= 1; sgn += 2) {
          Vec3 c = sgn * cn;
          CapCandidate cand;
          if (eval_candidate(comp, c, xi, cand) && cand.log_density < best.log_density) best = cand;
        }
      }
    }
  }
  if (!std::isfinite(best.log_density))
    throw std::runtime_error("thurston_log_density: no admissible maximal cap found");
  for (const auto& p : pts)
    if (std::abs(sphere_distance(best.center, p.v) - best.rho) < 1e-5) ++best.tangency;
  return best;
}

}  // namespace

MaximalDisk maximal_disk(const DomainComplement& comp, const IdealPoint& xi, int search_grid) {
  if (!comp.in_domain(xi.v)) throw std::invalid_argument("maximal_disk: xi not in the domain");
  MaximalDisk out;
  if (comp.kind == DomainComplement::Kind::Disk) {
    // The domain is itself a round disk; it is its own maximal disk.
    out.cap.center = -comp.disk.center;
    out.cap.radius = kPi - comp.disk.radius;
    out.saturated = true;
    out.tangency_count = std::numeric_limits<int>::max();
    if (!out.cap.contains(xi.v)) throw std::invalid_argument("maximal_disk: xi not in the domain");
  } else {
    CapCandidate cand = best_cap_points(comp, xi.v, search_grid);
    out.cap.center = cand.center;
    out.cap.radius = cand.rho;
    out.tangency_count = cand.tangency;
  }
  out.center_chart = sphere_to_chart(ChartKind::North, out.cap.center);
  out.spherical_radius = out.cap.radius;
  return out;
}

double thurston_log_density(const DomainComplement& comp, const IdealPoint& xi, int search_grid) {
  MaximalDisk d = maximal_disk(comp, xi, search_grid);
  return cap_hyperbolic_log_density(d.cap, xi.v);
}

HPoint base_point(const DomainComplement& comp) {
  if (comp.kind == DomainComplement::Kind::Disk) {
    // Foot of the cap's axis on the plane of its boundary circle.
    double t = std::atanh(std::cos(comp.disk.radius));
    Vec4 x;
    x[0] = std::cosh(t);
    x.tail<3>() = std::sinh(t) * comp.disk.center;
    return HPoint(x);
  }
  const auto& pts = comp.points;
  if (pts.size() == 2) {
    Vec4 P = pts[0].null_vec(), Q = pts[1].null_vec();
    Vec4 s = P + Q;
    return HPoint(s / std::sqrt(-mdot(s, s)));
  }
  // Minimize the max normalized Busemann value by Nelder-Mead over the
  // spatial coordinates of the hyperboloid point.
  auto F = [&](const Vec3& p) {
    HPoint x = HPoint::from_spatial(p);
    double m = -kInf;
    for (const auto& q : pts) m = std::max(m, busemann_value(q, x));
    return m;
  };
  std::vector<Vec3> simplex = {Vec3(0, 0, 0), Vec3(0.5, 0, 0), Vec3(0, 0.5, 0), Vec3(0, 0, 0.5)};
  std::vector<double> fv(4);
  for (int k = 0; k < 4; ++k) fv[k] = F(simplex[k]);
  for (int it = 0; it < 500; ++it) {
    // Order
    std::vector<int> idx = {0, 1, 2, 3};
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return fv[a] < fv[b]; });
    std::vector<Vec3> s2;
    std::vector<double> f2;
    for (int k : idx) { s2.push_back(simplex[k]); f2.push_back(fv[k]); }
    simplex = s2;
    fv = f2;
    if (std::abs(fv[3] - fv[0]) < 1e-14) break;
    Vec3 cen = (simplex[0] + simplex[1] + simplex[2]) / 3.0;
    Vec3 xr = cen + (cen - simplex[3]);
    double fr = F(xr);
    if (fr < fv[0]) {
      Vec3 xe = cen + 2.0 * (cen - simplex[3]);
      double fe = F(xe);
      if (fe < fr) { simplex[3] = xe; fv[3] = fe; }
      else { simplex[3] = xr; fv[3] = fr; }
    } else if (fr < fv[2]) {
      simplex[3] = xr;
      fv[3] = fr;
    } else {
      Vec3 xc = cen + 0.5 * (simplex[3] - cen);
      double fc = F(xc);
      if (fc < fv[3]) { simplex[3] = xc; fv[3] = fc; }
      else {
        for (int k = 1; k < 4; ++k) {
          simplex[k] = simplex[0] + 0.5 * (simplex[k] - simplex[0]);
          fv[k] = F(simplex[k]);
        }
      }
    }
  }
  return HPoint::from_spatial(simplex[0]);
}

double thurston_visual_check(const DomainComplement& comp, const IdealPoint& xi, int search_grid) {
  double th = thurston_log_density(comp, xi, search_grid);

  HPoint m;
  if (comp.kind == DomainComplement::Kind::Disk) {
    Vec4 e = lorentz_plane(comp.disk.center, std::cos(comp.disk.radius));
    double val;
    if (!plane_busemann_min(xi.null_vec(), e, m, val))
      throw std::runtime_error("thurston_visual_check: xi on the boundary circle");
  } else {
    ConvexHullBoundary hull = ideal_hull(IdealPointSet(comp.points, /*allow_two=*/true));
    m = hull_projection(hull, xi);
  }
  double vis = visual_log_density(xi, HPoint::origin(), m);
  return std::abs(th - vis);
}

}  // namespace hconv
