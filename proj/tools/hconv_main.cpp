// hconv: batch pipelines over conformal boundary data of convex domains in
// hyperbolic 3-space.
//
// Subcommands: curvature, decompose, hull, cutoff, approx, surface, revolve,
// assemble.  Each takes --config <json>, writes its outputs under --out, and
// embeds the full config, input hashes and the seed in a JSON report.
// Exit codes: 0 success, 1 invariant violation, 2 input error.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>

#include "hconv/io.hpp"

namespace fs = std::filesystem;
using namespace hconv;
using io::Json;

namespace {

struct Common {
  std::string config_path;
  std::string out_dir = ".";
  bool deterministic = false;
  std::uint64_t seed = 1;
  int resolution = 0;  // 0: use the config's value
};

struct InvariantViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Json load_config(const Common& c) {
  if (c.config_path.empty()) return Json::object();
  Json j = Json::parse(io::read_file(c.config_path));
  if (!j.is_object()) throw std::runtime_error("config must be a JSON object");
  return j;
}

void emit(const Common& c, const std::string& name, const std::string& content) {
  fs::create_directories(c.out_dir);
  io::write_file((fs::path(c.out_dir) / name).string(), content);
}

Json base_report(const Common& c, const std::string& command, const Json& cfg,
                 const std::vector<std::pair<std::string, std::string>>& inputs) {
  Json rep = io::make_report(command, cfg, inputs, c.seed, c.deterministic);
  if (!c.deterministic) {
    rep["wall_clock_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                               std::chrono::system_clock::now().time_since_epoch())
                               .count();
  }
  return rep;
}

const AnalyticField* find_analytic(const std::string& name,
                                   const std::vector<AnalyticField>& fields) {
  for (const auto& f : fields)
    if (f.name == name) return &f;
  return nullptr;
}

// ---------------------------------------------------------------------------

int cmd_curvature(const Common& c) {
  Json cfg = load_config(c);
  std::vector<std::pair<std::string, std::string>> inputs;
  Json rep;
  bool violation = false;

  if (cfg.contains("field_north") && cfg.contains("field_south")) {
    // Full-sphere input: curvature per chart plus the Gauss-Bonnet summary.
    std::string tn = io::read_file(cfg["field_north"]);
    std::string ts = io::read_file(cfg["field_south"]);
    inputs = {{"field_north", tn}, {"field_south", ts}};
    SphereField sphere;
    sphere.north = io::parse_field(tn);
    sphere.south = io::parse_field(ts);
    CurvatureField Kn = curvature(sphere.north);
    CurvatureField Ks = curvature(sphere.south);
    emit(c, "curvature_north.csv", io::curvature_csv(sphere.north, Kn));
    emit(c, "curvature_south.csv", io::curvature_csv(sphere.south, Ks));
    double total = sphere.integrate_curvature();
    double defect = std::abs(total - 4.0 * kPi) / (4.0 * kPi);
    rep = base_report(c, "curvature", cfg, inputs);
    rep["total_curvature"] = total;
    rep["gauss_bonnet_defect"] = defect;
    rep["overlap_residual"] = sphere.overlap_residual();
    if (defect > 0.01) violation = true;
  } else {
    ConformalMetricField field;
    if (cfg.contains("field")) {
      std::string text = io::read_file(cfg["field"]);
      inputs = {{"field", text}};
      field = io::parse_field(text);
    } else if (cfg.contains("analytic")) {
      auto fields = registered_fields();
      const AnalyticField* f = find_analytic(cfg["analytic"], fields);
      if (!f) throw std::runtime_error("unknown analytic field: " + std::string(cfg["analytic"]));
      int res = c.resolution > 0 ? c.resolution : cfg.value("resolution", 256);
      field = sample_field(*f, res);
    } else {
      throw std::runtime_error("config needs 'field', 'analytic', or a chart pair");
    }
    CurvatureField K = curvature(field);
    emit(c, "curvature.csv", io::curvature_csv(field, K));
    double total = 0.0;
    long valid = 0;
    double kmin = 0.0, kmax = 0.0;
    bool first = true;
    for (int j = 0; j < field.chart.ny; ++j)
      for (int i = 0; i < field.chart.nx; ++i) {
        if (!K.valid(i, j)) continue;
        double lam = c1_chart_density(field.chart.cz(i, j));
        total += K.K(i, j) * std::exp(2.0 * field.u(i, j)) * lam * lam * field.chart.dx() *
                 field.chart.dy();
        if (first) {
          kmin = kmax = K.K(i, j);
          first = false;
        }
        kmin = std::min(kmin, K.K(i, j));
        kmax = std::max(kmax, K.K(i, j));
        ++valid;
      }
    rep = base_report(c, "curvature", cfg, inputs);
    rep["valid_cells"] = valid;
    rep["total_curvature_masked"] = total;
    rep["K_min"] = kmin;
    rep["K_max"] = kmax;
  }
  emit(c, "curvature_report.json", rep.dump(2) + "\n");
  if (violation) throw InvariantViolation("Gauss-Bonnet defect above 1%");
  return 0;
}

int cmd_decompose(const Common& c) {
  Json cfg = load_config(c);
  std::string ftext = io::read_file(cfg.at("field"));
  std::string dtext = io::read_file(cfg.at("domain"));
  ConformalMetricField field = io::parse_field(ftext);
  QuasidiskDomain domain = io::parse_domain_json(dtext);
  FactorDecomposition dec = factor_decomposition(field, domain);

  std::string csv = "i,j,v,w,x,valid\n";
  for (int j = 0; j < field.chart.ny; ++j)
    for (int i = 0; i < field.chart.nx; ++i) {
      if (!field.masked(i, j)) continue;
      csv += std::to_string(i) + "," + std::to_string(j) + "," + io::fmt(dec.v(i, j)) + "," +
             io::fmt(dec.w(i, j)) + "," + io::fmt(dec.x(i, j)) + "," +
             (dec.valid(i, j) ? "1" : "0") + "\n";
    }
  emit(c, "decomposition.csv", csv);

  Json rep = base_report(c, "decompose", cfg, {{"field", ftext}, {"domain", dtext}});
  rep["cells"] = dec.bounds.cells;
  rep["excluded"] = dec.bounds.excluded;
  rep["sup_abs_v"] = dec.bounds.sup_abs_v;
  rep["sup_abs_w"] = dec.bounds.sup_abs_w;
  rep["sup_dv_hm1"] = dec.bounds.sup_dv_hm1;
  rep["sup_dw_hm1"] = dec.bounds.sup_dw_hm1;
  rep["sup_dx_th"] = dec.bounds.sup_dx_th;
  rep["consistency_residual"] = dec.consistency_residual(field);
  // Sign constraints of the factors: v >= 0 and w <= 0 up to numerics.
  bool violation = false;
  for (int j = 0; j < field.chart.ny; ++j)
    for (int i = 0; i < field.chart.nx; ++i)
      if (dec.valid(i, j) && (dec.v(i, j) < -1e-6 || dec.w(i, j) > 1e-6)) violation = true;
  rep["sign_invariants_ok"] = !violation;
  emit(c, "decompose_report.json", rep.dump(2) + "\n");
  if (violation) throw InvariantViolation("factor sign invariants violated");
  return 0;
}

int cmd_hull(const Common& c) {
  Json cfg = load_config(c);
  std::vector<IdealPoint> pts;
  for (const auto& p : cfg.at("points"))
    pts.push_back(
        IdealPoint(Vec3(p.at(0).get<double>(), p.at(1).get<double>(), p.at(2).get<double>())));
  ConvexHullBoundary hull = ideal_hull(IdealPointSet(pts, cfg.value("allow_two", false)));
  emit(c, "hull.obj", io::write_obj(io::hull_to_obj(hull)));
  Json side = io::hull_sidecar(hull);
  emit(c, "hull_meta.json", side.dump(2) + "\n");

  Json rep = base_report(c, "hull", cfg, {});
  rep["faces"] = hull.faces.size();
  rep["edges"] = hull.edges.size();
  rep["planar"] = hull.planar;
  rep["segment"] = hull.segment;
  double res = hull.segment ? 0.0 : hull.convexity_residual();
  rep["convexity_residual"] = res;
  emit(c, "hull_report.json", rep.dump(2) + "\n");
  if (res > 1e-8) throw InvariantViolation("hull convexity residual above 1e-8");
  return 0;
}

int cmd_cutoff(const Common& c) {
  Json cfg = load_config(c);
  double eps = cfg.value("bridge_epsilon", 0.2);
  double step = cfg.value("step", 1e-3);
  CutoffFunction phi = build_cutoff(eps, step);
  emit(c, "cutoff.csv", io::cutoff_csv(phi));
  CutoffCertificate cert = phi.certify();
  Json rep = base_report(c, "cutoff", cfg, {});
  rep["ok"] = cert.ok;
  rep["min_margin"] = cert.min_margin;
  rep["min_padded_margin"] = cert.min_padded_margin;
  rep["max_second_derivative"] = cert.max_second_derivative;
  rep["knots"] = phi.knots.size();
  emit(c, "cutoff_report.json", rep.dump(2) + "\n");
  if (!cert.ok) throw InvariantViolation(cert.message);
  return 0;
}

int cmd_approx(const Common& c) {
  Json cfg = load_config(c);
  std::string ftext = io::read_file(cfg.at("field"));
  std::string ctext = io::read_file(cfg.at("cutoff"));
  ConformalMetricField base = io::parse_field(ftext);
  CutoffFunction phi = io::parse_cutoff_csv(ctext);
  int n0 = cfg.value("n_min", 0), n1 = cfg.value("n_max", 3);
  double eps = cfg.at("epsilon");
  double C = cfg.contains("gradient_bound") ? double(cfg["gradient_bound"])
                                            : measured_gradient_bound(base);
  std::optional<double> K_exact;
  if (cfg.contains("expected_K")) K_exact = double(cfg["expected_K"]);
  bool acknowledge = cfg.value("acknowledge_collar", false);

  bool all_pass = true;
  Json aggregate = base_report(c, "approx", cfg, {{"field", ftext}, {"cutoff", ctext}});
  aggregate["gradient_bound"] = C;
  Json per_n = Json::array();
  for (int n = n0; n <= n1; ++n) {
    HnField hn = build_hn(base, phi, n);
    ApproxCurvatureReport rep = curvature_report(hn, base, phi, eps, C, K_exact, {}, acknowledge);
    Json jn;
    jn["n"] = n;
    jn["collar_flags"] = hn.collar_flags.size();
    jn["kmax"] = rep.kmax;
    jn["pass"] = rep.pass;
    jn["violations"] = rep.violations.size();
    auto stats = [](const RegionStats& s) {
      Json j;
      j["cells"] = s.cells;
      j["min_K"] = s.min_K;
      j["max_K"] = s.max_K;
      j["max_abs_err"] = s.max_abs_err;
      return j;
    };
    jn["interior"] = stats(rep.interior);
    jn["transition"] = stats(rep.transition);
    jn["plateau"] = stats(rep.plateau);
    jn["first_term_min"] = rep.first_term_min;
    jn["first_term_max"] = rep.first_term_max;
    per_n.push_back(jn);
    emit(c, "approx_n" + std::to_string(n) + ".json", jn.dump(2) + "\n");
    if (!rep.pass) all_pass = false;
  }
  aggregate["reports"] = per_n;
  aggregate["pass"] = all_pass;
  emit(c, "approx_report.json", aggregate.dump(2) + "\n");
  if (!all_pass) throw InvariantViolation("three-regime curvature check failed");
  return 0;
}

SurfacePatch patch_from_config(const Json& cfg, int resolution) {
  std::string family = cfg.value("family", "sphere");
  int ns = resolution > 0 ? resolution : cfg.value("ns", 128);
  int nt = cfg.value("nt", 2 * ns);
  if (family == "sphere") return SurfacePatch::geodesic_sphere(cfg.value("radius", 1.0), ns, nt);
  if (family == "horosphere")
    return SurfacePatch::horosphere(cfg.value("half_extent", 1.0), ns, nt);
  if (family == "equidistant")
    return SurfacePatch::equidistant(cfg.value("distance", 1.0), cfg.value("rho_max", 1.5), ns, nt);
  if (family == "perturbed_sphere")
    return SurfacePatch::perturbed_sphere(cfg.value("radius", 1.0), cfg.value("amplitude", 0.05),
                                          ns, nt);
  throw std::runtime_error("unknown surface family: " + family);
}

int cmd_surface(const Common& c) {
  Json cfg = load_config(c);
  SurfacePatch patch = patch_from_config(cfg, c.resolution);
  FundamentalForms forms = fundamental_forms(patch);

  std::string csv = "i,j,E,F,G,II11,II12,II22,kappa1,kappa2,valid\n";
  for (int j = 0; j < forms.nt; ++j)
    for (int i = 0; i < forms.ns; ++i) {
      const FormSample& fs = forms.at(i, j);
      csv += std::to_string(i) + "," + std::to_string(j) + "," + io::fmt(fs.I(0, 0)) + "," +
             io::fmt(fs.I(0, 1)) + "," + io::fmt(fs.I(1, 1)) + "," + io::fmt(fs.II(0, 0)) + "," +
             io::fmt(fs.II(0, 1)) + "," + io::fmt(fs.II(1, 1)) + "," + io::fmt(fs.kappa1) + "," +
             io::fmt(fs.kappa2) + "," + (fs.valid ? "1" : "0") + "\n";
    }
  emit(c, "forms.csv", csv);
  emit(c, "surface.obj", io::write_obj(io::patch_to_obj(patch)));
  emit(c, "surface_meta.json", io::patch_metadata(patch).dump(2) + "\n");

  GaussMapField gmap = gauss_map(patch, forms);
  IntrinsicCurvature K = intrinsic_curvature_brioschi(forms, patch.ds(), patch.dt());
  GaussCodazzi gc = gauss_codazzi_residual(forms, K, patch.ds(), patch.dt());

  Json rep = base_report(c, "surface", cfg, {});
  rep["family"] = patch.family;
  rep["sup_dilatation"] = gmap.sup_dilatation;
  rep["max_gauss_residual"] = gc.max_gauss;
  rep["max_codazzi_residual"] = gc.max_codazzi;
  rep["excluded_samples"] = forms.excluded;
  emit(c, "surface_report.json", rep.dump(2) + "\n");
  return 0;
}

int cmd_revolve(const Common& c) {
  Json cfg = load_config(c);
  ProfileMetric prof;
  std::vector<std::pair<std::string, std::string>> inputs;
  if (cfg.contains("profile_csv")) {
    std::string text = io::read_file(cfg["profile_csv"]);
    inputs = {{"profile", text}};
    prof = io::parse_profile_csv(text);
  } else {
    std::string fam = cfg.value("profile", "sphere");
    int n = cfg.value("samples", 1024);
    if (fam == "sphere") prof = ProfileMetric::sphere(cfg.value("radius", 1.0), n);
    else if (fam == "horosphere") prof = ProfileMetric::horosphere(cfg.value("length", 2.5), n);
    else if (fam == "equidistant")
      prof = ProfileMetric::equidistant(cfg.value("distance", 1.0), cfg.value("length", 2.0), n);
    else if (fam == "plane") prof = ProfileMetric::plane(cfg.value("length", 1.5), n);
    else throw std::runtime_error("unknown profile family: " + fam);
  }
  RevolutionSurface surf = realize(prof);
  RoundTripReport rt = round_trip_check(prof, surf, cfg.value("n_theta", 96));
  Classification cls = classify(surf);
  SurfacePatch patch = surf.patch(cfg.value("n_theta", 96));
  emit(c, "revolution.obj", io::write_obj(io::patch_to_obj(patch)));
  emit(c, "revolution_meta.json", io::patch_metadata(patch).dump(2) + "\n");
  emit(c, "profile.csv", io::profile_csv(prof));

  Json rep = base_report(c, "revolve", cfg, inputs);
  rep["isometry_residual"] = surf.isometry_residual;
  rep["integration_consistency"] = surf.integration_consistency;
  rep["planar_contact_samples"] = surf.planar_contact.size();
  rep["round_trip_sup"] = rt.sup_residual;
  rep["round_trip_sup_sampled"] = rt.sup_residual_sampled;
  rep["round_trip_l2"] = rt.l2_residual;
  rep["min_kappa2"] = rt.min_kappa2;
  rep["nonconvex_samples"] = rt.nonconvex_samples;
  rep["class"] = to_string(cls.kind);
  rep["class_parameter"] = cls.parameter;
  rep["kappa_mean"] = cls.kappa_mean;
  emit(c, "revolve_report.json", rep.dump(2) + "\n");
  if (surf.isometry_residual > 1e-8) throw InvariantViolation("isometry residual above 1e-8");
  return 0;
}

int cmd_assemble(const Common& c) {
  Json cfg = load_config(c);
  SurfacePatch patch;
  if (cfg.value("from_revolve", false)) {
    std::string fam = cfg.value("profile", "sphere");
    int n = cfg.value("samples", 1024);
    ProfileMetric prof =
        fam == "sphere" ? ProfileMetric::sphere(cfg.value("radius", 1.0), n)
        : fam == "horosphere"
            ? ProfileMetric::horosphere(cfg.value("length", 2.5), n)
            : ProfileMetric::equidistant(cfg.value("distance", 1.0), cfg.value("length", 2.0), n);
    patch = realize(prof).patch(cfg.value("n_theta", 96));
  } else {
    patch = patch_from_config(cfg, c.resolution);
  }
  FundamentalForms forms = fundamental_forms(patch);
  GaussMapField gmap = gauss_map(patch, forms);
  BoundaryData bd = boundary_data_assembly(patch, forms, gmap);

  std::string csv = "vx,vy,vz,chart_re,chart_im,u,dilatation\n";
  for (const auto& s : bd.samples) {
    Complex z = sphere_to_chart(ChartKind::North, s.dir);
    csv += io::fmt(s.dir[0]) + "," + io::fmt(s.dir[1]) + "," + io::fmt(s.dir[2]) + "," +
           io::fmt(z.real()) + "," + io::fmt(z.imag()) + "," + io::fmt(s.u) + "," +
           io::fmt(s.dilatation) + "\n";
  }
  emit(c, "boundary_data.csv", csv);

  Json rep = base_report(c, "assemble", cfg, {});
  rep["samples"] = bd.samples.size();
  rep["coverage_fraction"] = bd.coverage_fraction;
  rep["sup_dilatation"] = bd.sup_dilatation;
  emit(c, "assemble_report.json", rep.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"boundary data of convex domains in hyperbolic 3-space"};
  app.require_subcommand(1);

  Common common;
  app.add_option("--config", common.config_path, "JSON configuration file");
  app.add_option("--out", common.out_dir, "output directory");
  app.add_flag("--deterministic", common.deterministic,
               "byte-stable reports (no wall-clock fields)");
  app.add_option("--seed", common.seed, "random seed recorded in reports");
  app.add_option("--resolution", common.resolution, "grid resolution override");

  std::map<std::string, std::function<int(const Common&)>> handlers = {
      {"curvature", cmd_curvature}, {"decompose", cmd_decompose}, {"hull", cmd_hull},
      {"cutoff", cmd_cutoff},       {"approx", cmd_approx},       {"surface", cmd_surface},
      {"revolve", cmd_revolve},     {"assemble", cmd_assemble},
  };
  for (auto& [name, fn] : handlers) app.add_subcommand(name)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;  // usage problems are input errors
  }

  std::string chosen;
  for (auto* sub : app.get_subcommands()) chosen = sub->get_name();
  try {
    return handlers.at(chosen)(common);
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
