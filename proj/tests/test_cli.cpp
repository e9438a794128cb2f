#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hconv/io.hpp"

using namespace hconv;
namespace fs = std::filesystem;

#ifndef HCONV_CLI_PATH
#error "HCONV_CLI_PATH must be defined"
#endif

namespace {

struct RunResult {
  int exit_code = -1;
  std::string stderr_text;
};

RunResult run_cli(const std::string& args, const std::string& tag) {
  fs::path err = fs::temp_directory_path() / ("hconv_cli_" + tag + ".err");
  std::string cmd = std::string(HCONV_CLI_PATH) + " " + args + " 2> " + err.string();
  int rc = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WEXITSTATUS(rc);
  std::ifstream in(err);
  std::stringstream ss;
  ss << in.rdbuf();
  r.stderr_text = ss.str();
  return r;
}

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / "hconv_cli_tests" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

void write(const fs::path& p, const std::string& text) { io::write_file(p.string(), text); }

}  // namespace

TEST_CASE("cutoff command certifies and writes outputs") {
  fs::path dir = scratch("cutoff");
  write(dir / "cfg.json", R"({"bridge_epsilon": 0.2})");
  RunResult r = run_cli("cutoff --config " + (dir / "cfg.json").string() + " --out " + dir.string(),
                        "cutoff");
  CHECK(r.exit_code == 0);
  io::Json rep = io::Json::parse(io::read_file((dir / "cutoff_report.json").string()));
  CHECK(rep["ok"] == true);
  CHECK(double(rep["min_margin"]) >= 0.0);
  CHECK(fs::exists(dir / "cutoff.csv"));
}

TEST_CASE("curvature: round-sphere pair satisfies Gauss-Bonnet within 1%") {
  fs::path dir = scratch("gb");
  SphereField round = SphereField::sample(160, 1.1, [](const Vec3&) { return 0.0; });
  write(dir / "north.field", io::serialize_field(round.north));
  write(dir / "south.field", io::serialize_field(round.south));
  io::Json cfg;
  cfg["field_north"] = (dir / "north.field").string();
  cfg["field_south"] = (dir / "south.field").string();
  write(dir / "cfg.json", cfg.dump());
  RunResult r = run_cli(
      "curvature --config " + (dir / "cfg.json").string() + " --out " + dir.string(), "gb");
  CHECK(r.exit_code == 0);
  io::Json rep = io::Json::parse(io::read_file((dir / "curvature_report.json").string()));
  CHECK(double(rep["gauss_bonnet_defect"]) < 0.01);
}

TEST_CASE("curvature: constant-shift field reports K = e^{-2c}") {
  fs::path dir = scratch("shift");
  const int n = 64;
  Chart ch(ChartKind::North, n, n, -1.0, 1.0, -1.0, 1.0);
  ConformalMetricField f(ch, GridD(n, n, 1.0), GridB(n, n, 1));
  write(dir / "c.field", io::serialize_field(f));
  io::Json cfg;
  cfg["field"] = (dir / "c.field").string();
  write(dir / "cfg.json", cfg.dump());
  RunResult r = run_cli(
      "curvature --config " + (dir / "cfg.json").string() + " --out " + dir.string(), "shift");
  CHECK(r.exit_code == 0);
  io::Json rep = io::Json::parse(io::read_file((dir / "curvature_report.json").string()));
  CHECK(double(rep["K_min"]) == doctest::Approx(std::exp(-2.0)).epsilon(1e-9));
  CHECK(double(rep["K_max"]) == doctest::Approx(std::exp(-2.0)).epsilon(1e-9));
}

TEST_CASE("malformed field CSV exits 2 with a line-numbered error") {
  fs::path dir = scratch("bad");
  ConformalMetricField f = equidistant_disk_field(32, 1.05, 1.0);
  std::string text = io::serialize_field(f);
  auto pos = text.find('\n', text.find('\n') + 1);
  text.insert(pos + 1, "bogus,");
  write(dir / "bad.field", text);
  io::Json cfg;
  cfg["field"] = (dir / "bad.field").string();
  write(dir / "cfg.json", cfg.dump());
  RunResult r =
      run_cli("curvature --config " + (dir / "cfg.json").string() + " --out " + dir.string(),
              "bad");
  CHECK(r.exit_code == 2);
  CHECK(r.stderr_text.find("line") != std::string::npos);
}

TEST_CASE("approx: missing cutoff file is an explicit input error") {
  fs::path dir = scratch("missing");
  ConformalMetricField f = equidistant_disk_field(64, 1.02, 1.0);
  write(dir / "base.field", io::serialize_field(f));
  io::Json cfg;
  cfg["field"] = (dir / "base.field").string();
  cfg["cutoff"] = (dir / "nonexistent.csv").string();
  cfg["epsilon"] = 0.41;
  write(dir / "cfg.json", cfg.dump());
  RunResult r = run_cli(
      "approx --config " + (dir / "cfg.json").string() + " --out " + dir.string(), "missing");
  CHECK(r.exit_code == 2);
  CHECK(r.stderr_text.find("cannot open file") != std::string::npos);
}

TEST_CASE("approx: end-to-end on the equidistant disk datum") {
  fs::path dir = scratch("approx");
  ConformalMetricField base = equidistant_disk_field(256, 1.02, 1.0);
  write(dir / "base.field", io::serialize_field(base));
  CutoffFunction phi = build_cutoff(0.2);
  write(dir / "cutoff.csv", io::cutoff_csv(phi));
  const double sech2 = 1.0 / (std::cosh(1.0) * std::cosh(1.0));
  io::Json cfg;
  cfg["field"] = (dir / "base.field").string();
  cfg["cutoff"] = (dir / "cutoff.csv").string();
  cfg["epsilon"] = sech2;
  cfg["expected_K"] = -sech2;
  cfg["n_min"] = 0;
  cfg["n_max"] = 1;
  write(dir / "cfg.json", cfg.dump());
  RunResult r = run_cli(
      "approx --config " + (dir / "cfg.json").string() + " --out " + dir.string(), "approx");
  CHECK(r.exit_code == 0);
  io::Json rep = io::Json::parse(io::read_file((dir / "approx_report.json").string()));
  CHECK(rep["pass"] == true);
  CHECK(fs::exists(dir / "approx_n0.json"));
  CHECK(fs::exists(dir / "approx_n1.json"));
}

TEST_CASE("revolve: end-to-end sphere realization") {
  fs::path dir = scratch("revolve");
  write(dir / "cfg.json", R"({"profile": "sphere", "radius": 1.0, "samples": 1024})");
  RunResult r = run_cli(
      "revolve --config " + (dir / "cfg.json").string() + " --out " + dir.string(), "revolve");
  CHECK(r.exit_code == 0);
  io::Json rep = io::Json::parse(io::read_file((dir / "revolve_report.json").string()));
  CHECK(double(rep["round_trip_sup"]) < 1e-6);
  CHECK(rep["class"] == "sphere");
  CHECK(double(rep["class_parameter"]) == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(fs::exists(dir / "revolution.obj"));
}

TEST_CASE("hull: tetrahedron export round-trips bit-identically") {
  fs::path dir = scratch("hull");
  double q = 1.0 / std::sqrt(3.0);
  io::Json cfg;
  cfg["points"] = {{q, q, q}, {q, -q, -q}, {-q, q, -q}, {-q, -q, q}};
  write(dir / "cfg.json", cfg.dump());
  RunResult r =
      run_cli("hull --config " + (dir / "cfg.json").string() + " --out " + dir.string(), "hull");
  CHECK(r.exit_code == 0);
  std::string obj = io::read_file((dir / "hull.obj").string());
  CHECK(io::write_obj(io::read_obj(obj)) == obj);
  io::Json meta = io::Json::parse(io::read_file((dir / "hull_meta.json").string()));
  CHECK(meta["faces"].size() == 4);
  for (const auto& e : meta["edges"])
    CHECK(std::abs(double(e["interior_dihedral"]) - kPi / 3.0) < 1e-8);
}

TEST_CASE("surface, assemble and decompose commands run end to end") {
  fs::path dir = scratch("misc");

  write(dir / "surf.json", R"({"family": "sphere", "radius": 1.0, "ns": 64, "nt": 128})");
  RunResult rs = run_cli(
      "surface --config " + (dir / "surf.json").string() + " --out " + dir.string(), "surf");
  CHECK(rs.exit_code == 0);
  io::Json srep = io::Json::parse(io::read_file((dir / "surface_report.json").string()));
  CHECK(double(srep["sup_dilatation"]) < 1.0 + 1e-8);
  CHECK(fs::exists(dir / "forms.csv"));
  CHECK(fs::exists(dir / "surface.obj"));

  write(dir / "asm.json", R"({"from_revolve": true, "profile": "sphere", "samples": 512})");
  RunResult ra = run_cli(
      "assemble --config " + (dir / "asm.json").string() + " --out " + dir.string(), "asm");
  CHECK(ra.exit_code == 0);
  io::Json arep = io::Json::parse(io::read_file((dir / "assemble_report.json").string()));
  CHECK(long(arep["samples"]) > 1000);
  CHECK(double(arep["sup_dilatation"]) < 1.0 + 1e-5);

  // Small identity-disk decomposition: v = 0, w = 0 within tolerance.
  QuasidiskDomain disk({Complex(0, 0), Complex(1, 0)});
  write(dir / "disk.json", io::domain_json(disk));
  const int n = 16;
  Chart ch(ChartKind::North, n, n, -0.9, 0.9, -0.9, 0.9);
  GridD u(n, n, 0.0);
  GridB mask(n, n, 0);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      double r2 = std::norm(ch.cz(i, j));
      if (r2 > 0.64) continue;
      u(i, j) = std::log1p(r2) - std::log1p(-r2);
      mask(i, j) = 1;
    }
  write(dir / "disk.field", io::serialize_field(ConformalMetricField(ch, u, mask)));
  io::Json dcfg;
  dcfg["field"] = (dir / "disk.field").string();
  dcfg["domain"] = (dir / "disk.json").string();
  write(dir / "dec.json", dcfg.dump());
  RunResult rd = run_cli(
      "decompose --config " + (dir / "dec.json").string() + " --out " + dir.string(), "dec");
  CHECK(rd.exit_code == 0);
  io::Json drep = io::Json::parse(io::read_file((dir / "decompose_report.json").string()));
  CHECK(drep["sign_invariants_ok"] == true);
  CHECK(double(drep["sup_abs_v"]) < 1e-7);
  CHECK(double(drep["sup_abs_w"]) < 1e-6);
}

TEST_CASE("deterministic reruns produce byte-identical reports") {
  fs::path dir1 = scratch("det1"), dir2 = scratch("det2");
  io::Json cfg;
  cfg["analytic"] = "bump";
  cfg["resolution"] = 128;
  write(dir1 / "cfg.json", cfg.dump());
  RunResult r1 = run_cli("curvature --deterministic --seed 9 --config " +
                             (dir1 / "cfg.json").string() + " --out " + dir1.string(),
                         "det1");
  RunResult r2 = run_cli("curvature --deterministic --seed 9 --config " +
                             (dir1 / "cfg.json").string() + " --out " + dir2.string(),
                         "det2");
  CHECK(r1.exit_code == 0);
  CHECK(r2.exit_code == 0);
  CHECK(io::read_file((dir1 / "curvature_report.json").string()) ==
        io::read_file((dir2 / "curvature_report.json").string()));
  CHECK(io::read_file((dir1 / "curvature.csv").string()) ==
        io::read_file((dir2 / "curvature.csv").string()));
}
