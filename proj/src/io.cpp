#include "hconv/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hconv/hyp3.hpp"

namespace hconv::io {

namespace {

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  if (!cur.empty()) lines.push_back(cur);
  return lines;
}

std::vector<double> parse_csv_row(const std::string& line, int lineno) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok == "nan" || tok == "NaN") {
      out.push_back(std::nan(""));
      continue;
    }
    try {
      size_t pos = 0;
      double v = std::stod(tok, &pos);
      if (pos != tok.size()) throw std::invalid_argument("trailing characters");
      out.push_back(v);
    } catch (const std::exception&) {
      throw ParseError("malformed CSV value '" + tok + "'", lineno);
    }
  }
  return out;
}

}  // namespace

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

// ---------------------------------------------------------------------------
// Fields
// ---------------------------------------------------------------------------

std::string serialize_field(const ConformalMetricField& f) {
  Json hdr;
  hdr["format"] = "hconv-field";
  hdr["version"] = 1;
  hdr["chart"] = f.chart.kind == ChartKind::North ? "north" : "south";
  hdr["nx"] = f.chart.nx;
  hdr["ny"] = f.chart.ny;
  hdr["extent"] = {f.chart.x0, f.chart.x1, f.chart.y0, f.chart.y1};
  hdr["base_point"] = "origin";  // c1 is the visual metric of the hyperboloid origin
  std::string out = hdr.dump() + "\n";
  for (int j = 0; j < f.chart.ny; ++j) {
    std::string row;
    for (int i = 0; i < f.chart.nx; ++i) {
      if (i) row += ",";
      row += f.masked(i, j) ? fmt(f.u(i, j)) : "nan";
    }
    out += row + "\n";
  }
  return out;
}

ConformalMetricField parse_field(const std::string& text) {
  auto lines = split_lines(text);
  if (lines.empty()) throw ParseError("empty field file", 1);
  Json hdr;
  try {
    hdr = Json::parse(lines[0]);
  } catch (const std::exception& e) {
    throw ParseError(std::string("bad JSON header: ") + e.what(), 1);
  }
  if (hdr.value("format", "") != "hconv-field") throw ParseError("not a field file", 1);
  int nx = hdr.at("nx").get<int>(), ny = hdr.at("ny").get<int>();
  auto ext = hdr.at("extent");
  Chart ch(hdr.value("chart", "north") == "north" ? ChartKind::North : ChartKind::South, nx, ny,
           ext.at(0).get<double>(), ext.at(1).get<double>(), ext.at(2).get<double>(),
           ext.at(3).get<double>());
  if (int(lines.size()) < 1 + ny) throw ParseError("missing payload rows", int(lines.size()));
  GridD u(nx, ny, 0.0);
  GridB mask(nx, ny, 0);
  for (int j = 0; j < ny; ++j) {
    auto row = parse_csv_row(lines[1 + j], 2 + j);
    if (int(row.size()) != nx)
      throw ParseError("expected " + std::to_string(nx) + " values, got " +
                           std::to_string(row.size()),
                       2 + j);
    for (int i = 0; i < nx; ++i) {
      if (std::isnan(row[i])) continue;
      u(i, j) = row[i];
      mask(i, j) = 1;
    }
  }
  return ConformalMetricField(ch, std::move(u), std::move(mask));
}

std::string curvature_csv(const ConformalMetricField& f, const CurvatureField& K) {
  std::string out = "i,j,chart_x,chart_y,K,valid\n";
  for (int j = 0; j < f.chart.ny; ++j)
    for (int i = 0; i < f.chart.nx; ++i) {
      if (!f.masked(i, j)) continue;
      out += std::to_string(i) + "," + std::to_string(j) + "," + fmt(f.chart.cx(i)) + "," +
             fmt(f.chart.cy(j)) + "," + fmt(K.K(i, j)) + "," + (K.valid(i, j) ? "1" : "0") + "\n";
    }
  return out;
}

// ---------------------------------------------------------------------------
// Cutoff / profile CSV
// ---------------------------------------------------------------------------

std::string cutoff_csv(const CutoffFunction& phi) {
  std::string out = "x,phi,dphi,margin\n";
  for (const auto& k : phi.knots)
    out += fmt(k.x) + "," + fmt(k.phi) + "," + fmt(k.dphi) + "," + fmt(k.margin) + "\n";
  return out;
}

CutoffFunction parse_cutoff_csv(const std::string& text) {
  auto lines = split_lines(text);
  if (lines.size() < 3 || lines[0] != "x,phi,dphi,margin")
    throw ParseError("not a cutoff CSV", 1);
  CutoffFunction phi;
  for (size_t k = 1; k < lines.size(); ++k) {
    auto row = parse_csv_row(lines[k], int(k + 1));
    if (row.size() != 4) throw ParseError("expected 4 columns", int(k + 1));
    phi.knots.push_back({row[0], row[1], row[2], row[3]});
  }
  phi.step = phi.knots[1].x - phi.knots[0].x;
  // bridge_epsilon is recovered from where phi' leaves 1.
  phi.bridge_epsilon = 0.0;
  for (const auto& k : phi.knots)
    if (k.x > 0.0 && k.dphi < 1.0 - 1e-12) {
      phi.bridge_epsilon = 1.0 - k.x;
      break;
    }
  return phi;
}

std::string profile_csv(const ProfileMetric& p) {
  std::string out = "rho,f,df\n";
  for (size_t k = 0; k < p.rho.size(); ++k)
    out += fmt(p.rho[k]) + "," + fmt(p.f[k]) + "," + fmt(p.df[k]) + "\n";
  return out;
}

ProfileMetric parse_profile_csv(const std::string& text) {
  auto lines = split_lines(text);
  if (lines.size() < 3 || lines[0] != "rho,f,df") throw ParseError("not a profile CSV", 1);
  ProfileMetric p;
  for (size_t k = 1; k < lines.size(); ++k) {
    auto row = parse_csv_row(lines[k], int(k + 1));
    if (row.size() != 3) throw ParseError("expected 3 columns", int(k + 1));
    p.rho.push_back(row[0]);
    p.f.push_back(row[1]);
    p.df.push_back(row[2]);
  }
  return p;
}

// ---------------------------------------------------------------------------
// Domains
// ---------------------------------------------------------------------------

std::string domain_json(const QuasidiskDomain& d) {
  Json j;
  j["format"] = "hconv-domain";
  j["qc_constant_hint"] = d.qc_constant_hint();
  Json coeffs = Json::array();
  for (const auto& c : d.coefficients()) coeffs.push_back({c.real(), c.imag()});
  j["coefficients"] = coeffs;
  return j.dump(2) + "\n";
}

QuasidiskDomain parse_domain_json(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const std::exception& e) {
    throw ParseError(std::string("bad JSON: ") + e.what(), 1);
  }
  if (j.value("format", "") != "hconv-domain") throw ParseError("not a domain file", 1);
  std::vector<Complex> coeffs;
  for (const auto& c : j.at("coefficients"))
    coeffs.emplace_back(c.at(0).get<double>(), c.at(1).get<double>());
  return QuasidiskDomain(coeffs, j.value("qc_constant_hint", 1.0));
}

// ---------------------------------------------------------------------------
// OBJ
// ---------------------------------------------------------------------------

std::string write_obj(const ObjMesh& m) {
  std::string out;
  for (const auto& v : m.vertices)
    out += "v " + fmt(v[0]) + " " + fmt(v[1]) + " " + fmt(v[2]) + "\n";
  for (const auto& f : m.faces) {
    out += "f";
    for (int idx : f) out += " " + std::to_string(idx + 1);
    out += "\n";
  }
  return out;
}

ObjMesh read_obj(const std::string& text) {
  ObjMesh m;
  auto lines = split_lines(text);
  for (size_t k = 0; k < lines.size(); ++k) {
    const std::string& line = lines[k];
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string tag;
    ss >> tag;
    if (tag == "v") {
      Vec3 v;
      if (!(ss >> v[0] >> v[1] >> v[2])) throw ParseError("malformed vertex", int(k + 1));
      m.vertices.push_back(v);
    } else if (tag == "f") {
      std::vector<int> face;
      std::string idx;
      while (ss >> idx) {
        try {
          face.push_back(std::stoi(idx.substr(0, idx.find('/'))) - 1);
        } catch (const std::exception&) {
          throw ParseError("malformed face index '" + idx + "'", int(k + 1));
        }
      }
      if (face.size() < 3) throw ParseError("face with fewer than 3 vertices", int(k + 1));
      m.faces.push_back(face);
    }
  }
  return m;
}

ObjMesh hull_to_obj(const ConvexHullBoundary& hull) {
  ObjMesh m;
  for (const auto& v : hull.vertices) m.vertices.push_back(v.v);  // Klein: unit vectors
  for (const auto& f : hull.faces) m.faces.push_back(f.cycle);
  return m;
}

Json hull_sidecar(const ConvexHullBoundary& hull) {
  Json j;
  j["format"] = "hconv-hull-meta";
  j["planar"] = hull.planar;
  j["segment"] = hull.segment;
  Json faces = Json::array();
  for (const auto& f : hull.faces) {
    Json jf;
    jf["plane"] = {f.plane[0], f.plane[1], f.plane[2], f.plane[3]};
    jf["cycle"] = f.cycle;
    faces.push_back(jf);
  }
  j["faces"] = faces;
  Json edges = Json::array();
  for (const auto& e : hull.edges) {
    Json je;
    je["v"] = {e.v0, e.v1};
    je["f"] = {e.f0, e.f1};
    je["interior_dihedral"] = e.interior_dihedral;
    edges.push_back(je);
  }
  j["edges"] = edges;
  j["convexity_residual"] = hull.convexity_residual();
  return j;
}

ObjMesh patch_to_obj(const SurfacePatch& patch) {
  ObjMesh m;
  ModelMap mm;
  m.vertices.reserve(patch.X.size());
  for (const auto& x : patch.X) m.vertices.push_back(mm.to_poincare(HPoint(x)));
  for (int j = 0; j + 1 < patch.nt; ++j)
    for (int i = 0; i + 1 < patch.ns; ++i)
      m.faces.push_back({j * patch.ns + i, j * patch.ns + i + 1, (j + 1) * patch.ns + i + 1,
                         (j + 1) * patch.ns + i});
  return m;
}

Json patch_metadata(const SurfacePatch& patch) {
  Json j;
  j["format"] = "hconv-patch-meta";
  j["model"] = "poincare";
  j["family"] = patch.family;
  j["ns"] = patch.ns;
  j["nt"] = patch.nt;
  j["s_range"] = {patch.s0, patch.s1};
  j["t_range"] = {patch.t0, patch.t1};
  ModelMap mm;
  Vec3 ref = mm.to_poincare(patch.interior_ref);
  j["interior_ref"] = {ref[0], ref[1], ref[2]};
  return j;
}

SurfacePatch patch_from_obj(const ObjMesh& mesh, const Json& metadata) {
  if (metadata.value("format", "") != "hconv-patch-meta")
    throw std::runtime_error("patch_from_obj: bad metadata");
  int ns = metadata.at("ns").get<int>(), nt = metadata.at("nt").get<int>();
  if (int(mesh.vertices.size()) != ns * nt)
    throw std::runtime_error("patch_from_obj: vertex count does not match metadata grid");
  ModelMap mm;
  std::vector<Vec4> nodes;
  nodes.reserve(mesh.vertices.size());
  for (const auto& v : mesh.vertices) nodes.push_back(mm.from_poincare(v).x);
  auto ref = metadata.at("interior_ref");
  HPoint iref = mm.from_poincare(Vec3(ref.at(0).get<double>(), ref.at(1).get<double>(),
                                      ref.at(2).get<double>()));
  auto sr = metadata.at("s_range"), tr = metadata.at("t_range");
  SurfacePatch p = SurfacePatch::from_samples(std::move(nodes), ns, nt, sr.at(0).get<double>(),
                                              sr.at(1).get<double>(), tr.at(0).get<double>(),
                                              tr.at(1).get<double>(), iref);
  p.family = metadata.value("family", "sampled");
  return p;
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

Json make_report(const std::string& command, const Json& config,
                 const std::vector<std::pair<std::string, std::string>>& input_contents,
                 std::uint64_t seed, bool deterministic) {
  Json j;
  j["schema_version"] = 1;
  j["tool"] = "hconv";
  j["command"] = command;
  j["config"] = config;
  Json hashes = Json::object();
  for (const auto& [name, content] : input_contents) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", (unsigned long long)fnv1a64(content));
    hashes[name] = std::string("fnv1a64:") + buf;
  }
  j["input_hashes"] = hashes;
  j["seed"] = seed;
  j["deterministic"] = deterministic;
  return j;
}

}  // namespace hconv::io
