#pragma once

// Text serialization: fields as a JSON header plus CSV payload, cutoffs and
// profiles as CSV, domains as JSON coefficient lists, hulls and patches as
// OBJ with JSON sidecars, and the structured JSON run reports.  All floating
// point is printed with %.17g so round trips are bit-exact.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>  // vendored nlohmann/json

#include "hconv/conformal.hpp"
#include "hconv/cutoff.hpp"
#include "hconv/domains.hpp"
#include "hconv/revolve.hpp"
#include "hconv/surfaces.hpp"

namespace hconv::io {

using Json = nlohmann::ordered_json;

std::string fmt(double v);
std::uint64_t fnv1a64(const std::string& bytes);
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

struct ParseError : std::runtime_error {
  int line;
  ParseError(const std::string& what, int line_)
      : std::runtime_error(what + " (line " + std::to_string(line_) + ")"), line(line_) {}
};

// Conformal metric fields: one JSON header line, then ny CSV rows of nx
// u-values ("nan" on unmasked cells).
std::string serialize_field(const ConformalMetricField& f);
ConformalMetricField parse_field(const std::string& text);

std::string curvature_csv(const ConformalMetricField& f, const CurvatureField& K);

std::string cutoff_csv(const CutoffFunction& phi);
CutoffFunction parse_cutoff_csv(const std::string& text);

std::string profile_csv(const ProfileMetric& p);
ProfileMetric parse_profile_csv(const std::string& text);

std::string domain_json(const QuasidiskDomain& d);
QuasidiskDomain parse_domain_json(const std::string& text);

struct ObjMesh {
  std::vector<Vec3> vertices;
  std::vector<std::vector<int>> faces;  // 0-based
};

std::string write_obj(const ObjMesh& m);
ObjMesh read_obj(const std::string& text);

ObjMesh hull_to_obj(const ConvexHullBoundary& hull);  // Klein-model coordinates
Json hull_sidecar(const ConvexHullBoundary& hull);

ObjMesh patch_to_obj(const SurfacePatch& patch);  // Poincare-ball coordinates
Json patch_metadata(const SurfacePatch& patch);
SurfacePatch patch_from_obj(const ObjMesh& mesh, const Json& metadata);

/// Report skeleton shared by all CLI commands: schema version, the full
/// config, content hashes of the inputs, and the seed.  Timing fields are
/// only added when deterministic output is off.
Json make_report(const std::string& command, const Json& config,
                 const std::vector<std::pair<std::string, std::string>>& input_contents,
                 std::uint64_t seed, bool deterministic);

}  // namespace hconv::io
