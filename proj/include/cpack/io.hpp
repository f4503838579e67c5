#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "cpack/branching.hpp"
#include "cpack/complex.hpp"
#include "cpack/layout.hpp"
#include "cpack/pipelines.hpp"
#include "cpack/solver.hpp"
#include "cpack/sphere.hpp"

namespace cpack {

inline constexpr const char* schema_version = "cpb-1";

using json = nlohmann::json;

namespace detail {

// Infinite radii (horocycles) have no JSON number, so they travel as "inf".
inline json num(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return nullptr;
  return x;
}

inline double num_of(const json& j) {
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s == "inf") return infinity;
    if (s == "-inf") return -infinity;
    fail(ErrorCode::invalid_input, "bad number '" + s + "'");
  }
  if (j.is_null()) return std::nan("");
  return j.get<double>();
}

inline json pt(cplx z) { return json::array({z.real(), z.imag()}); }
inline cplx pt_of(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

inline json header(const char* type) { return {{"schema", schema_version}, {"type", type}}; }

inline void expect_type(const json& j, const char* type) {
  if (!j.is_object() || j.value("schema", "") != schema_version)
    fail(ErrorCode::invalid_input, std::string("expected a ") + schema_version + " document");
  if (j.value("type", "") != type) fail(ErrorCode::invalid_input, std::string("expected a '") + type + "' document");
}

inline json pair_json(const std::optional<std::pair<VertexId, VertexId>>& p) {
  return p ? json::array({p->first, p->second}) : json(nullptr);
}

inline std::optional<std::pair<VertexId, VertexId>> pair_of(const json& j) {
  if (j.is_null()) return std::nullopt;
  return std::pair{j.at(0).get<VertexId>(), j.at(1).get<VertexId>()};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Complex

inline json hole_to_json(const BlackHoleRecord& r) {
  return {{"kind", r.kind == HoleKind::singular ? "singular" : "shifted"},
          {"fall_guy", r.fall_guy},
          {"chaperones", r.chaperones},
          {"originals", r.originals},
          {"twins", detail::pair_json(r.twins)},
          {"jumps", detail::pair_json(r.jumps)},
          {"pre_jumps", detail::pair_json(r.pre_jumps)},
          {"horizon", r.horizon}};
}

inline BlackHoleRecord hole_from_json(const json& j) {
  BlackHoleRecord r;
  r.kind = j.at("kind") == "singular" ? HoleKind::singular : HoleKind::shifted;
  r.fall_guy = j.at("fall_guy");
  r.chaperones = j.at("chaperones").get<std::vector<VertexId>>();
  r.originals = j.at("originals").get<std::vector<VertexId>>();
  r.twins = detail::pair_of(j.at("twins"));
  r.jumps = detail::pair_of(j.at("jumps"));
  r.pre_jumps = detail::pair_of(j.at("pre_jumps"));
  r.horizon = j.at("horizon").get<std::vector<VertexId>>();
  return r;
}

inline json complex_to_json(const Complex& k) {
  json j = detail::header("complex");
  json faces = json::array();
  for (const Face& f : k.faces()) faces.push_back({f[0], f[1], f[2]});
  j["vertex_count"] = k.vertex_count();
  j["faces"] = faces;
  j["meta"] = k.meta();
  json holes = json::array();
  for (const auto& h : k.holes()) holes.push_back(hole_to_json(h));
  j["holes"] = holes;
  return j;
}

inline Complex complex_from_json(const json& j) {
  detail::expect_type(j, "complex");
  std::vector<Face> faces;
  for (const auto& f : j.at("faces")) {
    if (!f.is_array() || f.size() != 3) fail(ErrorCode::invalid_input, "faces must be vertex triples");
    faces.push_back({f[0].get<VertexId>(), f[1].get<VertexId>(), f[2].get<VertexId>()});
  }
  Complex k(std::move(faces), j.value("meta", json::object()));
  if (j.contains("holes")) {
    std::vector<BlackHoleRecord> holes;
    for (const auto& h : j["holes"]) holes.push_back(hole_from_json(h));
    k.set_holes(holes);
  }
  return k;
}

// ---------------------------------------------------------------------------
// Labels, overlaps, packings

inline json label_to_json(const Label& r) {
  json j = detail::header("label");
  j["geometry"] = to_string(r.geometry);
  json radii = json::array();
  for (std::size_t v = 1; v < r.radius.size(); ++v) radii.push_back(detail::num(r.radius[v]));
  j["radius"] = radii;
  return j;
}

inline Label label_from_json(const json& j) {
  detail::expect_type(j, "label");
  Label r;
  r.geometry = geometry_from_string(j.at("geometry"));
  r.radius.push_back(0.0);
  for (const auto& x : j.at("radius")) r.radius.push_back(detail::num_of(x));
  return r;
}

inline json overlaps_to_json(const OverlapMap& phi) {
  auto es = phi.entries();
  std::sort(es.begin(), es.end(), [](const auto& x, const auto& y) {
    return std::pair{x.first.a, x.first.b} < std::pair{y.first.a, y.first.b};
  });
  json a = json::array();
  for (auto [e, p] : es) a.push_back({e.a, e.b, p});
  return a;
}

inline OverlapMap overlaps_from_json(const json& a) {
  OverlapMap phi;
  for (const auto& x : a) phi.set(x.at(0).get<VertexId>(), x.at(1).get<VertexId>(), x.at(2).get<double>());
  return phi;
}

inline json circle_to_json(const Circle& c) {
  return {{"center", detail::pt(c.center)},
          {"radius", detail::num(c.radius)},
          {"ecenter", detail::pt(c.ecenter)},
          {"eradius", c.eradius}};
}

inline Circle circle_from_json(const json& j) {
  return {detail::pt_of(j.at("center")), detail::num_of(j.at("radius")), detail::pt_of(j.at("ecenter")),
          j.at("eradius").get<double>()};
}

inline json packing_to_json(const Packing& p) {
  json j = detail::header("packing");
  j["geometry"] = to_string(p.geometry);
  j["root_face"] = p.root_face;
  json cs = json::array();
  for (VertexId v = 1; v <= p.vertex_count(); ++v) cs.push_back(circle_to_json(p[v]));
  j["circles"] = cs;
  return j;
}

inline Packing packing_from_json(const json& j) {
  detail::expect_type(j, "packing");
  Packing p;
  p.geometry = geometry_from_string(j.at("geometry"));
  p.root_face = j.value("root_face", -1);
  p.circles.push_back(Circle{});
  for (const auto& c : j.at("circles")) p.circles.push_back(circle_from_json(c));
  return p;
}

inline json sphere_to_json(const std::vector<SphereCircle>& caps) {
  json j = detail::header("sphere_packing");
  json cs = json::array();
  for (std::size_t v = 1; v < caps.size(); ++v)
    cs.push_back({{"center", {caps[v].center[0], caps[v].center[1], caps[v].center[2]}}, {"radius", caps[v].radius}});
  j["caps"] = cs;
  return j;
}

inline std::vector<SphereCircle> sphere_from_json(const json& j) {
  detail::expect_type(j, "sphere_packing");
  std::vector<SphereCircle> caps(1);
  for (const auto& c : j.at("caps"))
    caps.push_back({{c["center"][0].get<double>(), c["center"][1].get<double>(), c["center"][2].get<double>()},
                    c.at("radius").get<double>()});
  return caps;
}

// ---------------------------------------------------------------------------
// Branch specs

inline json spec_to_json(const BranchSpec& s) {
  switch (s.kind) {
    case BranchKind::traditional: return {{"kind", "traditional"}, {"v", s.v}, {"order", s.order}};
    case BranchKind::singular:
      return {{"kind", "singular"}, {"face", {s.face[0], s.face[1], s.face[2]}}, {"gamma", {s.gamma[0], s.gamma[1]}}};
    case BranchKind::shifted:
      return {{"kind", "shifted"}, {"v", s.v}, {"j1", s.j1}, {"j2", s.j2}, {"gamma", {s.gamma[0], s.gamma[1]}}};
  }
  return nullptr;
}

inline BranchSpec spec_from_json(const json& j) {
  const std::string kind = j.at("kind");
  if (kind == "traditional") return BranchSpec::traditional(j.at("v"), j.value("order", 1));
  if (kind == "singular") {
    const auto& f = j.at("face");
    return BranchSpec::singular({f[0].get<VertexId>(), f[1].get<VertexId>(), f[2].get<VertexId>()}, j.at("gamma")[0],
                                j.at("gamma")[1]);
  }
  if (kind == "shifted") return BranchSpec::shifted(j.at("v"), j.at("j1"), j.at("j2"), j.at("gamma")[0], j.at("gamma")[1]);
  fail(ErrorCode::invalid_input, "unknown branch kind '" + kind + "'");
}

inline std::vector<BranchSpec> specs_from_json(const json& j) {
  const json& list = j.is_object() ? j.at("specs") : j;
  std::vector<BranchSpec> out;
  for (const auto& s : list) out.push_back(spec_from_json(s));
  return out;
}

// ---------------------------------------------------------------------------
// Reports

/// Report document; `artifacts` names the files holding the packings.
inline json report_to_json(const PipelineReport& r, const json& artifacts = json::object()) {
  json j = detail::header("report");
  j["function"] = r.kind;
  j["artifacts"] = artifacts;
  j["normalization"] = r.normalization;
  j["windings"] = r.windings;
  j["branch_vertices"] = r.branch_vertices;
  json pts = json::array(), vals = json::array();
  for (cplx p : r.branch_points) pts.push_back(detail::pt(p));
  for (cplx p : r.branch_values) vals.push_back(detail::pt(p));
  j["branch_points"] = pts;
  j["branch_values"] = vals;
  json holes = json::array();
  for (const auto& h : r.holes) holes.push_back(hole_to_json(h));
  j["holes"] = holes;
  j["holonomy"] = r.holonomy;
  j["checks"] = r.checks;
  j["residuals"] = {{"domain", r.domain_residual}, {"image", r.image_residual}};
  j["diagnostics"] = r.diagnostics;
  return j;
}

// ---------------------------------------------------------------------------
// Files

inline json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::invalid_input, "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorCode::invalid_input, "'" + path + "' is not valid JSON: " + e.what());
  }
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::invalid_input, "cannot write '" + path + "'");
  out << text;
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace cpack
