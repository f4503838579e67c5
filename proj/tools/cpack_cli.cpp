#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cpack/io.hpp"
#include "cpack/pipelines.hpp"
#include "cpack/svg.hpp"

namespace fs = std::filesystem;
using namespace cpack;

namespace {

struct Globals {
  double tol = tol::solver;
  int max_iters = 50000;
  unsigned seed = 1;
  std::string out_dir = ".";
  bool json_out = false;
};

SolverOptions solver_options(const Globals& g) {
  SolverOptions o;
  o.tol = g.tol;
  o.max_iters = g.max_iters;
  return o;
}

std::string out_path(const Globals& g, const std::string& name) {
  fs::create_directories(g.out_dir);
  return (fs::path(g.out_dir) / name).string();
}

// Writes a JSON artifact and returns its file name (relative to --out-dir).
std::string emit(const Globals& g, const std::string& name, const json& j) {
  write_text(out_path(g, name), dump(j));
  return name;
}

std::string emit_svg(const Globals& g, const std::string& name, const std::string& svg) {
  write_text(out_path(g, name), svg);
  return name;
}

void finish(const Globals& g, const json& summary) {
  if (g.json_out)
    std::cout << dump(summary);
  else
    for (auto& [k, v] : summary.items()) std::cout << k << ": " << v.dump() << "\n";
}

Complex load_complex(const std::string& path) { return complex_from_json(read_json(path)); }

OverlapMap load_overlaps(const std::string& path) {
  if (path.empty()) return {};
  json j = read_json(path);
  return overlaps_from_json(j.is_object() ? j.at("overlaps") : j);
}

cplx parse_point(const std::string& s) {
  double x = 0, y = 0;
  char comma = 0;
  std::istringstream in(s);
  if (!(in >> x >> comma >> y) || comma != ',') fail(ErrorCode::invalid_input, "points are written x,y");
  return {x, y};
}

std::vector<VertexId> parse_ids(const std::string& s) {
  std::vector<VertexId> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(std::stoi(item));
  return out;
}

// ---------------------------------------------------------------------------

void cmd_validate(const Globals& g, const std::string& cpath, const std::string& opath) {
  Complex k = load_complex(cpath);
  OverlapMap phi = load_overlaps(opath);
  TargetAngles a = uniform_targets(k);
  json s = {{"vertices", k.vertex_count()},
            {"edges", k.edge_count()},
            {"faces", k.face_count()},
            {"euler_characteristic", k.euler_characteristic()},
            {"boundary_components", k.boundary_component_count()},
            {"surface", to_string(k.surface_type())},
            {"conditions", condition_summary(k, phi, a, {})}};
  validate_conditions(k, phi, a, {});
  finish(g, s);
}

void cmd_gen(const Globals& g, const std::string& kind, int rings, int rows, int cols, int n, int m, std::string name) {
  ComplexKind ck = complex_kind_from(kind);
  Complex k = ck == ComplexKind::disc      ? gen_complex(ck, rings)
              : ck == ComplexKind::annulus ? gen_complex(ck, rows, cols)
                                           : gen_complex(ck, n, m);
  if (name.empty()) name = kind + ".json";
  if (g.json_out) {
    std::cout << dump(complex_to_json(k));
    return;
  }
  emit(g, name, complex_to_json(k));
  std::cout << out_path(g, name) << "\n";
}

void cmd_maxpack(const Globals& g, const std::string& cpath, const std::string& prefix) {
  Complex k = load_complex(cpath);
  SolveReport r = max_label(k, solver_options(g));
  Packing p = develop(k, r.label, {});
  if (k.surface_type() == SurfaceType::disc) p = normalize_disc(p, deepest_vertex(k), k.boundary_cycles()[0][0]);
  SvgStyle st;
  st.edges = true;
  st.disc_outline = true;
  json s = {{"label", emit(g, prefix + "_label.json", label_to_json(r.label))},
            {"packing", emit(g, prefix + "_packing.json", packing_to_json(p))},
            {"svg", emit_svg(g, prefix + ".svg", render_svg(p, &k, st))},
            {"residual", r.residual},
            {"iterations", r.iterations}};
  if (k.surface_type() == SurfaceType::disc) s["layout_error"] = layout_error(k, p, {});
  finish(g, s);
}

void cmd_branchpack(const Globals& g, const std::string& cpath, const std::string& spath, const std::string& prefix) {
  Complex k = load_complex(cpath);
  auto specs = specs_from_json(read_json(spath));
  BranchedBuild b = build_branched(k, specs, BoundaryCondition::horocycles(k), Geometry::hyperbolic, solver_options(g));
  SvgStyle st;
  st.edges = true;
  st.disc_outline = true;
  std::vector<VertexId> branch;
  for (const auto& s : specs)
    if (s.kind == BranchKind::traditional) branch.push_back(s.v);
  st.roles = roles_for(b.complex, branch);
  json s = {{"complex", emit(g, prefix + "_complex.json", complex_to_json(b.complex))},
            {"label", emit(g, prefix + "_label.json", label_to_json(b.label))},
            {"overlaps", emit(g, prefix + "_overlaps.json", {{"schema", schema_version}, {"type", "overlaps"},
                                                               {"overlaps", overlaps_to_json(b.phi)}})},
            {"packing", emit(g, prefix + "_packing.json", packing_to_json(b.packing))},
            {"svg", emit_svg(g, prefix + ".svg", render_svg(b.packing, &b.complex, st))},
            {"residual", b.residual},
            {"horizon_windings", b.horizon_windings}};
  finish(g, s);
}

void cmd_holonomy(const Globals& g, const std::string& cpath, const std::string& lpath, const std::string& opath,
                  const std::string& loop) {
  Complex k = load_complex(cpath);
  Label r = label_from_json(read_json(lpath));
  OverlapMap phi = load_overlaps(opath);
  std::vector<std::pair<std::string, std::vector<VertexId>>> paths;
  if (loop == "generator") {
    if (k.surface_type() == SurfaceType::annulus)
      paths.push_back({"generator", ring_inside(k, 0)});
    else if (k.surface_type() == SurfaceType::torus) {
      auto [row, col] = torus_generators(k, {});
      paths.push_back({"row", row});
      paths.push_back({"column", col});
    } else
      fail(ErrorCode::invalid_input, "only annulus and torus complexes have generator loops");
  } else {
    paths.push_back({"loop", parse_ids(loop)});
  }
  json s = json::object();
  for (const auto& [name, path] : paths) {
    Holonomy h = holonomy(k, r, phi, left_face_chain(k, path), path.front());
    s[name] = holonomy_json(h);
  }
  finish(g, s);
}

void cmd_render(const Globals& g, const std::string& ppath, const std::string& cpath, bool edges, std::string name) {
  json j = read_json(ppath);
  SvgStyle st;
  st.edges = edges;
  st.disc_outline = true;
  std::string svg;
  if (j.value("type", "") == "sphere_packing") {
    svg = render_sphere_svg(sphere_from_json(j), st);
  } else {
    Packing p = packing_from_json(j);
    std::optional<Complex> k;
    if (!cpath.empty()) {
      k = load_complex(cpath);
      st.roles = roles_for(*k);
    }
    svg = render_svg(p, k ? &*k : nullptr, st);
  }
  if (name.empty()) name = fs::path(ppath).stem().string() + ".svg";
  finish(g, {{"svg", emit_svg(g, name, svg)}});
}

}  // namespace

namespace {

// Writes every packing of a report next to it and returns the report summary.
json write_report(const Globals& g, const PipelineReport& r) {
  const std::string p = r.kind + "_";
  SvgStyle st;
  st.edges = true;
  st.disc_outline = true;
  json art = json::object();
  art["domain_complex"] = emit(g, p + "domain_complex.json", complex_to_json(r.domain_complex));
  art["domain_label"] = emit(g, p + "domain_label.json", label_to_json(r.domain_label));
  art["domain_packing"] = emit(g, p + "domain_packing.json", packing_to_json(r.domain));
  art["domain_svg"] = emit_svg(g, p + "domain.svg", render_svg(r.domain, &r.domain_complex, st));
  art["image_complex"] = emit(g, p + "image_complex.json", complex_to_json(r.image_complex));
  art["image_label"] = emit(g, p + "image_label.json", label_to_json(r.image_label));
  art["image_overlaps"] = emit(g, p + "image_overlaps.json",
                               {{"schema", schema_version}, {"type", "overlaps"}, {"overlaps", overlaps_to_json(r.image_phi)}});
  if (r.image.vertex_count() > 0) {
    art["image_packing"] = emit(g, p + "image_packing.json", packing_to_json(r.image));
    st.roles = roles_for(r.image_complex, r.kind == "weierstrass" ? std::vector<VertexId>{} : r.branch_vertices);
    art["image_svg"] = emit_svg(g, p + "image.svg", render_svg(r.image, &r.image_complex, st));
  }
  if (r.image_sphere.size() > 1) {
    art["image_sphere"] = emit(g, p + "image_sphere.json", sphere_to_json(r.image_sphere));
    SvgStyle ss;
    for (VertexId v : r.branch_vertices) ss.roles[v] = CircleRole::branch;
    art["image_sphere_svg"] = emit_svg(g, p + "image_sphere.svg", render_sphere_svg(r.image_sphere, ss));
  }
  json rep = report_to_json(r, art);
  rep["solver"] = {{"tol", g.tol}, {"max_iters", g.max_iters}, {"seed", g.seed}};
  art["report"] = emit(g, p + "report.json", rep);
  return g.json_out ? rep : json{{"report", art["report"]}, {"windings", r.windings}, {"holonomy", r.holonomy}};
}

double max_displacement(const json& hol, std::initializer_list<const char*> keys) {
  double worst = 0.0;
  for (const char* k : keys)
    if (hol.contains(k)) worst = std::max(worst, hol[k].value("displacement", 0.0));
  return worst;
}

int report_exit(const Globals& g, const PipelineReport& r, double displacement, bool fatal) {
  finish(g, write_report(g, r));
  if (fatal && displacement >= tol::holonomy) {
    std::cerr << "HolonomyNontrivial: generator holonomy displacement " << detail::sci(displacement) << "\n";
    return 4;
  }
  return 0;
}

struct PipelineArgs {
  std::string complex, mode = "traditional", repair = "none", p1, p2, orbit;
  VertexId v1 = 0, v2 = 0, j1 = 0, j2 = 0;
  bool nonfatal = false;
};

int cmd_blaschke(const Globals& g, const PipelineArgs& a) {
  BlaschkeOptions o;
  o.solver = solver_options(g);
  o.v1 = a.v1, o.v2 = a.v2;
  if (a.mode == "traditional") {
    o.mode = BranchKind::traditional;
  } else {
    o.mode = a.mode == "singular" ? BranchKind::singular
           : a.mode == "shifted"  ? BranchKind::shifted
                                  : (fail(ErrorCode::invalid_input, "mode is traditional, singular or shifted"), BranchKind{});
    o.p1 = parse_point(a.p1), o.p2 = parse_point(a.p2);
  }
  finish(g, write_report(g, blaschke(load_complex(a.complex), o)));
  return 0;
}

int cmd_ahlfors(const Globals& g, const PipelineArgs& a) {
  AhlforsOptions o;
  o.solver = solver_options(g);
  o.v1 = a.v1, o.v2 = a.v2, o.j1 = a.j1, o.j2 = a.j2;
  if (a.repair == "shifted")
    o.repair = Repair::shifted_search;
  else if (a.repair != "none")
    fail(ErrorCode::invalid_input, "repair is none or shifted");
  o.fatal_holonomy = false;
  PipelineReport r = ahlfors(load_complex(a.complex), o);
  return report_exit(g, r, max_displacement(r.holonomy, {"image_generator"}), !a.nonfatal);
}

int cmd_weierstrass(const Globals& g, const PipelineArgs& a) {
  WeierstrassOptions o;
  o.solver = solver_options(g);
  o.fatal_holonomy = false;
  if (!a.orbit.empty()) {
    auto ids = parse_ids(a.orbit);
    if (ids.size() != 4) fail(ErrorCode::invalid_input, "orbit needs four vertices");
    std::copy(ids.begin(), ids.end(), o.orbit.begin());
  }
  PipelineReport r = weierstrass(load_complex(a.complex), o);
  return report_exit(g, r, max_displacement(r.holonomy, {"row", "column"}), !a.nonfatal);
}

int exit_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::non_convergence: return 3;
    case ErrorCode::holonomy_nontrivial: return 4;
    default: return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Circle packing workbench"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--tol", g.tol, "solver tolerance")->check(CLI::PositiveNumber);
  app.add_option("--max-iters", g.max_iters, "solver sweep limit")->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "seed recorded with sampled runs");
  app.add_option("--out-dir", g.out_dir, "directory for written artifacts");
  app.add_flag("--json", g.json_out, "print JSON on stdout");

  std::string cpath, opath, lpath, spath, ppath, name, kind, loop = "generator";
  std::string max_prefix = "maxpack", branch_prefix = "branched";
  int rings = 3, rows = 5, cols = 12, n = 8, m = 8;
  bool edges = false;
  PipelineArgs pa;

  auto* validate = app.add_subcommand("validate", "check a complex and its loop conditions");
  validate->add_option("--complex", cpath)->required();
  validate->add_option("--overlaps", opath);

  auto* gen = app.add_subcommand("gen", "generate an example complex");
  gen->add_option("--kind", kind)->required()->check(CLI::IsMember({"disc", "annulus", "torus"}));
  gen->add_option("--rings", rings);
  gen->add_option("--rows", rows);
  gen->add_option("--cols", cols);
  gen->add_option("--n", n);
  gen->add_option("--m", m);
  gen->add_option("--output", name, "file name inside --out-dir");

  auto* maxpack = app.add_subcommand("maxpack", "maximal packing of a complex");
  maxpack->add_option("--complex", cpath)->required();
  maxpack->add_option("--prefix", max_prefix);

  auto* branchpack = app.add_subcommand("branchpack", "branched packing with horocycle boundary");
  branchpack->add_option("--complex", cpath)->required();
  branchpack->add_option("--specs", spath)->required();
  branchpack->add_option("--prefix", branch_prefix);

  auto* bl = app.add_subcommand("blaschke", "discrete finite Blaschke product on a disc complex");
  bl->add_option("--complex", pa.complex)->required();
  bl->add_option("--mode", pa.mode)->check(CLI::IsMember({"traditional", "singular", "shifted"}));
  bl->add_option("--v1", pa.v1);
  bl->add_option("--v2", pa.v2);
  bl->add_option("--p1", pa.p1, "x,y in the normalized domain");
  bl->add_option("--p2", pa.p2);

  auto* ah = app.add_subcommand("ahlfors", "discrete Ahlfors function on an annulus complex");
  ah->add_option("--complex", pa.complex)->required();
  ah->add_option("--v1", pa.v1)->required();
  ah->add_option("--v2", pa.v2)->required();
  ah->add_option("--repair", pa.repair)->check(CLI::IsMember({"none", "shifted"}));
  ah->add_option("--j1", pa.j1);
  ah->add_option("--j2", pa.j2);
  ah->add_flag("--nonfatal", pa.nonfatal, "exit 0 even when the holonomy is not trivial");

  auto* we = app.add_subcommand("weierstrass", "discrete Weierstrass function on a torus complex");
  we->add_option("--complex", pa.complex)->required();
  we->add_option("--orbit", pa.orbit, "four comma separated vertices");
  we->add_flag("--nonfatal", pa.nonfatal);

  auto* ho = app.add_subcommand("holonomy", "holonomy of a loop for a label");
  ho->add_option("--complex", cpath)->required();
  ho->add_option("--label", lpath)->required();
  ho->add_option("--overlaps", opath);
  ho->add_option("--loop", loop, "'generator' or comma separated closed vertex path");

  auto* re = app.add_subcommand("render", "SVG of a packing or sphere packing");
  re->add_option("--packing", ppath)->required();
  re->add_option("--complex", cpath);
  re->add_flag("--edges", edges);
  re->add_option("--output", name);

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) cmd_validate(g, cpath, opath);
    if (gen->parsed()) cmd_gen(g, kind, rings, rows, cols, n, m, name);
    if (maxpack->parsed()) cmd_maxpack(g, cpath, max_prefix);
    if (branchpack->parsed()) cmd_branchpack(g, cpath, spath, branch_prefix);
    if (bl->parsed()) return cmd_blaschke(g, pa);
    if (ah->parsed()) return cmd_ahlfors(g, pa);
    if (we->parsed()) return cmd_weierstrass(g, pa);
    if (ho->parsed()) cmd_holonomy(g, cpath, lpath, opath, loop);
    if (re->parsed()) cmd_render(g, ppath, cpath, edges, name);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
