#pragma once

#include <algorithm>
#include <array>
#include <cstdio>
#include <map>
#include <cmath>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "cpack/branching.hpp"
#include "cpack/generators.hpp"
#include "cpack/layout.hpp"
#include "cpack/solver.hpp"
#include "cpack/sphere.hpp"

namespace cpack {

enum class ComplexKind { disc, annulus, torus };

inline ComplexKind complex_kind_from(const std::string& s) {
  if (s == "disc") return ComplexKind::disc;
  if (s == "annulus") return ComplexKind::annulus;
  if (s == "torus") return ComplexKind::torus;
  fail(ErrorCode::invalid_input, "unknown complex kind '" + s + "'");
}

/// disc(a = rings), annulus(a = rows, b = cols), torus(a = n, b = m).
inline Complex gen_complex(ComplexKind kind, int a, int b = 0) {
  switch (kind) {
    case ComplexKind::disc:
      if (a < 1) fail(ErrorCode::too_small, "disc needs at least one ring");
      return hex_disc(a);
    case ComplexKind::annulus:
      if (a < 3 || b < 3) fail(ErrorCode::too_small, "annulus needs at least 3 rows and 3 columns");
      return hex_annulus(a, b);
    case ComplexKind::torus:
      if (a < 5 || b < 5) fail(ErrorCode::too_small, "torus needs at least a 5 x 5 lattice");
      return hex_torus(a, b);
  }
  fail(ErrorCode::invalid_input, "unknown complex kind");
}

// ---------------------------------------------------------------------------
// Combinatorial helpers shared by the pipelines

/// Interior vertex farthest (in edge steps) from the boundary; lowest id on ties.
inline VertexId deepest_vertex(const Complex& k) {
  std::vector<int> dist(k.vertex_count() + 1, -1);
  std::queue<VertexId> q;
  for (VertexId v : k.boundary_vertices()) {
    dist[v] = 0;
    q.push(v);
  }
  while (!q.empty()) {
    VertexId v = q.front();
    q.pop();
    for (VertexId w : k.flower(v).petals)
      if (dist[w] < 0) {
        dist[w] = dist[v] + 1;
        q.push(w);
      }
  }
  VertexId best = 0;
  for (VertexId v = 1; v <= k.vertex_count(); ++v)
    if (best == 0 || dist[v] > dist[best]) best = v;
  return best;
}

/// Cycle of vertices one step inside boundary component `comp`, oriented
/// like that component.
inline std::vector<VertexId> ring_inside(const Complex& k, int comp) {
  auto cycles = k.boundary_cycles();
  if (comp < 0 || comp >= static_cast<int>(cycles.size())) fail(ErrorCode::invalid_input, "no such boundary component");
  const auto& b = cycles[comp];
  std::set<VertexId> bset(b.begin(), b.end()), ring;
  for (VertexId v : b)
    for (VertexId w : k.flower(v).petals)
      if (!bset.count(w) && k.is_interior(w)) ring.insert(w);
  if (ring.empty()) fail(ErrorCode::loop_not_separating, "no interior ring next to the boundary");
  // First boundary position touching each ring vertex fixes the direction.
  std::map<VertexId, int> contact;
  for (std::size_t i = 0; i < b.size(); ++i)
    for (VertexId w : k.flower(b[i]).petals)
      if (ring.count(w) && !contact.count(w)) contact[w] = static_cast<int>(i);
  auto ring_nbrs = [&](VertexId v) {
    std::vector<VertexId> out;
    for (VertexId w : k.flower(v).petals)
      if (ring.count(w)) out.push_back(w);
    return out;
  };
  VertexId start = *ring.begin();
  for (VertexId v : ring)
    if (contact[v] < contact[start]) start = v;
  std::vector<VertexId> order{start};
  auto first = ring_nbrs(start);
  if (first.size() != 2) fail(ErrorCode::loop_not_separating, "vertices next to the boundary do not form a simple cycle");
  VertexId prev = start, cur = contact[first[0]] <= contact[first[1]] ? first[0] : first[1];
  while (cur != start) {
    auto nb = ring_nbrs(cur);
    if (nb.size() != 2 || order.size() > ring.size())
      fail(ErrorCode::loop_not_separating, "vertices next to the boundary do not form a simple cycle");
    order.push_back(cur);
    VertexId next = nb[0] == prev ? nb[1] : nb[0];
    prev = cur;
    cur = next;
  }
  if (order.size() != ring.size()) fail(ErrorCode::loop_not_separating, "vertices next to the boundary do not form a simple cycle");
  return order;
}

/// Shortest edge path from boundary component `from` to component `to`
/// avoiding the listed vertices.
inline std::vector<VertexId> cross_cut(const Complex& k, int from, int to, const std::set<VertexId>& avoid = {}) {
  auto cycles = k.boundary_cycles();
  std::vector<VertexId> prev(k.vertex_count() + 1, 0);
  std::vector<bool> seen(k.vertex_count() + 1, false);
  std::set<VertexId> target(cycles.at(to).begin(), cycles.at(to).end());
  std::queue<VertexId> q;
  for (VertexId v : cycles.at(from)) {
    seen[v] = true;
    q.push(v);
  }
  while (!q.empty()) {
    VertexId v = q.front();
    q.pop();
    if (target.count(v)) {
      std::vector<VertexId> path{v};
      while (prev[path.back()]) path.push_back(prev[path.back()]);
      std::reverse(path.begin(), path.end());
      return path;
    }
    for (VertexId w : k.flower(v).petals) {
      if (seen[w] || avoid.count(w)) continue;
      // Stay off the starting boundary after leaving it.
      if (k.is_boundary(w) && !target.count(w)) continue;
      seen[w] = true;
      prev[w] = v;
      q.push(w);
    }
  }
  fail(ErrorCode::disconnected, "no cross-cut between the two boundary components");
}

/// Distance in the disc between each cross-cut circle and its image under
/// the holonomy of `loop`, measured in the frame where the loop starts.
inline double crosscut_mismatch(const Complex& k, const Label& r, const OverlapMap& phi, const std::vector<VertexId>& loop,
                                const std::vector<VertexId>& cut) {
  auto chain = left_face_chain(k, loop);
  Holonomy h = holonomy(k, r, phi, chain, loop[0]);
  Packing p = develop(k, r, phi, chain[0]);
  double worst = 0.0;
  for (VertexId v : cut) {
    const Circle& c = p[v];
    Circle img = detail::apply_map(h.map, c, r.geometry);
    worst = std::max(worst, std::abs(img.ecenter - c.ecenter) + std::abs(img.eradius - c.eradius));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Reports

struct PipelineReport {
  std::string kind;
  Complex domain_complex;
  Label domain_label;
  Packing domain;
  Complex image_complex;
  Label image_label;
  OverlapMap image_phi;
  Packing image;
  std::vector<SphereCircle> image_sphere;  // spherical image, indexed like domain_complex
  std::string normalization;
  std::vector<int> windings;
  std::vector<VertexId> branch_vertices;
  std::vector<cplx> branch_points;
  std::vector<cplx> branch_values;
  std::vector<BlackHoleRecord> holes;
  nlohmann::json holonomy = nlohmann::json::object();
  nlohmann::json checks = nlohmann::json::object();
  nlohmann::json diagnostics = nlohmann::json::object();
  double domain_residual = 0.0;
  double image_residual = 0.0;
};

/// Loop-condition results for the report.
inline nlohmann::json condition_summary(const Complex& k, const OverlapMap& phi, const TargetAngles& a, const PinnedZeros& pins) {
  auto ss = check_star_star(k, phi);
  int strict = 0, equality = 0, violated = 0;
  for (const StarCheck& c : check_star_all(k, phi, a, pins)) {
    if (c.result == StarResult::strict) ++strict;
    if (c.result == StarResult::equality) ++equality;
    if (c.result == StarResult::violated) ++violated;
  }
  return {{"star_star", ss.pass}, {"star_strict", strict}, {"star_equality", equality}, {"star_violated", violated}};
}

inline nlohmann::json holonomy_json(const Holonomy& h) {
  Mobius m = h.map.normalized();
  auto c = [](cplx z) { return nlohmann::json::array({z.real(), z.imag()}); };
  return {{"matrix", {c(m.a), c(m.b), c(m.c), c(m.d)}},
          {"class", to_string(m.classify())},
          {"displacement", h.displacement},
          {"translation_length", translation_length(m)}};
}

// ---------------------------------------------------------------------------
// Blaschke

struct BlaschkeOptions {
  BranchKind mode = BranchKind::traditional;
  VertexId v1 = 0, v2 = 0;        // traditional
  cplx p1{0.0}, p2{0.0};          // generalized modes, in normalized domain coordinates
  VertexId alpha = 0, gamma = 0;  // normalization; 0 picks defaults
  SolverOptions solver;
};

/// Branch spec for a point of the normalized domain packing.
inline BranchSpec spec_at_point(const Complex& k, const Packing& dom, BranchKind mode, cplx p) {
  if (mode == BranchKind::singular) {
    for (const Face& f : k.faces())
      if (inside_interstice(dom, f, p)) {
        auto g = singular_params(dom, f, p);
        return BranchSpec::singular(f, g[0], g[1]);
      }
    fail(ErrorCode::point_outside_interstice, "point lies in no interstice");
  }
  for (VertexId v : k.interior_vertices())
    if (std::abs(p - dom[v].ecenter) < dom[v].eradius) {
      ShiftedParams sp = shifted_params(dom, k, v, p);
      return BranchSpec::shifted(v, sp.j1, sp.j2, sp.gamma1, sp.gamma2);
    }
  fail(ErrorCode::point_outside_circle, "point lies in no interior circle");
}

inline PipelineReport blaschke(const Complex& k, const BlaschkeOptions& o = {}) {
  if (k.surface_type() != SurfaceType::disc) fail(ErrorCode::invalid_input, "blaschke needs a disc complex");
  PipelineReport rep;
  rep.kind = "blaschke";
  rep.domain_complex = k;
  const VertexId alpha = o.alpha ? o.alpha : deepest_vertex(k);
  const VertexId gamma = o.gamma ? o.gamma : k.boundary_cycles()[0][0];
  auto dom = max_label(k, o.solver);
  rep.domain_label = dom.label;
  rep.domain_residual = dom.residual;
  rep.domain = normalize_disc(develop(k, dom.label, {}), alpha, gamma);

  std::vector<BranchSpec> specs;
  if (o.mode == BranchKind::traditional) {
    for (VertexId v : {o.v1, o.v2}) {
      specs.push_back(traditional_spec(k, v));
      rep.branch_vertices.push_back(v);
    }
  } else {
    for (cplx p : {o.p1, o.p2}) {
      specs.push_back(spec_at_point(k, rep.domain, o.mode, p));
      rep.branch_points.push_back(p);
    }
  }
  BranchedBuild b = assemble_branched(k, specs);
  rep.checks = condition_summary(b.complex, b.phi, b.targets, b.pins);
  b = build_branched(k, specs, BoundaryCondition::horocycles(k), Geometry::hyperbolic, o.solver);
  rep.image_complex = b.complex;
  rep.image_label = b.label;
  rep.image_phi = b.phi;
  rep.image_residual = b.residual;
  rep.holes = b.holes;
  rep.image = normalize_disc(b.packing, alpha, gamma);
  rep.normalization = "disc: alpha=" + std::to_string(alpha) + " at 0, gamma=" + std::to_string(gamma) + " at i";
  rep.windings.push_back(boundary_winding(rep.image, b.complex.boundary_cycles()[0]));
  for (const auto& rec : b.holes) {
    rep.branch_values.push_back(rep.image[rec.fall_guy].ecenter);
    rep.branch_vertices.push_back(rec.fall_guy);
  }

  nlohmann::json angles = nlohmann::json::object();
  for (VertexId v : b.branch_vertices) angles[std::to_string(v)] = angle_sum(b.complex, b.label, b.phi, v);
  // Discrete Schwarz-Pick: hyperbolic radii never grow under the branched map.
  bool schwarz = true;
  double worst = -infinity;
  for (VertexId v : k.interior_vertices()) {
    if (b.complex.is_hole_interior(v)) continue;
    worst = std::max(worst, b.label[v] - dom.label[v]);
    if (b.label[v] > dom.label[v]) schwarz = false;
  }
  nlohmann::json ratios = nlohmann::json::object();
  for (VertexId v : b.branch_vertices) ratios[std::to_string(v)] = b.label[v] / dom.label[v];
  rep.diagnostics = {{"angle_sums", angles},
                     {"schwarz_holds", schwarz},
                     {"schwarz_max_growth", worst},
                     {"central_radius_domain", dom.label[alpha]},
                     {"central_radius_image", b.label[alpha]},
                     {"branch_radius_ratio", ratios},
                     {"fall_guy_radius", b.fall_guy_radius},
                     {"fall_guy_incidence", b.fall_guy_incidence},
                     {"horizon_windings", b.horizon_windings},
                     {"layout_error", layout_error(b.complex, b.packing, b.phi)}};
  return rep;
}

// ---------------------------------------------------------------------------
// Ahlfors

enum class Repair { none, shifted_search };

struct AhlforsOptions {
  VertexId v1 = 0, v2 = 0;
  Repair repair = Repair::none;
  VertexId j1 = 0, j2 = 0;  // shifted family jumps at v2; 0 picks the mirror-symmetric pair
  bool fatal_holonomy = true;
  double tol_h = tol::holonomy;
  SolverOptions solver;
};

/// Jump pair at v for the repair family: j1 and the petal before j2 are
/// mirror images under the midline reflection stored with the complex.
inline std::pair<VertexId, VertexId> symmetric_jumps(const Complex& k, VertexId v) {
  const auto& meta = k.meta();
  if (meta.value("generator", "") != "annulus" || meta.value("rows", 0) % 2 == 0)
    fail(ErrorCode::invalid_input, "symmetric jumps need an annulus with an odd row count; pass j1 and j2");
  auto refl = annulus_reflection(meta["rows"], meta["cols"]);
  const auto& p = k.flower(v).petals;
  const int m = static_cast<int>(p.size());
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      int gap = ((b - a) % m + m) % m;
      if (gap < 2 || gap > m - 2) continue;
      if (refl[p[a]] == p[(b + m - 1) % m] && refl[p[(b + m - 1) % m]] == p[a]) return {p[a], p[b]};
    }
  fail(ErrorCode::invalid_input, "no mirror-symmetric jump pair at vertex " + std::to_string(v));
}

inline PipelineReport ahlfors(const Complex& k, const AhlforsOptions& o) {
  if (k.surface_type() != SurfaceType::annulus) fail(ErrorCode::invalid_input, "ahlfors needs an annulus complex");
  for (VertexId v : {o.v1, o.v2}) {
    k.require_vertex(v);
    if (k.is_boundary(v)) fail(ErrorCode::boundary_vertex, "branch vertices must be interior");
  }
  PipelineReport rep;
  rep.kind = "ahlfors";
  rep.domain_complex = k;
  const auto loop = ring_inside(k, 0);
  for (VertexId v : loop)
    if (v == o.v1 || v == o.v2) fail(ErrorCode::invalid_input, "branch vertices must not lie next to the boundary");

  // Domain: maximal packing lifted to the disc, with its deck transformation.
  auto dom = max_label(k, o.solver);
  rep.domain_label = dom.label;
  rep.domain_residual = dom.residual;
  rep.domain = develop(k, dom.label, {});
  Holonomy deck = holonomy(k, dom.label, {}, left_face_chain(k, loop), loop[0]);
  const double ell = translation_length(deck.map);
  rep.holonomy["domain_generator"] = holonomy_json(deck);
  rep.diagnostics["domain_modulus"] = std::exp(-pi * pi / ell);

  const auto bc = BoundaryCondition::horocycles(k);
  std::vector<BranchSpec> fixed{traditional_spec(k, o.v1)};
  BranchedBuild b;
  if (o.repair == Repair::none) {
    auto specs = fixed;
    specs.push_back(traditional_spec(k, o.v2));
    BranchedBuild pre = assemble_branched(k, specs);
    rep.checks = condition_summary(pre.complex, pre.phi, pre.targets, pre.pins);
    b = build_branched(k, specs, bc, Geometry::hyperbolic, o.solver);
  } else {
    auto [j1, j2] = o.j1 && o.j2 ? std::pair{o.j1, o.j2} : symmetric_jumps(k, o.v2);
    ShiftedFamily fam{o.v2, j1, j2};
    BranchedBuild pre = assemble_branched(k, {fixed[0], fam.at(pi / 2)});
    rep.checks = condition_summary(pre.complex, pre.phi, pre.targets, pre.pins);
    Annihilation an = annihilate_holonomy(k, fixed, fam, loop, bc, o.tol_h, o.solver);
    b = std::move(an.build);
    nlohmann::json scan = nlohmann::json::array();
    for (auto [g, h] : an.scan) scan.push_back({g, std::isnan(h) ? nlohmann::json(nullptr) : nlohmann::json(h)});
    rep.diagnostics["repair"] = {{"j1", j1}, {"j2", j2}, {"gamma1", an.gamma1}, {"gamma2", pi - an.gamma1},
                                 {"scan", scan}, {"refinements", an.refinements}};
  }
  rep.image_complex = b.complex;
  rep.image_label = b.label;
  rep.image_phi = b.phi;
  rep.image_residual = b.residual;
  rep.holes = b.holes;
  rep.branch_vertices = {o.v1, o.v2};

  Holonomy h;
  double signed_h = signed_holonomy(b.complex, b.label, b.phi, loop, &h);
  rep.holonomy["image_generator"] = holonomy_json(h);
  rep.holonomy["signed"] = signed_h;
  std::set<VertexId> avoid{o.v1, o.v2};
  for (const auto& rec : b.holes)
    for (VertexId v : rec.interior_vertices()) avoid.insert(v);
  auto cut = cross_cut(b.complex, 0, 1, avoid);
  rep.diagnostics["cross_cut"] = cut;
  rep.diagnostics["cross_cut_mismatch"] = crosscut_mismatch(b.complex, b.label, b.phi, loop, cut);
  if (h.displacement >= o.tol_h && o.fatal_holonomy)
    fail(ErrorCode::holonomy_nontrivial, "generator holonomy displacement " + detail::sci(h.displacement));

  rep.image = normalize_imaginary_axis(b.packing, o.v1, o.v2);
  rep.normalization = "imaginary axis: v1=" + std::to_string(o.v1) + " above 0, v2=" + std::to_string(o.v2) + " below";
  for (const auto& cyc : b.complex.boundary_cycles()) rep.windings.push_back(boundary_winding(rep.image, cyc));
  rep.diagnostics["layout_error"] = layout_error(b.complex, b.packing, b.phi);
  return rep;
}

// ---------------------------------------------------------------------------
// Weierstrass

struct WeierstrassOptions {
  std::array<VertexId, 4> orbit{};  // zeros pick the half-period orbit of vertex (0, 0)
  bool fatal_holonomy = true;
  SolverOptions solver;
};

struct TorusShape {
  int n = 0, m = 0;
};

inline TorusShape torus_shape(const Complex& k) {
  const auto& meta = k.meta();
  if (meta.value("generator", "") != "torus") fail(ErrorCode::invalid_input, "complex was not produced by the torus generator");
  return {meta["n"], meta["m"]};
}

/// (0,0) and its images under the three half-period translations.
inline std::array<VertexId, 4> half_period_orbit(const Complex& k) {
  auto [n, m] = torus_shape(k);
  if (n % 2 || m % 4) fail(ErrorCode::invalid_input, "half periods need n even and m divisible by 4");
  return {torus_id(n, m, 0, 0), torus_id(n, m, n / 2, 0), torus_id(n, m, -m / 4, m / 2),
          torus_id(n, m, n / 2 - m / 4, m / 2)};
}

/// A row loop and a column loop of the torus missing every vertex in `avoid`.
inline std::pair<std::vector<VertexId>, std::vector<VertexId>> torus_generators(const Complex& k,
                                                                               const std::set<VertexId>& avoid) {
  auto [n, m] = torus_shape(k);
  auto clear = [&](const std::vector<VertexId>& path) {
    return std::none_of(path.begin(), path.end(), [&](VertexId v) { return avoid.count(v) > 0; });
  };
  std::optional<std::vector<VertexId>> row, col;
  for (int j = 0; j < m && !row; ++j)
    if (auto p = torus_row(n, m, j); clear(p)) row = p;
  for (int i = 0; i < n && !col; ++i)
    if (auto p = torus_column(n, m, i); clear(p)) col = p;
  if (!row || !col) fail(ErrorCode::invalid_input, "no generator loop avoids the branch sites");
  return {*row, *col};
}

inline PipelineReport weierstrass(const Complex& k, const WeierstrassOptions& o = {}) {
  if (k.surface_type() != SurfaceType::torus) fail(ErrorCode::invalid_input, "weierstrass needs a torus complex");
  auto orbit = o.orbit[0] ? o.orbit : half_period_orbit(k);
  for (VertexId v : orbit) k.require_vertex(v);
  PipelineReport rep;
  rep.kind = "weierstrass";
  rep.domain_complex = k;
  rep.branch_vertices.assign(orbit.begin(), orbit.end());

  auto dom = max_label(k, o.solver);
  rep.domain_label = dom.label;
  rep.domain_residual = dom.residual;
  rep.domain = develop(k, dom.label, {});

  // Puncture at the fourth orbit vertex; its link becomes a horocycle chain.
  const VertexId pole = orbit[3];
  std::set<VertexId> avoid(orbit.begin(), orbit.end());
  for (VertexId w : k.flower(pole).petals) avoid.insert(w);
  auto [row, col] = torus_generators(k, avoid);
  auto pr = puncture_with_map(k, pole);
  const Complex& kp = pr.complex;
  auto to_new = [&](VertexId v) { return pr.old_to_new[v]; };
  TargetAngles a = uniform_targets(kp);
  for (int i = 0; i < 3; ++i) a[to_new(orbit[i])] = 2.0 * two_pi;
  const auto bc = BoundaryCondition::horocycles(kp);
  rep.checks = condition_summary(kp, {}, a, {});
  auto img = solve_label(kp, {}, a, bc, {}, Geometry::hyperbolic, o.solver);
  rep.image_complex = kp;
  rep.image_label = img.label;
  rep.image_residual = img.residual;

  double worst_h = 0.0;
  for (auto [name, path] : {std::pair{"row", row}, std::pair{"column", col}}) {
    std::vector<VertexId> np;
    for (VertexId v : path) np.push_back(to_new(v));
    Holonomy h = holonomy(kp, img.label, {}, left_face_chain(kp, np), np[0]);
    rep.holonomy[name] = holonomy_json(h);
    rep.holonomy[name]["loop"] = path;
    worst_h = std::max(worst_h, h.displacement);
  }
  if (worst_h >= tol::holonomy) {
    std::fprintf(stderr, "weierstrass: generator holonomy %.3e is not trivial although the branch sites form a symmetry orbit\n", worst_h);
    if (o.fatal_holonomy) fail(ErrorCode::holonomy_nontrivial, "generator holonomy displacement " + detail::sci(worst_h));
  }

  rep.image = develop(kp, img.label, {});
  const int wind = boundary_winding(rep.image, kp.boundary_cycles()[0]);
  rep.windings.push_back(wind);
  if (wind != 2) fail(ErrorCode::winding_mismatch, "punctured boundary winds " + std::to_string(wind) + " times, expected 2");

  // Sphere: the disc is the southern hemisphere, the pole vertex takes the northern one.
  auto caps = stereographic_project(rep.image);
  const SphereCircle cap_pole{{0.0, 0.0, 1.0}, pi / 2};
  double tangency = 0.0;
  for (VertexId w : k.flower(pole).petals) {
    const SphereCircle& c = caps[to_new(w)];
    tangency = std::max(tangency, std::abs(spherical_distance(c.center, cap_pole.center) - c.radius - cap_pole.radius));
  }
  auto an = antipodal_normalization({caps[to_new(orbit[0])], caps[to_new(orbit[1])], caps[to_new(orbit[2])], cap_pole});
  rep.image_sphere.assign(k.vertex_count() + 1, SphereCircle{});
  for (VertexId v = 1; v <= k.vertex_count(); ++v)
    rep.image_sphere[v] = an.boost(v == pole ? cap_pole : caps[to_new(v)]);
  rep.normalization = "sphere: boost making the branch caps two antipodal pairs";

  nlohmann::json pairs = nlohmann::json::array(), centers = nlohmann::json::array();
  for (auto [x, y] : an.pairs) pairs.push_back({orbit[x], orbit[y]});
  for (VertexId v : orbit) {
    const auto& c = rep.image_sphere[v];
    centers.push_back({c.center[0], c.center[1], c.center[2], c.radius});
  }
  nlohmann::json angles = nlohmann::json::object();
  for (int i = 0; i < 3; ++i) angles[std::to_string(orbit[i])] = angle_sum(kp, img.label, {}, to_new(orbit[i]));
  rep.diagnostics = {{"pole_tangency_residual", tangency},
                     {"antipodal_residual", an.residual},
                     {"antipodal_pairs", pairs},
                     {"branch_caps", centers},
                     {"angle_sums", angles},
                     {"layout_error", layout_error(kp, rep.image, {})},
                     {"puncture_map", pr.old_to_new}};
  return rep;
}

}  // namespace cpack
