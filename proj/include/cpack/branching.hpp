#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <boost/math/tools/toms748_solve.hpp>

#include "cpack/complex.hpp"
#include "cpack/geometry.hpp"
#include "cpack/layout.hpp"
#include "cpack/solver.hpp"

namespace cpack {

enum class BranchKind { traditional, singular, shifted };

inline std::string to_string(BranchKind k) {
  switch (k) {
    case BranchKind::traditional: return "traditional";
    case BranchKind::singular: return "singular";
    case BranchKind::shifted: return "shifted";
  }
  return "traditional";
}

struct BranchSpec {
  BranchKind kind = BranchKind::traditional;
  VertexId v = 0;  // traditional and shifted
  int order = 1;   // traditional
  Face face{};     // singular
  std::array<double, 3> gamma{};  // singular uses all three, shifted the first two
  VertexId j1 = 0, j2 = 0;         // shifted

  static BranchSpec traditional(VertexId v, int order = 1) {
    BranchSpec s;
    s.kind = BranchKind::traditional;
    s.v = v;
    s.order = order;
    return s;
  }
  static BranchSpec singular(Face f, double g1, double g2) {
    if (!(g1 > 0.0) || !(g2 > 0.0) || !(g1 + g2 < pi)) fail(ErrorCode::invalid_input, "singular dials must be positive and sum below pi");
    BranchSpec s;
    s.kind = BranchKind::singular;
    s.face = f;
    s.gamma = {g1, g2, pi - g1 - g2};
    return s;
  }
  static BranchSpec shifted(VertexId v, VertexId j1, VertexId j2, double g1, double g2) {
    if (g1 < 0.0 || g1 > pi || g2 < 0.0 || g2 > pi) fail(ErrorCode::invalid_input, "shifted dials must lie in [0, pi]");
    BranchSpec s;
    s.kind = BranchKind::shifted;
    s.v = v;
    s.j1 = j1;
    s.j2 = j2;
    s.gamma = {g1, g2, 0.0};
    return s;
  }
};

/// Order-n branching at v, validated against the flower loop.
inline BranchSpec traditional_spec(const Complex& k, VertexId v, int order = 1, const OverlapMap& phi = {}) {
  k.require_vertex(v);
  if (k.is_boundary(v)) fail(ErrorCode::boundary_vertex, "branch vertex must be interior");
  if (order < 1) fail(ErrorCode::invalid_input, "branch order must be at least 1");
  TargetAngles a = uniform_targets(k);
  a[v] = two_pi * (order + 1);
  if (check_star(k, phi, a, {v}, k.flower(v).petals) != StarResult::strict)
    fail(ErrorCode::star_violation, "flower of vertex " + std::to_string(v) + " too small for this order");
  return BranchSpec::traditional(v, order);
}

// ---------------------------------------------------------------------------
// Singular parameters

struct Interstice {
  std::array<cplx, 3> tangency;  // t12, t23, t31
  Circle orthogonal;             // circle through the tangency points
};

inline Interstice interstice(const Packing& pk, const Face& f) {
  Interstice in;
  for (int i = 0; i < 3; ++i) in.tangency[i] = tangency_point(pk[f[i]], pk[f[(i + 1) % 3]]);
  in.orthogonal = circumcircle(in.tangency[0], in.tangency[1], in.tangency[2]);
  return in;
}

inline bool inside_interstice(const Packing& pk, const Face& f, cplx p) {
  Interstice in = interstice(pk, f);
  if (std::abs(p - in.orthogonal.center) >= in.orthogonal.radius) return false;
  for (VertexId v : f)
    if (std::abs(p - pk[v].ecenter) <= pk[v].eradius) return false;
  return true;
}

/// Dials (gamma1, gamma2, gamma3) for a branch point p in the interstice of face f.
inline std::array<double, 3> singular_params(const Packing& pk, const Face& f, cplx p) {
  if (!inside_interstice(pk, f, p)) fail(ErrorCode::point_outside_interstice, "point is not inside the interstice");
  Interstice in = interstice(pk, f);
  const Circle& d = in.orthogonal;
  Mobius t = Mobius::disc_automorphism((p - d.center) / d.radius);
  std::array<double, 3> arg;
  for (int i = 0; i < 3; ++i) arg[i] = std::arg(t((in.tangency[i] - d.center) / d.radius));
  auto ccw = [](double from, double to) {
    double a = to - from;
    while (a < 0.0) a += two_pi;
    while (a >= two_pi) a -= two_pi;
    return a;
  };
  // Vertex i's arc runs from t_{i-1,i} to t_{i,i+1}, i.e. from tangency[i+2] to tangency[i].
  std::array<double, 3> alpha;
  for (int i = 0; i < 3; ++i) alpha[i] = ccw(arg[(i + 2) % 3], arg[i]);
  double g1 = pi - alpha[0], g2 = pi - alpha[1];
  return {g1, g2, pi - g1 - g2};
}

/// The point of the interstice sent to the origin when its three tangency
/// points go to the cube roots of unity.
inline cplx interstice_center(const Packing& pk, const Face& f) {
  Interstice in = interstice(pk, f);
  const Circle& d = in.orthogonal;
  std::array<cplx, 3> z, w;
  for (int i = 0; i < 3; ++i) {
    z[i] = (in.tangency[i] - d.center) / d.radius;
    w[i] = std::polar(1.0, two_pi * i / 3.0);
  }
  cplx o = Mobius::from_points(z, w).inverse()(0.0);
  return d.center + d.radius * o;
}

// ---------------------------------------------------------------------------
// Shifted parameters

struct ShiftedParams {
  VertexId j1 = 0, j2 = 0;
  double gamma1 = 0.0, gamma2 = 0.0;
  double start = 0.0, end = 0.0;  // continuous petal positions of the arc endpoints
};

/// Jump petal and dial for continuous petal position s (petal k sits at s = k).
inline std::pair<int, double> dial_of_position(double s, int m) {
  if (std::abs(s - std::round(s)) < 1e-9) s = std::round(s);
  double k = std::ceil(s);
  double g = pi * (k - s);
  int idx = ((static_cast<int>(k) % m) + m) % m;
  return {idx, std::clamp(g, 0.0, pi)};
}

/// Jumps and dials for a branch point p inside the circle of v: the arc of
/// the circle cut off by the geodesic (in the circle's own disc model)
/// through p perpendicular to the ray from the center attaches to the second twin.
inline ShiftedParams shifted_params(const Packing& pk, const Complex& k, VertexId v, cplx p) {
  const Circle& c = pk[v];
  cplx q = (p - c.ecenter) / c.eradius;
  double r = std::abs(q);
  if (r >= 1.0) fail(ErrorCode::point_outside_circle, "point is not inside the circle");
  const auto& petals = k.flower(v).petals;
  if (!k.flower(v).closed) fail(ErrorCode::boundary_vertex, "shifted branching needs an interior vertex");
  const int m = static_cast<int>(petals.size());
  std::vector<double> tau(m);
  for (int i = 0; i < m; ++i) tau[i] = std::arg(tangency_point(c, pk[petals[i]]) - c.ecenter);
  for (int i = 1; i < m; ++i)
    while (tau[i] <= tau[i - 1]) tau[i] += two_pi;
  auto position = [&](double theta) {
    while (theta < tau[0]) theta += two_pi;
    while (theta >= tau[0] + two_pi) theta -= two_pi;
    for (int i = 0; i < m; ++i) {
      double a = tau[i], b = i + 1 < m ? tau[i + 1] : tau[0] + two_pi;
      if (theta >= a && theta < b) return i + (theta - a) / (b - a);
    }
    return double(m);
  };
  // Geodesic orthogonal to the diameter at distance r: endpoints at angle +-delta.
  double delta = std::atan2(1.0 - r * r, 2.0 * r);
  double psi = r > 1e-14 ? std::arg(q) : tau[0] + pi / 2.0;
  ShiftedParams out;
  out.start = position(psi - delta);
  out.end = position(psi + delta);
  if (out.end < out.start) out.end += m;
  // Each twin needs more than two petal spans, so the arc width (in petal
  // positions) is squeezed linearly from its value at the center down toward 2.
  double a0 = position(psi + pi / 2.0) - position(psi - pi / 2.0);
  if (a0 <= 0.0) a0 += m;
  const double raw = out.end - out.start, mid = 0.5 * (out.start + out.end);
  const double width = a0 > 2.0 ? 2.0 + raw * (a0 - 2.0) / a0 : raw;
  out.start = mid - 0.5 * width;
  out.end = mid + 0.5 * width;
  auto [i1, g1] = dial_of_position(out.start, m);
  auto [i2, g2] = dial_of_position(out.end, m);
  out.j1 = petals[i1];
  out.j2 = petals[i2];
  out.gamma1 = g1;
  out.gamma2 = g2;
  return out;
}

// ---------------------------------------------------------------------------
// Branched builds

struct BranchedBuild {
  Complex complex;
  OverlapMap phi;
  TargetAngles targets;
  PinnedZeros pins;
  Label label;
  Packing packing;
  double residual = 0.0;
  int iterations = 0;
  std::vector<BlackHoleRecord> holes;
  std::vector<int> horizon_windings;
  double fall_guy_radius = 0.0;     // largest realized fall-guy radius
  double fall_guy_incidence = 0.0;  // largest gap between a fall guy and its neighbours' circles
  std::vector<VertexId> branch_vertices;
};

/// Applies all surgeries and overlap/target assignments without solving.
inline BranchedBuild assemble_branched(const Complex& k, const std::vector<BranchSpec>& specs) {
  BranchedBuild b{k, {}, {}, {}, {}, {}, 0.0, 0, {}, {}, 0.0, 0.0, {}};
  std::vector<std::pair<VertexId, double>> targets;
  for (const BranchSpec& s : specs) {
    switch (s.kind) {
      case BranchKind::traditional: {
        traditional_spec(b.complex, s.v, s.order, b.phi);
        targets.push_back({s.v, two_pi * (s.order + 1)});
        b.branch_vertices.push_back(s.v);
        break;
      }
      case BranchKind::singular: {
        auto [out, rec] = insert_singular_blackhole(b.complex, s.face);
        const auto& h = rec.chaperones;  // h1, h2, h3 sit across from v1, v2, v3
        const auto& v = rec.originals;
        b.phi.set(v[0], h[1], s.gamma[0]);
        b.phi.set(v[0], h[2], s.gamma[0]);
        b.phi.set(v[1], h[0], s.gamma[1]);
        b.phi.set(v[1], h[2], s.gamma[1]);
        b.phi.set(v[2], h[0], s.gamma[2]);
        b.phi.set(v[2], h[1], s.gamma[2]);
        b.complex = std::move(out);
        b.pins.insert(rec.fall_guy);
        targets.push_back({rec.fall_guy, 2.0 * two_pi});
        b.holes.push_back(rec);
        break;
      }
      case BranchKind::shifted: {
        auto [out, rec] = insert_shifted_blackhole(b.complex, s.v, s.j1, s.j2);
        const VertexId h[2] = {rec.chaperones[0], rec.chaperones[1]};
        const VertexId w[2] = {rec.pre_jumps->first, rec.pre_jumps->second};
        const VertexId j[2] = {s.j1, s.j2};
        struct Ov {
          VertexId a, b;
          double phi;
        };
        std::vector<Ov> ov;
        std::vector<std::pair<VertexId, VertexId>> merges;
        for (int i = 0; i < 2; ++i) {
          // A dial at an end of its range makes the chaperone coincide with a petal.
          if (s.gamma[i] == 0.0) {
            merges.push_back({h[i], j[i]});
          } else if (s.gamma[i] == pi) {
            merges.push_back({h[i], w[i]});
          } else {
            ov.push_back({h[i], w[i], s.gamma[i]});
            ov.push_back({h[i], j[i], pi - s.gamma[i]});
          }
        }
        std::sort(merges.begin(), merges.end(), [](auto& x, auto& y) { return x.first > y.first; });
        for (auto [from, into] : merges) {
          auto m = merge_vertex(out, from, into);
          auto f = [&](VertexId x) { return m.old_to_new[x]; };
          rec.chaperones.erase(std::remove(rec.chaperones.begin(), rec.chaperones.end(), from), rec.chaperones.end());
          for (VertexId& x : rec.chaperones) x = f(x);
          rec.fall_guy = f(rec.fall_guy);
          rec.twins = std::pair{f(rec.twins->first), f(rec.twins->second)};
          for (Ov& o : ov) o = {f(o.a), f(o.b), o.phi};
          out = std::move(m.complex);
        }
        out.set_holes(b.complex.holes());
        out = out.with_hole(rec);
        for (const Ov& o : ov) b.phi.set(o.a, o.b, o.phi);
        b.complex = std::move(out);
        b.pins.insert(rec.fall_guy);
        targets.push_back({rec.fall_guy, 2.0 * two_pi});
        b.holes.push_back(rec);
        break;
      }
    }
  }
  b.targets = uniform_targets(b.complex);
  for (auto [v, a] : targets) b.targets[v] = a;
  return b;
}

inline BoundaryCondition extend_boundary(const BoundaryCondition& bc, const Complex& k) {
  BoundaryCondition out = bc;
  out.radius.resize(k.vertex_count() + 1, 0.0);
  return out;
}

/// Surgery, solve and layout for a list of branch specs.
inline BranchedBuild build_branched(const Complex& k, const std::vector<BranchSpec>& specs, const BoundaryCondition& bc,
                                    Geometry geom, const SolverOptions& opt = {}) {
  BranchedBuild b = assemble_branched(k, specs);
  auto rep = solve_label(b.complex, b.phi, b.targets, extend_boundary(bc, b.complex), b.pins, geom, opt);
  b.label = std::move(rep.label);
  b.residual = rep.residual;
  b.iterations = rep.iterations;
  b.packing = develop(b.complex, b.label, b.phi);
  for (const BlackHoleRecord& rec : b.holes) {
    b.horizon_windings.push_back(event_horizon_winding(b.packing, rec));
    const Circle& g = b.packing[rec.fall_guy];
    b.fall_guy_radius = std::max(b.fall_guy_radius, g.eradius);
    for (VertexId w : b.complex.flower(rec.fall_guy).petals) {
      const Circle& c = b.packing[w];
      b.fall_guy_incidence = std::max(b.fall_guy_incidence, std::abs(std::abs(g.ecenter - c.ecenter) - c.eradius));
    }
  }
  return b;
}

/// Largest overlap error over edges not touching any hole interior vertex.
inline double non_hole_error(const BranchedBuild& b) {
  std::vector<VertexId> skip;
  for (const auto& rec : b.holes)
    for (VertexId v : rec.interior_vertices()) skip.push_back(v);
  return layout_error(b.complex, b.packing, b.phi, skip);
}

// ---------------------------------------------------------------------------
// Holonomy annihilation

/// Holonomy along a closed vertex path, signed by which side of the path's
/// first step the base point is carried to.
inline double signed_holonomy(const Complex& k, const Label& r, const OverlapMap& phi, const std::vector<VertexId>& path,
                              Holonomy* out = nullptr) {
  Holonomy h = holonomy(k, r, phi, left_face_chain(k, path), path[0]);
  int i0 = detail::index_in(h.first_face, path[0]), i1 = detail::index_in(h.first_face, path[1]);
  double sign = 1.0;
  if (i0 >= 0 && i1 >= 0) {
    cplx dir, step;
    if (r.geometry == Geometry::hyperbolic) {
      Mobius t = Mobius::disc_automorphism(h.base);
      dir = t(h.initial[i1].center);
      step = t(h.image);
    } else {
      dir = h.initial[i1].center - h.base;
      step = h.image - h.base;
    }
    // The mismatch slides across the loop, so the sign comes from the side of the path it moves to.
    sign = (step * std::conj(dir)).imag() < 0.0 ? -1.0 : 1.0;
  }
  if (out) *out = h;
  return sign * h.displacement;
}

struct ShiftedFamily {
  VertexId v = 0, j1 = 0, j2 = 0;
  BranchSpec at(double gamma1) const { return BranchSpec::shifted(v, j1, j2, gamma1, pi - gamma1); }
};

struct Annihilation {
  double gamma1 = 0.0;
  double displacement = 0.0;
  BranchedBuild build;
  std::vector<std::pair<double, double>> scan;  // (gamma1, signed holonomy)
  int refinements = 0;
};

/// Finds gamma1 in [0, pi] killing the holonomy along `path` for the family
/// with gamma2 = pi - gamma1, by a 33-sample scan and bracketed refinement.
inline Annihilation annihilate_holonomy(const Complex& k, const std::vector<BranchSpec>& fixed, const ShiftedFamily& family,
                                        const std::vector<VertexId>& path, const BoundaryCondition& bc,
                                        double tol_h = tol::holonomy, const SolverOptions& opt = {}) {
  Annihilation res;
  auto evaluate = [&](double g1, Holonomy* h = nullptr) {
    auto specs = fixed;
    specs.push_back(family.at(g1));
    BranchedBuild b = assemble_branched(k, specs);
    auto rep = solve_label(b.complex, b.phi, b.targets, extend_boundary(bc, b.complex), b.pins, Geometry::hyperbolic, opt);
    return signed_holonomy(b.complex, rep.label, b.phi, path, h);
  };
  constexpr int samples = 33;
  for (int i = 0; i < samples; ++i) {
    double g = pi * i / (samples - 1);
    double h = std::numeric_limits<double>::quiet_NaN();
    try {
      h = evaluate(g);
    } catch (const Error& e) {
      // Family members can degenerate (a twin shrinking to a point), typically at the ends.
      if (e.code() != ErrorCode::star_violation && e.code() != ErrorCode::non_convergence) throw;
    }
    res.scan.push_back({g, h});
  }
  auto best = std::min_element(res.scan.begin(), res.scan.end(), [](auto& a, auto& b) {
    if (std::isnan(a.second)) return false;
    if (std::isnan(b.second)) return true;
    return std::abs(a.second) < std::abs(b.second);
  });
  if (std::isnan(best->second)) fail(ErrorCode::non_convergence, "every member of the family failed to solve");
  double g_star = best->first;
  if (std::isinf(tol_h) || std::abs(best->second) < tol_h) {
    g_star = best->first;
  } else {
    std::optional<std::pair<double, double>> bracket;
    double fa = 0, fb = 0;
    for (int i = 0; i + 1 < samples; ++i)
      if (!std::isnan(res.scan[i].second) && !std::isnan(res.scan[i + 1].second) &&
          (res.scan[i].second < 0.0) != (res.scan[i + 1].second < 0.0)) {
        bracket = std::pair{res.scan[i].first, res.scan[i + 1].first};
        fa = res.scan[i].second;
        fb = res.scan[i + 1].second;
        break;
      }
    if (!bracket) {
      std::string table;
      for (auto [g, s] : res.scan) table += std::to_string(g) + "," + std::to_string(s) + "\n";
      fail(ErrorCode::no_sign_change, "no sign change in holonomy scan:\n" + table);
    }
    auto f = [&](double g) {
      ++res.refinements;
      return evaluate(g);
    };
    auto stop = [&](double a, double b) { return std::abs(b - a) < 1e-15; };
    std::uintmax_t iters = 100;
    auto r = boost::math::tools::toms748_solve(f, bracket->first, bracket->second, fa, fb, stop, iters);
    // Pick whichever end of the final bracket has the smaller holonomy.
    double ea = std::abs(evaluate(r.first)), eb = std::abs(evaluate(r.second));
    g_star = ea <= eb ? r.first : r.second;
  }
  auto specs = fixed;
  specs.push_back(family.at(g_star));
  SolverOptions o2 = opt;
  res.build = build_branched(k, specs, bc, Geometry::hyperbolic, o2);
  Holonomy h;
  signed_holonomy(res.build.complex, res.build.label, res.build.phi, path, &h);
  res.gamma1 = g_star;
  res.displacement = h.displacement;
  if (!std::isinf(tol_h) && res.displacement >= tol_h)
    fail(ErrorCode::non_convergence, "holonomy " + std::to_string(res.displacement) + " above tolerance after refinement");
  return res;
}

}  // namespace cpack
