#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <queue>
#include <vector>

#include "cpack/complex.hpp"
#include "cpack/geometry.hpp"
#include "cpack/solver.hpp"

namespace cpack {

struct Packing {
  Geometry geometry = Geometry::hyperbolic;
  std::vector<Circle> circles;  // 1-based
  int root_face = -1;
  std::vector<int> parent_face;  // -1 for the root and for unreached faces
  std::vector<bool> face_placed;

  const Circle& operator[](VertexId v) const { return circles.at(v); }
  Circle& operator[](VertexId v) { return circles.at(v); }
  int vertex_count() const { return static_cast<int>(circles.size()) - 1; }
};

namespace detail {

// A point of the disc or plane standing in for a circle when fitting maps.
// Horocycles use the point where they meet the geodesic toward `toward`.
inline cplx anchor_point(const Circle& c, cplx toward) {
  if (!c.is_horocycle()) return c.center;
  cplx zeta = c.center;
  auto cayley = [&](cplx z) { return cplx(0, 1) * (zeta + z) / (zeta - z); };
  double height = (1.0 - c.eradius) / c.eradius;
  cplx w(cayley(toward).real(), height);
  return zeta * (w - cplx(0, 1)) / (w + cplx(0, 1));
}

// Disc automorphism carrying the pair (a, b) onto (A, B); the pairs must be
// congruent. At most one circle of each pair is a horocycle unless both are.
inline Mobius fit_pair_hyperbolic(const Circle& a, const Circle& b, const Circle& A, const Circle& B) {
  const Circle *pa = &a, *pb = &b, *PA = &A, *PB = &B;
  if (a.is_horocycle() && !b.is_horocycle()) std::swap(pa, pb), std::swap(PA, PB);
  cplx za, zA, zb, zB;
  if (pa->is_horocycle()) {
    // Both ideal: anchor on horocycle a where it meets the geodesic to b.
    za = anchor_point(*pa, pb->center);
    zA = anchor_point(*PA, PB->center);
    zb = pb->center;
    zB = PB->center;
  } else {
    za = pa->center;
    zA = PA->center;
    zb = pb->is_horocycle() ? pb->center : pb->center;
    zB = PB->center;
  }
  Mobius ta = Mobius::disc_automorphism(za), tA = Mobius::disc_automorphism(zA);
  cplx wb = ta(zb), wB = tA(zB);
  if (std::abs(wb) < 1e-300 || std::abs(wB) < 1e-300) {
    // Coincident anchors (zero distance): translate only.
    return (tA.inverse() * ta).as_disc_automorphism();
  }
  cplx rot = (wB / std::abs(wB)) / (wb / std::abs(wb));
  return (tA.inverse() * Mobius::disc_automorphism(0.0, rot) * ta).as_disc_automorphism();
}

// Rigid motion carrying centers (a, b) onto (A, B).
inline Mobius fit_pair_euclidean(const Circle& a, const Circle& b, const Circle& A, const Circle& B) {
  cplx d = b.center - a.center, D = B.center - A.center;
  cplx lam = std::abs(d) > 0.0 ? (D / std::abs(D)) / (d / std::abs(d)) : cplx(1.0);
  if (std::abs(D) == 0.0) lam = 1.0;
  return {lam, A.center - lam * a.center, 0.0, 1.0};
}

inline Mobius fit_pair(const Circle& a, const Circle& b, const Circle& A, const Circle& B, Geometry g) {
  return g == Geometry::hyperbolic ? fit_pair_hyperbolic(a, b, A, B) : fit_pair_euclidean(a, b, A, B);
}

inline Circle apply_map(const Mobius& m, const Circle& c, Geometry g) {
  return g == Geometry::hyperbolic ? apply_hyperbolic(m, c) : apply_similarity(m, c);
}

inline std::array<Circle, 3> canonical_face(const Face& f, const Label& r, const OverlapMap& phi) {
  return realize_triple({r[f[0]], r[f[1]], r[f[2]]}, {phi(f[0], f[1]), phi(f[1], f[2]), phi(f[2], f[0])}, r.geometry);
}

inline int index_in(const Face& f, VertexId v) {
  for (int i = 0; i < 3; ++i)
    if (f[i] == v) return i;
  return -1;
}

// Places face f given placed circles of its vertices f[i], f[j].
inline std::array<Circle, 3> place_face(const Face& f, int i, int j, const Circle& ci, const Circle& cj,
                                        const Label& r, const OverlapMap& phi) {
  auto canon = canonical_face(f, r, phi);
  Mobius m = fit_pair(canon[i], canon[j], ci, cj, r.geometry);
  std::array<Circle, 3> out;
  for (int k = 0; k < 3; ++k) out[k] = apply_map(m, canon[k], r.geometry);
  out[i] = ci;
  out[j] = cj;
  return out;
}

}  // namespace detail

inline int default_root_face(const Complex& k) {
  for (int f = 0; f < k.face_count(); ++f) {
    const Face& t = k.face(f);
    if (k.is_interior(t[0]) && k.is_interior(t[1]) && k.is_interior(t[2])) return f;
  }
  return 0;
}

/// Lays out circles face by face along a BFS tree of faces.
inline Packing develop(const Complex& k, const Label& r, const OverlapMap& phi, std::optional<int> root = {}) {
  if (r.geometry == Geometry::spherical) fail(ErrorCode::invalid_input, "cannot develop spherical labels");
  Packing p;
  p.geometry = r.geometry;
  p.circles.assign(k.vertex_count() + 1, Circle{});
  p.root_face = root.value_or(default_root_face(k));
  p.parent_face.assign(k.face_count(), -1);
  p.face_placed.assign(k.face_count(), false);
  std::vector<bool> placed(k.vertex_count() + 1, false);

  const Face& f0 = k.face(p.root_face);
  auto c0 = detail::canonical_face(f0, r, phi);
  for (int i = 0; i < 3; ++i) {
    p[f0[i]] = c0[i];
    placed[f0[i]] = true;
  }
  p.face_placed[p.root_face] = true;
  std::queue<int> q;
  q.push(p.root_face);
  while (!q.empty()) {
    int f = q.front();
    q.pop();
    const Face& t = k.face(f);
    auto nb = k.face_neighbors(f);
    for (int e = 0; e < 3; ++e) {
      int g = nb[e];
      if (g < 0 || p.face_placed[g]) continue;
      VertexId u = t[e], w = t[(e + 1) % 3];
      const Face& s = k.face(g);
      int iu = detail::index_in(s, u), iw = detail::index_in(s, w);
      auto placed_face = detail::place_face(s, iu, iw, p[u], p[w], r, phi);
      for (int i = 0; i < 3; ++i)
        if (!placed[s[i]]) {
          p[s[i]] = placed_face[i];
          placed[s[i]] = true;
        }
      p.face_placed[g] = true;
      p.parent_face[g] = f;
      q.push(g);
    }
  }
  for (VertexId v = 1; v <= k.vertex_count(); ++v)
    if (!placed[v]) fail(ErrorCode::invalid_input, "vertex not reached by layout");
  return p;
}

/// Largest overlap error over edges, optionally skipping edges at listed vertices.
inline double layout_error(const Complex& k, const Packing& p, const OverlapMap& phi,
                           const std::vector<VertexId>& skip = {}) {
  double worst = 0.0;
  for (const Edge& e : k.edges()) {
    if (std::find(skip.begin(), skip.end(), e.a) != skip.end() || std::find(skip.begin(), skip.end(), e.b) != skip.end())
      continue;
    worst = std::max(worst, overlap_error(p[e.a], p[e.b], phi(e.a, e.b)));
  }
  return worst;
}

inline Packing apply_to_packing(const Mobius& m, Packing p) {
  for (VertexId v = 1; v <= p.vertex_count(); ++v) p[v] = detail::apply_map(m, p[v], p.geometry);
  return p;
}

// ---------------------------------------------------------------------------
// Holonomy

struct Holonomy {
  std::vector<int> loop;
  Mobius map;
  double displacement = 0.0;
  cplx base{0.0};
  cplx image{0.0};
  Face first_face{};
  std::array<Circle, 3> initial{};  // first face before continuation
  bool trivial() const { return displacement < tol::holonomy; }
};

/// Faces lying just left of a closed vertex path, as a closed face chain.
inline std::vector<int> left_face_chain(const Complex& k, const std::vector<VertexId>& path) {
  const std::size_t n = path.size();
  if (n < 3) fail(ErrorCode::open_chain, "path too short");
  std::vector<int> chain;
  for (std::size_t i = 0; i < n; ++i) {
    VertexId p = path[i], c = path[(i + 1) % n], q = path[(i + 2) % n];
    if (!k.has_edge(p, c) || !k.has_edge(c, q)) fail(ErrorCode::open_chain, "path uses a non-edge");
    // Clockwise about c from the edge toward p to the edge toward q.
    VertexId cur = p;
    for (int guard = 0; guard <= k.degree(c); ++guard) {
      auto f = k.left_face(cur, c);
      if (!f) fail(ErrorCode::open_chain, "path runs along the boundary");
      chain.push_back(*f);
      VertexId next = k.opposite(*f, cur, c);
      if (cur == q || next == q) {
        if (next == q) chain.push_back(*k.left_face(c, q));
        break;
      }
      cur = next;
    }
  }
  std::vector<int> out;
  for (int f : chain)
    if (out.empty() || out.back() != f) out.push_back(f);
  while (out.size() > 1 && out.front() == out.back()) out.pop_back();
  return out;
}

namespace detail {

inline std::pair<int, int> shared_edge(const Face& a, const Face& b) {
  for (int i = 0; i < 3; ++i) {
    int j = index_in(b, a[i]);
    int i2 = (i + 1) % 3;
    int j2 = index_in(b, a[i2]);
    if (j >= 0 && j2 >= 0) return {i, i2};
  }
  return {-1, -1};
}

}  // namespace detail

/// Develops along a closed face chain and returns the map carrying the first
/// face's initial placement onto its final one.
inline Holonomy holonomy(const Complex& k, const Label& r, const OverlapMap& phi, const std::vector<int>& loop,
                         VertexId base_vertex = 0) {
  if (loop.size() < 2) fail(ErrorCode::open_chain, "loop needs at least two faces");
  const Geometry g = r.geometry;
  auto place_from = [&](const Face& prev, const std::array<Circle, 3>& cprev, const Face& next) {
    auto [a, b] = detail::shared_edge(prev, next);
    if (a < 0) fail(ErrorCode::open_chain, "consecutive faces do not share an edge");
    return detail::place_face(next, detail::index_in(next, prev[a]), detail::index_in(next, prev[b]), cprev[a], cprev[b], r,
                              phi);
  };
  const Face& first = k.face(loop[0]);
  auto initial = detail::canonical_face(first, r, phi);
  auto cur = initial;
  for (std::size_t i = 1; i < loop.size(); ++i) cur = place_from(k.face(loop[i - 1]), cur, k.face(loop[i]));
  auto final_ = place_from(k.face(loop.back()), cur, first);

  Holonomy h;
  h.loop = loop;
  int i0 = detail::index_in(first, base_vertex);
  if (i0 < 0 || initial[i0].is_horocycle()) {
    i0 = 0;
    while (i0 < 3 && initial[i0].is_horocycle()) ++i0;
  }
  int i1 = (i0 + 1) % 3;
  h.map = detail::fit_pair(initial[i0], initial[i1], final_[i0], final_[i1], g);
  h.base = initial[i0].center;
  h.image = h.map(h.base);
  double d = g == Geometry::hyperbolic ? hyperbolic_distance(h.base, h.image) : std::abs(h.image - h.base);
  h.displacement = d + h.map.deviation_from_identity();
  h.initial = initial;
  h.first_face = first;
  return h;
}

// ---------------------------------------------------------------------------
// Normalization

inline Packing normalize_disc(const Packing& p, VertexId alpha, VertexId gamma) {
  if (p.geometry != Geometry::hyperbolic) fail(ErrorCode::invalid_input, "normalize_disc needs a hyperbolic packing");
  if (!p[gamma].is_horocycle()) fail(ErrorCode::not_horocycle, "gamma circle is not a horocycle");
  if (p[alpha].is_horocycle()) fail(ErrorCode::invalid_input, "alpha circle must be finite");
  Mobius t = Mobius::disc_automorphism(p[alpha].center);
  cplx z = t(p[gamma].center);
  cplx rot = cplx(0, 1) / (z / std::abs(z));
  return apply_to_packing(Mobius::disc_automorphism(0.0, rot) * t, p);
}

/// Automorphism placing z1 at i t and z2 at -i t, t > 0.
inline Mobius imaginary_axis_map(cplx z1, cplx z2) {
  Mobius t1 = Mobius::disc_automorphism(z1);
  cplx w = t1(z2);
  if (std::abs(w) < 1e-14) fail(ErrorCode::coincident_centers, "centers coincide");
  cplx mid = w / std::abs(w) * std::tanh(std::atanh(std::abs(w)) / 2.0);
  cplx m = t1.inverse()(mid);
  Mobius tm = Mobius::disc_automorphism(m);
  cplx a = tm(z1);
  cplx rot = cplx(0, 1) / (a / std::abs(a));
  return Mobius::disc_automorphism(0.0, rot) * tm;
}

inline Packing normalize_imaginary_axis(const Packing& p, VertexId v1, VertexId v2) {
  if (p.geometry != Geometry::hyperbolic) fail(ErrorCode::invalid_input, "needs a hyperbolic packing");
  if (p[v1].is_horocycle() || p[v2].is_horocycle()) fail(ErrorCode::invalid_input, "centers must be finite");
  return apply_to_packing(imaginary_axis_map(p[v1].center, p[v2].center), p);
}

// ---------------------------------------------------------------------------
// Winding numbers

inline cplx tangency_point(const Circle& a, const Circle& b) {
  cplx d = b.ecenter - a.ecenter;
  double len = std::abs(d);
  if (len == 0.0) return a.ecenter;
  double x = (len * len + a.eradius * a.eradius - b.eradius * b.eradius) / (2.0 * len);
  return a.ecenter + d / len * x;
}

inline double winding_of_polyline(const std::vector<cplx>& pts, cplx about) {
  double total = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    cplx a = pts[i] - about, b = pts[(i + 1) % pts.size()] - about;
    if (std::abs(a) < 1e-14 || std::abs(b) < 1e-14) fail(ErrorCode::branch_value_on_curve, "curve passes through the point");
    total += std::arg(b / a);
  }
  return total / two_pi;
}

inline int integral_winding(double w) {
  double r = std::round(w);
  if (std::abs(w - r) > 0.05) fail(ErrorCode::non_integral_winding, "winding " + std::to_string(w) + " is not integral");
  return static_cast<int>(r);
}

/// Polyline through circle centers (ideal points for horocycles) and the
/// tangency points between consecutive circles.
inline std::vector<cplx> carrier_polyline(const Packing& p, const std::vector<VertexId>& cycle) {
  std::vector<cplx> pts;
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    const Circle &a = p[cycle[i]], &b = p[cycle[(i + 1) % cycle.size()]];
    pts.push_back(a.center);
    pts.push_back(tangency_point(a, b));
  }
  return pts;
}

inline int boundary_winding(const Packing& p, const std::vector<VertexId>& component, cplx about = 0.0) {
  return integral_winding(winding_of_polyline(carrier_polyline(p, component), about));
}

inline int event_horizon_winding(const Packing& p, const BlackHoleRecord& rec) {
  cplx w = p[rec.fall_guy].ecenter;
  return integral_winding(winding_of_polyline(carrier_polyline(p, rec.horizon), w));
}

// ---------------------------------------------------------------------------
// Sphere

inline std::vector<SphereCircle> stereographic_project(const Packing& p) {
  std::vector<SphereCircle> out(p.vertex_count() + 1);
  for (VertexId v = 1; v <= p.vertex_count(); ++v) out[v] = stereographic_circle(p[v].ecenter, p[v].eradius);
  return out;
}

}  // namespace cpack
