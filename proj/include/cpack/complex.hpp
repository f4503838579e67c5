#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cpack/error.hpp"
#include "json.hpp"

namespace cpack {

// Vertex ids are 1-based and dense; slot 0 of per-vertex arrays is unused.
using VertexId = int;
using Face = std::array<VertexId, 3>;

/// Undirected edge, normalized so that a < b.
struct Edge {
  VertexId a = 0;
  VertexId b = 0;

  Edge() = default;
  Edge(VertexId u, VertexId v) : a(std::min(u, v)), b(std::max(u, v)) {}

  std::uint64_t key() const { return (std::uint64_t(std::uint32_t(a)) << 32) | std::uint32_t(b); }
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

inline std::uint64_t directed_key(VertexId u, VertexId v) {
  return (std::uint64_t(std::uint32_t(u)) << 32) | std::uint32_t(v);
}

/// Counterclockwise petals of a vertex. For an interior vertex the cycle is
/// closed (the last petal is followed by the first); boundary flowers are
/// open chains.
struct Flower {
  std::vector<VertexId> petals;
  bool closed = false;

  std::size_t size() const { return petals.size(); }
  /// Number of faces in the fan.
  std::size_t face_count() const { return closed ? petals.size() : petals.size() - 1; }
};

enum class SurfaceType { disc, annulus, torus, sphere, other };

inline std::string to_string(SurfaceType s) {
  switch (s) {
    case SurfaceType::disc: return "disc";
    case SurfaceType::annulus: return "annulus";
    case SurfaceType::torus: return "torus";
    case SurfaceType::sphere: return "sphere";
    case SurfaceType::other: return "other";
  }
  return "other";
}

enum class HoleKind { singular, shifted };

/// Auxiliary structure inserted by a black-hole surgery.
///
/// Singular: `originals` = (v1, v2, v3) of the target face, `chaperones` =
/// (h1, h2, h3) where h_i sits across from v_i, horizon = v1,u3,v2,u1,v3,u2.
/// Shifted: `originals` = (v), the split vertex id is reused for twin t1,
/// `chaperones` = (h1, h2), horizon = the petal cycle of v.
struct BlackHoleRecord {
  HoleKind kind = HoleKind::singular;
  VertexId fall_guy = 0;
  std::vector<VertexId> chaperones;
  std::vector<VertexId> originals;
  std::optional<std::pair<VertexId, VertexId>> twins;
  std::optional<std::pair<VertexId, VertexId>> jumps;
  std::optional<std::pair<VertexId, VertexId>> pre_jumps;  // w1, w2
  std::vector<VertexId> horizon;

  /// Vertices strictly inside the horizon.
  std::vector<VertexId> interior_vertices() const {
    std::vector<VertexId> out = chaperones;
    out.push_back(fall_guy);
    if (twins) {
      out.push_back(twins->first);
      out.push_back(twins->second);
    }
    std::sort(out.begin(), out.end());
    return out;
  }
};

class Complex {
 public:
  Complex() = default;

  explicit Complex(std::vector<Face> faces, nlohmann::json meta = nlohmann::json::object())
      : faces_(std::move(faces)), meta_(std::move(meta)) {
    build();
  }

  int vertex_count() const { return n_; }
  int face_count() const { return static_cast<int>(faces_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<Face>& faces() const { return faces_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Face& face(int f) const { return faces_.at(f); }

  bool contains(VertexId v) const { return v >= 1 && v <= n_; }
  void require_vertex(VertexId v) const {
    if (!contains(v)) fail(ErrorCode::unknown_vertex, "vertex " + std::to_string(v));
  }

  const Flower& flower(VertexId v) const {
    require_vertex(v);
    return flowers_[v];
  }
  int degree(VertexId v) const { return static_cast<int>(flower(v).size()); }
  bool is_boundary(VertexId v) const {
    require_vertex(v);
    return boundary_[v];
  }
  bool is_interior(VertexId v) const { return !is_boundary(v); }
  bool has_edge(VertexId u, VertexId v) const {
    return left_face_.count(directed_key(u, v)) || left_face_.count(directed_key(v, u));
  }
  bool is_interior_edge(VertexId u, VertexId v) const {
    return left_face_.count(directed_key(u, v)) && left_face_.count(directed_key(v, u));
  }
  /// Face having the directed edge u->v on its boundary, if any.
  std::optional<int> left_face(VertexId u, VertexId v) const {
    auto it = left_face_.find(directed_key(u, v));
    if (it == left_face_.end()) return std::nullopt;
    return it->second;
  }
  /// Vertex of `f` other than u and v.
  VertexId opposite(int f, VertexId u, VertexId v) const {
    for (VertexId w : faces_.at(f))
      if (w != u && w != v) return w;
    fail(ErrorCode::invalid_input, "face does not contain a third vertex");
  }

  int euler_characteristic() const { return n_ - edge_count() + face_count(); }
  int boundary_component_count() const { return static_cast<int>(boundary_cycles_.size()); }
  /// Boundary components, each traversed with the interior on the left.
  const std::vector<std::vector<VertexId>>& boundary_cycles() const { return boundary_cycles_; }
  SurfaceType surface_type() const { return surface_; }

  std::vector<VertexId> interior_vertices() const {
    std::vector<VertexId> out;
    for (VertexId v = 1; v <= n_; ++v)
      if (!boundary_[v]) out.push_back(v);
    return out;
  }
  std::vector<VertexId> boundary_vertices() const {
    std::vector<VertexId> out;
    for (VertexId v = 1; v <= n_; ++v)
      if (boundary_[v]) out.push_back(v);
    return out;
  }

  /// Faces adjacent to `f` across each of its edges (-1 for boundary edges).
  std::array<int, 3> face_neighbors(int f) const {
    std::array<int, 3> out{-1, -1, -1};
    const Face& t = faces_.at(f);
    for (int i = 0; i < 3; ++i) {
      auto g = left_face(t[(i + 1) % 3], t[i]);
      out[i] = g ? *g : -1;
    }
    return out;
  }

  const std::vector<BlackHoleRecord>& holes() const { return holes_; }
  const nlohmann::json& meta() const { return meta_; }
  nlohmann::json& meta() { return meta_; }

  /// Returns a copy with an extra surgery record attached.
  Complex with_hole(BlackHoleRecord rec) const {
    Complex out = *this;
    out.holes_.push_back(std::move(rec));
    return out;
  }
  void set_holes(std::vector<BlackHoleRecord> holes) { holes_ = std::move(holes); }

  bool is_hole_interior(VertexId v) const {
    for (const auto& h : holes_) {
      auto in = h.interior_vertices();
      if (std::binary_search(in.begin(), in.end(), v)) return true;
    }
    return false;
  }

 private:
  void build() {
    if (faces_.empty()) fail(ErrorCode::invalid_input, "empty face list");
    n_ = 0;
    for (const Face& f : faces_) {
      for (VertexId v : f) {
        if (v < 1) fail(ErrorCode::invalid_input, "vertex ids start at 1");
        n_ = std::max(n_, v);
      }
      if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2])
        fail(ErrorCode::invalid_input, "face with repeated vertex");
    }
    std::vector<bool> seen(n_ + 1, false);
    for (const Face& f : faces_)
      for (VertexId v : f) seen[v] = true;
    for (VertexId v = 1; v <= n_; ++v)
      if (!seen[v]) fail(ErrorCode::invalid_input, "vertex ids not contiguous, missing " + std::to_string(v));

    std::unordered_map<std::uint64_t, int> undirected_count;
    for (int fi = 0; fi < face_count(); ++fi) {
      const Face& f = faces_[fi];
      for (int i = 0; i < 3; ++i) {
        VertexId u = f[i], v = f[(i + 1) % 3];
        if (++undirected_count[Edge(u, v).key()] > 2)
          fail(ErrorCode::non_manifold, "edge " + std::to_string(u) + "-" + std::to_string(v) + " in more than two faces");
        if (!left_face_.emplace(directed_key(u, v), fi).second)
          fail(ErrorCode::orientation_error,
               "directed edge " + std::to_string(u) + "->" + std::to_string(v) + " appears twice");
      }
    }
    edges_.clear();
    for (auto& [k, c] : undirected_count) edges_.push_back(Edge(VertexId(k >> 32), VertexId(k & 0xffffffffu)));
    std::sort(edges_.begin(), edges_.end());

    // Flowers: each face (v, a, b) contributes the step a -> b at v.
    std::vector<std::map<VertexId, VertexId>> next(n_ + 1), prev(n_ + 1);
    for (const Face& f : faces_)
      for (int i = 0; i < 3; ++i) {
        VertexId v = f[i], a = f[(i + 1) % 3], b = f[(i + 2) % 3];
        next[v][a] = b;
        prev[v][b] = a;
      }
    flowers_.assign(n_ + 1, Flower{});
    boundary_.assign(n_ + 1, false);
    for (VertexId v = 1; v <= n_; ++v) {
      VertexId start = 0;
      for (auto& [a, b] : next[v])
        if (!prev[v].count(a)) {
          if (start != 0) fail(ErrorCode::pinched_vertex, "vertex " + std::to_string(v) + " has several fans");
          start = a;
        }
      Flower fl;
      fl.closed = (start == 0);
      if (fl.closed) start = next[v].begin()->first;
      VertexId cur = start;
      fl.petals.push_back(cur);
      while (true) {
        auto it = next[v].find(cur);
        if (it == next[v].end()) break;
        cur = it->second;
        if (fl.closed && cur == start) break;
        fl.petals.push_back(cur);
        if (fl.petals.size() > next[v].size() + 1)
          fail(ErrorCode::pinched_vertex, "vertex " + std::to_string(v) + " flower does not close");
      }
      if (fl.face_count() != next[v].size())
        fail(ErrorCode::pinched_vertex, "vertex " + std::to_string(v) + " flower is not a single chain or cycle");
      boundary_[v] = !fl.closed;
      flowers_[v] = std::move(fl);
    }

    // Connectivity over edges.
    std::vector<bool> reached(n_ + 1, false);
    std::queue<VertexId> q;
    q.push(1);
    reached[1] = true;
    int count = 1;
    while (!q.empty()) {
      VertexId v = q.front();
      q.pop();
      for (VertexId w : flowers_[v].petals)
        if (!reached[w]) {
          reached[w] = true;
          ++count;
          q.push(w);
        }
    }
    if (count != n_) fail(ErrorCode::disconnected, "complex is not connected");

    boundary_cycles_.clear();
    std::vector<bool> used(n_ + 1, false);
    for (VertexId v = 1; v <= n_; ++v) {
      if (!boundary_[v] || used[v]) continue;
      std::vector<VertexId> cyc;
      VertexId cur = v;
      while (!used[cur]) {
        used[cur] = true;
        cyc.push_back(cur);
        cur = flowers_[cur].petals.front();
      }
      boundary_cycles_.push_back(std::move(cyc));
    }

    int chi = euler_characteristic();
    int b = boundary_component_count();
    if (chi == 1 && b == 1)
      surface_ = SurfaceType::disc;
    else if (chi == 0 && b == 2)
      surface_ = SurfaceType::annulus;
    else if (chi == 0 && b == 0)
      surface_ = SurfaceType::torus;
    else if (chi == 2 && b == 0)
      surface_ = SurfaceType::sphere;
    else
      surface_ = SurfaceType::other;
  }

  int n_ = 0;
  std::vector<Face> faces_;
  std::vector<Edge> edges_;
  std::vector<Flower> flowers_;
  std::vector<bool> boundary_;
  std::unordered_map<std::uint64_t, int> left_face_;
  std::vector<std::vector<VertexId>> boundary_cycles_;
  SurfaceType surface_ = SurfaceType::other;
  std::vector<BlackHoleRecord> holes_;
  nlohmann::json meta_ = nlohmann::json::object();
};

inline Complex build_complex(std::vector<Face> faces, nlohmann::json meta = nlohmann::json::object()) {
  return Complex(std::move(faces), std::move(meta));
}

inline const Flower& flower(const Complex& k, VertexId v) { return k.flower(v); }

/// Replaces the interior edge {u,v} by the other diagonal of its quadrilateral.
inline Complex edge_flip(const Complex& k, Edge e) {
  k.require_vertex(e.a);
  k.require_vertex(e.b);
  auto f1 = k.left_face(e.a, e.b);
  auto f2 = k.left_face(e.b, e.a);
  if (!f1 || !f2) fail(ErrorCode::boundary_edge, "edge is not interior");
  VertexId c = k.opposite(*f1, e.a, e.b);
  VertexId d = k.opposite(*f2, e.a, e.b);
  if (c == d || k.has_edge(c, d)) fail(ErrorCode::flip_would_create_duplicate_edge, "diagonal already an edge");
  for (VertexId v : {e.a, e.b})
    if (k.degree(v) - 1 < 3) fail(ErrorCode::flip_would_break_degree, "vertex " + std::to_string(v) + " would have < 3 neighbors");
  std::vector<Face> faces;
  faces.reserve(k.face_count());
  for (int f = 0; f < k.face_count(); ++f)
    if (f != *f1 && f != *f2) faces.push_back(k.face(f));
  // (a,b,c) and (b,a,d) become (a,d,c) and (d,b,c).
  faces.push_back({e.a, d, c});
  faces.push_back({d, e.b, c});
  Complex out(std::move(faces), k.meta());
  out.set_holes(k.holes());
  return out;
}

struct PunctureResult {
  Complex complex;
  std::vector<VertexId> old_to_new;  // 0 for the removed vertex
};

/// Removes interior vertex v and its faces; ids above v shift down by one.
inline PunctureResult puncture_with_map(const Complex& k, VertexId v) {
  k.require_vertex(v);
  if (k.is_boundary(v)) fail(ErrorCode::boundary_vertex, "cannot puncture at a boundary vertex");
  std::vector<VertexId> map(k.vertex_count() + 1, 0);
  for (VertexId w = 1; w <= k.vertex_count(); ++w) map[w] = w < v ? w : (w > v ? w - 1 : 0);
  std::vector<Face> faces;
  for (const Face& f : k.faces())
    if (f[0] != v && f[1] != v && f[2] != v) faces.push_back({map[f[0]], map[f[1]], map[f[2]]});
  try {
    return {Complex(std::move(faces), k.meta()), std::move(map)};
  } catch (const Error& e) {
    fail(ErrorCode::result_not_manifold, e.what());
  }
}

inline Complex puncture(const Complex& k, VertexId v) { return puncture_with_map(k, v).complex; }

/// Identifies vertex `from` with its neighbour `into`, dropping the faces
/// containing both; ids above `from` shift down by one.
inline PunctureResult merge_vertex(const Complex& k, VertexId from, VertexId into) {
  k.require_vertex(from);
  k.require_vertex(into);
  if (!k.has_edge(from, into)) fail(ErrorCode::invalid_input, "merged vertices must be adjacent");
  std::vector<VertexId> map(k.vertex_count() + 1, 0);
  for (VertexId w = 1; w <= k.vertex_count(); ++w) map[w] = w < from ? w : (w > from ? w - 1 : 0);
  map[from] = map[into];
  std::vector<Face> faces;
  for (const Face& f : k.faces()) {
    Face g{map[f[0]], map[f[1]], map[f[2]]};
    if (g[0] != g[1] && g[1] != g[2] && g[2] != g[0]) faces.push_back(g);
  }
  try {
    return {Complex(std::move(faces), k.meta()), std::move(map)};
  } catch (const Error& e) {
    fail(ErrorCode::result_not_manifold, e.what());
  }
}

namespace detail {

inline void require_free_of_holes(const Complex& k, const std::vector<VertexId>& region) {
  for (VertexId v : region)
    if (k.is_hole_interior(v)) fail(ErrorCode::adjacent_hole_overlap, "region touches an existing black hole");
  for (const auto& h : k.holes())
    for (VertexId v : region)
      if (std::find(h.originals.begin(), h.originals.end(), v) != h.originals.end() && h.kind == HoleKind::shifted)
        fail(ErrorCode::adjacent_hole_overlap, "region touches an existing black hole");
}

}  // namespace detail

/// Singular black hole on interior face (v1, v2, v3): the face and its three
/// edge neighbors are retriangulated around a fall guy g and chaperones
/// h1, h2, h3 (h_i across from v_i). New ids: g = n+1, h1..h3 = n+2..n+4.
inline std::pair<Complex, BlackHoleRecord> insert_singular_blackhole(const Complex& k, Face f) {
  for (VertexId v : f) k.require_vertex(v);
  auto fi = k.left_face(f[0], f[1]);
  if (!fi || k.left_face(f[1], f[2]) != fi) fail(ErrorCode::invalid_input, "not a face of the complex");
  const auto [v1, v2, v3] = f;
  auto across = [&](VertexId a, VertexId b) -> std::pair<int, VertexId> {
    auto g = k.left_face(b, a);
    if (!g) fail(ErrorCode::boundary_face, "face has a boundary edge");
    return {*g, k.opposite(*g, a, b)};
  };
  auto [f3, u3] = across(v1, v2);
  auto [f1, u1] = across(v2, v3);
  auto [f2, u2] = across(v3, v1);
  std::set<VertexId> distinct{v1, v2, v3, u1, u2, u3};
  if (distinct.size() != 6) fail(ErrorCode::invalid_input, "black-hole region is not an embedded hexagon");
  detail::require_free_of_holes(k, {v1, v2, v3, u1, u2, u3});

  const int n = k.vertex_count();
  const VertexId g = n + 1, h1 = n + 2, h2 = n + 3, h3 = n + 4;
  std::vector<Face> faces;
  for (int i = 0; i < k.face_count(); ++i)
    if (i != *fi && i != f1 && i != f2 && i != f3) faces.push_back(k.face(i));
  for (Face t : std::initializer_list<Face>{{g, v1, h3}, {g, h3, v2}, {g, v2, h1}, {g, h1, v3}, {g, v3, h2}, {g, h2, v1},
                                           {v1, u3, h3}, {h3, u3, v2}, {v2, u1, h1}, {h1, u1, v3}, {v3, u2, h2}, {h2, u2, v1}})
    faces.push_back(t);

  BlackHoleRecord rec;
  rec.kind = HoleKind::singular;
  rec.fall_guy = g;
  rec.chaperones = {h1, h2, h3};
  rec.originals = {v1, v2, v3};
  rec.horizon = {v1, u3, v2, u1, v3, u2};
  Complex out(std::move(faces), k.meta());
  out.set_holes(k.holes());
  return {out.with_hole(rec), rec};
}

/// Shifted black hole at interior vertex v with jump petals j1, j2. Twin t1
/// keeps the id of v; t2, h1, h2, g get ids n+1..n+4. Petals j1..w2 (ccw)
/// attach to t2 and j2..w1 to t1, where w_i is the petal preceding j_i.
inline std::pair<Complex, BlackHoleRecord> insert_shifted_blackhole(const Complex& k, VertexId v, VertexId j1, VertexId j2) {
  k.require_vertex(v);
  if (k.is_boundary(v)) fail(ErrorCode::boundary_vertex, "shifted branching needs an interior vertex");
  const auto& petals = k.flower(v).petals;
  const int m = static_cast<int>(petals.size());
  if (m < 5) fail(ErrorCode::too_few_petals, "need at least 5 petals");
  auto index_of = [&](VertexId w) {
    auto it = std::find(petals.begin(), petals.end(), w);
    if (it == petals.end()) fail(ErrorCode::invalid_input, "jump is not a petal");
    return static_cast<int>(it - petals.begin());
  };
  const int a = index_of(j1), b = index_of(j2);
  if (a == b) fail(ErrorCode::invalid_input, "jumps must be distinct");
  if ((a + 1) % m == b || (b + 1) % m == a) fail(ErrorCode::jumps_adjacent, "jump petals are adjacent");
  std::vector<VertexId> region(petals.begin(), petals.end());
  region.push_back(v);
  detail::require_free_of_holes(k, region);

  const int n = k.vertex_count();
  const VertexId t1 = v, t2 = n + 1, h1 = n + 2, h2 = n + 3, g = n + 4;
  const VertexId w1 = petals[(a - 1 + m) % m], w2 = petals[(b - 1 + m) % m];
  std::vector<Face> faces;
  for (const Face& f : k.faces())
    if (f[0] != v && f[1] != v && f[2] != v) faces.push_back(f);
  for (int i = a; (i + 1) % m != b; i = (i + 1) % m) faces.push_back({t2, petals[i], petals[(i + 1) % m]});
  for (int i = b; (i + 1) % m != a; i = (i + 1) % m) faces.push_back({t1, petals[i], petals[(i + 1) % m]});
  for (Face t : std::initializer_list<Face>{{t2, w2, h2}, {t2, h2, g}, {t2, g, h1}, {t2, h1, j1},
                                           {t1, w1, h1}, {t1, h1, g}, {t1, g, h2}, {t1, h2, j2},
                                           {h1, w1, j1}, {h2, w2, j2}})
    faces.push_back(t);

  BlackHoleRecord rec;
  rec.kind = HoleKind::shifted;
  rec.fall_guy = g;
  rec.chaperones = {h1, h2};
  rec.originals = {v};
  rec.twins = std::make_pair(t1, t2);
  rec.jumps = std::make_pair(j1, j2);
  rec.pre_jumps = std::make_pair(w1, w2);
  rec.horizon = petals;
  Complex out(std::move(faces), k.meta());
  out.set_holes(k.holes());
  return {out.with_hole(rec), rec};
}

/// True if `map` (1-based, size n+1) carries the face set of `k` onto itself,
/// ignoring orientation.
inline bool is_automorphism(const Complex& k, const std::vector<VertexId>& map) {
  std::set<std::array<VertexId, 3>> faces;
  for (Face f : k.faces()) {
    std::sort(f.begin(), f.end());
    faces.insert(f);
  }
  for (const Face& f : k.faces()) {
    Face g{map[f[0]], map[f[1]], map[f[2]]};
    std::sort(g.begin(), g.end());
    if (!faces.count(g)) return false;
  }
  return true;
}

}  // namespace cpack
