#include <gtest/gtest.h>

#include <optional>

#include "cpack/complex.hpp"
#include "cpack/generators.hpp"

using namespace cpack;

namespace {

std::optional<ErrorCode> code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

}  // namespace

TEST(Generators, HexDiscCounts) {
  for (int n = 1; n <= 5; ++n) {
    Complex k = hex_disc(n);
    EXPECT_EQ(k.vertex_count(), 1 + 3 * n * (n + 1));
    EXPECT_EQ(k.face_count(), 6 * n * n);
    EXPECT_EQ(k.euler_characteristic(), 1);
    EXPECT_EQ(k.surface_type(), SurfaceType::disc);
    EXPECT_EQ(k.degree(1), 6);
    EXPECT_TRUE(k.flower(1).closed);
    ASSERT_EQ(k.boundary_component_count(), 1);
    EXPECT_EQ(k.boundary_cycles()[0].size(), std::size_t(6 * n));
  }
}

TEST(Generators, AnnulusAndTorus) {
  Complex a = hex_annulus(5, 12);
  EXPECT_EQ(a.vertex_count(), 60);
  EXPECT_EQ(a.euler_characteristic(), 0);
  EXPECT_EQ(a.boundary_component_count(), 2);
  EXPECT_EQ(a.surface_type(), SurfaceType::annulus);
  EXPECT_TRUE(is_automorphism(a, annulus_reflection(5, 12)));

  Complex t = hex_torus(8, 8);
  EXPECT_EQ(t.vertex_count(), 64);
  EXPECT_EQ(t.euler_characteristic(), 0);
  EXPECT_EQ(t.surface_type(), SurfaceType::torus);
  for (VertexId v = 1; v <= 64; ++v) EXPECT_EQ(t.degree(v), 6);
  std::vector<VertexId> shift(65, 0);
  for (int j = 0; j < 8; ++j)
    for (int i = 0; i < 8; ++i) shift[torus_id(8, 8, i, j)] = torus_id(8, 8, i + 4, j + 4);
  EXPECT_TRUE(is_automorphism(t, shift));
}

TEST(Complex, FlowerOrderIsCounterclockwise) {
  Complex k = flower_complex(5);
  const Flower& f = flower(k, 1);
  EXPECT_TRUE(f.closed);
  EXPECT_EQ(f.petals, (std::vector<VertexId>{2, 3, 4, 5, 6}));
  const Flower& p = flower(k, 3);
  EXPECT_FALSE(p.closed);
  EXPECT_EQ(p.petals, (std::vector<VertexId>{4, 1, 2}));
}

TEST(Complex, RejectsBadInput) {
  EXPECT_EQ(code_of([] { build_complex({{1, 2, 3}, {1, 2, 4}}); }), ErrorCode::orientation_error);
  EXPECT_EQ(code_of([] { build_complex({{1, 2, 3}, {2, 1, 4}, {1, 2, 5}}); }), ErrorCode::non_manifold);
  EXPECT_EQ(code_of([] { build_complex({{1, 2, 3}, {1, 4, 5}}); }), ErrorCode::pinched_vertex);
  EXPECT_EQ(code_of([] { build_complex({{1, 1, 3}}); }), ErrorCode::invalid_input);
}

TEST(Complex, EdgeFlipRoundTrip) {
  Complex k = hex_disc(2);
  VertexId p = k.flower(1).petals[0];
  Complex f = edge_flip(k, Edge(1, p));
  EXPECT_EQ(f.degree(1), 5);
  EXPECT_EQ(f.degree(p), k.degree(p) - 1);
  EXPECT_EQ(f.euler_characteristic(), 1);
  VertexId c = k.opposite(*k.left_face(1, p), 1, p);
  VertexId d = k.opposite(*k.left_face(p, 1), 1, p);
  EXPECT_TRUE(f.has_edge(c, d));
  Complex back = edge_flip(f, Edge(c, d));
  EXPECT_TRUE(back.has_edge(1, p));
  EXPECT_EQ(back.degree(1), 6);
  VertexId b = k.boundary_vertices().front();
  EXPECT_EQ(code_of([&] { edge_flip(k, Edge(b, k.flower(b).petals.front())); }), ErrorCode::boundary_edge);
}

TEST(Complex, PunctureMakesAnnulus) {
  Complex k = hex_disc(2);
  auto res = puncture_with_map(k, 1);
  EXPECT_EQ(res.complex.vertex_count(), k.vertex_count() - 1);
  EXPECT_EQ(res.complex.surface_type(), SurfaceType::annulus);
  EXPECT_EQ(res.old_to_new[1], 0);
  EXPECT_EQ(res.old_to_new[2], 1);
}

TEST(Complex, SingularSurgery) {
  Complex k = hex_disc(3);
  const auto& p = k.flower(1).petals;
  auto [out, rec] = insert_singular_blackhole(k, Face{1, p[0], p[1]});
  EXPECT_EQ(out.vertex_count(), k.vertex_count() + 4);
  EXPECT_EQ(out.euler_characteristic(), 1);
  EXPECT_EQ(out.degree(rec.fall_guy), 6);
  EXPECT_EQ(rec.horizon.size(), 6u);
  for (VertexId h : rec.chaperones) EXPECT_EQ(out.degree(h), 4);
  ASSERT_EQ(out.holes().size(), 1u);
  EXPECT_TRUE(out.is_hole_interior(rec.fall_guy));
  // A second hole may not share the region.
  EXPECT_EQ(code_of([&] { insert_singular_blackhole(out, Face{1, p[2], p[3]}); }), ErrorCode::adjacent_hole_overlap);
}

TEST(Complex, ShiftedSurgery) {
  Complex k = hex_disc(3);
  const auto& p = k.flower(1).petals;
  auto [out, rec] = insert_shifted_blackhole(k, 1, p[1], p[4]);
  EXPECT_EQ(out.vertex_count(), k.vertex_count() + 4);
  EXPECT_EQ(out.euler_characteristic(), 1);
  EXPECT_EQ(out.degree(rec.fall_guy), 4);
  EXPECT_EQ(out.degree(rec.twins->first), 6);
  EXPECT_EQ(out.degree(rec.twins->second), 6);
  EXPECT_EQ(code_of([&] { insert_shifted_blackhole(k, 1, p[1], p[2]); }), ErrorCode::jumps_adjacent);
  EXPECT_EQ(code_of([&] { insert_shifted_blackhole(flower_complex(4), 1, 2, 4); }), ErrorCode::too_few_petals);
}
