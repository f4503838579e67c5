#include <gtest/gtest.h>

#include "cpack/branching.hpp"
#include "cpack/generators.hpp"

using namespace cpack;

namespace {

Face central_face(const Complex& k) {
  const auto& p = k.flower(1).petals;
  return {1, p[0], p[1]};
}

}  // namespace

TEST(Traditional, FlowerSizeRules) {
  EXPECT_NO_THROW(traditional_spec(hex_disc(2), 1, 1));
  EXPECT_THROW(traditional_spec(flower_complex(4), 1, 1), Error);
  EXPECT_NO_THROW(traditional_spec(flower_complex(7), 1, 2));
}

TEST(Traditional, DoubleCoverAngleSum) {
  Complex k = hex_disc(3);
  auto b = build_branched(k, {traditional_spec(k, 1)}, BoundaryCondition::horocycles(k), Geometry::hyperbolic);
  EXPECT_NEAR(angle_sum(b.complex, b.label, b.phi, 1), 2.0 * two_pi, 1e-8);
  EXPECT_EQ(boundary_winding(b.packing, b.complex.boundary_cycles()[0]), 2);
  EXPECT_LT(layout_error(b.complex, b.packing, b.phi), 1e-8);
}

TEST(Singular, SymmetricPointGivesEqualDials) {
  Complex k = hex_disc(3);
  Packing pk = develop(k, max_label(k).label, {});
  Face f = central_face(k);
  cplx p = interstice_center(pk, f);
  auto g = singular_params(pk, f, p);
  for (double x : g) EXPECT_NEAR(x, pi / 3, 1e-10);
  EXPECT_THROW(singular_params(pk, f, pk[1].center), Error);
}

TEST(Singular, DialsSumToPiAndShiftTowardTangency) {
  Complex k = hex_disc(3);
  Packing pk = develop(k, max_label(k).label, {});
  Face f = central_face(k);
  cplx c = interstice_center(pk, f);
  Interstice in = interstice(pk, f);
  double prev = 0.0;
  for (double s : {0.1, 0.5, 0.9, 0.99}) {
    cplx p = c + s * (in.tangency[1] - c);  // toward the tangency point opposite v1
    auto g = singular_params(pk, f, p);
    EXPECT_NEAR(g[0] + g[1] + g[2], pi, 1e-14);
    for (double x : g) EXPECT_GT(x, 0.0);
    EXPECT_GT(g[0], prev);
    prev = g[0];
  }
}

TEST(Singular, BuildProperties) {
  Complex k = hex_disc(3);
  auto b = build_branched(k, {BranchSpec::singular(central_face(k), pi / 3, pi / 3)}, BoundaryCondition::horocycles(k),
                          Geometry::hyperbolic);
  ASSERT_EQ(b.horizon_windings.size(), 1u);
  EXPECT_EQ(b.horizon_windings[0], 2);
  EXPECT_LT(b.fall_guy_radius, 1e-9);
  EXPECT_LT(b.fall_guy_incidence, 1e-8);
  EXPECT_LT(non_hole_error(b), 1e-8);
  EXPECT_LT(layout_error(b.complex, b.packing, b.phi), 1e-8);
}

TEST(Shifted, CenterMatchesTraditional) {
  Complex k = hex_disc(3);
  Packing pk = develop(k, max_label(k).label, {});
  ShiftedParams sp = shifted_params(pk, k, 1, pk[1].center);
  auto bc = BoundaryCondition::horocycles(k);
  auto shifted = build_branched(k, {BranchSpec::shifted(1, sp.j1, sp.j2, sp.gamma1, sp.gamma2)}, bc, Geometry::hyperbolic);
  auto trad = build_branched(k, {traditional_spec(k, 1)}, bc, Geometry::hyperbolic);
  const auto& rec = shifted.holes[0];
  EXPECT_NEAR(shifted.label[rec.twins->first], shifted.label[rec.twins->second], 1e-6);
  EXPECT_EQ(shifted.horizon_windings[0], 2);
  EXPECT_LT(shifted.fall_guy_incidence, 1e-8);
  for (VertexId v : k.interior_vertices())
    if (v != 1) EXPECT_NEAR(shifted.label[v], trad.label[v], 1e-6) << v;
}

TEST(Shifted, DialTransition) {
  Complex k = hex_disc(3);
  const auto& p = k.flower(1).petals;
  auto bc = BoundaryCondition::horocycles(k);
  auto a = build_branched(k, {BranchSpec::shifted(1, p[1], p[4], pi, 0.4 * pi)}, bc, Geometry::hyperbolic);
  auto b = build_branched(k, {BranchSpec::shifted(1, p[0], p[4], 0.0, 0.4 * pi)}, bc, Geometry::hyperbolic);
  for (VertexId v : k.interior_vertices()) EXPECT_NEAR(a.label[v], b.label[v], 1e-8) << v;
  EXPECT_EQ(a.horizon_windings[0], 2);
}

TEST(Shifted, EveryInteriorPointBuilds) {
  Complex k = hex_disc(3);
  Packing pk = develop(k, max_label(k).label, {});
  auto bc = BoundaryCondition::horocycles(k);
  for (double ang : {0.0, 0.4, 1.3, 2.9}) {
    double last_ratio = 1.0 + 1e-9;
    for (double t : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      cplx p = pk[1].ecenter + t * pk[1].eradius * std::polar(1.0, ang);
      ShiftedParams sp = shifted_params(pk, k, 1, p);
      auto b = build_branched(k, {BranchSpec::shifted(1, sp.j1, sp.j2, sp.gamma1, sp.gamma2)}, bc, Geometry::hyperbolic);
      EXPECT_EQ(b.horizon_windings[0], 2);
      const auto& tw = *b.holes[0].twins;
      double r1 = b.label[tw.first], r2 = b.label[tw.second];
      double ratio = std::min(r1, r2) / std::max(r1, r2);
      EXPECT_LT(ratio, last_ratio) << "angle " << ang << " t " << t;
      last_ratio = ratio;
    }
  }
}
