#include <gtest/gtest.h>

#include <cmath>
#include <cstring>

#include "cpack/io.hpp"
#include "cpack/pipelines.hpp"
#include "cpack/svg.hpp"

using namespace cpack;

namespace {

int count(const std::string& s, const std::string& needle) {
  int n = 0;
  for (auto p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
  return n;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST(Gen, Counts) {
  Complex d = gen_complex(ComplexKind::disc, 3);
  EXPECT_EQ(d.vertex_count(), 37);
  EXPECT_EQ(d.boundary_component_count(), 1);

  Complex a = gen_complex(ComplexKind::annulus, 5, 12);
  EXPECT_EQ(a.boundary_component_count(), 2);
  EXPECT_EQ(a.euler_characteristic(), 0);

  Complex t = gen_complex(ComplexKind::torus, 8, 8);
  EXPECT_EQ(t.euler_characteristic(), 0);
  EXPECT_EQ(t.boundary_component_count(), 0);
}

TEST(Gen, MidlineReflectionIsAutomorphism) {
  Complex a = gen_complex(ComplexKind::annulus, 5, 12);
  auto refl = annulus_reflection(5, 12);
  for (const Edge& e : a.edges()) EXPECT_TRUE(a.has_edge(refl[e.a], refl[e.b]));
  // Orientation reversing: every face maps to a face with the opposite order.
  for (const Face& f : a.faces()) EXPECT_TRUE(a.left_face(refl[f[1]], refl[f[0]]).has_value());
}

TEST(Gen, TooSmall) {
  auto code = [](auto f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::invalid_input;
  };
  EXPECT_EQ(code([] { gen_complex(ComplexKind::disc, 0); }), ErrorCode::too_small);
  EXPECT_EQ(code([] { gen_complex(ComplexKind::annulus, 2, 12); }), ErrorCode::too_small);
  EXPECT_EQ(code([] { gen_complex(ComplexKind::torus, 4, 8); }), ErrorCode::too_small);
  EXPECT_NO_THROW(gen_complex(ComplexKind::torus, 5, 5));
}

TEST(Io, ComplexRoundTrip) {
  Complex a = gen_complex(ComplexKind::annulus, 5, 12);
  Complex b = complex_from_json(json::parse(dump(complex_to_json(a))));
  EXPECT_EQ(a.faces(), b.faces());
  EXPECT_EQ(a.meta(), b.meta());
  EXPECT_EQ(dump(complex_to_json(a)), dump(complex_to_json(b)));

  auto br = assemble_branched(gen_complex(ComplexKind::disc, 2), {BranchSpec::shifted(1, 2, 5, 1.0, pi - 1.0)});
  Complex c = complex_from_json(json::parse(dump(complex_to_json(br.complex))));
  ASSERT_EQ(c.holes().size(), 1u);
  EXPECT_EQ(dump(complex_to_json(c)), dump(complex_to_json(br.complex)));
}

TEST(Io, PackingRoundTripIsExact) {
  Complex k = gen_complex(ComplexKind::disc, 3);
  auto r = max_label(k);
  Packing p = normalize_disc(develop(k, r.label, {}), 1, k.boundary_cycles()[0][0]);
  Packing q = packing_from_json(json::parse(dump(packing_to_json(p))));
  ASSERT_EQ(q.vertex_count(), p.vertex_count());
  for (VertexId v = 1; v <= p.vertex_count(); ++v) {
    EXPECT_TRUE(same_bits(p[v].center.real(), q[v].center.real()));
    EXPECT_TRUE(same_bits(p[v].center.imag(), q[v].center.imag()));
    EXPECT_EQ(p[v].is_horocycle(), q[v].is_horocycle());
    if (!p[v].is_horocycle()) EXPECT_TRUE(same_bits(p[v].radius, q[v].radius));
    EXPECT_TRUE(same_bits(p[v].eradius, q[v].eradius));
  }
  Label l = label_from_json(json::parse(dump(label_to_json(r.label))));
  for (VertexId v = 1; v <= k.vertex_count(); ++v)
    EXPECT_TRUE(same_bits(l[v], r.label[v]) || (std::isinf(l[v]) && std::isinf(r.label[v])));
}

TEST(Io, SpecsAndOverlaps) {
  std::vector<BranchSpec> specs{BranchSpec::traditional(8, 1), BranchSpec::singular({1, 2, 3}, 0.7, 1.1),
                                BranchSpec::shifted(14, 3, 9, 0.25, pi - 0.25)};
  json j = json::array();
  for (const auto& s : specs) j.push_back(spec_to_json(s));
  auto back = specs_from_json(json::parse(j.dump()));
  ASSERT_EQ(back.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(spec_to_json(back[i]), spec_to_json(specs[i]));

  OverlapMap phi;
  phi.set(3, 1, 0.4);
  phi.set(2, 5, pi);
  OverlapMap psi = overlaps_from_json(json::parse(overlaps_to_json(phi).dump()));
  EXPECT_EQ(psi(1, 3), 0.4);
  EXPECT_EQ(psi(5, 2), pi);
}

TEST(Io, RejectsWrongSchema) {
  json j = complex_to_json(gen_complex(ComplexKind::disc, 1));
  j["schema"] = "other";
  EXPECT_THROW(complex_from_json(j), Error);
  EXPECT_THROW(packing_from_json(complex_to_json(gen_complex(ComplexKind::disc, 1))), Error);
}

TEST(Svg, EmptyPacking) {
  std::string s = render_svg(Packing{});
  EXPECT_NE(s.find("<svg"), std::string::npos);
  EXPECT_NE(s.find("</svg>"), std::string::npos);
  EXPECT_EQ(count(s, "<circle"), 0);
}

TEST(Svg, HexFlowerCounts) {
  Complex k = gen_complex(ComplexKind::disc, 1);
  auto r = solve_label(k, {}, uniform_targets(k), BoundaryCondition::constant(k, 1.0), {}, Geometry::euclidean);
  Packing p = develop(k, r.label, {});
  SvgStyle st;
  st.edges = true;
  std::string s = render_svg(p, &k, st);
  EXPECT_EQ(count(s, "<circle"), 7);
  EXPECT_EQ(count(s, "<line"), 12);
  st.edges = false;
  EXPECT_EQ(count(render_svg(p, &k, st), "<line"), 0);
}

TEST(Svg, DeterministicWithRoles) {
  Complex k = gen_complex(ComplexKind::disc, 2);
  auto b = build_branched(k, {BranchSpec::shifted(1, 2, 5, 1.0, pi - 1.0)}, BoundaryCondition::horocycles(k),
                          Geometry::hyperbolic);
  SvgStyle st;
  st.edges = true;
  st.roles = roles_for(b.complex);
  std::string s1 = render_svg(b.packing, &b.complex, st), s2 = render_svg(b.packing, &b.complex, st);
  EXPECT_EQ(s1, s2);
  EXPECT_EQ(count(s1, "class=\"fall-guy\""), 1);
  EXPECT_EQ(count(s1, "class=\"chaperone-a\""), 1);
  EXPECT_EQ(count(s1, "class=\"chaperone-b\""), 1);
  EXPECT_GT(count(s1, "class=\"horizon\""), 0);
}

TEST(Svg, SpherePanels) {
  std::vector<SphereCircle> caps{{}, {{0, 0, 1}, 0.3}, {{0, 0, -1}, 0.3}, {{1, 0, 0}, 0.5}};
  std::string s = render_sphere_svg(caps);
  EXPECT_EQ(count(s, "class=\"front\""), 1);
  EXPECT_EQ(count(s, "class=\"back\""), 1);
  // Polar caps appear on one panel each, the equatorial cap on both.
  EXPECT_EQ(count(s, "data-v=\"1\""), 1);
  EXPECT_EQ(count(s, "data-v=\"2\""), 1);
  EXPECT_EQ(count(s, "data-v=\"3\""), 2);
}

TEST(Pipelines, ReportIsDeterministic) {
  Complex k = gen_complex(ComplexKind::disc, 3);
  BlaschkeOptions o;
  o.v1 = 2, o.v2 = 5;
  auto a = report_to_json(blaschke(k, o)).dump(), b = report_to_json(blaschke(k, o)).dump();
  EXPECT_EQ(a, b);
}

TEST(Pipelines, BlaschkeEmbedsConditionChecks) {
  Complex k = gen_complex(ComplexKind::disc, 3);
  BlaschkeOptions o;
  o.v1 = 2, o.v2 = 5;
  auto rep = blaschke(k, o);
  EXPECT_TRUE(rep.checks.at("star_star").get<bool>());
  EXPECT_EQ(rep.checks.at("star_violated"), 0);
  EXPECT_EQ(rep.windings, std::vector<int>{3});
}

TEST(Pipelines, BlaschkeGeneralizedModes) {
  Complex k = gen_complex(ComplexKind::disc, 4);
  auto dom = normalize_disc(develop(k, max_label(k).label, {}), deepest_vertex(k), k.boundary_cycles()[0][0]);
  for (BranchKind mode : {BranchKind::singular, BranchKind::shifted}) {
    BlaschkeOptions o;
    o.mode = mode;
    if (mode == BranchKind::singular) {
      auto inner_face = [&](VertexId v) {
        for (const Face& f : k.faces())
          if ((f[0] == v || f[1] == v || f[2] == v) && k.is_interior(f[0]) && k.is_interior(f[1]) && k.is_interior(f[2]))
            return f;
        return Face{};
      };
      o.p1 = interstice_center(dom, inner_face(8));
      o.p2 = interstice_center(dom, inner_face(14));
    } else {
      o.p1 = dom[8].ecenter + 0.3 * dom[8].eradius;
      o.p2 = dom[14].ecenter - cplx(0, 0.2 * dom[14].eradius);
    }
    auto rep = blaschke(k, o);
    EXPECT_EQ(rep.windings, std::vector<int>{3}) << to_string(mode);
    EXPECT_EQ(rep.holes.size(), 2u);
    EXPECT_EQ(rep.diagnostics.at("horizon_windings"), (std::vector<int>{2, 2}));
  }
}

TEST(Pipelines, AhlforsSymmetricAnnulus) {
  Complex k = gen_complex(ComplexKind::annulus, 5, 12);
  AhlforsOptions o;
  o.v1 = annulus_id(12, 2, 0), o.v2 = annulus_id(12, 2, 6);
  auto rep = ahlfors(k, o);
  EXPECT_LT(rep.holonomy["image_generator"]["displacement"].get<double>(), 1e-6);
  EXPECT_EQ(rep.windings, (std::vector<int>{1, 1}));
  const double modulus = rep.diagnostics.at("domain_modulus");
  EXPECT_GT(modulus, 0.0);
  EXPECT_LT(modulus, 1.0);
}

TEST(Pipelines, WeierstrassRejectsBadOrbitShape) {
  EXPECT_THROW(weierstrass(gen_complex(ComplexKind::torus, 6, 6)), Error);
  EXPECT_THROW(weierstrass(gen_complex(ComplexKind::disc, 3)), Error);
}
