#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>

#include "cpack/error.hpp"

namespace cpack {

using cplx = std::complex<double>;
using Vec3 = std::array<double, 3>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;
inline constexpr double infinity = std::numeric_limits<double>::infinity();

namespace tol {
inline constexpr double algebraic = 1e-12;
inline constexpr double round_trip = 1e-10;
inline constexpr double solver = 1e-8;
inline constexpr double holonomy = 1e-6;
}  // namespace tol

enum class Geometry { hyperbolic, euclidean, spherical };

inline std::string to_string(Geometry g) {
  switch (g) {
    case Geometry::hyperbolic: return "hyperbolic";
    case Geometry::euclidean: return "euclidean";
    case Geometry::spherical: return "spherical";
  }
  return "euclidean";
}

inline Geometry geometry_from_string(const std::string& s) {
  if (s == "hyperbolic") return Geometry::hyperbolic;
  if (s == "euclidean") return Geometry::euclidean;
  if (s == "spherical") return Geometry::spherical;
  fail(ErrorCode::invalid_input, "unknown geometry '" + s + "'");
}

namespace detail {

// Hyperbolic radius r through s = e^{-r}: s = 0 is a horocycle, s = 1 a point.
struct HypRadius {
  double r, s, x, u;  // u = 1 - s^2

  explicit HypRadius(double radius) : r(radius) {
    if (std::isinf(radius)) {
      s = 0.0;
      x = 0.0;
      u = 1.0;
    } else {
      s = std::exp(-radius);
      x = s * s;
      u = -std::expm1(-2.0 * radius);
    }
  }
  bool infinite() const { return std::isinf(r); }
};

inline double one_plus_cos(double phi) {
  double c = std::cos(phi / 2.0);
  return 2.0 * c * c;
}

// s_a - s_b without cancellation.
inline double s_diff(const HypRadius& a, const HypRadius& b) {
  if (a.infinite() || b.infinite()) return a.s - b.s;
  return -a.s * std::expm1(a.r - b.r);
}

// P - 4 s_a s_b and P + 4 s_a s_b, where P = (1+x_a)(1+x_b) + k(1-x_a)(1-x_b),
// k = cos(phi) and c2 = 1 + k.
inline double hyp_minus(const HypRadius& a, const HypRadius& b, double c2) {
  double d = s_diff(a, b);
  return 2.0 * d * d + c2 * a.u * b.u;
}
inline double hyp_plus(const HypRadius& a, const HypRadius& b, double c2) {
  double t = a.s + b.s;
  return 2.0 * t * t + c2 * a.u * b.u;
}
inline double hyp_p(const HypRadius& a, const HypRadius& b, double c2) {
  return hyp_minus(a, b, c2) + 4.0 * a.s * b.s;
}

inline void check_radius(double r) {
  if (std::isnan(r) || r < 0.0) fail(ErrorCode::negative_radius, "radius must be non-negative");
}

}  // namespace detail

/// Distance between centers of two circles with external overlap angle phi.
inline double edge_length(double r1, double r2, double phi, Geometry geom) {
  detail::check_radius(r1);
  detail::check_radius(r2);
  const double k = detail::one_plus_cos(phi);
  if (geom == Geometry::euclidean) {
    if (std::isinf(r1) || std::isinf(r2)) fail(ErrorCode::invalid_input, "euclidean radii must be finite");
    double d = r1 - r2;
    return std::sqrt(std::max(0.0, d * d + 2.0 * r1 * r2 * k));
  }
  if (geom != Geometry::hyperbolic) fail(ErrorCode::invalid_input, "edge_length: unsupported geometry");
  if (std::isinf(r1) && std::isinf(r2)) fail(ErrorCode::both_infinite, "both radii infinite");
  if (std::isinf(r1) || std::isinf(r2)) return infinity;
  detail::HypRadius a(r1), b(r2);
  double t2 = detail::hyp_minus(a, b, k) / detail::hyp_plus(a, b, k);  // tanh^2(l/2)
  return 2.0 * std::atanh(std::sqrt(std::max(0.0, t2)));
}

/// Euclidean distance from the origin of a disc-model point at hyperbolic
/// distance l = edge_length(r1, r2, phi) from the origin, i.e. tanh(l/2).
inline double hyperbolic_edge_tanh_half(double r1, double r2, double phi) {
  detail::HypRadius a(r1), b(r2);
  const double k = detail::one_plus_cos(phi);
  return std::sqrt(std::max(0.0, detail::hyp_minus(a, b, k) / detail::hyp_plus(a, b, k)));
}

/// Angle at the circle of radius r in a face whose other circles have radii
/// ra, rb; phi_a, phi_b are the overlaps of r with ra, rb and phi_ab the
/// overlap between ra and rb.
inline double face_angle(double r, double ra, double rb, double phi_a, double phi_b, double phi_ab, Geometry geom) {
  for (double x : {r, ra, rb}) detail::check_radius(x);
  int zeros = (r == 0.0) + (ra == 0.0) + (rb == 0.0);
  if (zeros >= 2) fail(ErrorCode::degenerate_triple, "two zero radii in one face");
  const double sum = phi_a + phi_b + phi_ab;
  if ((phi_a > pi / 2 || phi_b > pi / 2 || phi_ab > pi / 2) && sum > pi + 1e-12)
    fail(ErrorCode::violates_star_star, "deep overlaps summing above pi");

  // A point circle tangent to both others flattens the face exactly.
  if (zeros == 1 && phi_a == 0.0 && phi_b == 0.0 && phi_ab == 0.0) return r == 0.0 ? pi : 0.0;

  if (geom == Geometry::euclidean) {
    const double A = edge_length(r, ra, phi_a, geom);
    const double B = edge_length(r, rb, phi_b, geom);
    const double C = edge_length(ra, rb, phi_ab, geom);
    if (A <= 0.0 || B <= 0.0) fail(ErrorCode::degenerate_triple, "coincident centers");
    const double num = (C - A + B) * (C + A - B);
    const double den = (A + B + C) * (A + B - C);
    if (num <= 0.0) return 0.0;
    if (den <= 0.0) return pi;
    return 2.0 * std::atan(std::sqrt(num / den));
  }
  if (geom != Geometry::hyperbolic) fail(ErrorCode::invalid_input, "face_angle: unsupported geometry");
  if (std::isinf(r)) return 0.0;
  detail::HypRadius v(r), a(ra), b(rb);
  const double ka = detail::one_plus_cos(phi_a), kb = detail::one_plus_cos(phi_b), kab = detail::one_plus_cos(phi_ab);
  const double pa = detail::hyp_p(v, a, ka), pb = detail::hyp_p(v, b, kb);
  const double pab = detail::hyp_p(a, b, kab);
  const double num = pa * pb - 4.0 * v.x * pab;
  const double den2 = detail::hyp_minus(v, a, ka) * detail::hyp_plus(v, a, ka) * detail::hyp_minus(v, b, kb) *
                      detail::hyp_plus(v, b, kb);
  if (den2 <= 0.0)
    fail(ErrorCode::degenerate_triple, "coincident centers (radii " + std::to_string(r) + ", " + std::to_string(ra) + ", " +
                                           std::to_string(rb) + ")");
  double c = num / std::sqrt(den2);
  return std::acos(std::clamp(c, -1.0, 1.0));
}

inline double hyperbolic_distance(cplx z, cplx w) {
  double q = std::abs(z - w) / std::abs(1.0 - std::conj(z) * w);
  return 2.0 * std::atanh(std::min(q, 1.0));
}

// ---------------------------------------------------------------------------
// Mobius maps

enum class MobiusClass { identity, elliptic, parabolic, hyperbolic, loxodromic };

inline std::string to_string(MobiusClass c) {
  switch (c) {
    case MobiusClass::identity: return "identity";
    case MobiusClass::elliptic: return "elliptic";
    case MobiusClass::parabolic: return "parabolic";
    case MobiusClass::hyperbolic: return "hyperbolic";
    case MobiusClass::loxodromic: return "loxodromic";
  }
  return "identity";
}

/// z -> (a z + b) / (c z + d), defined up to scale.
struct Mobius {
  cplx a{1.0}, b{0.0}, c{0.0}, d{1.0};

  static Mobius identity() { return {}; }

  /// z -> rot (z - center) / (1 - conj(center) z); |rot| = 1, |center| < 1.
  static Mobius disc_automorphism(cplx center, cplx rot = 1.0) {
    return {rot, -rot * center, -std::conj(center), 1.0};
  }
  /// Hyperbolic translation of length t along the real diameter.
  static Mobius disc_translation(double t) {
    double tau = std::tanh(t / 2.0);
    return {1.0, tau, tau, 1.0};
  }

  /// Map sending z1, z2, z3 to 0, 1, infinity.
  static Mobius to_standard(cplx z1, cplx z2, cplx z3) {
    Mobius m{z2 - z3, -z1 * (z2 - z3), z2 - z1, -z3 * (z2 - z1)};
    if (std::abs(m.det()) == 0.0) fail(ErrorCode::singular_matrix, "points are not distinct");
    return m;
  }
  /// Unique map sending z_i to w_i.
  static Mobius from_points(const std::array<cplx, 3>& z, const std::array<cplx, 3>& w) {
    return to_standard(w[0], w[1], w[2]).inverse() * to_standard(z[0], z[1], z[2]);
  }

  cplx det() const { return a * d - b * c; }

  cplx operator()(cplx z) const {
    cplx den = c * z + d;
    if (std::abs(den) == 0.0) return {infinity, infinity};
    return (a * z + b) / den;
  }

  Mobius operator*(const Mobius& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }

  Mobius inverse() const {
    if (std::abs(det()) == 0.0) fail(ErrorCode::singular_matrix, "singular Mobius matrix");
    return {d, -b, -c, a};
  }

  /// Scaled to det = 1 with Re(trace) >= 0.
  Mobius normalized() const {
    cplx dt = det();
    if (std::abs(dt) == 0.0) fail(ErrorCode::singular_matrix, "singular Mobius matrix");
    cplx s = 1.0 / std::sqrt(dt);
    Mobius m{a * s, b * s, c * s, d * s};
    if ((m.a + m.d).real() < 0.0) m = {-m.a, -m.b, -m.c, -m.d};
    return m;
  }

  cplx trace() const {
    Mobius m = normalized();
    return m.a + m.d;
  }

  /// Frobenius distance of the normalized matrix from the identity.
  double deviation_from_identity() const {
    Mobius m = normalized();
    return std::sqrt(std::norm(m.a - 1.0) + std::norm(m.b) + std::norm(m.c) + std::norm(m.d - 1.0));
  }

  MobiusClass classify(double eps = 1e-9) const {
    if (deviation_from_identity() < eps) return MobiusClass::identity;
    cplx t = trace();
    if (std::abs(t.imag()) > eps) return MobiusClass::loxodromic;
    double tr = std::abs(t.real());
    if (std::abs(tr - 2.0) < eps) return MobiusClass::parabolic;
    return tr < 2.0 ? MobiusClass::elliptic : MobiusClass::hyperbolic;
  }

  /// Nearest exact disc automorphism (removes drift from fitted maps).
  Mobius as_disc_automorphism() const {
    cplx center = inverse()(0.0);
    cplx z0 = std::abs(center) > 1e-3 ? -0.5 * center / std::abs(center) : cplx(0.5);
    cplx rot = (*this)(z0) * (1.0 - std::conj(center) * z0) / (z0 - center);
    return disc_automorphism(center, rot / std::abs(rot));
  }
};

inline Mobius mobius_compose(const Mobius& f, const Mobius& g) { return f * g; }
inline cplx mobius_apply(const Mobius& m, cplx z) { return m(z); }
inline MobiusClass mobius_classify(const Mobius& m) { return m.classify(); }

/// Hyperbolic distance from base to m(base) in the disc.
inline double mobius_displacement(const Mobius& m, cplx base) {
  if (std::abs(base) >= 1.0) fail(ErrorCode::invalid_input, "base point must lie in the open disc");
  return hyperbolic_distance(base, m(base));
}

/// Translation length of a hyperbolic disc automorphism (0 for elliptic).
inline double translation_length(const Mobius& m) {
  double tr = std::abs(m.trace().real());
  return tr <= 2.0 ? 0.0 : 2.0 * std::acosh(tr / 2.0);
}

// ---------------------------------------------------------------------------
// Circles

/// A circle in the plane or disc. For hyperbolic circles `center`/`radius`
/// are hyperbolic (ideal point and +inf for horocycles) and `ecenter` /
/// `eradius` give the euclidean picture in the disc model. Euclidean circles
/// carry the same values in both pairs.
struct Circle {
  cplx center{0.0};
  double radius = 0.0;
  cplx ecenter{0.0};
  double eradius = 0.0;

  bool is_horocycle() const { return std::isinf(radius); }

  static Circle euclidean(cplx c, double r) { return {c, r, c, r}; }

  static Circle hyperbolic(cplx z, double r) {
    if (std::isinf(r)) fail(ErrorCode::invalid_input, "use Circle::horocycle for infinite radius");
    double s = std::tanh(r / 2.0);
    double z2 = std::norm(z);
    double den = 1.0 - s * s * z2;
    return {z, r, z * (1.0 - s * s) / den, s * (1.0 - z2) / den};
  }

  /// Horocycle at ideal point zeta with euclidean radius rho.
  static Circle horocycle(cplx zeta, double rho) {
    zeta /= std::abs(zeta);
    return {zeta, infinity, (1.0 - rho) * zeta, rho};
  }
};

/// Euclidean circle through three points.
inline Circle circumcircle(cplx p, cplx q, cplx r) {
  cplx b = q - p, c = r - p;
  double den = 2.0 * (b.real() * c.imag() - b.imag() * c.real());
  if (den == 0.0) fail(ErrorCode::degenerate_face, "collinear points");
  double b2 = std::norm(b), c2 = std::norm(c);
  cplx o(p.real() + (c.imag() * b2 - b.imag() * c2) / den, p.imag() + (b.real() * c2 - c.real() * b2) / den);
  return Circle::euclidean(o, std::abs(p - o));
}

/// Image of a hyperbolic circle under a disc automorphism.
inline Circle apply_hyperbolic(const Mobius& m, const Circle& c) {
  if (!c.is_horocycle()) return Circle::hyperbolic(m(c.center), c.radius);
  cplx zeta = m(c.center);
  zeta /= std::abs(zeta);
  cplx far = m((1.0 - 2.0 * c.eradius) * c.center);
  cplx q = far - zeta;
  double den = -2.0 * (q * std::conj(zeta)).real();
  return Circle::horocycle(zeta, std::norm(q) / den);
}

/// Image of a euclidean circle under a similarity z -> (a z + b)/d.
inline Circle apply_similarity(const Mobius& m, const Circle& c) {
  double scale = std::abs(m.a / m.d);
  return Circle::euclidean(m(c.center), c.radius * scale);
}

/// Error of an edge's realized overlap, scale-free: distance mismatch
/// between euclidean centers relative to the sum of euclidean radii.
inline double overlap_error(const Circle& p, const Circle& q, double phi) {
  double d = std::abs(p.ecenter - q.ecenter);
  double r1 = p.eradius, r2 = q.eradius;
  double dr = r1 - r2;
  double expect = std::sqrt(std::max(0.0, dr * dr + 2.0 * r1 * r2 * (1.0 + std::cos(phi))));
  return std::abs(d - expect) / std::max(r1 + r2, 1e-300);
}

/// Overlap angle measured between two euclidean circles.
inline double measured_overlap(const Circle& p, const Circle& q) {
  double d = std::abs(p.ecenter - q.ecenter);
  double r1 = p.eradius, r2 = q.eradius;
  double c = (d * d - r1 * r1 - r2 * r2) / (2.0 * r1 * r2);
  return std::acos(std::clamp(c, -1.0, 1.0));
}

namespace detail {

// Euclidean radius of a horocycle at an ideal point, meeting the circle of
// hyperbolic radius r centered at the origin with overlap phi.
inline double horocycle_radius_from_origin(double r, double phi) {
  double t = std::tanh(r / 2.0);
  return (1.0 - t * t) / (2.0 * (1.0 + t * std::cos(phi)));
}

}  // namespace detail

/// Circles realizing the given radii and overlaps (phi12, phi23, phi31) in
/// counterclockwise order. The first circle with finite radius is centered
/// at the origin and the next one lies on the positive real axis.
inline std::array<Circle, 3> realize_triple(const std::array<double, 3>& radii, const std::array<double, 3>& overlaps,
                                            Geometry geom) {
  for (double r : radii) detail::check_radius(r);
  int zeros = 0, infs = 0;
  for (double r : radii) {
    zeros += (r == 0.0);
    infs += std::isinf(r);
  }
  double sum = overlaps[0] + overlaps[1] + overlaps[2];
  for (double p : overlaps)
    if (p < 0.0 || p > pi) fail(ErrorCode::lemma_hypothesis_violated, "overlap outside [0, pi]");
  if (zeros >= 2) fail(ErrorCode::lemma_hypothesis_violated, "at most one radius may be zero");
  if (sum > pi + 1e-12 && (overlaps[0] > pi / 2 || overlaps[1] > pi / 2 || overlaps[2] > pi / 2))
    fail(ErrorCode::lemma_hypothesis_violated, "deep overlaps summing above pi");
  if (infs == 3) fail(ErrorCode::lemma_hypothesis_violated, "all three radii infinite");
  if (geom == Geometry::euclidean && infs > 0) fail(ErrorCode::lemma_hypothesis_violated, "euclidean radii must be finite");

  // Rotate so the anchor (index 0 after rotation) is finite.
  int shift = 0;
  while (std::isinf(radii[shift])) ++shift;
  auto R = [&](int i) { return radii[(i + shift) % 3]; };
  auto O = [&](int i) { return overlaps[(i + shift) % 3]; };  // O(i) overlaps circles i and i+1
  const double r0 = R(0), r1 = R(1), r2 = R(2);
  const double alpha = face_angle(r0, r1, r2, O(0), O(2), O(1), geom);
  const cplx dir = std::polar(1.0, alpha);
  std::array<Circle, 3> rot;
  if (geom == Geometry::euclidean) {
    rot[0] = Circle::euclidean(0.0, r0);
    rot[1] = Circle::euclidean(edge_length(r0, r1, O(0), geom), r1);
    rot[2] = Circle::euclidean(edge_length(r0, r2, O(2), geom) * dir, r2);
  } else {
    rot[0] = Circle::hyperbolic(0.0, r0);
    rot[1] = std::isinf(r1) ? Circle::horocycle(1.0, detail::horocycle_radius_from_origin(r0, O(0)))
                            : Circle::hyperbolic(hyperbolic_edge_tanh_half(r0, r1, O(0)), r1);
    rot[2] = std::isinf(r2) ? Circle::horocycle(dir, detail::horocycle_radius_from_origin(r0, O(2)))
                            : Circle::hyperbolic(hyperbolic_edge_tanh_half(r0, r2, O(2)) * dir, r2);
  }
  std::array<Circle, 3> out;
  for (int i = 0; i < 3; ++i) out[(i + shift) % 3] = rot[i];
  return out;
}

// ---------------------------------------------------------------------------
// Sphere

/// Spherical cap: unit center vector and angular radius in (0, pi).
struct SphereCircle {
  Vec3 center{0.0, 0.0, -1.0};
  double radius = 0.0;
};

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
inline double spherical_distance(const Vec3& a, const Vec3& b) {
  Vec3 c{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
  return std::atan2(norm(c), dot(a, b));
}

/// Inverse stereographic projection; the origin goes to the south pole and
/// the unit circle to the equator.
inline Vec3 stereographic_point(cplx z) {
  double n2 = std::norm(z);
  return {2.0 * z.real() / (n2 + 1.0), 2.0 * z.imag() / (n2 + 1.0), (n2 - 1.0) / (n2 + 1.0)};
}

/// Cap image of the closed euclidean disc |z - c| <= rho.
inline SphereCircle stereographic_circle(cplx c, double rho) {
  double c2 = std::norm(c);
  Vec3 n{c.real(), c.imag(), (c2 - rho * rho - 1.0) / 2.0};
  double h = (1.0 + c2 - rho * rho) / 2.0;
  double len = norm(n);
  for (double& x : n) x /= len;
  h /= len;
  return {n, std::acos(std::clamp(h, -1.0, 1.0))};
}

}  // namespace cpack
