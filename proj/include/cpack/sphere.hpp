#pragma once

#include <array>
#include <cmath>
#include <utility>
#include <vector>

#include "cpack/error.hpp"
#include "cpack/geometry.hpp"

namespace cpack {

/// Minkowski 4-vector (x, y, z, t) with <a, b> = a.xyz . b.xyz - a.t b.t.
using Vec4 = std::array<double, 4>;

inline double minkowski(const Vec4& a, const Vec4& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] - a[3] * b[3]; }

/// Unit spacelike vector whose orthogonal null cone cuts out the cap.
inline Vec4 cap_vector(const SphereCircle& c) {
  double s = std::sin(c.radius), k = std::cos(c.radius);
  return {c.center[0] / s, c.center[1] / s, c.center[2] / s, k / s};
}

inline SphereCircle cap_of(const Vec4& v) {
  Vec3 n{v[0], v[1], v[2]};
  double len = norm(n);
  if (len == 0.0) fail(ErrorCode::invalid_input, "not a spacelike cap vector");
  for (double& x : n) x /= len;
  return {n, std::atan2(1.0, v[3])};
}

/// Lorentz boost carrying the future timelike direction `u` to (0, 0, 0, 1).
struct Boost {
  Vec3 beta{0.0, 0.0, 0.0};
  double gamma = 1.0;

  static Boost to_rest(const Vec4& u) {
    double q = u[3] * u[3] - (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]);
    if (!(q > 0.0) || u[3] <= 0.0) fail(ErrorCode::invalid_input, "boost target must be future timelike");
    double s = std::sqrt(q);
    Boost b;
    b.gamma = u[3] / s;
    for (int i = 0; i < 3; ++i) b.beta[i] = u[i] / u[3];
    return b;
  }

  Vec4 operator()(const Vec4& v) const {
    double b2 = dot(beta, beta);
    double bx = beta[0] * v[0] + beta[1] * v[1] + beta[2] * v[2];
    Vec4 out;
    out[3] = gamma * (v[3] - bx);
    double k = b2 > 0.0 ? (gamma - 1.0) * bx / b2 - gamma * v[3] : -gamma * v[3];
    for (int i = 0; i < 3; ++i) out[i] = v[i] + k * beta[i];
    return out;
  }

  SphereCircle operator()(const SphereCircle& c) const { return cap_of((*this)(cap_vector(c))); }
};

/// Largest gap from pi between the centers of each pair.
inline double antipodal_residual(const std::vector<SphereCircle>& caps, const std::vector<std::pair<int, int>>& pairs) {
  double worst = 0.0;
  for (auto [a, b] : pairs) worst = std::max(worst, pi - spherical_distance(caps[a].center, caps[b].center));
  return worst;
}

struct AntipodalNormalization {
  Boost boost;
  std::vector<std::pair<int, int>> pairs;
  double residual = 0.0;
};

/// Boost that makes the two given pairs of caps antipodal when their
/// configuration allows it: each pair's summed cap vectors go to the time axis.
inline AntipodalNormalization antipodal_normalization(const std::array<SphereCircle, 4>& caps) {
  std::array<Vec4, 4> v;
  for (int i = 0; i < 4; ++i) v[i] = cap_vector(caps[i]);
  const std::array<std::array<int, 4>, 3> pairings{{{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}}};
  AntipodalNormalization best;
  best.residual = infinity;
  for (const auto& p : pairings) {
    Vec4 target{0.0, 0.0, 0.0, 0.0};
    bool ok = true;
    for (int h = 0; h < 2; ++h) {
      Vec4 s;
      for (int i = 0; i < 4; ++i) s[i] = v[p[2 * h]][i] + v[p[2 * h + 1]][i];
      double q = -minkowski(s, s);
      if (!(q > 0.0)) {
        ok = false;
        break;
      }
      double sg = s[3] > 0.0 ? 1.0 : -1.0;
      for (int i = 0; i < 4; ++i) target[i] += sg * s[i] / std::sqrt(q);
    }
    if (!ok) continue;
    Boost b = Boost::to_rest(target);
    std::vector<SphereCircle> moved;
    for (const auto& c : caps) moved.push_back(b(c));
    std::vector<std::pair<int, int>> pr{{p[0], p[1]}, {p[2], p[3]}};
    double r = antipodal_residual(moved, pr);
    if (r < best.residual) best = {b, pr, r};
  }
  if (std::isinf(best.residual)) fail(ErrorCode::invalid_input, "caps overlap; no antipodal pairing exists");
  return best;
}

}  // namespace cpack
