#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <random>

#include "cpack/geometry.hpp"

namespace oracle {

using cpack::cplx;

// Hyperbolic radius of a disc-model circle read off its euclidean picture.
inline double hyperbolic_radius(const cpack::Circle& c) {
  double m = std::abs(c.ecenter);
  return std::atanh(m + c.eradius) - std::atanh(m - c.eradius);
}

// Center distance of two euclidean circles overlapping at angle phi,
// compared with the measured one, relative to the radius sum.
inline double overlap_residual(cplx c1, double r1, cplx c2, double r2, double phi) {
  double expect = std::sqrt(r1 * r1 + r2 * r2 + 2.0 * r1 * r2 * std::cos(phi));
  return std::abs(std::abs(c1 - c2) - expect) / (r1 + r2);
}

// Distance between centers of overlapping hyperbolic circles, law of cosines.
inline double hyperbolic_edge(double r1, double r2, double phi) {
  return std::acosh(std::cosh(r1) * std::cosh(r2) + std::cos(phi) * std::sinh(r1) * std::sinh(r2));
}

struct Triple {
  std::array<double, 3> radii;
  std::array<double, 3> overlaps;
};

// Random realizable data: either every overlap in [0, pi/2] or a total <= pi.
inline Triple random_triple(std::mt19937_64& rng, cpack::Geometry geom, bool allow_infinite = true,
                            bool allow_zero = false) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Triple t;
  for (double& r : t.radii) r = std::exp(-3.0 + 4.0 * u(rng));
  if (geom == cpack::Geometry::hyperbolic && allow_infinite) {
    int infs = int(u(rng) * 3.0);
    for (int i = 0; i < infs; ++i) t.radii[(i + int(u(rng) * 3)) % 3] = cpack::infinity;
  }
  if (allow_zero) {
    int i = int(u(rng) * 3.0);
    if (!std::isinf(t.radii[i])) t.radii[i] = 0.0;
  }
  if (u(rng) < 0.5) {
    for (double& p : t.overlaps) p = u(rng) * cpack::pi / 2.0;
  } else {
    std::array<double, 3> w{u(rng), u(rng), u(rng)};
    double s = w[0] + w[1] + w[2], total = u(rng) * cpack::pi;
    for (int i = 0; i < 3; ++i) t.overlaps[i] = w[i] / s * total;
  }
  return t;
}

}  // namespace oracle
