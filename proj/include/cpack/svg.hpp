#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "cpack/complex.hpp"
#include "cpack/geometry.hpp"
#include "cpack/layout.hpp"
#include "cpack/sphere.hpp"

namespace cpack {

enum class CircleRole { plain, branch, chaperone_a, chaperone_b, fall_guy, horizon };

struct SvgStyle {
  double size = 600.0;
  bool edges = false;
  bool disc_outline = false;  // unit circle for hyperbolic packings
  std::map<VertexId, CircleRole> roles;
};

/// Roles for branch vertices and every hole recorded on `k`.
inline std::map<VertexId, CircleRole> roles_for(const Complex& k, const std::vector<VertexId>& branch = {}) {
  std::map<VertexId, CircleRole> out;
  for (const auto& h : k.holes())
    for (VertexId v : h.horizon) out[v] = CircleRole::horizon;
  for (VertexId v : branch) out[v] = CircleRole::branch;
  for (const auto& h : k.holes()) {
    if (h.chaperones.size() > 0) out[h.chaperones[0]] = CircleRole::chaperone_a;
    if (h.chaperones.size() > 1) out[h.chaperones[1]] = CircleRole::chaperone_b;
    if (h.fall_guy) out[h.fall_guy] = CircleRole::fall_guy;
  }
  return out;
}

namespace detail {

inline std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  std::string s = buf;
  if (s == "-0.000000") s = "0.000000";
  return s;
}

inline const char* stroke_of(CircleRole r) {
  switch (r) {
    case CircleRole::branch: return "#d62728";
    case CircleRole::chaperone_a: return "#2ca02c";
    case CircleRole::chaperone_b: return "#1f77b4";
    case CircleRole::fall_guy: return "#000000";
    case CircleRole::horizon: return "#ff7f0e";
    default: return "#555555";
  }
}

inline const char* fill_of(CircleRole r) {
  switch (r) {
    case CircleRole::branch: return "#f4b6b6";
    case CircleRole::chaperone_a: return "#b9e3b9";
    case CircleRole::chaperone_b: return "#b5d3ec";
    case CircleRole::fall_guy: return "#000000";
    case CircleRole::horizon: return "#ffe0b3";
    default: return "none";
  }
}

inline const char* class_of(CircleRole r) {
  switch (r) {
    case CircleRole::branch: return "branch";
    case CircleRole::chaperone_a: return "chaperone-a";
    case CircleRole::chaperone_b: return "chaperone-b";
    case CircleRole::fall_guy: return "fall-guy";
    case CircleRole::horizon: return "horizon";
    default: return "plain";
  }
}

inline CircleRole role(const SvgStyle& st, VertexId v) {
  auto it = st.roles.find(v);
  return it == st.roles.end() ? CircleRole::plain : it->second;
}

inline std::string svg_open(double w, double h, double x0, double y0, double vw, double vh) {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
         fmt(w) + "\" height=\"" + fmt(h) + "\" viewBox=\"" + fmt(x0) + " " + fmt(y0) + " " + fmt(vw) + " " + fmt(vh) +
         "\">\n";
}

}  // namespace detail

/// Draws the euclidean shadows of the circles, y axis pointing up.
/// Edges are drawn only between circles that actually meet, which skips seams of periodic layouts.
inline std::string render_svg(const Packing& p, const Complex* k = nullptr, const SvgStyle& st = {}) {
  using detail::fmt;
  std::vector<VertexId> shown;
  double x0 = infinity, x1 = -infinity, y0 = infinity, y1 = -infinity;
  for (VertexId v = 1; v <= p.vertex_count(); ++v) {
    const Circle& c = p[v];
    if (!std::isfinite(c.eradius) || !std::isfinite(c.ecenter.real()) || !std::isfinite(c.ecenter.imag())) continue;
    shown.push_back(v);
    x0 = std::min(x0, c.ecenter.real() - c.eradius);
    x1 = std::max(x1, c.ecenter.real() + c.eradius);
    y0 = std::min(y0, c.ecenter.imag() - c.eradius);
    y1 = std::max(y1, c.ecenter.imag() + c.eradius);
  }
  if (st.disc_outline && p.geometry == Geometry::hyperbolic) {
    x0 = std::min(x0, -1.0), x1 = std::max(x1, 1.0), y0 = std::min(y0, -1.0), y1 = std::max(y1, 1.0);
  }
  if (shown.empty() && !(st.disc_outline && p.geometry == Geometry::hyperbolic))
    return detail::svg_open(st.size, st.size, 0.0, 0.0, 1.0, 1.0) + "</svg>\n";

  const double span = std::max({x1 - x0, y1 - y0, 1e-12});
  const double pad = 0.02 * span;
  const double stroke = span / st.size;
  std::string out = detail::svg_open(st.size, st.size, x0 - pad, -(y1 + pad), span + 2 * pad, span + 2 * pad);
  out += "<g transform=\"scale(1,-1)\" stroke-width=\"" + fmt(stroke) + "\">\n";
  if (st.disc_outline && p.geometry == Geometry::hyperbolic)
    out += "<path class=\"disc\" d=\"M 1 0 A 1 1 0 1 1 -1 0 A 1 1 0 1 1 1 0 Z\" fill=\"none\" stroke=\"#999999\"/>\n";
  for (VertexId v : shown) {
    const Circle& c = p[v];
    CircleRole r = detail::role(st, v);
    out += "<circle class=\"" + std::string(detail::class_of(r)) + "\" data-v=\"" + std::to_string(v) + "\" cx=\"" +
           fmt(c.ecenter.real()) + "\" cy=\"" + fmt(c.ecenter.imag()) + "\" r=\"" + fmt(c.eradius) + "\" fill=\"" +
           detail::fill_of(r) + "\" stroke=\"" + detail::stroke_of(r) + "\"";
    if (r == CircleRole::horizon) out += " stroke-width=\"" + fmt(3 * stroke) + "\"";
    out += "/>\n";
  }
  if (st.edges && k) {
    for (const Edge& e : k->edges()) {
      if (e.b > p.vertex_count()) continue;
      const Circle &a = p[e.a], &b = p[e.b];
      if (!std::isfinite(a.eradius) || !std::isfinite(b.eradius)) continue;
      if (std::abs(a.ecenter - b.ecenter) > (a.eradius + b.eradius) * (1.0 + 1e-3) + 1e-9) continue;
      out += "<line class=\"edge\" x1=\"" + fmt(a.ecenter.real()) + "\" y1=\"" + fmt(a.ecenter.imag()) + "\" x2=\"" +
             fmt(b.ecenter.real()) + "\" y2=\"" + fmt(b.ecenter.imag()) + "\" stroke=\"#888888\"/>\n";
    }
  }
  out += "</g>\n</svg>\n";
  return out;
}

/// Two orthographic panels of the sphere: front (z >= 0) on the left, back on the right seen from behind.
inline std::string render_sphere_svg(const std::vector<SphereCircle>& caps, const SvgStyle& st = {}) {
  using detail::fmt;
  std::string out = detail::svg_open(2 * st.size, st.size, -1.05, -1.05, 4.3, 2.1);
  const double stroke = 2.1 / st.size;
  out += "<g stroke-width=\"" + fmt(stroke) + "\" fill=\"none\">\n";
  for (int side = 0; side < 2; ++side) {
    const double shift = side == 0 ? 0.0 : 2.2;
    out += "<g class=\"" + std::string(side == 0 ? "front" : "back") + "\" transform=\"translate(" + fmt(shift) +
           ",0) scale(1,-1)\">\n";
    out += "<path class=\"limb\" d=\"M 1 0 A 1 1 0 1 1 -1 0 A 1 1 0 1 1 1 0 Z\" stroke=\"#999999\"/>\n";
    for (std::size_t v = 1; v < caps.size(); ++v) {
      const auto& c = caps[v];
      Vec3 n = c.center;
      // Orthonormal frame (n, e1, e2) for the boundary circle.
      Vec3 t = std::abs(n[2]) < 0.9 ? Vec3{0.0, 0.0, 1.0} : Vec3{1.0, 0.0, 0.0};
      Vec3 e1 = cross(n, t);
      double l1 = norm(e1);
      for (double& x : e1) x /= l1;
      Vec3 e2 = cross(n, e1);
      const double cr = std::cos(c.radius), sr = std::sin(c.radius);
      const int samples = 96;
      std::string d;
      bool pen = false;
      for (int i = 0; i <= samples; ++i) {
        double a = 2.0 * pi * i / samples;
        Vec3 q;
        for (int j = 0; j < 3; ++j) q[j] = cr * n[j] + sr * (std::cos(a) * e1[j] + std::sin(a) * e2[j]);
        bool visible = side == 0 ? q[2] >= 0.0 : q[2] <= 0.0;
        if (!visible) {
          pen = false;
          continue;
        }
        double x = side == 0 ? q[0] : -q[0];
        d += (pen ? " L " : " M ") + fmt(x) + " " + fmt(q[1]);
        pen = true;
      }
      if (d.empty()) continue;
      CircleRole r = detail::role(st, static_cast<VertexId>(v));
      out += "<path class=\"" + std::string(detail::class_of(r)) + "\" data-v=\"" + std::to_string(v) + "\" d=\"" +
             d.substr(1) + "\" stroke=\"" + detail::stroke_of(r) + "\"/>\n";
    }
    out += "</g>\n";
  }
  out += "</g>\n</svg>\n";
  return out;
}

}  // namespace cpack
