#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <vector>

#include "cpack/complex.hpp"

namespace cpack {

/// Hexagonal disc with `rings` rings around vertex 1; ids grow ring by ring.
inline Complex hex_disc(int rings) {
  if (rings < 1) fail(ErrorCode::invalid_input, "hex disc needs at least one ring");
  struct Cell {
    int q, r, ring;
    double angle;
  };
  std::vector<Cell> cells;
  for (int q = -rings; q <= rings; ++q)
    for (int r = -rings; r <= rings; ++r) {
      int d = std::max({std::abs(q), std::abs(r), std::abs(q + r)});
      if (d > rings) continue;
      double x = q + 0.5 * r, y = r * std::sqrt(3.0) / 2.0;
      double ang = std::atan2(y, x);
      if (ang < -1e-12) ang += 2.0 * std::numbers::pi;
      cells.push_back({q, r, d, d == 0 ? 0.0 : ang});
    }
  std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
    return a.ring != b.ring ? a.ring < b.ring : a.angle < b.angle;
  });
  std::map<std::pair<int, int>, VertexId> id;
  for (std::size_t i = 0; i < cells.size(); ++i) id[{cells[i].q, cells[i].r}] = VertexId(i + 1);
  auto get = [&](int q, int r) -> VertexId {
    auto it = id.find({q, r});
    return it == id.end() ? 0 : it->second;
  };
  std::vector<Face> faces;
  for (auto& c : cells) {
    VertexId p = get(c.q, c.r), a = get(c.q + 1, c.r), b = get(c.q, c.r + 1), d = get(c.q - 1, c.r + 1);
    if (a && b) faces.push_back({p, a, b});
    if (b && d) faces.push_back({p, b, d});
  }
  return Complex(std::move(faces), {{"generator", "disc"}, {"rings", rings}});
}

/// Annular strip of `rows` rows by `cols` columns, rows shifted by half a cell.
/// Vertex (k, j) has id 1 + k*cols + j; row 0 is the inner boundary.
inline Complex hex_annulus(int rows, int cols) {
  if (rows < 2 || cols < 3) fail(ErrorCode::invalid_input, "annulus needs rows >= 2 and cols >= 3");
  auto id = [&](int k, int j) { return VertexId(1 + k * cols + ((j % cols) + cols) % cols); };
  std::vector<Face> faces;
  for (int k = 0; k + 1 < rows; ++k)
    for (int j = 0; j < cols; ++j) {
      faces.push_back({id(k, j), id(k, j + 1), id(k + 1, j)});
      faces.push_back({id(k, j + 1), id(k + 1, j + 1), id(k + 1, j)});
    }
  return Complex(std::move(faces), {{"generator", "annulus"}, {"rows", rows}, {"cols", cols}});
}

inline VertexId annulus_id(int cols, int k, int j) { return VertexId(1 + k * cols + ((j % cols) + cols) % cols); }

/// Mirror of the annulus swapping the two boundary rows; needs odd `rows`.
inline std::vector<VertexId> annulus_reflection(int rows, int cols) {
  if (rows % 2 == 0) fail(ErrorCode::invalid_input, "reflection needs an odd row count");
  std::vector<VertexId> map(rows * cols + 1, 0);
  const int half = (rows - 1) / 2;
  for (int k = 0; k < rows; ++k)
    for (int j = 0; j < cols; ++j) map[annulus_id(cols, k, j)] = annulus_id(cols, rows - 1 - k, j + k - half);
  return map;
}

/// Regular 6-valent torus on an n-by-m grid; vertex (i, j) has id 1 + i + n*j.
/// Row m is glued back to row 0 shifted by m/2 columns, so even m gives a
/// rectangular torus with two mirror symmetries.
inline VertexId torus_id(int n, int m, int i, int j) {
  const int q = j >= 0 ? j / m : -((-j + m - 1) / m);
  j -= q * m;
  i += q * (m / 2);
  return VertexId(1 + ((i % n) + n) % n + n * j);
}

inline Complex hex_torus(int n, int m) {
  if (n < 3 || m < 3) fail(ErrorCode::invalid_input, "torus needs n, m >= 3");
  auto id = [&](int i, int j) { return torus_id(n, m, i, j); };
  std::vector<Face> faces;
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < n; ++i) {
      faces.push_back({id(i, j), id(i + 1, j), id(i, j + 1)});
      faces.push_back({id(i, j), id(i, j + 1), id(i - 1, j + 1)});
    }
  return Complex(std::move(faces), {{"generator", "torus"}, {"n", n}, {"m", m}});
}

/// Closed vertex paths along a row and straight up a column of the torus.
inline std::vector<VertexId> torus_row(int n, int m, int j) {
  std::vector<VertexId> out;
  for (int i = 0; i < n; ++i) out.push_back(torus_id(n, m, i, j));
  return out;
}

inline std::vector<VertexId> torus_column(int n, int m, int i) {
  if (m % 2) fail(ErrorCode::invalid_input, "straight columns need an even row count");
  std::vector<VertexId> out;
  for (int j = 0; j < m; ++j) out.push_back(torus_id(n, m, i - j / 2, j));
  return out;
}

/// Closed flower: vertex 1 with `petals` boundary neighbours.
inline Complex flower_complex(int petals) {
  if (petals < 3) fail(ErrorCode::invalid_input, "flower needs at least three petals");
  std::vector<Face> faces;
  for (int i = 0; i < petals; ++i) faces.push_back({1, VertexId(2 + i), VertexId(2 + (i + 1) % petals)});
  return Complex(std::move(faces), {{"generator", "flower"}, {"petals", petals}});
}

}  // namespace cpack
