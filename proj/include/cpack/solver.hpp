#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/tools/toms748_solve.hpp>

#include "cpack/complex.hpp"
#include "cpack/geometry.hpp"

namespace cpack {

/// Per-edge overlap angles; absent edges are tangencies.
class OverlapMap {
 public:
  double operator()(VertexId u, VertexId v) const {
    auto it = phi_.find(Edge(u, v).key());
    return it == phi_.end() ? 0.0 : it->second;
  }
  void set(VertexId u, VertexId v, double phi) {
    if (phi < 0.0 || phi > pi + 1e-15) fail(ErrorCode::invalid_input, "overlap outside [0, pi]");
    phi_[Edge(u, v).key()] = std::min(phi, pi);
  }
  bool empty() const { return phi_.empty(); }
  std::vector<std::pair<Edge, double>> entries() const {
    std::vector<std::pair<Edge, double>> out;
    for (auto& [k, p] : phi_) out.push_back({Edge(VertexId(k >> 32), VertexId(k & 0xffffffffu)), p});
    std::sort(out.begin(), out.end(), [](auto& x, auto& y) { return x.first < y.first; });
    return out;
  }

 private:
  std::unordered_map<std::uint64_t, double> phi_;
};

/// Target angle sums, indexed by vertex (1-based). Boundary entries unused.
using TargetAngles = std::vector<double>;

inline TargetAngles uniform_targets(const Complex& k, double value = two_pi) {
  TargetAngles a(k.vertex_count() + 1, 0.0);
  for (VertexId v : k.interior_vertices()) a[v] = value;
  return a;
}

/// Prescribed boundary radii (+inf marks a horocycle), indexed by vertex.
struct BoundaryCondition {
  std::vector<double> radius;

  static BoundaryCondition horocycles(const Complex& k) {
    BoundaryCondition bc;
    bc.radius.assign(k.vertex_count() + 1, 0.0);
    for (VertexId v : k.boundary_vertices()) bc.radius[v] = infinity;
    return bc;
  }
  static BoundaryCondition constant(const Complex& k, double r) {
    BoundaryCondition bc;
    bc.radius.assign(k.vertex_count() + 1, 0.0);
    for (VertexId v : k.boundary_vertices()) bc.radius[v] = r;
    return bc;
  }
};

using PinnedZeros = std::set<VertexId>;

struct Label {
  Geometry geometry = Geometry::hyperbolic;
  std::vector<double> radius;  // 1-based

  double operator[](VertexId v) const { return radius.at(v); }
  double& operator[](VertexId v) { return radius.at(v); }
  int vertex_count() const { return static_cast<int>(radius.size()) - 1; }
};

inline double angle_sum(const Complex& k, const Label& r, const OverlapMap& phi, VertexId v) {
  const Flower& fl = k.flower(v);
  const auto& p = fl.petals;
  double sum = 0.0;
  for (std::size_t i = 0; i < fl.face_count(); ++i) {
    VertexId a = p[i], b = p[(i + 1) % p.size()];
    sum += face_angle(r[v], r[a], r[b], phi(v, a), phi(v, b), phi(a, b), r.geometry);
  }
  return sum;
}

// ---------------------------------------------------------------------------
// Conditions (star) and (star-star)

enum class StarResult { strict, equality, violated };

inline std::string to_string(StarResult s) {
  switch (s) {
    case StarResult::strict: return "strict";
    case StarResult::equality: return "equality";
    case StarResult::violated: return "violated";
  }
  return "violated";
}

/// Loop inequality for a closed vertex path `loop` enclosing the vertex set E.
inline StarResult check_star(const Complex& k, const OverlapMap& phi, const TargetAngles& a,
                             const std::vector<VertexId>& e, const std::vector<VertexId>& loop, double eps = 1e-9) {
  if (loop.size() < 3) fail(ErrorCode::loop_not_separating, "loop too short");
  std::set<VertexId> on_loop(loop.begin(), loop.end());
  if (on_loop.size() != loop.size()) fail(ErrorCode::loop_not_separating, "loop is not simple");
  double lhs = 0.0;
  for (std::size_t i = 0; i < loop.size(); ++i) {
    VertexId u = loop[i], w = loop[(i + 1) % loop.size()];
    if (!k.has_edge(u, w)) fail(ErrorCode::loop_not_separating, "loop has a non-edge");
    lhs += pi - phi(u, w);
  }
  if (e.empty()) fail(ErrorCode::loop_not_separating, "empty enclosed set");
  // Everything reachable from E without crossing the loop must be interior.
  std::set<VertexId> seen(e.begin(), e.end());
  std::vector<VertexId> stack(e.begin(), e.end());
  while (!stack.empty()) {
    VertexId v = stack.back();
    stack.pop_back();
    if (on_loop.count(v) || k.is_boundary(v)) fail(ErrorCode::loop_not_separating, "loop does not enclose E");
    for (VertexId w : k.flower(v).petals)
      if (!on_loop.count(w) && seen.insert(w).second) stack.push_back(w);
  }
  double rhs = two_pi;
  for (VertexId v : e) rhs += a.at(v) - two_pi;
  if (lhs > rhs + eps) return StarResult::strict;
  if (lhs >= rhs - eps) return StarResult::equality;
  return StarResult::violated;
}

struct StarCheck {
  std::vector<VertexId> enclosed;
  std::vector<VertexId> loop;
  StarResult result = StarResult::strict;
};

/// Closed loop around the union of the stars of adjacent interior u, v.
inline std::vector<VertexId> edge_star_loop(const Complex& k, VertexId u, VertexId v) {
  auto rotate_from = [&](VertexId c, VertexId start) {
    const auto& p = k.flower(c).petals;
    auto it = std::find(p.begin(), p.end(), start);
    std::vector<VertexId> out(it, p.end());
    out.insert(out.end(), p.begin(), it);
    return out;
  };
  auto pu = rotate_from(u, v), pv = rotate_from(v, u);
  std::vector<VertexId> loop(pu.begin() + 1, pu.end());
  for (std::size_t i = 2; i + 1 < pv.size(); ++i) loop.push_back(pv[i]);
  return loop;
}

/// Checks every flower loop around vertices with A > 2pi or a pinned zero,
/// plus loops around adjacent pairs of such vertices.
inline std::vector<StarCheck> check_star_all(const Complex& k, const OverlapMap& phi, const TargetAngles& a,
                                             const PinnedZeros& pins = {}) {
  std::vector<StarCheck> out;
  std::vector<VertexId> special;
  for (VertexId v : k.interior_vertices())
    if (a.at(v) > two_pi + 1e-9 || pins.count(v)) special.push_back(v);
  for (VertexId v : special) {
    StarCheck c;
    c.enclosed = {v};
    c.loop = k.flower(v).petals;
    c.result = check_star(k, phi, a, c.enclosed, c.loop);
    out.push_back(std::move(c));
  }
  for (std::size_t i = 0; i < special.size(); ++i)
    for (std::size_t j = i + 1; j < special.size(); ++j) {
      VertexId u = special[i], v = special[j];
      if (!k.has_edge(u, v)) continue;
      StarCheck c;
      c.enclosed = {u, v};
      c.loop = edge_star_loop(k, u, v);
      try {
        c.result = check_star(k, phi, a, c.enclosed, c.loop);
      } catch (const Error&) {
        continue;
      }
      out.push_back(std::move(c));
    }
  return out;
}

struct StarStarReport {
  bool pass = true;
  std::vector<int> offending_faces;
};

inline StarStarReport check_star_star(const Complex& k, const OverlapMap& phi, double eps = 1e-12) {
  StarStarReport rep;
  for (int f = 0; f < k.face_count(); ++f) {
    const Face& t = k.face(f);
    double s = phi(t[0], t[1]) + phi(t[1], t[2]) + phi(t[2], t[0]);
    if (s > pi + eps) {
      rep.pass = false;
      rep.offending_faces.push_back(f);
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Label solver

struct SolverOptions {
  double tol = tol::solver;
  double polish = 1e-2;  // sweeps continue until residual <= tol * polish
  int max_iters = 50000;
  double seed = 1.0;  // initial value for free labels
  bool jacobi = false;
  bool record_trace = false;
  bool validate = true;
  bool newton = true;  // finish with Newton steps once sweeps stall
  const Label* warm_start = nullptr;
};

struct SolveReport {
  Label label;
  double residual = 0.0;
  int iterations = 0;
  std::vector<std::pair<int, double>> trace;
};

namespace detail {

inline std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

struct FanFace {
  VertexId a, b;
  double phi_a, phi_b, phi_ab;
};

class LabelSolver {
 public:
  LabelSolver(const Complex& k, const OverlapMap& phi, const TargetAngles& targets, Geometry geom)
      : k_(k), geom_(geom), targets_(targets), fans_(k.vertex_count() + 1) {
    for (VertexId v = 1; v <= k.vertex_count(); ++v) {
      const Flower& fl = k.flower(v);
      for (std::size_t i = 0; i < fl.face_count(); ++i) {
        VertexId a = fl.petals[i], b = fl.petals[(i + 1) % fl.size()];
        fans_[v].push_back({a, b, phi(v, a), phi(v, b), phi(a, b)});
      }
    }
  }

  double theta(const std::vector<double>& r, VertexId v, double rv) const {
    double s = 0.0;
    for (const FanFace& f : fans_[v]) s += face_angle(rv, r[f.a], r[f.b], f.phi_a, f.phi_b, f.phi_ab, geom_);
    return s;
  }

  // Radius at v meeting its target with neighbors held fixed.
  double local_solve(const std::vector<double>& r, VertexId v, double tol) const {
    const double target = targets_[v];
    constexpr double tiny = 1e-12;
    boost::math::tools::eps_tolerance<double> stop(52);
    std::uintmax_t iters = 200;
    if (geom_ == Geometry::hyperbolic) {
      // theta increases in x = e^{-2r}; x = 0 is a horocycle (theta = 0).
      auto f = [&](double x) {
        double rv = x <= 0.0 ? infinity : -0.5 * std::log(x);
        return theta(r, v, rv) - target;
      };
      const double xmax = std::exp(-2.0 * tiny);
      if (f(xmax) < 0.0) throw_near_zero(v);
      double x0 = std::exp(-2.0 * r[v]);
      double lo = 0.0, hi = xmax, flo = -target, fhi = f(xmax);
      if (x0 > 0.0 && x0 < xmax) {
        double f0 = f(x0);
        if (std::abs(f0) < tol * 1e-3) return r[v];
        if (f0 < 0.0) {
          lo = x0;
          flo = f0;
        } else {
          hi = x0;
          fhi = f0;
        }
      }
      auto res = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, stop, iters);
      double x = 0.5 * (res.first + res.second);
      double rv = -0.5 * std::log(x);
      if (rv < 1e-9) throw_near_zero(v);
      return rv;
    }
    // Euclidean: theta decreases in r; solve in log r.
    double scale = 0.0;
    for (VertexId w : k_.flower(v).petals) scale = std::max(scale, r[w]);
    if (scale <= 0.0) scale = 1.0;
    auto f = [&](double y) { return target - theta(r, v, std::exp(y)); };
    double lo = std::log(scale * 1e-12), hi = std::log(scale * 1e12);
    double flo = f(lo), fhi = f(hi);
    if (flo > 0.0) throw_near_zero(v);
    if (fhi < 0.0) fail(ErrorCode::non_convergence, "target angle too small at vertex " + std::to_string(v));
    double y0 = std::log(r[v]);
    if (y0 > lo && y0 < hi) {
      double f0 = f(y0);
      if (std::abs(f0) < tol * 1e-3) return r[v];
      if (f0 < 0.0) {
        lo = y0;
        flo = f0;
      } else {
        hi = y0;
        fhi = f0;
      }
    }
    auto res = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, stop, iters);
    double rv = std::exp(0.5 * (res.first + res.second));
    if (rv < 1e-9 * scale) throw_near_zero(v);
    return rv;
  }

 private:
  [[noreturn]] void throw_near_zero(VertexId v) const {
    fail(ErrorCode::star_violation,
         "label at vertex " + std::to_string(v) + " driven to zero; condition (star) has equality at an unpinned vertex");
  }

  const Complex& k_;
  Geometry geom_;
  const TargetAngles& targets_;
  std::vector<std::vector<FanFace>> fans_;
};

}  // namespace detail

/// Validates the loop conditions a solve relies on; throws on failure.
inline void validate_conditions(const Complex& k, const OverlapMap& phi, const TargetAngles& a, const PinnedZeros& pins) {
  auto ss = check_star_star(k, phi);
  if (!ss.pass)
    fail(ErrorCode::star_violation, "condition (star-star) fails on " + std::to_string(ss.offending_faces.size()) + " faces");
  for (VertexId p : pins) {
    if (k.is_boundary(p)) fail(ErrorCode::inconsistent_pins, "pinned vertex on the boundary");
    for (VertexId w : k.flower(p).petals)
      if (pins.count(w)) fail(ErrorCode::inconsistent_pins, "pinned vertices are adjacent");
  }
  for (const StarCheck& c : check_star_all(k, phi, a, pins)) {
    if (c.result == StarResult::violated) fail(ErrorCode::star_violation, "condition (star) violated");
    if (c.enclosed.size() == 1) {
      bool pinned = pins.count(c.enclosed[0]) > 0;
      if (pinned && c.result != StarResult::equality)
        fail(ErrorCode::inconsistent_pins, "pinned vertex " + std::to_string(c.enclosed[0]) + " has strict (star)");
      if (!pinned && c.result == StarResult::equality)
        fail(ErrorCode::star_violation, "equality in (star) at unpinned vertex " + std::to_string(c.enclosed[0]));
    }
  }
}

/// Perron-style label computation by cyclic per-vertex root finds.
inline SolveReport solve_label(const Complex& k, const OverlapMap& phi, const TargetAngles& a,
                               const BoundaryCondition& bc, const PinnedZeros& pins, Geometry geom,
                               const SolverOptions& opt = {}) {
  if (geom == Geometry::spherical) fail(ErrorCode::invalid_input, "no spherical solver");
  if (opt.validate) validate_conditions(k, phi, a, pins);
  const int n = k.vertex_count();
  // Slightly uneven seeds keep circles joined by overlap-pi edges apart.
  auto seed_of = [&](VertexId v) {
    double frac = std::fmod(v * 0.6180339887498949, 1.0);
    return opt.seed * (1.0 + 0.01 * frac);
  };
  Label label{geom, std::vector<double>(n + 1, 0.0)};
  for (VertexId v = 1; v <= n; ++v) label[v] = seed_of(v);
  if (opt.warm_start) label.radius = opt.warm_start->radius;
  label.radius[0] = 0.0;
  std::vector<VertexId> free;
  for (VertexId v = 1; v <= n; ++v) {
    if (k.is_boundary(v)) {
      double r = bc.radius.at(v);
      if (geom == Geometry::euclidean && std::isinf(r)) fail(ErrorCode::invalid_input, "horocycles need hyperbolic geometry");
      label[v] = r;
    } else if (pins.count(v)) {
      label[v] = 0.0;
    } else {
      free.push_back(v);
      if (!(label[v] > 0.0) || std::isinf(label[v])) label[v] = seed_of(v);
    }
  }
  const bool gauge = geom == Geometry::euclidean && k.boundary_vertices().empty();
  detail::LabelSolver solver(k, phi, a, geom);
  auto residual = [&](const std::vector<double>& r) {
    double m = 0.0;
    for (VertexId v : free) m = std::max(m, std::abs(solver.theta(r, v, r[v]) - a[v]));
    return m;
  };
  auto apply_gauge = [&](std::vector<double>& r) {
    if (!gauge) return;
    double s = 0.0;
    for (VertexId v : free) s += std::log(r[v]);
    double f = std::exp(-s / double(free.size()));
    for (VertexId v : free) r[v] *= f;
  };

  SolveReport rep;
  apply_gauge(label.radius);
  double res = residual(label.radius);
  if (opt.record_trace) rep.trace.push_back({0, res});
  int it = 0;
  std::vector<double> next;
  const double target = opt.tol * opt.polish;
  // Newton on log-labels of the free vertices, with a gauge row on the torus.
  auto newton_polish = [&](std::vector<double>& r) {
    const int m = static_cast<int>(free.size());
    auto fvec = [&](const std::vector<double>& x) {
      Eigen::VectorXd f(m);
      for (int i = 0; i < m; ++i) f[i] = solver.theta(x, free[i], x[free[i]]) - a[free[i]];
      return f;
    };
    for (int step = 0; step < 20 && res > target; ++step) {
      Eigen::MatrixXd jac(m + (gauge ? 1 : 0), m);
      std::vector<double> x = r;
      for (int i = 0; i < m; ++i) {
        const VertexId v = free[i];
        const double h = 1e-6;
        x[v] = r[v] * std::exp(h);
        Eigen::VectorXd fp = fvec(x);
        x[v] = r[v] * std::exp(-h);
        Eigen::VectorXd fm = fvec(x);
        x[v] = r[v];
        jac.col(i).head(m) = (fp - fm) / (2.0 * h);
        if (gauge) jac(m, i) = 1.0;
      }
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(jac.rows());
      rhs.head(m) = -fvec(r);
      Eigen::VectorXd dy = jac.colPivHouseholderQr().solve(rhs);
      if (!dy.allFinite()) return;
      bool improved = false;
      for (double t = 1.0; t > 1e-3; t *= 0.5) {
        for (int i = 0; i < m; ++i) x[free[i]] = r[free[i]] * std::exp(t * dy[i]);
        apply_gauge(x);
        double rx = residual(x);
        if (rx < res) {
          r = x;
          res = rx;
          improved = true;
          break;
        }
      }
      if (!improved) return;
    }
  };
  double checkpoint = res;
  while (res > target) {
    if (it >= opt.max_iters)
      fail(ErrorCode::non_convergence, "no convergence after " + std::to_string(it) + " sweeps, residual " + detail::sci(res));
    if (opt.jacobi) {
      next = label.radius;
      for (VertexId v : free) next[v] = solver.local_solve(label.radius, v, target);
      label.radius.swap(next);
    } else {
      for (VertexId v : free) label[v] = solver.local_solve(label.radius, v, target);
    }
    apply_gauge(label.radius);
    ++it;
    res = residual(label.radius);
    if (opt.record_trace) rep.trace.push_back({it, res});
    if (opt.newton && it % 100 == 0) {
      // Sweeps that lose less than half the residual per hundred count as stalled.
      if (res > 0.5 * checkpoint) {
        newton_polish(label.radius);
        if (opt.record_trace) rep.trace.push_back({it, res});
      }
      checkpoint = res;
    }
  }
  rep.label = std::move(label);
  rep.residual = res;
  rep.iterations = it;
  return rep;
}

/// Maximal packing label: hyperbolic with horocycle boundary for bordered
/// complexes, euclidean with a sum-of-logs gauge for closed ones.
inline SolveReport max_label(const Complex& k, const SolverOptions& opt = {}) {
  TargetAngles a = uniform_targets(k);
  if (k.boundary_vertices().empty()) {
    if (k.surface_type() != SurfaceType::torus) fail(ErrorCode::invalid_input, "closed complexes other than tori are unsupported");
    return solve_label(k, {}, a, BoundaryCondition{std::vector<double>(k.vertex_count() + 1, 0.0)}, {},
                       Geometry::euclidean, opt);
  }
  return solve_label(k, {}, a, BoundaryCondition::horocycles(k), {}, Geometry::hyperbolic, opt);
}

}  // namespace cpack
