#pragma once

// A global unitary frame field over S^n: A(q) in U(n+1) with A(q) e_1 = q,
// built from the trivialization of TS^n (x) C given by the differential of
// the Lagrangian immersion (x, y) -> (1 + iy) x.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <random>
#include <utility>
#include <vector>

#include "json.hpp"
#include "stringcap/errors.hpp"
#include "stringcap/parallel.hpp"

namespace stringcap {

using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

struct UnitaryFrame {
  Eigen::VectorXd q;
  CMat matrix;
  double unitarity_defect = 0.0;  // ||A^* A - I||_F
  double basepoint_defect = 0.0;  // ||A e_1 - q||
};

inline constexpr double kFrameTolerance = 1e-10;

/// Columns q, z_1(q), ..., z_n(q), orthonormalized over C with q first.
inline UnitaryFrame sphere_unitary_frame(int n, const Eigen::VectorXd& q) {
  if (n < 1) throw InvalidInputError("frame family needs n >= 1");
  if (q.size() != n + 1) throw InvalidInputError("q must lie in R^{n+1}");
  if (!q.allFinite() || std::abs(q.norm() - 1.0) > 1e-10) throw InvalidInputError("q must be a unit vector");
  using C = std::complex<double>;
  const C i(0.0, 1.0);
  const Eigen::VectorXd x = q.head(n);
  const double y = q[n];

  // A complex tangent vector w = (w_x, w_y) with x.w_x + y w_y = 0 maps to
  // (1 + iy) w_x + i x w_y. Solving for preimages of the standard basis gives
  // n tangent fields spanning TS^n (x) C at every point.
  CMat m = CMat::Zero(n + 1, n + 1);
  for (int r = 0; r < n; ++r) {
    m(r, r) = 1.0 + i * y;
    m(r, n) = i * x[r];
  }
  for (int c = 0; c < n; ++c) m(n, c) = x[c];
  m(n, n) = y;
  const Eigen::PartialPivLU<CMat> lu(m);
  CMat rhs = CMat::Zero(n + 1, n);
  for (int j = 0; j < n; ++j) rhs(j, j) = 1.0;
  const CMat tangent = lu.solve(rhs);

  CMat a(n + 1, n + 1);
  a.col(0) = q.cast<C>();
  a.rightCols(n) = tangent;
  for (int c = 1; c <= n; ++c) {
    for (int prev = 0; prev < c; ++prev) a.col(c) -= a.col(prev).dot(a.col(c)) * a.col(prev);
    const double norm = a.col(c).norm();
    if (!(norm > 1e-12)) throw RankDeficientError("complexified tangent frame degenerated", norm);
    a.col(c) /= norm;
  }

  UnitaryFrame f;
  f.q = q;
  f.matrix = a;
  f.unitarity_defect = (a.adjoint() * a - CMat::Identity(n + 1, n + 1)).norm();
  f.basepoint_defect = (a.col(0) - q.cast<C>()).norm();
  return f;
}

/// Nodes and edges of a sphere mesh.
struct SphereGrid {
  std::vector<Eigen::VectorXd> points;
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // adjacent pairs
  double mesh = 0.0;                                       // longest edge
};

/// Icosahedron subdivided `depth` times and projected to S^2.
inline SphereGrid icosphere(int depth) {
  if (depth < 0) throw InvalidInputError("icosphere depth must be >= 0");
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Eigen::Vector3d> v = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                                    {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  for (auto& p : v) p.normalize();
  std::vector<std::array<std::size_t, 3>> faces = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
      {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},   {4, 9, 5}, {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (int level = 0; level < depth; ++level) {
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> midpoint;
    auto mid = [&](std::size_t a, std::size_t b) {
      const auto k = std::minmax(a, b);
      auto it = midpoint.find(k);
      if (it != midpoint.end()) return it->second;
      v.push_back((v[a] + v[b]).normalized());
      midpoint.emplace(k, v.size() - 1);
      return v.size() - 1;
    };
    std::vector<std::array<std::size_t, 3>> next;
    next.reserve(faces.size() * 4);
    for (const auto& f : faces) {
      const std::size_t ab = mid(f[0], f[1]), bc = mid(f[1], f[2]), ca = mid(f[2], f[0]);
      next.push_back({f[0], ab, ca});
      next.push_back({f[1], bc, ab});
      next.push_back({f[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    faces = std::move(next);
  }
  SphereGrid g;
  for (const auto& p : v) g.points.emplace_back(p);
  std::map<std::pair<std::size_t, std::size_t>, bool> seen;
  for (const auto& f : faces) {
    for (int e = 0; e < 3; ++e) {
      const auto k = std::minmax(f[static_cast<std::size_t>(e)], f[static_cast<std::size_t>((e + 1) % 3)]);
      if (seen.emplace(k, true).second) {
        g.edges.push_back(k);
        g.mesh = std::max(g.mesh, (v[k.first] - v[k.second]).norm());
      }
    }
  }
  return g;
}

/// `count` Haar-random points of S^n paired with points at distance `h`
/// along a random tangent direction. The same seed gives the same base
/// points and directions for every h, so refinements compare like with like.
inline SphereGrid random_sphere_pairs(int n, std::size_t count, double h, std::uint64_t seed = 0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  SphereGrid g;
  g.mesh = h;
  for (std::size_t s = 0; s < count; ++s) {
    Eigen::VectorXd q(n + 1), w(n + 1);
    for (int i = 0; i <= n; ++i) q[i] = normal(rng);
    q.normalize();
    for (int i = 0; i <= n; ++i) w[i] = normal(rng);
    w -= w.dot(q) * q;
    w.normalize();
    // point at chordal distance h along the great circle through q in direction w
    const double angle = 2.0 * std::asin(h / 2.0);
    const Eigen::VectorXd p = std::cos(angle) * q + std::sin(angle) * w;
    g.points.push_back(q);
    g.points.push_back(p);
    g.edges.emplace_back(2 * s, 2 * s + 1);
  }
  return g;
}

/// Uniform random points on S^n.
inline std::vector<Eigen::VectorXd> random_sphere_points(int n, std::size_t count, std::uint64_t seed = 0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Eigen::VectorXd> pts;
  for (std::size_t s = 0; s < count; ++s) {
    Eigen::VectorXd q(n + 1);
    for (int i = 0; i <= n; ++i) q[i] = normal(rng);
    pts.push_back(q.normalized());
  }
  return pts;
}

struct FrameFamilyReport {
  int n = 0;
  std::size_t points = 0;
  std::size_t pairs = 0;
  double mesh = 0.0;
  double max_unitarity_defect = 0.0;
  double max_basepoint_defect = 0.0;
  double continuity_modulus = 0.0;  // max ||A(q) - A(q')||_F / ||q - q'|| over the pairs
  bool residuals_ok = false;

  nlohmann::json to_json() const {
    return {{"n", n},
            {"points", points},
            {"pairs", pairs},
            {"mesh", mesh},
            {"max_unitarity_defect", max_unitarity_defect},
            {"max_basepoint_defect", max_basepoint_defect},
            {"continuity_modulus", continuity_modulus},
            {"residuals_ok", residuals_ok}};
  }
};

/// Residuals at every grid point and the continuity modulus over its pairs.
inline FrameFamilyReport verify_frame_family(int n, const SphereGrid& grid, double tol = kFrameTolerance) {
  std::vector<UnitaryFrame> frames(grid.points.size());
  parallel_for(grid.points.size(), [&](std::size_t i) { frames[i] = sphere_unitary_frame(n, grid.points[i]); });
  FrameFamilyReport r;
  r.n = n;
  r.points = grid.points.size();
  r.pairs = grid.edges.size();
  r.mesh = grid.mesh;
  for (const auto& f : frames) {
    r.max_unitarity_defect = std::max(r.max_unitarity_defect, f.unitarity_defect);
    r.max_basepoint_defect = std::max(r.max_basepoint_defect, f.basepoint_defect);
  }
  for (const auto& [a, b] : grid.edges) {
    const double dq = (grid.points[a] - grid.points[b]).norm();
    if (dq == 0.0) continue;
    r.continuity_modulus = std::max(r.continuity_modulus, (frames[a].matrix - frames[b].matrix).norm() / dq);
  }
  r.residuals_ok = r.max_unitarity_defect <= tol && r.max_basepoint_defect <= tol;
  return r;
}

}  // namespace stringcap
