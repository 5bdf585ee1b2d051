#pragma once

// Fiberwise starshaped domains in cotangent bundles, seen through their fiber
// support function h(q, v) = max { <p, v> : p in the fiber over q }.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "stringcap/errors.hpp"
#include "stringcap/extended_real.hpp"

namespace stringcap {

inline constexpr int kMaxDim = 16;

using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxDim, kMaxDim>;

enum class ChartKind {
  kEuclidean,
  kSphere,       // unit sphere S^n in R^{n+1}, ambient coordinates
  kEmbedded,     // hypersurface of R^m, ambient coordinates
  kTorus,        // R^d / Z^d, coordinates in [0,1)^d
  kKleinBottle,  // R^2 / <(x,y)->(x+1,-y), (x,y)->(x,y+1)>, coordinates in [0,1)^2
};

inline const char* to_string(ChartKind kind) {
  switch (kind) {
    case ChartKind::kEuclidean: return "euclidean";
    case ChartKind::kSphere: return "sphere";
    case ChartKind::kEmbedded: return "embedded";
    case ChartKind::kTorus: return "torus";
    case ChartKind::kKleinBottle: return "klein_bottle";
  }
  return "unknown";
}

/// Identifies the coordinate system of base points. Torus and Klein-bottle
/// charts use unit periods; physical lengths live in the metric.
struct ChartId {
  ChartKind kind = ChartKind::kEuclidean;
  int dim = 0;  // number of coordinates

  static ChartId euclidean(int dim) { return {ChartKind::kEuclidean, dim}; }
  static ChartId sphere(int n) { return {ChartKind::kSphere, n + 1}; }
  static ChartId embedded(int ambient_dim) { return {ChartKind::kEmbedded, ambient_dim}; }
  static ChartId torus(int dim) { return {ChartKind::kTorus, dim}; }
  static ChartId klein_bottle() { return {ChartKind::kKleinBottle, 2}; }

  bool periodic() const { return kind == ChartKind::kTorus || kind == ChartKind::kKleinBottle; }

  /// Moves a lifted point (and optionally a velocity attached to it) into the
  /// fundamental domain.
  void reduce(Vec& point, Vec* velocity = nullptr) const {
    if (kind == ChartKind::kTorus) {
      for (int i = 0; i < point.size(); ++i) point[i] -= std::floor(point[i]);
      for (int i = 0; i < point.size(); ++i)
        if (point[i] >= 1.0) point[i] = 0.0;
    } else if (kind == ChartKind::kKleinBottle) {
      const double k = std::floor(point[0]);
      point[0] -= k;
      if (point[0] >= 1.0) point[0] = 0.0;
      const bool odd = std::fmod(std::abs(k), 2.0) == 1.0;
      if (odd) {
        point[1] = -point[1];
        if (velocity != nullptr) (*velocity)[1] = -(*velocity)[1];
      }
      point[1] -= std::floor(point[1]);
      if (point[1] >= 1.0) point[1] = 0.0;
    }
  }

  /// Shortest lifted displacement from `from` to `to`, with the velocity frame
  /// at `from`.
  Vec displacement(const Vec& from, const Vec& to) const {
    Vec d = to - from;
    if (kind == ChartKind::kTorus) {
      for (int i = 0; i < d.size(); ++i) d[i] -= std::round(d[i]);
    } else if (kind == ChartKind::kKleinBottle) {
      double best = std::numeric_limits<double>::infinity();
      Vec best_d = d;
      for (int k = -1; k <= 1; ++k) {
        for (int m = -2; m <= 2; ++m) {
          Vec lift(2);
          lift[0] = to[0] + k;
          lift[1] = (k % 2 != 0 ? -to[1] : to[1]) + m;
          Vec cand = lift - from;
          const double n = cand.norm();
          if (n < best) {
            best = n;
            best_d = cand;
          }
        }
      }
      d = best_d;
    }
    return d;
  }

  friend bool operator==(const ChartId&, const ChartId&) = default;
};

inline std::string describe(const ChartId& c) {
  return std::string(to_string(c.kind)) + "/" + std::to_string(c.dim);
}

/// A point of the base manifold. Bit i of `pinned_zero` records that
/// coordinate i vanishes identically along the family that produced the point;
/// gauges may consult it to evaluate measure-zero constraints exactly.
struct BasePoint {
  Vec coords;
  ChartId chart;
  std::uint32_t pinned_zero = 0;

  bool pinned(int axis) const { return (pinned_zero >> axis) & 1u; }
};

struct TangentVector {
  BasePoint base;
  Vec components;
};

inline Vec make_vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

inline Vec make_vec(const std::vector<double>& xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) v[static_cast<Eigen::Index>(i)] = xs[i];
  return v;
}

inline BasePoint make_point(ChartId chart, const Vec& coords, std::uint32_t pinned_zero = 0) {
  return BasePoint{coords, chart, pinned_zero};
}

inline TangentVector attach(const BasePoint& q, const Vec& components) { return TangentVector{q, components}; }

namespace detail {

inline bool has_nan(const Vec& v) {
  for (int i = 0; i < v.size(); ++i)
    if (std::isnan(v[i])) return true;
  return false;
}

}  // namespace detail

/// Checks the invariants of a point/vector pair against a chart. Throws
/// InvalidInputError or ChartMismatchError.
inline void validate_pair(const ChartId& chart, const BasePoint& q, const TangentVector& v) {
  if (!(q.chart == chart)) {
    throw ChartMismatchError("base point chart " + describe(q.chart) + " does not match domain chart " +
                             describe(chart));
  }
  if (!(v.base.chart == q.chart)) throw ChartMismatchError("tangent vector is attached on a different chart");
  if (q.coords.size() != chart.dim || v.components.size() != chart.dim || v.base.coords.size() != chart.dim) {
    throw InvalidInputError("coordinate dimension does not match chart " + describe(chart));
  }
  if (detail::has_nan(q.coords) || detail::has_nan(v.components) || detail::has_nan(v.base.coords)) {
    throw InvalidInputError("NaN in base point or tangent vector");
  }
  if (v.base.coords != q.coords) throw InvalidInputError("tangent vector is not attached at the given base point");
  if (chart.kind == ChartKind::kSphere) {
    if (std::abs(q.coords.norm() - 1.0) > 1e-12) throw InvalidInputError("sphere base point is not unit length");
    const double scale = std::max(1.0, v.components.norm());
    if (std::abs(q.coords.dot(v.components)) > 1e-10 * scale) {
      throw InvalidInputError("tangent vector is not tangent to the sphere");
    }
  }
}

/// Throws RankDeficientError unless `jac` has full column rank (tolerance 1e-10).
inline void check_full_column_rank(const Mat& jac, const std::string& context) {
  if (jac.rows() < jac.cols()) {
    throw RankDeficientError(context + ": Jacobian has fewer rows than columns", 0.0);
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd{Eigen::MatrixXd(jac)};
  const auto& s = svd.singularValues();
  const double smallest = s.size() == 0 ? 0.0 : s[s.size() - 1];
  if (smallest < 1e-10) {
    std::ostringstream os;
    os << context << ": rank-deficient Jacobian (smallest singular value " << smallest << ")";
    throw RankDeficientError(os.str(), smallest);
  }
}

/// A Riemannian metric given as the pullback of the Euclidean metric under an
/// embedding, or a flat metric with per-axis lengths. `radius` is the radius of
/// the associated codisk bundle.
struct MetricSpec {
  enum class Kind { kEmbeddingInduced, kFlat };

  Kind kind = Kind::kFlat;
  std::function<Mat(const BasePoint&)> embedding_jacobian;
  std::optional<Mat> constant_jacobian;
  double radius = 1.0;
  std::string description;

  static MetricSpec flat(std::vector<double> lengths, double radius = 1.0) {
    Mat d = Mat::Zero(static_cast<Eigen::Index>(lengths.size()), static_cast<Eigen::Index>(lengths.size()));
    for (std::size_t i = 0; i < lengths.size(); ++i) d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = lengths[i];
    MetricSpec m = linear(Kind::kFlat, d, radius);
    std::ostringstream os;
    os << "flat metric, axis lengths (";
    for (std::size_t i = 0; i < lengths.size(); ++i) os << (i ? ", " : "") << lengths[i];
    os << ")";
    m.description = os.str();
    return m;
  }

  /// Pullback under a linear embedding (constant Jacobian).
  static MetricSpec linear(Kind kind, const Mat& jacobian, double radius, std::string description = {}) {
    check_radius(radius);
    check_full_column_rank(jacobian, "MetricSpec");
    MetricSpec m;
    m.kind = kind;
    m.constant_jacobian = jacobian;
    m.radius = radius;
    m.description = std::move(description);
    return m;
  }

  /// Pullback under a general embedding; the Jacobian is rank-checked at the
  /// supplied sample points.
  static MetricSpec embedding(std::function<Mat(const BasePoint&)> jac, double radius,
                              const std::vector<BasePoint>& rank_check_points, std::string description = {}) {
    check_radius(radius);
    for (const auto& q : rank_check_points) check_full_column_rank(jac(q), "MetricSpec");
    MetricSpec m;
    m.kind = Kind::kEmbeddingInduced;
    m.embedding_jacobian = std::move(jac);
    m.radius = radius;
    m.description = std::move(description);
    return m;
  }

  MetricSpec with_radius(double r) const {
    check_radius(r);
    MetricSpec m = *this;
    m.radius = r;
    return m;
  }

 private:
  static void check_radius(double r) {
    if (!(r >= 0.0) || std::isinf(r)) throw InvalidInputError("codisk radius must be finite and nonnegative");
  }
};

/// radius * |D phi(q) v|.
inline double metric_norm(const MetricSpec& metric, const BasePoint& q, const TangentVector& v) {
  validate_pair(q.chart, q, v);
  if (metric.constant_jacobian) {
    const Mat& j = *metric.constant_jacobian;
    if (j.cols() != v.components.size()) throw InvalidInputError("metric Jacobian does not match chart dimension");
    return metric.radius * (j * v.components).norm();
  }
  const Mat j = metric.embedding_jacobian(q);
  check_full_column_rank(j, "metric_norm");
  if (j.cols() != v.components.size()) throw InvalidInputError("metric Jacobian does not match chart dimension");
  return metric.radius * (j * v.components).norm();
}

struct BaseDescriptor {
  std::string manifold;  // e.g. "S^2", "T^3", "K"
  ChartId chart;
};

/// A fiberwise starshaped domain, represented by its support oracle.
class GaugeDomain {
 public:
  using SupportOracle = std::function<ExtendedReal(const BasePoint&, const TangentVector&)>;

  struct Properties {
    bool convex = false;     // every fiber is convex (support is subadditive)
    bool symmetric = false;  // every fiber is symmetric under p -> -p
    std::optional<MetricSpec> codisk_metric;
  };

  GaugeDomain(BaseDescriptor base, SupportOracle oracle, std::string metadata, Properties props)
      : base_(std::move(base)), oracle_(std::move(oracle)), metadata_(std::move(metadata)), props_(std::move(props)) {}
  GaugeDomain(BaseDescriptor base, SupportOracle oracle, std::string metadata)
      : GaugeDomain(std::move(base), std::move(oracle), std::move(metadata), Properties{}) {}

  const BaseDescriptor& base() const { return base_; }
  const ChartId& chart() const { return base_.chart; }
  const std::string& metadata() const { return metadata_; }
  const Properties& properties() const { return props_; }
  const std::optional<MetricSpec>& codisk_metric() const { return props_.codisk_metric; }
  const SupportOracle& oracle() const { return oracle_; }

 private:
  BaseDescriptor base_;
  SupportOracle oracle_;
  std::string metadata_;
  Properties props_;
};

/// Fiber support h(q, v). Infinite for directions in which the fiber is unbounded.
inline ExtendedReal support(const GaugeDomain& domain, const BasePoint& q, const TangentVector& v) {
  validate_pair(domain.chart(), q, v);
  if (v.components.isZero(0.0)) return ExtendedReal::finite(0.0);
  return domain.oracle()(q, v);
}

// ---------------------------------------------------------------------------
// Built-in domains

inline GaugeDomain codisk_bundle(BaseDescriptor base, MetricSpec metric, std::string metadata) {
  GaugeDomain::Properties props;
  props.convex = true;
  props.symmetric = true;
  props.codisk_metric = metric;
  auto oracle = [metric](const BasePoint& q, const TangentVector& v) {
    return ExtendedReal::finite(metric_norm(metric, q, v));
  };
  return GaugeDomain(std::move(base), std::move(oracle), std::move(metadata), std::move(props));
}

/// Codisk bundle of the metric on S^n pulled back from x -> diag(scales) x.
inline GaugeDomain sphere_linear_codisk(int n, const std::vector<double>& scales, double radius,
                                        std::string metadata) {
  if (n < 1) throw InvalidInputError("sphere dimension must be >= 1");
  if (static_cast<int>(scales.size()) != n + 1) throw InvalidInputError("need n+1 axis scales");
  Mat d = Mat::Zero(n + 1, n + 1);
  for (int i = 0; i <= n; ++i) d(i, i) = scales[static_cast<std::size_t>(i)];
  MetricSpec metric = MetricSpec::linear(MetricSpec::Kind::kEmbeddingInduced, d, radius, metadata);
  return codisk_bundle(BaseDescriptor{"S^" + std::to_string(n), ChartId::sphere(n)}, std::move(metric),
                       std::move(metadata));
}

/// Codisk bundle of the ellipsoid metric g_a: the last `scaled_axes` ambient
/// coordinates of S^n are stretched by a.
inline GaugeDomain ellipsoid_codisk(int n, double a, int scaled_axes = 2, double radius = 1.0) {
  if (!(a > 0.0)) throw InvalidInputError("ellipsoid parameter a must be positive");
  if (scaled_axes > n + 1) throw InvalidInputError("too many scaled axes for S^n");
  std::vector<double> scales(static_cast<std::size_t>(n + 1), 1.0);
  for (int i = n + 1 - scaled_axes; i <= n; ++i) scales[static_cast<std::size_t>(i)] = a;
  std::ostringstream os;
  os << "codisk bundle (radius " << radius << ") of ellipsoid metric on S^" << n << ", a = " << a << ", "
     << scaled_axes << " scaled axes";
  return sphere_linear_codisk(n, scales, radius, os.str());
}

/// Radius-`radius` codisk bundle of the round metric of the sphere of radius a.
inline GaugeDomain round_sphere_codisk(int n, double a, double radius = 1.0) {
  if (!(a > 0.0)) throw InvalidInputError("round metric scale must be positive");
  std::vector<double> scales(static_cast<std::size_t>(n + 1), a);
  std::ostringstream os;
  os << "codisk bundle (radius " << radius << ") of round metric on S^" << n << " scaled by " << a;
  return sphere_linear_codisk(n, scales, radius, os.str());
}

inline GaugeDomain flat_torus_codisk(const std::vector<double>& lengths, double radius = 1.0) {
  const int d = static_cast<int>(lengths.size());
  if (d < 1) throw InvalidInputError("torus needs at least one axis");
  for (double l : lengths)
    if (!(l > 0.0)) throw InvalidInputError("torus axis lengths must be positive");
  MetricSpec metric = MetricSpec::flat(lengths, radius);
  std::ostringstream os;
  os << "codisk bundle (radius " << radius << ") of " << metric.description << " on T^" << d;
  return codisk_bundle(BaseDescriptor{"T^" + std::to_string(d), ChartId::torus(d)}, std::move(metric), os.str());
}

/// Flat Klein bottle R^2 / <(x,y)->(x+a,-y), (x,y)->(x,y+b)>.
inline GaugeDomain flat_klein_codisk(double a, double b, double radius = 1.0) {
  if (!(a > 0.0) || !(b > 0.0)) throw InvalidInputError("Klein bottle periods must be positive");
  MetricSpec metric = MetricSpec::flat({a, b}, radius);
  std::ostringstream os;
  os << "codisk bundle (radius " << radius << ") of flat Klein bottle, a = " << a << ", b = " << b;
  return codisk_bundle(BaseDescriptor{"K", ChartId::klein_bottle()}, std::move(metric), os.str());
}

/// Camel domain on T*T^n: p_n >= -eps/2 - delta everywhere, and additionally
/// p_n <= eps/2 + 2 delta over {q_1 = 0}. The q_1 = 0 slice is recognized only
/// through the pinned-coordinate flag of the base point.
inline GaugeDomain camel_domain(int n, double eps, double delta) {
  if (n < 2) throw InvalidInputError("camel domain needs n > 1");
  if (!(eps > 0.0) || !(delta > 0.0)) throw InvalidInputError("camel domain needs eps > 0 and delta > 0");
  const double lower = eps / 2.0 + delta;        // max <p, -e_n>
  const double upper = eps / 2.0 + 2.0 * delta;  // max <p, e_n> on q_1 = 0
  auto oracle = [n, lower, upper](const BasePoint& q, const TangentVector& v) {
    const auto& c = v.components;
    for (int i = 0; i < n - 1; ++i)
      if (c[i] != 0.0) return ExtendedReal::infinite();
    const double vn = c[n - 1];
    if (vn < 0.0) return ExtendedReal::finite(-vn * lower);
    if (vn == 0.0) return ExtendedReal::finite(0.0);
    if (q.pinned(0)) return ExtendedReal::finite(vn * upper);
    return ExtendedReal::infinite();
  };
  std::ostringstream os;
  os << "camel domain on T*T^" << n << ", eps = " << eps << ", delta = " << delta;
  GaugeDomain::Properties props;
  props.convex = true;
  return GaugeDomain(BaseDescriptor{"T^" + std::to_string(n), ChartId::torus(n)}, std::move(oracle), os.str(),
                     std::move(props));
}

/// Fiberwise dilation of a domain by lambda > 0 (supports scale by lambda).
inline GaugeDomain scaled_domain(const GaugeDomain& domain, double lambda) {
  if (!(lambda > 0.0)) throw InvalidInputError("dilation factor must be positive");
  auto inner = domain.oracle();
  auto oracle = [inner, lambda](const BasePoint& q, const TangentVector& v) { return inner(q, v).scaled(lambda); };
  GaugeDomain::Properties props = domain.properties();
  if (props.codisk_metric) props.codisk_metric = props.codisk_metric->with_radius(props.codisk_metric->radius * lambda);
  std::ostringstream os;
  os << domain.metadata() << ", dilated by " << lambda;
  return GaugeDomain(domain.base(), std::move(oracle), os.str(), std::move(props));
}

// ---------------------------------------------------------------------------
// Support of user-supplied gauges

/// F(q, p): positively 1-homogeneous in p and positive for p != 0. The domain is {F < 1}.
using GaugeFunction = std::function<double(const BasePoint&, const Vec&)>;

struct GenericMaximizeOptions {
  double tol = 1e-8;
  int starts = 8;
  std::uint64_t seed = 0;
  int max_iterations = 4000;
};

/// max <p, v> over the gauge sphere {F(q, .) = 1}, by multi-start projected
/// ascent of u -> <u, v> / F(q, u) over unit directions u.
inline double support_generic_maximize(const GaugeFunction& gauge, const BasePoint& q, const TangentVector& v,
                                       const GenericMaximizeOptions& opts = {}) {
  validate_pair(q.chart, q, v);
  const Vec& dir = v.components;
  const int m = static_cast<int>(dir.size());
  if (dir.isZero(0.0)) return 0.0;

  auto ratio = [&](const Vec& u) {
    const double f = gauge(q, u);
    if (!(f > 0.0) || std::isinf(f)) throw InvalidInputError("gauge function must be positive and finite on p != 0");
    return u.dot(dir) / f;
  };
  auto tangent_gradient = [&](const Vec& u) {
    constexpr double h = 1e-6;
    Vec g(m);
    for (int i = 0; i < m; ++i) {
      Vec up = u, um = u;
      up[i] += h;
      um[i] -= h;
      g[i] = (ratio(up) - ratio(um)) / (2.0 * h);
    }
    return Vec(g - g.dot(u) * u);
  };

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  double best_converged = -std::numeric_limits<double>::infinity();
  double best_any = -std::numeric_limits<double>::infinity();
  double best_residual = std::numeric_limits<double>::infinity();
  bool any_converged = false;

  for (int s = 0; s < opts.starts; ++s) {
    Vec u(m);
    if (s == 0) {
      u = dir / dir.norm();
    } else {
      for (int i = 0; i < m; ++i) u[i] = normal(rng);
      if (u.norm() == 0.0) u = dir;
      u /= u.norm();
    }
    double value = ratio(u);
    double step = 0.1;
    double residual = std::numeric_limits<double>::infinity();
    bool converged = false;
    for (int it = 0; it < opts.max_iterations; ++it) {
      const Vec g = tangent_gradient(u);
      residual = g.norm();
      if (residual <= opts.tol * (1.0 + std::abs(value))) {
        converged = true;
        break;
      }
      Vec trial = u + step * g;
      trial /= trial.norm();
      const double tv = ratio(trial);
      if (tv > value) {
        u = trial;
        value = tv;
        step = std::min(step * 1.5, 1.0);
      } else {
        step *= 0.5;
        if (step < 1e-16) {
          // no ascent left at working precision: accept if already near stationary
          converged = residual <= std::sqrt(opts.tol) * (1.0 + std::abs(value));
          break;
        }
      }
    }
    best_any = std::max(best_any, value);
    best_residual = std::min(best_residual, residual);
    if (converged) {
      any_converged = true;
      best_converged = std::max(best_converged, value);
    }
  }
  if (!any_converged) {
    throw NonConvergenceError("support_generic_maximize did not converge", best_any, best_residual);
  }
  return best_converged;
}

/// Domain {F < 1} for a user gauge, with support evaluated numerically.
inline GaugeDomain gauge_domain(BaseDescriptor base, GaugeFunction gauge, std::string metadata,
                                GenericMaximizeOptions opts = {}) {
  auto oracle = [gauge, opts](const BasePoint& q, const TangentVector& v) {
    return ExtendedReal::finite(support_generic_maximize(gauge, q, v, opts));
  };
  return GaugeDomain(std::move(base), std::move(oracle), std::move(metadata));
}

// ---------------------------------------------------------------------------
// Containment

struct SupportSample {
  BasePoint q;
  TangentVector v;
};

struct SamplePlan {
  std::vector<SupportSample> samples;
  std::string description;
};

/// Uniform points on S^n with Gaussian tangent vectors.
inline SamplePlan sphere_sample_plan(int n, std::size_t count, std::uint64_t seed = 0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  SamplePlan plan;
  plan.description = std::to_string(count) + " random (q, v) on S^" + std::to_string(n);
  plan.samples.reserve(count);
  const ChartId chart = ChartId::sphere(n);
  for (std::size_t s = 0; s < count; ++s) {
    Vec q(n + 1), w(n + 1);
    for (int i = 0; i <= n; ++i) q[i] = normal(rng);
    q /= q.norm();
    for (int i = 0; i <= n; ++i) w[i] = normal(rng);
    w -= w.dot(q) * q;
    w -= w.dot(q) * q;
    BasePoint p = make_point(chart, q);
    plan.samples.push_back({p, attach(p, w)});
  }
  return plan;
}

/// Uniform points of a torus or Klein bottle chart with Gaussian vectors.
inline SamplePlan periodic_sample_plan(ChartId chart, std::size_t count, std::uint64_t seed = 0) {
  if (!chart.periodic()) throw InvalidInputError("periodic_sample_plan needs a torus or Klein-bottle chart");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  SamplePlan plan;
  plan.description = std::to_string(count) + " random (q, v) on " + describe(chart);
  for (std::size_t s = 0; s < count; ++s) {
    Vec q(chart.dim), w(chart.dim);
    for (int i = 0; i < chart.dim; ++i) q[i] = unit(rng);
    for (int i = 0; i < chart.dim; ++i) w[i] = normal(rng);
    BasePoint p = make_point(chart, q);
    plan.samples.push_back({p, attach(p, w)});
  }
  return plan;
}

struct ContainmentWitness {
  SupportSample sample;
  ExtendedReal inner;
  ExtendedReal outer;
};

struct ContainmentResult {
  bool contained = true;
  std::optional<ContainmentWitness> witness;
  std::size_t samples_checked = 0;
  double max_excess = 0.0;  // max of inner - outer over finite pairs (<= 0 when contained)

  explicit operator bool() const { return contained; }
};

/// inner subset outer, tested as support_inner <= support_outer on every
/// sample. `rel_slack` absorbs floating round-off only.
inline ContainmentResult domain_contains(const GaugeDomain& inner, const GaugeDomain& outer, const SamplePlan& plan,
                                         double rel_slack = 1e-12) {
  if (!(inner.chart() == outer.chart())) {
    throw ChartMismatchError("domain_contains: domains live on different charts");
  }
  ContainmentResult result;
  result.max_excess = -std::numeric_limits<double>::infinity();
  for (const auto& s : plan.samples) {
    const ExtendedReal hi = support(inner, s.q, s.v);
    const ExtendedReal ho = support(outer, s.q, s.v);
    ++result.samples_checked;
    if (hi.is_finite() && ho.is_finite()) result.max_excess = std::max(result.max_excess, hi.value() - ho.value());
    const double slack = ho.is_finite() ? rel_slack * (1.0 + ho.value()) : 0.0;
    if (!leq(hi, ho, slack)) {
      result.contained = false;
      result.witness = ContainmentWitness{s, hi, ho};
      return result;
    }
  }
  if (result.samples_checked == 0) result.max_excess = 0.0;
  return result;
}

}  // namespace stringcap
