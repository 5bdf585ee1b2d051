#pragma once

// Loops q: R/Z -> M, their Omega-length, and sup/inf of length over families.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "stringcap/errors.hpp"
#include "stringcap/gauge.hpp"
#include "stringcap/optimize.hpp"
#include "stringcap/parallel.hpp"
#include "stringcap/quadrature.hpp"

namespace stringcap {

inline double wrap_unit(double t) {
  double w = t - std::floor(t);
  return w >= 1.0 ? 0.0 : w;
}

/// A point of a loop together with its velocity, both in the reduced chart.
struct LoopSample {
  BasePoint point;
  Vec velocity;
};

class Loop {
 public:
  /// May return lifted coordinates (e.g. x0 + t on a torus); they are reduced
  /// into the fundamental domain together with the velocity.
  using PointFn = std::function<BasePoint(double)>;
  /// Velocity q'(t) in the frame of the lifted point.
  using DerivFn = std::function<Vec(double)>;

  static constexpr double kFiniteDifferenceStep = 1e-5;

  struct Options {
    bool periodic = true;
    bool validate = true;
  };

  Loop(ChartId chart, PointFn point_fn, std::optional<DerivFn> deriv_fn, std::string metadata)
      : Loop(chart, std::move(point_fn), std::move(deriv_fn), std::move(metadata), Options{}) {}

  Loop(ChartId chart, PointFn point_fn, std::optional<DerivFn> deriv_fn, std::string metadata, Options options)
      : chart_(chart),
        point_fn_(std::make_shared<PointFn>(std::move(point_fn))),
        deriv_fn_(deriv_fn ? std::make_shared<DerivFn>(std::move(*deriv_fn)) : nullptr),
        metadata_(std::move(metadata)) {
    if (!options.periodic) throw InvalidLoopError("loops must be periodic (parametrized by R/Z)");
    if (options.validate) validate();
  }

  static Loop constant(const BasePoint& q, std::string metadata = "constant loop") {
    const int dim = static_cast<int>(q.coords.size());
    return Loop(
        q.chart, [q](double) { return q; }, DerivFn([dim](double) { return Vec(Vec::Zero(dim)); }),
        std::move(metadata));
  }

  const ChartId& chart() const { return chart_; }
  const std::string& metadata() const { return metadata_; }
  bool has_closed_form_derivative() const { return deriv_fn_ != nullptr; }

  BasePoint point(double t) const {
    BasePoint p = (*point_fn_)(wrap_unit(t));
    chart_.reduce(p.coords);
    return p;
  }

  LoopSample sample(double t) const {
    const double w = wrap_unit(t);
    if (deriv_fn_) {
      BasePoint p = (*point_fn_)(w);
      Vec v = (*deriv_fn_)(w);
      chart_.reduce(p.coords, &v);
      return {std::move(p), std::move(v)};
    }
    return {point(w), finite_difference_velocity(w)};
  }

  TangentVector velocity(double t) const {
    LoopSample s = sample(t);
    return TangentVector{std::move(s.point), std::move(s.velocity)};
  }

  /// Central difference in the frame of the reduced point at t.
  Vec finite_difference_velocity(double t) const {
    const double h = kFiniteDifferenceStep;
    const BasePoint p = point(t);
    const Vec fwd = chart_.displacement(p.coords, point(t + h).coords);
    const Vec bwd = chart_.displacement(p.coords, point(t - h).coords);
    Vec v = (fwd - bwd) / (2.0 * h);
    if (chart_.kind == ChartKind::kSphere) v -= v.dot(p.coords) * p.coords;
    return v;
  }

  /// Closure within 1e-10 and, when a closed-form derivative is present,
  /// agreement with central differences at 16 points (relative 1e-4).
  void validate() const {
    const BasePoint start = point(0.0);
    const BasePoint end = (*point_fn_)(1.0 - 1e-12);
    Vec end_coords = end.coords;
    chart_.reduce(end_coords);
    if (start.coords.size() != chart_.dim) throw InvalidLoopError("loop point has wrong dimension: " + metadata_);
    if (!(start.chart == chart_)) throw InvalidLoopError("loop point on wrong chart: " + metadata_);
    const double gap = chart_.displacement(start.coords, end_coords).norm();
    if (!(gap <= 1e-10)) {
      std::ostringstream os;
      os << "loop does not close (gap " << gap << "): " << metadata_;
      throw InvalidLoopError(os.str());
    }
    if (!deriv_fn_) return;
    for (int i = 0; i < 16; ++i) {
      const double t = (i + 0.5) / 16.0;
      const Vec closed = sample(t).velocity;
      const Vec fd = finite_difference_velocity(t);
      const double err = (closed - fd).norm();
      const double scale = std::max(closed.norm(), fd.norm());
      if (!(err <= 1e-4 * scale + 1e-9)) {
        std::ostringstream os;
        os << "derivative disagrees with finite differences at t = " << t << " (error " << err << "): " << metadata_;
        throw InvalidLoopError(os.str());
      }
    }
  }

 private:
  ChartId chart_;
  std::shared_ptr<const PointFn> point_fn_;
  std::shared_ptr<const DerivFn> deriv_fn_;
  std::string metadata_;
};

/// t -> loop(1 - t).
inline Loop reverse(const Loop& loop) {
  std::optional<Loop::DerivFn> deriv;
  if (loop.has_closed_form_derivative()) {
    deriv = [loop](double t) { return Vec(-loop.sample(1.0 - t).velocity); };
  }
  return Loop(
      loop.chart(), [loop](double t) { return loop.sample(1.0 - t).point; }, std::move(deriv),
      "reverse of (" + loop.metadata() + ")", Loop::Options{true, false});
}

namespace detail {

inline double cutoff_psi(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }
inline double cutoff_psi_prime(double s) { return s > 0.0 ? std::exp(-1.0 / s) / (s * s) : 0.0; }

}  // namespace detail

/// Smooth monotone cutoff: 0 for s <= 0, 1 for s >= 1, all derivatives vanish at both ends.
inline double smooth_cutoff(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  const double a = detail::cutoff_psi(s), b = detail::cutoff_psi(1.0 - s);
  return a / (a + b);
}

inline double smooth_cutoff_derivative(double s) {
  if (s <= 0.0 || s >= 1.0) return 0.0;
  const double a = detail::cutoff_psi(s), b = detail::cutoff_psi(1.0 - s);
  const double da = detail::cutoff_psi_prime(s), db = -detail::cutoff_psi_prime(1.0 - s);
  return (da * b - a * db) / ((a + b) * (a + b));
}

/// Runs `a` on [0, 1/2] and `b` on [1/2, 1], each reparametrized by the smooth
/// cutoff so the result is smooth at the junctions.
inline Loop concatenate(const Loop& a, const Loop& b) {
  if (!(a.chart() == b.chart())) throw ChartMismatchError("cannot concatenate loops on different charts");
  const double gap = a.chart().displacement(a.point(0.0).coords, b.point(0.0).coords).norm();
  if (!(gap <= 1e-9)) {
    std::ostringstream os;
    os << "concatenate: basepoints differ by " << gap;
    throw BasepointMismatchError(os.str());
  }
  auto point_fn = [a, b](double t) {
    return t < 0.5 ? a.sample(smooth_cutoff(2.0 * t)).point : b.sample(smooth_cutoff(2.0 * t - 1.0)).point;
  };
  std::optional<Loop::DerivFn> deriv;
  if (a.has_closed_form_derivative() && b.has_closed_form_derivative()) {
    deriv = [a, b](double t) {
      if (t < 0.5) {
        const double s = 2.0 * t;
        return Vec(2.0 * smooth_cutoff_derivative(s) * a.sample(smooth_cutoff(s)).velocity);
      }
      const double s = 2.0 * t - 1.0;
      return Vec(2.0 * smooth_cutoff_derivative(s) * b.sample(smooth_cutoff(s)).velocity);
    };
  }
  return Loop(a.chart(), std::move(point_fn), std::move(deriv),
              "concatenation of (" + a.metadata() + ") and (" + b.metadata() + ")", Loop::Options{true, false});
}

/// t -> loop(rho(t)) for an orientation-preserving diffeomorphism rho of R/Z
/// lifted to [0, 1] -> [0, 1].
inline Loop reparametrize(const Loop& loop, std::function<double(double)> rho, std::function<double(double)> rho_prime) {
  std::optional<Loop::DerivFn> deriv;
  if (loop.has_closed_form_derivative()) {
    deriv = [loop, rho, rho_prime](double t) { return Vec(rho_prime(t) * loop.sample(rho(t)).velocity); };
  }
  return Loop(
      loop.chart(), [loop, rho](double t) { return loop.sample(rho(t)).point; }, std::move(deriv),
      "reparametrization of (" + loop.metadata() + ")", Loop::Options{true, false});
}

// ---------------------------------------------------------------------------
// Length

inline QuadratureResult loop_length_detailed(const GaugeDomain& domain, const Loop& loop,
                                             const QuadratureSpec& quad = {}) {
  auto integrand = [&](double t) {
    const LoopSample s = loop.sample(t);
    const ExtendedReal h = support(domain, s.point, TangentVector{s.point, s.velocity});
    if (h.is_infinite()) {
      std::ostringstream os;
      os << "infinite support along loop at t = " << t << ": " << loop.metadata();
      throw InfiniteSupportError(os.str(), t);
    }
    return h.value();
  };
  return integrate_unit_interval(integrand, quad);
}

/// Omega-length: integral over [0, 1] of h(q(t), q'(t)).
inline double loop_length(const GaugeDomain& domain, const Loop& loop, const QuadratureSpec& quad = {}) {
  return loop_length_detailed(domain, loop, quad).value;
}

// ---------------------------------------------------------------------------
// Families

inline constexpr int kDefaultAxisSamples = 32;
inline constexpr std::size_t kMaxGridLoops = 4096;

/// Per-axis sample count: 32, reduced so the full grid stays within 4096 loops.
inline int default_axis_samples(int dim) {
  if (dim <= 0) return 1;
  int s = kDefaultAxisSamples;
  auto total = [dim](int s_) {
    double t = 1.0;
    for (int i = 0; i < dim; ++i) t *= s_;
    return t;
  };
  while (s > 2 && total(s) > static_cast<double>(kMaxGridLoops)) --s;
  return s;
}

struct ParamAxis {
  std::string name;
  double lower = 0.0;
  double upper = 1.0;
  int samples = kDefaultAxisSamples;
  bool periodic = false;

  double spacing() const {
    if (periodic) return (upper - lower) / samples;
    return samples > 1 ? (upper - lower) / (samples - 1) : (upper - lower);
  }
  double sample(int i) const {
    if (periodic) return lower + (upper - lower) * static_cast<double>(i) / samples;
    if (samples == 1) return 0.5 * (lower + upper);
    return lower + (upper - lower) * static_cast<double>(i) / (samples - 1);
  }
};

struct ParamSpace {
  std::vector<ParamAxis> axes;

  int dim() const { return static_cast<int>(axes.size()); }

  std::size_t grid_size() const {
    std::size_t n = 1;
    for (const auto& a : axes) n *= static_cast<std::size_t>(a.samples);
    return n;
  }

  /// Row-major index -> parameter vector (last axis fastest).
  std::vector<double> grid_point(std::size_t index) const {
    std::vector<double> p(axes.size());
    for (std::size_t k = axes.size(); k-- > 0;) {
      const auto n = static_cast<std::size_t>(axes[k].samples);
      p[k] = axes[k].sample(static_cast<int>(index % n));
      index /= n;
    }
    return p;
  }

  /// Wraps periodic coordinates and clamps the others into the box.
  std::vector<double> normalize(std::vector<double> p) const {
    for (std::size_t k = 0; k < axes.size(); ++k) {
      const auto& a = axes[k];
      if (a.periodic) {
        p[k] = a.lower + (a.upper - a.lower) * wrap_unit((p[k] - a.lower) / (a.upper - a.lower));
      } else {
        p[k] = std::clamp(p[k], a.lower, a.upper);
      }
    }
    return p;
  }

  std::vector<int> resolution() const {
    std::vector<int> r;
    for (const auto& a : axes) r.push_back(a.samples);
    return r;
  }

  void validate() const {
    for (const auto& a : axes) {
      if (a.samples < 1) throw InvalidInputError("parameter axis '" + a.name + "' needs at least one sample");
      if (!(a.upper > a.lower)) throw InvalidInputError("parameter axis '" + a.name + "' has an empty range");
    }
  }
};

struct LoopFamily {
  enum class Objective {
    kForward,            // l(q)
    kForwardPlusReverse  // l(q) + l(reverse q)
  };

  std::string name;
  ParamSpace params;
  std::function<Loop(const std::vector<double>&)> loop_at;
  /// Loops outside the parametrized grid that belong to the family, e.g. the
  /// constant loops over the binding of an open book.
  std::vector<Loop> singular_loops;
  Objective objective = Objective::kForward;
  std::string notes;
};

struct RefineSpec {
  int budget = 200;  // evaluations per extremum
  bool enabled = true;
};

struct RefinementStep {
  std::string extremum;  // "sup" or "inf"
  std::string method;    // "golden-section", "nelder-mead" or "none"
  int evaluations = 0;
  double before = 0.0;
  double after = 0.0;
};

/// Value of the objective at an extremum, split into the two traversal directions.
struct ExtremumValue {
  std::vector<double> params;  // empty for singular loops
  std::optional<std::size_t> singular_index;
  double total = 0.0;
  double forward = 0.0;
  double reverse = 0.0;  // 0 unless the objective includes the reverse loop
};

struct ExtremalLengthReport {
  std::string family;
  double E = 0.0;  // sup of the objective
  double e = 0.0;  // inf of the objective
  double grid_E = 0.0;
  double grid_e = 0.0;
  ExtremumValue argmax;
  ExtremumValue argmin;
  std::vector<int> resolution;
  std::size_t loops_evaluated = 0;
  std::vector<RefinementStep> history;
  double tolerance = 0.0;  // estimated numerical error of E and e
  std::string notes;
};

namespace detail {

struct ObjectiveValue {
  double total = 0.0;
  double forward = 0.0;
  double reverse = 0.0;
  double quad_error = 0.0;
};

inline ObjectiveValue evaluate_objective(const GaugeDomain& domain, const Loop& loop, LoopFamily::Objective objective,
                                         const QuadratureSpec& quad) {
  ObjectiveValue v;
  const QuadratureResult fwd = loop_length_detailed(domain, loop, quad);
  v.forward = fwd.value;
  v.quad_error = fwd.error_estimate;
  if (objective == LoopFamily::Objective::kForwardPlusReverse) {
    const QuadratureResult rev = loop_length_detailed(domain, reverse(loop), quad);
    v.reverse = rev.value;
    v.quad_error += rev.error_estimate;
  }
  v.total = v.forward + v.reverse;
  return v;
}

inline std::string format_params(const std::vector<double>& p) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i];
  os << ")";
  return os.str();
}

}  // namespace detail

/// sup and inf of the family objective: full grid evaluation, then local
/// derivative-free refinement started at the grid extrema.
inline ExtremalLengthReport extremal_lengths(const GaugeDomain& domain, const LoopFamily& family,
                                             const QuadratureSpec& quad = {}, const RefineSpec& refine = {}) {
  quad.validate();
  family.params.validate();
  const ParamSpace& space = family.params;

  auto eval_params = [&](const std::vector<double>& p) {
    try {
      return detail::evaluate_objective(domain, family.loop_at(p), family.objective, quad);
    } catch (const InfiniteSupportError& err) {
      throw InfiniteLengthError("family '" + family.name + "' has a loop of infinite length at parameters " +
                                    detail::format_params(p),
                                p, err.t());
    }
  };

  const std::size_t n_grid = space.grid_size();
  const std::size_t n_singular = family.singular_loops.size();
  std::vector<detail::ObjectiveValue> values(n_grid + n_singular);
  parallel_for(n_grid + n_singular, [&](std::size_t i) {
    if (i < n_grid) {
      values[i] = eval_params(space.grid_point(i));
    } else {
      try {
        values[i] = detail::evaluate_objective(domain, family.singular_loops[i - n_grid], family.objective, quad);
      } catch (const InfiniteSupportError& err) {
        throw InfiniteLengthError("family '" + family.name + "' has a singular loop of infinite length", {}, err.t());
      }
    }
  });

  std::size_t imax = 0, imin = 0;
  double quad_err = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i].total > values[imax].total) imax = i;
    if (values[i].total < values[imin].total) imin = i;
    quad_err = std::max(quad_err, values[i].quad_error);
  }

  auto extremum_at = [&](std::size_t i) {
    ExtremumValue x;
    if (i < n_grid) {
      x.params = space.grid_point(i);
    } else {
      x.singular_index = i - n_grid;
    }
    x.total = values[i].total;
    x.forward = values[i].forward;
    x.reverse = values[i].reverse;
    return x;
  };

  ExtremalLengthReport report;
  report.family = family.name;
  report.resolution = space.resolution();
  report.loops_evaluated = values.size();
  report.argmax = extremum_at(imax);
  report.argmin = extremum_at(imin);
  report.grid_E = report.E = report.argmax.total;
  report.grid_e = report.e = report.argmin.total;
  report.notes = family.notes;

  // Local refinement. sign = +1 polishes the sup, -1 the inf.
  auto polish = [&](ExtremumValue& ext, double sign, const char* label) {
    RefinementStep step{label, "none", 0, ext.total, ext.total};
    if (!refine.enabled || refine.budget <= 0 || ext.singular_index || space.dim() == 0) {
      report.history.push_back(step);
      return;
    }
    std::vector<double> best_params = ext.params;
    detail::ObjectiveValue best_value{ext.total, ext.forward, ext.reverse, 0.0};
    auto objective = [&](const std::vector<double>& raw) {
      const std::vector<double> p = space.normalize(raw);
      const detail::ObjectiveValue v = eval_params(p);
      if (sign * v.total > sign * best_value.total) {
        best_value = v;
        best_params = p;
      }
      quad_err = std::max(quad_err, v.quad_error);
      return sign * v.total;
    };
    if (space.dim() == 1) {
      const ParamAxis& axis = space.axes[0];
      const double x0 = ext.params[0];
      double lo = x0 - axis.spacing(), hi = x0 + axis.spacing();
      if (!axis.periodic) {
        lo = std::max(lo, axis.lower);
        hi = std::min(hi, axis.upper);
      }
      const LocalOptimum r = golden_section_maximize([&](double x) { return objective({x}); }, lo, hi, x0,
                                                     sign * ext.total, refine.budget);
      step.method = "golden-section";
      step.evaluations = r.evaluations;
    } else {
      std::vector<double> steps;
      for (const auto& a : space.axes) steps.push_back(0.5 * a.spacing());
      const LocalOptimum r = nelder_mead_maximize(objective, ext.params, sign * ext.total, steps, refine.budget);
      step.method = "nelder-mead";
      step.evaluations = r.evaluations;
    }
    ext.params = best_params;
    ext.total = best_value.total;
    ext.forward = best_value.forward;
    ext.reverse = best_value.reverse;
    step.after = ext.total;
    report.history.push_back(step);
  };
  polish(report.argmax, 1.0, "sup");
  polish(report.argmin, -1.0, "inf");
  report.E = report.argmax.total;
  report.e = report.argmin.total;

  report.tolerance = std::max(quad_err, quad.qtol * std::max(std::abs(report.E), std::abs(report.e)));
  return report;
}

// ---------------------------------------------------------------------------
// Helpers shared by the scenario constructors

/// Maps the cube [-1, 1]^m onto the closed ball of radius 1 - collar, radially.
inline std::vector<double> cube_to_ball(const std::vector<double>& u, double collar) {
  double inf_norm = 0.0, two_norm = 0.0;
  for (double x : u) {
    inf_norm = std::max(inf_norm, std::abs(x));
    two_norm += x * x;
  }
  two_norm = std::sqrt(two_norm);
  std::vector<double> x(u.size(), 0.0);
  if (two_norm == 0.0) return x;
  const double s = inf_norm / two_norm * (1.0 - collar);
  for (std::size_t i = 0; i < u.size(); ++i) x[i] = u[i] * s;
  return x;
}

}  // namespace stringcap
