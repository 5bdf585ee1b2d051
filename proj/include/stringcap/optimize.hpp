#pragma once

// Derivative-free local maximizers used to polish grid extrema.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

namespace stringcap {

struct LocalOptimum {
  std::vector<double> x;
  double value = 0.0;
  int evaluations = 0;
};

/// Golden-section maximization of a 1-D function on [lo, hi]. The returned
/// point is the best one evaluated, and `start` is always among them.
inline LocalOptimum golden_section_maximize(const std::function<double(double)>& f, double lo, double hi,
                                            double start, double start_value, int budget, double xtol = 1e-12) {
  constexpr double kInvPhi = 0.6180339887498949;
  LocalOptimum best{{start}, start_value, 0};
  auto consider = [&](double x, double v) {
    if (v > best.value) best = {{x}, v, best.evaluations};
  };
  if (budget < 2 || !(hi > lo)) return best;
  double a = lo, b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c), fd = f(d);
  int used = 2;
  consider(c, fc);
  consider(d, fd);
  while (used < budget && (b - a) > xtol * (1.0 + std::abs(a) + std::abs(b))) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
      consider(c, fc);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
      consider(d, fd);
    }
    ++used;
  }
  best.evaluations = used;
  return best;
}

/// Nelder-Mead maximization from `start` with per-axis initial steps.
/// Standard coefficients (reflection 1, expansion 2, contraction 1/2, shrink 1/2).
/// Stops once both the value spread and the simplex size fall below tolerance.
inline LocalOptimum nelder_mead_maximize(const std::function<double(const std::vector<double>&)>& f,
                                         const std::vector<double>& start, double start_value,
                                         const std::vector<double>& steps, int budget, double ftol = 1e-13,
                                         double xtol = 1e-9) {
  const std::size_t dim = start.size();
  LocalOptimum best{start, start_value, 0};
  if (dim == 0 || budget <= static_cast<int>(dim)) return best;

  std::vector<std::vector<double>> simplex(dim + 1, start);
  std::vector<double> values(dim + 1, start_value);
  int used = 0;
  auto eval = [&](const std::vector<double>& x) {
    const double v = f(x);
    ++used;
    if (v > best.value) {
      best.x = x;
      best.value = v;
    }
    return v;
  };
  for (std::size_t i = 0; i < dim; ++i) {
    simplex[i + 1][i] += steps[i];
    values[i + 1] = eval(simplex[i + 1]);
  }

  std::vector<std::size_t> order(dim + 1);
  while (used < budget) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return values[i] > values[j]; });
    const std::size_t hi = order.front(), lo = order.back(), second_lo = order[dim - 1];
    double diameter = 0.0;
    for (std::size_t i = 0; i <= dim; ++i)
      for (std::size_t k = 0; k < dim; ++k) diameter = std::max(diameter, std::abs(simplex[i][k] - simplex[hi][k]));
    if (std::abs(values[hi] - values[lo]) <= ftol * (1.0 + std::abs(values[hi])) && diameter <= xtol) break;

    std::vector<double> centroid(dim, 0.0);
    for (std::size_t i = 0; i <= dim; ++i) {
      if (i == lo) continue;
      for (std::size_t k = 0; k < dim; ++k) centroid[k] += simplex[i][k] / static_cast<double>(dim);
    }
    auto along = [&](double coef) {
      std::vector<double> x(dim);
      for (std::size_t k = 0; k < dim; ++k) x[k] = centroid[k] + coef * (simplex[lo][k] - centroid[k]);
      return x;
    };

    const auto xr = along(-1.0);
    const double fr = eval(xr);
    if (fr > values[hi]) {
      if (used >= budget) {
        simplex[lo] = xr;
        values[lo] = fr;
        break;
      }
      const auto xe = along(-2.0);
      const double fe = eval(xe);
      if (fe > fr) {
        simplex[lo] = xe;
        values[lo] = fe;
      } else {
        simplex[lo] = xr;
        values[lo] = fr;
      }
    } else if (fr > values[second_lo]) {
      simplex[lo] = xr;
      values[lo] = fr;
    } else {
      if (used >= budget) break;
      const bool outside = fr > values[lo];
      const auto xc = along(outside ? -0.5 : 0.5);
      const double fc = eval(xc);
      if (fc > std::max(fr, values[lo])) {
        simplex[lo] = xc;
        values[lo] = fc;
      } else {
        for (std::size_t i = 0; i <= dim && used < budget; ++i) {
          if (i == hi) continue;
          for (std::size_t k = 0; k < dim; ++k) simplex[i][k] = simplex[hi][k] + 0.5 * (simplex[i][k] - simplex[hi][k]);
          values[i] = eval(simplex[i]);
        }
      }
    }
  }
  best.evaluations = used;
  return best;
}

}  // namespace stringcap
