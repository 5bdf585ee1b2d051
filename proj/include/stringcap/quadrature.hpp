#pragma once

// Composite Simpson on [0, 1] with panel doubling and a Richardson step.

#include <cmath>
#include <functional>
#include <string>

#include "stringcap/errors.hpp"

namespace stringcap {

struct QuadratureSpec {
  int panels = 512;       // initial number of subintervals (even, >= 8)
  double qtol = 1e-7;     // relative change that stops doubling
  int max_doublings = 6;

  void validate() const {
    if (panels < 8 || panels % 2 != 0) throw InvalidInputError("quadrature panels must be even and >= 8");
    if (!(qtol > 0.0)) throw InvalidInputError("quadrature tolerance must be positive");
    if (max_doublings < 0) throw InvalidInputError("max_doublings must be >= 0");
  }
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;  // |S_2N - S_N| / 15 at the last doubling
  int panels = 0;               // panels of the finest Simpson sum used
  bool converged = false;
};

/// Integrates f over [0, 1]. Simpson sums are built from nested trapezoid sums,
/// so each doubling only evaluates the new midpoints.
inline QuadratureResult integrate_unit_interval(const std::function<double(double)>& f, const QuadratureSpec& spec) {
  spec.validate();
  const int half = spec.panels / 2;
  // Trapezoid sum on `half` intervals, then refine to `panels`.
  double edge = 0.5 * (f(0.0) + f(1.0));
  double interior = 0.0;
  for (int i = 1; i < half; ++i) interior += f(static_cast<double>(i) / half);
  const double t_half = (edge + interior) / half;

  auto add_midpoints = [&](int intervals) {
    double s = 0.0;
    for (int i = 0; i < intervals; ++i) s += f((static_cast<double>(i) + 0.5) / intervals);
    return s;
  };

  interior += add_midpoints(half);
  int n = spec.panels;
  double t_n = (edge + interior) / n;
  double s_n = (4.0 * t_n - t_half) / 3.0;

  QuadratureResult result;
  result.value = s_n;
  result.panels = n;
  for (int d = 0; d < spec.max_doublings; ++d) {
    interior += add_midpoints(n);
    const int n2 = 2 * n;
    const double t_2n = (edge + interior) / n2;
    const double s_2n = (4.0 * t_2n - t_n) / 3.0;
    const double change = s_2n - s_n;
    result.value = s_2n + change / 15.0;
    result.error_estimate = std::abs(change) / 15.0;
    result.panels = n2;
    if (std::abs(change) <= spec.qtol * std::abs(s_2n)) {
      result.converged = true;
      return result;
    }
    n = n2;
    t_n = t_2n;
    s_n = s_2n;
  }
  return result;
}

}  // namespace stringcap
