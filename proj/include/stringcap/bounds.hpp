#pragma once

// Capacity bounds: resolve a certificate's filtration symbols to extremal
// lengths of the scenario's loop families and evaluate its conclusion.

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "stringcap/catalog.hpp"
#include "stringcap/errors.hpp"
#include "stringcap/loops.hpp"
#include "stringcap/quadrature.hpp"
#include "stringcap/stralg/certificate.hpp"
#include "stringcap/stralg/derive.hpp"

namespace stringcap {

struct BoundOptions {
  QuadratureSpec quad;
  RefineSpec refine;
};

/// Numeric value of one filtration symbol.
struct NumericBinding {
  std::string symbol;
  double value = 0.0;       // refined value, used by the certificate
  double grid_value = 0.0;  // best value on the sample grid
  double tolerance = 0.0;
  std::string family;
  std::string which;  // "sup total", "inf forward", ...

  nlohmann::json to_json() const {
    return {{"symbol", symbol}, {"value", value},   {"grid_value", grid_value},
            {"tolerance", tolerance}, {"family", family}, {"which", which}};
  }
};

struct CapacityBound {
  std::string scenario_id;
  TargetClass target;
  double upper_bound = 0.0;
  double tolerance = 0.0;  // propagated from the bindings
  bool equality_known = false;
  std::optional<double> known_value;  // value of the width where it is known
  std::string equality_source;        // how the matching lower bound arises
  stralg::Certificate certificate;
  stralg::CertificateCheck check;
  std::vector<NumericBinding> numeric_bindings;
  std::string gr_symbol;  // e.g. "Gr([pt], Omega)"
  std::vector<std::string> notes;

  nlohmann::json to_json() const {
    nlohmann::json bs = nlohmann::json::array();
    for (const auto& b : numeric_bindings) bs.push_back(b.to_json());
    nlohmann::json j{{"scenario_id", scenario_id},
                     {"target", target.to_json()},
                     {"gr_symbol", gr_symbol},
                     {"upper_bound", upper_bound},
                     {"tolerance", tolerance},
                     {"bound_expression", certificate.bound_expression()},
                     {"equality_known", equality_known},
                     {"equality_source", equality_source},
                     {"numeric_bindings", bs},
                     {"certificate_check", check.to_json()},
                     {"notes", notes}};
    j["known_value"] = known_value ? nlohmann::json(*known_value) : nlohmann::json(nullptr);
    return j;
  }
};

/// Extremal-length reports per family, computed on first use.
class BindingResolver {
 public:
  BindingResolver(const Scenario& s, BoundOptions opts) : s_(s), opts_(std::move(opts)) {}

  const ExtremalLengthReport& report(const std::string& family) {
    std::lock_guard lock(mu_);
    auto it = reports_.find(family);
    if (it == reports_.end()) it = reports_.emplace(family, extremal_lengths(s_.domain, s_.family(family), opts_.quad, opts_.refine)).first;
    return it->second;
  }

  NumericBinding resolve(const std::string& symbol) {
    auto sel_it = s_.symbolic_bindings.find(symbol);
    if (sel_it == s_.symbolic_bindings.end()) throw UnboundSymbolError(symbol);
    const BindingSelector& sel = sel_it->second;
    const ExtremalLengthReport& r = report(sel.family);
    const bool sup = sel.extremum == BindingSelector::Extremum::kSup;
    const ExtremumValue& ext = sup ? r.argmax : r.argmin;
    NumericBinding b;
    b.symbol = symbol;
    b.family = sel.family;
    b.tolerance = r.tolerance;
    switch (sel.component) {
      case BindingSelector::Component::kTotal:
        b.value = ext.total;
        b.grid_value = sup ? r.grid_E : r.grid_e;
        b.which = sup ? "sup total" : "inf total";
        break;
      case BindingSelector::Component::kForward:
        b.value = ext.forward;
        b.grid_value = ext.forward;
        b.which = sup ? "forward part at sup" : "forward part at inf";
        break;
      case BindingSelector::Component::kReverse:
        b.value = ext.reverse;
        b.grid_value = ext.reverse;
        b.which = sup ? "reverse part at sup" : "reverse part at inf";
        break;
    }
    return b;
  }

 private:
  const Scenario& s_;
  BoundOptions opts_;
  std::mutex mu_;
  std::map<std::string, ExtremalLengthReport> reports_;
};

namespace detail {

inline void attach_equality(const Scenario& s, CapacityBound& b) {
  const double two_pi = 2.0 * std::numbers::pi;
  if (s.kind == "ellipsoid1") {
    const double a = s.parameters.at("a").get<double>();
    if (b.target.route == "ob1.M") {
      b.equality_known = true;
      b.known_value = two_pi * a;
      b.equality_source = "the round sphere of radius a sits inside the ellipsoid metric, and unitary frames A(q) with "
                          "A(q)e_1 = q move one ball along the zero section";
    } else if (b.target.route == "ob1.pt" && a == 1.0) {
      b.known_value = two_pi;
      b.equality_source = "for the round sphere the width of the point class is 2 pi, strictly below this bound";
    }
  } else if (s.kind == "ellipsoid2" && b.target.route == "ellipsoid2.pt") {
    const double a = s.parameters.at("a").get<double>();
    b.equality_known = true;
    b.known_value = two_pi * a;
    b.equality_source = "the point class dominates the zero-section class, whose width is at least 2 pi a";
  }
}

}  // namespace detail

/// Bound for one target, reusing the family reports held by `resolver`.
inline CapacityBound bound_for_target(const Scenario& s, const TargetClass& target, BindingResolver& resolver) {
  CapacityBound b;
  b.scenario_id = s.id;
  b.target = target;
  b.gr_symbol = "Gr(" + target.name + ", Omega)";
  b.certificate = stralg::derive_certificate(s, target);

  std::map<std::string, double> tolerances;
  for (const auto& d : b.certificate.derivations) {
    for (const auto& [sym, coef] : d.conclusion.filtration.coefficients()) {
      if (b.certificate.bindings.count(sym)) continue;
      const NumericBinding nb = resolver.resolve(sym);
      b.certificate.bindings[sym] = nb.value;
      tolerances[sym] = nb.tolerance;
      b.numeric_bindings.push_back(nb);
    }
  }
  b.check = stralg::check_certificate(b.certificate);
  if (!b.check.passed) {
    throw RuleMismatchError("certificate for " + target.name + " on " + s.id + " failed its replay");
  }
  b.upper_bound = b.certificate.bound();
  // tolerance of the derivation attaining the minimum
  double best = std::numeric_limits<double>::infinity();
  for (const auto& d : b.certificate.derivations) {
    const double v = d.conclusion.filtration.evaluate(b.certificate.bindings);
    if (v < best) {
      best = v;
      b.tolerance = 0.0;
      for (const auto& [sym, coef] : d.conclusion.filtration.coefficients()) b.tolerance += coef * tolerances[sym];
    }
  }
  b.notes = b.certificate.notes;
  detail::attach_equality(s, b);
  return b;
}

/// Bounds for every target of the scenario.
inline std::vector<CapacityBound> compute_bounds(const Scenario& s, const BoundOptions& opts = {}) {
  BindingResolver resolver(s, opts);
  std::vector<CapacityBound> out;
  for (const auto& t : s.targets) out.push_back(bound_for_target(s, t, resolver));
  return out;
}

inline CapacityBound bound_for_route(const Scenario& s, const std::string& route, const BoundOptions& opts) {
  BindingResolver resolver(s, opts);
  return bound_for_target(s, s.target(route), resolver);
}

/// [pt] and, depending on the binding, [M] or [V] for an open book.
inline std::vector<CapacityBound> bound_open_book(const Scenario& s, const BoundOptions& opts = {}) {
  for (const char* fam : {"L_+", "L_-"}) s.family(fam);
  BindingResolver resolver(s, opts);
  std::vector<CapacityBound> out;
  for (const auto& t : s.targets)
    if (t.route.rfind("ob1.", 0) == 0) out.push_back(bound_for_target(s, t, resolver));
  return out;
}

inline CapacityBound bound_product_torus(const Scenario& s, int k, const BoundOptions& opts = {}) {
  if (!s.parameters.contains("k") && s.kind != "camel") throw InvalidInputError(s.id + " is not a product-torus scenario");
  const int built_k = s.kind == "camel" ? 1 : s.parameters.at("k").get<int>();
  if (built_k != k) {
    throw InvalidInputError(s.id + " was built for k = " + std::to_string(built_k) + ", not " + std::to_string(k));
  }
  return bound_for_route(s, "prod_torus.Tk", opts);
}

inline CapacityBound bound_non_orientable(const Scenario& s, const BoundOptions& opts = {}) {
  return bound_for_route(s, "non_orientable.Sigma", opts);
}

inline CapacityBound bound_ellipsoid2(const Scenario& s, const BoundOptions& opts = {}) {
  return bound_for_route(s, "ellipsoid2.pt", opts);
}

// ---------------------------------------------------------------------------
// Camel threshold

struct CamelLimitRow {
  double delta = 0.0;
  double bound = 0.0;        // computed from the certificate
  double closed_form = 0.0;  // eps + 3 delta
};

struct CamelLimitReport {
  int n = 2;
  double eps = 0.0;
  std::vector<CamelLimitRow> rows;
  double extrapolated = 0.0;  // polynomial extrapolation of the bounds to delta = 0

  nlohmann::json to_json() const {
    nlohmann::json rs = nlohmann::json::array();
    for (const auto& r : rows) rs.push_back({{"delta", r.delta}, {"bound", r.bound}, {"closed_form", r.closed_form}});
    return {{"n", n}, {"eps", eps}, {"rows", rs}, {"extrapolated", extrapolated}};
  }
};

/// Value at 0 of the interpolating polynomial through (x_i, y_i) (Neville).
inline double extrapolate_to_zero(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.empty() || x.size() != y.size()) throw InvalidInputError("extrapolation needs matching nonempty samples");
  std::vector<double> p = y;
  for (std::size_t level = 1; level < x.size(); ++level) {
    for (std::size_t i = 0; i + level < x.size(); ++i) {
      const double xi = x[i], xj = x[i + level];
      if (xi == xj) throw InvalidInputError("extrapolation samples must be distinct");
      p[i] = (xj * p[i] - xi * p[i + 1]) / (xj - xi);
    }
  }
  return p.front();
}

inline CamelLimitReport camel_limit_report(int n, double eps, const std::vector<double>& delta_grid,
                                           const BoundOptions& opts = {}) {
  if (delta_grid.empty()) throw InvalidInputError("camel report needs at least one delta");
  for (double d : delta_grid)
    if (!(d > 0.0)) throw InvalidInputError("camel report needs delta > 0");
  CamelLimitReport rep;
  rep.n = n;
  rep.eps = eps;
  std::vector<double> xs, ys;
  for (double d : delta_grid) {
    const Scenario s = camel_scenario(n, eps, d);
    const CapacityBound b = bound_product_torus(s, 1, opts);
    rep.rows.push_back({d, b.upper_bound, eps + 3.0 * d});
    xs.push_back(d);
    ys.push_back(b.upper_bound);
  }
  rep.extrapolated = extrapolate_to_zero(xs, ys);
  return rep;
}

}  // namespace stringcap
