#pragma once

// Run configuration for the command-line tool: scenario selector and
// parameters, numerical overrides and output settings. Unknown keys are
// rejected before anything is computed.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <type_traits>
#include <vector>

#include "json.hpp"
#include "stringcap/bounds.hpp"
#include "stringcap/catalog.hpp"
#include "stringcap/errors.hpp"

namespace stringcap {

struct ScenarioParams {
  std::optional<int> n, k, d, m;
  std::optional<double> a, b, eps, delta, radius;
  std::optional<std::vector<double>> lengths;

  friend bool operator==(const ScenarioParams&, const ScenarioParams&) = default;
};

struct RunConfig {
  std::string scenario;
  ScenarioParams params;
  int quad_panels = QuadratureSpec{}.panels;
  double quad_tol = QuadratureSpec{}.qtol;
  int quad_max_doublings = QuadratureSpec{}.max_doublings;
  int refine_budget = RefineSpec{}.budget;
  std::string format = "json";
  std::string out;  // empty: standard output
  std::uint64_t seed = 0;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;

  BoundOptions bound_options() const {
    BoundOptions o;
    o.quad.panels = quad_panels;
    o.quad.qtol = quad_tol;
    o.quad.max_doublings = quad_max_doublings;
    o.refine.budget = refine_budget;
    o.refine.enabled = refine_budget > 0;
    return o;
  }
};

inline const std::vector<std::string>& scenario_kinds() {
  static const std::vector<std::string> kinds = {"ellipsoid1",  "ellipsoid2",     "camel",          "klein",
                                                 "product-torus", "openbook-s2", "openbook-torus", "openbook-rotate"};
  return kinds;
}

namespace detail {

inline void reject_unknown(const nlohmann::json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

template <class T>
std::optional<T> get_opt(const nlohmann::json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) return std::nullopt;
  try {
    if constexpr (std::is_same_v<T, int>) {
      if (!j.at(key).is_number_integer()) throw ConfigError("");
    } else if constexpr (std::is_same_v<T, double>) {
      if (!j.at(key).is_number()) throw ConfigError("");
    }
    return j.at(key).get<T>();
  } catch (const std::exception&) {
    throw ConfigError("key '" + std::string(key) + "' in " + where + " has the wrong type");
  }
}

}  // namespace detail

/// Checks ranges and that the parameters given make sense for the scenario.
inline void validate(const RunConfig& c) {
  const auto& kinds = scenario_kinds();
  if (std::find(kinds.begin(), kinds.end(), c.scenario) == kinds.end()) {
    throw ConfigError("unknown scenario '" + c.scenario + "'");
  }
  if (c.format != "json" && c.format != "csv" && c.format != "text") {
    throw ConfigError("format must be json, csv or text");
  }
  if (c.quad_panels < 8 || c.quad_panels % 2 != 0) throw ConfigError("quad-panels must be even and >= 8");
  if (!(c.quad_tol > 0.0)) throw ConfigError("quadrature tolerance must be positive");
  if (c.quad_max_doublings < 0) throw ConfigError("max doublings must be >= 0");
  if (c.refine_budget < 0) throw ConfigError("refine-budget must be >= 0");
  const ScenarioParams& p = c.params;
  std::map<std::string, std::set<std::string>> allowed = {
      {"ellipsoid1", {"n", "a", "radius"}},
      {"ellipsoid2", {"n", "a", "radius"}},
      {"openbook-rotate", {"n", "a", "radius"}},
      {"camel", {"n", "eps", "delta"}},
      {"klein", {"a", "b", "radius"}},
      {"product-torus", {"m", "d", "k", "lengths", "radius"}},
      {"openbook-s2", {"radius"}},
      {"openbook-torus", {"a", "radius"}},
  };
  const auto& ok = allowed.at(c.scenario);
  auto check = [&](bool present, const char* name) {
    if (present && !ok.count(name)) throw ConfigError("parameter '" + std::string(name) + "' does not apply to " + c.scenario);
  };
  check(p.n.has_value(), "n");
  check(p.k.has_value(), "k");
  check(p.d.has_value(), "d");
  check(p.m.has_value(), "m");
  check(p.a.has_value(), "a");
  check(p.b.has_value(), "b");
  check(p.eps.has_value(), "eps");
  check(p.delta.has_value(), "delta");
  check(p.radius.has_value(), "radius");
  check(p.lengths.has_value(), "lengths");
  if (p.radius && !(*p.radius >= 0.0)) throw ConfigError("radius must be >= 0");
}

inline RunConfig config_from_json(const nlohmann::json& j) {
  using detail::get_opt;
  detail::reject_unknown(j, {"scenario", "parameters", "quadrature", "refine_budget", "format", "out", "seed"}, "config");
  RunConfig c;
  const auto scenario = get_opt<std::string>(j, "scenario", "config");
  if (!scenario) throw ConfigError("config needs a 'scenario'");
  c.scenario = *scenario;
  if (j.contains("parameters")) {
    const auto& p = j.at("parameters");
    detail::reject_unknown(p, {"n", "k", "d", "m", "a", "b", "eps", "delta", "radius", "lengths"}, "parameters");
    c.params.n = get_opt<int>(p, "n", "parameters");
    c.params.k = get_opt<int>(p, "k", "parameters");
    c.params.d = get_opt<int>(p, "d", "parameters");
    c.params.m = get_opt<int>(p, "m", "parameters");
    c.params.a = get_opt<double>(p, "a", "parameters");
    c.params.b = get_opt<double>(p, "b", "parameters");
    c.params.eps = get_opt<double>(p, "eps", "parameters");
    c.params.delta = get_opt<double>(p, "delta", "parameters");
    c.params.radius = get_opt<double>(p, "radius", "parameters");
    c.params.lengths = get_opt<std::vector<double>>(p, "lengths", "parameters");
  }
  if (j.contains("quadrature")) {
    const auto& q = j.at("quadrature");
    detail::reject_unknown(q, {"panels", "qtol", "max_doublings"}, "quadrature");
    c.quad_panels = get_opt<int>(q, "panels", "quadrature").value_or(c.quad_panels);
    c.quad_tol = get_opt<double>(q, "qtol", "quadrature").value_or(c.quad_tol);
    c.quad_max_doublings = get_opt<int>(q, "max_doublings", "quadrature").value_or(c.quad_max_doublings);
  }
  c.refine_budget = get_opt<int>(j, "refine_budget", "config").value_or(c.refine_budget);
  c.format = get_opt<std::string>(j, "format", "config").value_or(c.format);
  c.out = get_opt<std::string>(j, "out", "config").value_or(c.out);
  c.seed = get_opt<std::uint64_t>(j, "seed", "config").value_or(c.seed);
  validate(c);
  return c;
}

inline nlohmann::json config_to_json(const RunConfig& c) {
  nlohmann::json p = nlohmann::json::object();
  const ScenarioParams& s = c.params;
  if (s.n) p["n"] = *s.n;
  if (s.k) p["k"] = *s.k;
  if (s.d) p["d"] = *s.d;
  if (s.m) p["m"] = *s.m;
  if (s.a) p["a"] = *s.a;
  if (s.b) p["b"] = *s.b;
  if (s.eps) p["eps"] = *s.eps;
  if (s.delta) p["delta"] = *s.delta;
  if (s.radius) p["radius"] = *s.radius;
  if (s.lengths) p["lengths"] = *s.lengths;
  nlohmann::json j{{"scenario", c.scenario},
                   {"parameters", p},
                   {"quadrature", {{"panels", c.quad_panels}, {"qtol", c.quad_tol}, {"max_doublings", c.quad_max_doublings}}},
                   {"refine_budget", c.refine_budget},
                   {"format", c.format},
                   {"seed", c.seed}};
  if (!c.out.empty()) j["out"] = c.out;
  return j;
}

/// Builds the scenario a configuration selects, filling defaults.
inline Scenario build_scenario(const RunConfig& c) {
  validate(c);
  const ScenarioParams& p = c.params;
  const double radius = p.radius.value_or(1.0);
  auto dilate = [&](Scenario s) {
    if (radius != 1.0) {
      s.domain = scaled_domain(s.domain, radius);
      s.parameters["radius"] = radius;
    }
    return s;
  };
  if (c.scenario == "ellipsoid1") return dilate(ellipsoid_scenario(p.n.value_or(2), p.a.value_or(0.5)));
  if (c.scenario == "ellipsoid2") return dilate(ellipsoid2_scenario(p.n.value_or(3), p.a.value_or(0.4)));
  if (c.scenario == "openbook-rotate") {
    // the diagonal-action open book of ellipsoid2 without the contraction axiom
    const int n = p.n.value_or(3);
    const double a = p.a.value_or(0.4);
    if (n < 3) throw InvalidInputError("openbook-rotate needs n >= 3");
    DomainSpec dom;
    dom.ambient_scales.assign(static_cast<std::size_t>(n + 1), 1.0);
    for (int i = n - 3; i <= n; ++i) dom.ambient_scales[static_cast<std::size_t>(i)] = a;
    dom.radius = radius;
    return open_book_scenario(PageSpec::disk(n - 1), PageFunction::round(), PageAction::rotate_page_pair(), dom);
  }
  if (c.scenario == "camel") return camel_scenario(p.n.value_or(2), p.eps.value_or(0.4), p.delta.value_or(0.01));
  if (c.scenario == "klein") return klein_bottle_scenario(p.a.value_or(1.0), p.b.value_or(1.0), radius);
  if (c.scenario == "product-torus") {
    const int m = p.m.value_or(0), d = p.d.value_or(2), k = p.k.value_or(1);
    if (m < 0 || d < 1) throw InvalidInputError("product torus needs m >= 0 and d >= 1");
    const auto lengths = p.lengths.value_or(std::vector<double>(static_cast<std::size_t>(m + d), 1.0));
    return product_torus_scenario(m, d, k, lengths, radius);
  }
  if (c.scenario == "openbook-s2") {
    DomainSpec dom;
    dom.radius = radius;
    return open_book_scenario(PageSpec::disk(1), PageFunction::round(), PageAction::trivial(), dom);
  }
  // openbook-torus: page S^1 of length 1, orbits of length a
  return open_book_scenario(PageSpec::circle(1.0), PageFunction::trivial(), PageAction::trivial(),
                            DomainSpec{{}, p.a.value_or(1.0), radius});
}

}  // namespace stringcap
