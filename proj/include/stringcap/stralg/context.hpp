#pragma once

// Scenario-supplied tables for the symbolic calculus. Cycle labels are opaque;
// everything the rewrite rules need to know about them is declared here.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>

#include "json.hpp"
#include "stringcap/errors.hpp"
#include "stringcap/stralg/filtration.hpp"

namespace stringcap::stralg {

struct AlgebraContext {
  int manifold_dim = 0;
  std::string manifold = "M";  // label of the fundamental cycle
  /// Rule ids whose axioms the scenario provides (the general product and
  /// rotation rules are always available).
  std::set<std::string> axioms;
  /// Declared transverse intersections, keyed by the unordered label pair.
  std::map<std::pair<std::string, std::string>, std::string> intersections;
  /// zeta(g): the cycle swept by rotating g with the scenario's circle action.
  std::map<std::string, std::string> rotations;
  /// beta -> cycle whose constant loops represent iota(beta).
  std::map<std::string, std::string> thom;
  /// action -> rule id identifying Delta[B] = [A] for that action.
  std::map<std::string, std::string> bv_rules;
  /// action -> cycles made of fixed points (orbits are constant loops).
  std::map<std::string, std::set<std::string>> fixed_cycles;
  /// action -> length threshold of a homotopy to the trivial action.
  std::map<std::string, FiltExpr> contractible_actions;
  /// loop labels whose pullback of the tangent bundle is non-orientable.
  std::set<std::string> nonorientable_loops;
  std::map<std::string, int> label_dims;

  AlgebraContext() {
    thom["PD(T*M)"] = "M";
    thom["T*M_pt"] = "pt";
  }

  bool has_axiom(const std::string& rule) const { return axioms.count(rule) > 0; }

  void declare_intersection(const std::string& a, const std::string& b, const std::string& result) {
    intersections[ordered(a, b)] = result;
  }

  /// g1 cap g2: the fundamental cycle is a unit; other pairs must be declared.
  std::string intersect(const std::string& a, const std::string& b) const {
    if (a == manifold) return b;
    if (b == manifold) return a;
    auto it = intersections.find(ordered(a, b));
    if (it == intersections.end()) {
      throw IncompatibleBindingsError("no transverse intersection declared for " + a + " and " + b);
    }
    return it->second;
  }

  std::string rotate(const std::string& g) const {
    auto it = rotations.find(g);
    if (it == rotations.end()) throw IncompatibleBindingsError("no rotation declared for cycle " + g);
    return it->second;
  }

  std::string thom_cycle(const std::string& beta) const {
    auto it = thom.find(beta);
    if (it == thom.end()) throw IncompatibleBindingsError("no constant-loop representative declared for " + beta);
    return it->second;
  }

  std::optional<int> dim_of(const std::string& label) const {
    if (label == manifold && manifold_dim > 0) return manifold_dim;
    auto it = label_dims.find(label);
    if (it == label_dims.end()) return std::nullopt;
    return it->second;
  }

  nlohmann::json to_json() const {
    using nlohmann::json;
    json j;
    j["manifold_dim"] = manifold_dim;
    j["manifold"] = manifold;
    j["axioms"] = axioms;
    json inter = json::array();
    for (const auto& [k, v] : intersections) inter.push_back({{"a", k.first}, {"b", k.second}, {"result", v}});
    j["intersections"] = inter;
    j["rotations"] = rotations;
    j["thom"] = thom;
    j["bv_rules"] = bv_rules;
    j["fixed_cycles"] = fixed_cycles;
    json contr = json::object();
    for (const auto& [k, v] : contractible_actions) contr[k] = v.to_json();
    j["contractible_actions"] = contr;
    j["nonorientable_loops"] = nonorientable_loops;
    j["label_dims"] = label_dims;
    return j;
  }

  static AlgebraContext from_json(const nlohmann::json& j) {
    AlgebraContext c;
    c.manifold_dim = j.at("manifold_dim").get<int>();
    c.manifold = j.at("manifold").get<std::string>();
    c.axioms = j.at("axioms").get<std::set<std::string>>();
    for (const auto& e : j.at("intersections")) {
      c.declare_intersection(e.at("a").get<std::string>(), e.at("b").get<std::string>(),
                             e.at("result").get<std::string>());
    }
    c.rotations = j.at("rotations").get<std::map<std::string, std::string>>();
    c.thom = j.at("thom").get<std::map<std::string, std::string>>();
    c.bv_rules = j.at("bv_rules").get<std::map<std::string, std::string>>();
    c.fixed_cycles = j.at("fixed_cycles").get<std::map<std::string, std::set<std::string>>>();
    for (const auto& [k, v] : j.at("contractible_actions").items()) c.contractible_actions[k] = FiltExpr::from_json(v);
    c.nonorientable_loops = j.at("nonorientable_loops").get<std::set<std::string>>();
    c.label_dims = j.at("label_dims").get<std::map<std::string, int>>();
    return c;
  }

 private:
  static std::pair<std::string, std::string> ordered(const std::string& a, const std::string& b) {
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
  }
};

}  // namespace stringcap::stralg
