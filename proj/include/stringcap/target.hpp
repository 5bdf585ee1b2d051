#pragma once

#include <string>

#include "json.hpp"

namespace stringcap {

/// The homotopy class of a map f: N -> Omega whose parametric width is bounded,
/// with the cohomology class it is declared to pair with (mod 2) nontrivially.
struct TargetClass {
  std::string name;              // "[pt]", "[S^2]", "[T^1]", ...
  std::string declared_pairing;  // beta, e.g. "PD(T*M)"
  std::string route;             // derivation used for this target
  std::string justification;

  friend bool operator==(const TargetClass&, const TargetClass&) = default;

  nlohmann::json to_json() const {
    return {{"name", name}, {"declared_pairing", declared_pairing}, {"route", route}, {"justification", justification}};
  }
  static TargetClass from_json(const nlohmann::json& j) {
    return {j.at("name").get<std::string>(), j.at("declared_pairing").get<std::string>(),
            j.at("route").get<std::string>(), j.at("justification").get<std::string>()};
  }
};

}  // namespace stringcap
