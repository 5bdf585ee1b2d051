#pragma once

// Symbolic string-topology classes. Terms are immutable trees shared by pointer.

#include <algorithm>
#include <memory>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"
#include "stringcap/errors.hpp"
#include "stringcap/stralg/filtration.hpp"

namespace stringcap::stralg {

struct Node;
using Term = std::shared_ptr<const Node>;

/// [A_{g,sign}]: the circle action `action` applied to the cycle g.
struct ActionClass {
  std::string action;
  int sign = 1;  // +1 or -1
  std::string cycle;
  FiltExpr filt;  // sup of loop lengths in the family
};

/// Constant loops over a cycle.
struct ConstantLoops {
  std::string cycle;
};

/// B with Delta[B] = [A] for the given action class.
struct BVPreimage {
  Term of;
};

/// The constant-loop inclusion applied to a cohomology class.
struct Iota {
  std::string beta;
};

/// A single loop class q (or its reverse).
struct LoopClass {
  std::string label;
  bool reversed = false;
  FiltExpr filt;
};

/// Flattened, canonically ordered product.
struct Star {
  std::vector<Term> factors;
};

struct Delta {
  Term of;
};

struct Node {
  std::variant<ActionClass, ConstantLoops, BVPreimage, Iota, LoopClass, Star, Delta> value;
};

inline Term make_action(std::string action, int sign, std::string cycle, FiltExpr filt) {
  if (sign != 1 && sign != -1) throw InvalidInputError("action class sign must be +1 or -1");
  return std::make_shared<const Node>(Node{ActionClass{std::move(action), sign, std::move(cycle), std::move(filt)}});
}
inline Term make_constant_loops(std::string cycle) {
  return std::make_shared<const Node>(Node{ConstantLoops{std::move(cycle)}});
}
inline Term make_bv_preimage(Term of) { return std::make_shared<const Node>(Node{BVPreimage{std::move(of)}}); }
inline Term make_iota(std::string beta) { return std::make_shared<const Node>(Node{Iota{std::move(beta)}}); }
inline Term make_loop_class(std::string label, bool reversed, FiltExpr filt) {
  return std::make_shared<const Node>(Node{LoopClass{std::move(label), reversed, std::move(filt)}});
}
inline Term make_delta(Term of) { return std::make_shared<const Node>(Node{Delta{std::move(of)}}); }

template <class T>
const T* as(const Term& t) {
  return t ? std::get_if<T>(&t->value) : nullptr;
}

inline std::string sign_symbol(int sign) { return sign > 0 ? "+" : "-"; }

/// Canonical text form. Two terms are equal iff their keys are equal.
inline std::string key(const Term& t) {
  if (!t) return "<null>";
  return std::visit(
      [](const auto& n) -> std::string {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, ActionClass>) {
          return "A[" + n.action + "," + sign_symbol(n.sign) + ";" + n.cycle + "]{" + n.filt.to_string() + "}";
        } else if constexpr (std::is_same_v<N, ConstantLoops>) {
          return "const(" + n.cycle + ")";
        } else if constexpr (std::is_same_v<N, BVPreimage>) {
          return "B(" + key(n.of) + ")";
        } else if constexpr (std::is_same_v<N, Iota>) {
          return "iota(" + n.beta + ")";
        } else if constexpr (std::is_same_v<N, LoopClass>) {
          return (n.reversed ? "rev(" + n.label + ")" : n.label) + "{" + n.filt.to_string() + "}";
        } else if constexpr (std::is_same_v<N, Star>) {
          std::string s;
          for (std::size_t i = 0; i < n.factors.size(); ++i) s += (i ? " * " : "") + key(n.factors[i]);
          return "(" + s + ")";
        } else {
          return "Delta(" + key(n.of) + ")";
        }
      },
      t->value);
}

inline bool same(const Term& a, const Term& b) { return key(a) == key(b); }

/// Product of factors, flattened and sorted by canonical key.
inline Term make_star(const std::vector<Term>& factors) {
  std::vector<Term> flat;
  for (const auto& f : factors) {
    if (const auto* s = as<Star>(f)) {
      flat.insert(flat.end(), s->factors.begin(), s->factors.end());
    } else {
      flat.push_back(f);
    }
  }
  if (flat.size() == 1) return flat.front();
  std::stable_sort(flat.begin(), flat.end(), [](const Term& a, const Term& b) { return key(a) < key(b); });
  return std::make_shared<const Node>(Node{Star{std::move(flat)}});
}

/// Filtration carried by the term itself: Star adds, Delta and the BV preimage
/// preserve, constant loops and iota sit at 0+.
inline FiltExpr natural_filtration(const Term& t) {
  return std::visit(
      [](const auto& n) -> FiltExpr {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, ActionClass> || std::is_same_v<N, LoopClass>) {
          return n.filt;
        } else if constexpr (std::is_same_v<N, ConstantLoops> || std::is_same_v<N, Iota>) {
          return FiltExpr::zero_plus();
        } else if constexpr (std::is_same_v<N, Star>) {
          FiltExpr f;
          for (const auto& x : n.factors) f += natural_filtration(x);
          return f;
        } else {
          return natural_filtration(n.of);
        }
      },
      t->value);
}

inline nlohmann::json term_to_json(const Term& t) {
  using nlohmann::json;
  return std::visit(
      [](const auto& n) -> json {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, ActionClass>) {
          return {{"kind", "action"}, {"action", n.action}, {"sign", sign_symbol(n.sign)}, {"cycle", n.cycle},
                  {"filtration", n.filt.to_json()}};
        } else if constexpr (std::is_same_v<N, ConstantLoops>) {
          return {{"kind", "constant_loops"}, {"cycle", n.cycle}};
        } else if constexpr (std::is_same_v<N, BVPreimage>) {
          return {{"kind", "bv_preimage"}, {"of", term_to_json(n.of)}};
        } else if constexpr (std::is_same_v<N, Iota>) {
          return {{"kind", "iota"}, {"beta", n.beta}};
        } else if constexpr (std::is_same_v<N, LoopClass>) {
          return {{"kind", "loop"}, {"label", n.label}, {"reversed", n.reversed}, {"filtration", n.filt.to_json()}};
        } else if constexpr (std::is_same_v<N, Star>) {
          json fs = json::array();
          for (const auto& f : n.factors) fs.push_back(term_to_json(f));
          return {{"kind", "star"}, {"factors", fs}};
        } else {
          return {{"kind", "delta"}, {"of", term_to_json(n.of)}};
        }
      },
      t->value);
}

inline Term term_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "action") {
    const std::string s = j.at("sign").get<std::string>();
    if (s != "+" && s != "-") throw InvalidInputError("action sign must be '+' or '-'");
    return make_action(j.at("action").get<std::string>(), s == "+" ? 1 : -1, j.at("cycle").get<std::string>(),
                       FiltExpr::from_json(j.at("filtration")));
  }
  if (kind == "constant_loops") return make_constant_loops(j.at("cycle").get<std::string>());
  if (kind == "bv_preimage") return make_bv_preimage(term_from_json(j.at("of")));
  if (kind == "iota") return make_iota(j.at("beta").get<std::string>());
  if (kind == "loop") {
    return make_loop_class(j.at("label").get<std::string>(), j.at("reversed").get<bool>(),
                           FiltExpr::from_json(j.at("filtration")));
  }
  if (kind == "star") {
    std::vector<Term> fs;
    for (const auto& f : j.at("factors")) fs.push_back(term_from_json(f));
    return make_star(fs);
  }
  if (kind == "delta") return make_delta(term_from_json(j.at("of")));
  throw InvalidInputError("unknown term kind '" + kind + "'");
}

}  // namespace stringcap::stralg
