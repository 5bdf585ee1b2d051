#pragma once

// The three operations on filtered classes: BV operator, product and the
// constant-loop inclusion. Known identities are applied eagerly.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "stringcap/stralg/context.hpp"
#include "stringcap/stralg/rules.hpp"
#include "stringcap/stralg/term.hpp"

namespace stringcap::stralg {

/// Delta preserves the filtration. Rotating an action class (CS3) or a BV
/// preimage with a registered identity is rewritten immediately.
inline FilteredClass delta(const AlgebraContext& ctx, const FilteredClass& c) {
  const Term wrapped = make_delta(c.term);
  const FilteredClass raw{wrapped, c.filtration, c.param_dim ? std::optional<int>(*c.param_dim + 1) : std::nullopt};
  if (as<ActionClass>(c.term)) return apply_rule(ctx, "CS3", {raw}).output;
  if (const auto* b = as<BVPreimage>(c.term)) {
    if (const auto* a = as<ActionClass>(b->of)) {
      auto it = ctx.bv_rules.find(a->action);
      if (it != ctx.bv_rules.end() && ctx.has_axiom(it->second)) return apply_rule(ctx, it->second, {raw}).output;
    }
  }
  return raw;
}

/// Product: filtrations add. Opposite-sign action classes of the same action
/// collapse to constant loops (CS1) and action classes absorb constant loops
/// (CS2); the result is canonically ordered.
inline FilteredClass star(const AlgebraContext& ctx, const FilteredClass& a, const FilteredClass& b) {
  std::vector<FilteredClass> factors;
  auto split = [&](const FilteredClass& c) {
    if (const auto* s = as<Star>(c.term)) {
      for (const auto& f : s->factors) factors.push_back(lift(ctx, f));
    } else {
      factors.push_back(c);
    }
  };
  split(a);
  split(b);
  const FiltExpr total = a.filtration + b.filtration;

  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < factors.size() && !changed; ++i) {
      for (std::size_t j = 0; j < factors.size() && !changed; ++j) {
        if (i == j) continue;
        const auto* x = as<ActionClass>(factors[i].term);
        const auto* y = as<ActionClass>(factors[j].term);
        std::string rule;
        if (x && y && x->action == y->action && x->sign > 0 && y->sign < 0) {
          rule = "CS1";
        } else if (x && as<ConstantLoops>(factors[j].term)) {
          rule = "CS2";
        }
        if (rule.empty()) continue;
        FilteredClass merged = apply_rule(ctx, rule, {factors[i], factors[j]}).output;
        const std::size_t hi = std::max(i, j), lo = std::min(i, j);
        factors.erase(factors.begin() + static_cast<std::ptrdiff_t>(hi));
        factors.erase(factors.begin() + static_cast<std::ptrdiff_t>(lo));
        factors.push_back(std::move(merged));
        changed = true;
      }
    }
  }

  std::vector<Term> terms;
  for (const auto& f : factors) terms.push_back(f.term);
  const Term product = make_star(terms);
  return FilteredClass{product, total, param_dim_of(ctx, product)};
}

/// iota(beta): constant loops over the Thom representative, valid at every
/// positive level.
inline FilteredClass iota(const AlgebraContext& ctx, const std::string& beta) {
  return apply_rule(ctx, "IOTA_CONST", {lift(ctx, make_iota(beta))}).output;
}

}  // namespace stringcap::stralg
