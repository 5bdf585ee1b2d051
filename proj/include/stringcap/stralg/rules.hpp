#pragma once

// The rewrite rules of the calculus. Each rule is a pure function of its input
// classes and the scenario tables; it never raises a filtration threshold.

#include <optional>
#include <string>
#include <vector>

#include "stringcap/errors.hpp"
#include "stringcap/stralg/context.hpp"
#include "stringcap/stralg/filtration.hpp"
#include "stringcap/stralg/term.hpp"

namespace stringcap::stralg {

/// A class together with the filtration level at which it is asserted.
struct FilteredClass {
  Term term;
  FiltExpr filtration;
  std::optional<int> param_dim;
};

struct RuleInfo {
  std::string id;
  std::string statement;  // formula-level statement of the identity
  bool needs_axiom = false;
  std::size_t arity = 1;
};

inline const std::vector<RuleInfo>& rule_table() {
  static const std::vector<RuleInfo> table = {
      {"CS1", "[A_{g1,+}] * [A_{g2,-}] = [g1 cap g2] in Lambda_{E_{g1,+} + E_{g2,-}}", false, 2},
      {"CS2", "[A_{g1,+-}] * [g2] = [A_{g1 cap g2,+-}] in Lambda_{E_{g1,+-}}", false, 2},
      {"CS3", "Delta[A_{g,+-}] = [A_{zeta g,+-}] in Lambda_{E_{g,+-}}", false, 1},
      {"ACTION_IS_BV", "Delta[B_{+-}] = [A_{+-}] in Lambda_{E_{+-}}", true, 1},
      {"OB_BV2", "Delta[D_theta] = [C_theta] in Lambda_{E_theta}", true, 1},
      {"HOPF_CONTRACT", "[A_{g}] = [g] in Lambda_c once the action is homotopic to the trivial one through loops of length <= c",
       true, 1},
      {"BINDING_CONTRACT", "[A_{g,+-}] = [g] when g consists of fixed points of the action", true, 1},
      {"NONORIENT_PAIR", "Delta(q) * Delta(rev q) = pt in Lambda_{l(q) + l(rev q)} when q^*TM is non-orientable",
       true, 2},
      {"STAR_COMM", "a * b = b * a", false, 1},
      {"IOTA_CONST", "iota(beta) = constant loops over the Thom representative of beta, at every positive level",
       false, 1},
  };
  return table;
}

inline const RuleInfo& rule_info(const std::string& id) {
  for (const auto& r : rule_table())
    if (r.id == id) return r;
  throw RuleMismatchError("unknown rule id '" + id + "'");
}

/// Parameter dimension of the family a term represents, when the labels involved have declared dimensions.
inline std::optional<int> param_dim_of(const AlgebraContext& ctx, const Term& t) {
  auto plus = [](std::optional<int> a, int b) -> std::optional<int> {
    if (!a) return std::nullopt;
    return *a + b;
  };
  if (const auto* a = as<ActionClass>(t)) return plus(ctx.dim_of(a->cycle), 1);
  if (const auto* c = as<ConstantLoops>(t)) return ctx.dim_of(c->cycle);
  if (const auto* b = as<BVPreimage>(t)) return plus(param_dim_of(ctx, b->of), -1);
  if (const auto* i = as<Iota>(t)) {
    auto it = ctx.thom.find(i->beta);
    if (it == ctx.thom.end()) return std::nullopt;
    return ctx.dim_of(it->second);
  }
  if (as<LoopClass>(t)) return 0;
  if (const auto* d = as<Delta>(t)) return plus(param_dim_of(ctx, d->of), 1);
  if (const auto* s = as<Star>(t)) {
    std::optional<int> total = 0;
    for (const auto& f : s->factors) {
      const auto d = param_dim_of(ctx, f);
      if (!d || !total) return std::nullopt;
      *total += *d;
    }
    if (ctx.manifold_dim <= 0) return std::nullopt;
    return *total - ctx.manifold_dim * static_cast<int>(s->factors.size() - 1);
  }
  return std::nullopt;
}

inline FilteredClass lift(const AlgebraContext& ctx, const Term& t) {
  return FilteredClass{t, natural_filtration(t), param_dim_of(ctx, t)};
}

struct RuleApplication {
  FilteredClass output;
  FiltExpr before;              // sum of the input levels
  FiltExpr after;               // level of the output
  FiltExpr declared_threshold;  // level at which the rule's identity holds
};

namespace detail {

[[noreturn]] inline void mismatch(const std::string& rule, const std::string& why) {
  throw RuleMismatchError(rule + ": " + why);
}

inline const ActionClass& expect_action(const std::string& rule, const Term& t) {
  const auto* a = as<ActionClass>(t);
  if (!a) mismatch(rule, "expected an action class, got " + key(t));
  return *a;
}

inline const Term& expect_delta_of(const std::string& rule, const Term& t) {
  const auto* d = as<Delta>(t);
  if (!d) mismatch(rule, "expected a Delta term, got " + key(t));
  return d->of;
}

}  // namespace detail

/// Applies `rule` to `inputs` (order-insensitive for the binary rules).
inline RuleApplication apply_rule(const AlgebraContext& ctx, const std::string& rule,
                                  const std::vector<FilteredClass>& inputs) {
  const RuleInfo& info = rule_info(rule);
  if (info.needs_axiom && !ctx.has_axiom(rule)) {
    throw MissingAxiomError("rule " + rule + " needs an axiom the scenario does not provide", {rule});
  }
  if (inputs.size() != info.arity) {
    detail::mismatch(rule, "expected " + std::to_string(info.arity) + " inputs, got " + std::to_string(inputs.size()));
  }
  FiltExpr before;
  for (const auto& in : inputs) before += in.filtration;

  Term out;
  FiltExpr declared;
  if (rule == "CS1") {
    const auto& a = detail::expect_action(rule, inputs[0].term);
    const auto& b = detail::expect_action(rule, inputs[1].term);
    if (a.action != b.action) detail::mismatch(rule, "action classes come from different actions");
    if (a.sign == b.sign) detail::mismatch(rule, "needs one positive and one negative action class");
    const ActionClass& plus = a.sign > 0 ? a : b;
    const ActionClass& minus = a.sign > 0 ? b : a;
    out = make_constant_loops(ctx.intersect(plus.cycle, minus.cycle));
    declared = plus.filt + minus.filt;
  } else if (rule == "CS2") {
    const ActionClass* a = as<ActionClass>(inputs[0].term);
    const ConstantLoops* c = as<ConstantLoops>(inputs[1].term);
    if (!a || !c) {
      a = as<ActionClass>(inputs[1].term);
      c = as<ConstantLoops>(inputs[0].term);
    }
    if (!a || !c) detail::mismatch(rule, "needs an action class and a constant-loop class");
    out = make_action(a->action, a->sign, ctx.intersect(a->cycle, c->cycle), a->filt);
    declared = a->filt;
  } else if (rule == "CS3") {
    const auto& a = detail::expect_action(rule, detail::expect_delta_of(rule, inputs[0].term));
    out = make_action(a.action, a.sign, ctx.rotate(a.cycle), a.filt);
    declared = a.filt;
  } else if (rule == "ACTION_IS_BV" || rule == "OB_BV2") {
    const Term& inner = detail::expect_delta_of(rule, inputs[0].term);
    const auto* b = as<BVPreimage>(inner);
    if (!b) detail::mismatch(rule, "expected Delta of a BV preimage, got " + key(inputs[0].term));
    const auto& a = detail::expect_action(rule, b->of);
    auto it = ctx.bv_rules.find(a.action);
    if (it == ctx.bv_rules.end() || it->second != rule) {
      detail::mismatch(rule, "action '" + a.action + "' is not declared with this BV identity");
    }
    out = b->of;
    declared = a.filt;
  } else if (rule == "HOPF_CONTRACT") {
    const auto& a = detail::expect_action(rule, inputs[0].term);
    auto it = ctx.contractible_actions.find(a.action);
    if (it == ctx.contractible_actions.end()) detail::mismatch(rule, "action '" + a.action + "' is not contractible");
    out = make_constant_loops(a.cycle);
    declared = it->second;
  } else if (rule == "BINDING_CONTRACT") {
    const auto& a = detail::expect_action(rule, inputs[0].term);
    auto it = ctx.fixed_cycles.find(a.action);
    if (it == ctx.fixed_cycles.end() || it->second.count(a.cycle) == 0) {
      detail::mismatch(rule, "cycle '" + a.cycle + "' is not fixed by action '" + a.action + "'");
    }
    out = make_constant_loops(a.cycle);
    declared = FiltExpr::zero_plus();
  } else if (rule == "NONORIENT_PAIR") {
    const auto* p = as<LoopClass>(detail::expect_delta_of(rule, inputs[0].term));
    const auto* q = as<LoopClass>(detail::expect_delta_of(rule, inputs[1].term));
    if (!p || !q) detail::mismatch(rule, "needs Delta of a loop and Delta of its reverse");
    if (p->label != q->label || p->reversed == q->reversed) detail::mismatch(rule, "loops are not a reverse pair");
    if (ctx.nonorientable_loops.count(p->label) == 0) {
      detail::mismatch(rule, "loop '" + p->label + "' is not declared orientation-reversing");
    }
    out = make_constant_loops("pt");
    declared = p->filt + q->filt;
  } else if (rule == "STAR_COMM") {
    const auto* s = as<Star>(inputs[0].term);
    if (!s) detail::mismatch(rule, "expected a product");
    out = make_star(s->factors);
    declared = natural_filtration(inputs[0].term);
  } else if (rule == "IOTA_CONST") {
    const auto* i = as<Iota>(inputs[0].term);
    if (!i) detail::mismatch(rule, "expected iota(beta)");
    out = make_constant_loops(ctx.thom_cycle(i->beta));
    declared = FiltExpr::zero_plus();
  } else {
    detail::mismatch(rule, "rule has no implementation");
  }

  RuleApplication app;
  app.before = before;
  app.after = before;
  app.declared_threshold = declared;
  app.output = FilteredClass{out, before, param_dim_of(ctx, out)};
  return app;
}

/// The soundness conditions every application must satisfy:
/// natural(output) <= declared threshold <= output level <= input level.
inline bool application_is_sound(const RuleApplication& app) {
  return natural_filtration(app.output.term).dominated_by(app.declared_threshold) &&
         app.declared_threshold.dominated_by(app.after) && app.after.dominated_by(app.before);
}

}  // namespace stringcap::stralg
