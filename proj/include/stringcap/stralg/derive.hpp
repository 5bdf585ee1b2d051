#pragma once

// Builds certificates for the targets of the built-in scenarios by applying
// the rewrite rules step by step and recording every application.

#include <algorithm>
#include <string>
#include <vector>

#include "stringcap/catalog.hpp"
#include "stringcap/errors.hpp"
#include "stringcap/stralg/certificate.hpp"
#include "stringcap/stralg/rules.hpp"
#include "stringcap/stralg/term.hpp"

namespace stringcap::stralg {

/// Axioms a route needs, in the order they are reported when missing.
inline std::vector<std::string> route_axioms(const std::string& route) {
  if (route == "ob1.pt" || route == "ob1.V") return {"ACTION_IS_BV"};
  if (route == "ob1.M") return {"ACTION_IS_BV", "BINDING_CONTRACT"};
  if (route == "ellipsoid2.pt") return {"HOPF_CONTRACT", "OB_BV2"};
  if (route == "non_orientable.Sigma") return {"NONORIENT_PAIR"};
  if (route == "prod_torus.Tk") return {};
  throw InvalidInputError("unknown derivation route '" + route + "'");
}

/// Records a derivation while replaying it on a multiset of classes.
class DerivationBuilder {
 public:
  DerivationBuilder(const AlgebraContext& ctx, std::string label, std::string beta, std::vector<Term> rhs)
      : ctx_(ctx) {
    d_.label = std::move(label);
    d_.conclusion.beta = std::move(beta);
    d_.conclusion.rhs = std::move(rhs);
    for (const auto& t : d_.conclusion.rhs) {
      state_.push_back(lift(ctx_, t));
      d_.conclusion.filtration += natural_filtration(t);
    }
  }

  /// Applies `rule` to the available classes with the given terms; returns the output term.
  Term apply(const std::string& rule, const std::vector<Term>& inputs) {
    std::vector<FilteredClass> picked;
    for (const auto& in : inputs) {
      auto it = std::find_if(state_.begin(), state_.end(), [&](const FilteredClass& c) { return same(c.term, in); });
      if (it == state_.end()) throw RuleMismatchError(rule + ": input " + key(in) + " is not available");
      picked.push_back(*it);
      state_.erase(it);
    }
    const RuleApplication app = apply_rule(ctx_, rule, picked);
    d_.steps.push_back({rule, inputs, app.output.term, app.before, app.after, rule_info(rule).statement});
    state_.push_back(app.output);
    return app.output.term;
  }

  Derivation finish() && { return std::move(d_); }

 private:
  const AlgebraContext& ctx_;
  Derivation d_;
  std::vector<FilteredClass> state_;
};

namespace detail {

inline Term action(const std::string& a, int sign, const std::string& cycle, const std::string& symbol) {
  return make_action(a, sign, cycle, FiltExpr::symbol(symbol));
}

}  // namespace detail

/// Derives iota(beta) = product of Delta-classes for `target` of `s`.
/// Throws MissingAxiomError when the scenario lacks an axiom the route needs.
inline Certificate derive_certificate(const Scenario& s, const TargetClass& target) {
  const AlgebraContext& ctx = s.algebra;
  const std::string& route = target.route;
  std::vector<std::string> missing;
  for (const auto& ax : route_axioms(route))
    if (!ctx.has_axiom(ax)) missing.push_back(ax);
  if (!missing.empty()) {
    std::string list;
    for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
    throw MissingAxiomError("route " + route + " for " + target.name + " on " + s.id + " needs " + list, missing);
  }

  Certificate cert;
  cert.scenario_id = s.id;
  cert.target = target;
  cert.context = ctx;
  const std::string& beta = target.declared_pairing;
  const std::string& M = ctx.manifold;
  using detail::action;

  if (route == "ob1.pt") {
    const Term ap = action("ob", 1, M, "E_+"), am = action("ob", -1, M, "E_-");
    const Term dp = make_delta(make_bv_preimage(ap)), dm = make_delta(make_bv_preimage(am));
    DerivationBuilder b(ctx, "product of both BV preimages", beta, {dp, dm});
    b.apply("ACTION_IS_BV", {dp});
    b.apply("ACTION_IS_BV", {dm});
    b.apply("CS1", {ap, am});
    cert.derivations.push_back(std::move(b).finish());
  } else if (route == "ob1.M") {
    for (int sign : {1, -1}) {
      const std::string sym = sign > 0 ? "E_+" : "E_-";
      const Term a = action("ob", sign, M, sym);
      const Term d = make_delta(make_bv_preimage(a));
      const Term i = make_iota(beta);
      DerivationBuilder b(ctx, "L_" + sign_symbol(sign) + " against a binding point", beta, {d, i});
      b.apply("ACTION_IS_BV", {d});
      const Term pt = b.apply("IOTA_CONST", {i});
      const Term restricted = b.apply("CS2", {a, pt});
      b.apply("BINDING_CONTRACT", {restricted});
      cert.derivations.push_back(std::move(b).finish());
    }
  } else if (route == "ob1.V") {
    for (int sign : {1, -1}) {
      const std::string small = sign > 0 ? "e_+" : "e_-";
      const std::string large = sign > 0 ? "E_-" : "E_+";
      const Term orbit = action("ob", sign, "pt", small);
      const Term whole = action("ob", -sign, M, large);
      const Term d1 = make_delta(orbit), d2 = make_delta(make_bv_preimage(whole));
      DerivationBuilder b(ctx, "shortest L_" + sign_symbol(sign) + " orbit against L_" + sign_symbol(-sign), beta,
                          {d1, d2});
      const Term swept = b.apply("CS3", {d1});
      b.apply("ACTION_IS_BV", {d2});
      b.apply("CS1", {swept, whole});
      cert.derivations.push_back(std::move(b).finish());
    }
  } else if (route == "prod_torus.Tk") {
    const Term am = action("rot", -1, s.route_labels.at("g_minus"), s.route_labels.at("E_minus"));
    const Term ap = action("rot", 1, s.route_labels.at("g_plus"), s.route_labels.at("E_plus"));
    const Term dm = make_delta(am), dp = make_delta(ap);
    DerivationBuilder b(ctx, "rotated L_- against rotated L_+", beta, {dm, dp});
    const Term sm = b.apply("CS3", {dm});
    const Term sp = b.apply("CS3", {dp});
    b.apply("CS1", {sp, sm});
    cert.derivations.push_back(std::move(b).finish());
  } else if (route == "non_orientable.Sigma") {
    const Term q = make_loop_class("q", false, FiltExpr::symbol("E_q"));
    const Term qbar = make_loop_class("q", true, FiltExpr::symbol("E_qbar"));
    const Term dq = make_delta(q), dqbar = make_delta(qbar);
    DerivationBuilder b(ctx, "orientation-reversing loop and its reverse", beta, {dq, dqbar});
    b.apply("NONORIENT_PAIR", {dq, dqbar});
    cert.derivations.push_back(std::move(b).finish());
  } else if (route == "ellipsoid2.pt") {
    const Term a = action("hopf", 1, M, "E_A");
    const Term d = make_delta(make_bv_preimage(a));
    const Term i = make_iota(beta);
    DerivationBuilder b(ctx, "diagonal action contracted to constant loops", beta, {d, i});
    b.apply("OB_BV2", {d});
    const Term whole = b.apply("IOTA_CONST", {i});
    const Term restricted = b.apply("CS2", {a, whole});
    b.apply("HOPF_CONTRACT", {restricted});
    cert.derivations.push_back(std::move(b).finish());
  }
  cert.notes = s.notes;
  return cert;
}

inline Certificate derive_certificate(const Scenario& s, const std::string& target) {
  return derive_certificate(s, s.target(target));
}

}  // namespace stringcap::stralg
