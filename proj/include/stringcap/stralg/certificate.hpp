#pragma once

// Certificates: rewrite derivations of iota(beta) = Delta(a_1) * ... * Delta(a_k) * iota(a_{k+1})
// and an independent replay checker.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "stringcap/errors.hpp"
#include "stringcap/stralg/context.hpp"
#include "stringcap/stralg/filtration.hpp"
#include "stringcap/stralg/rules.hpp"
#include "stringcap/stralg/term.hpp"
#include "stringcap/target.hpp"

namespace stringcap::stralg {

struct CertificateStep {
  std::string rule;
  std::vector<Term> inputs;
  Term output;
  FiltExpr before;
  FiltExpr after;
  std::string reference;
};

/// iota(beta) = product of `rhs` in Lambda_filtration.
struct Conclusion {
  std::string beta;
  std::vector<Term> rhs;
  FiltExpr filtration;
};

struct Derivation {
  std::string label;
  Conclusion conclusion;
  std::vector<CertificateStep> steps;
};

struct Certificate {
  std::string scenario_id;
  TargetClass target;
  std::vector<Derivation> derivations;  // the bound is the least conclusion level
  AlgebraContext context;
  std::map<std::string, double> bindings;  // numeric values of the filtration symbols
  std::vector<std::string> notes;

  std::string bound_expression() const {
    if (derivations.size() == 1) return derivations.front().conclusion.filtration.to_string();
    std::string s = "min(";
    for (std::size_t i = 0; i < derivations.size(); ++i) {
      s += (i ? ", " : "") + derivations[i].conclusion.filtration.to_string();
    }
    return s + ")";
  }

  /// Least conclusion level under `values`.
  double bound(const std::map<std::string, double>& values) const {
    if (derivations.empty()) throw InvalidInputError("certificate has no derivations");
    double b = std::numeric_limits<double>::infinity();
    for (const auto& d : derivations) b = std::min(b, d.conclusion.filtration.evaluate(values));
    return b;
  }
  double bound() const { return bound(bindings); }
};

inline nlohmann::json to_json(const Certificate& c) {
  using nlohmann::json;
  json ds = json::array();
  for (const auto& d : c.derivations) {
    json rhs = json::array();
    for (const auto& t : d.conclusion.rhs) rhs.push_back(term_to_json(t));
    json steps = json::array();
    for (const auto& s : d.steps) {
      json ins = json::array();
      for (const auto& t : s.inputs) ins.push_back(term_to_json(t));
      steps.push_back({{"rule", s.rule},
                       {"inputs", ins},
                       {"output", term_to_json(s.output)},
                       {"before", s.before.to_json()},
                       {"after", s.after.to_json()},
                       {"reference", s.reference}});
    }
    ds.push_back({{"label", d.label},
                  {"conclusion", {{"beta", d.conclusion.beta}, {"rhs", rhs}, {"filtration", d.conclusion.filtration.to_json()}}},
                  {"steps", steps}});
  }
  json j;
  j["scenario_id"] = c.scenario_id;
  j["target"] = c.target.to_json();
  j["derivations"] = ds;
  j["bound_expression"] = c.bound_expression();
  j["context"] = c.context.to_json();
  j["bindings"] = c.bindings;
  j["notes"] = c.notes;
  return j;
}

inline Certificate certificate_from_json(const nlohmann::json& j) {
  Certificate c;
  c.scenario_id = j.at("scenario_id").get<std::string>();
  c.target = TargetClass::from_json(j.at("target"));
  for (const auto& dj : j.at("derivations")) {
    Derivation d;
    d.label = dj.at("label").get<std::string>();
    const auto& cj = dj.at("conclusion");
    d.conclusion.beta = cj.at("beta").get<std::string>();
    for (const auto& t : cj.at("rhs")) d.conclusion.rhs.push_back(term_from_json(t));
    d.conclusion.filtration = FiltExpr::from_json(cj.at("filtration"));
    for (const auto& sj : dj.at("steps")) {
      CertificateStep s;
      s.rule = sj.at("rule").get<std::string>();
      for (const auto& t : sj.at("inputs")) s.inputs.push_back(term_from_json(t));
      s.output = term_from_json(sj.at("output"));
      s.before = FiltExpr::from_json(sj.at("before"));
      s.after = FiltExpr::from_json(sj.at("after"));
      s.reference = sj.at("reference").get<std::string>();
      d.steps.push_back(std::move(s));
    }
    c.derivations.push_back(std::move(d));
  }
  c.context = AlgebraContext::from_json(j.at("context"));
  c.bindings = j.at("bindings").get<std::map<std::string, double>>();
  c.notes = j.at("notes").get<std::vector<std::string>>();
  return c;
}

struct StepCheck {
  std::size_t derivation = 0;
  std::size_t step = 0;
  std::string rule;
  bool passed = false;
  std::string message;
};

struct CertificateCheck {
  bool passed = true;
  std::vector<StepCheck> steps;
  std::vector<std::string> failures;  // checks not tied to a single step
  std::optional<double> bound;        // when every symbol is bound

  nlohmann::json to_json() const {
    nlohmann::json ss = nlohmann::json::array();
    for (const auto& s : steps) {
      ss.push_back({{"derivation", s.derivation}, {"step", s.step}, {"rule", s.rule}, {"passed", s.passed},
                    {"message", s.message}});
    }
    nlohmann::json j{{"passed", passed}, {"steps", ss}, {"failures", failures}};
    if (bound) j["bound"] = *bound;
    return j;
  }
};

/// Replays every step from the conclusion's factors, recomputing all
/// filtrations, and checks the conclusion shape and the target pairing.
inline CertificateCheck check_certificate(const Certificate& cert) {
  CertificateCheck report;
  auto fail = [&](const std::string& why) {
    report.passed = false;
    report.failures.push_back(why);
  };
  if (cert.derivations.empty()) fail("certificate has no derivations");
  const AlgebraContext& ctx = cert.context;

  for (std::size_t di = 0; di < cert.derivations.size(); ++di) {
    const Derivation& d = cert.derivations[di];
    const std::string where = "derivation " + std::to_string(di) + " (" + d.label + ")";

    std::size_t deltas = 0, iotas = 0;
    for (const auto& f : d.conclusion.rhs) {
      if (as<Delta>(f)) {
        ++deltas;
      } else if (as<Iota>(f)) {
        ++iotas;
      } else {
        fail(where + ": shape: factor " + key(f) + " is neither Delta(.) nor iota(.)");
      }
    }
    if (deltas == 0) fail(where + ": shape: no Delta factor");
    if (iotas > 1) fail(where + ": shape: more than one iota factor");
    if (d.conclusion.beta != cert.target.declared_pairing) {
      fail(where + ": concluded class " + d.conclusion.beta + " differs from the target's declared pairing " +
           cert.target.declared_pairing);
    }

    FiltExpr level;
    std::vector<FilteredClass> state;
    for (const auto& f : d.conclusion.rhs) {
      state.push_back(lift(ctx, f));
      level += natural_filtration(f);
    }
    if (!(level == d.conclusion.filtration)) {
      fail(where + ": conclusion level " + d.conclusion.filtration.to_string() + " but factors sum to " +
           level.to_string());
    }

    bool replay_ok = true;
    for (std::size_t si = 0; si < d.steps.size(); ++si) {
      const CertificateStep& s = d.steps[si];
      StepCheck sc{di, si, s.rule, false, ""};
      if (!replay_ok) {
        sc.message = "not replayed after an earlier failure";
        report.steps.push_back(sc);
        continue;
      }
      std::vector<FilteredClass> inputs;
      std::vector<FilteredClass> remaining = state;
      bool found_all = true;
      for (const auto& in : s.inputs) {
        auto it = std::find_if(remaining.begin(), remaining.end(),
                               [&](const FilteredClass& c) { return same(c.term, in); });
        if (it == remaining.end()) {
          found_all = false;
          sc.message = "input " + key(in) + " is not an available class";
          break;
        }
        inputs.push_back(*it);
        remaining.erase(it);
      }
      if (found_all) {
        try {
          const RuleApplication app = apply_rule(ctx, s.rule, inputs);
          std::ostringstream why;
          if (!same(app.output.term, s.output)) why << "output " << key(s.output) << " != replayed " << key(app.output.term) << "; ";
          if (!(app.before == s.before)) why << "level before " << s.before.to_string() << " != replayed " << app.before.to_string() << "; ";
          if (!(app.after == s.after)) why << "level after " << s.after.to_string() << " != replayed " << app.after.to_string() << "; ";
          if (!application_is_sound(app)) why << "rule raises the filtration; ";
          if (s.reference != rule_info(s.rule).statement) why << "reference does not match the rule table; ";
          sc.message = why.str();
          sc.passed = sc.message.empty();
          if (sc.passed) {
            remaining.push_back(app.output);
            state = std::move(remaining);
          }
        } catch (const Error& e) {
          sc.message = e.what();
        }
      }
      if (!sc.passed) {
        replay_ok = false;
        report.passed = false;
      }
      report.steps.push_back(sc);
    }

    if (replay_ok) {
      std::string expected;
      try {
        expected = key(make_constant_loops(ctx.thom_cycle(d.conclusion.beta)));
      } catch (const Error& e) {
        fail(where + ": " + e.what());
        continue;
      }
      if (state.size() != 1) {
        fail(where + ": replay ends with " + std::to_string(state.size()) + " classes instead of one");
      } else {
        if (key(state.front().term) != expected) {
          fail(where + ": replay ends at " + key(state.front().term) + ", expected " + expected);
        }
        FiltExpr final_level;
        for (const auto& f : d.conclusion.rhs) final_level += natural_filtration(f);
        if (!(state.front().filtration == final_level)) fail(where + ": final level differs from the conclusion");
      }
    }
  }

  bool all_bound = !cert.derivations.empty();
  for (const auto& d : cert.derivations)
    for (const auto& [s, c] : d.conclusion.filtration.coefficients())
      if (!cert.bindings.count(s)) all_bound = false;
  if (all_bound) report.bound = cert.bound();
  return report;
}

}  // namespace stringcap::stralg
