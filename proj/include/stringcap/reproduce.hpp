#pragma once

// Regression tables: each row compares a computed quantity with its expected
// closed-form value over the default parameter grids.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "stringcap/bounds.hpp"
#include "stringcap/catalog.hpp"
#include "stringcap/frames.hpp"
#include "stringcap/gauge.hpp"
#include "stringcap/loops.hpp"
#include "stringcap/stralg/certificate.hpp"
#include "stringcap/stralg/derive.hpp"
#include "stringcap/stralg/ops.hpp"

namespace stringcap {

struct ReproRow {
  std::string table;
  std::string case_id;
  std::string quantity;
  double expected = 0.0;
  double computed = 0.0;
  double deviation = 0.0;  // absolute, or relative when `relative`
  double tolerance = 0.0;
  bool relative = false;
  bool pass = false;

  nlohmann::json to_json() const {
    return {{"table", table},         {"case", case_id},     {"quantity", quantity},
            {"expected", expected},   {"computed", computed}, {"deviation", deviation},
            {"tolerance", tolerance}, {"relative", relative}, {"pass", pass}};
  }
};

inline ReproRow make_row(std::string table, std::string case_id, std::string quantity, double expected,
                         double computed, double tolerance, bool relative) {
  ReproRow r{std::move(table), std::move(case_id), std::move(quantity), expected, computed, 0.0, tolerance, relative,
             false};
  const double diff = std::abs(computed - expected);
  r.deviation = relative ? diff / std::max(std::abs(expected), 1e-300) : diff;
  r.pass = std::isfinite(computed) && r.deviation <= tolerance;
  return r;
}

/// A yes/no check reported as expected 1, computed 1 or 0.
inline ReproRow make_check(std::string table, std::string case_id, std::string quantity, bool ok) {
  return make_row(std::move(table), std::move(case_id), std::move(quantity), 1.0, ok ? 1.0 : 0.0, 0.0, false);
}

inline const std::vector<std::string>& reproduction_tables() {
  static const std::vector<std::string> ids = {"ellipsoid1",   "ellipsoid2", "camel",       "klein",     "openbook",
                                               "product-torus", "frames",     "containment", "properties"};
  return ids;
}

namespace repro {

inline std::string fmt_case(const std::string& what, std::initializer_list<std::pair<const char*, double>> params) {
  std::ostringstream os;
  os << what << " (";
  bool first = true;
  for (const auto& [k, v] : params) {
    os << (first ? "" : ", ") << k << "=" << v;
    first = false;
  }
  os << ")";
  return os.str();
}

inline double bound_of(const std::vector<CapacityBound>& bs, const std::string& route) {
  for (const auto& b : bs)
    if (b.target.route == route) return b.upper_bound;
  throw InvalidInputError("no bound for route " + route);
}

inline std::vector<ReproRow> ellipsoid1(const BoundOptions& opts) {
  std::vector<ReproRow> rows;
  for (int n : {2, 3}) {
    for (double a : {0.2, 0.5, 1.0}) {
      const Scenario s = ellipsoid_scenario(n, a);
      const std::string c = fmt_case("ellipsoid1", {{"n", n}, {"a", a}});
      const double two_pi_a = 2.0 * std::numbers::pi * a;
      BindingResolver resolver(s, opts);
      rows.push_back(make_row("ellipsoid1", c, "E_+", two_pi_a, resolver.resolve("E_+").value, 1e-4, true));
      rows.push_back(make_row("ellipsoid1", c, "E_-", two_pi_a, resolver.resolve("E_-").value, 1e-4, true));
      std::vector<CapacityBound> bs;
      for (const auto& t : s.targets) bs.push_back(bound_for_target(s, t, resolver));
      rows.push_back(make_row("ellipsoid1", c, "bound [S^n]", two_pi_a, bound_of(bs, "ob1.M"), 1e-4, true));
      rows.push_back(make_row("ellipsoid1", c, "bound [pt]", 2.0 * two_pi_a, bound_of(bs, "ob1.pt"), 1e-4, true));
    }
  }
  return rows;
}

inline std::vector<ReproRow> ellipsoid2(const BoundOptions& opts) {
  std::vector<ReproRow> rows;
  for (int n : {3, 4}) {
    for (double a : {0.4, 1.0}) {
      const Scenario s = ellipsoid2_scenario(n, a);
      const std::string c = fmt_case("ellipsoid2", {{"n", n}, {"a", a}});
      const CapacityBound b = bound_ellipsoid2(s, opts);
      rows.push_back(make_row("ellipsoid2", c, "bound [pt]", 2.0 * std::numbers::pi * a, b.upper_bound, 1e-4, true));
      rows.push_back(make_check("ellipsoid2", c, "equality flag", b.equality_known));
    }
  }
  return rows;
}

inline std::vector<ReproRow> camel(const BoundOptions& opts) {
  std::vector<ReproRow> rows;
  const std::vector<double> deltas = {0.1, 0.01, 0.001};
  for (double eps : {0.4, 1.0}) {
    std::vector<CamelLimitReport> reports;
    for (int n : {2, 3}) {
      reports.push_back(camel_limit_report(n, eps, deltas, opts));
      const CamelLimitReport& rep = reports.back();
      for (const auto& row : rep.rows) {
        rows.push_back(make_row("camel", fmt_case("camel", {{"n", n}, {"eps", eps}, {"delta", row.delta}}),
                                "bound [T^1]", eps + 3.0 * row.delta, row.bound, 1e-9, false));
      }
      rows.push_back(make_row("camel", fmt_case("camel", {{"n", n}, {"eps", eps}}), "extrapolation delta -> 0", eps,
                              rep.extrapolated, 1e-6, false));
    }
    for (std::size_t i = 0; i < deltas.size(); ++i) {
      rows.push_back(make_row("camel", fmt_case("camel n=2 vs n=3", {{"eps", eps}, {"delta", deltas[i]}}),
                              "bound difference", 0.0, reports[0].rows[i].bound - reports[1].rows[i].bound, 1e-9,
                              false));
    }
  }
  return rows;
}

inline std::vector<ReproRow> klein(const BoundOptions& opts) {
  std::vector<ReproRow> rows;
  for (const auto& [a, b] : {std::pair{1.0, 1.0}, std::pair{0.5, 2.0}}) {
    for (double r : {1.0, 2.0}) {
      const Scenario s = klein_bottle_scenario(a, b, r);
      const CapacityBound bound = bound_non_orientable(s, opts);
      rows.push_back(make_row("klein", fmt_case("klein", {{"a", a}, {"b", b}, {"radius", r}}), "bound [Sigma]",
                              2.0 * a * r, bound.upper_bound, 1e-6, false));
    }
  }
  return rows;
}

inline std::vector<ReproRow> openbook(const BoundOptions& opts) {
  std::vector<ReproRow> rows;
  const double pi = std::numbers::pi;
  {
    const Scenario s = open_book_scenario(PageSpec::disk(1), PageFunction::round(), PageAction::trivial());
    const auto bs = bound_open_book(s, opts);
    rows.push_back(make_row("openbook", "round S^2 (page D^1)", "bound [pt]", 4.0 * pi, bound_of(bs, "ob1.pt"), 1e-4, true));
    rows.push_back(make_row("openbook", "round S^2 (page D^1)", "bound [M]", 2.0 * pi, bound_of(bs, "ob1.M"), 1e-4, true));
  }
  {
    const Scenario s = open_book_scenario(PageSpec::disk(1), PageFunction::power(4.0), PageAction::trivial());
    const auto bs = bound_open_book(s, opts);
    // on the quartic page the longest orbit is still the unit circle over v = 0
    rows.push_back(make_row("openbook", "quartic page D^1", "bound [pt]", 4.0 * pi, bound_of(bs, "ob1.pt"), 1e-4, true));
    rows.push_back(make_row("openbook", "quartic page D^1", "bound [M]", 2.0 * pi, bound_of(bs, "ob1.M"), 1e-4, true));
  }
  for (double a : {0.5, 2.0}) {
    const Scenario s =
        open_book_scenario(PageSpec::circle(1.0), PageFunction::trivial(), PageAction::trivial(), DomainSpec{{}, a, 1.0});
    const auto bs = bound_open_book(s, opts);
    const std::string c = fmt_case("flat torus, page S^1 of length 1", {{"a", a}});
    rows.push_back(make_row("openbook", c, "bound [pt]", 2.0 * a, bound_of(bs, "ob1.pt"), 1e-6, false));
    rows.push_back(make_row("openbook", c, "bound [V]", 2.0 * a, bound_of(bs, "ob1.V"), 1e-6, false));
  }
  {
    DomainSpec dom;
    dom.radius = 0.0;
    const Scenario s = open_book_scenario(PageSpec::disk(2), PageFunction::round(), PageAction::trivial(), dom);
    for (const auto& b : bound_open_book(s, opts)) {
      rows.push_back(make_row("openbook", "zero-radius codisk of S^3", "bound " + b.target.name, 0.0, b.upper_bound, 0.0,
                              false));
    }
  }
  return rows;
}

inline std::vector<ReproRow> product_torus(const BoundOptions& opts) {
  std::vector<ReproRow> rows;
  struct Case {
    int m, d, k;
    std::vector<double> lengths;
  };
  const std::vector<Case> cases = {{0, 2, 1, {1.0, 1.0}},
                                   {0, 3, 1, {1.0, 0.7, 1.5}},
                                   {0, 3, 2, {1.0, 0.7, 1.5}},
                                   {1, 2, 1, {0.5, 1.0, 2.0}},
                                   {1, 3, 0, {2.0, 1.0, 1.0, 0.25}}};
  for (const auto& c : cases) {
    const Scenario s = product_torus_scenario(c.m, c.d, c.k, c.lengths);
    const CapacityBound b = bound_product_torus(s, c.k, opts);
    // both families run once around the last circle factor
    rows.push_back(make_row("product-torus", s.id, "bound [T^" + std::to_string(c.k) + "]", 2.0 * c.lengths.back(),
                            b.upper_bound, 1e-6, false));
  }
  return rows;
}

inline std::vector<ReproRow> frames() {
  std::vector<ReproRow> rows;
  for (int n : {1, 2, 3}) {
    const auto pts = random_sphere_points(n, 1000, 7);
    SphereGrid g;
    g.points = pts;
    const FrameFamilyReport r = verify_frame_family(n, g);
    const std::string c = "1000 random points on S^" + std::to_string(n);
    rows.push_back(make_row("frames", c, "max unitarity defect", 0.0, r.max_unitarity_defect, kFrameTolerance, false));
    rows.push_back(make_row("frames", c, "max basepoint defect", 0.0, r.max_basepoint_defect, kFrameTolerance, false));
  }
  auto drift_rows = [&](const std::string& c, const std::vector<FrameFamilyReport>& reports) {
    for (std::size_t i = 1; i < reports.size(); ++i) {
      const double prev = reports[i - 1].continuity_modulus, cur = reports[i].continuity_modulus;
      rows.push_back(make_row("frames", c + ", refinement " + std::to_string(i), "continuity modulus drift", prev, cur,
                              0.1, true));
    }
  };
  std::vector<FrameFamilyReport> ico;
  for (int depth : {3, 4, 5}) ico.push_back(verify_frame_family(2, icosphere(depth)));
  drift_rows("S^2 icosphere depths 3, 4, 5", ico);
  for (int n : {1, 3}) {
    std::vector<FrameFamilyReport> pairs;
    for (double h : {1e-3, 5e-4, 2.5e-4}) pairs.push_back(verify_frame_family(n, random_sphere_pairs(n, 10000, h, 11)));
    drift_rows("S^" + std::to_string(n) + " random pairs at distance 1e-3, 5e-4, 2.5e-4", pairs);
  }
  return rows;
}

inline std::vector<ReproRow> containment() {
  std::vector<ReproRow> rows;
  for (int n : {2, 3}) {
    const SamplePlan plan = sphere_sample_plan(n, 10000, 3);
    for (double a : {0.2, 0.5, 1.0}) {
      const ContainmentResult r = domain_contains(round_sphere_codisk(n, a), ellipsoid_codisk(n, a), plan);
      rows.push_back(make_check("containment", fmt_case("round in ellipsoid", {{"n", n}, {"a", a}}),
                                "contained on 10^4 samples", r.contained));
    }
  }
  return rows;
}

/// All built-in (scenario, target) certificates.
inline std::vector<std::pair<Scenario, TargetClass>> catalog_targets() {
  std::vector<Scenario> scenarios = {
      ellipsoid_scenario(2, 0.5),
      ellipsoid2_scenario(3, 0.4),
      open_book_scenario(PageSpec::circle(1.0), PageFunction::trivial(), PageAction::trivial(), DomainSpec{{}, 0.5, 1.0}),
      product_torus_scenario(0, 2, 1, std::vector<double>{1.0, 1.0}),
      camel_scenario(2, 0.4, 0.01),
      klein_bottle_scenario(1.0, 1.0),
  };
  std::vector<std::pair<Scenario, TargetClass>> out;
  for (const auto& s : scenarios)
    for (const auto& t : s.targets) out.emplace_back(s, t);
  return out;
}

inline std::vector<ReproRow> properties() {
  std::vector<ReproRow> rows;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> lambda_dist(0.0, 10.0);

  {  // homogeneity of the support function
    const std::vector<std::pair<GaugeDomain, SamplePlan>> cases = {
        {ellipsoid_codisk(2, 0.3), sphere_sample_plan(2, 1000, 1)},
        {flat_klein_codisk(0.5, 2.0), periodic_sample_plan(ChartId::klein_bottle(), 1000, 2)},
        {flat_torus_codisk({1.0, 0.5, 2.0}, 1.5), periodic_sample_plan(ChartId::torus(3), 1000, 3)}};
    double worst = 0.0;
    for (const auto& [dom, plan] : cases) {
      for (const auto& smp : plan.samples) {
        const double lam = lambda_dist(rng);
        const double h = support(dom, smp.q, smp.v).value();
        const double hl = support(dom, smp.q, attach(smp.q, lam * smp.v.components)).value();
        worst = std::max(worst, std::abs(hl - lam * h) / (1.0 + lam * h));
      }
    }
    rows.push_back(make_row("properties", "3000 random (q, v, lambda)", "support homogeneity defect", 0.0, worst, 1e-9,
                            false));
  }
  const GaugeDomain ell = ellipsoid_codisk(2, 0.5);
  const Scenario sc = ellipsoid_scenario(2, 0.5);
  const Loop tilted = sc.family("L_+").loop_at({0.3});
  {  // reparametrization invariance
    const double base = loop_length(ell, tilted);
    double worst = 0.0;
    for (int k = 1; k <= 5; ++k) {
      const double amp = 0.9 / (2.0 * std::numbers::pi * k);
      auto rho = [amp, k](double t) { return t + amp * std::sin(2.0 * std::numbers::pi * k * t); };
      auto rho_prime = [amp, k](double t) { return 1.0 + amp * 2.0 * std::numbers::pi * k * std::cos(2.0 * std::numbers::pi * k * t); };
      worst = std::max(worst, std::abs(loop_length(ell, reparametrize(tilted, rho, rho_prime)) - base) / (1.0 + base));
    }
    rows.push_back(make_row("properties", "ellipsoid orbit, 5 reparametrizations", "length change", 0.0, worst, 1e-6,
                            false));
  }
  {  // concatenation additivity
    const double l = loop_length(ell, tilted);
    const Loop c = concatenate(tilted, Loop::constant(tilted.point(0.0)));
    const Loop cc = concatenate(tilted, reverse(tilted));
    rows.push_back(make_row("properties", "orbit then constant", "length", l, loop_length(ell, c), 1e-7, false));
    rows.push_back(make_row("properties", "orbit then its reverse", "length", 2.0 * l, loop_length(ell, cc), 1e-7, false));
  }
  {  // domain monotonicity of E
    const Scenario inner = product_torus_scenario(0, 2, 1, std::vector<double>{1.0, 1.0});
    Scenario outer = inner;
    outer.domain = scaled_domain(inner.domain, 1.25);
    const bool contained = domain_contains(inner.domain, outer.domain, periodic_sample_plan(ChartId::torus(2), 2000, 4)).contained;
    const double ei = extremal_lengths(inner.domain, inner.family("L_-")).E;
    const double eo = extremal_lengths(outer.domain, outer.family("L_-")).E;
    rows.push_back(make_check("properties", "flat T^2 inside its 1.25 dilation", "E_inner <= E_outer + 1e-6",
                              contained && ei <= eo + 1e-6));
  }
  {  // star additivity and delta preservation on random products
    std::uniform_int_distribution<int> pick(0, 4);
    std::uniform_real_distribution<double> coef(0.1, 5.0);
    stralg::AlgebraContext ctx;
    ctx.manifold_dim = 2;
    // delta rotates the cycle when a product collapses to one action class
    ctx.rotations[ctx.manifold] = ctx.manifold + " x S^1";
    for (int i = 0; i <= 6; ++i) ctx.rotations["g" + std::to_string(i)] = "g" + std::to_string(i) + " x S^1";
    bool ok = true;
    bool have_cycle = false;  // two constant-loop cycles need not meet transversally
    auto random_leaf = [&](int i) {
      const std::string sym = "c" + std::to_string(i % 7);
      int kind = pick(rng);
      if (kind == 1 && std::exchange(have_cycle, true)) kind = 0;
      switch (kind) {
        case 0: return stralg::lift(ctx, stralg::make_loop_class("q" + std::to_string(i), false, stralg::FiltExpr::symbol(sym, coef(rng))));
        case 1: return stralg::lift(ctx, stralg::make_constant_loops("g" + std::to_string(i)));
        case 2: return stralg::lift(ctx, stralg::make_iota("b" + std::to_string(i)));
        case 3:
          return stralg::lift(ctx, stralg::make_loop_class("p" + std::to_string(i), true, stralg::FiltExpr::constant(coef(rng))));
        default:  // action classes on the fundamental cycle trigger CS1 and CS2
          return stralg::lift(ctx, stralg::make_action("rot", i % 2 ? 1 : -1, ctx.manifold, stralg::FiltExpr::symbol(sym, coef(rng))));
      }
    };
    for (int trial = 0; trial < 1000 && ok; ++trial) {
      have_cycle = false;
      stralg::FilteredClass acc = random_leaf(0);
      stralg::FiltExpr expected = acc.filtration;
      const int leaves = 1 + trial % 6;
      for (int i = 1; i <= leaves; ++i) {
        const stralg::FilteredClass leaf = random_leaf(i);
        expected += leaf.filtration;
        acc = stralg::star(ctx, acc, leaf);
        const stralg::FilteredClass d = stralg::delta(ctx, acc);
        ok = ok && d.filtration == acc.filtration;
      }
      ok = ok && acc.filtration == expected;
    }
    rows.push_back(make_check("properties", "1000 random products", "star adds, delta preserves filtrations", ok));
  }
  {  // replay and mutation of every catalog certificate
    bool replay = true, mutation = true;
    for (const auto& [s, t] : catalog_targets()) {
      const stralg::Certificate cert = stralg::derive_certificate(s, t);
      replay = replay && stralg::check_certificate(cert).passed;
      stralg::Certificate bad = cert;
      auto& step = bad.derivations.front().steps.front();
      step.after = step.after + stralg::FiltExpr::constant(1.0);
      mutation = mutation && !stralg::check_certificate(bad).passed;
    }
    rows.push_back(make_check("properties", "all catalog certificates", "replay passes", replay));
    rows.push_back(make_check("properties", "all catalog certificates", "tampered level is rejected", mutation));
  }
  return rows;
}

}  // namespace repro

/// Rows of one table, or of every table for "all". Throws InvalidInputError on unknown ids.
inline std::vector<ReproRow> reproduce(const std::string& table, const BoundOptions& opts = {}) {
  const std::vector<std::string>& ids = reproduction_tables();
  if (table != "all" && std::find(ids.begin(), ids.end(), table) == ids.end()) {
    throw InvalidInputError("unknown table id '" + table + "'");
  }
  std::vector<ReproRow> rows;
  auto add = [&](const std::string& id, const std::function<std::vector<ReproRow>()>& fn) {
    if (table != "all" && table != id) return;
    auto r = fn();
    rows.insert(rows.end(), r.begin(), r.end());
  };
  add("ellipsoid1", [&] { return repro::ellipsoid1(opts); });
  add("ellipsoid2", [&] { return repro::ellipsoid2(opts); });
  add("camel", [&] { return repro::camel(opts); });
  add("klein", [&] { return repro::klein(opts); });
  add("openbook", [&] { return repro::openbook(opts); });
  add("product-torus", [&] { return repro::product_torus(opts); });
  add("frames", [] { return repro::frames(); });
  add("containment", [] { return repro::containment(); });
  add("properties", [] { return repro::properties(); });
  return rows;
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

inline std::string rows_to_csv(const std::vector<ReproRow>& rows) {
  std::ostringstream os;
  os.precision(17);
  os << "table,case,quantity,expected,computed,deviation,tolerance,relative,pass\n";
  for (const auto& r : rows) {
    os << csv_escape(r.table) << ',' << csv_escape(r.case_id) << ',' << csv_escape(r.quantity) << ',' << r.expected
       << ',' << r.computed << ',' << r.deviation << ',' << r.tolerance << ',' << (r.relative ? "true" : "false") << ','
       << (r.pass ? "pass" : "fail") << '\n';
  }
  return os.str();
}

}  // namespace stringcap
