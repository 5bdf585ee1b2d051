#include <gtest/gtest.h>

#include <random>
#include <utility>

#include "stringcap/catalog.hpp"
#include "stringcap/stralg/certificate.hpp"
#include "stringcap/stralg/derive.hpp"
#include "stringcap/stralg/ops.hpp"
#include "stringcap/stralg/rules.hpp"

using namespace stringcap;
using namespace stringcap::stralg;

namespace {

std::vector<std::string> rules_of(const Derivation& d) {
  std::vector<std::string> r;
  for (const auto& s : d.steps) r.push_back(s.rule);
  return r;
}

AlgebraContext open_book_context() {
  AlgebraContext ctx;
  ctx.manifold_dim = 2;
  ctx.axioms = {"ACTION_IS_BV"};
  ctx.bv_rules["ob"] = "ACTION_IS_BV";
  return ctx;
}

Scenario s2_open_book() { return open_book_scenario(PageSpec::disk(1), PageFunction::round(), PageAction::trivial()); }

}  // namespace

TEST(FiltExpr, ArithmeticAndOrder) {
  const FiltExpr a = FiltExpr::symbol("E_+") + FiltExpr::symbol("E_-");
  const FiltExpr b = a + FiltExpr::symbol("E_+", 0.5) + FiltExpr::constant(1.0);
  EXPECT_TRUE(a.dominated_by(b));
  EXPECT_FALSE(b.dominated_by(a));
  EXPECT_TRUE(FiltExpr::zero_plus().dominated_by(a));
  EXPECT_DOUBLE_EQ(b.evaluate({{"E_+", 2.0}, {"E_-", 3.0}}), 2.0 + 3.0 + 1.0 + 1.0);
  EXPECT_THROW(a.evaluate({{"E_+", 1.0}}), UnboundSymbolError);
  EXPECT_EQ(FiltExpr::zero_plus().to_string(), "0+");
  EXPECT_EQ(FiltExpr::from_json(b.to_json()), b);
  EXPECT_THROW(FiltExpr::constant(-1.0), InvalidInputError);
  EXPECT_THROW(FiltExpr::symbol("x", 0.0), InvalidInputError);
}

TEST(Rules, CS1CollapsesOppositeActionClasses) {
  AlgebraContext ctx = open_book_context();
  ctx.declare_intersection("g1", "g2", "pt");
  const Term ap = make_action("ob", 1, "g1", FiltExpr::symbol("E_+"));
  const Term am = make_action("ob", -1, "g2", FiltExpr::symbol("E_-"));
  const RuleApplication app = apply_rule(ctx, "CS1", {lift(ctx, ap), lift(ctx, am)});
  EXPECT_EQ(key(app.output.term), key(make_constant_loops("pt")));
  EXPECT_EQ(app.after, FiltExpr::symbol("E_+") + FiltExpr::symbol("E_-"));
  EXPECT_TRUE(application_is_sound(app));
  EXPECT_THROW(apply_rule(ctx, "CS1", {lift(ctx, ap), lift(ctx, ap)}), RuleMismatchError);
  const Term other = make_action("rot", -1, "g2", FiltExpr::symbol("E_-"));
  EXPECT_THROW(apply_rule(ctx, "CS1", {lift(ctx, ap), lift(ctx, other)}), RuleMismatchError);
}

TEST(Rules, UndeclaredIntersectionIsIncompatible) {
  const AlgebraContext ctx = open_book_context();
  const Term ap = make_action("ob", 1, "g1", FiltExpr::symbol("E_+"));
  const Term am = make_action("ob", -1, "g2", FiltExpr::symbol("E_-"));
  EXPECT_THROW(apply_rule(ctx, "CS1", {lift(ctx, ap), lift(ctx, am)}), IncompatibleBindingsError);
}

TEST(Rules, CS2AndCS3) {
  AlgebraContext ctx = open_book_context();
  ctx.rotations["g"] = "zeta(g)";
  const Term a = make_action("ob", 1, ctx.manifold, FiltExpr::symbol("E_+"));
  const RuleApplication cs2 = apply_rule(ctx, "CS2", {lift(ctx, a), lift(ctx, make_constant_loops("pt"))});
  EXPECT_EQ(key(cs2.output.term), key(make_action("ob", 1, "pt", FiltExpr::symbol("E_+"))));
  const Term ag = make_action("ob", -1, "g", FiltExpr::symbol("e_-"));
  const RuleApplication cs3 = apply_rule(ctx, "CS3", {lift(ctx, make_delta(ag))});
  EXPECT_EQ(key(cs3.output.term), key(make_action("ob", -1, "zeta(g)", FiltExpr::symbol("e_-"))));
}

TEST(Rules, AxiomRulesNeedTheirAxiom) {
  AlgebraContext ctx = open_book_context();
  ctx.axioms.clear();
  const Term d = make_delta(make_bv_preimage(make_action("ob", 1, "M", FiltExpr::symbol("E_+"))));
  try {
    apply_rule(ctx, "ACTION_IS_BV", {lift(ctx, d)});
    FAIL() << "expected MissingAxiomError";
  } catch (const MissingAxiomError& e) {
    ASSERT_EQ(e.rules().size(), 1u);
    EXPECT_EQ(e.rules().front(), "ACTION_IS_BV");
  }
  EXPECT_THROW(rule_info("NO_SUCH_RULE"), RuleMismatchError);
}

TEST(Rules, BindingContractOnlyOnFixedCycles) {
  AlgebraContext ctx = open_book_context();
  ctx.axioms.insert("BINDING_CONTRACT");
  ctx.fixed_cycles["ob"] = {"pt"};
  const Term on_binding = make_action("ob", 1, "pt", FiltExpr::symbol("E_+"));
  const RuleApplication app = apply_rule(ctx, "BINDING_CONTRACT", {lift(ctx, on_binding)});
  EXPECT_EQ(key(app.output.term), key(make_constant_loops("pt")));
  EXPECT_TRUE(application_is_sound(app));
  const Term elsewhere = make_action("ob", 1, "M", FiltExpr::symbol("E_+"));
  EXPECT_THROW(apply_rule(ctx, "BINDING_CONTRACT", {lift(ctx, elsewhere)}), RuleMismatchError);
}

TEST(Ops, StarAddsAndDeltaPreservesFiltrations) {
  // Property: 1000 random products. Oracle is the plain sum of leaf levels.
  AlgebraContext ctx = open_book_context();
  // delta rotates the cycle of a product that collapsed to a single action class
  ctx.rotations["pt"] = "pt x S^1";
  ctx.rotations[ctx.manifold] = ctx.manifold + " x S^1";
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> pick(0, 3);
  std::uniform_real_distribution<double> coef(0.1, 4.0);
  for (int trial = 0; trial < 1000; ++trial) {
    // pt meets pt non-transversally, so each product gets at most one point-class leaf
    bool have_point = false;
    auto leaf = [&](int i) {
      int kind = pick(rng);
      if (kind == 1 && std::exchange(have_point, true)) kind = 0;
      switch (kind) {
        case 0: return lift(ctx, make_loop_class("q" + std::to_string(i), i % 2, FiltExpr::symbol("s" + std::to_string(i % 5), coef(rng))));
        case 1: return lift(ctx, make_constant_loops("pt"));
        case 2: return lift(ctx, make_iota("T*M_pt"));
        default: return lift(ctx, make_action("ob", i % 2 ? 1 : -1, ctx.manifold, FiltExpr::constant(coef(rng))));
      }
    };
    FilteredClass acc = leaf(0);
    double expected = acc.filtration.evaluate({{"s0", 1}, {"s1", 2}, {"s2", 3}, {"s3", 4}, {"s4", 5}});
    for (int i = 1; i <= 1 + trial % 5; ++i) {
      const FilteredClass l = leaf(i);
      expected += l.filtration.evaluate({{"s0", 1}, {"s1", 2}, {"s2", 3}, {"s3", 4}, {"s4", 5}});
      acc = star(ctx, acc, l);
      EXPECT_EQ(delta(ctx, acc).filtration, acc.filtration);
    }
    EXPECT_NEAR(acc.filtration.evaluate({{"s0", 1}, {"s1", 2}, {"s2", 3}, {"s3", 4}, {"s4", 5}}), expected,
                1e-9 * (1 + expected));
  }
}

TEST(Ops, StarIsCommutativeUpToOrder) {
  const AlgebraContext ctx = open_book_context();
  const FilteredClass a = lift(ctx, make_loop_class("q", false, FiltExpr::symbol("x")));
  const FilteredClass b = lift(ctx, make_iota("T*M_pt"));
  EXPECT_EQ(key(star(ctx, a, b).term), key(star(ctx, b, a).term));
}

TEST(Certificates, OpenBookPointClassShape) {
  const Scenario s = s2_open_book();
  const Certificate c = derive_certificate(s, "[pt]");
  ASSERT_EQ(c.derivations.size(), 1u);
  EXPECT_EQ(rules_of(c.derivations[0]), (std::vector<std::string>{"ACTION_IS_BV", "ACTION_IS_BV", "CS1"}));
  EXPECT_EQ(c.bound_expression(), "E_+ + E_-");
  const CertificateCheck check = check_certificate(c);
  EXPECT_TRUE(check.passed);
  EXPECT_FALSE(check.bound.has_value());  // nothing bound yet
}

TEST(Certificates, FundamentalClassUsesBindingContraction) {
  const Scenario s = s2_open_book();
  const Certificate c = derive_certificate(s, "ob1.M");
  ASSERT_EQ(c.derivations.size(), 2u);
  for (const auto& d : c.derivations) {
    EXPECT_EQ(rules_of(d), (std::vector<std::string>{"ACTION_IS_BV", "IOTA_CONST", "CS2", "BINDING_CONTRACT"}));
  }
  EXPECT_EQ(c.bound_expression(), "min(E_+, E_-)");
  EXPECT_TRUE(check_certificate(c).passed);
}

TEST(Certificates, PageClassOnBindinglessOpenBook) {
  const Scenario s =
      open_book_scenario(PageSpec::circle(1.0), PageFunction::trivial(), PageAction::trivial(), DomainSpec{{}, 0.5, 1.0});
  const Certificate c = derive_certificate(s, "ob1.V");
  ASSERT_EQ(c.derivations.size(), 2u);
  EXPECT_EQ(rules_of(c.derivations[0]), (std::vector<std::string>{"CS3", "ACTION_IS_BV", "CS1"}));
  EXPECT_TRUE(check_certificate(c).passed);
  Certificate bound = c;
  bound.bindings = {{"e_+", 1.0}, {"e_-", 2.0}, {"E_+", 5.0}, {"E_-", 0.5}};
  EXPECT_DOUBLE_EQ(bound.bound(), std::min(1.0 + 0.5, 2.0 + 5.0));
}

TEST(Certificates, ProductTorusAndKlein) {
  const Scenario t = product_torus_scenario(0, 2, 1, std::vector<double>{1.0, 1.0});
  const Certificate ct = derive_certificate(t, "[T^1]");
  EXPECT_EQ(rules_of(ct.derivations.at(0)), (std::vector<std::string>{"CS3", "CS3", "CS1"}));
  EXPECT_TRUE(check_certificate(ct).passed);

  const Scenario k = klein_bottle_scenario(1.0, 1.0);
  const Certificate ck = derive_certificate(k, "[Sigma]");
  EXPECT_EQ(rules_of(ck.derivations.at(0)), (std::vector<std::string>{"NONORIENT_PAIR"}));
  EXPECT_EQ(ck.bound_expression(), "E_q + E_qbar");
  EXPECT_TRUE(check_certificate(ck).passed);
}

TEST(Certificates, EllipsoidTwoRoute) {
  const Scenario s = ellipsoid2_scenario(3, 0.4);
  const Certificate c = derive_certificate(s, "ellipsoid2.pt");
  EXPECT_EQ(rules_of(c.derivations.at(0)), (std::vector<std::string>{"OB_BV2", "IOTA_CONST", "CS2", "HOPF_CONTRACT"}));
  EXPECT_TRUE(check_certificate(c).passed);
}

TEST(Certificates, MissingContractionAxiomIsNamed) {
  const Scenario s = open_book_scenario(PageSpec::disk(2), PageFunction::round(), PageAction::rotate_page_pair());
  try {
    derive_certificate(s, "ellipsoid2.pt");
    FAIL() << "expected MissingAxiomError";
  } catch (const MissingAxiomError& e) {
    EXPECT_EQ(e.rules(), std::vector<std::string>{"HOPF_CONTRACT"});
    EXPECT_NE(std::string(e.what()).find("HOPF_CONTRACT"), std::string::npos);
  }
}

TEST(Certificates, JsonRoundTripKeepsReplay) {
  for (const Scenario& s : {s2_open_book(), klein_bottle_scenario(0.5, 2.0), ellipsoid2_scenario(3, 0.4),
                            product_torus_scenario(1, 2, 1, std::vector<double>{1.0, 1.0, 1.0})}) {
    for (const auto& t : s.targets) {
      const Certificate c = derive_certificate(s, t);
      const nlohmann::json j = to_json(c);
      const Certificate back = certificate_from_json(j);
      EXPECT_EQ(to_json(back), j) << s.id << " " << t.name;
      EXPECT_TRUE(check_certificate(back).passed) << s.id << " " << t.name;
    }
  }
}

// Mutation tests: each tampering must be caught by the replay.
class Mutation : public ::testing::Test {
 protected:
  Certificate good = derive_certificate(s2_open_book(), "[pt]");
};

TEST_F(Mutation, LoweredOutputLevel) {
  Certificate bad = good;
  bad.derivations[0].steps[2].after = FiltExpr::symbol("E_+");
  EXPECT_FALSE(check_certificate(bad).passed);
}

TEST_F(Mutation, LoweredConclusionLevel) {
  Certificate bad = good;
  bad.derivations[0].conclusion.filtration = FiltExpr::symbol("E_+");
  EXPECT_FALSE(check_certificate(bad).passed);
}

TEST_F(Mutation, SwappedRule) {
  Certificate bad = good;
  bad.derivations[0].steps[2].rule = "CS2";
  EXPECT_FALSE(check_certificate(bad).passed);
}

TEST_F(Mutation, DroppedStep) {
  Certificate bad = good;
  bad.derivations[0].steps.erase(bad.derivations[0].steps.begin());
  EXPECT_FALSE(check_certificate(bad).passed);
}

TEST_F(Mutation, WrongTargetPairing) {
  Certificate bad = good;
  bad.target.declared_pairing = "T*M_pt";
  EXPECT_FALSE(check_certificate(bad).passed);
}

TEST_F(Mutation, EditedReference) {
  Certificate bad = good;
  bad.derivations[0].steps[0].reference = "trust me";
  EXPECT_FALSE(check_certificate(bad).passed);
}

TEST_F(Mutation, MissingAxiomInContext) {
  Certificate bad = good;
  bad.context.axioms.erase("ACTION_IS_BV");
  const CertificateCheck check = check_certificate(bad);
  EXPECT_FALSE(check.passed);
  EXPECT_NE(check.steps.at(0).message.find("ACTION_IS_BV"), std::string::npos);
}

TEST_F(Mutation, ForgedOutputTerm) {
  Certificate bad = good;
  bad.derivations[0].steps[2].output = make_constant_loops("pt");
  EXPECT_FALSE(check_certificate(bad).passed);
}
