#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "stringcap/catalog.hpp"

using namespace stringcap;

namespace {

std::vector<Scenario> all_scenarios() {
  return {ellipsoid_scenario(2, 0.5),
          ellipsoid_scenario(3, 0.2),
          ellipsoid2_scenario(3, 0.4),
          ellipsoid2_scenario(4, 1.0),
          camel_scenario(2, 0.4, 0.01),
          camel_scenario(3, 1.0, 0.1),
          klein_bottle_scenario(0.5, 2.0),
          product_torus_scenario(0, 2, 1, std::vector<double>{1.0, 1.0}),
          product_torus_scenario(1, 3, 2, std::vector<double>{0.5, 1.0, 0.7, 1.5}),
          open_book_scenario(PageSpec::disk(1), PageFunction::round(), PageAction::trivial()),
          open_book_scenario(PageSpec::disk(2), PageFunction::power(4.0), PageAction::trivial()),
          open_book_scenario(PageSpec::circle(1.0), PageFunction::trivial(), PageAction::trivial(), DomainSpec{{}, 0.7, 1.0})};
}

}  // namespace

TEST(Catalog, EveryScenarioValidates) {
  for (const auto& s : all_scenarios()) {
    EXPECT_NO_THROW(s.validate()) << s.id;
    EXPECT_FALSE(s.targets.empty()) << s.id;
    EXPECT_FALSE(s.families.empty()) << s.id;
    for (const auto& f : s.families) EXPECT_LE(f.params.grid_size(), kMaxGridLoops) << s.id << " " << f.name;
  }
}

TEST(Catalog, MetadataIsDeterministic) {
  const auto first = all_scenarios(), second = all_scenarios();
  ASSERT_EQ(first.size(), second.size());
  for (std::size_t i = 0; i < first.size(); ++i) EXPECT_EQ(first[i].to_json(), second[i].to_json());
}

TEST(Catalog, RebuildFromJsonRoundTrips) {
  for (const auto& s : all_scenarios()) {
    const nlohmann::json j = s.to_json();
    EXPECT_EQ(make_scenario(j).to_json(), j) << s.id;
  }
  const nlohmann::json unknown{{"kind", "moebius"}, {"parameters", nlohmann::json::object()}};
  EXPECT_THROW(make_scenario(unknown), InvalidInputError);
}

TEST(Catalog, EllipsoidTargetsAndBindings) {
  const Scenario s = ellipsoid_scenario(3, 0.5);
  EXPECT_EQ(s.target("ob1.M").name, "[S^3]");
  EXPECT_EQ(s.target("[pt]").route, "ob1.pt");
  EXPECT_TRUE(s.boundary_nonempty);
  EXPECT_EQ(s.symbolic_bindings.at("E_+").family, "L_+");
  EXPECT_EQ(s.symbolic_bindings.at("E_-").family, "L_-");
  EXPECT_THROW(s.family("L_A"), InvalidInputError);
  EXPECT_THROW(s.target("[V]"), InvalidInputError);
}

TEST(Catalog, OpenBookLoopsStayOnTheSphere) {
  const Scenario s = ellipsoid_scenario(2, 0.5);
  for (const auto& f : s.families) {
    for (std::size_t i = 0; i < f.params.grid_size(); i += 7) {
      const Loop loop = f.loop_at(f.params.grid_point(i));
      for (double t : {0.0, 0.3, 0.65}) {
        const LoopSample smp = loop.sample(t);
        EXPECT_NEAR(smp.point.coords.norm(), 1.0, 1e-12);
        EXPECT_NEAR(smp.point.coords.dot(smp.velocity), 0.0, 1e-9 * (1 + smp.velocity.norm()));
      }
    }
    EXPECT_FALSE(f.singular_loops.empty()) << "binding orbits are part of " << f.name;
  }
}

TEST(Catalog, EllipsoidTwoUsesDiagonalAction) {
  const Scenario s = ellipsoid2_scenario(3, 0.4);
  EXPECT_NO_THROW(s.family("L_A"));
  EXPECT_TRUE(s.algebra.has_axiom("HOPF_CONTRACT"));
  EXPECT_TRUE(s.algebra.has_axiom("OB_BV2"));
  EXPECT_EQ(s.target("[pt]").route, "ellipsoid2.pt");
  EXPECT_THROW(ellipsoid2_scenario(2, 0.4), InvalidInputError);
}

TEST(Catalog, RotatingPairWithoutContractionAxiom) {
  const Scenario s = open_book_scenario(PageSpec::disk(2), PageFunction::round(), PageAction::rotate_page_pair());
  EXPECT_TRUE(s.algebra.has_axiom("OB_BV2"));
  EXPECT_FALSE(s.algebra.has_axiom("HOPF_CONTRACT"));
  EXPECT_THROW(open_book_scenario(PageSpec::disk(1), PageFunction::round(), PageAction::rotate_page_pair()),
               InvalidInputError);
}

TEST(Catalog, PageFunctionNeedsRegularBoundary) {
  EXPECT_NO_THROW(PageFunction::round().check_regular_boundary());
  EXPECT_NO_THROW(PageFunction::power(4.0).check_regular_boundary());
  // reaches 1 with zero slope, so 1 is not a regular value
  const PageFunction flat_edge = PageFunction::custom("flat edge", [](double r) { return 1.0 - std::pow(1.0 - r, 3); });
  EXPECT_THROW(flat_edge.check_regular_boundary(), InvalidInputError);
  const PageFunction overshoot = PageFunction::custom("overshoot", [](double r) { return 2.0 * r * r - r; });
  EXPECT_THROW(overshoot.check_regular_boundary(), InvalidInputError);
  EXPECT_THROW(open_book_scenario(PageSpec::disk(1), flat_edge, PageAction::trivial()), InvalidInputError);
}

TEST(Catalog, ProductTorusFamiliesAndLabels) {
  const Scenario s = product_torus_scenario(1, 3, 2, std::vector<double>{0.5, 1.0, 0.7, 1.5});
  EXPECT_EQ(s.target("prod_torus.Tk").name, "[T^2]");
  // L_- moves the whole zero section, L_+^k is pinned on the first k circle coordinates
  EXPECT_EQ(s.family("L_-").params.dim(), 1 + 2);
  EXPECT_EQ(s.family("L_+^2").params.dim(), 1 + 0);
  EXPECT_THROW(product_torus_scenario(0, 2, 2, std::vector<double>{1.0, 1.0}), InvalidInputError);
  EXPECT_THROW(product_torus_scenario(0, 2, 1, std::vector<double>{1.0}), InvalidInputError);
}

TEST(Catalog, CamelNeedsTwoDimensions) {
  EXPECT_THROW(camel_scenario(1, 0.4, 0.01), InvalidInputError);
  EXPECT_THROW(camel_scenario(2, 0.4, 0.0), InvalidInputError);
  const Scenario s = camel_scenario(3, 0.4, 0.01);
  EXPECT_EQ(s.kind, "camel");
  EXPECT_EQ(s.target("prod_torus.Tk").name, "[T^1]");
}

TEST(Catalog, KleinLoopsCloseUnderTheGlide) {
  const Scenario s = klein_bottle_scenario(1.0, 1.0);
  const LoopFamily& f = s.family("L");
  EXPECT_EQ(f.objective, LoopFamily::Objective::kForwardPlusReverse);
  for (double y0 : {0.0, 0.1, 0.25, 0.5, 0.8}) {
    const Loop loop = f.loop_at({0.3, y0});  // validated on construction
    const Vec start = loop.point(0.0).coords;
    const Vec almost = loop.point(1.0 - 1e-9).coords;
    EXPECT_LT(ChartId::klein_bottle().displacement(start, almost).norm(), 1e-6);
  }
  EXPECT_TRUE(s.algebra.nonorientable_loops.count("q"));
}

TEST(Catalog, ProductLabelsMergeAdjacentFactors) {
  EXPECT_EQ(detail::product_label({{"0", 1}, {"0", 1}}), "0^2");
  EXPECT_EQ(detail::product_label({{"V", 1}, {"T", 0}, {"0", 1}}), "Vx0^1");
  EXPECT_EQ(detail::product_label({{"V", 0}, {"T", 0}}), "pt");
}
