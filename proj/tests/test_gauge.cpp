#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "stringcap/gauge.hpp"

using namespace stringcap;

namespace {

constexpr double kPi = std::numbers::pi;

BasePoint equator_point(double t) { return make_point(ChartId::sphere(2), make_vec({0.0, std::cos(2 * kPi * t), std::sin(2 * kPi * t)})); }

TangentVector equator_velocity(double t) {
  const BasePoint q = equator_point(t);
  return attach(q, make_vec({0.0, -2 * kPi * std::sin(2 * kPi * t), 2 * kPi * std::cos(2 * kPi * t)}));
}

// Euclidean norm of (s_0 v_0, ..., s_n v_n): the pullback metric of a diagonal
// linear embedding, written out by hand.
double diagonal_norm(const std::vector<double>& scales, const Vec& v) {
  double sum = 0.0;
  for (std::size_t i = 0; i < scales.size(); ++i) sum += scales[i] * scales[i] * v[static_cast<Eigen::Index>(i)] * v[static_cast<Eigen::Index>(i)];
  return std::sqrt(sum);
}

}  // namespace

TEST(MetricNorm, FlatTorusUnitVector) {
  const MetricSpec m = MetricSpec::flat({1.0, 1.0});
  const BasePoint q = make_point(ChartId::torus(2), make_vec({0.3, 0.7}));
  EXPECT_DOUBLE_EQ(metric_norm(m, q, attach(q, make_vec({1.0, 0.0}))), 1.0);
}

TEST(MetricNorm, FlatLengthsAndRadiusScale) {
  const MetricSpec m = MetricSpec::flat({2.0, 0.5}, 3.0);
  const BasePoint q = make_point(ChartId::torus(2), make_vec({0.0, 0.0}));
  EXPECT_NEAR(metric_norm(m, q, attach(q, make_vec({1.0, 1.0}))), 3.0 * std::hypot(2.0, 0.5), 1e-14);
}

TEST(MetricNorm, EllipsoidEquatorIsTwoPiA) {
  for (double a : {0.2, 0.5, 1.0}) {
    const GaugeDomain dom = ellipsoid_codisk(2, a);
    for (double t : {0.0, 0.13, 0.5, 0.77}) {
      EXPECT_NEAR(support(dom, equator_point(t), equator_velocity(t)).value(), 2 * kPi * a, 1e-12) << "a=" << a;
    }
  }
}

TEST(MetricNorm, RoundMetricBelowEllipsoidMetric) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal;
  for (double a : {0.2, 0.5, 1.0}) {
    const GaugeDomain round = round_sphere_codisk(2, a), ell = ellipsoid_codisk(2, a);
    for (int s = 0; s < 200; ++s) {
      Vec q(3), w(3);
      for (int i = 0; i < 3; ++i) q[i] = normal(rng), w[i] = normal(rng);
      q.normalize();
      w -= w.dot(q) * q;
      const BasePoint p = make_point(ChartId::sphere(2), q);
      const double hr = support(round, p, attach(p, w)).value();
      const double he = support(ell, p, attach(p, w)).value();
      EXPECT_NEAR(hr, a * w.norm(), 1e-12);
      EXPECT_NEAR(he, diagonal_norm({1.0, a, a}, w), 1e-12);
      EXPECT_LE(hr, he * (1 + 1e-14));
    }
  }
}

TEST(Support, CodiskOfUnitVectorIsRadius) {
  for (double r : {0.5, 1.0, 4.0}) {
    const GaugeDomain dom = round_sphere_codisk(3, 1.0, r);
    const BasePoint q = make_point(ChartId::sphere(3), make_vec({0.0, 0.6, 0.0, 0.8}));
    const TangentVector v = attach(q, make_vec({1.0, 0.0, 0.0, 0.0}));
    EXPECT_NEAR(support(dom, q, v).value(), r, 1e-14);
  }
}

TEST(Support, ZeroVectorAndHomogeneity) {
  const GaugeDomain dom = flat_klein_codisk(0.5, 2.0, 1.5);
  const BasePoint q = make_point(ChartId::klein_bottle(), make_vec({0.25, 0.4}));
  EXPECT_EQ(support(dom, q, attach(q, make_vec({0.0, 0.0}))).value(), 0.0);
  const Vec v = make_vec({0.3, -1.1});
  const double h = support(dom, q, attach(q, v)).value();
  for (double lam : {0.0, 0.1, 1.0, 7.5}) {
    EXPECT_NEAR(support(dom, q, attach(q, lam * v)).value(), lam * h, 1e-12 * (1 + lam));
  }
}

TEST(Support, SubadditiveForCodiskBundles) {
  const GaugeDomain dom = ellipsoid_codisk(3, 0.3);
  ASSERT_TRUE(dom.properties().convex);
  const SamplePlan plan = sphere_sample_plan(3, 300, 9);
  for (std::size_t i = 0; i + 1 < plan.samples.size(); i += 2) {
    const BasePoint& q = plan.samples[i].q;
    Vec w = plan.samples[i + 1].v.components;
    w -= w.dot(q.coords) * q.coords;
    const Vec& v = plan.samples[i].v.components;
    const double lhs = support(dom, q, attach(q, v + w)).value();
    const double rhs = support(dom, q, attach(q, v)).value() + support(dom, q, attach(q, w)).value();
    EXPECT_LE(lhs, rhs + 1e-12);
  }
}

TEST(Support, CamelBackwardDirection) {
  // Oracle: brute-force maximum of <p, -e_n> over a box-capped grid of the
  // fiber {p_n >= -eps/2 - delta}.
  for (int n : {2, 3}) {
    const double eps = 0.4, delta = 0.01;
    const GaugeDomain dom = camel_domain(n, eps, delta);
    Vec x = Vec::Constant(n, 0.3), v = Vec::Zero(n);
    v[n - 1] = -1.0;
    const BasePoint q = make_point(ChartId::torus(n), x);
    const double floor_pn = -eps / 2 - delta;
    double best = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 4000; ++i) {
      const double pn = -1.0 + 2.0 * i / 4000.0;  // box [-1, 1]
      if (pn >= floor_pn - 1e-15) best = std::max(best, -pn);
    }
    EXPECT_NEAR(best, eps / 2 + delta, 1e-3);
    EXPECT_NEAR(support(dom, q, attach(q, v)).value(), eps / 2 + delta, 1e-15);
  }
}

TEST(Support, CamelUnboundedDirections) {
  const GaugeDomain dom = camel_domain(2, 0.4, 0.01);
  const BasePoint q = make_point(ChartId::torus(2), make_vec({0.3, 0.3}));
  EXPECT_TRUE(support(dom, q, attach(q, make_vec({1.0, 0.0}))).is_infinite());
  EXPECT_TRUE(support(dom, q, attach(q, make_vec({0.0, 1.0}))).is_infinite());
  const BasePoint wall = make_point(ChartId::torus(2), make_vec({0.0, 0.3}), 1u);
  EXPECT_NEAR(support(dom, wall, attach(wall, make_vec({0.0, 1.0}))).value(), 0.2 + 0.02, 1e-15);
}

TEST(Support, ChartMismatchAndNaN) {
  const GaugeDomain dom = flat_torus_codisk({1.0, 1.0});
  const BasePoint wrong = make_point(ChartId::klein_bottle(), make_vec({0.1, 0.1}));
  EXPECT_THROW(support(dom, wrong, attach(wrong, make_vec({1.0, 0.0}))), ChartMismatchError);
  const BasePoint q = make_point(ChartId::torus(2), make_vec({0.1, std::nan("")}));
  EXPECT_THROW(support(dom, q, attach(q, make_vec({1.0, 0.0}))), InvalidInputError);
}

TEST(Support, SphereTangencyEnforced) {
  const GaugeDomain dom = ellipsoid_codisk(2, 0.5);
  const BasePoint q = make_point(ChartId::sphere(2), make_vec({1.0, 0.0, 0.0}));
  EXPECT_THROW(support(dom, q, attach(q, make_vec({1.0, 0.0, 0.0}))), InvalidInputError);
}

TEST(MetricSpec, RankDeficientJacobianRejected) {
  Mat jac = Mat::Zero(3, 2);
  jac(0, 0) = 1.0;
  EXPECT_THROW(MetricSpec::linear(MetricSpec::Kind::kEmbeddingInduced, jac, 1.0), RankDeficientError);
  const BasePoint q = make_point(ChartId::euclidean(2), make_vec({0.0, 0.0}));
  EXPECT_THROW(MetricSpec::embedding([jac](const BasePoint&) { return jac; }, 1.0, {q}), RankDeficientError);
}

TEST(GenericGauge, EllipseSupportMatchesClosedForm) {
  // F(p) = sqrt(p1^2/A^2 + p2^2/B^2); max <p, v> over F = 1 is sqrt(A^2 v1^2 + B^2 v2^2).
  const double A = 2.0, B = 0.5;
  const GaugeFunction ellipse = [A, B](const BasePoint&, const Vec& p) {
    return std::sqrt(p[0] * p[0] / (A * A) + p[1] * p[1] / (B * B));
  };
  const GaugeDomain dom = gauge_domain(BaseDescriptor{"T^2", ChartId::torus(2)}, ellipse, "ellipse gauge");
  const BasePoint q = make_point(ChartId::torus(2), make_vec({0.5, 0.5}));
  const double tol = GenericMaximizeOptions{}.tol;
  EXPECT_NEAR(support(dom, q, attach(q, make_vec({1.0, 0.0}))).value(), A, tol);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  for (int s = 0; s < 50; ++s) {
    const Vec v = make_vec({normal(rng), normal(rng)});
    const double oracle = std::sqrt(A * A * v[0] * v[0] + B * B * v[1] * v[1]);
    EXPECT_NEAR(support(dom, q, attach(q, v)).value(), oracle, tol * (1 + oracle));
  }
}

TEST(GenericGauge, AgreesWithBuiltInCodiskGauge) {
  // The dual gauge of the flat metric with lengths L is sqrt(sum (p_i / L_i)^2).
  const std::vector<double> lengths = {1.0, 0.5, 2.0};
  const GaugeFunction dual = [lengths](const BasePoint&, const Vec& p) {
    double s = 0.0;
    for (int i = 0; i < 3; ++i) s += p[i] * p[i] / (lengths[static_cast<std::size_t>(i)] * lengths[static_cast<std::size_t>(i)]);
    return std::sqrt(s);
  };
  const GaugeDomain generic = gauge_domain(BaseDescriptor{"T^3", ChartId::torus(3)}, dual, "dual flat gauge");
  const GaugeDomain builtin = flat_torus_codisk(lengths);
  const double tol = GenericMaximizeOptions{}.tol;
  const SamplePlan plan = periodic_sample_plan(ChartId::torus(3), 50, 8);
  for (const auto& s : plan.samples) {
    const double hb = support(builtin, s.q, s.v).value();
    EXPECT_NEAR(support(generic, s.q, s.v).value(), hb, 10 * tol * (1 + hb));
  }
}

TEST(Containment, RoundInsideEllipsoid) {
  for (double a : {0.2, 0.5, 1.0}) {
    const ContainmentResult r =
        domain_contains(round_sphere_codisk(2, a), ellipsoid_codisk(2, a), sphere_sample_plan(2, 2000, 4));
    EXPECT_TRUE(r.contained) << "a=" << a;
    EXPECT_EQ(r.samples_checked, 2000u);
    EXPECT_LE(r.max_excess, 1e-12);
  }
}

TEST(Containment, EllipsoidNotInsideRoundReturnsWitness) {
  const ContainmentResult r =
      domain_contains(ellipsoid_codisk(2, 0.5), round_sphere_codisk(2, 0.5), sphere_sample_plan(2, 2000, 4));
  ASSERT_FALSE(r.contained);
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_GT(r.witness->inner.value(), r.witness->outer.value());
}

TEST(Containment, DifferentChartsRejected) {
  EXPECT_THROW(domain_contains(flat_torus_codisk({1.0, 1.0}), flat_klein_codisk(1.0, 1.0),
                               periodic_sample_plan(ChartId::torus(2), 10)),
               ChartMismatchError);
}

TEST(ScaledDomain, SupportScalesLinearly) {
  const GaugeDomain base = ellipsoid_codisk(2, 0.5);
  const GaugeDomain big = scaled_domain(base, 2.5);
  const BasePoint q = equator_point(0.2);
  EXPECT_NEAR(support(big, q, equator_velocity(0.2)).value(), 2.5 * 2 * kPi * 0.5, 1e-12);
  ASSERT_TRUE(big.codisk_metric().has_value());
  EXPECT_DOUBLE_EQ(big.codisk_metric()->radius, 2.5);
  EXPECT_THROW(scaled_domain(base, 0.0), InvalidInputError);
}
