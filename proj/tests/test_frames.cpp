#include <gtest/gtest.h>

#include <complex>

#include "stringcap/frames.hpp"

using namespace stringcap;

namespace {

// Residuals recomputed entry by entry, without Eigen's products.
double gram_defect(const CMat& a) {
  double worst = 0.0;
  for (int i = 0; i < a.cols(); ++i) {
    for (int j = 0; j < a.cols(); ++j) {
      std::complex<double> s = 0.0;
      for (int r = 0; r < a.rows(); ++r) s += std::conj(a(r, i)) * a(r, j);
      worst = std::max(worst, std::abs(s - (i == j ? 1.0 : 0.0)));
    }
  }
  return worst;
}

double first_column_defect(const CMat& a, const Eigen::VectorXd& q) {
  double worst = 0.0;
  for (int r = 0; r < a.rows(); ++r) worst = std::max(worst, std::abs(a(r, 0) - q[r]));
  return worst;
}

}  // namespace

TEST(Frames, UnitaryWithBasepointFirstOnRandomPoints) {
  for (int n : {1, 2, 3}) {
    for (const auto& q : random_sphere_points(n, 1000, 21)) {
      const UnitaryFrame f = sphere_unitary_frame(n, q);
      EXPECT_LE(gram_defect(f.matrix), 1e-10);
      EXPECT_LE(first_column_defect(f.matrix, q), 1e-10);
      EXPECT_LE(f.unitarity_defect, kFrameTolerance);
    }
  }
}

TEST(Frames, CoordinatePointsAndPoles) {
  for (int n : {1, 2, 3, 5}) {
    for (int i = 0; i <= n; ++i) {
      for (double sign : {1.0, -1.0}) {
        Eigen::VectorXd q = Eigen::VectorXd::Zero(n + 1);
        q[i] = sign;
        const UnitaryFrame f = sphere_unitary_frame(n, q);
        EXPECT_LE(gram_defect(f.matrix), 1e-10) << "n=" << n << " i=" << i;
        EXPECT_LE(first_column_defect(f.matrix, q), 1e-10);
      }
    }
  }
}

TEST(Frames, RejectsBadInput) {
  EXPECT_THROW(sphere_unitary_frame(0, Eigen::VectorXd::Ones(1)), InvalidInputError);
  EXPECT_THROW(sphere_unitary_frame(2, Eigen::VectorXd::Ones(2)), InvalidInputError);
  EXPECT_THROW(sphere_unitary_frame(2, Eigen::VectorXd::Ones(3)), InvalidInputError);
}

TEST(Frames, IcosphereCountsFollowEuler) {
  for (int depth = 0; depth <= 3; ++depth) {
    const SphereGrid g = icosphere(depth);
    const std::size_t faces = 20u << (2 * depth);
    EXPECT_EQ(g.edges.size(), faces * 3 / 2);
    EXPECT_EQ(g.points.size() - g.edges.size() + faces, 2u);  // V - E + F = 2
    for (const auto& p : g.points) EXPECT_NEAR(p.norm(), 1.0, 1e-14);
  }
  EXPECT_GT(icosphere(2).mesh, icosphere(3).mesh);
}

TEST(Frames, ContinuityModulusSettlesUnderRefinement) {
  for (int n : {1, 3}) {
    std::vector<double> moduli;
    for (double h : {1e-3, 5e-4, 2.5e-4}) moduli.push_back(verify_frame_family(n, random_sphere_pairs(n, 2000, h, 5)).continuity_modulus);
    EXPECT_TRUE(std::isfinite(moduli[0]));
    EXPECT_LT(std::abs(moduli[1] - moduli[0]) / moduli[0], 0.1);
    EXPECT_LT(std::abs(moduli[2] - moduli[1]) / moduli[1], 0.1);
  }
}

TEST(Frames, ReportFlagsResiduals) {
  const FrameFamilyReport r = verify_frame_family(2, icosphere(2));
  EXPECT_TRUE(r.residuals_ok);
  EXPECT_EQ(r.points, icosphere(2).points.size());
  EXPECT_GT(r.continuity_modulus, 0.0);
  const FrameFamilyReport strict = verify_frame_family(2, icosphere(2), 0.0);
  EXPECT_EQ(strict.residuals_ok, strict.max_unitarity_defect == 0.0 && strict.max_basepoint_defect == 0.0);
}
