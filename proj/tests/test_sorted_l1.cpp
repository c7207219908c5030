#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "slope/errors.hpp"
#include "slope/sorted_l1.hpp"
#include "support.hpp"

using slope::InputError;
using slope::TuningVector;
using slope::Vector;
namespace ts = testing_support;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

}  // namespace

TEST(TuningVector, RejectsInvalidSequences) {
  EXPECT_THROW(TuningVector{Vector()}, InputError);
  EXPECT_THROW(TuningVector({0.0, 0.0}), InputError);
  EXPECT_THROW(TuningVector({1.0, 2.0}), InputError);
  EXPECT_THROW(TuningVector({2.0, -1.0}), InputError);
  EXPECT_THROW(TuningVector({std::nan(""), 1.0}), InputError);
  EXPECT_THROW(TuningVector({std::numeric_limits<double>::infinity()}), InputError);
  EXPECT_NO_THROW(TuningVector({3.0, 3.0, 0.0}));
}

TEST(TuningVector, Factories) {
  const TuningVector a = TuningVector::arithmetic(4, 2.0, 1.0);
  EXPECT_EQ(a.values(), vec({9, 7, 5, 3}));
  EXPECT_TRUE(TuningVector::constant(3, 2.0).is_constant());
  EXPECT_FALSE(a.is_constant());
  EXPECT_EQ(TuningVector({200, 100}).divided(50.0).values(), vec({4, 2}));
  EXPECT_EQ(a.scaled(2.0).values(), vec({18, 14, 10, 6}));
  EXPECT_THROW(a.scaled(0.0), InputError);
}

TEST(SortedL1Norm, HandExamples) {
  const TuningVector lam{4, 2};
  EXPECT_EQ(slope::sorted_l1_norm(vec({0, 0}), lam), 0.0);
  EXPECT_EQ(slope::sorted_l1_norm(vec({-1.5, 4}), lam), 19.0);
  EXPECT_EQ(slope::sorted_l1_norm(vec({1, 1, 1}), TuningVector{3, 2, 1}), 6.0);
  EXPECT_THROW(slope::sorted_l1_norm(vec({1, 2, 3}), lam), InputError);
}

TEST(DualNorm, HandExamples) {
  const TuningVector lam{4, 2};
  EXPECT_EQ(slope::dual_norm(vec({4, 2}), lam), 1.0);
  EXPECT_EQ(slope::dual_norm(vec({0, 0}), lam), 0.0);
  EXPECT_EQ(slope::dual_norm(vec({5, 0}), lam), 1.25);
  EXPECT_THROW(slope::dual_norm(vec({1}), lam), InputError);
}

TEST(DualBall, Membership) {
  const TuningVector lam{4, 2};
  EXPECT_TRUE(slope::in_dual_ball(vec({4, 2}), lam, 0.0));
  EXPECT_FALSE(slope::in_dual_ball(vec({4.1, 2}), lam, 0.0));
  EXPECT_TRUE(slope::in_dual_ball(vec({0, 0}), lam, 0.0));
  EXPECT_TRUE(slope::in_dual_ball(vec({-2, 4}), lam, 0.0));
  EXPECT_FALSE(slope::in_dual_ball(vec({-2, 4.5}), lam, 0.0));
  EXPECT_EQ(slope::dual_ball_slack(vec({1, -3}), lam), vec({1, 2}));
  EXPECT_THROW(slope::in_dual_ball(vec({1, 2}), lam, -1.0), InputError);
}

TEST(Prox, PlanarAnchors) {
  EXPECT_EQ(slope::prox_sorted_l1(vec({6, 9}), TuningVector{4, 2}), vec({4, 5}));
  EXPECT_EQ(slope::prox_sorted_l1(vec({-5, 6}), TuningVector{4, 2}), vec({-2.5, 2.5}));
  EXPECT_EQ(slope::prox_sorted_l1(vec({1, -1}), TuningVector{3, 2}), vec({0, 0}));
}

TEST(Prox, RejectsBadInput) {
  EXPECT_THROW(slope::prox_sorted_l1(vec({1, 2, 3}), TuningVector{1, 1}), InputError);
  EXPECT_THROW(slope::prox_sorted_l1(vec({1, std::nan("")}), TuningVector{1, 1}), InputError);
}

TEST(Projection, Examples) {
  EXPECT_EQ(slope::project_dual_ball(vec({6, 9}), TuningVector{4, 2}).pi, vec({2, 4}));
  EXPECT_EQ(slope::project_dual_ball(vec({1, -1}), TuningVector{3, 2}).pi, vec({1, -1}));
  EXPECT_EQ(slope::project_dual_ball(vec({0, 0}), TuningVector{3, 2}).pi, vec({0, 0}));
  const auto cert = slope::project_dual_ball(vec({6, 9}), TuningVector{4, 2});
  EXPECT_EQ(cert.slack, vec({0, 0}));
}

TEST(Prox, MatchesExhaustiveOracleOnSmallInstances) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 3000; ++trial) {
    const Eigen::Index p = 1 + trial % 3;
    const TuningVector lam(ts::random_lambda(p, rng));
    const Vector y = ts::random_point(p, rng);
    const Vector got = slope::prox_sorted_l1(y, lam);
    const Vector want = ts::brute_force_prox(y, lam.values());
    ASSERT_LE((got - want).cwiseAbs().maxCoeff(), 1e-8) << "y=" << y.transpose() << " lam=" << lam.values().transpose();
  }
}

TEST(Prox, MoreauIdentityIsExact) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 2000; ++trial) {
    const Eigen::Index p = 1 + trial % 50;
    const TuningVector lam(ts::random_lambda(p, rng));
    const Vector y = ts::random_point(p, rng, 5.0);
    const auto split = slope::moreau_split(y, lam);
    const Vector prox = slope::prox_sorted_l1(y, lam);
    const Vector pi = slope::project_dual_ball(y, lam).pi;
    ASSERT_EQ(split.prox, prox);
    ASSERT_EQ(split.projection.pi, pi);
    ASSERT_EQ(pi, Vector(y - prox));
    for (Eigen::Index i = 0; i < p; ++i) {
      const double ulp = std::nextafter(std::abs(y[i]), INFINITY) - std::abs(y[i]);
      ASSERT_LE(std::abs(prox[i] + pi[i] - y[i]), ulp);
    }
  }
}

TEST(Prox, OptimalityCertificate) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 2000; ++trial) {
    const Eigen::Index p = 1 + trial % 50;
    const TuningVector lam(ts::random_lambda(p, rng));
    const Vector y = ts::random_point(p, rng, 5.0);
    const auto split = slope::moreau_split(y, lam);
    ASSERT_GE(split.projection.min_slack(), -1e-10);
    const double j = ts::naive_sorted_l1(split.prox, lam.values());
    ASSERT_NEAR(split.projection.pi.dot(split.prox), j, 1e-10 * (1.0 + std::abs(j)));
  }
}

TEST(Prox, PositiveScaling) {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> u(0.1, 10.0);
  for (int trial = 0; trial < 500; ++trial) {
    const Eigen::Index p = 1 + trial % 20;
    const TuningVector lam(ts::random_lambda(p, rng));
    const Vector y = ts::random_point(p, rng);
    const double c = u(rng);
    const Vector lhs = slope::prox_sorted_l1(c * y, lam.scaled(c));
    const Vector rhs = c * slope::prox_sorted_l1(y, lam);
    ASSERT_LE((lhs - rhs).cwiseAbs().maxCoeff(), 1e-12 * (1.0 + c * y.cwiseAbs().maxCoeff()));
  }
}

TEST(Prox, SignAndHierarchyPreserved) {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 1000; ++trial) {
    const Eigen::Index p = 1 + trial % 30;
    const TuningVector lam(ts::random_lambda(p, rng));
    const Vector y = ts::random_point(p, rng);
    const Vector b = slope::prox_sorted_l1(y, lam);
    for (Eigen::Index i = 0; i < p; ++i) {
      ASSERT_GE(b[i] * y[i], 0.0);
      for (Eigen::Index j = 0; j < p; ++j) {
        if (std::abs(y[i]) > std::abs(y[j])) ASSERT_GE(std::abs(b[i]), std::abs(b[j]));
      }
    }
  }
}

TEST(Prox, ConstantWeightsGiveSoftThresholdExactly) {
  std::mt19937_64 rng(16);
  std::uniform_real_distribution<double> u(0.0, 4.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const Eigen::Index p = 1 + trial % 40;
    const double lambda = u(rng) + 1e-3;
    const Vector y = ts::random_point(p, rng);
    const Vector b = slope::prox_sorted_l1(y, TuningVector::constant(p, lambda));
    for (Eigen::Index i = 0; i < p; ++i) {
      const double want = std::copysign(std::max(std::abs(y[i]) - lambda, 0.0), y[i]);
      ASSERT_EQ(b[i], want);
    }
  }
}

TEST(DualNorm, IsANorm) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const Eigen::Index p = 1 + trial % 25;
    const TuningVector lam(ts::random_lambda(p, rng));
    const Vector x = ts::random_point(p, rng), z = ts::random_point(p, rng);
    const double a = u(rng);
    const double nx = slope::dual_norm(x, lam), nz = slope::dual_norm(z, lam);
    ASSERT_NEAR(slope::dual_norm(a * x, lam), std::abs(a) * nx, 1e-12 * (1 + std::abs(a) * nx));
    ASSERT_LE(slope::dual_norm(x + z, lam), nx + nz + 1e-12 * (1 + nx + nz));
    // Membership agrees with the gauge away from the boundary.
    const double tol = 1e-12 * lam.values().norm();
    const Vector inside = x / (nx == 0.0 ? 1.0 : nx) * 0.999;
    const Vector outside = x / (nx == 0.0 ? 1.0 : nx) * 1.001;
    ASSERT_TRUE(slope::in_dual_ball(inside, lam, tol));
    if (nx > 0.0) ASSERT_FALSE(slope::in_dual_ball(outside, lam, tol));
    if (nx < 1.0 - 1e-9) ASSERT_TRUE(slope::in_dual_ball(x, lam, tol));
    if (nx > 1.0 + 1e-9) ASSERT_FALSE(slope::in_dual_ball(x, lam, tol));
  }
}

TEST(DualNorm, VerticesLieOnTheBoundary) {
  std::mt19937_64 rng(18);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index p = 1 + trial % 10;
    const TuningVector lam(ts::random_lambda(p, rng));
    Vector x = lam.values();
    std::shuffle(x.begin(), x.end(), rng);
    EXPECT_NEAR(slope::dual_norm(x, lam), 1.0, 1e-14);
    EXPECT_TRUE(slope::in_dual_ball(x, lam));
  }
}
