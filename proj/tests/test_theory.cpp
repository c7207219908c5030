#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "slope/errors.hpp"
#include "slope/sorted_l1.hpp"
#include "slope/theory.hpp"
#include "support.hpp"

using slope::InputError;
using slope::ScheduleKind;
using slope::Trend;
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

// Support of prox(ols, lam / c) equals the first p0 coordinates.
bool prox_support_is_leading(const Vector& ols, const TuningVector& lam, double c, Eigen::Index p0) {
  const Vector b = slope::prox_sorted_l1(ols, lam.divided(c));
  for (Eigen::Index i = 0; i < b.size(); ++i) {
    if ((b[i] != 0.0) != (i < p0)) return false;
  }
  return true;
}

}  // namespace

TEST(ClusterCondition, Examples) {
  const auto yellow = slope::cluster_condition(vec({-5, 6}), TuningVector{4, 2}, 1.0);
  ASSERT_EQ(yellow.size(), 1u);
  EXPECT_EQ(yellow[0].rank, 0);
  EXPECT_EQ(yellow[0].first, 1);
  EXPECT_EQ(yellow[0].second, 0);

  const auto constant = slope::cluster_condition(vec({3, -3, 1, 2}), TuningVector::constant(4, 1.0), 1.0);
  ASSERT_EQ(constant.size(), 1u);
  EXPECT_EQ(constant[0].first, 0);
  EXPECT_EQ(constant[0].second, 1);

  EXPECT_TRUE(slope::cluster_condition(vec({10, 1}), TuningVector{4, 2}, 1.0).empty());
  EXPECT_EQ(slope::prox_sorted_l1(vec({10, 1}), TuningVector{4, 2}), vec({6, 0}));

  // Scale c: (200, 100) / 50 = (4, 2).
  EXPECT_EQ(slope::cluster_condition(vec({-5, 6}), TuningVector{200, 100}, 50.0).size(), 1u);
  EXPECT_THROW(slope::cluster_condition(vec({1, 2}), TuningVector{1, 1}, 0.0), InputError);
}

TEST(ClusterCondition, FlaggedPairsHaveEqualMagnitudes) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> cd(0.5, 4.0);
  std::size_t flagged = 0;
  for (int trial = 0; trial < 20000; ++trial) {
    const Eigen::Index p = 2 + trial % 7;
    const TuningVector lam(ts::random_lambda(p, rng));
    const Vector ols = ts::random_point(p, rng);
    const double c = cd(rng);
    const Vector b = slope::prox_sorted_l1(ols, lam.divided(c));
    for (const auto& pair : slope::cluster_condition(ols, lam, c)) {
      ++flagged;
      ASSERT_EQ(std::abs(b[pair.first]), std::abs(b[pair.second]));
    }
  }
  EXPECT_GT(flagged, 1000u);
}

TEST(SupportConditions, Examples) {
  // p0 = 0 reduces to dual-ball membership of the OLS vector.
  const auto inside = slope::support_conditions(vec({1, -1}), TuningVector{3, 2}, 1.0, 0);
  EXPECT_TRUE(inside.cond_a);
  EXPECT_TRUE(inside.cond_b);
  EXPECT_TRUE(inside.cond_c);
  EXPECT_TRUE(inside.all);
  EXPECT_EQ(inside.all, slope::in_dual_ball(vec({1, -1}), TuningVector{3, 2}, 0.0));
  EXPECT_FALSE(slope::support_conditions(vec({4.5, 2}), TuningVector{4, 2}, 1.0, 0).all);

  const auto strong = slope::support_conditions(vec({50, -40, 0.1, 0}), TuningVector{4, 3, 2, 1}, 1.0, 2);
  EXPECT_TRUE(strong.all);
  EXPECT_GT(strong.margin_a, 0.0);
  EXPECT_GT(strong.margin_b, 0.0);
  EXPECT_GE(strong.margin_c, 0.0);

  EXPECT_THROW(slope::support_conditions(vec({1, 2}), TuningVector{1, 1}, 1.0, 3), InputError);
}

TEST(SupportConditions, BoundaryTiesFailStrictConditions) {
  // Equal magnitudes across the declared boundary violate the strict ordering.
  const auto tie = slope::support_conditions(vec({5, 5, 0}), TuningVector{1, 1, 1}, 1.0, 1);
  EXPECT_FALSE(tie.cond_a);
  EXPECT_EQ(tie.margin_a, 0.0);
  EXPECT_FALSE(tie.all);
  EXPECT_FALSE(prox_support_is_leading(vec({5, 5, 0}), TuningVector{1, 1, 1}, 1.0, 1));
  // Suffix sum exactly at the threshold: b fails, the prox is zero there.
  const auto edge = slope::support_conditions(vec({2, 0}), TuningVector{2, 1}, 1.0, 1);
  EXPECT_FALSE(edge.cond_b);
  EXPECT_FALSE(prox_support_is_leading(vec({2, 0}), TuningVector{2, 1}, 1.0, 1));
}

TEST(SupportConditions, AgreeWithProxSupport) {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> cd(0.5, 4.0);
  std::uniform_int_distribution<int> p0d(0, 8);
  int positives = 0;
  for (int trial = 0; trial < 30000; ++trial) {
    const Eigen::Index p = 1 + trial % 8;
    const TuningVector lam(ts::random_lambda(p, rng));
    Vector ols = ts::random_point(p, rng);
    const double c = cd(rng);
    const Eigen::Index p0 = p0d(rng) % (p + 1);
    // Put the p0 largest magnitudes first half of the time so the positive case is exercised.
    if (trial % 2 == 0) {
      const auto order = slope::magnitude_order(ols);
      std::vector<Eigen::Index> lead(order.begin(), order.begin() + p0);
      ols = slope::permute(ols, slope::leading_support_permutation(p, lead));
    }
    const auto report = slope::support_conditions(ols, lam, c, p0);
    ASSERT_EQ(report.all, report.cond_a && report.cond_b && report.cond_c);
    ASSERT_EQ(report.all, prox_support_is_leading(ols, lam, c, p0))
        << "ols=" << ols.transpose() << " lam=" << lam.values().transpose() << " c=" << c << " p0=" << p0;
    positives += report.all;
  }
  EXPECT_GT(positives, 1000);
}

TEST(SupportPermutation, LeadsWithSupport) {
  const auto perm = slope::leading_support_permutation(5, {3, 1});
  EXPECT_EQ(perm, (std::vector<Eigen::Index>{3, 1, 0, 2, 4}));
  EXPECT_EQ(slope::permute(vec({10, 11, 12, 13, 14}), perm), vec({13, 11, 10, 12, 14}));
  EXPECT_THROW(slope::leading_support_permutation(3, {1, 1}), InputError);
  EXPECT_THROW(slope::leading_support_permutation(3, {3}), InputError);
}

TEST(Schedules, Examples) {
  const auto n23 = slope::make_schedule(ScheduleKind::kArithmeticN23, 3);
  EXPECT_EQ(n23.at(8).values(), vec({12, 8, 4}));
  EXPECT_EQ(n23.at(1000).values(), vec({300, 200, 100}));

  slope::ScheduleParams params;
  const auto scaled = slope::make_schedule(ScheduleKind::kScaledArithmetic, 100, params);
  EXPECT_EQ(scaled.at(300)[0], 350.0);
  EXPECT_EQ(scaled.at(300)[99], 3.5);
  EXPECT_EQ(scaled.at(300).values(), scaled.at(5000).values());

  params.factor = 0.0;
  EXPECT_THROW(slope::make_schedule(ScheduleKind::kScaledArithmetic, 4, params), InputError);
  params.factor = -1.0;
  EXPECT_THROW(slope::make_schedule(ScheduleKind::kArithmeticN23, 4, params), InputError);
  EXPECT_THROW(slope::make_schedule(ScheduleKind::kCustom, 4), InputError);

  const auto ratio = slope::constant_ratio_schedule(6, 1.0);
  EXPECT_EQ(ratio.at(600)[0], 600.0);
  EXPECT_EQ(ratio.at(600)[5], 100.0);
}

TEST(ScheduleDiagnostics, ArithmeticN23IsConsistentWithGrowingGaps) {
  const auto s = slope::make_schedule(ScheduleKind::kArithmeticN23, 6);
  const auto report = slope::schedule_diagnostics(s, {100, 1000, 10000, 100000, 1000000});
  ASSERT_EQ(report.rows.size(), 5u);
  for (const auto& row : report.rows) {
    const double n = static_cast<double>(row.n);
    EXPECT_NEAR(row.lambda1_over_n, 6.0 * std::pow(n, -1.0 / 3.0), 1e-12);
    EXPECT_NEAR(row.min_gap_ratio, std::pow(n, 2.0 / 3.0) / (std::sqrt(n) * std::pow(std::log(n), 0.6)), 1e-9);
  }
  EXPECT_EQ(report.consistency, Trend::kVanishing);
  EXPECT_TRUE(report.consistency_ok);
  EXPECT_EQ(report.gap_growth, Trend::kGrowing);
  EXPECT_TRUE(report.gap_condition_ok);
}

TEST(ScheduleDiagnostics, ConstantRatioIsNotConsistent) {
  const auto report = slope::schedule_diagnostics(slope::constant_ratio_schedule(6, 1.0), {100, 1000, 10000});
  for (const auto& row : report.rows) EXPECT_EQ(row.lambda1_over_n, 1.0);
  EXPECT_EQ(report.consistency, Trend::kBoundedAway);
  EXPECT_FALSE(report.consistency_ok);
}

TEST(ScheduleDiagnostics, FixedScheduleFailsGapGrowth) {
  // n-independent weights: the gap ratio decays like 1 / sqrt(n).
  const auto s = slope::make_schedule(ScheduleKind::kScaledArithmetic, 5);
  const auto report = slope::schedule_diagnostics(s, {100, 10000, 1000000});
  EXPECT_EQ(report.gap_growth, Trend::kVanishing);
  EXPECT_FALSE(report.gap_condition_ok);
  EXPECT_TRUE(report.consistency_ok);
}

TEST(ScheduleDiagnostics, RejectsBadGrids) {
  const auto s = slope::make_schedule(ScheduleKind::kArithmeticN23, 3);
  EXPECT_THROW(slope::schedule_diagnostics(s, {}), InputError);
  EXPECT_THROW(slope::schedule_diagnostics(s, {100, 100}), InputError);
  EXPECT_THROW(slope::schedule_diagnostics(s, {1, 10}), InputError);
}

TEST(ScheduleDiagnostics, Reproducible) {
  const auto s = slope::make_schedule(ScheduleKind::kArithmeticN23, 4);
  const auto a = slope::schedule_diagnostics(s, {10, 100, 1000});
  const auto b = slope::schedule_diagnostics(s, {10, 100, 1000});
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i].lambda1_over_n, b.rows[i].lambda1_over_n);
    EXPECT_EQ(a.rows[i].min_gap_ratio, b.rows[i].min_gap_ratio);
  }
}
