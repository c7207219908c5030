#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "slope/tuning.hpp"

namespace slope {

/// Adjacent positions (rank, rank + 1) of |beta_OLS| sorted descending whose
/// gap is small enough to force equal SLOPE magnitudes. All indices 0-based.
struct ClusterPair {
  Eigen::Index rank;    // sorted position of the larger entry
  Eigen::Index first;   // coordinate at sorted position `rank`
  Eigen::Index second;  // coordinate at sorted position `rank + 1`
};

/// Sufficient condition for clustering under X'X = c I:
///   |b|_(i) - |b|_(i+1) <= (lambda_i - lambda_{i+1}) / c.
/// Evaluated in the rearranged form |b|_(i) - lambda_i / c <= |b|_(i+1) - lambda_{i+1} / c,
/// i.e. on the same shifted sequence the prox pools.
std::vector<ClusterPair> cluster_condition(const Vector& ols_beta, const TuningVector& lam, double c);

struct SupportConditionReport {
  bool cond_a = false;
  bool cond_b = false;
  bool cond_c = false;
  bool all = false;
  /// Worst-case slack of each condition (positive = satisfied); +inf when vacuous.
  double margin_a = 0.0;
  double margin_b = 0.0;
  double margin_c = 0.0;
};

/// Necessary and sufficient conditions for supp(prox_{J_{Lambda/c}}(ols_beta))
/// to equal {0, ..., p0 - 1}. The caller places the declared support first
/// (see leading_support_permutation).
SupportConditionReport support_conditions(const Vector& ols_beta, const TuningVector& lam, double c, Eigen::Index p0);

/// Permutation listing `support` first (in the given order) and the remaining
/// coordinates after it in increasing order; apply as v_perm[i] = v[perm[i]].
std::vector<Eigen::Index> leading_support_permutation(Eigen::Index p, const std::vector<Eigen::Index>& support);
Vector permute(const Vector& v, const std::vector<Eigen::Index>& perm);

enum class ScheduleKind { kArithmeticN23, kScaledArithmetic, kCustom };

std::string to_string(ScheduleKind kind);

/// A family of tuning vectors indexed by the sample size n.
struct TuningSchedule {
  ScheduleKind kind = ScheduleKind::kScaledArithmetic;
  Eigen::Index p = 0;
  /// lambda_i(n) = factor * (p + 1 - i) * n^exponent for the arithmetic kinds.
  double factor = 1.0;
  double exponent = 0.0;
  /// delta in the growth condition on consecutive gaps.
  double delta = 0.1;
  std::function<TuningVector(long long n)> generator;

  TuningVector at(long long n) const { return generator(n); }
};

struct ScheduleParams {
  std::optional<double> factor;
  std::optional<double> exponent;
  double delta = 0.1;
};

/// arithmetic_n23: factor (default 1) * (p + 1 - i) * n^{2/3}.
/// scaled_arithmetic: factor (default 3.5) * (p + 1 - i), independent of n.
/// Custom schedules are built with make_custom_schedule.
TuningSchedule make_schedule(ScheduleKind kind, Eigen::Index p, const ScheduleParams& params = {});

TuningSchedule make_custom_schedule(Eigen::Index p, std::function<TuningVector(long long n)> generator,
                                    double delta = 0.1);

/// lambda_i(n) = ratio * n * (p + 1 - i) / p, so lambda_1(n) / n == ratio.
TuningSchedule constant_ratio_schedule(Eigen::Index p, double ratio);

enum class Trend { kVanishing, kBoundedAway, kGrowing, kUndetermined };
std::string to_string(Trend t);

struct ScheduleRow {
  long long n = 0;
  double lambda1_over_n = 0.0;
  /// min_i (lambda_i - lambda_{i+1}) / (sqrt(n) (log n)^{1/2 + delta}); NaN for p = 1.
  double min_gap_ratio = 0.0;
};

struct ScheduleReport {
  std::vector<ScheduleRow> rows;
  /// Trend of lambda_1 / n over the grid. kVanishing supports strong
  /// consistency; kBoundedAway flags the non-consistent regime.
  Trend consistency = Trend::kUndetermined;
  /// Trend of the gap ratio. kGrowing or kBoundedAway satisfy the growth
  /// condition needed for pattern recovery.
  Trend gap_growth = Trend::kUndetermined;
  bool consistency_ok = false;
  bool gap_condition_ok = false;
};

ScheduleReport schedule_diagnostics(const TuningSchedule& s, const std::vector<long long>& n_list);

}  // namespace slope
