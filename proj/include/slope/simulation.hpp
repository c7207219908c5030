#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "slope/estimators.hpp"
#include "slope/pattern.hpp"
#include "slope/theory.hpp"

namespace slope {

/// Independent 64-bit seed for stream `index` under `master` (splitmix64 mix).
std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index);

/// n x p trigonometric design: column 2j-1 is sin(2 pi i j / n) and column 2j
/// is cos(2 pi i j / n), rows i = 1..n, frequencies j = 1..p/2. X'X = (n/2) I,
/// or n I with normalize = true.
Matrix trig_design(Eigen::Index n, Eigen::Index p, bool normalize = false);

struct ClusterSpec {
  int count = 0;
  double magnitude = 0.0;
};

/// Leading coordinates filled cluster by cluster (in the given order) with
/// +-magnitude, remaining coordinates zero.
struct BetaSpec {
  Eigen::Index p = 0;
  std::vector<ClusterSpec> clusters;
};

/// Signs iid uniform on {-1, +1}.
Vector two_cluster_beta(const BetaSpec& spec, std::uint64_t seed);
Vector two_cluster_beta(const BetaSpec& spec, std::mt19937_64& rng);

struct SimulationConfig {
  Eigen::Index n = 300;
  Eigen::Index p = 100;
  std::vector<ClusterSpec> clusters{{20, 100.0}, {20, 80.0}};
  double sigma = 30.0;
  ScheduleKind slope_schedule = ScheduleKind::kScaledArithmetic;
  double slope_factor = 3.5;
  std::optional<double> slope_exponent;
  /// Multiply the SLOPE tuning vector by sigma (sigma = 0 falls back to 1).
  bool noise_scaled_tuning = true;
  double lasso_ls_factor = 5.0;
  int cv_folds = 10;
  int cv_grid_size = 50;
  double cv_grid_ratio = 1e-3;
  int replications = 500;
  std::uint64_t master_seed = 2024;
  std::vector<Method> methods{Method::kOls, Method::kLasso, Method::kLassoLs, Method::kSlope, Method::kSlopeLs};
  bool normalize = false;
  double tie_tol = kDefaultTieTolerance;

  /// Throws InputError on n < p, odd p, cluster sizes exceeding p, sigma < 0, ...
  void validate() const;
  BetaSpec beta_spec() const { return {p, clusters}; }
  /// SLOPE tuning vector used in every replication.
  TuningVector slope_tuning() const;
};

struct MethodOutcome {
  Method method = Method::kOls;
  Vector beta;
  double mse = 0.0;
  PatternVector pattern;
  bool recovered = false;
  bool support_recovered = false;
  std::optional<std::string> error;
};

struct ReplicationResult {
  int rep = 0;
  std::uint64_t seed = 0;
  Vector beta_true;
  double lambda_cv = 0.0;
  std::vector<MethodOutcome> outcomes;

  const MethodOutcome* find(Method m) const;
};

/// One draw of beta signs and noise followed by every configured fit.
/// Fitting errors are recorded per method; the replication always completes.
ReplicationResult run_replication(const SimulationConfig& config, int rep_index);
ReplicationResult run_replication(const SimulationConfig& config, const std::shared_ptr<const Design>& design,
                                  int rep_index);

struct MethodSummary {
  Method method = Method::kOls;
  int count = 0;
  int failures = 0;
  double mean_mse = 0.0;
  double sd_mse = 0.0;
  double median_mse = 0.0;
  double p01_mse = 0.0;
  double p99_mse = 0.0;
  double pattern_recovery_rate = 0.0;
  double support_recovery_rate = 0.0;
  /// Mean MSE over replications with exact pattern recovery; NaN if none.
  double mean_mse_given_recovery = 0.0;
};

struct MonteCarloSummary {
  SimulationConfig config;
  std::vector<MethodSummary> methods;
  std::vector<ReplicationResult> replications;
  /// Fraction of replications with MSE(SLOPE-LS) < MSE(LASSO-LS) < MSE(OLS);
  /// NaN unless all three methods ran.
  double ordering_fraction = 0.0;

  const MethodSummary* find(Method m) const;
};

/// Runs replications 0..R-1 on `jobs` threads. Each replication owns its RNG
/// stream, so the result does not depend on jobs or scheduling.
MonteCarloSummary monte_carlo(const SimulationConfig& config, int jobs = 1);

/// Linear-interpolation quantile of an unsorted sample, q in [0, 1].
double quantile(std::vector<double> values, double q);

struct RecoveryConfig {
  Eigen::Index p = 6;
  Vector beta;
  TuningSchedule schedule;
  std::vector<long long> n_list;
  int replications = 200;
  std::uint64_t seed = 7;
  double sigma = 1.0;
};

struct RecoveryRow {
  long long n = 0;
  int recovered = 0;
  int support_recovered = 0;
  int all_zero = 0;
  double rate = 0.0;
  double support_rate = 0.0;
};

struct RecoveryCurve {
  std::vector<RecoveryRow> rows;
  bool non_decreasing = false;
  /// rate at the largest n minus rate at the smallest n.
  double trend = 0.0;
};

/// Empirical frequency of patt(SLOPE) == patt(beta) on trigonometric designs
/// of growing n with the schedule's tuning vector at each n.
RecoveryCurve recovery_curve(const RecoveryConfig& config, int jobs = 1);

// Persistence.
void write_replications_csv(std::ostream& out, const MonteCarloSummary& summary);
std::string summary_to_json(const MonteCarloSummary& summary, int indent = 2);
void write_recovery_csv(std::ostream& out, const RecoveryCurve& curve);
std::string recovery_to_json(const RecoveryConfig& config, const RecoveryCurve& curve, int indent = 2);

/// Line chart of recovery rate against log10(n).
std::string recovery_svg(const RecoveryCurve& curve);
/// Black polyline for the true signal, red for the fit, over coordinates [first, last).
std::string signal_overlay_svg(const Vector& truth, const Vector& fitted, Eigen::Index first, Eigen::Index last,
                               const std::string& title);

}  // namespace slope
