#include "slope/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "parallel.hpp"
#include "slope/errors.hpp"

namespace slope {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Vector gaussian_noise(Eigen::Index n, double sigma, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector eps(n);
  for (Eigen::Index i = 0; i < n; ++i) eps[i] = sigma * normal(rng);
  return eps;
}

Fit fit_lasso(const LinearModel& model, double lambda) {
  if (model.ortho_scale()) return lasso_orthogonal(model, lambda);
  Fit fit = slope_general(model, TuningVector::constant(model.p(), lambda));
  fit.method = Method::kLasso;
  return fit;
}

Fit fit_slope(const LinearModel& model, const TuningVector& lam) {
  if (model.ortho_scale()) return slope_orthogonal(model, lam);
  return slope_general(model, lam);
}

bool same_support(const Vector& a, const Vector& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if ((a[i] != 0.0) != (b[i] != 0.0)) return false;
  }
  return true;
}

}  // namespace

std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

Matrix trig_design(Eigen::Index n, Eigen::Index p, bool normalize) {
  if (p < 2 || p % 2 != 0) throw InputError("trig_design needs an even p >= 2");
  if (p >= n) throw InputError("trig_design needs p < n (frequencies j = 1..p/2 must stay below n/2)");
  const double scale = normalize ? std::sqrt(2.0) : 1.0;
  Matrix x(n, p);
  for (Eigen::Index j = 1; j <= p / 2; ++j) {
    for (Eigen::Index i = 1; i <= n; ++i) {
      // Reduce i*j mod n first so the angle stays in [0, 2 pi).
      const double angle = 2.0 * std::numbers::pi * static_cast<double>((i * j) % n) / static_cast<double>(n);
      x(i - 1, 2 * j - 2) = scale * std::sin(angle);
      x(i - 1, 2 * j - 1) = scale * std::cos(angle);
    }
  }
  return x;
}

Vector two_cluster_beta(const BetaSpec& spec, std::mt19937_64& rng) {
  if (spec.p < 1) throw InputError("beta spec needs p >= 1");
  long long total = 0;
  for (const ClusterSpec& c : spec.clusters) {
    if (c.count < 0) throw InputError("cluster sizes must be non-negative");
    if (!(c.magnitude >= 0.0) || !std::isfinite(c.magnitude)) throw InputError("cluster magnitudes must be >= 0");
    total += c.count;
  }
  if (total > spec.p) throw InputError("beta spec clusters exceed p");
  Vector beta = Vector::Zero(spec.p);
  std::bernoulli_distribution coin(0.5);
  Eigen::Index i = 0;
  for (const ClusterSpec& c : spec.clusters) {
    for (int k = 0; k < c.count; ++k, ++i) beta[i] = coin(rng) ? c.magnitude : -c.magnitude;
  }
  return beta;
}

Vector two_cluster_beta(const BetaSpec& spec, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return two_cluster_beta(spec, rng);
}

void SimulationConfig::validate() const {
  if (p < 2 || p % 2 != 0) throw InputError("simulation needs an even p >= 2");
  if (n <= p) throw InputError("simulation needs n > p");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw InputError("sigma must be >= 0");
  if (!(slope_factor > 0.0)) throw InputError("slope factor must be positive");
  if (!(lasso_ls_factor > 0.0)) throw InputError("lasso_ls_factor must be positive");
  if (cv_folds < 2 || cv_folds > n) throw InputError("cv_folds must lie in [2, n]");
  if (cv_grid_size < 1) throw InputError("cv_grid_size must be >= 1");
  if (!(cv_grid_ratio > 0.0 && cv_grid_ratio <= 1.0)) throw InputError("cv_grid_ratio must lie in (0, 1]");
  if (replications < 1) throw InputError("replications must be >= 1");
  if (methods.empty()) throw InputError("at least one method is required");
  if (!(tie_tol >= 0.0)) throw InputError("tie_tol must be >= 0");
  if (slope_schedule == ScheduleKind::kCustom) throw InputError("simulation supports arithmetic schedules only");
  long long total = 0;
  for (const ClusterSpec& c : clusters) {
    if (c.count < 0 || !(c.magnitude >= 0.0)) throw InputError("invalid cluster spec");
    total += c.count;
  }
  if (total > p) throw InputError("cluster sizes exceed p");
}

TuningVector SimulationConfig::slope_tuning() const {
  ScheduleParams params;
  params.factor = slope_factor;
  params.exponent = slope_exponent;
  const TuningVector base = make_schedule(slope_schedule, p, params).at(n);
  if (noise_scaled_tuning && sigma > 0.0) return base.scaled(sigma);
  return base;
}

const MethodOutcome* ReplicationResult::find(Method m) const {
  for (const auto& o : outcomes) {
    if (o.method == m) return &o;
  }
  return nullptr;
}

const MethodSummary* MonteCarloSummary::find(Method m) const {
  for (const auto& s : methods) {
    if (s.method == m) return &s;
  }
  return nullptr;
}

ReplicationResult run_replication(const SimulationConfig& config, int rep_index) {
  config.validate();
  auto design = std::make_shared<const Design>(trig_design(config.n, config.p, config.normalize));
  return run_replication(config, design, rep_index);
}

ReplicationResult run_replication(const SimulationConfig& config, const std::shared_ptr<const Design>& design,
                                  int rep_index) {
  ReplicationResult result;
  result.rep = rep_index;
  result.seed = stream_seed(config.master_seed, static_cast<std::uint64_t>(rep_index));
  std::mt19937_64 rng(result.seed);
  result.beta_true = two_cluster_beta(config.beta_spec(), rng);
  const Vector eps = gaussian_noise(design->n(), config.sigma, rng);
  const LinearModel model(design, design->x() * result.beta_true + eps);
  const PatternVector truth = pattern_of(result.beta_true, 0.0);
  result.lambda_cv = kNaN;

  std::optional<double> lambda_cv;
  auto cv_lambda = [&]() {
    if (!lambda_cv) {
      const auto grid = default_cv_grid(model, config.cv_grid_size, config.cv_grid_ratio);
      lambda_cv = lasso_cv(model, grid, config.cv_folds, stream_seed(result.seed, 1)).lambda_cv;
      result.lambda_cv = *lambda_cv;
    }
    return *lambda_cv;
  };
  std::optional<Fit> slope_fit;
  auto slope_beta = [&]() -> const Vector& {
    if (!slope_fit) slope_fit = fit_slope(model, config.slope_tuning());
    return slope_fit->beta;
  };

  for (Method method : config.methods) {
    MethodOutcome out;
    out.method = method;
    try {
      switch (method) {
        case Method::kOls:
          out.beta = ols(model).beta;
          break;
        case Method::kLasso:
          out.beta = fit_lasso(model, cv_lambda()).beta;
          break;
        case Method::kLassoLs: {
          const Fit lasso = fit_lasso(model, config.lasso_ls_factor * cv_lambda());
          const SignVector signs = SignVector::of(lasso.beta);
          out.beta = signs.support_size() == 0 ? Vector::Zero(model.p()) : debias(model, signs).beta;
          break;
        }
        case Method::kSlope:
          out.beta = slope_beta();
          break;
        case Method::kSlopeLs: {
          const PatternVector m = pattern_of(slope_beta(), config.tie_tol);
          out.beta = m.is_zero() ? Vector::Zero(model.p()) : debias(model, m).beta;
          break;
        }
      }
      out.mse = mse(result.beta_true, out.beta);
      out.pattern = pattern_of(out.beta, config.tie_tol);
      out.recovered = pattern_equal(out.pattern, truth);
      out.support_recovered = same_support(out.beta, result.beta_true);
    } catch (const std::exception& e) {
      out.error = e.what();
      out.mse = kNaN;
      out.beta = Vector();
    }
    result.outcomes.push_back(std::move(out));
  }
  return result;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) return kNaN;
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

MonteCarloSummary monte_carlo(const SimulationConfig& config, int jobs) {
  config.validate();
  auto design = std::make_shared<const Design>(trig_design(config.n, config.p, config.normalize));

  MonteCarloSummary summary;
  summary.config = config;
  summary.replications.resize(static_cast<std::size_t>(config.replications));
  detail::parallel_for(config.replications, jobs, [&](int r) {
    summary.replications[static_cast<std::size_t>(r)] = run_replication(config, design, r);
  });

  for (Method method : config.methods) {
    MethodSummary s;
    s.method = method;
    std::vector<double> values, given_recovery;
    int patterns = 0, supports = 0;
    for (const auto& rep : summary.replications) {
      const MethodOutcome* o = rep.find(method);
      if (o->error) {
        ++s.failures;
        continue;
      }
      values.push_back(o->mse);
      patterns += o->recovered;
      supports += o->support_recovered;
      if (o->recovered) given_recovery.push_back(o->mse);
    }
    s.count = static_cast<int>(values.size());
    if (s.count > 0) {
      double sum = 0.0;
      for (double v : values) sum += v;
      s.mean_mse = sum / s.count;
      double ss = 0.0;
      for (double v : values) ss += (v - s.mean_mse) * (v - s.mean_mse);
      s.sd_mse = s.count > 1 ? std::sqrt(ss / (s.count - 1)) : 0.0;
      s.median_mse = quantile(values, 0.5);
      s.p01_mse = quantile(values, 0.01);
      s.p99_mse = quantile(values, 0.99);
      s.pattern_recovery_rate = static_cast<double>(patterns) / s.count;
      s.support_recovery_rate = static_cast<double>(supports) / s.count;
    } else {
      s.mean_mse = s.sd_mse = s.median_mse = s.p01_mse = s.p99_mse = kNaN;
    }
    s.mean_mse_given_recovery = kNaN;
    if (!given_recovery.empty()) {
      double sum = 0.0;
      for (double v : given_recovery) sum += v;
      s.mean_mse_given_recovery = sum / static_cast<double>(given_recovery.size());
    }
    summary.methods.push_back(s);
  }

  summary.ordering_fraction = kNaN;
  const auto has = [&](Method m) {
    return std::find(config.methods.begin(), config.methods.end(), m) != config.methods.end();
  };
  if (has(Method::kOls) && has(Method::kLassoLs) && has(Method::kSlopeLs)) {
    int ordered = 0;
    for (const auto& rep : summary.replications) {
      const double ols_mse = rep.find(Method::kOls)->mse;
      const double lasso_ls = rep.find(Method::kLassoLs)->mse;
      const double slope_ls = rep.find(Method::kSlopeLs)->mse;
      ordered += (slope_ls < lasso_ls && lasso_ls < ols_mse);
    }
    summary.ordering_fraction = static_cast<double>(ordered) / config.replications;
  }
  return summary;
}

RecoveryCurve recovery_curve(const RecoveryConfig& config, int jobs) {
  if (config.p < 2) throw InputError("recovery_curve needs p >= 2");
  if (config.beta.size() != config.p) throw InputError("recovery_curve: beta length must equal p");
  if (config.n_list.empty()) throw InputError("recovery_curve: empty n list");
  if (config.replications < 1) throw InputError("recovery_curve: replications must be >= 1");
  if (!(config.sigma >= 0.0)) throw InputError("recovery_curve: sigma must be >= 0");
  if (!config.schedule.generator) throw InputError("recovery_curve: schedule has no generator");
  if (config.schedule.p != config.p) throw InputError("recovery_curve: schedule built for a different p");

  const PatternVector truth = pattern_of(config.beta, 0.0);
  RecoveryCurve curve;
  for (long long n : config.n_list) {
    if (n <= config.p) throw InputError("recovery_curve: every n must exceed p");
    auto design = std::make_shared<const Design>(trig_design(n, config.p));
    const TuningVector lam = config.schedule.at(n);
    const Vector signal = design->x() * config.beta;
    const std::uint64_t n_seed = stream_seed(config.seed, static_cast<std::uint64_t>(n));

    std::vector<char> recovered(static_cast<std::size_t>(config.replications), 0);
    std::vector<char> support(recovered.size(), 0), zero(recovered.size(), 0);
    detail::parallel_for(config.replications, jobs, [&](int r) {
      std::mt19937_64 rng(stream_seed(n_seed, static_cast<std::uint64_t>(r)));
      const LinearModel model(design, signal + gaussian_noise(n, config.sigma, rng));
      const Fit fit = slope_orthogonal(model, lam);
      const auto idx = static_cast<std::size_t>(r);
      recovered[idx] = pattern_equal(pattern_of(fit.beta, 0.0), truth);
      support[idx] = same_support(fit.beta, config.beta);
      zero[idx] = fit.beta.isZero(0.0);
    });

    RecoveryRow row;
    row.n = n;
    for (std::size_t i = 0; i < recovered.size(); ++i) {
      row.recovered += recovered[i];
      row.support_recovered += support[i];
      row.all_zero += zero[i];
    }
    row.rate = static_cast<double>(row.recovered) / config.replications;
    row.support_rate = static_cast<double>(row.support_recovered) / config.replications;
    curve.rows.push_back(row);
  }
  curve.non_decreasing = true;
  for (std::size_t i = 1; i < curve.rows.size(); ++i) {
    curve.non_decreasing = curve.non_decreasing && curve.rows[i].rate >= curve.rows[i - 1].rate;
  }
  curve.trend = curve.rows.back().rate - curve.rows.front().rate;
  return curve;
}

}  // namespace slope
