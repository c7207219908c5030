#include "slope/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "slope/errors.hpp"
#include "slope/sorted_l1.hpp"

namespace slope {

namespace {

void check_inputs(const Vector& ols_beta, const TuningVector& lam, double c) {
  if (ols_beta.size() != lam.size()) throw InputError("OLS vector and tuning vector differ in length");
  if (!ols_beta.allFinite()) throw InputError("OLS vector entries must be finite");
  if (!(c > 0.0) || !std::isfinite(c)) throw InputError("orthogonal scale c must be positive");
}

// |b|_(i) - lambda_i / c along the stable descending order of |b|.
Vector shifted_sorted(const Vector& b, const TuningVector& lam, double c, std::vector<Eigen::Index>* order_out) {
  const auto order = magnitude_order(b);
  const TuningVector lam_c = lam.divided(c);
  Vector z(b.size());
  for (Eigen::Index i = 0; i < b.size(); ++i) z[i] = std::abs(b[order[static_cast<std::size_t>(i)]]) - lam_c[i];
  if (order_out) *order_out = order;
  return z;
}

Trend classify(const std::vector<double>& s) {
  if (s.size() < 2) return Trend::kUndetermined;
  for (double v : s) {
    if (!std::isfinite(v)) return Trend::kUndetermined;
  }
  bool increasing = true, decreasing = true;
  for (std::size_t i = 1; i < s.size(); ++i) {
    increasing = increasing && s[i] > s[i - 1];
    decreasing = decreasing && s[i] < s[i - 1];
  }
  if (increasing) return Trend::kGrowing;
  if (decreasing && s.back() <= 0.5 * s.front()) return Trend::kVanishing;
  const double peak = *std::max_element(s.begin(), s.end());
  if (peak > 0.0 && std::all_of(s.begin(), s.end(), [peak](double v) { return v >= 0.5 * peak; })) {
    return Trend::kBoundedAway;
  }
  return Trend::kUndetermined;
}

}  // namespace

std::vector<ClusterPair> cluster_condition(const Vector& ols_beta, const TuningVector& lam, double c) {
  check_inputs(ols_beta, lam, c);
  std::vector<Eigen::Index> order;
  const Vector z = shifted_sorted(ols_beta, lam, c, &order);
  std::vector<ClusterPair> pairs;
  for (Eigen::Index i = 0; i + 1 < z.size(); ++i) {
    if (z[i] <= z[i + 1]) {
      pairs.push_back({i, order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(i + 1)]});
    }
  }
  return pairs;
}

SupportConditionReport support_conditions(const Vector& ols_beta, const TuningVector& lam, double c, Eigen::Index p0) {
  check_inputs(ols_beta, lam, c);
  const Eigen::Index p = ols_beta.size();
  if (p0 < 0 || p0 > p) throw InputError("declared support size p0 must lie in [0, p]");
  constexpr double kInf = std::numeric_limits<double>::infinity();

  SupportConditionReport r;
  r.margin_a = kInf;
  if (p0 > 0 && p0 < p) {
    const Vector a = ols_beta.cwiseAbs();
    r.margin_a = a.head(p0).minCoeff() - a.tail(p - p0).maxCoeff();
  }
  r.cond_a = r.margin_a > 0.0;

  const Vector z = shifted_sorted(ols_beta, lam, c, nullptr);
  r.margin_b = kInf;
  double suffix = 0.0;
  for (Eigen::Index k = p0 - 1; k >= 0; --k) {
    suffix += z[k];
    r.margin_b = std::min(r.margin_b, suffix);
  }
  r.cond_b = r.margin_b > 0.0;

  r.margin_c = kInf;
  double prefix = 0.0;
  for (Eigen::Index k = p0; k < p; ++k) {
    prefix -= z[k];
    r.margin_c = std::min(r.margin_c, prefix);
  }
  r.cond_c = r.margin_c >= 0.0;

  r.all = r.cond_a && r.cond_b && r.cond_c;
  return r;
}

std::vector<Eigen::Index> leading_support_permutation(Eigen::Index p, const std::vector<Eigen::Index>& support) {
  std::vector<bool> taken(static_cast<std::size_t>(p), false);
  std::vector<Eigen::Index> perm;
  perm.reserve(static_cast<std::size_t>(p));
  for (Eigen::Index i : support) {
    if (i < 0 || i >= p || taken[static_cast<std::size_t>(i)]) {
      throw InputError("support indices must be distinct and within [0, p)");
    }
    taken[static_cast<std::size_t>(i)] = true;
    perm.push_back(i);
  }
  for (Eigen::Index i = 0; i < p; ++i) {
    if (!taken[static_cast<std::size_t>(i)]) perm.push_back(i);
  }
  return perm;
}

Vector permute(const Vector& v, const std::vector<Eigen::Index>& perm) {
  if (static_cast<Eigen::Index>(perm.size()) != v.size()) throw InputError("permutation length mismatch");
  Vector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = v[perm[static_cast<std::size_t>(i)]];
  return out;
}

std::string to_string(ScheduleKind kind) {
  switch (kind) {
    case ScheduleKind::kArithmeticN23: return "arithmetic_n23";
    case ScheduleKind::kScaledArithmetic: return "scaled_arithmetic";
    case ScheduleKind::kCustom: return "custom";
  }
  return "?";
}

std::string to_string(Trend t) {
  switch (t) {
    case Trend::kVanishing: return "vanishing";
    case Trend::kBoundedAway: return "bounded_away";
    case Trend::kGrowing: return "growing";
    case Trend::kUndetermined: return "undetermined";
  }
  return "?";
}

TuningSchedule make_schedule(ScheduleKind kind, Eigen::Index p, const ScheduleParams& params) {
  if (p < 1) throw InputError("schedule needs p >= 1");
  if (!(params.delta > 0.0)) throw InputError("schedule delta must be positive");
  TuningSchedule s;
  s.kind = kind;
  s.p = p;
  s.delta = params.delta;
  switch (kind) {
    case ScheduleKind::kArithmeticN23:
      s.factor = params.factor.value_or(1.0);
      s.exponent = params.exponent.value_or(2.0 / 3.0);
      break;
    case ScheduleKind::kScaledArithmetic:
      s.factor = params.factor.value_or(3.5);
      s.exponent = params.exponent.value_or(0.0);
      break;
    case ScheduleKind::kCustom:
      throw InputError("custom schedules are built with make_custom_schedule");
  }
  if (!(s.factor > 0.0) || !std::isfinite(s.factor)) throw InputError("schedule factor must be positive");
  if (!std::isfinite(s.exponent)) throw InputError("schedule exponent must be finite");
  const double factor = s.factor, exponent = s.exponent;
  s.generator = [p, factor, exponent](long long n) {
    if (n < 1) throw InputError("schedule evaluated at n < 1");
    const double nd = static_cast<double>(n);
    double scale = 1.0;
    if (exponent == 2.0 / 3.0) {
      const double root = std::cbrt(nd);  // exact on perfect cubes
      scale = root * root;
    } else if (exponent != 0.0) {
      scale = std::pow(nd, exponent);
    }
    return TuningVector::arithmetic(p, factor * scale);
  };
  return s;
}

TuningSchedule make_custom_schedule(Eigen::Index p, std::function<TuningVector(long long n)> generator, double delta) {
  if (p < 1) throw InputError("schedule needs p >= 1");
  if (!generator) throw InputError("custom schedule needs a generator");
  if (!(delta > 0.0)) throw InputError("schedule delta must be positive");
  TuningSchedule s;
  s.kind = ScheduleKind::kCustom;
  s.p = p;
  s.delta = delta;
  s.factor = 0.0;
  s.exponent = 0.0;
  s.generator = [p, gen = std::move(generator)](long long n) {
    TuningVector lam = gen(n);
    if (lam.size() != p) throw InputError("custom schedule produced a tuning vector of the wrong length");
    return lam;
  };
  return s;
}

TuningSchedule constant_ratio_schedule(Eigen::Index p, double ratio) {
  if (!(ratio > 0.0) || !std::isfinite(ratio)) throw InputError("schedule ratio must be positive");
  TuningSchedule s = make_custom_schedule(p, [p, ratio](long long n) {
    return TuningVector::arithmetic(p, ratio * static_cast<double>(n) / static_cast<double>(p));
  });
  s.factor = ratio;
  s.exponent = 1.0;
  return s;
}

ScheduleReport schedule_diagnostics(const TuningSchedule& s, const std::vector<long long>& n_list) {
  if (n_list.empty()) throw InputError("schedule_diagnostics needs a non-empty n list");
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (n_list[i] < 2) throw InputError("schedule_diagnostics needs n >= 2 (log n must be positive)");
    if (i > 0 && n_list[i] <= n_list[i - 1]) throw InputError("n list must be strictly increasing");
  }
  ScheduleReport report;
  std::vector<double> ratios, gaps;
  for (long long n : n_list) {
    const TuningVector lam = s.at(n);
    const double nd = static_cast<double>(n);
    ScheduleRow row;
    row.n = n;
    row.lambda1_over_n = lam[0] / nd;
    const double denom = std::sqrt(nd) * std::pow(std::log(nd), 0.5 + s.delta);
    row.min_gap_ratio = std::numeric_limits<double>::quiet_NaN();
    for (Eigen::Index i = 0; i + 1 < lam.size(); ++i) {
      const double g = (lam[i] - lam[i + 1]) / denom;
      row.min_gap_ratio = std::isnan(row.min_gap_ratio) ? g : std::min(row.min_gap_ratio, g);
    }
    ratios.push_back(row.lambda1_over_n);
    gaps.push_back(row.min_gap_ratio);
    report.rows.push_back(row);
  }
  report.consistency = classify(ratios);
  report.gap_growth = classify(gaps);
  report.consistency_ok = report.consistency == Trend::kVanishing;
  report.gap_condition_ok = report.gap_growth == Trend::kGrowing || report.gap_growth == Trend::kBoundedAway;
  return report;
}

}  // namespace slope
