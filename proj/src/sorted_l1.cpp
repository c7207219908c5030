#include "slope/sorted_l1.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "slope/errors.hpp"

namespace slope {

namespace {

void check_point(const Vector& v, const TuningVector& lam, const char* what) {
  if (v.size() != lam.size()) {
    throw InputError(std::string(what) + ": length " + std::to_string(v.size()) +
                     " does not match tuning vector length " + std::to_string(lam.size()));
  }
  if (!v.allFinite()) throw InputError(std::string(what) + ": entries must be finite");
}

Vector sorted_magnitudes(const Vector& v) {
  Vector a = v.cwiseAbs();
  std::sort(a.begin(), a.end(), std::greater<>());
  return a;
}

}  // namespace

double DualCertificate::min_slack() const {
  return slack.size() == 0 ? 0.0 : slack.minCoeff();
}

std::vector<Eigen::Index> magnitude_order(const Vector& v) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(v.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&v](Eigen::Index a, Eigen::Index b) {
    return std::abs(v[a]) > std::abs(v[b]);
  });
  return order;
}

double sorted_l1_norm(const Vector& b, const TuningVector& lam) {
  check_point(b, lam, "sorted_l1_norm");
  return lam.values().dot(sorted_magnitudes(b));
}

double dual_norm(const Vector& x, const TuningVector& lam) {
  check_point(x, lam, "dual_norm");
  const Vector a = sorted_magnitudes(x);
  double num = 0.0, den = 0.0, best = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    num += a[i];
    den += lam[i];
    best = std::max(best, num / den);  // den >= lambda_1 > 0
  }
  return best;
}

double default_ball_tolerance(const TuningVector& lam) { return 1e-12 * (1.0 + lam.sum()); }

Vector dual_ball_slack(const Vector& x, const TuningVector& lam) {
  check_point(x, lam, "dual_ball_slack");
  const Vector a = sorted_magnitudes(x);
  Vector slack(a.size());
  double cum_x = 0.0, cum_l = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    cum_x += a[i];
    cum_l += lam[i];
    slack[i] = cum_l - cum_x;
  }
  return slack;
}

bool in_dual_ball(const Vector& x, const TuningVector& lam, double tol) {
  if (!(tol >= 0.0)) throw InputError("in_dual_ball: tolerance must be non-negative");
  const Vector slack = dual_ball_slack(x, lam);
  return (slack.array() >= -tol).all();
}

bool in_dual_ball(const Vector& x, const TuningVector& lam) {
  return in_dual_ball(x, lam, default_ball_tolerance(lam));
}

Vector prox_sorted_l1(const Vector& y, const TuningVector& lam) {
  check_point(y, lam, "prox_sorted_l1");
  const Eigen::Index p = y.size();
  const auto order = magnitude_order(y);

  // Stack of pooled blocks over sorted positions [start, start + count).
  struct Block {
    Eigen::Index start;
    Eigen::Index count;
    double sum;
    double mean() const { return sum / static_cast<double>(count); }
  };
  std::vector<Block> blocks;
  blocks.reserve(static_cast<std::size_t>(p));
  for (Eigen::Index i = 0; i < p; ++i) {
    const double z = std::abs(y[order[static_cast<std::size_t>(i)]]) - lam[i];
    blocks.push_back({i, 1, z});
    // Pool only strict violations: equal neighbours are already feasible and
    // keep their value untouched.
    while (blocks.size() > 1 && blocks[blocks.size() - 2].mean() < blocks.back().mean()) {
      const Block top = blocks.back();
      blocks.pop_back();
      blocks.back().count += top.count;
      blocks.back().sum += top.sum;
    }
  }

  Vector x = Vector::Zero(p);
  for (const Block& block : blocks) {
    const double value = std::max(block.mean(), 0.0);
    if (value == 0.0) continue;
    for (Eigen::Index i = block.start; i < block.start + block.count; ++i) {
      const Eigen::Index idx = order[static_cast<std::size_t>(i)];
      x[idx] = y[idx] < 0.0 ? -value : value;
    }
  }
  return x;
}

MoreauSplit moreau_split(const Vector& y, const TuningVector& lam) {
  MoreauSplit out;
  out.prox = prox_sorted_l1(y, lam);
  Vector pi(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) pi[i] = y[i] - out.prox[i];
  out.projection.slack = dual_ball_slack(pi, lam);
  out.projection.pi = std::move(pi);
  return out;
}

DualCertificate project_dual_ball(const Vector& y, const TuningVector& lam) {
  return moreau_split(y, lam).projection;
}

}  // namespace slope
