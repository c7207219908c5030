#pragma once

#include <vector>

#include "slope/tuning.hpp"

namespace slope {

/// Optimal dual vector pi* of the sorted-L1 prox together with the
/// partial-sum slacks that certify its membership in the dual ball
/// C_Lambda = { pi : sum_{j<=i} |pi|_(j) <= sum_{j<=i} lambda_j for all i }.
struct DualCertificate {
  Vector pi;
  /// slack[i] = sum_{j<=i} lambda_j - sum_{j<=i} |pi|_(j); all >= -tol on the ball.
  Vector slack;

  double min_slack() const;
};

/// Indices that sort |v| in descending order; ties keep their input order.
std::vector<Eigen::Index> magnitude_order(const Vector& v);

/// J_Lambda(b) = sum_i lambda_i |b|_(i).
double sorted_l1_norm(const Vector& b, const TuningVector& lam);

/// Gauge of C_Lambda: max_i (sum_{j<=i} |x|_(j)) / (sum_{j<=i} lambda_j).
double dual_norm(const Vector& x, const TuningVector& lam);

/// 1e-12 * (1 + sum(lambda)).
double default_ball_tolerance(const TuningVector& lam);

/// True iff every partial-sum inequality of C_Lambda holds within tol.
bool in_dual_ball(const Vector& x, const TuningVector& lam, double tol);
bool in_dual_ball(const Vector& x, const TuningVector& lam);

/// Partial-sum slacks of x against lam (see DualCertificate::slack).
Vector dual_ball_slack(const Vector& x, const TuningVector& lam);

/// argmin_b 0.5 ||y - b||^2 + J_Lambda(b).
///
/// Sorts |y| (stable), subtracts lambda, restores the non-increasing order by
/// pool-adjacent-violators and clamps at zero. Pooled blocks share a single
/// computed mean, so coordinates in one cluster are bitwise equal.
Vector prox_sorted_l1(const Vector& y, const TuningVector& lam);

/// Euclidean projection of y onto C_Lambda via the Moreau decomposition
/// pi* = y - prox(y), evaluated as one rounded subtraction per coordinate, so
/// pi* == y - prox_sorted_l1(y, lam) bitwise and prox + pi* is within one ulp of y.
DualCertificate project_dual_ball(const Vector& y, const TuningVector& lam);

/// Both halves of the Moreau decomposition from one PAVA pass.
struct MoreauSplit {
  Vector prox;
  DualCertificate projection;
};
MoreauSplit moreau_split(const Vector& y, const TuningVector& lam);

}  // namespace slope
