#pragma once

#include <cstdint>
#include <optional>

#include "slope/model.hpp"
#include "slope/pattern.hpp"

namespace slope {

struct SolverOptions {
  int max_iter = 100000;
  /// Relative tolerance for the dual-ball membership and pairing gap of the
  /// residual correlation X'(Y - X b).
  double tol = 1e-8;
  std::optional<Vector> warm_start;
};

/// (X'X)^{-1} X'Y. Uses X'Y / c directly on orthogonal designs.
/// Throws NumericalError when X'X is singular.
Fit ols(const LinearModel& model);

/// prox_{J_{Lambda/c}}(beta_OLS) for designs with X'X = c I. The certificate is
/// c * (beta_OLS - beta_SLOPE), checked against Lambda itself.
/// Throws NumericalError on non-orthogonal designs (use slope_general).
Fit slope_orthogonal(const LinearModel& model, const TuningVector& lam);

/// Accelerated proximal gradient (FISTA with adaptive restart) on
/// 0.5 ||Y - X b||^2 + J_Lambda(b). Stops once X'(Y - X b) lies in C_Lambda
/// within tol * (1 + sum(lambda)) and |(X'(Y - X b))'b - J(b)| <= tol * (1 + J(b)).
/// On hitting max_iter the best iterate is returned with converged = false.
Fit slope_general(const LinearModel& model, const TuningVector& lam, const SolverOptions& opts = {});

/// Coordinatewise soft threshold of beta_OLS at lambda / c.
Fit lasso_orthogonal(const LinearModel& model, double lambda);

/// Largest eigenvalue of a symmetric PSD matrix by power iteration.
double largest_eigenvalue(const Matrix& sym, double tol = 1e-10, int max_iter = 10000);

/// size log-spaced values from ratio * lambda_max to lambda_max, descending,
/// with lambda_max = ||X'Y||_inf.
std::vector<double> default_cv_grid(const LinearModel& model, int size = 50, double ratio = 1e-3);

/// K-fold cross-validation of the LASSO (constant tuning vector, solved with
/// slope_general on each training split). Rows are shuffled with `seed` and
/// cut into contiguous folds. Picks the grid value with the smallest mean
/// squared prediction error; ties go to the smaller lambda.
CvResult lasso_cv(const LinearModel& model, const std::vector<double>& grid, int folds, std::uint64_t seed);

/// OLS refit on the clustered design X U, expanded back to p coordinates.
Fit debias(const LinearModel& model, const PatternMatrix& u);
Fit debias(const LinearModel& model, const PatternVector& m);
Fit debias(const LinearModel& model, const SignVector& s);

/// ||beta - beta_hat||_2^2.
double mse(const Vector& beta_true, const Vector& beta_hat);

}  // namespace slope
