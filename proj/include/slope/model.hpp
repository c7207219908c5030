#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "slope/sorted_l1.hpp"

namespace slope {

/// Tolerance (relative to c) for declaring X'X = c * I.
constexpr double kOrthoTolerance = 1e-8;

/// c = mean(diag(G)) when every off-diagonal |G_ij| and every |G_ii - c| is
/// at most kOrthoTolerance * c; nullopt otherwise.
std::optional<double> detect_ortho_scale(const Matrix& gram);

/// Design matrix with its Gram matrix and orthogonality metadata. Immutable
/// once built so it can be shared between models (e.g. Monte Carlo
/// replications over one fixed design).
class Design {
 public:
  explicit Design(Matrix x);

  const Matrix& x() const { return x_; }
  const Matrix& gram() const { return gram_; }
  std::optional<double> ortho_scale() const { return ortho_scale_; }
  Eigen::Index n() const { return x_.rows(); }
  Eigen::Index p() const { return x_.cols(); }

 private:
  Matrix x_;
  Matrix gram_;
  std::optional<double> ortho_scale_;
};

/// Y = X beta + eps. Caches X'Y.
class LinearModel {
 public:
  LinearModel(Matrix x, Vector y);
  LinearModel(std::shared_ptr<const Design> design, Vector y);

  const Design& design() const { return *design_; }
  std::shared_ptr<const Design> shared_design() const { return design_; }
  const Matrix& x() const { return design_->x(); }
  const Matrix& gram() const { return design_->gram(); }
  const Vector& y() const { return y_; }
  const Vector& xty() const { return xty_; }
  std::optional<double> ortho_scale() const { return design_->ortho_scale(); }
  Eigen::Index n() const { return design_->n(); }
  Eigen::Index p() const { return design_->p(); }

  /// 0.5 ||Y - X b||^2, evaluated from the residual directly.
  double half_rss(const Vector& b) const;

 private:
  std::shared_ptr<const Design> design_;
  Vector y_;
  Vector xty_;
};

enum class Method { kOls, kSlope, kLasso, kSlopeLs, kLassoLs };

std::string to_string(Method m);
Method method_from_string(const std::string& name);

struct Fit {
  Vector beta;
  Method method = Method::kOls;
  std::optional<DualCertificate> certificate;
  /// 0.5 ||Y - X beta||^2 + penalty(beta) at return.
  double objective = 0.0;
  int iterations = 0;
  bool converged = true;
  std::vector<std::string> diagnostics;
};

struct CvResult {
  double lambda_cv = 0.0;
  std::vector<double> grid;
  std::vector<double> cv_errors;
  int folds = 0;
  /// Folds dropped because their training design was rank deficient.
  int skipped_folds = 0;
};

}  // namespace slope
