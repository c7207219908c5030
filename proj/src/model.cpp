#include "slope/model.hpp"

#include <cctype>
#include <cmath>

#include "slope/errors.hpp"

namespace slope {

std::optional<double> detect_ortho_scale(const Matrix& gram) {
  const Eigen::Index p = gram.rows();
  if (p == 0 || gram.cols() != p) return std::nullopt;
  const double c = gram.diagonal().mean();
  if (!(c > 0.0) || !std::isfinite(c)) return std::nullopt;
  const double limit = kOrthoTolerance * c;
  for (Eigen::Index j = 0; j < p; ++j) {
    for (Eigen::Index i = 0; i < p; ++i) {
      const double target = i == j ? c : 0.0;
      if (std::abs(gram(i, j) - target) > limit) return std::nullopt;
    }
  }
  return c;
}

Design::Design(Matrix x) : x_(std::move(x)) {
  if (x_.rows() == 0 || x_.cols() == 0) throw InputError("design matrix must be non-empty");
  if (!x_.allFinite()) throw InputError("design matrix entries must be finite");
  gram_.resize(x_.cols(), x_.cols());
  gram_.setZero();
  gram_.selfadjointView<Eigen::Lower>().rankUpdate(x_.transpose());
  gram_ = gram_.selfadjointView<Eigen::Lower>();
  ortho_scale_ = detect_ortho_scale(gram_);
}

LinearModel::LinearModel(Matrix x, Vector y)
    : LinearModel(std::make_shared<const Design>(std::move(x)), std::move(y)) {}

LinearModel::LinearModel(std::shared_ptr<const Design> design, Vector y)
    : design_(std::move(design)), y_(std::move(y)) {
  if (!design_) throw InputError("linear model needs a design");
  if (y_.size() != design_->n()) {
    throw InputError("response has " + std::to_string(y_.size()) + " rows but the design has " +
                     std::to_string(design_->n()));
  }
  if (!y_.allFinite()) throw InputError("response entries must be finite");
  xty_ = design_->x().transpose() * y_;
}

double LinearModel::half_rss(const Vector& b) const {
  if (b.size() != p()) throw InputError("coefficient vector length does not match the design");
  return 0.5 * (y_ - x() * b).squaredNorm();
}

std::string to_string(Method m) {
  switch (m) {
    case Method::kOls: return "OLS";
    case Method::kSlope: return "SLOPE";
    case Method::kLasso: return "LASSO";
    case Method::kSlopeLs: return "SLOPE-LS";
    case Method::kLassoLs: return "LASSO-LS";
  }
  return "?";
}

Method method_from_string(const std::string& name) {
  std::string key;
  for (char ch : name) key += static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  for (Method m : {Method::kOls, Method::kSlope, Method::kLasso, Method::kSlopeLs, Method::kLassoLs}) {
    if (to_string(m) == key) return m;
  }
  throw InputError("unknown method '" + name + "' (expected ols, slope, lasso, slope-ls, lasso-ls)");
}

}  // namespace slope
