#include "slope/tuning.hpp"

#include <cmath>
#include <string>

#include "slope/errors.hpp"

namespace slope {

namespace {

void validate(const Vector& lambda) {
  if (lambda.size() < 1) throw InputError("tuning vector must be non-empty");
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    const double v = lambda[i];
    if (!std::isfinite(v)) {
      throw InputError("tuning vector entry " + std::to_string(i) + " is not finite");
    }
    if (v < 0.0) throw InputError("tuning vector entry " + std::to_string(i) + " is negative");
    if (i > 0 && v > lambda[i - 1]) {
      throw InputError("tuning vector must be non-increasing (entry " + std::to_string(i) +
                       " exceeds its predecessor)");
    }
  }
  if (!(lambda[0] > 0.0)) throw InputError("tuning vector needs lambda_1 > 0");
}

}  // namespace

TuningVector::TuningVector(Vector lambda) : lambda_(std::move(lambda)) { validate(lambda_); }

TuningVector::TuningVector(std::initializer_list<double> lambda)
    : lambda_(Eigen::Map<const Vector>(lambda.begin(), static_cast<Eigen::Index>(lambda.size()))) {
  validate(lambda_);
}

TuningVector TuningVector::constant(Eigen::Index p, double value) {
  if (p < 1) throw InputError("tuning vector must be non-empty");
  return TuningVector(Vector::Constant(p, value));
}

TuningVector TuningVector::arithmetic(Eigen::Index p, double slope, double offset) {
  if (p < 1) throw InputError("tuning vector must be non-empty");
  Vector lambda(p);
  for (Eigen::Index i = 0; i < p; ++i) lambda[i] = slope * static_cast<double>(p - i) + offset;
  return TuningVector(std::move(lambda));
}

bool TuningVector::is_constant() const {
  return (lambda_.array() == lambda_[0]).all();
}

TuningVector TuningVector::scaled(double factor) const {
  if (!(factor > 0.0) || !std::isfinite(factor)) {
    throw InputError("tuning vector scale factor must be positive and finite");
  }
  return TuningVector(Vector(lambda_ * factor));
}

TuningVector TuningVector::divided(double divisor) const {
  if (!(divisor > 0.0) || !std::isfinite(divisor)) {
    throw InputError("tuning vector divisor must be positive and finite");
  }
  return TuningVector(Vector(lambda_ / divisor));
}

}  // namespace slope
