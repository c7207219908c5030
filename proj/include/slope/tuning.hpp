#pragma once

#include <Eigen/Core>
#include <initializer_list>

namespace slope {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Non-increasing, non-negative penalty weights lambda_1 >= ... >= lambda_p >= 0
/// with lambda_1 > 0. Validated once at construction; every kernel that takes
/// a TuningVector relies on that.
class TuningVector {
 public:
  explicit TuningVector(Vector lambda);
  TuningVector(std::initializer_list<double> lambda);

  /// lambda_i = value for all i.
  static TuningVector constant(Eigen::Index p, double value);
  /// lambda_i = slope * (p + 1 - i) + offset, i = 1..p.
  static TuningVector arithmetic(Eigen::Index p, double slope, double offset = 0.0);

  const Vector& values() const { return lambda_; }
  Eigen::Index size() const { return lambda_.size(); }
  double operator[](Eigen::Index i) const { return lambda_[i]; }
  double sum() const { return lambda_.sum(); }
  bool is_constant() const;

  /// factor * lambda, factor > 0.
  TuningVector scaled(double factor) const;
  /// lambda / divisor, divisor > 0. Divides entrywise rather than multiplying
  /// by the reciprocal so that e.g. (200, 100) / 50 is exactly (4, 2).
  TuningVector divided(double divisor) const;

 private:
  Vector lambda_;
};

}  // namespace slope
