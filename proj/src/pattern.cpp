#include "slope/pattern.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "slope/errors.hpp"

namespace slope {

PatternVector::PatternVector(std::vector<int> entries) : entries_(std::move(entries)) {
  for (int m : entries_) k_ = std::max(k_, std::abs(m));
  cluster_sizes_.assign(static_cast<std::size_t>(k_), 0);
  for (int m : entries_) {
    if (m != 0) ++cluster_sizes_[static_cast<std::size_t>(k_ - std::abs(m))];
  }
  cluster_bounds_.resize(cluster_sizes_.size());
  int total = 0;
  for (std::size_t j = 0; j < cluster_sizes_.size(); ++j) {
    total += cluster_sizes_[j];
    cluster_bounds_[j] = total;
  }
}

SignVector::SignVector(std::vector<int> entries) : entries_(std::move(entries)) {
  for (int s : entries_) {
    if (s < -1 || s > 1) throw InputError("sign vector entries must lie in {-1, 0, 1}");
  }
}

SignVector SignVector::of(const Vector& b) {
  std::vector<int> s(static_cast<std::size_t>(b.size()));
  for (Eigen::Index i = 0; i < b.size(); ++i) s[static_cast<std::size_t>(i)] = (b[i] > 0) - (b[i] < 0);
  return SignVector(std::move(s));
}

int SignVector::support_size() const {
  return static_cast<int>(std::count_if(entries_.begin(), entries_.end(), [](int s) { return s != 0; }));
}

PatternVector pattern_of(const Vector& b, double tie_tol) {
  if (!(tie_tol >= 0.0)) throw InputError("pattern_of: tie tolerance must be non-negative");
  if (!b.allFinite()) throw InputError("pattern_of: entries must be finite");
  const Eigen::Index p = b.size();
  const double threshold = p == 0 ? 0.0 : tie_tol * (1.0 + b.cwiseAbs().maxCoeff());

  std::vector<Eigen::Index> nonzero;
  for (Eigen::Index i = 0; i < p; ++i) {
    if (std::abs(b[i]) > threshold) nonzero.push_back(i);
  }
  std::sort(nonzero.begin(), nonzero.end(),
            [&b](Eigen::Index x, Eigen::Index y) { return std::abs(b[x]) < std::abs(b[y]); });

  std::vector<int> m(static_cast<std::size_t>(p), 0);
  int rank = 0;
  double prev = 0.0;
  for (std::size_t n = 0; n < nonzero.size(); ++n) {
    const double mag = std::abs(b[nonzero[n]]);
    if (n == 0 || mag - prev > threshold) ++rank;
    prev = mag;
    m[static_cast<std::size_t>(nonzero[n])] = b[nonzero[n]] > 0 ? rank : -rank;
  }
  return PatternVector(std::move(m));
}

bool validate_pattern(const PatternVector& m) {
  return std::all_of(m.cluster_sizes().begin(), m.cluster_sizes().end(),
                     [](int size) { return size > 0; });
}

PatternMatrix pattern_matrix(const PatternVector& m) {
  if (m.is_zero()) throw NumericalError("pattern matrix undefined for the zero pattern");
  if (!validate_pattern(m)) throw InputError("pattern_matrix: ranks 1..k must all be attained");
  const int k = m.k();
  PatternMatrix u{Matrix::Zero(m.size(), k), PatternKind::kSlope};
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const int mi = m[i];
    if (mi != 0) u.data(i, k - std::abs(mi)) = mi > 0 ? 1.0 : -1.0;
  }
  return u;
}

Matrix clustered_design(const Matrix& x, const PatternVector& m) {
  if (x.cols() != m.size()) {
    throw InputError("clustered_design: design has " + std::to_string(x.cols()) +
                     " columns but the pattern has length " + std::to_string(m.size()));
  }
  return x * pattern_matrix(m).data;
}

PatternMatrix lasso_pattern_matrix(const SignVector& s) {
  const int k = s.support_size();
  if (k == 0) throw NumericalError("pattern matrix undefined for the zero sign vector");
  PatternMatrix u{Matrix::Zero(s.size(), k), PatternKind::kLasso};
  Eigen::Index col = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    const int si = s.entries()[static_cast<std::size_t>(i)];
    if (si != 0) u.data(i, col++) = si;
  }
  return u;
}

Vector expand(const PatternMatrix& u, const Vector& reduced) {
  if (u.cols() != reduced.size()) {
    throw InputError("expand: pattern matrix has " + std::to_string(u.cols()) +
                     " columns but got " + std::to_string(reduced.size()) + " cluster values");
  }
  return u.data * reduced;
}

bool pattern_equal(const PatternVector& a, const PatternVector& b) {
  if (a.size() != b.size()) throw InputError("pattern_equal: patterns differ in length");
  return a.entries() == b.entries();
}

std::vector<Eigen::Index> support_of(const Vector& b) {
  std::vector<Eigen::Index> s;
  for (Eigen::Index i = 0; i < b.size(); ++i) {
    if (b[i] != 0.0) s.push_back(i);
  }
  return s;
}

}  // namespace slope
