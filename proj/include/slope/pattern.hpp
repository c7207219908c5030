#pragma once

#include <vector>

#include "slope/tuning.hpp"

namespace slope {

/// SLOPE pattern m_i = sign(b_i) * rank(|b_i|), where rank 1 is the smallest
/// distinct nonzero magnitude and rank k the largest.
class PatternVector {
 public:
  PatternVector() = default;
  explicit PatternVector(std::vector<int> entries);

  const std::vector<int>& entries() const { return entries_; }
  Eigen::Index size() const { return static_cast<Eigen::Index>(entries_.size()); }
  int operator[](Eigen::Index i) const { return entries_[static_cast<std::size_t>(i)]; }

  /// Number of nonzero clusters, max |m_i|.
  int k() const { return k_; }
  /// cluster_sizes()[j] = #{i : |m_i| = k - j}; index 0 is the largest cluster.
  const std::vector<int>& cluster_sizes() const { return cluster_sizes_; }
  /// Cumulative sums of cluster_sizes(); back() is the number of nonzeros.
  const std::vector<int>& cluster_bounds() const { return cluster_bounds_; }
  int nonzeros() const { return cluster_bounds_.empty() ? 0 : cluster_bounds_.back(); }
  bool is_zero() const { return k_ == 0; }

  friend bool operator==(const PatternVector&, const PatternVector&) = default;

 private:
  std::vector<int> entries_;
  int k_ = 0;
  std::vector<int> cluster_sizes_;
  std::vector<int> cluster_bounds_;
};

/// Entries restricted to {-1, 0, +1}.
class SignVector {
 public:
  explicit SignVector(std::vector<int> entries);
  static SignVector of(const Vector& b);

  const std::vector<int>& entries() const { return entries_; }
  Eigen::Index size() const { return static_cast<Eigen::Index>(entries_.size()); }
  /// ||S||_1, the support size.
  int support_size() const;

 private:
  std::vector<int> entries_;
};

enum class PatternKind { kSlope, kLasso };

/// p x k signed indicator matrix mapping cluster values to coordinates.
struct PatternMatrix {
  Matrix data;
  PatternKind kind = PatternKind::kSlope;

  Eigen::Index rows() const { return data.rows(); }
  Eigen::Index cols() const { return data.cols(); }
};

constexpr double kDefaultTieTolerance = 1e-9;

/// Magnitudes within tie_tol * (1 + max|b|) of each other (single linkage on
/// the sorted magnitudes) share a rank; magnitudes at or below that threshold
/// map to 0.
PatternVector pattern_of(const Vector& b, double tie_tol = kDefaultTieTolerance);

/// True iff every rank 1..max|m_i| is attained.
bool validate_pattern(const PatternVector& m);

/// (U_M)_ij = sign(m_i) * 1[|m_i| = k + 1 - j] (j 1-based). Rejects k = 0.
PatternMatrix pattern_matrix(const PatternVector& m);

/// X * U_M.
Matrix clustered_design(const Matrix& x, const PatternVector& m);

/// diag(S) restricted to the columns in supp(S). Rejects S = 0.
PatternMatrix lasso_pattern_matrix(const SignVector& s);

/// U * reduced.
Vector expand(const PatternMatrix& u, const Vector& reduced);

bool pattern_equal(const PatternVector& a, const PatternVector& b);

/// Indices i with b_i != 0.
std::vector<Eigen::Index> support_of(const Vector& b);

}  // namespace slope
