#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace testing_support {

using Vector = Eigen::VectorXd;

// Descending |v|, computed without the library.
inline std::vector<double> sorted_abs_desc(const Vector& v) {
  std::vector<double> a(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) a[static_cast<std::size_t>(i)] = std::abs(v[i]);
  std::sort(a.begin(), a.end(), std::greater<>());
  return a;
}

inline double naive_sorted_l1(const Vector& b, const Vector& lam) {
  const auto a = sorted_abs_desc(b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += lam[static_cast<Eigen::Index>(i)] * a[i];
  return s;
}

inline double prox_objective(const Vector& y, const Vector& lam, const Vector& b) {
  return 0.5 * (y - b).squaredNorm() + naive_sorted_l1(b, lam);
}

// All integer vectors m in {-p..p}^p whose nonzero magnitudes cover 1..max|m|.
inline std::vector<std::vector<int>> all_patterns(int p) {
  std::vector<std::vector<int>> out;
  std::vector<int> m(static_cast<std::size_t>(p), -p);
  while (true) {
    int k = 0;
    for (int v : m) k = std::max(k, std::abs(v));
    bool ok = true;
    for (int r = 1; r <= k && ok; ++r) {
      ok = std::any_of(m.begin(), m.end(), [r](int v) { return std::abs(v) == r; });
    }
    if (ok) out.push_back(m);
    int i = 0;
    while (i < p && m[static_cast<std::size_t>(i)] == p) m[static_cast<std::size_t>(i++)] = -p;
    if (i == p) break;
    ++m[static_cast<std::size_t>(i)];
  }
  return out;
}

// Exhaustive minimiser of 0.5||y - b||^2 + sum lam_i |b|_(i). On the cell of
// a fixed pattern the objective is a separable quadratic in the cluster
// values, minimised in closed form; the best candidate over all cells (plus
// the origin) is the global minimiser.
inline Vector brute_force_prox(const Vector& y, const Vector& lam) {
  const int p = static_cast<int>(y.size());
  Vector best = Vector::Zero(p);
  double best_obj = prox_objective(y, lam, best);
  for (const auto& m : all_patterns(p)) {
    int k = 0;
    for (int v : m) k = std::max(k, std::abs(v));
    if (k == 0) continue;
    Vector b = Vector::Zero(p);
    int position = 0;  // sorted positions are filled from the largest cluster down
    for (int r = k; r >= 1; --r) {
      double uy = 0.0, lam_sum = 0.0;
      int size = 0;
      for (int i = 0; i < p; ++i) {
        const int v = m[static_cast<std::size_t>(i)];
        if (std::abs(v) != r) continue;
        uy += (v > 0 ? 1.0 : -1.0) * y[i];
        lam_sum += lam[position + size];
        ++size;
      }
      position += size;
      const double value = (uy - lam_sum) / size;
      for (int i = 0; i < p; ++i) {
        const int v = m[static_cast<std::size_t>(i)];
        if (std::abs(v) == r) b[i] = (v > 0 ? 1.0 : -1.0) * value;
      }
    }
    const double obj = prox_objective(y, lam, b);
    if (obj < best_obj) {
      best_obj = obj;
      best = b;
    }
  }
  return best;
}

// Random non-increasing, positive-leading weights; ties appear often.
inline Vector random_lambda(Eigen::Index p, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 3.0);
  std::uniform_int_distribution<int> coin(0, 3);
  std::vector<double> v(static_cast<std::size_t>(p));
  for (auto& x : v) x = coin(rng) == 0 ? std::round(u(rng)) : u(rng);
  std::sort(v.begin(), v.end(), std::greater<>());
  if (v.front() <= 0.0) v.front() = 1.0;
  return Eigen::Map<Vector>(v.data(), p);
}

// Gaussian entries, sometimes rounded to halves to produce magnitude ties.
inline Vector random_point(Eigen::Index p, std::mt19937_64& rng, double scale = 3.0) {
  std::normal_distribution<double> g(0.0, scale);
  std::uniform_int_distribution<int> coin(0, 2);
  const bool rounded = coin(rng) == 0;
  Vector y(p);
  for (Eigen::Index i = 0; i < p; ++i) y[i] = rounded ? std::round(2.0 * g(rng)) / 2.0 : g(rng);
  return y;
}

}  // namespace testing_support
