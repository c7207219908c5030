#include "slope/estimators.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "slope/errors.hpp"

namespace slope {

namespace {

constexpr double kMinRcond = 1e-12;

double require_ortho_scale(const LinearModel& model, const char* what) {
  const auto c = model.ortho_scale();
  if (!c) {
    throw NumericalError(std::string(what) +
                         ": design is not orthogonal (X'X != c I); use the general solver");
  }
  return *c;
}

// LDLT solve skips zero pivots instead of failing, so rank is judged on the
// pivots themselves as well as the condition estimate.
bool well_posed(const Eigen::LDLT<Matrix>& ldlt) {
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) return false;
  const Vector d = ldlt.vectorD();
  return d.minCoeff() > kMinRcond * d.cwiseAbs().maxCoeff() && ldlt.rcond() > kMinRcond;
}

Vector solve_spd(const Matrix& a, const Vector& b, const char* what) {
  Eigen::LDLT<Matrix> ldlt(a);
  if (!well_posed(ldlt)) throw NumericalError(std::string(what) + " is singular or rank deficient");
  return ldlt.solve(b);
}

bool full_rank(const Matrix& gram) { return well_posed(Eigen::LDLT<Matrix>(gram)); }

}  // namespace

Fit ols(const LinearModel& model) {
  Fit fit;
  fit.method = Method::kOls;
  if (const auto c = model.ortho_scale()) {
    fit.beta = model.xty() / *c;
  } else {
    if (model.n() < model.p()) throw NumericalError("X'X is singular (n < p)");
    fit.beta = solve_spd(model.gram(), model.xty(), "X'X");
  }
  fit.objective = model.half_rss(fit.beta);
  return fit;
}

Fit slope_orthogonal(const LinearModel& model, const TuningVector& lam) {
  const double c = require_ortho_scale(model, "slope_orthogonal");
  if (lam.size() != model.p()) throw InputError("tuning vector length does not match the design");
  const Vector beta_ols = model.xty() / c;
  MoreauSplit split = moreau_split(beta_ols, lam.divided(c));

  Fit fit;
  fit.method = Method::kSlope;
  fit.beta = std::move(split.prox);
  DualCertificate cert;
  cert.pi = c * split.projection.pi;
  cert.slack = dual_ball_slack(cert.pi, lam);
  fit.certificate = std::move(cert);
  fit.objective = model.half_rss(fit.beta) + sorted_l1_norm(fit.beta, lam);
  return fit;
}

Fit lasso_orthogonal(const LinearModel& model, double lambda) {
  const double c = require_ortho_scale(model, "lasso_orthogonal");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw InputError("lasso penalty must be >= 0");
  const Vector beta_ols = model.xty() / c;
  const double threshold = lambda / c;

  Fit fit;
  fit.method = Method::kLasso;
  fit.beta.resize(beta_ols.size());
  for (Eigen::Index i = 0; i < beta_ols.size(); ++i) {
    const double value = std::max(std::abs(beta_ols[i]) - threshold, 0.0);
    fit.beta[i] = value == 0.0 ? 0.0 : (beta_ols[i] < 0.0 ? -value : value);
  }
  if (lambda > 0.0) {
    const auto lam = TuningVector::constant(model.p(), lambda);
    DualCertificate cert;
    cert.pi = c * (beta_ols - fit.beta);
    cert.slack = dual_ball_slack(cert.pi, lam);
    fit.certificate = std::move(cert);
  }
  fit.objective = model.half_rss(fit.beta) + lambda * fit.beta.lpNorm<1>();
  return fit;
}

double largest_eigenvalue(const Matrix& sym, double tol, int max_iter) {
  const Eigen::Index p = sym.rows();
  if (p == 0) return 0.0;
  Vector v(p);
  for (Eigen::Index i = 0; i < p; ++i) v[i] = 1.0 + 0.1 * static_cast<double>(i) / static_cast<double>(p);
  v.normalize();
  double rho = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    const Vector w = sym * v;
    const double next = v.dot(w);
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    v = w / norm;
    if (it > 0 && std::abs(next - rho) <= tol * std::abs(next)) return next;
    rho = next;
  }
  return rho;
}

Fit slope_general(const LinearModel& model, const TuningVector& lam, const SolverOptions& opts) {
  const Eigen::Index p = model.p();
  if (lam.size() != p) throw InputError("tuning vector length does not match the design");
  if (opts.max_iter < 1 || !(opts.tol > 0.0)) throw InputError("solver needs max_iter >= 1 and tol > 0");

  const Matrix& gram = model.gram();
  const Vector& xty = model.xty();
  const double lipschitz = largest_eigenvalue(gram);
  if (!(lipschitz > 0.0)) throw NumericalError("design has a zero Gram matrix");
  const TuningVector step_lam = lam.divided(lipschitz);
  const double half_yy = 0.5 * model.y().squaredNorm();
  const double ball_tol = opts.tol * (1.0 + lam.sum());

  Vector b = Vector::Zero(p);
  if (opts.warm_start) {
    if (opts.warm_start->size() != p) throw InputError("warm start length does not match the design");
    b = *opts.warm_start;
  }
  Vector v = b;
  double t = 1.0;

  Vector best = b;
  double best_obj = std::numeric_limits<double>::infinity();

  Fit fit;
  fit.method = Method::kSlope;
  fit.converged = false;
  for (int it = 0; it <= opts.max_iter; ++it) {
    // Certificate and objective at the current iterate b.
    const Vector gb = gram * b;
    const Vector corr = xty - gb;
    const double penalty = sorted_l1_norm(b, lam);
    const double obj = half_yy - b.dot(xty) + 0.5 * b.dot(gb) + penalty;
    if (obj < best_obj) {
      best_obj = obj;
      best = b;
    }
    const bool in_ball = in_dual_ball(corr, lam, ball_tol);
    if (in_ball && std::abs(corr.dot(b) - penalty) <= opts.tol * (1.0 + penalty)) {
      fit.converged = true;
      fit.iterations = it;
      best = b;
      break;
    }
    if (it == opts.max_iter) {
      fit.iterations = it;
      break;
    }

    const Vector grad = gram * v - xty;
    Vector next = prox_sorted_l1(v - grad / lipschitz, step_lam);
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    if ((v - next).dot(next - b) > 0.0) {
      // Momentum points uphill: restart.
      t = 1.0;
      v = next;
    } else {
      v = next + ((t - 1.0) / t_next) * (next - b);
      t = t_next;
    }
    b = std::move(next);
  }

  fit.beta = std::move(best);
  if (!fit.converged) {
    fit.diagnostics.push_back("solver hit max_iter=" + std::to_string(opts.max_iter) +
                              " before the certificate tolerance; returning the best iterate");
  }
  DualCertificate cert;
  cert.pi = xty - gram * fit.beta;
  cert.slack = dual_ball_slack(cert.pi, lam);
  fit.certificate = std::move(cert);
  fit.objective = model.half_rss(fit.beta) + sorted_l1_norm(fit.beta, lam);
  return fit;
}

std::vector<double> default_cv_grid(const LinearModel& model, int size, double ratio) {
  if (size < 1) throw InputError("cv grid size must be >= 1");
  if (!(ratio > 0.0 && ratio <= 1.0)) throw InputError("cv grid ratio must lie in (0, 1]");
  const double lambda_max = model.xty().lpNorm<Eigen::Infinity>();
  if (!(lambda_max > 0.0)) throw NumericalError("X'Y = 0: every lasso fit is zero");
  std::vector<double> grid(static_cast<std::size_t>(size));
  for (int g = 0; g < size; ++g) {
    const double frac = size == 1 ? 0.0 : static_cast<double>(g) / static_cast<double>(size - 1);
    grid[static_cast<std::size_t>(g)] = lambda_max * std::pow(ratio, frac);
  }
  return grid;
}

CvResult lasso_cv(const LinearModel& model, const std::vector<double>& grid, int folds, std::uint64_t seed) {
  const Eigen::Index n = model.n();
  const Eigen::Index p = model.p();
  if (folds < 2) throw InputError("lasso_cv needs at least 2 folds");
  if (folds > n) throw InputError("lasso_cv: more folds than observations");
  if (grid.empty()) throw InputError("lasso_cv: empty grid");
  for (double g : grid) {
    if (!(g > 0.0) || !std::isfinite(g)) throw InputError("lasso_cv: grid values must be positive");
  }

  std::vector<Eigen::Index> rows(static_cast<std::size_t>(n));
  std::iota(rows.begin(), rows.end(), Eigen::Index{0});
  std::mt19937_64 rng(seed);
  std::shuffle(rows.begin(), rows.end(), rng);

  // Warm starts run along decreasing lambda.
  std::vector<std::size_t> path(grid.size());
  std::iota(path.begin(), path.end(), std::size_t{0});
  std::stable_sort(path.begin(), path.end(), [&grid](std::size_t a, std::size_t b) { return grid[a] > grid[b]; });

  CvResult result;
  result.grid = grid;
  result.folds = folds;
  std::vector<double> sse(grid.size(), 0.0);
  Eigen::Index tested = 0;

  const Matrix& x = model.x();
  const Vector& y = model.y();
  Eigen::Index start = 0;
  for (int f = 0; f < folds; ++f) {
    const Eigen::Index size = n / folds + (f < n % folds ? 1 : 0);
    const Eigen::Index stop = start + size;
    Matrix x_train(n - size, p), x_test(size, p);
    Vector y_train(n - size), y_test(size);
    Eigen::Index tr = 0, te = 0;
    for (Eigen::Index r = 0; r < n; ++r) {
      const Eigen::Index row = rows[static_cast<std::size_t>(r)];
      if (r >= start && r < stop) {
        x_test.row(te) = x.row(row);
        y_test[te++] = y[row];
      } else {
        x_train.row(tr) = x.row(row);
        y_train[tr++] = y[row];
      }
    }
    start = stop;

    const LinearModel train(std::move(x_train), std::move(y_train));
    if (!full_rank(train.gram())) {
      ++result.skipped_folds;
      continue;
    }
    SolverOptions opts;
    opts.warm_start = Vector::Zero(p);
    for (std::size_t g : path) {
      const Fit fit = slope_general(train, TuningVector::constant(p, grid[g]), opts);
      sse[g] += (y_test - x_test * fit.beta).squaredNorm();
      opts.warm_start = fit.beta;
    }
    tested += size;
  }
  if (tested == 0) throw NumericalError("lasso_cv: every fold had a rank-deficient training design");

  result.cv_errors.resize(grid.size());
  std::size_t best = 0;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    result.cv_errors[g] = sse[g] / static_cast<double>(tested);
    const double err = result.cv_errors[g];
    const double best_err = result.cv_errors[best];
    if (err < best_err || (err == best_err && grid[g] < grid[best])) best = g;
  }
  result.lambda_cv = grid[best];
  return result;
}

Fit debias(const LinearModel& model, const PatternMatrix& u) {
  if (u.rows() != model.p()) throw InputError("pattern matrix rows do not match the design");
  if (u.cols() == 0) throw NumericalError("cannot debias on an empty pattern");
  const Matrix reduced_gram = u.data.transpose() * model.gram() * u.data;
  const Vector reduced_xty = u.data.transpose() * model.xty();
  const Vector values = solve_spd(reduced_gram, reduced_xty, "clustered design");

  Fit fit;
  fit.method = u.kind == PatternKind::kSlope ? Method::kSlopeLs : Method::kLassoLs;
  fit.beta = expand(u, values);
  fit.objective = model.half_rss(fit.beta);

  bool preserved = values.size() == 0 || values[values.size() - 1] > 0.0;
  if (u.kind == PatternKind::kSlope) {
    for (Eigen::Index j = 0; j + 1 < values.size(); ++j) preserved = preserved && values[j] > values[j + 1];
    if (!preserved) fit.diagnostics.push_back("fitted cluster values tie, cross or change sign; pattern not preserved");
  } else {
    preserved = (values.array() > 0.0).all();
    if (!preserved) fit.diagnostics.push_back("fitted support coefficients change sign");
  }
  return fit;
}

Fit debias(const LinearModel& model, const PatternVector& m) {
  if (m.size() != model.p()) throw InputError("pattern length does not match the design");
  return debias(model, pattern_matrix(m));
}

Fit debias(const LinearModel& model, const SignVector& s) {
  if (s.size() != model.p()) throw InputError("sign vector length does not match the design");
  return debias(model, lasso_pattern_matrix(s));
}

double mse(const Vector& beta_true, const Vector& beta_hat) {
  if (beta_true.size() != beta_hat.size()) throw InputError("mse: vectors differ in length");
  return (beta_true - beta_hat).squaredNorm();
}

}  // namespace slope
