#include "csfs/solver.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <string>

#include <Eigen/Cholesky>

#include "csfs/error.hpp"

namespace csfs {

void SolverConfig::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ConfigError("lambda must be positive");
  if (!(zeta > 0.0) || !std::isfinite(zeta)) throw ConfigError("zeta must be positive");
  if (max_iter < 1) throw ConfigError("max_iter must be at least 1");
  if (!(rel_tol > 0.0)) throw ConfigError("rel_tol must be positive");
}

namespace {

void check_shapes(const Matrix& W, const Matrix& X, const Matrix& Y, const CostMatrix& C) {
  if (W.rows() != X.rows())
    throw ShapeError("W has " + std::to_string(W.rows()) + " rows but X has " +
                     std::to_string(X.rows()) + " features");
  if (Y.rows() != X.cols() || C.rows() != X.cols())
    throw ShapeError("Y and C need one row per sample (" + std::to_string(X.cols()) + ")");
  if (Y.cols() != W.cols() || C.cols() != W.cols())
    throw ShapeError("W, Y and C must have the same number of columns");
}

Matrix weighted_residual(const Matrix& W, const Matrix& X, const Matrix& Y, const CostMatrix& C) {
  return ((X.transpose() * W - Y).array() * C.array()).matrix();
}

}  // namespace

Vector row_norms(const Matrix& W) { return W.rowwise().norm(); }

double objective(const Matrix& W, const Matrix& X, const Matrix& Y, const CostMatrix& C,
                 double lambda) {
  check_shapes(W, X, Y, C);
  return weighted_residual(W, X, Y, C).rowwise().norm().sum() + lambda * W.rowwise().norm().sum();
}

double smoothed_objective(const Matrix& W, const Matrix& X, const Matrix& Y, const CostMatrix& C,
                          double lambda, double zeta) {
  check_shapes(W, X, Y, C);
  if (!(zeta > 0.0)) throw ConfigError("zeta must be positive");
  const Vector loss = (weighted_residual(W, X, Y, C).rowwise().squaredNorm().array() + zeta).sqrt();
  const Vector reg = (W.rowwise().squaredNorm().array() + zeta).sqrt();
  return loss.sum() + lambda * reg.sum();
}

Vector update_D(const Matrix& W, double zeta) {
  return (0.5 / (W.rowwise().squaredNorm().array() + zeta).sqrt()).matrix();
}

Vector update_G(const Matrix& W, const Matrix& X, const Matrix& Y, const CostMatrix& C,
                double zeta) {
  check_shapes(W, X, Y, C);
  const Matrix R = weighted_residual(W, X, Y, C);
  return (0.5 / (R.rowwise().squaredNorm().array() + zeta).sqrt()).matrix();
}

Vector solve_column(Index k, const Matrix& X, const Matrix& Y, const CostMatrix& C,
                    const Vector& D, const Vector& G, double lambda) {
  const Index d = X.rows();
  if (k < 0 || k >= Y.cols()) throw ShapeError("column index out of range");
  if (D.size() != d || G.size() != X.cols() || Y.rows() != X.cols() || C.rows() != X.cols() ||
      C.cols() != Y.cols())
    throw ShapeError("solve_column: inconsistent shapes");

  // X U G U X^T = Xs Xs^T with Xs = X diag(c_k sqrt(g)).
  const Vector scale = (C.col(k).array() * G.array().sqrt()).matrix();
  const Matrix Xs = X * scale.asDiagonal();
  Matrix A = Matrix::Zero(d, d);
  A.selfadjointView<Eigen::Lower>().rankUpdate(Xs);
  A.diagonal() += lambda * D;
  const Vector rhs = X * (C.col(k).array().square() * G.array() * Y.col(k).array()).matrix();

  Eigen::LLT<Matrix, Eigen::Lower> llt(A);
  if (llt.info() == Eigen::Success && llt.rcond() > std::numeric_limits<double>::epsilon())
    return llt.solve(rhs);

  Eigen::LDLT<Matrix, Eigen::Lower> ldlt(A);
  const double rcond = ldlt.info() == Eigen::Success ? ldlt.rcond() : 0.0;
  if (!(rcond > std::numeric_limits<double>::epsilon()))
    throw NumericalError("column " + std::to_string(k) +
                         ": reweighted system is numerically singular (condition estimate " +
                         (rcond > 0 ? std::to_string(1.0 / rcond) : std::string("inf")) + ")");
  return ldlt.solve(rhs);
}

Matrix initial_projection(Index d, Index m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix W(d, m);
  // Column-major fill order is part of the seeded contract.
  for (Index k = 0; k < m; ++k)
    for (Index j = 0; j < d; ++j) W(j, k) = 0.01 * normal(rng);
  return W;
}

FitResult fit(const Matrix& X, const Matrix& Y, const CostMatrix& C, const SolverConfig& config,
              const std::optional<Matrix>& warm_start) {
  config.validate();
  const Index d = X.rows();
  const Index m = Y.cols();
  if (d < 1 || X.cols() < 1 || m < 1) throw ShapeError("fit needs non-empty X and Y");
  if (!X.allFinite() || !Y.allFinite() || !C.allFinite())
    throw DataError("fit inputs contain non-finite values");
  if ((C.array() < 0.0).any()) throw ConfigError("cost matrix has negative entries");

  FitResult result;
  result.W = warm_start ? *warm_start : initial_projection(d, m, config.seed);
  check_shapes(result.W, X, Y, C);

  double previous = smoothed_objective(result.W, X, Y, C, config.lambda, config.zeta);
  result.initial_objective = previous;
  if (!std::isfinite(previous)) throw DivergenceError("initial objective is not finite", {});

  for (int t = 0; t < config.max_iter; ++t) {
    const Vector D = update_D(result.W, config.zeta);
    const Vector G = update_G(result.W, X, Y, C, config.zeta);
    Matrix next(d, m);
    for (Index k = 0; k < m; ++k) next.col(k) = solve_column(k, X, Y, C, D, G, config.lambda);
    result.W = std::move(next);

    const double current = smoothed_objective(result.W, X, Y, C, config.lambda, config.zeta);
    result.objective_trace.push_back(current);
    result.iterations_used = t + 1;
    if (!std::isfinite(current))
      throw DivergenceError("objective became non-finite at iteration " + std::to_string(t + 1),
                            result.objective_trace);

    const double scale = std::max(std::abs(previous), std::numeric_limits<double>::min());
    if (std::abs(previous - current) / scale < config.rel_tol) {
      result.converged = true;
      break;
    }
    previous = current;
  }
  return result;
}

}  // namespace csfs
