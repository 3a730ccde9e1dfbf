#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "csfs/cost_gen.hpp"
#include "csfs/types.hpp"

namespace csfs {

struct SolverConfig {
  double lambda = 1.0;
  /// Perturbation that keeps the reweighting diagonals finite.
  double zeta = 1e-8;
  int max_iter = 100;
  /// Stop once |obj_t - obj_{t-1}| / |obj_{t-1}| falls below this.
  double rel_tol = 1e-6;
  std::uint64_t seed = 0;

  void validate() const;
};

struct FitResult {
  Matrix W;  // d x m
  /// Smoothed objective after each iteration.
  std::vector<double> objective_trace;
  /// Smoothed objective of the starting point.
  double initial_objective = 0.0;
  int iterations_used = 0;
  bool converged = false;
};

/// ||(X^T W - Y) .* C||_{2,1} + lambda ||W||_{2,1}, where the l_{2,1} norm
/// sums the Euclidean norms of the rows.
double objective(const Matrix& W, const Matrix& X, const Matrix& Y, const CostMatrix& C,
                 double lambda);

/// sum_i sqrt(||r^i||^2 + zeta) + lambda sum_j sqrt(||w^j||^2 + zeta) with
/// r^i the rows of (X^T W - Y) .* C.
double smoothed_objective(const Matrix& W, const Matrix& X, const Matrix& Y, const CostMatrix& C,
                          double lambda, double zeta);

/// d_jj = 1 / (2 sqrt(||w^j||^2 + zeta))
Vector update_D(const Matrix& W, double zeta);

/// g_ii = 1 / (2 sqrt(||((X^T W - Y) .* C)^i||^2 + zeta))
Vector update_G(const Matrix& W, const Matrix& X, const Matrix& Y, const CostMatrix& C,
                double zeta);

/// Solves (lambda D + X U_k G U_k X^T) w = X U_k G U_k y_k with U_k = diag(c_k)
/// by a Cholesky factorization. Throws NumericalError if the system is
/// numerically singular.
Vector solve_column(Index k, const Matrix& X, const Matrix& Y, const CostMatrix& C,
                    const Vector& D, const Vector& G, double lambda);

/// Seeded starting point: standard normal entries scaled by 0.01.
Matrix initial_projection(Index d, Index m, std::uint64_t seed);

/// Iteratively reweighted minimisation of the cost-sensitive l_{2,1}
/// objective. Each iteration freezes D and G at the current W and solves the
/// m columns independently in closed form; the smoothed objective never
/// increases.
///
/// X is d x n, Y and C are n x m. When `warm_start` is given it replaces the
/// random starting point.
FitResult fit(const Matrix& X, const Matrix& Y, const CostMatrix& C, const SolverConfig& config,
              const std::optional<Matrix>& warm_start = std::nullopt);

/// Euclidean norm of each row of W.
Vector row_norms(const Matrix& W);

}  // namespace csfs
