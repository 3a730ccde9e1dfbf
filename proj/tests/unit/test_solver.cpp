#include <cmath>
#include <random>

#include <Eigen/LU>

#include "doctest.h"

#include "csfs/cost_gen.hpp"
#include "csfs/error.hpp"
#include "csfs/solver.hpp"
#include "csfs/sweep.hpp"

using namespace csfs;

namespace {

struct Instance {
  Matrix X, Y, C;
};

Instance random_instance(Index d, Index n, Index m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> N(0.0, 1.0);
  std::uniform_real_distribution<double> U(0.1, 2.0);
  Instance in{Matrix(d, n), Matrix(n, m), Matrix(n, m)};
  for (Index i = 0; i < in.X.size(); ++i) in.X.data()[i] = N(rng);
  for (Index i = 0; i < in.Y.size(); ++i) in.Y.data()[i] = N(rng) > 0 ? 1.0 : -1.0;
  for (Index i = 0; i < in.C.size(); ++i) in.C.data()[i] = U(rng);
  return in;
}

// Elementwise re-evaluation, sharing no code with the library.
double scalar_smoothed(const Matrix& W, const Instance& in, double lambda, double zeta) {
  double total = 0.0;
  for (Index i = 0; i < in.X.cols(); ++i) {
    double sq = 0.0;
    for (Index k = 0; k < W.cols(); ++k) {
      double score = 0.0;
      for (Index j = 0; j < in.X.rows(); ++j) score += in.X(j, i) * W(j, k);
      const double r = (score - in.Y(i, k)) * in.C(i, k);
      sq += r * r;
    }
    total += std::sqrt(sq + zeta);
  }
  for (Index j = 0; j < W.rows(); ++j) {
    double sq = 0.0;
    for (Index k = 0; k < W.cols(); ++k) sq += W(j, k) * W(j, k);
    total += lambda * std::sqrt(sq + zeta);
  }
  return total;
}

}  // namespace

TEST_CASE("objective") {
  const auto in = random_instance(3, 6, 2, 1);
  const Matrix zero = Matrix::Zero(3, 2);
  const Matrix ones = Matrix::Ones(6, 2);
  double y_norms = 0.0;
  for (Index i = 0; i < 6; ++i) y_norms += in.Y.row(i).norm();
  CHECK(objective(zero, in.X, in.Y, ones, 1.0) == doctest::Approx(y_norms));

  // Perfect fit with an identity design.
  Matrix I = Matrix::Identity(3, 3);
  Matrix Y(3, 1);
  Y << 1, -1, 1;
  CHECK(objective(Y, I, Y, Matrix::Ones(3, 1), 1e-300) == doctest::Approx(0.0));

  SUBCASE("row sum form equals the matrix form") {
    const auto small = random_instance(3, 4, 2, 5);
    const Matrix W = Matrix::Random(3, 2);
    double rows = 0.0;
    for (Index i = 0; i < 4; ++i)
      rows += ((small.X.col(i).transpose() * W - small.Y.row(i)).cwiseProduct(small.C.row(i))).norm();
    const Matrix R = (small.X.transpose() * W - small.Y).cwiseProduct(small.C);
    CHECK(objective(W, small.X, small.Y, small.C, 0.7) ==
          doctest::Approx(rows + 0.7 * W.rowwise().norm().sum()).epsilon(1e-13));
    CHECK(R.rowwise().norm().sum() == doctest::Approx(rows).epsilon(1e-13));
  }
  CHECK_THROWS_AS(objective(Matrix::Zero(2, 2), in.X, in.Y, in.C, 1.0), ShapeError);
}

TEST_CASE("smoothed objective") {
  const auto in = random_instance(4, 3, 2, 2);
  const Matrix W = Matrix::Random(4, 2);
  const double zeta = 1e-8;
  CHECK(std::abs(smoothed_objective(W, in.X, in.Y, in.C, 0.3, zeta) - scalar_smoothed(W, in, 0.3, zeta)) <=
        1e-12 * scalar_smoothed(W, in, 0.3, zeta));

  const double gap = smoothed_objective(W, in.X, in.Y, in.C, 1.0, zeta) - objective(W, in.X, in.Y, in.C, 1.0);
  CHECK(gap >= 0.0);
  CHECK(gap <= (3 + 4) * std::sqrt(zeta) * (1.0 + 1e-9));

  const double z = 1e-6;
  CHECK(smoothed_objective(Matrix::Zero(4, 2), in.X, Matrix::Zero(3, 2), Matrix::Ones(3, 2), 1.0, z) ==
        doctest::Approx(7 * std::sqrt(z)));
}

TEST_CASE("reweighting diagonals") {
  Matrix W(3, 2);
  W << 3, 4, 0, 0, 1, 0;
  const Vector D = update_D(W, 1e-300);
  CHECK(D(0) == doctest::Approx(0.1));
  CHECK(update_D(W, 1e-8)(1) == doctest::Approx(5000.0));
  const Vector D2 = update_D(2 * W, 1e-300);
  CHECK(D2(0) == doctest::Approx(D(0) / 2));
  CHECK(D2(2) == doctest::Approx(D(2) / 2));

  Matrix X = Matrix::Identity(2, 2);
  Matrix Y(2, 2);
  Y << 0.3, 0.4, 1, 1;
  Matrix V = Matrix::Zero(2, 2);
  V.row(1) << 1, 1;
  const Vector G = update_G(V, X, Y, Matrix::Ones(2, 2), 1e-300);
  // Row 0 residual (-0.3, -0.4) has norm 0.5; row 1 is fitted exactly.
  CHECK(G(0) == doctest::Approx(1.0));
  const Vector Gz = update_G(V, X, Y, Matrix::Ones(2, 2), 1e-8);
  CHECK(Gz(1) == doctest::Approx(1.0 / (2 * std::sqrt(1e-8))));
  Matrix C = Matrix::Ones(2, 2);
  C.row(0).setZero();
  CHECK(update_G(V, X, Y, C, 1e-8)(0) == doctest::Approx(Gz(1)));
}

TEST_CASE("column solve") {
  SUBCASE("matches a dense LU solve of the same system") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto in = random_instance(3, 5, 2, 10 + seed);
      const Matrix W = Matrix::Random(3, 2);
      const Vector D = update_D(W, 1e-8);
      const Vector G = update_G(W, in.X, in.Y, in.C, 1e-8);
      for (Index k = 0; k < 2; ++k) {
        const Vector u = in.C.col(k);
        Matrix UGU = Matrix::Zero(5, 5);
        for (Index i = 0; i < 5; ++i) UGU(i, i) = u(i) * G(i) * u(i);
        Matrix A = 0.4 * Matrix(D.asDiagonal()) + in.X * UGU * in.X.transpose();
        const Vector b = in.X * UGU * in.Y.col(k);
        const Vector expected = A.fullPivLu().solve(b);
        const Vector got = solve_column(k, in.X, in.Y, in.C, D, G, 0.4);
        CHECK((got - expected).norm() <= 1e-10 * std::max(1.0, expected.norm()));
        CHECK((A * got - b).norm() <= 1e-10 * b.norm());
      }
    }
  }
  SUBCASE("identity design with vanishing lambda reproduces y") {
    const Matrix X = Matrix::Identity(4, 4);
    Matrix Y(4, 1);
    Y << 1, -1, -1, 1;
    const Vector w = solve_column(0, X, Y, Matrix::Ones(4, 1), Vector::Ones(4), Vector::Ones(4), 1e-12);
    CHECK((w - Y.col(0)).norm() < 1e-9);
  }
  SUBCASE("large lambda shrinks w") {
    const auto in = random_instance(3, 6, 1, 3);
    const Vector w = solve_column(0, in.X, in.Y, in.C, Vector::Ones(3), Vector::Ones(6), 1e9);
    CHECK(w.norm() < 1e-7);
  }
}

TEST_CASE("fit") {
  const auto in = random_instance(8, 40, 2, 4);
  SolverConfig cfg;
  cfg.lambda = 0.5;
  cfg.seed = 3;

  SUBCASE("objective trace never increases") {
    const FitResult res = fit(in.X, in.Y, in.C, cfg);
    CHECK(res.objective_trace.size() == static_cast<std::size_t>(res.iterations_used));
    double prev = res.initial_objective;
    for (double v : res.objective_trace) {
      CHECK(v <= prev * (1 + 1e-9));
      prev = v;
    }
    CHECK(res.converged);
  }
  SUBCASE("seed determinism") {
    const FitResult a = fit(in.X, in.Y, in.C, cfg);
    const FitResult b = fit(in.X, in.Y, in.C, cfg);
    CHECK(a.W == b.W);
    CHECK(a.objective_trace == b.objective_trace);
    CHECK(a.W.rows() == 8);
    CHECK(a.W.cols() == 2);
  }
  SUBCASE("stationarity at convergence") {
    SolverConfig tight = cfg;
    tight.rel_tol = 1e-13;
    tight.max_iter = 2000;
    const FitResult res = fit(in.X, in.Y, in.C, tight);
    const Vector D = update_D(res.W, tight.zeta);
    const Vector G = update_G(res.W, in.X, in.Y, in.C, tight.zeta);
    for (Index k = 0; k < 2; ++k) {
      const Vector g = (in.C.col(k).array().square() * G.array()).matrix();
      const Matrix A = tight.lambda * Matrix(D.asDiagonal()) + in.X * g.asDiagonal() * in.X.transpose();
      const Vector b = in.X * g.asDiagonal() * in.Y.col(k);
      CHECK((A * res.W.col(k) - b).norm() <= 1e-8 * b.norm());
    }
  }
  SUBCASE("uniform cost scaling matches the unit-cost problem with lambda / c") {
    for (double c : {0.5, 3.0}) {
      SolverConfig scaled = cfg;
      scaled.max_iter = 300;
      scaled.rel_tol = 1e-12;
      SolverConfig unit = scaled;
      unit.lambda = cfg.lambda / c;
      const FitResult a = fit(in.X, in.Y, Matrix::Constant(40, 2, c), scaled);
      const FitResult b = fit(in.X, in.Y, Matrix::Ones(40, 2), unit);
      const auto ra = rank_features(a.W, false), rb = rank_features(b.W, false);
      for (std::size_t i = 0; i < ra.size(); ++i) CHECK(ra[i].index == rb[i].index);
    }
  }
  SUBCASE("warm start replaces the random start") {
    const FitResult first = fit(in.X, in.Y, in.C, cfg);
    const FitResult again = fit(in.X, in.Y, in.C, cfg, first.W);
    CHECK(again.initial_objective <= first.initial_objective);
    CHECK(again.iterations_used <= first.iterations_used);
  }
  SUBCASE("input validation") {
    Matrix bad = in.X;
    bad(0, 0) = std::nan("");
    CHECK_THROWS_AS(fit(bad, in.Y, in.C, cfg), DataError);
    CHECK_THROWS_AS(fit(in.X, in.Y, Matrix(-in.C), cfg), ConfigError);
    CHECK_THROWS_AS(fit(in.X, in.Y.topRows(5), in.C, cfg), ShapeError);
    SolverConfig wrong = cfg;
    wrong.lambda = 0;
    CHECK_THROWS_AS(fit(in.X, in.Y, in.C, wrong), ConfigError);
    wrong = cfg;
    wrong.zeta = -1;
    CHECK_THROWS_AS(wrong.validate(), ConfigError);
    wrong = cfg;
    wrong.max_iter = 0;
    CHECK_THROWS_AS(wrong.validate(), ConfigError);
    wrong = cfg;
    wrong.rel_tol = 0;
    CHECK_THROWS_AS(wrong.validate(), ConfigError);
  }
  SUBCASE("overflowing inputs abort with a divergence error") {
    const Matrix huge = in.X * 1e200;
    CHECK_THROWS_AS(fit(huge, in.Y, in.C, cfg), DivergenceError);
  }
}

TEST_CASE("initial projection is seeded and small") {
  const Matrix a = initial_projection(5, 2, 9), b = initial_projection(5, 2, 9);
  CHECK(a == b);
  CHECK(a != initial_projection(5, 2, 10));
  CHECK(a.cwiseAbs().maxCoeff() < 0.1);
}
