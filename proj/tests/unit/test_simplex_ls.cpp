#include <gtest/gtest.h>

#include <random>

#include "ras/error.hpp"
#include "ras/simplex_ls.hpp"

using namespace ras;

namespace {

Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = g(rng);
  return m;
}

// Optimality on {p ≥ lb, Σp = 1}: with g = ∇‖Mp − b‖², free coordinates share
// one multiplier λ and coordinates at the bound have g_i ≥ λ.
double simplex_kkt_gap(const Eigen::MatrixXd& m, const Eigen::VectorXd& b, const Eigen::VectorXd& p, double lb) {
  const Eigen::VectorXd g = 2.0 * m.transpose() * (m * p - b);
  double lambda_lo = std::numeric_limits<double>::infinity();
  double lambda_hi = -std::numeric_limits<double>::infinity();
  double bound_min = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p(i) > lb + 1e-9) {
      lambda_lo = std::min(lambda_lo, g(i));
      lambda_hi = std::max(lambda_hi, g(i));
    } else {
      bound_min = std::min(bound_min, g(i));
    }
  }
  const double spread = lambda_hi - lambda_lo;
  const double below = std::max(0.0, lambda_hi - bound_min);
  return std::max(spread, below);
}

// Independent reference: plain projected gradient with sort-based projection.
Eigen::VectorXd projected_gradient(const Eigen::MatrixXd& m, const Eigen::VectorXd& b, int iterations) {
  const Eigen::Index d = m.cols();
  const double step = 1.0 / (2.0 * m.squaredNorm());
  Eigen::VectorXd p = Eigen::VectorXd::Constant(d, 1.0 / double(d));
  for (int k = 0; k < iterations; ++k) {
    Eigen::VectorXd y = p - step * 2.0 * m.transpose() * (m * p - b);
    std::vector<double> s(y.data(), y.data() + d);
    std::sort(s.begin(), s.end(), std::greater<>());
    double cum = 0.0, theta = 0.0;
    for (Eigen::Index j = 0; j < d; ++j) {
      cum += s[std::size_t(j)];
      const double t = (cum - 1.0) / double(j + 1);
      if (s[std::size_t(j)] - t > 0.0) theta = t;
    }
    p = (y.array() - theta).cwiseMax(0.0);
  }
  return p;
}

}  // namespace

TEST(Nnls, SatisfiesKkt) {
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 50; ++rep) {
    const Eigen::MatrixXd e = random_matrix(12, 6, rng);
    const Eigen::VectorXd f = random_matrix(12, 1, rng);
    const NnlsResult r = nnls(e, f);
    ASSERT_TRUE(r.converged);
    const Eigen::VectorXd w = e.transpose() * (f - e * r.x);
    for (Eigen::Index i = 0; i < r.x.size(); ++i) {
      EXPECT_GE(r.x(i), 0.0);
      if (r.x(i) > 0.0) EXPECT_NEAR(w(i), 0.0, 1e-9);
      else EXPECT_LE(w(i), 1e-9);
    }
  }
}

TEST(Nnls, RecoversNonnegativeSolution) {
  std::mt19937_64 rng(4);
  const Eigen::MatrixXd e = random_matrix(10, 4, rng);
  Eigen::VectorXd x(4);
  x << 0.5, 0.0, 2.0, 0.25;
  const NnlsResult r = nnls(e, e * x);
  EXPECT_LT((r.x - x).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(ProjectToSimplex, KnownCases) {
  Eigen::VectorXd v(3);
  v << 0.2, 0.3, 0.5;
  EXPECT_LT((project_to_simplex(v) - v).norm(), 1e-15);
  v << 2.0, 0.0, 0.0;
  EXPECT_LT((project_to_simplex(v) - Eigen::Vector3d(1, 0, 0)).norm(), 1e-15);
  v << 1.0, 1.0, -5.0;
  EXPECT_LT((project_to_simplex(v) - Eigen::Vector3d(0.5, 0.5, 0)).norm(), 1e-15);
}

TEST(SimplexLs, MatchesProjectedGradientAndKkt) {
  std::mt19937_64 rng(8);
  for (int rep = 0; rep < 30; ++rep) {
    const Eigen::MatrixXd m = random_matrix(15, 5, rng);
    const Eigen::VectorXd b = random_matrix(15, 1, rng);
    const SimplexLsResult r = solve_simplex_ls(m, b);
    EXPECT_NEAR(r.p.sum(), 1.0, 1e-12);
    EXPECT_GE(r.p.minCoeff(), 0.0);
    EXPECT_LT(r.kkt_residual, 1e-8);
    EXPECT_LT(simplex_kkt_gap(m, b, r.p, 0.0), 1e-8);
    EXPECT_NEAR(r.objective, (m * r.p - b).squaredNorm(), 1e-10);
    const Eigen::VectorXd ref = projected_gradient(m, b, 20000);
    EXPECT_LE(r.objective, (m * ref - b).squaredNorm() + 1e-9);
  }
}

TEST(SimplexLs, GridOracleTwoAndThreeColumns) {
  std::mt19937_64 rng(12);
  for (Eigen::Index d : {2, 3}) {
    const Eigen::MatrixXd m = random_matrix(6, d, rng);
    const Eigen::VectorXd b = random_matrix(6, 1, rng);
    double best = std::numeric_limits<double>::infinity();
    const int steps = 1000;
    for (int i = 0; i <= steps; ++i) {
      for (int j = 0; j <= (d == 3 ? steps - i : 0); ++j) {
        Eigen::VectorXd p(d);
        if (d == 2) p << i / double(steps), 1.0 - i / double(steps);
        else p << i / double(steps), j / double(steps), 1.0 - (i + j) / double(steps);
        best = std::min(best, (m * p - b).squaredNorm());
      }
    }
    const SimplexLsResult r = solve_simplex_ls(m, b);
    EXPECT_LE(r.objective, best + 1e-12);
    EXPECT_GT(r.objective, best - 1e-3);
  }
}

TEST(SimplexLs, LowerBoundAndNoSum) {
  std::mt19937_64 rng(13);
  const Eigen::MatrixXd m = random_matrix(10, 4, rng);
  const Eigen::VectorXd b = random_matrix(10, 1, rng);
  SimplexLsOptions options;
  options.lower_bound = 0.1;
  const SimplexLsResult r = solve_simplex_ls(m, b, options);
  EXPECT_GE(r.p.minCoeff(), 0.1 - 1e-15);
  EXPECT_NEAR(r.p.sum(), 1.0, 1e-12);
  EXPECT_LT(simplex_kkt_gap(m, b, r.p, 0.1), 1e-8);

  options.sum_to_one = false;
  const SimplexLsResult free = solve_simplex_ls(m, b, options);
  EXPECT_GE(free.p.minCoeff(), 0.1 - 1e-15);
  const Eigen::VectorXd g = 2.0 * m.transpose() * (m * free.p - b);
  for (Eigen::Index i = 0; i < 4; ++i) {
    if (free.p(i) > 0.1 + 1e-9) EXPECT_NEAR(g(i), 0.0, 1e-8);
    else EXPECT_GE(g(i), -1e-8);
  }

  options.sum_to_one = true;
  options.lower_bound = 0.3;
  EXPECT_THROW(solve_simplex_ls(m, b, options), ConfigError);
}

TEST(SimplexLs, ExactFitRecovered) {
  std::mt19937_64 rng(14);
  const Eigen::MatrixXd m = random_matrix(20, 6, rng).cwiseAbs();
  Eigen::VectorXd p(6);
  p << 0.3, 0.0, 0.2, 0.1, 0.4, 0.0;
  const SimplexLsResult r = solve_simplex_ls(m, m * p);
  EXPECT_LT((r.p - p).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_LT(r.objective, 1e-20);
}

TEST(SimplexLs, RankDeficientDesign) {
  Eigen::MatrixXd m(4, 3);
  m << 1, 1, 0, 0, 0, 1, 1, 1, 0, 0, 0, 1;
  Eigen::VectorXd b(4);
  b << 0.6, 0.4, 0.6, 0.4;
  const SimplexLsResult r = solve_simplex_ls(m, b);
  EXPECT_LT(r.objective, 1e-20);
  EXPECT_NEAR(r.p(2), 0.4, 1e-12);
  EXPECT_NEAR(r.p(0) + r.p(1), 0.6, 1e-12);
}
