#pragma once

// Least squares over the (optionally shifted) probability simplex.

#include <string>

#include <Eigen/Dense>

#include "ras/error.hpp"

namespace ras {

// Non-convergence; carries the best iterate found.
class SolverError : public NumericalError {
 public:
  SolverError(const std::string& what, double residual, Eigen::VectorXd best)
      : NumericalError(what, residual), best_(std::move(best)) {}
  const Eigen::VectorXd& best_iterate() const noexcept { return best_; }

 private:
  Eigen::VectorXd best_;
};

struct NnlsResult {
  Eigen::VectorXd x;
  int iterations = 0;
  bool converged = false;
};

// Lawson–Hanson active-set NNLS: argmin ‖E·x − f‖₂ subject to x ≥ 0.
NnlsResult nnls(const Eigen::MatrixXd& e, const Eigen::VectorXd& f, int max_iterations = 0);

// Euclidean projection onto {x : x ≥ 0, Σx = 1}.
Eigen::VectorXd project_to_simplex(const Eigen::VectorXd& v);

struct SimplexLsOptions {
  // Componentwise lower bound on p.
  double lower_bound = 0.0;
  // Impose Σp = 1; otherwise only p ≥ lower_bound.
  bool sum_to_one = true;
  double kkt_tolerance = 1e-8;
  int max_iterations = 0;  // 0 = 3·(columns + 1)
};

struct SimplexLsResult {
  Eigen::VectorXd p;
  double objective = 0.0;  // ‖M·p − b‖²
  double kkt_residual = 0.0;
  int iterations = 0;
};

// argmin_p ‖M·p − b‖² over the feasible set described by `options`.
// Throws ConfigError for an empty feasible set and SolverError when the KKT
// residual of the answer exceeds the tolerance.
SimplexLsResult solve_simplex_ls(const Eigen::MatrixXd& m, const Eigen::VectorXd& b,
                                 const SimplexLsOptions& options = {});

// Scale-free KKT residual ‖p − proj(p − ∇f/L)‖∞ of a candidate point.
double simplex_ls_kkt_residual(const Eigen::MatrixXd& m, const Eigen::VectorXd& b, const Eigen::VectorXd& p,
                               const SimplexLsOptions& options = {});

}  // namespace ras
