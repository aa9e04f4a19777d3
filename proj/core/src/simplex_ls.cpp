#include "ras/simplex_ls.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "ras/error.hpp"

namespace ras {
namespace {

Eigen::VectorXd solve_passive(const Eigen::MatrixXd& e, const Eigen::VectorXd& f, const std::vector<Eigen::Index>& passive) {
  Eigen::MatrixXd ep(e.rows(), Eigen::Index(passive.size()));
  for (std::size_t k = 0; k < passive.size(); ++k) ep.col(Eigen::Index(k)) = e.col(passive[k]);
  return ep.colPivHouseholderQr().solve(f);
}

double lipschitz_bound(const Eigen::MatrixXd& m) { return std::max(2.0 * m.squaredNorm(), 1e-300); }

}  // namespace

NnlsResult nnls(const Eigen::MatrixXd& e, const Eigen::VectorXd& f, int max_iterations) {
  if (e.rows() != f.size()) throw DimensionError("nnls: row count mismatch");
  const Eigen::Index n = e.cols();
  if (max_iterations <= 0) max_iterations = 3 * int(n) + 3;

  NnlsResult res;
  res.x = Eigen::VectorXd::Zero(n);
  std::vector<bool> in_passive(std::size_t(n), false);
  const double tol = 10.0 * std::numeric_limits<double>::epsilon() * e.cwiseAbs().maxCoeff() *
                     double(std::max(e.rows(), n)) * std::max(1.0, f.cwiseAbs().maxCoeff());

  Eigen::VectorXd w = e.transpose() * (f - e * res.x);
  while (res.iterations < max_iterations) {
    Eigen::Index enter = -1;
    double best = tol;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!in_passive[std::size_t(j)] && w(j) > best) {
        best = w(j);
        enter = j;
      }
    }
    if (enter < 0) {
      res.converged = true;
      break;
    }
    in_passive[std::size_t(enter)] = true;

    while (true) {
      ++res.iterations;
      std::vector<Eigen::Index> passive;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (in_passive[std::size_t(j)]) passive.push_back(j);
      }
      const Eigen::VectorXd zp = solve_passive(e, f, passive);

      bool feasible = true;
      for (Eigen::Index k = 0; k < zp.size(); ++k) feasible = feasible && zp(k) > 0.0;
      if (feasible) {
        res.x.setZero();
        for (std::size_t k = 0; k < passive.size(); ++k) res.x(passive[k]) = zp(Eigen::Index(k));
        break;
      }

      // Step toward z until the first passive coordinate hits zero.
      double alpha = 1.0;
      for (std::size_t k = 0; k < passive.size(); ++k) {
        const double z = zp(Eigen::Index(k));
        if (z <= 0.0) {
          const double x = res.x(passive[k]);
          const double denom = x - z;
          if (denom > 0.0) alpha = std::min(alpha, x / denom);
        }
      }
      for (std::size_t k = 0; k < passive.size(); ++k) {
        const double x = res.x(passive[k]);
        res.x(passive[k]) = x + alpha * (zp(Eigen::Index(k)) - x);
      }
      bool dropped = false;
      for (std::size_t k = 0; k < passive.size(); ++k) {
        const double z = zp(Eigen::Index(k));
        if (res.x(passive[k]) <= tol || (z <= 0.0 && alpha >= 1.0)) {
          res.x(passive[k]) = 0.0;
          in_passive[std::size_t(passive[k])] = false;
          dropped = true;
        }
      }
      if (!dropped || res.iterations >= max_iterations) break;
    }
    w = e.transpose() * (f - e * res.x);
    // A column whose least-squares coefficient came out nonpositive cannot
    // make progress; stop offering it this round.
    if (!in_passive[std::size_t(enter)]) w(enter) = 0.0;
  }
  return res;
}

Eigen::VectorXd project_to_simplex(const Eigen::VectorXd& v) {
  std::vector<double> u(v.data(), v.data() + v.size());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    cumulative += u[k];
    const double candidate = (cumulative - 1.0) / double(k + 1);
    if (u[k] - candidate > 0.0) theta = candidate;
  }
  return (v.array() - theta).cwiseMax(0.0).matrix();
}

double simplex_ls_kkt_residual(const Eigen::MatrixXd& m, const Eigen::VectorXd& b, const Eigen::VectorXd& p,
                               const SimplexLsOptions& options) {
  const Eigen::VectorXd grad = 2.0 * m.transpose() * (m * p - b);
  const double step = 1.0 / lipschitz_bound(m);
  const Eigen::VectorXd trial = p - step * grad;
  Eigen::VectorXd projected;
  if (options.sum_to_one) {
    const double slack = 1.0 - options.lower_bound * double(p.size());
    if (slack <= 0.0) {
      projected = Eigen::VectorXd::Constant(p.size(), options.lower_bound);
    } else {
      const Eigen::VectorXd shifted = (trial.array() - options.lower_bound).matrix() / slack;
      projected = (project_to_simplex(shifted) * slack).array() + options.lower_bound;
    }
  } else {
    projected = trial.cwiseMax(options.lower_bound);
  }
  return (p - projected).cwiseAbs().maxCoeff();
}

SimplexLsResult solve_simplex_ls(const Eigen::MatrixXd& m, const Eigen::VectorXd& b, const SimplexLsOptions& options) {
  if (m.rows() != b.size()) throw DimensionError("solve_simplex_ls: design rows do not match target length");
  const Eigen::Index d = m.cols();
  if (d < 1) throw DimensionError("solve_simplex_ls: no columns");
  if (options.lower_bound < 0.0) throw ConfigError("lower bound must be nonnegative");

  const Eigen::VectorXd lb = Eigen::VectorXd::Constant(d, options.lower_bound);
  const Eigen::VectorXd target = b - m * lb;
  SimplexLsResult res;

  if (options.sum_to_one) {
    const double slack = 1.0 - options.lower_bound * double(d);
    if (slack < -1e-12) throw ConfigError("lower bound leaves the simplex empty (d·lb > 1)");
    if (slack <= 1e-15) {
      res.p = lb;
    } else {
      // min_{p' ∈ Δ} ‖C·p'‖² with C = slack·M − target·1ᵀ, solved as NNLS on
      // [C; ρ1ᵀ] q ≈ [0; ρ] and normalised: p' = q / Σq.
      Eigen::MatrixXd c = slack * m;
      c.colwise() -= target;
      const double rho = std::max(1.0, c.cwiseAbs().maxCoeff());
      Eigen::MatrixXd e(c.rows() + 1, d);
      e.topRows(c.rows()) = c;
      e.row(c.rows()).setConstant(rho);
      Eigen::VectorXd f = Eigen::VectorXd::Zero(c.rows() + 1);
      f(c.rows()) = rho;
      const NnlsResult q = nnls(e, f, options.max_iterations);
      res.iterations = q.iterations;
      Eigen::VectorXd pp = q.x.cwiseMax(0.0);
      const double s = pp.sum();
      if (!(s > 0.0)) throw NumericalError("simplex least squares: degenerate NNLS solution", 1.0);
      pp /= s;
      res.p = (lb + slack * pp).eval();
      // Put the round-off from normalisation back on the free coordinates.
      const Eigen::ArrayXd free = (res.p.array() > options.lower_bound).cast<double>();
      const double free_count = free.sum();
      if (free_count > 0.0) res.p.array() += free * ((1.0 - res.p.sum()) / free_count);
    }
  } else {
    const NnlsResult q = nnls(m, target, options.max_iterations);
    res.iterations = q.iterations;
    res.p = lb + q.x.cwiseMax(0.0);
  }

  res.objective = (m * res.p - b).squaredNorm();
  res.kkt_residual = simplex_ls_kkt_residual(m, b, res.p, options);
  if (!(res.kkt_residual <= options.kkt_tolerance)) {
    throw SolverError("simplex least squares did not converge (KKT residual " +
                          std::to_string(res.kkt_residual) + ")",
                      res.kkt_residual, res.p);
  }
  return res;
}

}  // namespace ras
