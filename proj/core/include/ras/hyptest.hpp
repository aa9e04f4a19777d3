#pragma once

// Specification test for a fixed attention rule: the weighted minimum-distance
// statistic T_n and its recentered bootstrap.

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "ras/core.hpp"
#include "ras/matrix.hpp"

namespace ras {

inline constexpr double kVarianceFloor = 1e-12;

struct TestConfig {
  std::optional<double> tau_n;  // nullopt selects default_tau_n
  std::size_t replications = 999;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  // Impose Σp = 1 in the minimisation; off gives p ≥ τ_n/d only.
  bool simplex_sum = true;
  unsigned threads = 0;

  void validate() const;
};

// min(sqrt(log d / n), 1/(2d)).
double default_tau_n(std::size_t preference_count, double sample_size);

struct VarianceWeights {
  Eigen::VectorXd omega;    // π(1−π)/n_t per cell, row-major (period, item)
  Eigen::VectorXd inverse;  // generalized inverse of diag(omega)
};

// Throws ConfigError when the dataset carries no period counts.
VarianceWeights variance_weights(const ChoiceDataset& pi, double floor = kVarianceFloor);
VarianceWeights variance_weights(const Eigen::VectorXd& pi_vec, std::size_t items,
                                 const std::vector<double>& period_counts, double floor = kVarianceFloor);

struct StatisticResult {
  double t_n = 0.0;
  Eigen::VectorXd p_tau;
  Eigen::VectorXd eta_hat;  // M·p_tau, row-major (period, item)
  bool degenerate = false;  // every weight is zero
};

// T_n = n · min over {p ≥ τ_n/d (, Σp = 1)} of (π̂ − M·p)' Ω⁻ (π̂ − M·p).
StatisticResult test_statistic(const Eigen::VectorXd& pi_vec, const Eigen::MatrixXd& design,
                               const Eigen::VectorXd& inverse_weights, double tau_n, double sample_size,
                               bool simplex_sum = true);
StatisticResult test_statistic(const ChoiceDataset& pi, const AttentionRule& rule, const ChoiceTransform& transform,
                               const VarianceWeights& weights, double tau_n, bool simplex_sum = true);

struct TestResult {
  double t_n = 0.0;
  double critical_value = 0.0;
  double p_value = 1.0;
  bool reject = false;
  double tau_n = 0.0;
  double alpha = 0.05;
  std::size_t replications = 0;
  std::uint64_t seed = 0;
  bool degenerate = false;
  Eigen::VectorXd p_tau;
  Eigen::VectorXd eta_hat;
  std::vector<double> bootstrap_statistics;  // in replication order
};

// Resamples choices within each period (multinomial with the observed n_t),
// recenters each replication at η̂, recomputes the weights from the raw
// resample and re-solves. The rule is held fixed across replications.
TestResult bootstrap_test(const ChoiceDataset& pi, const AttentionRule& rule, const ChoiceTransform& transform,
                          const TestConfig& config);

}  // namespace ras
