#pragma once

// Simulation estimator: sample monotone attention rules, fit p on each by
// simplex-constrained least squares, keep the closest fit.

#include <cstdint>
#include <optional>
#include <vector>

#include "ras/core.hpp"
#include "ras/matrix.hpp"
#include "ras/sampler.hpp"

namespace ras {

struct PreferenceFit {
  PreferenceDistribution p;
  double distance = 0.0;  // ‖U·A·P − Π̂‖², summed over all cells
  double kkt_residual = 0.0;
};

PreferenceFit solve_p(const AttentionRule& rule, const ChoiceTransform& transform, const ChoiceDataset& pi);

struct EstimateOptions {
  std::size_t simulations = 1000;
  std::uint64_t seed = 0;
  // Template for every simulated chain; `periods` and `seed` are overwritten.
  SamplerConfig sampler;
  // Extra candidate rules scored after the simulated ones.
  std::vector<AttentionRule> injected;
  unsigned threads = 0;
};

struct EstimationResult {
  std::optional<AttentionRule> best_rule;
  std::optional<PreferenceDistribution> best_p;
  double best_distance = 0.0;
  std::size_t best_index = 0;  // simulation index; >= simulations for injected rules
  std::vector<double> per_sim_distances;  // NaN where a simulation failed
  std::size_t failures = 0;
  std::size_t simulations = 0;
  std::uint64_t seed = 0;
};

// Sampler seed used for simulation k of a run seeded with `seed`.
std::uint64_t simulation_seed(std::uint64_t seed, std::size_t k);

// Deterministic for a given seed regardless of thread count. Simulations are
// nested: the first K draws of a run with K' > K simulations are the same rules.
EstimationResult estimate(const ChoiceDataset& pi, const SetIndex& sets, const OrderingSet& orderings,
                          const EstimateOptions& options);

}  // namespace ras
