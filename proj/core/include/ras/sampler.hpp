#pragma once

// Hit-and-run generation of attention rules that satisfy time monotonicity.
//
// Each preference block is an independent chain e^0, e^1, ..., e^{d_t-1}
// with e^{t+1} = e^t + γ·ξ. The direction ξ is chosen so that the implied
// accumulated direction ψ = ζ(ξ) is ≤ 0 on every proper subset and 0 on the
// full menu; γ is then drawn from the interval that keeps e^{t+1} a
// probability vector.

#include <cstdint>

#include <Eigen/Dense>

#include "ras/core.hpp"
#include "ras/random.hpp"

namespace ras {

enum class DirectionScheme {
  // Every set carrying mass sends a random share of it to its strict
  // supersets, spread with random weights that decay by `size_decay` per
  // extra item. Only sets carrying mass are drained, so γ_max > 0.
  kUpwardSpread,
  // As above, but each drained set (a random subset of those carrying mass)
  // sends everything to a single random superset.
  kUpwardTransfer,
  // ψ drawn i.i.d. −|N(0,1)| on proper subsets, ξ = Möbius(ψ). Stalls at rows
  // with zero entries (γ_max = 0); kept for comparison.
  kMoebiusConstructive,
  // Gaussian ξ with Σξ = 0, redrawn until ψ is single-signed. Kept for comparison.
  kGaussianRejection,
};

enum class GammaDraw {
  kUniform,   // γ ~ U(0, γ_max)
  kBoundary,  // γ = γ_max
};

struct SamplerConfig {
  std::size_t periods = 1;
  std::uint64_t seed = 0;
  // Row at the first period; empty selects the default for the set index
  // (outside-only in outside mode, uniform over singletons otherwise).
  Eigen::VectorXd initial_row;
  GammaDraw gamma_draw = GammaDraw::kUniform;
  DirectionScheme direction_scheme = DirectionScheme::kUpwardSpread;
  double size_decay = 0.1;  // kUpwardSpread: weight factor per extra item in the target set
  int max_direction_tries = 1000;
};

// Mass 1 on {outside}.
Eigen::VectorXd initial_row_outside(const SetIndex& sets);
Eigen::VectorXd initial_row_outside(const Menu& menu);
// Mass 1/n on each singleton.
Eigen::VectorXd initial_row_singletons(const SetIndex& sets);
Eigen::VectorXd default_initial_row(const SetIndex& sets);

struct StepResult {
  Eigen::VectorXd row;
  double gamma = 0.0;
  double gamma_max = 0.0;
  bool degenerate = false;  // no feasible move; row returned unchanged
};

StepResult step(const Eigen::VectorXd& row, const SetIndex& sets, const SamplerConfig& config, Rng& rng);

// Largest γ ≥ 0 keeping row + γ·direction inside [0,1]^d_c.
double feasible_gamma_max(const Eigen::VectorXd& row, const Eigen::VectorXd& direction);

// One chain per preference block, each on its own stream derived from config.seed.
AttentionRule sample_attention_rule(const SetIndex& sets, std::size_t preference_count, const SamplerConfig& config);
AttentionRule sample_attention_rule(const SetIndex& sets, const OrderingSet& orderings, const SamplerConfig& config);

}  // namespace ras
