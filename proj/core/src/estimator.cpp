#include "ras/estimator.hpp"

#include <cmath>
#include <limits>

#include "ras/error.hpp"
#include "ras/parallel.hpp"
#include "ras/simplex_ls.hpp"

namespace ras {

PreferenceFit solve_p(const AttentionRule& rule, const ChoiceTransform& transform, const ChoiceDataset& pi) {
  if (pi.periods() != rule.periods() || pi.items() != transform.items()) {
    throw DimensionError("choice data does not match the attention rule's periods or items");
  }
  const Eigen::MatrixXd m = design_matrix(rule, transform);
  const SimplexLsResult fit = solve_simplex_ls(m, pi.vec());
  return {PreferenceDistribution(fit.p), fit.objective, fit.kkt_residual};
}

std::uint64_t simulation_seed(std::uint64_t seed, std::size_t k) { return derive_seed(seed, {0x5157ull, k}); }

EstimationResult estimate(const ChoiceDataset& pi, const SetIndex& sets, const OrderingSet& orderings,
                          const EstimateOptions& options) {
  const std::size_t k_sim = options.simulations;
  const std::size_t total = k_sim + options.injected.size();
  if (total == 0) throw ConfigError("estimate needs at least one simulation");
  if (pi.items() != sets.menu_size()) throw DimensionError("choice data and menu differ in item count");

  const ChoiceTransform transform = build_choice_transform(sets, orderings);
  SamplerConfig base = options.sampler;
  base.periods = pi.periods();

  auto rule_for = [&](std::size_t k) -> AttentionRule {
    if (k >= k_sim) return options.injected[k - k_sim];
    SamplerConfig cfg = base;
    cfg.seed = simulation_seed(options.seed, k);
    return sample_attention_rule(sets, orderings, cfg);
  };

  std::vector<double> distances(total, std::numeric_limits<double>::quiet_NaN());
  parallel_for(
      total,
      [&](std::size_t k) {
        try {
          distances[k] = solve_p(rule_for(k), transform, pi).distance;
        } catch (const NumericalError&) {
          // recorded as NaN and skipped
        }
      },
      options.threads);

  EstimationResult res;
  res.simulations = k_sim;
  res.seed = options.seed;
  std::size_t best = total;
  for (std::size_t k = 0; k < total; ++k) {
    if (std::isnan(distances[k])) {
      ++res.failures;
    } else if (best == total || distances[k] < distances[best]) {
      best = k;
    }
  }
  if (best == total) throw NumericalError("every simulation failed to solve", std::numeric_limits<double>::infinity());

  res.best_index = best;
  res.best_rule = rule_for(best);
  const PreferenceFit fit = solve_p(*res.best_rule, transform, pi);
  res.best_p = fit.p;
  res.best_distance = fit.distance;
  distances.resize(total);
  res.per_sim_distances = std::move(distances);
  return res;
}

}  // namespace ras
