#pragma once

// Attention rules built from closed-form attention models, plus a Monte-Carlo
// satisficing search simulator.

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ras/core.hpp"
#include "ras/random.hpp"

namespace ras {

// γ_t(a): probability that item a is in the consideration set at period t.
// Rows are periods, columns menu items; one matrix per preference or a single
// matrix shared by all preferences.
class GammaSchedule {
 public:
  explicit GammaSchedule(Eigen::MatrixXd gamma);
  explicit GammaSchedule(std::vector<Eigen::MatrixXd> per_preference);

  std::size_t periods() const noexcept { return std::size_t(blocks_.front().rows()); }
  std::size_t items() const noexcept { return std::size_t(blocks_.front().cols()); }
  bool shared() const noexcept { return blocks_.size() == 1; }
  std::size_t preference_blocks() const noexcept { return blocks_.size(); }
  const Eigen::MatrixXd& gamma(std::size_t pref) const { return blocks_.at(shared() ? 0 : pref); }

 private:
  std::vector<Eigen::MatrixXd> blocks_;
};

// Search order lists menu indices in the order they become visible. At
// period t (0-based) the first min(t+1, n) items are considered; in outside
// mode the outside item is added to every set.
AttentionRule gen_topn(const SetIndex& sets, std::size_t periods, const std::vector<std::size_t>& search_order,
                       std::size_t preference_count = 1);

// μ(A|t) = ∏_{a∈A} γ_t(a) ∏_{b∉A} (1 − γ_t(b)). In outside mode γ of the
// outside item must be 1. Otherwise μ is renormalised over nonempty sets,
// which can break time monotonicity; a zero row throws DomainError.
AttentionRule gen_mm(const SetIndex& sets, const GammaSchedule& schedule, std::size_t preference_count = 1);

// 1 − Φ((τ − v·t) / (√t·σ)), t > 0.
double diffusion_gamma(double drift, double sigma, double threshold, double t);

// thresholds(t, a) = τ_a(t+1) for periods t = 0..d_t−1. Throws ConfigError
// when a threshold rises between periods or the implied γ schedule is not
// nondecreasing. In outside mode the outside item is always considered.
AttentionRule gen_diffusion(const SetIndex& sets, const std::vector<double>& drifts, double sigma,
                            const Eigen::MatrixXd& thresholds, std::size_t preference_count = 1);

struct ThresholdDist {
  enum class Kind { kNormal, kPointMass };
  Kind kind = Kind::kNormal;
  double location = 0.0;  // mean or atom
  double scale = 1.0;     // standard deviation (normal only)

  static ThresholdDist normal(double mean, double sd);
  static ThresholdDist point_mass(double value);  // ±infinity allowed
  double cdf(double x) const;
  // Pr(u ≥ τ).
  double prob_at_most(double u) const;
  double draw(Rng& rng) const;
};

// Later thresholds must first-order stochastically dominate earlier ones:
// F_{t+1}(x) ≤ F_t(x) on a grid covering every distribution's bulk.
bool fosd_ordered(const std::vector<ThresholdDist>& dists, std::size_t grid_points = 2001);

// Normal thresholds with mean = start + slope·t and a fixed standard deviation.
std::vector<ThresholdDist> linear_normal_thresholds(std::size_t periods, double start, double slope, double sd);

struct SearchOrder {
  std::vector<std::size_t> order;  // first searched first
  double probability = 0.0;
};

// Every permutation of n items with equal probability.
std::vector<SearchOrder> uniform_search_orders(std::size_t n);

struct SatisficingConfig {
  std::vector<double> utilities;  // strict; preference is descending utility
  std::vector<ThresholdDist> thresholds;  // one per period
  std::vector<SearchOrder> search;
  std::size_t draws_per_period = 10000;
  std::uint64_t seed = 0;
  unsigned threads = 0;
};

struct SatisficingSample {
  AttentionRule rule;     // empirical μ̂ (single preference block)
  ChoiceDataset choices;  // empirical Π with n_t = draws_per_period
  PreferenceOrdering preference;
};

// Agents in period t draw a search order and a threshold τ(t), search until
// the first item with u ≥ τ, and choose it (or the best item when none
// qualifies). The set of searched items is the consideration set.
SatisficingSample gen_satisficing(const Menu& menu, const SatisficingConfig& config);

}  // namespace ras
