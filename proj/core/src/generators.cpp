#include "ras/generators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "ras/error.hpp"
#include "ras/parallel.hpp"
#include "ras/random.hpp"

namespace ras {
namespace {

constexpr double kScheduleTolerance = 1e-12;

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

void check_block(const Eigen::MatrixXd& g) {
  if (g.rows() < 1 || g.cols() < 1) throw DimensionError("gamma schedule is empty");
  if (!g.allFinite() || (g.array() < 0.0).any() || (g.array() > 1.0).any()) {
    throw ConfigError("gamma schedule entries must lie in [0, 1]");
  }
  for (Eigen::Index t = 1; t < g.rows(); ++t) {
    for (Eigen::Index a = 0; a < g.cols(); ++a) {
      if (g(t, a) < g(t - 1, a) - kScheduleTolerance) {
        throw ConfigError("gamma schedule decreases in time (item " + std::to_string(a) + ", period " +
                          std::to_string(t) + ")");
      }
    }
  }
}

Eigen::MatrixXd replicate_blocks(const Eigen::MatrixXd& block, std::size_t preference_count) {
  if (preference_count < 1) throw ConfigError("need at least one preference");
  Eigen::MatrixXd u(block.rows(), block.cols() * Eigen::Index(preference_count));
  for (std::size_t i = 0; i < preference_count; ++i) u.middleCols(Eigen::Index(i) * block.cols(), block.cols()) = block;
  return u;
}

Eigen::MatrixXd mm_block(const SetIndex& sets, const Eigen::MatrixXd& g) {
  const std::size_t n = sets.menu_size();
  if (std::size_t(g.cols()) != n) throw DimensionError("gamma schedule width does not match the menu");
  if (auto o = sets.outside_index(); sets.outside_mode()) {
    if ((g.col(Eigen::Index(*o)).array() != 1.0).any()) {
      throw ConfigError("the outside option must have gamma = 1 in outside mode");
    }
  }
  Eigen::MatrixXd block(g.rows(), Eigen::Index(sets.size()));
  for (Eigen::Index t = 0; t < g.rows(); ++t) {
    double total = 0.0;
    for (std::size_t k = 0; k < sets.size(); ++k) {
      const ConsiderationSet s = sets.set(k);
      double mu = 1.0;
      for (std::size_t a = 0; a < n; ++a) mu *= s.contains(a) ? g(t, Eigen::Index(a)) : 1.0 - g(t, Eigen::Index(a));
      block(t, Eigen::Index(k)) = mu;
      total += mu;
    }
    if (!sets.outside_mode()) {
      if (!(total > 0.0)) {
        throw DomainError("gamma row " + std::to_string(t) + " puts all mass on the empty set");
      }
      block.row(t) /= total;
    }
  }
  return block;
}

}  // namespace

GammaSchedule::GammaSchedule(Eigen::MatrixXd gamma) {
  check_block(gamma);
  blocks_.push_back(std::move(gamma));
}

GammaSchedule::GammaSchedule(std::vector<Eigen::MatrixXd> per_preference) : blocks_(std::move(per_preference)) {
  if (blocks_.empty()) throw ConfigError("gamma schedule needs at least one block");
  for (const auto& b : blocks_) {
    check_block(b);
    if (b.rows() != blocks_.front().rows() || b.cols() != blocks_.front().cols()) {
      throw DimensionError("gamma schedule blocks differ in shape");
    }
  }
}

AttentionRule gen_topn(const SetIndex& sets, std::size_t periods, const std::vector<std::size_t>& search_order,
                       std::size_t preference_count) {
  const std::size_t n = sets.menu_size();
  if (periods < 1) throw ConfigError("top-N needs at least one period");
  std::vector<bool> seen(n, false);
  for (std::size_t a : search_order) {
    if (a >= n || seen[a]) throw ConfigError("search order must be a permutation of the menu");
    seen[a] = true;
  }
  if (search_order.size() != n) throw ConfigError("search order must be a permutation of the menu");

  Mask base = 0;
  if (sets.outside_mode()) base = Mask{1} << *sets.outside_index();
  Eigen::MatrixXd block = Eigen::MatrixXd::Zero(Eigen::Index(periods), Eigen::Index(sets.size()));
  for (std::size_t t = 0; t < periods; ++t) {
    Mask m = base;
    for (std::size_t k = 0; k < std::min(t + 1, n); ++k) m |= Mask{1} << search_order[k];
    block(Eigen::Index(t), Eigen::Index(*sets.position(m))) = 1.0;
  }
  return AttentionRule(replicate_blocks(block, preference_count), sets, preference_count);
}

AttentionRule gen_mm(const SetIndex& sets, const GammaSchedule& schedule, std::size_t preference_count) {
  if (!schedule.shared() && schedule.preference_blocks() != preference_count) {
    throw DimensionError("gamma schedule has a different number of preference blocks");
  }
  if (schedule.shared()) {
    return AttentionRule(replicate_blocks(mm_block(sets, schedule.gamma(0)), preference_count), sets,
                         preference_count);
  }
  const auto d_c = Eigen::Index(sets.size());
  Eigen::MatrixXd u(Eigen::Index(schedule.periods()), d_c * Eigen::Index(preference_count));
  for (std::size_t i = 0; i < preference_count; ++i) u.middleCols(Eigen::Index(i) * d_c, d_c) = mm_block(sets, schedule.gamma(i));
  return AttentionRule(std::move(u), sets, preference_count);
}

double diffusion_gamma(double drift, double sigma, double threshold, double t) {
  if (!(sigma > 0.0)) throw ConfigError("diffusion sigma must be positive");
  if (!(t > 0.0)) throw ConfigError("diffusion time must be positive");
  return 1.0 - normal_cdf((threshold - drift * t) / (std::sqrt(t) * sigma));
}

AttentionRule gen_diffusion(const SetIndex& sets, const std::vector<double>& drifts, double sigma,
                            const Eigen::MatrixXd& thresholds, std::size_t preference_count) {
  const std::size_t n = sets.menu_size();
  if (drifts.size() != n || std::size_t(thresholds.cols()) != n) {
    throw DimensionError("diffusion drifts and thresholds must have one entry per item");
  }
  for (Eigen::Index t = 1; t < thresholds.rows(); ++t) {
    for (Eigen::Index a = 0; a < thresholds.cols(); ++a) {
      if (thresholds(t, a) > thresholds(t - 1, a)) {
        throw ConfigError("saliency threshold increases for item " + std::to_string(a));
      }
    }
  }
  Eigen::MatrixXd g(thresholds.rows(), thresholds.cols());
  for (Eigen::Index t = 0; t < g.rows(); ++t) {
    for (Eigen::Index a = 0; a < g.cols(); ++a) {
      const bool outside = sets.outside_mode() && std::size_t(a) == *sets.outside_index();
      g(t, a) = outside ? 1.0 : diffusion_gamma(drifts[std::size_t(a)], sigma, thresholds(t, a), double(t + 1));
    }
  }
  return gen_mm(sets, GammaSchedule(std::move(g)), preference_count);
}

ThresholdDist ThresholdDist::normal(double mean, double sd) {
  if (!std::isfinite(mean) || !(sd > 0.0)) throw ConfigError("normal threshold needs finite mean and sd > 0");
  return {Kind::kNormal, mean, sd};
}

ThresholdDist ThresholdDist::point_mass(double value) {
  if (std::isnan(value)) throw ConfigError("threshold atom is NaN");
  return {Kind::kPointMass, value, 0.0};
}

double ThresholdDist::cdf(double x) const {
  if (kind == Kind::kPointMass) return x >= location ? 1.0 : 0.0;
  return normal_cdf((x - location) / scale);
}

double ThresholdDist::prob_at_most(double u) const { return cdf(u); }

double ThresholdDist::draw(Rng& rng) const {
  if (kind == Kind::kPointMass) return location;
  std::normal_distribution<double> d(location, scale);
  return d(rng);
}

bool fosd_ordered(const std::vector<ThresholdDist>& dists, std::size_t grid_points) {
  if (dists.size() < 2) return true;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& d : dists) {
    const double spread = d.kind == ThresholdDist::Kind::kNormal ? 8.0 * d.scale : 0.0;
    if (std::isfinite(d.location)) {
      lo = std::min(lo, d.location - spread - 1.0);
      hi = std::max(hi, d.location + spread + 1.0);
    }
  }
  if (!std::isfinite(lo)) {
    lo = -1.0;
    hi = 1.0;
  }
  std::vector<double> grid(std::max<std::size_t>(grid_points, 2));
  for (std::size_t k = 0; k < grid.size(); ++k) grid[k] = lo + (hi - lo) * double(k) / double(grid.size() - 1);
  for (const auto& d : dists) {
    if (std::isfinite(d.location)) grid.push_back(d.location);
  }
  for (std::size_t t = 1; t < dists.size(); ++t) {
    for (double x : grid) {
      if (dists[t].cdf(x) > dists[t - 1].cdf(x) + 1e-12) return false;
    }
    // Atoms at ±infinity are not on the finite grid.
    const auto& a = dists[t - 1];
    const auto& b = dists[t];
    if (b.kind == ThresholdDist::Kind::kPointMass && b.location == -std::numeric_limits<double>::infinity() &&
        !(a.kind == ThresholdDist::Kind::kPointMass && a.location == b.location)) {
      return false;
    }
    if (a.kind == ThresholdDist::Kind::kPointMass && a.location == std::numeric_limits<double>::infinity() &&
        !(b.kind == ThresholdDist::Kind::kPointMass && b.location == a.location)) {
      return false;
    }
  }
  return true;
}

std::vector<ThresholdDist> linear_normal_thresholds(std::size_t periods, double start, double slope, double sd) {
  if (slope < 0.0) throw ConfigError("threshold means must not decrease over time");
  std::vector<ThresholdDist> out;
  for (std::size_t t = 0; t < periods; ++t) out.push_back(ThresholdDist::normal(start + slope * double(t), sd));
  return out;
}

std::vector<SearchOrder> uniform_search_orders(std::size_t n) {
  if (n < 1 || n > 8) throw ConfigError("uniform search orders support 1 to 8 items");
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<SearchOrder> out;
  do {
    out.push_back({perm, 0.0});
  } while (std::next_permutation(perm.begin(), perm.end()));
  for (auto& s : out) s.probability = 1.0 / double(out.size());
  return out;
}

SatisficingSample gen_satisficing(const Menu& menu, const SatisficingConfig& config) {
  const std::size_t n = menu.size();
  if (menu.has_outside()) throw ConfigError("the satisficing generator works on menus without an outside option");
  if (config.utilities.size() != n) throw DimensionError("need one utility per item");
  if (config.thresholds.empty()) throw ConfigError("need at least one period of thresholds");
  if (config.draws_per_period < 1) throw ConfigError("need at least one draw per period");
  if (!fosd_ordered(config.thresholds)) {
    throw ConfigError("threshold distributions are not ordered by first-order stochastic dominance");
  }

  std::vector<std::size_t> rank(n);
  std::iota(rank.begin(), rank.end(), 0);
  std::sort(rank.begin(), rank.end(), [&](std::size_t a, std::size_t b) { return config.utilities[a] > config.utilities[b]; });
  for (std::size_t k = 1; k < n; ++k) {
    if (!(config.utilities[rank[k - 1]] > config.utilities[rank[k]])) throw ConfigError("utilities must be strict");
  }
  PreferenceOrdering pref(rank);

  if (config.search.empty()) throw ConfigError("search distribution is empty");
  std::vector<double> weights;
  for (const auto& s : config.search) {
    std::vector<std::size_t> sorted = s.order;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t k = 0; k < sorted.size(); ++k) {
      if (sorted.size() != n || sorted[k] != k) throw ConfigError("search orders must be permutations of the menu");
    }
    if (!(s.probability >= 0.0)) throw ConfigError("search order probabilities must be nonnegative");
    weights.push_back(s.probability);
  }
  if (std::abs(std::accumulate(weights.begin(), weights.end(), 0.0) - 1.0) > 1e-9) {
    throw ConfigError("search order probabilities must sum to 1");
  }

  const SetIndex sets(menu, false);
  const std::size_t periods = config.thresholds.size();
  Eigen::MatrixXd mu = Eigen::MatrixXd::Zero(Eigen::Index(periods), Eigen::Index(sets.size()));
  Eigen::MatrixXd pi = Eigen::MatrixXd::Zero(Eigen::Index(periods), Eigen::Index(n));

  parallel_for(
      periods,
      [&](std::size_t t) {
        Rng rng = make_stream(config.seed, {0x5A7ull, t});
        std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
        std::vector<std::size_t> set_counts(sets.size(), 0);
        std::vector<std::size_t> choice_counts(n, 0);
        for (std::size_t k = 0; k < config.draws_per_period; ++k) {
          const auto& order = config.search[pick(rng)].order;
          const double tau = config.thresholds[t].draw(rng);
          Mask m = 0;
          std::size_t chosen = n;
          for (std::size_t a : order) {
            m |= Mask{1} << a;
            if (config.utilities[a] >= tau) {
              chosen = a;
              break;
            }
          }
          if (chosen == n) chosen = rank.front();
          ++set_counts[*sets.position(m)];
          ++choice_counts[chosen];
        }
        const double total = double(config.draws_per_period);
        for (std::size_t k = 0; k < sets.size(); ++k) mu(Eigen::Index(t), Eigen::Index(k)) = double(set_counts[k]) / total;
        for (std::size_t a = 0; a < n; ++a) pi(Eigen::Index(t), Eigen::Index(a)) = double(choice_counts[a]) / total;
      },
      config.threads);

  std::vector<double> counts(periods, double(config.draws_per_period));
  return {AttentionRule(std::move(mu), sets, 1), ChoiceDataset(std::move(pi), std::move(counts)), pref};
}

}  // namespace ras
