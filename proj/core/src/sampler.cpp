#include "ras/sampler.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <span>

#include "ras/error.hpp"
#include "ras/lattice.hpp"

namespace ras {
namespace {

constexpr double kMassEpsilon = 1e-12;

std::span<const double> as_span(const Eigen::VectorXd& v) { return {v.data(), std::size_t(v.size())}; }

Eigen::VectorXd to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), Eigen::Index(v.size()));
}

Eigen::VectorXd upward_transfer_direction(const Eigen::VectorXd& row, const SetIndex& sets, Rng& rng) {
  const std::size_t full = sets.full_position();
  const Mask all_bits = (Mask{1} << sets.lattice_bits()) - 1;
  std::vector<std::size_t> sources;
  for (std::size_t k = 0; k < full; ++k) {
    if (row(Eigen::Index(k)) > kMassEpsilon) sources.push_back(k);
  }
  Eigen::VectorXd xi = Eigen::VectorXd::Zero(row.size());
  if (sources.empty()) return xi;

  std::bernoulli_distribution coin(0.5);
  std::exponential_distribution<double> weight(1.0);
  std::vector<std::size_t> chosen;
  for (std::size_t k : sources) {
    if (coin(rng)) chosen.push_back(k);
  }
  if (chosen.empty()) {
    std::uniform_int_distribution<std::size_t> pick(0, sources.size() - 1);
    chosen.push_back(sources[pick(rng)]);
  }
  for (std::size_t k : chosen) {
    const Mask lattice = sets.lattice_mask(k);
    const Mask complement = all_bits & ~lattice;
    Mask extra = 0;
    while (extra == 0) {
      for (std::size_t b = 0; b < sets.lattice_bits(); ++b) {
        const Mask bit = Mask{1} << b;
        if ((complement & bit) && coin(rng)) extra |= bit;
      }
    }
    const double w = row(Eigen::Index(k)) * weight(rng);
    xi(Eigen::Index(k)) -= w;
    xi(Eigen::Index(sets.position_of_lattice(lattice | extra))) += w;
  }
  return xi;
}

// Above this many missing items a source's supersets are sampled rather than enumerated.
constexpr std::size_t kMaxEnumeratedComplement = 10;
constexpr int kSampledTargets = 64;

Eigen::VectorXd upward_spread_direction(const Eigen::VectorXd& row, const SetIndex& sets, double decay, Rng& rng) {
  const std::size_t full = sets.full_position();
  const Mask all_bits = (Mask{1} << sets.lattice_bits()) - 1;
  std::exponential_distribution<double> weight(1.0);
  Eigen::VectorXd xi = Eigen::VectorXd::Zero(row.size());
  std::vector<std::pair<Mask, double>> targets;
  for (std::size_t k = 0; k < full; ++k) {
    if (row(Eigen::Index(k)) <= kMassEpsilon) continue;
    const Mask lattice = sets.lattice_mask(k);
    const Mask complement = all_bits & ~lattice;
    targets.clear();
    double total = 0.0;
    auto add = [&](Mask extra) {
      const double w = weight(rng) * std::pow(decay, double(std::popcount(extra)) - 1.0);
      targets.emplace_back(extra, w);
      total += w;
    };
    if (std::size_t(std::popcount(complement)) <= kMaxEnumeratedComplement) {
      for (Mask extra = complement; extra != 0; extra = (extra - 1) & complement) add(extra);
    } else {
      std::vector<Mask> bits;
      for (std::size_t b = 0; b < sets.lattice_bits(); ++b) {
        if ((complement >> b) & 1U) bits.push_back(Mask{1} << b);
      }
      std::bernoulli_distribution grow(std::clamp(decay, 0.0, 1.0));
      for (int draw = 0; draw < kSampledTargets; ++draw) {
        std::shuffle(bits.begin(), bits.end(), rng);
        Mask extra = bits.front();
        for (std::size_t j = 1; j < bits.size() && grow(rng); ++j) extra |= bits[j];
        targets.emplace_back(extra, weight(rng));
        total += targets.back().second;
      }
    }
    if (!(total > 0.0)) continue;
    const double w = row(Eigen::Index(k)) * weight(rng);
    xi(Eigen::Index(k)) -= w;
    for (const auto& [extra, share] : targets) {
      xi(Eigen::Index(sets.position_of_lattice(lattice | extra))) += w * share / total;
    }
  }
  return xi;
}

Eigen::VectorXd moebius_direction(const SetIndex& sets, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> psi(sets.size(), 0.0);
  for (std::size_t k = 0; k < sets.full_position(); ++k) psi[k] = -std::abs(normal(rng));
  return to_vector(moebius_inverse(psi, sets));
}

// Returns a zero vector when no single-signed ψ was found.
Eigen::VectorXd rejection_direction(const SetIndex& sets, int tries, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const std::size_t full = sets.full_position();
  Eigen::VectorXd xi(Eigen::Index(sets.size()));
  for (int attempt = 0; attempt < tries; ++attempt) {
    for (Eigen::Index k = 0; k < xi.size(); ++k) xi(k) = normal(rng);
    xi.array() -= xi.mean();
    const auto psi = zeta_transform(as_span(xi), sets);
    bool nonpositive = true;
    bool nonnegative = true;
    for (std::size_t k = 0; k < full; ++k) {
      nonpositive = nonpositive && psi[k] <= 0.0;
      nonnegative = nonnegative && psi[k] >= 0.0;
    }
    if (nonpositive) return xi;
    if (nonnegative) return -xi;
  }
  return Eigen::VectorXd::Zero(xi.size());
}

void check_row(const Eigen::VectorXd& row, const SetIndex& sets) {
  if (std::size_t(row.size()) != sets.size()) throw DimensionError("attention row length does not match set count");
  if ((row.array() < 0.0).any() || (row.array() > 1.0).any() || std::abs(row.sum() - 1.0) > kRowSumTolerance) {
    throw DomainError("attention row is not a probability vector");
  }
}

}  // namespace

Eigen::VectorXd initial_row_outside(const SetIndex& sets) {
  if (!sets.outside_mode()) throw ConfigError("outside-only initial row requires outside-option mode");
  Eigen::VectorXd row = Eigen::VectorXd::Zero(Eigen::Index(sets.size()));
  row(0) = 1.0;  // position 0 is {outside}
  return row;
}

Eigen::VectorXd initial_row_outside(const Menu& menu) { return initial_row_outside(SetIndex(menu, true)); }

Eigen::VectorXd initial_row_singletons(const SetIndex& sets) {
  Eigen::VectorXd row = Eigen::VectorXd::Zero(Eigen::Index(sets.size()));
  std::size_t count = 0;
  for (std::size_t k = 0; k < sets.size(); ++k) count += sets.set(k).size() == 1 ? 1 : 0;
  if (count == 0) throw ConfigError("no singleton consideration sets in this enumeration");
  for (std::size_t k = 0; k < sets.size(); ++k) {
    if (sets.set(k).size() == 1) row(Eigen::Index(k)) = 1.0 / double(count);
  }
  return row;
}

Eigen::VectorXd default_initial_row(const SetIndex& sets) {
  return sets.outside_mode() ? initial_row_outside(sets) : initial_row_singletons(sets);
}

double feasible_gamma_max(const Eigen::VectorXd& row, const Eigen::VectorXd& direction) {
  double gmax = std::numeric_limits<double>::infinity();
  bool bound = false;
  for (Eigen::Index k = 0; k < row.size(); ++k) {
    const double xi = direction(k);
    if (xi < 0.0) {
      gmax = std::min(gmax, std::max(0.0, row(k)) / -xi);
      bound = true;
    } else if (xi > 0.0) {
      gmax = std::min(gmax, std::max(0.0, 1.0 - row(k)) / xi);
      bound = true;
    }
  }
  return bound ? gmax : 0.0;
}

StepResult step(const Eigen::VectorXd& row, const SetIndex& sets, const SamplerConfig& config, Rng& rng) {
  check_row(row, sets);
  Eigen::VectorXd xi;
  switch (config.direction_scheme) {
    case DirectionScheme::kUpwardSpread:
      xi = upward_spread_direction(row, sets, config.size_decay, rng);
      break;
    case DirectionScheme::kUpwardTransfer:
      xi = upward_transfer_direction(row, sets, rng);
      break;
    case DirectionScheme::kMoebiusConstructive:
      xi = moebius_direction(sets, rng);
      break;
    case DirectionScheme::kGaussianRejection:
      xi = rejection_direction(sets, config.max_direction_tries, rng);
      break;
  }

  StepResult out{row, 0.0, feasible_gamma_max(row, xi), false};
  if (!(out.gamma_max > 0.0) || !std::isfinite(out.gamma_max)) {
    out.gamma_max = 0.0;
    out.degenerate = true;
    return out;
  }
  if (config.gamma_draw == GammaDraw::kBoundary) {
    out.gamma = out.gamma_max;
  } else {
    std::uniform_real_distribution<double> u(0.0, out.gamma_max);
    out.gamma = u(rng);
  }
  out.row = (row + out.gamma * xi).cwiseMax(0.0).cwiseMin(1.0);
  return out;
}

AttentionRule sample_attention_rule(const SetIndex& sets, std::size_t preference_count, const SamplerConfig& config) {
  if (config.periods < 1) throw ConfigError("sampler needs at least one period");
  if (!(config.size_decay > 0.0)) throw ConfigError("size_decay must be positive");
  if (preference_count < 1) throw ConfigError("sampler needs at least one preference");
  const Eigen::VectorXd initial = config.initial_row.size() > 0 ? config.initial_row : default_initial_row(sets);
  check_row(initial, sets);

  const auto d_c = Eigen::Index(sets.size());
  Eigen::MatrixXd u(Eigen::Index(config.periods), d_c * Eigen::Index(preference_count));
  for (std::size_t i = 0; i < preference_count; ++i) {
    Rng rng = make_stream(config.seed, {i});
    Eigen::VectorXd row = initial;
    u.row(0).segment(Eigen::Index(i) * d_c, d_c) = row.transpose();
    for (std::size_t t = 1; t < config.periods; ++t) {
      row = step(row, sets, config, rng).row;
      u.row(Eigen::Index(t)).segment(Eigen::Index(i) * d_c, d_c) = row.transpose();
    }
  }
  return AttentionRule(std::move(u), sets, preference_count);
}

AttentionRule sample_attention_rule(const SetIndex& sets, const OrderingSet& orderings, const SamplerConfig& config) {
  if (orderings.menu_size() != sets.menu_size()) throw DimensionError("orderings and menu differ in size");
  return sample_attention_rule(sets, orderings.size(), config);
}

}  // namespace ras
