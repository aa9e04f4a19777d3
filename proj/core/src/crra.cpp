#include "ras/crra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ras/error.hpp"

namespace ras {
namespace {

std::vector<std::size_t> order_by_key(const std::vector<CrraKey>& keys) {
  std::vector<std::size_t> idx(keys.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return keys[a].better_than(keys[b], 0.0); });
  return idx;
}

std::vector<std::size_t> ranking(const std::vector<Lottery>& lotteries, const std::vector<std::size_t>& members,
                                 double sigma) {
  std::vector<CrraKey> keys;
  for (std::size_t i : members) keys.push_back(crra_key(lotteries[i], sigma));
  std::vector<std::size_t> order = order_by_key(keys);
  for (auto& k : order) k = members[k];
  return order;
}

}  // namespace

double Lottery::expectation() const {
  double e = 0.0;
  for (const auto& [x, p] : outcomes) e += p * x;
  return e;
}

double Lottery::variance() const {
  const double m = expectation();
  double v = 0.0;
  for (const auto& [x, p] : outcomes) v += p * (x - m) * (x - m);
  return v;
}

void Lottery::validate() const {
  if (outcomes.empty()) throw ConfigError("lottery " + label + " has no outcomes");
  double total = 0.0;
  for (const auto& [x, p] : outcomes) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw ConfigError("lottery " + label + " has a negative or non-finite payoff");
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("lottery " + label + " has a probability outside [0, 1]");
    total += p;
  }
  if (std::abs(total - 1.0) > kRowSumTolerance) throw ConfigError("lottery " + label + " probabilities do not sum to 1");
}

double crra_utility(double x, double sigma) {
  if (x < 0.0) throw DomainError("CRRA utility needs a nonnegative payoff");
  if (sigma == 1.0) return x > 0.0 ? std::log(x) : -std::numeric_limits<double>::infinity();
  if (x == 0.0) return sigma < 1.0 ? 0.0 : -std::numeric_limits<double>::infinity();
  return std::pow(x, 1.0 - sigma) / (1.0 - sigma);
}

CrraKey crra_key(const Lottery& lottery, double sigma) {
  CrraKey key;
  for (const auto& [x, p] : lottery.outcomes) {
    if (p <= 0.0) continue;
    if (x == 0.0 && sigma >= 1.0) {
      key.finite = false;
      key.zero_probability += p;
    } else {
      key.value += p * crra_utility(x, sigma);
    }
  }
  return key;
}

bool CrraKey::better_than(const CrraKey& other, double tol) const {
  if (finite != other.finite) return finite;
  if (!finite && zero_probability != other.zero_probability) return zero_probability < other.zero_probability;
  const double scale = std::max({1.0, std::abs(value), std::abs(other.value)});
  return value > other.value + tol * scale;
}

bool CrraKey::tied_with(const CrraKey& other, double tol) const {
  return !better_than(other, tol) && !other.better_than(*this, tol);
}

PreferenceOrdering crra_rank(const std::vector<Lottery>& lotteries, double sigma) {
  if (lotteries.size() < 2) throw ConfigError("need at least two lotteries to rank");
  std::vector<CrraKey> keys;
  for (const auto& l : lotteries) {
    l.validate();
    keys.push_back(crra_key(l, sigma));
  }
  std::vector<std::size_t> order = order_by_key(keys);
  for (std::size_t k = 1; k < order.size(); ++k) {
    if (keys[order[k - 1]].tied_with(keys[order[k]])) {
      throw DomainError("lotteries " + lotteries[order[k - 1]].label + " and " + lotteries[order[k]].label +
                        " tie at sigma = " + std::to_string(sigma) + " (a cutoff point)");
    }
  }
  return PreferenceOrdering(std::move(order));
}

std::vector<CrraInterval> crra_ordering_table(const std::vector<Lottery>& lotteries, const CrraTableOptions& options) {
  if (!(options.sigma_max > options.sigma_min)) throw ConfigError("empty sigma range");
  if (!(options.grid_step > 0.0) || !(options.cutoff_tolerance > 0.0)) throw ConfigError("grid step and tolerance must be positive");
  std::vector<std::size_t> members;
  for (std::size_t i = 0; i < lotteries.size(); ++i) {
    lotteries[i].validate();
    if (std::find(options.exclude.begin(), options.exclude.end(), i) == options.exclude.end()) members.push_back(i);
  }
  if (members.size() < 2) throw ConfigError("need at least two ranked lotteries");

  const double last = options.sigma_max >= 1.0 ? std::min(options.sigma_max, 1.0 - options.cutoff_tolerance)
                                               : options.sigma_max;
  const auto steps = std::size_t(std::ceil((last - options.sigma_min) / options.grid_step));

  std::vector<CrraInterval> table;
  CrraInterval current{options.sigma_min, options.sigma_max, ranking(lotteries, members, options.sigma_min)};
  double prev = options.sigma_min;
  for (std::size_t k = 1; k <= steps; ++k) {
    const double s = std::min(last, options.sigma_min + double(k) * options.grid_step);
    std::vector<std::size_t> here = ranking(lotteries, members, s);
    // Several cutoffs may fall between two grid points; peel them off one at a time.
    double left = prev;
    while (here != current.ordering) {
      double lo = left;
      double hi = s;
      while (hi - lo > options.cutoff_tolerance) {
        const double mid = 0.5 * (lo + hi);
        if (ranking(lotteries, members, mid) == current.ordering) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      const double cutoff = 0.5 * (lo + hi);
      current.upper = cutoff;
      table.push_back(current);
      current = CrraInterval{cutoff, options.sigma_max, ranking(lotteries, members, hi)};
      left = hi;
    }
    prev = s;
  }
  current.upper = options.sigma_max;
  table.push_back(current);
  return table;
}

}  // namespace ras
