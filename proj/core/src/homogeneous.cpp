#include "ras/homogeneous.hpp"

#include "ras/error.hpp"

namespace ras {
namespace {

void check_items(const ChoiceDataset& pi, const PreferenceOrdering& ordering) {
  if (ordering.size() != pi.items()) throw DimensionError("ordering and choice data differ in item count");
}

// Largest rise of Σ_{x∈tail} π(x|·) over pairs t < t'.
std::optional<ContourWitness> tail_rise(const ChoiceDataset& pi, const std::vector<bool>& in_tail,
                                        std::size_t position, double tol) {
  std::vector<double> sums(pi.periods(), 0.0);
  for (std::size_t t = 0; t < pi.periods(); ++t) {
    for (std::size_t j = 0; j < pi.items(); ++j) {
      if (in_tail[j]) sums[t] += pi(t, j);
    }
  }
  std::optional<ContourWitness> worst;
  for (std::size_t t = 0; t < sums.size(); ++t) {
    for (std::size_t t2 = t + 1; t2 < sums.size(); ++t2) {
      const double rise = sums[t2] - sums[t];
      if (rise > tol && (!worst || rise > worst->sum_t_later - worst->sum_t)) {
        worst = ContourWitness{position, t, t2, sums[t], sums[t2]};
      }
    }
  }
  return worst;
}

}  // namespace

double lower_contour_sum(const ChoiceDataset& pi, const PreferenceOrdering& ordering, std::size_t position,
                         std::size_t t) {
  check_items(pi, ordering);
  if (position >= ordering.size() || t >= pi.periods()) throw DimensionError("lower_contour_sum index out of range");
  double total = 0.0;
  for (std::size_t pos = position; pos < ordering.size(); ++pos) total += pi(t, ordering.item_at(pos));
  return total;
}

double lower_contour_sum_at(const ChoiceDataset& pi, const PreferenceOrdering& ordering, std::size_t y,
                            std::size_t t) {
  return lower_contour_sum(pi, ordering, ordering.position_of(y), t);
}

RejectionOutcome rejection_test(const ChoiceDataset& pi, const PreferenceOrdering& ordering, double tol) {
  check_items(pi, ordering);
  if (pi.periods() < 2) throw DomainError("rejection test needs at least two periods (no t < t' pairs)");
  std::vector<bool> in_tail(pi.items(), true);
  for (std::size_t pos = 0; pos < ordering.size(); ++pos) {
    if (auto w = tail_rise(pi, in_tail, pos, tol)) return {true, w};
    in_tail[ordering.item_at(pos)] = false;
  }
  return {};
}

std::vector<bool> never_chosen_items(const ChoiceDataset& pi, double tol) {
  std::vector<bool> out(pi.items(), true);
  for (std::size_t j = 0; j < pi.items(); ++j) {
    for (std::size_t t = 0; t < pi.periods(); ++t) {
      if (pi(t, j) > tol) out[j] = false;
    }
  }
  return out;
}

bool violates_never_chosen(const ChoiceDataset& pi, const PreferenceOrdering& ordering, double tol) {
  check_items(pi, ordering);
  const auto never = never_chosen_items(pi, tol);
  bool seen_never = false;
  for (std::size_t item : ordering.rank()) {
    if (never[item]) {
      seen_never = true;
    } else if (seen_never) {
      return true;
    }
  }
  return false;
}

SurvivorReport survivor_search(const ChoiceDataset& pi, const SurvivorOptions& options) {
  if (pi.periods() < 2) throw DomainError("survivor search needs at least two periods (no t < t' pairs)");
  const std::size_t n = pi.items();
  const auto never = never_chosen_items(pi, options.tol);

  SurvivorReport report;
  std::vector<std::size_t> prefix;
  std::vector<bool> placed(n, false);
  std::vector<bool> in_tail(n, true);

  // The whole-menu tail (position 0) sums to one at every period and never rejects.
  auto dfs = [&](auto&& self) -> void {
    if (prefix.size() == n) {
      report.survivors.emplace_back(prefix);
      return;
    }
    for (std::size_t item = 0; item < n; ++item) {
      if (placed[item]) continue;
      prefix.push_back(item);
      placed[item] = true;
      in_tail[item] = false;

      bool pruned = false;
      if (options.never_chosen_rule && never[item]) {
        for (std::size_t j = 0; j < n; ++j) {
          if (!placed[j] && !never[j]) {
            report.rejected.push_back({prefix, RejectedPrefix::Reason::kNeverChosen, std::nullopt});
            pruned = true;
            break;
          }
        }
      }
      if (!pruned && prefix.size() < n) {
        if (auto w = tail_rise(pi, in_tail, prefix.size(), options.tol)) {
          report.rejected.push_back({prefix, RejectedPrefix::Reason::kContour, w});
          pruned = true;
        }
      }
      if (!pruned) self(self);

      in_tail[item] = true;
      placed[item] = false;
      prefix.pop_back();
    }
  };
  dfs(dfs);
  return report;
}

}  // namespace ras
