#pragma once

// Revealed-preference tests under a single common preference.

#include <cstddef>
#include <optional>
#include <vector>

#include "ras/core.hpp"

namespace ras {

inline constexpr double kRejectionTolerance = 1e-9;

// Σ_{x ∈ tail} π(x | t), where the tail holds the items ranked at positions
// >= `position` (0-based) under `ordering`; position 0 is the whole menu.
double lower_contour_sum(const ChoiceDataset& pi, const PreferenceOrdering& ordering, std::size_t position,
                         std::size_t t);

// Tail sum below and including item `y`.
double lower_contour_sum_at(const ChoiceDataset& pi, const PreferenceOrdering& ordering, std::size_t y,
                            std::size_t t);

struct ContourWitness {
  std::size_t position = 0;  // 0-based rank of the tail's head
  std::size_t t = 0;
  std::size_t t_later = 0;
  double sum_t = 0.0;
  double sum_t_later = 0.0;
};

struct RejectionOutcome {
  bool rejected = false;
  std::optional<ContourWitness> witness;
};

// Rejects iff some tail sum rises between two periods by more than `tol`.
// Throws DomainError for data with fewer than two periods, where the test is vacuous.
RejectionOutcome rejection_test(const ChoiceDataset& pi, const PreferenceOrdering& ordering,
                                double tol = kRejectionTolerance);

// Items with π(x|t) = 0 (within tol) at every period.
std::vector<bool> never_chosen_items(const ChoiceDataset& pi, double tol = kRejectionTolerance);

// True if `ordering` ranks a never-chosen item above an item that is chosen at some period.
bool violates_never_chosen(const ChoiceDataset& pi, const PreferenceOrdering& ordering,
                           double tol = kRejectionTolerance);

struct RejectedPrefix {
  enum class Reason { kContour, kNeverChosen };
  std::vector<std::size_t> prefix;
  Reason reason = Reason::kContour;
  std::optional<ContourWitness> witness;
};

struct SurvivorReport {
  std::vector<PreferenceOrdering> survivors;
  std::vector<RejectedPrefix> rejected;
};

struct SurvivorOptions {
  double tol = kRejectionTolerance;
  bool never_chosen_rule = true;
};

// Depth-first search over ordering prefixes; a prefix is pruned as soon as
// the tail left behind it fails the contour test.
SurvivorReport survivor_search(const ChoiceDataset& pi, const SurvivorOptions& options = {});

}  // namespace ras
