#pragma once

// Expected CRRA utility rankings of lotteries.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ras/core.hpp"

namespace ras {

struct Lottery {
  std::string label;
  std::vector<std::pair<double, double>> outcomes;  // (payoff, probability)

  double expectation() const;
  double variance() const;
  // Throws ConfigError for negative payoffs, probabilities outside [0,1] or
  // probabilities not summing to 1.
  void validate() const;
};

// x^{1−σ}/(1−σ), or ln x at σ = 1; −infinity for x = 0 when σ ≥ 1.
double crra_utility(double x, double sigma);

// Sort key for expected utility. With σ ≥ 1 a lottery that pays 0 with
// positive probability has expected utility −infinity; such lotteries rank
// below every finite one, then by smaller probability of 0, then by the
// expected utility of their positive payoffs.
struct CrraKey {
  bool finite = true;
  double zero_probability = 0.0;
  double value = 0.0;

  // Strictly better, with relative tolerance `tol` on the value comparison.
  bool better_than(const CrraKey& other, double tol = 1e-12) const;
  bool tied_with(const CrraKey& other, double tol = 1e-12) const;
};

CrraKey crra_key(const Lottery& lottery, double sigma);

// Menu indices best-first. Throws DomainError when two lotteries tie.
PreferenceOrdering crra_rank(const std::vector<Lottery>& lotteries, double sigma);

struct CrraInterval {
  double lower = 0.0;
  double upper = 0.0;
  std::vector<std::size_t> ordering;  // indices into the ranked lotteries, best first
};

struct CrraTableOptions {
  double sigma_min = -1.0;
  double sigma_max = 1.0;
  double grid_step = 1e-4;
  double cutoff_tolerance = 1e-6;
  // Lotteries left out of the ranking (e.g. an outside option).
  std::vector<std::size_t> exclude;
};

// Contiguous σ intervals on which the ranking of the non-excluded lotteries
// is constant. Cutoffs are located by bisection; the grid stops a guard band
// of cutoff_tolerance short of σ = 1 when σ_max ≥ 1.
std::vector<CrraInterval> crra_ordering_table(const std::vector<Lottery>& lotteries,
                                              const CrraTableOptions& options = {});

}  // namespace ras
