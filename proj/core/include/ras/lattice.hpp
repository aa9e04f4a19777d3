#pragma once

// Subset-sum (zeta) and Möbius transforms over the canonical set enumeration.

#include <span>
#include <vector>

#include "ras/core.hpp"

namespace ras {

// alpha[A] = Σ_{B ⊆ A} mu[B]; both vectors indexed by SetIndex position.
std::vector<double> zeta_transform(std::span<const double> mu, const SetIndex& sets);

// Inverse of zeta_transform.
std::vector<double> moebius_inverse(std::span<const double> alpha, const SetIndex& sets);

// In-place transforms on a full 2^bits lattice vector.
void subset_sum_inplace(std::span<double> values);
void moebius_inplace(std::span<double> values);

}  // namespace ras
