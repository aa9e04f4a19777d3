#include "ras/lattice.hpp"

#include <bit>

#include "ras/error.hpp"

namespace ras {
namespace {

std::size_t checked_bits(std::size_t len) {
  if (len == 0 || !std::has_single_bit(len)) {
    throw DimensionError("lattice vector length must be a power of two");
  }
  return static_cast<std::size_t>(std::countr_zero(len));
}

std::vector<double> to_lattice(std::span<const double> v, const SetIndex& sets) {
  if (v.size() != sets.size()) {
    throw DimensionError("vector length " + std::to_string(v.size()) + " does not match " +
                         std::to_string(sets.size()) + " consideration sets");
  }
  std::vector<double> full(std::size_t{1} << sets.lattice_bits(), 0.0);
  for (std::size_t pos = 0; pos < v.size(); ++pos) full[sets.lattice_mask(pos)] = v[pos];
  return full;
}

std::vector<double> from_lattice(const std::vector<double>& full, const SetIndex& sets) {
  std::vector<double> out(sets.size());
  for (std::size_t pos = 0; pos < out.size(); ++pos) out[pos] = full[sets.lattice_mask(pos)];
  return out;
}

}  // namespace

void subset_sum_inplace(std::span<double> values) {
  const std::size_t bits = checked_bits(values.size());
  for (std::size_t b = 0; b < bits; ++b) {
    const std::size_t bit = std::size_t{1} << b;
    for (std::size_t m = 0; m < values.size(); ++m) {
      if (m & bit) values[m] += values[m ^ bit];
    }
  }
}

void moebius_inplace(std::span<double> values) {
  const std::size_t bits = checked_bits(values.size());
  for (std::size_t b = 0; b < bits; ++b) {
    const std::size_t bit = std::size_t{1} << b;
    for (std::size_t m = 0; m < values.size(); ++m) {
      if (m & bit) values[m] -= values[m ^ bit];
    }
  }
}

std::vector<double> zeta_transform(std::span<const double> mu, const SetIndex& sets) {
  auto full = to_lattice(mu, sets);
  subset_sum_inplace(full);
  return from_lattice(full, sets);
}

std::vector<double> moebius_inverse(std::span<const double> alpha, const SetIndex& sets) {
  auto full = to_lattice(alpha, sets);
  moebius_inplace(full);
  return from_lattice(full, sets);
}

}  // namespace ras
