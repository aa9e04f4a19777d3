#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace ras {

using Rng = std::mt19937_64;

// Independent, reproducible stream for (seed, stream ids...). Results do not
// depend on the order in which streams are created.
inline Rng make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> ids) {
  std::seed_seq seq{};
  std::vector<std::uint32_t> words{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  for (auto id : ids) {
    words.push_back(static_cast<std::uint32_t>(id));
    words.push_back(static_cast<std::uint32_t>(id >> 32));
  }
  std::seed_seq mixed(words.begin(), words.end());
  return Rng(mixed);
}

// Fresh 64-bit seed drawn from a stream, used to hand sub-seeds to nested runs.
inline std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> ids) {
  Rng rng = make_stream(seed, ids);
  return rng();
}

}  // namespace ras
