#pragma once

#include <cstdint>
#include <random>

namespace ttei {

/// Random stream owned by the caller. Every stochastic operation in the
/// library takes one by reference and holds no hidden state of its own.
using Rng = std::mt19937_64;

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Seed for the stream of one trial. Depends only on (base_seed, index), so
/// trials can run in any order on any number of threads.
constexpr std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t index) noexcept {
  return mix64(mix64(base_seed) ^ mix64(index + 0x632BE59BD9B4E019ULL));
}

}  // namespace ttei
