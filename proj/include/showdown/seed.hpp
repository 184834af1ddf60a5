#pragma once

/// @file seed.hpp
/// @brief Independent per-component seeds derived from one run seed.

#include <cstdint>

namespace showdown {

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30U)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27U)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31U);
}

enum class SeedStream : std::uint64_t { Rules = 1, Agent = 2, BotA = 3, BotB = 4, Uplink = 5, Downlink = 6, Study = 7 };

constexpr std::uint64_t derive_seed(std::uint64_t run_seed, SeedStream stream) noexcept {
  return mix64(run_seed ^ mix64(static_cast<std::uint64_t>(stream)));
}

}  // namespace showdown
