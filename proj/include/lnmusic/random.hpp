// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>

namespace lnmusic {

using Rng = std::mt19937_64;

// Independent named streams derived from a single trial seed.
enum class Stream : std::uint64_t {
  SourcePhase = 1,
  ControlMatrix = 2,
  RosmCandidate = 3,
  RosmProbeNoise = 4,
  MeasurementNoise = 5,
};

inline std::uint64_t splitmix64(std::uint64_t x)
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index = 0)
{
  return splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ index);
}

inline Rng make_rng(std::uint64_t seed, Stream stream, std::uint64_t index = 0)
{
  return Rng{derive_seed(seed, static_cast<std::uint64_t>(stream), index)};
}

} // namespace lnmusic
