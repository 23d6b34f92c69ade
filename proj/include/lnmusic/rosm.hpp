// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "lnmusic/noise.hpp"
#include "lnmusic/scene.hpp"

namespace lnmusic {

/// Random optimal state method: draw T random control matrices and keep the one whose
/// probe measurement carries the most power.
struct RosmConfig {
  int T = 64;
  int phase_bits = 0; // 0 = continuous phases on [0, 2 pi)
  std::uint64_t seed = 0;
  bool noisy_probe = true;

  void validate() const;
};

/// Candidate t; depends only on (seed, t).
RisControlMatrix rosm_candidate(const RosmConfig &cfg, int K, int M, int t);

/// ||y||^2 / K.
double srp(const CVector &y);

struct RosmResult {
  RisControlMatrix G;
  int index = 0;
  std::vector<double> srp; // one probe value per candidate
};

/// Probe all candidates with z (plus one noise draw each when noisy_probe) and return the argmax.
/// Ties resolve to the lowest index.
RosmResult rosm_optimize(const CVector &z, int K, const RosmConfig &cfg, const NoiseConfig &noise);

/// Scene overload: z is synthesised from the scene amplitudes.
RosmResult rosm_optimize(const SceneConfig &scene, const RosmConfig &cfg, const NoiseConfig &noise);

} // namespace lnmusic
