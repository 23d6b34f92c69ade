// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "lnmusic/random.hpp"
#include "lnmusic/types.hpp"

namespace lnmusic {

/// Mixed-Gaussian impulsive noise v = b * w1 + w2 with b ~ Bernoulli(kappa),
/// var(w1) = variance_ratio * var(w2).
struct NoiseConfig {
  double kappa = 0.1;
  double variance_ratio = 100.0;
  double snr_db = 10.0;
  std::uint64_t seed = 0;

  void validate() const;

  /// Total per-sample variance kappa * sigma1^2 + sigma2^2 for a given background variance.
  double total_variance(double sigma2_sq) const { return (kappa * variance_ratio + 1.0) * sigma2_sq; }
};

/// sigma2^2 = ||z||^2 / 10^(snr/10). Throws ParameterError for z = 0.
double calibrate_sigma2(const CVector &z, double snr_db);

struct NoiseDraw {
  CVector v;
  std::vector<bool> impulse; // which samples carry the w1 component
};

/// Stateful sampler; one instance per trial. Real and imaginary parts each get half the variance.
class ImpulsiveNoise {
public:
  explicit ImpulsiveNoise(const NoiseConfig &cfg);
  ImpulsiveNoise(const NoiseConfig &cfg, Rng rng);

  CVector sample(Eigen::Index K, double sigma2_sq);
  NoiseDraw sample_detailed(Eigen::Index K, double sigma2_sq);

private:
  NoiseConfig cfg_;
  Rng rng_;
};

/// One-shot convenience wrapper: a fresh sampler seeded from cfg.seed.
CVector sample_noise(Eigen::Index K, double sigma2_sq, const NoiseConfig &cfg);

} // namespace lnmusic
