// SPDX-License-Identifier: Apache-2.0
#include "lnmusic/noise.hpp"

#include <cmath>

namespace lnmusic {

void NoiseConfig::validate() const
{
  if (!(kappa >= 0.0 && kappa <= 1.0)) { throw ConfigError("noise: kappa must lie in [0, 1]"); }
  if (!(variance_ratio > 0.0)) { throw ConfigError("noise: variance_ratio must be positive"); }
  if (!std::isfinite(snr_db)) { throw ConfigError("noise: snr_db must be finite"); }
}

double calibrate_sigma2(const CVector &z, double snr_db)
{
  const double power = z.squaredNorm();
  if (!(power > 0.0)) { throw ParameterError("calibrate_sigma2: ||z|| = 0, SNR is undefined"); }
  return power / std::pow(10.0, snr_db / 10.0);
}

ImpulsiveNoise::ImpulsiveNoise(const NoiseConfig &cfg) : ImpulsiveNoise(cfg, Rng{cfg.seed}) {}

ImpulsiveNoise::ImpulsiveNoise(const NoiseConfig &cfg, Rng rng) : cfg_(cfg), rng_(std::move(rng))
{
  cfg_.validate();
}

NoiseDraw ImpulsiveNoise::sample_detailed(Eigen::Index K, double sigma2_sq)
{
  if (sigma2_sq < 0.0) { throw ParameterError("sample_noise: negative variance"); }
  std::normal_distribution<double> unit(0.0, 1.0);
  std::bernoulli_distribution gate(cfg_.kappa);
  const double s2 = std::sqrt(sigma2_sq / 2.0);
  const double s1 = std::sqrt(cfg_.variance_ratio * sigma2_sq / 2.0);

  NoiseDraw out;
  out.v.resize(K);
  out.impulse.assign(static_cast<std::size_t>(K), false);
  for (Eigen::Index k = 0; k < K; ++k) {
    // fixed draw order: background re/im, gate, impulse re/im
    const double bre = unit(rng_);
    const double bim = unit(rng_);
    const bool hit = gate(rng_);
    const double ire = unit(rng_);
    const double iim = unit(rng_);
    cplx v{s2 * bre, s2 * bim};
    if (hit) { v += cplx{s1 * ire, s1 * iim}; }
    out.v(k) = v;
    out.impulse[static_cast<std::size_t>(k)] = hit;
  }
  return out;
}

CVector ImpulsiveNoise::sample(Eigen::Index K, double sigma2_sq) { return sample_detailed(K, sigma2_sq).v; }

CVector sample_noise(Eigen::Index K, double sigma2_sq, const NoiseConfig &cfg)
{
  ImpulsiveNoise gen(cfg);
  return gen.sample(K, sigma2_sq);
}

} // namespace lnmusic
