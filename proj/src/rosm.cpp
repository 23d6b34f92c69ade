// SPDX-License-Identifier: Apache-2.0
#include "lnmusic/rosm.hpp"

#include <cmath>

namespace lnmusic {

namespace {

// exp(j 2 pi l / levels), exact on the axes so 1- and 2-bit tables stay real/imaginary.
cplx quantized_phasor(int l, int levels)
{
  if ((4 * l) % levels == 0) {
    switch ((4 * l / levels) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
    }
  }
  return std::polar(1.0, 2.0 * kPi * l / levels);
}

} // namespace

void RosmConfig::validate() const
{
  if (T < 1) { throw ConfigError("rosm: T must be >= 1"); }
  if (phase_bits < 0 || phase_bits > 16) { throw ConfigError("rosm: phase_bits must lie in [0, 16]"); }
}

RisControlMatrix rosm_candidate(const RosmConfig &cfg, int K, int M, int t)
{
  cfg.validate();
  if (t < 0 || t >= cfg.T) { throw ConfigError("rosm: candidate index out of range"); }
  Rng rng = make_rng(cfg.seed, Stream::RosmCandidate, static_cast<std::uint64_t>(t));
  if (cfg.phase_bits == 0) { return random_control_matrix(K, M, rng); }

  const int levels = 1 << cfg.phase_bits;
  std::uniform_int_distribution<int> level(0, levels - 1);
  CMatrix g(K, M);
  for (int k = 0; k < K; ++k) {
    for (int m = 0; m < M; ++m) { g(k, m) = quantized_phasor(level(rng), levels); }
  }
  return RisControlMatrix{std::move(g)};
}

double srp(const CVector &y)
{
  if (y.size() < 1) { throw ConfigError("srp: empty measurement"); }
  return y.squaredNorm() / static_cast<double>(y.size());
}

RosmResult rosm_optimize(const CVector &z, int K, const RosmConfig &cfg, const NoiseConfig &noise)
{
  cfg.validate();
  const int M = static_cast<int>(z.size());
  const double sigma2 = cfg.noisy_probe ? calibrate_sigma2(z, noise.snr_db) : 0.0;

  RosmResult out;
  out.srp.reserve(static_cast<std::size_t>(cfg.T));
  double best = -1.0;
  for (int t = 0; t < cfg.T; ++t) {
    RisControlMatrix G = rosm_candidate(cfg, K, M, t);
    CVector y = G.matrix() * z;
    if (cfg.noisy_probe) {
      ImpulsiveNoise probe(noise, make_rng(noise.seed, Stream::RosmProbeNoise, static_cast<std::uint64_t>(t)));
      y += probe.sample(K, sigma2);
    }
    const double power = srp(y);
    out.srp.push_back(power);
    if (power > best) {
      best = power;
      out.index = t;
      out.G = std::move(G);
    }
  }
  return out;
}

RosmResult rosm_optimize(const SceneConfig &scene, const RosmConfig &cfg, const NoiseConfig &noise)
{
  scene.validate();
  const CVector z = array_manifold(scene, scene.M) * target_amplitudes(scene);
  return rosm_optimize(z, scene.K, cfg, noise);
}

} // namespace lnmusic
