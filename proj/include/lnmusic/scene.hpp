// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "lnmusic/random.hpp"
#include "lnmusic/types.hpp"

namespace lnmusic {

/// Geometry, targets and path-loss constants of one RIS-aided measurement scene.
///
/// Angles are in degrees, distances in meters, the element spacing in wavelengths.
/// Defaults reproduce the reference scene: 32 RIS elements, 128 slots, three targets
/// at -20, 0 and 25 degrees, 30 m target legs and a 3 m RIS-to-antenna leg.
struct SceneConfig {
  int M = 32;
  int K = 128;
  double d = 0.5;
  double varphi = 10.0;
  std::vector<double> theta{-20.0, 0.0, 25.0};
  std::vector<double> d_target_ris{30.0, 30.0, 30.0};
  double d_ris_antenna = 3.0;
  std::vector<double> alpha{1.0, 1.0, 1.0};
  double gamma = 1.0;
  std::vector<cplx> s_amp{1.0, 1.0, 1.0};
  double angle_min = -40.0;
  double angle_max = 40.0;

  int N() const { return static_cast<int>(theta.size()); }

  /// Throws ConfigError when any invariant is violated.
  void validate() const;
};

/// K x M RIS control matrix; entry (k, m) is the reflection coefficient of element m in slot k.
class RisControlMatrix {
public:
  RisControlMatrix() = default;
  explicit RisControlMatrix(CMatrix g) : g_(std::move(g)) {}

  /// Unit-amplitude matrix from a K x M table of phases in radians.
  static RisControlMatrix from_phases(const RMatrix &phases);

  const CMatrix &matrix() const { return g_; }
  Eigen::Index slots() const { return g_.rows(); }
  Eigen::Index elements() const { return g_.cols(); }

  bool unit_modulus(double tol = 1e-12) const;

  /// Plain-text form: a header line, "K M", then one "re im" pair per entry in row-major order,
  /// printed with 17 significant digits so a reload reproduces every bit.
  void write(std::ostream &os) const;
  static RisControlMatrix read(std::istream &is);

private:
  CMatrix g_;
};

struct CleanSignal {
  CVector z;  // RIS-incident signal A(theta) x, length M
  CVector y0; // noiseless antenna samples G z, length K
};

/// entry m = exp(j 2 pi m d sin(theta + varphi)), m = 0 .. L-1.
CVector steering_vector(double theta_deg, double varphi_deg, int L, double d);

/// L x N matrix whose n-th column is steering_vector(theta_n).
CMatrix array_manifold(const SceneConfig &cfg, int L);

/// x_n = (gamma / d_r) (alpha_n / d_{s,n}) s_n.
CVector target_amplitudes(const SceneConfig &cfg);

CleanSignal synthesize_clean(const SceneConfig &cfg, const RisControlMatrix &G);

/// I.i.d. uniform phases on [0, 2 pi), unit amplitude.
RisControlMatrix random_control_matrix(int K, int M, Rng &rng);

/// Replaces s_amp with unit-magnitude amplitudes carrying independent uniform phases.
void randomize_source_phases(SceneConfig &cfg, Rng &rng);

} // namespace lnmusic
