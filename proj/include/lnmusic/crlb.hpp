// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <vector>

#include "lnmusic/noise.hpp"
#include "lnmusic/scene.hpp"

namespace lnmusic {

/// Fisher information over the real parameter vector [theta (rad); Re x; Im x].
/// F11 is N x N, F12 is N x 2N, F21 = F12^T, F22 is 2N x 2N.
struct FisherBlocks {
  RMatrix F11;
  RMatrix F12;
  RMatrix F21;
  RMatrix F22;

  RMatrix full() const;
};

/// B = d(A(theta) x)/d theta: column n = x_n * da(theta_n)/dtheta_n (theta in radians).
CMatrix manifold_derivative(const SceneConfig &scene, int L);

/// Fisher blocks for y = G A(theta) x + v with v treated as white Gaussian of the given variance.
FisherBlocks fisher(const SceneConfig &scene, const RisControlMatrix &G, double noise_variance);

/// Same, with the variance kappa sigma1^2 + sigma2^2 taken from the noise model and the
/// SNR calibration of the scene's z.
FisherBlocks fisher(const SceneConfig &scene, const RisControlMatrix &G, const NoiseConfig &noise);

struct CrlbResult {
  RVector variance_rad2; // per-target bound, rad^2
  double rmse_deg = 0.0; // sqrt(mean(variance)) in degrees
};

/// diag((F11 - F12 F22^-1 F21)^-1) via the Schur complement.
CrlbResult crlb_theta(const FisherBlocks &blocks);

/// Theta block of the full inverse; used as the independent route for the Schur form.
RVector crlb_theta_direct(const FisherBlocks &blocks);

/// -(y - mu)^H (y - mu) / var - K ln(pi var), mu = G A(theta) x; theta in radians.
double log_likelihood(const CVector &y, const CMatrix &G, const RVector &theta_rad, const CVector &x,
                      double varphi_deg, double d, double noise_variance);

/// Analytic gradient of log_likelihood with respect to [theta; Re x; Im x].
RVector score(const CVector &y, const CMatrix &G, const RVector &theta_rad, const CVector &x,
              double varphi_deg, double d, double noise_variance);

struct CrlbRow {
  double snr_db = 0.0;
  double rmse_deg = 0.0;
};

std::vector<CrlbRow> crlb_vs_snr(const SceneConfig &scene, const RisControlMatrix &G, const NoiseConfig &noise,
                                 const std::vector<double> &snr_db);

void write_crlb_csv(std::ostream &os, const std::vector<CrlbRow> &rows);

} // namespace lnmusic
