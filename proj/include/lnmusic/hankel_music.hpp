// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <vector>

#include "lnmusic/types.hpp"

namespace lnmusic {

/// Single-snapshot Hankel MUSIC settings. L = 0 selects floor(M / 2) at run time.
struct HankelConfig {
  int L = 0;
  double grid_start = -40.0;
  double grid_stop = 40.0;
  double grid_step = 0.01;
  int N = 3;
  double spectral_ceiling = 1e15;

  /// Hankel row count actually used for a snapshot of length M.
  int rows_for(Eigen::Index M) const;
  /// Grid angles in degrees, grid_start + i * grid_step up to grid_stop inclusive.
  std::vector<double> grid() const;
  void validate(Eigen::Index M) const;
};

struct SpatialSpectrum {
  std::vector<double> angles;
  std::vector<double> values;
  std::vector<double> peaks; // ascending
  bool ceiling_hit = false;
};

struct SubspaceSplit {
  CMatrix signal; // L x N
  CMatrix noise;  // L x (L - N)
  RVector singular_values;
};

/// L x (M - L + 1) matrix with entry (i, j) = z_{i + j}. Requires N <= L < M - N + 1.
CMatrix hankel(const CVector &z, int L, int N);

SubspaceSplit split_subspaces(const CMatrix &H, int N);

/// Left singular vectors of the L - N smallest singular values.
CMatrix noise_subspace(const CMatrix &H, int N);

/// Upsilon(theta) = ||a(theta)||^2 / ||a(theta)^H U2||^2 over the configured grid, then peak picking.
/// Peaks are left empty (no throw) if fewer than N local maxima exist; use detect_peaks to enforce.
SpatialSpectrum spectrum(const CMatrix &U2, const HankelConfig &cfg, double varphi_deg, double d);

/// Indices of the N largest interior local maxima (plateaus resolve to their leftmost sample,
/// equal heights favour the lower index). Returned in ascending index order.
/// Throws EstimationFailure when fewer than N maxima exist.
std::vector<std::size_t> detect_peak_indices(const std::vector<double> &values, int N);

std::vector<double> detect_peaks(const std::vector<double> &angles, const std::vector<double> &values, int N);

/// Hankel -> SVD -> spectrum -> peaks. Throws EstimationFailure when peaks are missing.
SpatialSpectrum estimate_doas(const CVector &z, const HankelConfig &cfg, double varphi_deg, double d);

/// Two-column CSV angle_deg,value.
void write_spectrum_csv(std::ostream &os, const SpatialSpectrum &s);

} // namespace lnmusic
