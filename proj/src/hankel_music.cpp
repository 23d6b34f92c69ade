// SPDX-License-Identifier: Apache-2.0
#include "lnmusic/hankel_music.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <string>

#include "lnmusic/scene.hpp"

namespace lnmusic {

int HankelConfig::rows_for(Eigen::Index M) const { return L > 0 ? L : static_cast<int>(M / 2); }

std::vector<double> HankelConfig::grid() const
{
  if (!(grid_step > 0.0)) { throw ConfigError("music: grid_step must be positive"); }
  if (!(grid_stop >= grid_start)) { throw ConfigError("music: grid_stop must not precede grid_start"); }
  // integer stepping avoids accumulating rounding error over thousands of points
  const auto count = static_cast<std::size_t>(std::floor((grid_stop - grid_start) / grid_step + 1e-9)) + 1;
  std::vector<double> g(count);
  for (std::size_t i = 0; i < count; ++i) { g[i] = grid_start + static_cast<double>(i) * grid_step; }
  return g;
}

void HankelConfig::validate(Eigen::Index M) const
{
  const int rows = rows_for(M);
  if (N < 1) { throw ConfigError("music: N must be >= 1"); }
  if (!(rows >= N && rows < M - N + 1)) {
    throw ConfigError("music: Hankel rows L=" + std::to_string(rows) + " violate N <= L < M - N + 1 (M=" +
                      std::to_string(M) + ", N=" + std::to_string(N) + ")");
  }
  if (rows == N) { throw ConfigError("music: L must exceed N to leave a noise subspace"); }
  if (!(spectral_ceiling > 0.0)) { throw ConfigError("music: spectral_ceiling must be positive"); }
  (void)grid();
}

CMatrix hankel(const CVector &z, int L, int N)
{
  const auto M = z.size();
  if (!(L >= N && L < M - N + 1)) {
    throw ConfigError("hankel: L=" + std::to_string(L) + " outside [N, M - N + 1) for M=" + std::to_string(M) +
                      ", N=" + std::to_string(N));
  }
  const Eigen::Index cols = M - L + 1;
  CMatrix H(L, cols);
  for (Eigen::Index i = 0; i < L; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) { H(i, j) = z(i + j); }
  }
  return H;
}

SubspaceSplit split_subspaces(const CMatrix &H, int N)
{
  const auto L = H.rows();
  if (!(N >= 1 && L > N)) { throw ConfigError("noise_subspace: requires L > N >= 1"); }
  Eigen::JacobiSVD<CMatrix> svd(H, Eigen::ComputeFullU);
  if (svd.info() != Eigen::Success) { throw NumericalError("noise_subspace: SVD did not converge"); }
  SubspaceSplit out;
  out.signal = svd.matrixU().leftCols(N);
  out.noise = svd.matrixU().rightCols(L - N);
  out.singular_values = svd.singularValues();
  return out;
}

CMatrix noise_subspace(const CMatrix &H, int N) { return split_subspaces(H, N).noise; }

std::vector<std::size_t> detect_peak_indices(const std::vector<double> &values, int N)
{
  const std::size_t n = values.size();
  std::vector<std::size_t> maxima;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (!(values[i] > values[i - 1])) { continue; }
    std::size_t j = i;
    while (j + 1 < n && values[j + 1] == values[i]) { ++j; }
    if (j + 1 < n && values[j + 1] < values[i]) { maxima.push_back(i); }
    i = j;
  }
  if (static_cast<int>(maxima.size()) < N) {
    throw EstimationFailure("detect_peaks: found " + std::to_string(maxima.size()) + " local maxima, need " +
                            std::to_string(N));
  }
  std::stable_sort(maxima.begin(), maxima.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  maxima.resize(static_cast<std::size_t>(N));
  std::sort(maxima.begin(), maxima.end());
  return maxima;
}

std::vector<double> detect_peaks(const std::vector<double> &angles, const std::vector<double> &values, int N)
{
  if (angles.size() != values.size()) { throw ConfigError("detect_peaks: angle/value length mismatch"); }
  std::vector<double> out;
  for (auto i : detect_peak_indices(values, N)) { out.push_back(angles[i]); }
  return out;
}

SpatialSpectrum spectrum(const CMatrix &U2, const HankelConfig &cfg, double varphi_deg, double d)
{
  const auto L = U2.rows();
  SpatialSpectrum out;
  out.angles = cfg.grid();
  if (out.angles.empty()) { throw ConfigError("spectrum: empty grid"); }
  const auto P = static_cast<Eigen::Index>(out.angles.size());

  CMatrix A(L, P);
  for (Eigen::Index p = 0; p < P; ++p) {
    A.col(p) = steering_vector(out.angles[static_cast<std::size_t>(p)], varphi_deg, static_cast<int>(L), d);
  }
  const CMatrix proj = A.adjoint() * U2; // P x (L - N)

  out.values.resize(static_cast<std::size_t>(P));
  for (Eigen::Index p = 0; p < P; ++p) {
    const double num = A.col(p).squaredNorm();
    const double den = proj.row(p).squaredNorm();
    double v = den > 0.0 ? num / den : cfg.spectral_ceiling;
    if (v >= cfg.spectral_ceiling) {
      v = cfg.spectral_ceiling;
      out.ceiling_hit = true;
    }
    out.values[static_cast<std::size_t>(p)] = v;
  }

  try {
    out.peaks = detect_peaks(out.angles, out.values, cfg.N);
  } catch (const EstimationFailure &) {
    out.peaks.clear();
  }
  return out;
}

SpatialSpectrum estimate_doas(const CVector &z, const HankelConfig &cfg, double varphi_deg, double d)
{
  cfg.validate(z.size());
  const int L = cfg.rows_for(z.size());
  const CMatrix U2 = noise_subspace(hankel(z, L, cfg.N), cfg.N);
  SpatialSpectrum s = spectrum(U2, cfg, varphi_deg, d);
  if (static_cast<int>(s.peaks.size()) < cfg.N) {
    throw EstimationFailure("music: spectrum has fewer than " + std::to_string(cfg.N) + " peaks");
  }
  return s;
}

void write_spectrum_csv(std::ostream &os, const SpatialSpectrum &s)
{
  os << "angle_deg,value\n" << std::setprecision(12);
  for (std::size_t i = 0; i < s.angles.size(); ++i) { os << s.angles[i] << ',' << s.values[i] << '\n'; }
}

} // namespace lnmusic
