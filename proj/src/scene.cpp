// SPDX-License-Identifier: Apache-2.0
#include "lnmusic/scene.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

namespace lnmusic {

namespace {

void require(bool ok, const std::string &what)
{
  if (!ok) { throw ConfigError("scene: " + what); }
}

} // namespace

void SceneConfig::validate() const
{
  const auto n = theta.size();
  require(M >= 1, "M must be >= 1");
  require(K >= 1, "K must be >= 1");
  require(n >= 1, "at least one target is required");
  require(static_cast<int>(n) <= M, "N must not exceed M");
  require(d > 0.0, "element spacing d must be positive");
  require(d_ris_antenna > 0.0, "d_ris_antenna must be positive");
  require(gamma > 0.0, "gamma must be positive");
  require(angle_min < angle_max, "angle range is empty");
  require(d_target_ris.size() == n, "d_target_ris needs one entry per target");
  require(alpha.size() == n, "alpha needs one entry per target");
  require(s_amp.size() == n, "s_amp needs one entry per target");
  for (std::size_t i = 0; i < n; ++i) {
    require(d_target_ris[i] > 0.0, "target distances must be positive");
    require(theta[i] > angle_min && theta[i] < angle_max, "theta outside the configured angle range");
    for (std::size_t j = i + 1; j < n; ++j) { require(theta[i] != theta[j], "target angles must be distinct"); }
  }
}

RisControlMatrix RisControlMatrix::from_phases(const RMatrix &phases)
{
  CMatrix g(phases.rows(), phases.cols());
  for (Eigen::Index k = 0; k < phases.rows(); ++k) {
    for (Eigen::Index m = 0; m < phases.cols(); ++m) { g(k, m) = std::polar(1.0, phases(k, m)); }
  }
  return RisControlMatrix{std::move(g)};
}

bool RisControlMatrix::unit_modulus(double tol) const
{
  return (g_.array().abs() - 1.0).abs().maxCoeff() <= tol;
}

void RisControlMatrix::write(std::ostream &os) const
{
  os << "# lnmusic ris-control-matrix v1\n" << g_.rows() << ' ' << g_.cols() << '\n';
  os << std::setprecision(17);
  for (Eigen::Index k = 0; k < g_.rows(); ++k) {
    for (Eigen::Index m = 0; m < g_.cols(); ++m) { os << g_(k, m).real() << ' ' << g_(k, m).imag() << '\n'; }
  }
}

RisControlMatrix RisControlMatrix::read(std::istream &is)
{
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.front() != '#') { break; }
  }
  std::istringstream dims(line);
  Eigen::Index K = 0, M = 0;
  if (!(dims >> K >> M) || K < 1 || M < 1) { throw ConfigError("control matrix: bad dimension line"); }
  CMatrix g(K, M);
  for (Eigen::Index k = 0; k < K; ++k) {
    for (Eigen::Index m = 0; m < M; ++m) {
      double re = 0.0, im = 0.0;
      if (!(is >> re >> im)) { throw ConfigError("control matrix: truncated entry list"); }
      g(k, m) = {re, im};
    }
  }
  return RisControlMatrix{std::move(g)};
}

CVector steering_vector(double theta_deg, double varphi_deg, int L, double d)
{
  if (L < 1) { throw ConfigError("steering_vector: L must be >= 1"); }
  const double w = 2.0 * kPi * d * std::sin(deg2rad(theta_deg + varphi_deg));
  CVector a(L);
  a(0) = 1.0;
  for (int m = 1; m < L; ++m) { a(m) = std::polar(1.0, w * m); }
  return a;
}

CMatrix array_manifold(const SceneConfig &cfg, int L)
{
  CMatrix A(L, cfg.N());
  for (int n = 0; n < cfg.N(); ++n) { A.col(n) = steering_vector(cfg.theta[n], cfg.varphi, L, cfg.d); }
  return A;
}

CVector target_amplitudes(const SceneConfig &cfg)
{
  CVector x(cfg.N());
  for (int n = 0; n < cfg.N(); ++n) {
    x(n) = (cfg.gamma / cfg.d_ris_antenna) * (cfg.alpha[n] / cfg.d_target_ris[n]) * cfg.s_amp[n];
  }
  return x;
}

CleanSignal synthesize_clean(const SceneConfig &cfg, const RisControlMatrix &G)
{
  cfg.validate();
  if (G.slots() != cfg.K || G.elements() != cfg.M) {
    throw ConfigError("synthesize_clean: control matrix is " + std::to_string(G.slots()) + "x" +
                      std::to_string(G.elements()) + ", scene expects " + std::to_string(cfg.K) + "x" +
                      std::to_string(cfg.M));
  }
  CleanSignal out;
  out.z = array_manifold(cfg, cfg.M) * target_amplitudes(cfg);
  out.y0 = G.matrix() * out.z;
  return out;
}

RisControlMatrix random_control_matrix(int K, int M, Rng &rng)
{
  std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
  RMatrix phases(K, M);
  // row-major fill keeps the draw order independent of Eigen's storage order
  for (int k = 0; k < K; ++k) {
    for (int m = 0; m < M; ++m) { phases(k, m) = phase(rng); }
  }
  return RisControlMatrix::from_phases(phases);
}

void randomize_source_phases(SceneConfig &cfg, Rng &rng)
{
  std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
  cfg.s_amp.resize(cfg.theta.size());
  for (auto &s : cfg.s_amp) { s = std::polar(1.0, phase(rng)); }
}

} // namespace lnmusic
