// SPDX-License-Identifier: Apache-2.0
#include "lnmusic/crlb.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

namespace lnmusic {

namespace {

// Steering matrix and its angular derivative for angles given in radians.
void manifold_rad(const RVector &theta_rad, double varphi_deg, Eigen::Index L, double d, CMatrix &A, CMatrix *dA)
{
  const auto N = theta_rad.size();
  const double phi = deg2rad(varphi_deg);
  A.resize(L, N);
  if (dA) { dA->resize(L, N); }
  for (Eigen::Index n = 0; n < N; ++n) {
    const double s = std::sin(theta_rad(n) + phi);
    const double c = std::cos(theta_rad(n) + phi);
    for (Eigen::Index m = 0; m < L; ++m) {
      const double k = 2.0 * kPi * static_cast<double>(m) * d;
      A(m, n) = std::polar(1.0, k * s);
      if (dA) { (*dA)(m, n) = cplx{0.0, k * c} * A(m, n); }
    }
  }
}

RVector theta_radians(const SceneConfig &scene)
{
  RVector t(scene.N());
  for (int n = 0; n < scene.N(); ++n) { t(n) = deg2rad(scene.theta[n]); }
  return t;
}

} // namespace

RMatrix FisherBlocks::full() const
{
  const auto n = F11.rows();
  const auto m = F22.rows();
  RMatrix F(n + m, n + m);
  F.topLeftCorner(n, n) = F11;
  F.topRightCorner(n, m) = F12;
  F.bottomLeftCorner(m, n) = F21;
  F.bottomRightCorner(m, m) = F22;
  return F;
}

CMatrix manifold_derivative(const SceneConfig &scene, int L)
{
  CMatrix A, dA;
  manifold_rad(theta_radians(scene), scene.varphi, L, scene.d, A, &dA);
  return dA * target_amplitudes(scene).asDiagonal();
}

FisherBlocks fisher(const SceneConfig &scene, const RisControlMatrix &G, double noise_variance)
{
  if (!(noise_variance > 0.0)) { throw ParameterError("fisher: noise variance must be positive"); }
  scene.validate();
  const CMatrix C = G.matrix() * manifold_derivative(scene, scene.M);   // K x N
  const CMatrix Ga = G.matrix() * array_manifold(scene, scene.M);       // K x N
  const double w = 2.0 / noise_variance;
  const auto N = scene.N();

  const CMatrix CC = C.adjoint() * C;
  const CMatrix CA = C.adjoint() * Ga;
  const CMatrix AA = Ga.adjoint() * Ga;

  FisherBlocks f;
  f.F11 = w * CC.real();
  f.F12.resize(N, 2 * N);
  f.F12 << w * CA.real(), -w * CA.imag();
  f.F21 = f.F12.transpose();
  f.F22.resize(2 * N, 2 * N);
  f.F22 << w * AA.real(), -w * AA.imag(), w * AA.imag(), w * AA.real();
  return f;
}

FisherBlocks fisher(const SceneConfig &scene, const RisControlMatrix &G, const NoiseConfig &noise)
{
  const CVector z = array_manifold(scene, scene.M) * target_amplitudes(scene);
  return fisher(scene, G, noise.total_variance(calibrate_sigma2(z, noise.snr_db)));
}

CrlbResult crlb_theta(const FisherBlocks &b)
{
  Eigen::FullPivLU<RMatrix> lu22(b.F22);
  if (!lu22.isInvertible()) { throw NumericalError("crlb: amplitude block F22 is singular"); }
  const RMatrix schur = b.F11 - b.F12 * lu22.solve(b.F21);
  Eigen::FullPivLU<RMatrix> lus(schur);
  if (!lus.isInvertible()) { throw NumericalError("crlb: Schur complement F11 - F12 F22^-1 F21 is singular"); }
  CrlbResult out;
  out.variance_rad2 = lus.inverse().diagonal();
  out.rmse_deg = rad2deg(std::sqrt(out.variance_rad2.mean()));
  return out;
}

RVector crlb_theta_direct(const FisherBlocks &b)
{
  Eigen::FullPivLU<RMatrix> lu(b.full());
  if (!lu.isInvertible()) { throw NumericalError("crlb: Fisher matrix is singular"); }
  return lu.inverse().diagonal().head(b.F11.rows());
}

double log_likelihood(const CVector &y, const CMatrix &G, const RVector &theta_rad, const CVector &x,
                      double varphi_deg, double d, double noise_variance)
{
  CMatrix A;
  manifold_rad(theta_rad, varphi_deg, G.cols(), d, A, nullptr);
  const CVector r = y - G * (A * x);
  return -r.squaredNorm() / noise_variance - static_cast<double>(y.size()) * std::log(kPi * noise_variance);
}

RVector score(const CVector &y, const CMatrix &G, const RVector &theta_rad, const CVector &x, double varphi_deg,
              double d, double noise_variance)
{
  CMatrix A, dA;
  manifold_rad(theta_rad, varphi_deg, G.cols(), d, A, &dA);
  const CVector r = y - G * (A * x);
  const Eigen::RowVectorXcd rG = r.adjoint() * G;
  const auto N = theta_rad.size();
  const double w = 2.0 / noise_variance;
  RVector g(3 * N);
  for (Eigen::Index n = 0; n < N; ++n) {
    const cplx db = (rG * dA.col(n)).value() * x(n);
    const cplx da = (rG * A.col(n)).value();
    g(n) = w * db.real();
    g(N + n) = w * da.real();
    g(2 * N + n) = -w * da.imag();
  }
  return g;
}

std::vector<CrlbRow> crlb_vs_snr(const SceneConfig &scene, const RisControlMatrix &G, const NoiseConfig &noise,
                                 const std::vector<double> &snr_db)
{
  std::vector<CrlbRow> rows;
  NoiseConfig nc = noise;
  for (double snr : snr_db) {
    nc.snr_db = snr;
    rows.push_back({snr, crlb_theta(fisher(scene, G, nc)).rmse_deg});
  }
  return rows;
}

void write_crlb_csv(std::ostream &os, const std::vector<CrlbRow> &rows)
{
  os << "snr_db,crlb_deg\n" << std::setprecision(10);
  for (const auto &r : rows) { os << r.snr_db << ',' << r.rmse_deg << '\n'; }
}

} // namespace lnmusic
