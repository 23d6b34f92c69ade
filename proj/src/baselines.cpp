// SPDX-License-Identifier: Apache-2.0
#include "lnmusic/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lnmusic/scene.hpp"

namespace lnmusic {

GridDictionary GridDictionary::build(const CMatrix &G, const std::vector<double> &angles, double varphi_deg, double d)
{
  if (angles.empty()) { throw ConfigError("dictionary: empty angle grid"); }
  const auto M = G.cols();
  const auto P = static_cast<Eigen::Index>(angles.size());
  CMatrix A(M, P);
  for (Eigen::Index p = 0; p < P; ++p) {
    A.col(p) = steering_vector(angles[static_cast<std::size_t>(p)], varphi_deg, static_cast<int>(M), d);
  }
  GridDictionary dict;
  dict.angles = angles;
  dict.D.noalias() = G * A;
  dict.scale = dict.D.colwise().norm().transpose();
  for (Eigen::Index p = 0; p < P; ++p) {
    if (dict.scale(p) > 0.0) { dict.D.col(p) /= dict.scale(p); }
  }
  return dict;
}

OmpResult omp(const CVector &y, const GridDictionary &dict, int N)
{
  const auto P = dict.D.cols();
  if (N < 1 || N > P) { throw ConfigError("omp: N must lie in [1, P]"); }
  if (y.size() != dict.D.rows()) { throw ConfigError("omp: measurement length does not match the dictionary"); }

  OmpResult out;
  const double ynorm = y.norm();
  out.degenerate = !(ynorm > 0.0);
  out.residual_norms.push_back(ynorm);

  std::vector<bool> used(static_cast<std::size_t>(P), false);
  CVector r = y;
  CMatrix sub(y.size(), 0);
  for (int step = 0; step < N; ++step) {
    const RVector corr = (dict.D.adjoint() * r).cwiseAbs();
    Eigen::Index best = -1;
    for (Eigen::Index p = 0; p < P; ++p) {
      if (used[static_cast<std::size_t>(p)]) { continue; }
      if (best < 0 || corr(p) > corr(best)) { best = p; }
    }
    used[static_cast<std::size_t>(best)] = true;
    out.support.push_back(best);

    sub.conservativeResize(Eigen::NoChange, sub.cols() + 1);
    sub.col(sub.cols() - 1) = dict.D.col(best);
    Eigen::ColPivHouseholderQR<CMatrix> qr(sub);
    if (qr.rank() < sub.cols()) {
      throw NumericalError("omp: selected sub-dictionary is rank deficient at step " + std::to_string(step + 1));
    }
    const CVector coef = qr.solve(y);
    r = y - sub * coef;
    out.residual_norms.push_back(r.norm());
  }

  for (auto p : out.support) { out.angles.push_back(dict.angles[static_cast<std::size_t>(p)]); }
  std::sort(out.angles.begin(), out.angles.end());
  return out;
}

void LpAdmConfig::validate() const
{
  if (!(p > 0.0 && p <= 2.0)) { throw ParameterError("lp_adm: p must lie in (0, 2]"); }
  if (!(rho >= 0.0)) { throw ParameterError("lp_adm: rho must be non-negative"); }
  if (!(delta > 0.0)) { throw ParameterError("lp_adm: delta must be positive"); }
  if (!(step0 > 0.0)) { throw ParameterError("lp_adm: step size must be positive"); }
  if (!(backtrack > 0.0 && backtrack < 1.0)) { throw ParameterError("lp_adm: backtrack factor must lie in (0, 1)"); }
  if (!(step_growth >= 1.0)) { throw ParameterError("lp_adm: step_growth must be >= 1"); }
  if (max_iter < 0) { throw ParameterError("lp_adm: max_iter must be non-negative"); }
}

namespace {

double smooth_part(const CVector &r, double p, double delta)
{
  const double d2 = delta * delta;
  double f = 0.0;
  for (Eigen::Index k = 0; k < r.size(); ++k) { f += std::pow(std::norm(r(k)) + d2, p / 2.0); }
  return f;
}

CVector soft_threshold(const CVector &v, double tau)
{
  CVector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v(i));
    out(i) = mag > tau ? v(i) * (1.0 - tau / mag) : cplx{0.0, 0.0};
  }
  return out;
}

} // namespace

double lp_adm_objective(const CVector &y, const CMatrix &G, const CVector &z, const LpAdmConfig &cfg)
{
  return smooth_part(y - G * z, cfg.p, cfg.delta) + cfg.rho * z.cwiseAbs().sum();
}

LpAdmResult lp_adm(const CVector &y, const CMatrix &G, const LpAdmConfig &cfg)
{
  cfg.validate();
  if (y.size() != G.rows()) { throw ConfigError("lp_adm: measurement length does not match G"); }
  const double d2 = cfg.delta * cfg.delta;

  LpAdmResult out;
  CVector z = CVector::Zero(G.cols());
  CVector r = y;
  double f = smooth_part(r, cfg.p, cfg.delta);
  out.objective.push_back(f);
  double t = cfg.step0;

  for (int it = 0; it < cfg.max_iter; ++it) {
    // real gradient of the smoothed residual term, packed as a complex vector
    CVector w(r.size());
    for (Eigen::Index k = 0; k < r.size(); ++k) { w(k) = std::pow(std::norm(r(k)) + d2, cfg.p / 2.0 - 1.0) * r(k); }
    const CVector grad = -cfg.p * (G.adjoint() * w);

    t *= cfg.step_growth;
    CVector z_next;
    CVector r_next;
    double f_next = 0.0;
    bool accepted = false;
    for (int bt = 0; bt < 200; ++bt) {
      z_next = soft_threshold(z - t * grad, t * cfg.rho);
      const CVector dz = z_next - z;
      r_next = y - G * z_next;
      f_next = smooth_part(r_next, cfg.p, cfg.delta);
      const double model = f + grad.dot(dz).real() + dz.squaredNorm() / (2.0 * t);
      if (f_next <= model) {
        accepted = true;
        break;
      }
      t *= cfg.backtrack;
    }
    if (!accepted) { break; }
    z = std::move(z_next);
    r = std::move(r_next);
    f = f_next;
    out.objective.push_back(f + cfg.rho * z.cwiseAbs().sum());
  }
  out.z = std::move(z);
  return out;
}

} // namespace lnmusic
