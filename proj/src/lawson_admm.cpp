// SPDX-License-Identifier: Apache-2.0
#include "lnmusic/lawson_admm.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <vector>

namespace lnmusic {

void LawsonParams::validate() const
{
  auto check = [](bool ok, const char *what) {
    if (!ok) { throw ParameterError(std::string("lawson params: ") + what); }
  };
  check(p1 >= 0.0 && p1 <= 2.0, "p1 must lie in [0, 2]");
  check(p2 >= 0.0 && p2 <= 2.0, "p2 must lie in [0, 2]");
  check(lambda1 > 0.0 && lambda2 > 0.0, "lambda1 and lambda2 must be positive");
  check(lambda1_floor > 0.0, "lambda1_floor must be positive");
  check(lambda1_scale >= 0.0, "lambda1_scale must be non-negative");
  check(rho > 0.0, "rho must be positive");
  check(epsilon > 0.0, "epsilon must be positive");
  check(zeta >= 0.0, "zeta must be non-negative");
  check(eta > 0.0 && eta <= 1.0, "eta must lie in (0, 1]");
  check(max_iter >= 0, "max_iter must be non-negative");
}

double lawson_norm(const CVector &v, double lambda, double p)
{
  if (!(lambda > 0.0)) { throw ParameterError("lawson_norm: lambda must be positive"); }
  const double expo = (2.0 - p) / 2.0;
  const double l2 = lambda * lambda;
  double sum = 0.0;
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    const double r = std::norm(v(k));
    sum += expo == 0.0 ? r : r / std::pow(r + l2, expo);
  }
  return sum;
}

RVector weight_matrix(const CVector &v, double lambda, double p)
{
  if (!(lambda > 0.0)) { throw ParameterError("weight_matrix: lambda must be positive"); }
  const double expo = (4.0 - p) / 2.0;
  const double l2 = lambda * lambda;
  RVector h(v.size());
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    const double r = std::norm(v(k));
    h(k) = (p * r + 2.0 * l2) / std::pow(r + l2, expo);
  }
  return h;
}

SolverState SolverState::zeros(Eigen::Index K, Eigen::Index M, double lambda1)
{
  SolverState s;
  s.e = CVector::Zero(K);
  s.z = CVector::Zero(M);
  s.xi = CVector::Zero(K);
  s.lambda1_current = lambda1;
  return s;
}

LawsonAdmm::LawsonAdmm(const CMatrix &G, LawsonParams params)
    : G_(G), GH_(G.adjoint()), GHG_(GH_ * G), params_(params)
{
  params_.validate();
  if (G_.rows() < 1 || G_.cols() < 1) { throw ConfigError("lawson_admm: empty control matrix"); }
}

void LawsonAdmm::check_shapes(const SolverState &state, const CVector &y) const
{
  if (y.size() != G_.rows() || state.e.size() != G_.rows() || state.xi.size() != G_.rows() ||
      state.z.size() != G_.cols()) {
    throw ConfigError("lawson_admm: state / measurement shapes do not match the control matrix");
  }
}

void LawsonAdmm::step(SolverState &s, const CVector &y) const
{
  check_shapes(s, y);
  const auto &P = params_;
  const double eps = P.epsilon;
  const double zeta = P.zeta;

  // Weights are frozen at the previous iterates for the whole sweep.
  const RVector He = weight_matrix(s.e, s.lambda1_current, P.p1);
  const RVector Hz = P.hz_uses_p1 ? weight_matrix(s.z, s.lambda1_current, P.p1)
                                       : weight_matrix(s.z, P.lambda2, P.p2);

  const CVector u = y - G_ * s.z - s.xi / eps;
  CVector e(s.e.size());
  for (Eigen::Index k = 0; k < e.size(); ++k) {
    e(k) = (eps * u(k) + zeta * s.e(k)) / (He(k) + eps + zeta);
  }

  const CVector t = y - e - s.xi / eps;
  CMatrix normal = (eps + zeta) * GHG_;
  normal.diagonal() += P.rho * Hz.cast<cplx>();
  const CVector rhs = eps * (GH_ * t) + zeta * s.z;
  Eigen::LLT<CMatrix> llt(normal);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("lawson_admm: z-system is not positive definite at iteration " + std::to_string(s.iter));
  }
  CVector z = llt.solve(rhs);
  if (!z.allFinite()) {
    throw NumericalError("lawson_admm: non-finite z at iteration " + std::to_string(s.iter));
  }

  s.xi += eps * (e - y + G_ * z);
  s.e = std::move(e);
  s.z = std::move(z);
  if (P.lambda1_scale <= 0.0) { s.lambda1_current = std::max(P.eta * s.lambda1_current, P.lambda1_floor); }
  ++s.iter;
}

SolveResult LawsonAdmm::solve(const CVector &y, std::optional<SolverState> initial) const
{
  SolveResult out;
  out.state = initial ? std::move(*initial) : SolverState::zeros(G_.rows(), G_.cols(), params_.lambda1);
  check_shapes(out.state, y);
  if (params_.lambda1_scale > 0.0 && !initial) {
    const double scale = residual_noise_scale(y, G_);
    // an exactly consistent y leaves only rounding in the residual; fall back to the floor
    const double tiny = 1e-10 * y.norm() / std::sqrt(static_cast<double>(y.size()));
    out.state.lambda1_current = scale > tiny ? params_.lambda1_scale * scale : params_.lambda1_floor;
  }
  out.trace.reserve(static_cast<std::size_t>(params_.max_iter));
  while (out.state.iter < params_.max_iter) {
    step(out.state, y);
    IterationRecord rec;
    rec.iter = out.state.iter;
    rec.primal_residual = (out.state.e - y + G_ * out.state.z).norm();
    rec.lawson_e = lawson_norm(out.state.e, out.state.lambda1_current, params_.p1);
    rec.lawson_z = lawson_norm(out.state.z, params_.lambda2, params_.p2);
    out.trace.push_back(rec);
  }
  out.z = out.state.z;
  return out;
}

namespace {

double median_scale(std::vector<double> mag)
{
  const auto mid = mag.begin() + static_cast<std::ptrdiff_t>(mag.size() / 2);
  std::nth_element(mag.begin(), mid, mag.end());
  double med = *mid;
  if (mag.size() % 2 == 0) { med = 0.5 * (med + *std::max_element(mag.begin(), mid)); }
  return med / std::sqrt(std::log(2.0));
}

std::vector<double> magnitudes(const CVector &r)
{
  std::vector<double> mag(static_cast<std::size_t>(r.size()));
  for (Eigen::Index k = 0; k < r.size(); ++k) { mag[static_cast<std::size_t>(k)] = std::abs(r(k)); }
  return mag;
}

} // namespace

double residual_noise_scale(const CVector &y, const CMatrix &G)
{
  if (y.size() != G.rows()) { throw ConfigError("residual_noise_scale: measurement length does not match G"); }
  CVector r = y - G * CVector(G.colPivHouseholderQr().solve(y));
  const double first = median_scale(magnitudes(r));
  // One trimmed refit: rows far outside the first scale are dropped so that large impulses
  // do not leak into the remaining residuals through the projection.
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = 0; k < r.size(); ++k) {
    if (std::abs(r(k)) <= 3.0 * first) { keep.push_back(k); }
  }
  if (static_cast<Eigen::Index>(keep.size()) <= G.cols()) { return first; }
  CMatrix Gk(static_cast<Eigen::Index>(keep.size()), G.cols());
  CVector yk(Gk.rows());
  for (Eigen::Index i = 0; i < Gk.rows(); ++i) {
    Gk.row(i) = G.row(keep[static_cast<std::size_t>(i)]);
    yk(i) = y(keep[static_cast<std::size_t>(i)]);
  }
  r = y - G * CVector(Gk.colPivHouseholderQr().solve(yk));
  return median_scale(magnitudes(r));
}

SolverState admm_step(SolverState state, const CVector &y, const CMatrix &G, const LawsonParams &params)
{
  LawsonAdmm(G, params).step(state, y);
  return state;
}

SolveResult solve(const CVector &y, const CMatrix &G, const LawsonParams &params, std::optional<SolverState> initial)
{
  return LawsonAdmm(G, params).solve(y, std::move(initial));
}

void write_trace_csv(std::ostream &os, const std::vector<IterationRecord> &trace)
{
  os << "iter,primal_residual,lawson_e,lawson_z\n" << std::setprecision(10);
  for (const auto &r : trace) {
    os << r.iter << ',' << r.primal_residual << ',' << r.lawson_e << ',' << r.lawson_z << '\n';
  }
}

EpsilonTable::EpsilonTable(std::vector<std::pair<double, double>> knots) : knots_(std::move(knots))
{
  if (knots_.empty()) { throw ConfigError("epsilon table: no knots"); }
  std::sort(knots_.begin(), knots_.end());
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    if (!(knots_[i].second > 0.0)) { throw ConfigError("epsilon table: epsilon values must be positive"); }
    if (i > 0 && knots_[i].first == knots_[i - 1].first) { throw ConfigError("epsilon table: duplicate SNR knot"); }
  }
}

EpsilonTable EpsilonTable::defaults()
{
  // Output of `lnmusic scan-eps --plan data/epsilon_scan_plan.json --eps 10,30,100,300,1000,3000
  // --snr=-10,-5,0,5,10,15,20` (100 trials per cell, lambda1 held at twice the residual scale).
  // Between 0 and 20 dB the 100 and 300 columns differ by less than the Monte Carlo spread.
  return EpsilonTable({{-10.0, 1000.0}, {-5.0, 300.0}, {0.0, 100.0}, {5.0, 300.0}, {10.0, 300.0}, {15.0, 100.0},
                       {20.0, 300.0}});
}

double EpsilonTable::at(double snr_db) const
{
  if (knots_.empty()) { throw ConfigError("epsilon table: no knots"); }
  if (snr_db <= knots_.front().first) { return knots_.front().second; }
  if (snr_db >= knots_.back().first) { return knots_.back().second; }
  auto hi = std::upper_bound(knots_.begin(), knots_.end(), snr_db,
                             [](double s, const std::pair<double, double> &k) { return s < k.first; });
  auto lo = std::prev(hi);
  if (snr_db == lo->first) { return lo->second; }
  const double w = (snr_db - lo->first) / (hi->first - lo->first);
  return lo->second + w * (hi->second - lo->second);
}

double epsilon_for_snr(double snr_db, const EpsilonTable &table) { return table.at(snr_db); }

} // namespace lnmusic
