// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "lnmusic/scene.hpp"
#include "lnmusic/types.hpp"

namespace lnmusic {

/// Parameters of the dual-Lawson-norm recovery
///   min ||e||_{La1} + rho ||z||_{La2}  s.t.  e = y - G z
/// solved by Bregman ADMM.
struct LawsonParams {
  double p1 = 0.4;
  double p2 = 1.0;
  double lambda1 = 0.3;
  double lambda2 = 1e-3;
  double rho = 0.1;
  double epsilon = 30.0;
  double zeta = 1e-2;
  double eta = 0.95;
  double lambda1_floor = 0.01;
  // When positive, lambda1 is held at lambda1_scale * sigma_hat for the whole solve, where
  // sigma_hat is a median-based noise scale of the least-squares residual. 0 keeps the
  // eta annealing schedule.
  double lambda1_scale = 0.0;
  int max_iter = 40;
  // Evaluate the z-weights with (p1, current lambda1) instead of (p2, lambda2).
  bool hz_uses_p1 = false;

  void validate() const;
};

/// Sum_k |v_k|^2 / (|v_k|^2 + lambda^2)^((2 - p) / 2).
double lawson_norm(const CVector &v, double lambda, double p);

/// Diagonal of H with h_k = (p |v_k|^2 + 2 lambda^2) / (|v_k|^2 + lambda^2)^((4 - p) / 2),
/// so that the Wirtinger gradient of lawson_norm is H v / 2.
RVector weight_matrix(const CVector &v, double lambda, double p);

struct SolverState {
  CVector e;
  CVector z;
  CVector xi;
  int iter = 0;
  double lambda1_current = 0.0;

  /// Zero iterates sized for K slots and M elements.
  static SolverState zeros(Eigen::Index K, Eigen::Index M, double lambda1);
};

struct IterationRecord {
  int iter = 0;
  double primal_residual = 0.0; // ||e - y + G z||
  double lawson_e = 0.0;
  double lawson_z = 0.0;
};

struct SolveResult {
  CVector z;
  SolverState state;
  std::vector<IterationRecord> trace;
};

/// Bregman ADMM for one (y, G) pair. Caches G^H and G^H G across iterations.
class LawsonAdmm {
public:
  LawsonAdmm(const CMatrix &G, LawsonParams params);

  const LawsonParams &params() const { return params_; }

  /// One outer iteration: e-update, z-update, dual update, lambda1 annealing.
  void step(SolverState &state, const CVector &y) const;

  SolveResult solve(const CVector &y, std::optional<SolverState> initial = std::nullopt) const;

private:
  void check_shapes(const SolverState &state, const CVector &y) const;

  CMatrix G_;
  CMatrix GH_;
  CMatrix GHG_;
  LawsonParams params_;
};

/// Robust background-noise scale of y - G z_ls: median |r| / sqrt(ln 2), which equals sigma for
/// circular Gaussian residuals of variance sigma^2.
double residual_noise_scale(const CVector &y, const CMatrix &G);

/// Free-function form of LawsonAdmm::step; returns the advanced state.
SolverState admm_step(SolverState state, const CVector &y, const CMatrix &G, const LawsonParams &params);

SolveResult solve(const CVector &y, const CMatrix &G, const LawsonParams &params,
                  std::optional<SolverState> initial = std::nullopt);

/// CSV with header iter,primal_residual,lawson_e,lawson_z.
void write_trace_csv(std::ostream &os, const std::vector<IterationRecord> &trace);

/// Piecewise-linear map from SNR (dB) to the ADMM penalty epsilon, clamped at the ends.
class EpsilonTable {
public:
  EpsilonTable() = default;
  /// Knots (snr_db, epsilon); sorted on construction. Throws ConfigError if empty or
  /// if two knots share an SNR.
  explicit EpsilonTable(std::vector<std::pair<double, double>> knots);

  /// Table obtained by the shipped epsilon scan of the reference scene.
  static EpsilonTable defaults();

  double at(double snr_db) const;
  const std::vector<std::pair<double, double>> &knots() const { return knots_; }
  bool empty() const { return knots_.empty(); }

private:
  std::vector<std::pair<double, double>> knots_;
};

double epsilon_for_snr(double snr_db, const EpsilonTable &table);

} // namespace lnmusic
