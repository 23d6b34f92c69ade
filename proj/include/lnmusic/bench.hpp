// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lnmusic/baselines.hpp"
#include "lnmusic/hankel_music.hpp"
#include "lnmusic/lawson_admm.hpp"
#include "lnmusic/noise.hpp"
#include "lnmusic/rosm.hpp"
#include "lnmusic/scene.hpp"

namespace lnmusic {

enum class Method { LnMusic, LpAdm, Omp };

struct MethodSpec {
  Method method = Method::LnMusic;
  bool rosm = false;

  /// "ln_music", "ln_music+rosm", "lp_adm", "omp", ...
  std::string label() const;
  static MethodSpec parse(std::string_view label);
};

/// Trials whose per-trial RMSE exceeds this many degrees count as failures.
inline constexpr double kFailureThresholdDeg = 5.0;

/// Solver settings the benchmark starts from: the library defaults with lambda1 held at
/// twice the residual noise scale.
LawsonParams default_bench_solver();

struct ExperimentPlan {
  SceneConfig scene;
  NoiseConfig noise;
  LawsonParams solver = default_bench_solver();
  bool epsilon_from_table = true;
  EpsilonTable epsilon_table = EpsilonTable::defaults();
  RosmConfig rosm;
  HankelConfig music;
  LpAdmConfig lp_adm;

  // snr_db, M, K, d_ris_antenna, epsilon, T, rho, zeta, kappa, eta, L
  std::string sweep_variable = "snr_db";
  std::vector<double> sweep_values{10.0};
  int n_mc = 100;
  std::uint64_t base_seed = 0;
  std::vector<MethodSpec> methods{MethodSpec{Method::LnMusic, true}};
  int workers = 1;
  bool noiseless = false;
  bool randomize_source_phases = true;

  void validate() const;
  /// Copy with the sweep variable set to value.
  ExperimentPlan at(double value) const;
};

ExperimentPlan parse_plan(std::string_view json_text);
ExperimentPlan load_plan(const std::filesystem::path &path);
std::string plan_to_json(const ExperimentPlan &plan);

/// Everything one Monte Carlo trial needs; shared by every method in that trial.
struct TrialData {
  std::uint64_t seed = 0;
  SceneConfig scene;
  CVector z;
  CVector v;
  double sigma2_sq = 0.0;
  RisControlMatrix G_random;
  std::optional<RisControlMatrix> G_rosm;
  CVector y_random;
  CVector y_rosm;

  const RisControlMatrix &control(bool rosm) const { return rosm ? *G_rosm : G_random; }
  const CVector &measurement(bool rosm) const { return rosm ? y_rosm : y_random; }
};

/// plan must already be specialised to one sweep value (see ExperimentPlan::at).
TrialData make_trial(const ExperimentPlan &plan, int trial_index);

double epsilon_for_plan(const ExperimentPlan &plan);

struct MethodOutcome {
  std::vector<double> angles; // empty when estimation failed to produce N angles
  std::string failure;
  SpatialSpectrum spectrum;   // filled for the MUSIC-based methods
};

MethodOutcome run_method(const ExperimentPlan &plan, const TrialData &trial, const MethodSpec &method);

struct TrialRow {
  std::string method;
  double sweep_value = 0.0;
  int trial = 0;
  std::uint64_t seed = 0;
  std::vector<double> estimate;
  std::vector<double> truth;
  double error_deg = 0.0; // per-trial RMSE; NaN without an estimate
  bool success = false;
  double srp = 0.0;
  double crlb_deg = 0.0;
};

struct AggregateRow {
  std::string method;
  double sweep_value = 0.0;
  int n_trials = 0;
  int n_estimated = 0;
  int n_success = 0;
  double rmse = 0.0;     // over successful trials
  double rmse_all = 0.0; // over every trial that produced N angles, failures included
  double recovery_rate = 0.0;
  double mean_srp = 0.0;
  double crlb_deg = 0.0;
};

struct ExperimentReport {
  std::vector<TrialRow> rows;
  std::vector<AggregateRow> aggregates;

  const AggregateRow &find(const std::string &method, double sweep_value) const;
};

/// sqrt(sum ||est - truth||^2 / (N * trials)); both sides sorted ascending before pairing.
double rmse(const std::vector<std::vector<double>> &estimates, const std::vector<std::vector<double>> &truths);

ExperimentReport run_sweep(const ExperimentPlan &plan);

/// Recomputes aggregate rows from trial rows, grouped in first-seen order.
std::vector<AggregateRow> aggregate(const std::vector<TrialRow> &rows);

void write_trials_csv(std::ostream &os, const ExperimentReport &report);
void write_summary_csv(std::ostream &os, const ExperimentReport &report);

/// Writes <stem>_trials.csv, <stem>_summary.csv and <stem>_plan.json into dir.
void write_report(const std::filesystem::path &dir, const std::string &stem, const ExperimentPlan &plan,
                  const ExperimentReport &report);

struct EpsilonScanRow {
  double snr_db = 0.0;
  double best_epsilon = 0.0;
  double best_rmse = 0.0;
  std::vector<double> rmse; // one per epsilon candidate
};

/// For each SNR, the epsilon with the smallest RMSE of the first LN-MUSIC method in the plan.
/// Ties resolve to the smallest epsilon.
std::vector<EpsilonScanRow> epsilon_scan(const ExperimentPlan &plan, std::vector<double> eps_grid,
                                         const std::vector<double> &snr_grid);
EpsilonTable table_from_scan(const std::vector<EpsilonScanRow> &scan);
void write_epsilon_scan_csv(std::ostream &os, const std::vector<double> &eps_grid,
                            const std::vector<EpsilonScanRow> &scan);

struct RhoZetaRow {
  double rho = 0.0;
  double zeta = 0.0;
  double snr_db = 0.0;
  double rmse = 0.0;
  double recovery_rate = 0.0;
};

std::vector<RhoZetaRow> rho_zeta_scan(const ExperimentPlan &plan, const std::vector<double> &rho_grid,
                                      const std::vector<double> &zeta_grid, const std::vector<double> &snr_grid);
void write_rho_zeta_csv(std::ostream &os, const std::vector<RhoZetaRow> &rows);

} // namespace lnmusic
