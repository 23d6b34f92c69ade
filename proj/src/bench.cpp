// SPDX-License-Identifier: Apache-2.0
#include "lnmusic/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <thread>

#include "lnmusic/crlb.hpp"

namespace lnmusic {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool uses_rosm(const std::vector<MethodSpec> &methods)
{
  return std::any_of(methods.begin(), methods.end(), [](const MethodSpec &m) { return m.rosm; });
}

double trial_error(std::vector<double> est, std::vector<double> truth)
{
  std::sort(est.begin(), est.end());
  std::sort(truth.begin(), truth.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < est.size(); ++i) { sum += (est[i] - truth[i]) * (est[i] - truth[i]); }
  return std::sqrt(sum / static_cast<double>(est.size()));
}

void write_list(std::ostream &os, const std::vector<double> &v)
{
  for (std::size_t i = 0; i < v.size(); ++i) { os << (i ? ";" : "") << v[i]; }
}

// Runs body(i) for i in [0, count) on up to `workers` threads. body must not throw.
template <typename F>
void parallel_for(int count, int workers, F &&body)
{
  workers = std::max(1, std::min(workers, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) { body(i); }
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) { body(i); }
    });
  }
  for (auto &t : pool) { t.join(); }
}

} // namespace

LawsonParams default_bench_solver()
{
  LawsonParams p;
  p.lambda1_scale = 2.0;
  return p;
}

void ExperimentPlan::validate() const
{
  scene.validate();
  noise.validate();
  solver.validate();
  rosm.validate();
  lp_adm.validate();
  HankelConfig m = music;
  m.N = scene.N();
  m.validate(scene.M);
  if (n_mc < 1) { throw ConfigError("plan: n_mc must be >= 1"); }
  if (sweep_values.empty()) { throw ConfigError("plan: sweep values are empty"); }
  if (methods.empty()) { throw ConfigError("plan: no methods"); }
  if (workers < 1) { throw ConfigError("plan: workers must be >= 1"); }
  static const std::vector<std::string> vars{"snr_db", "M",   "K",    "d_ris_antenna", "epsilon", "T",
                                             "rho",    "zeta", "kappa", "eta",           "L"};
  if (std::find(vars.begin(), vars.end(), sweep_variable) == vars.end()) {
    throw ConfigError("plan: unknown sweep variable '" + sweep_variable + "'");
  }
  if (epsilon_from_table && epsilon_table.empty()) { throw ConfigError("plan: epsilon table is empty"); }
}

ExperimentPlan ExperimentPlan::at(double value) const
{
  ExperimentPlan p = *this;
  const auto &v = sweep_variable;
  const int as_int = static_cast<int>(std::lround(value));
  if (v == "snr_db") {
    p.noise.snr_db = value;
  } else if (v == "M") {
    p.scene.M = as_int;
  } else if (v == "K") {
    p.scene.K = as_int;
  } else if (v == "d_ris_antenna") {
    p.scene.d_ris_antenna = value;
  } else if (v == "epsilon") {
    p.solver.epsilon = value;
    p.epsilon_from_table = false;
  } else if (v == "T") {
    p.rosm.T = as_int;
  } else if (v == "rho") {
    p.solver.rho = value;
  } else if (v == "zeta") {
    p.solver.zeta = value;
  } else if (v == "kappa") {
    p.noise.kappa = value;
  } else if (v == "eta") {
    p.solver.eta = value;
  } else if (v == "L") {
    p.music.L = as_int;
  } else {
    throw ConfigError("plan: unknown sweep variable '" + v + "'");
  }
  p.sweep_values = {value};
  p.music.N = p.scene.N();
  return p;
}

double epsilon_for_plan(const ExperimentPlan &plan)
{
  if (!plan.epsilon_from_table) { return plan.solver.epsilon; }
  return plan.epsilon_table.at(plan.noiseless ? std::numeric_limits<double>::infinity() : plan.noise.snr_db);
}

TrialData make_trial(const ExperimentPlan &plan, int trial_index)
{
  TrialData t;
  t.seed = plan.base_seed + static_cast<std::uint64_t>(trial_index);
  t.scene = plan.scene;
  t.scene.validate();
  if (plan.randomize_source_phases) {
    Rng rng = make_rng(t.seed, Stream::SourcePhase);
    randomize_source_phases(t.scene, rng);
  }
  const int K = t.scene.K;
  const int M = t.scene.M;
  t.z = array_manifold(t.scene, M) * target_amplitudes(t.scene);

  Rng grng = make_rng(t.seed, Stream::ControlMatrix);
  t.G_random = random_control_matrix(K, M, grng);

  NoiseConfig nc = plan.noise;
  nc.seed = t.seed;
  if (plan.noiseless) {
    t.v = CVector::Zero(K);
  } else {
    t.sigma2_sq = calibrate_sigma2(t.z, nc.snr_db);
    ImpulsiveNoise gen(nc, make_rng(t.seed, Stream::MeasurementNoise));
    t.v = gen.sample(K, t.sigma2_sq);
  }

  if (uses_rosm(plan.methods)) {
    RosmConfig rc = plan.rosm;
    rc.seed = t.seed;
    if (plan.noiseless) { rc.noisy_probe = false; }
    t.G_rosm = rosm_optimize(t.z, K, rc, nc).G;
    t.y_rosm = t.G_rosm->matrix() * t.z + t.v;
  }
  t.y_random = t.G_random.matrix() * t.z + t.v;
  return t;
}

MethodOutcome run_method(const ExperimentPlan &plan, const TrialData &trial, const MethodSpec &method)
{
  MethodOutcome out;
  const CMatrix &G = trial.control(method.rosm).matrix();
  const CVector &y = trial.measurement(method.rosm);
  HankelConfig music = plan.music;
  music.N = trial.scene.N();
  try {
    switch (method.method) {
    case Method::LnMusic: {
      LawsonParams params = plan.solver;
      params.epsilon = epsilon_for_plan(plan);
      const CVector z = LawsonAdmm(G, params).solve(y).z;
      out.spectrum = estimate_doas(z, music, trial.scene.varphi, trial.scene.d);
      out.angles = out.spectrum.peaks;
      break;
    }
    case Method::LpAdm: {
      const CVector z = lp_adm(y, G, plan.lp_adm).z;
      out.spectrum = estimate_doas(z, music, trial.scene.varphi, trial.scene.d);
      out.angles = out.spectrum.peaks;
      break;
    }
    case Method::Omp: {
      const auto dict = GridDictionary::build(G, music.grid(), trial.scene.varphi, trial.scene.d);
      out.angles = omp(y, dict, music.N).angles;
      break;
    }
    }
  } catch (const std::exception &e) {
    out.angles.clear();
    out.failure = e.what();
  }
  return out;
}

double rmse(const std::vector<std::vector<double>> &estimates, const std::vector<std::vector<double>> &truths)
{
  if (estimates.size() != truths.size() || estimates.empty()) {
    throw ConfigError("rmse: estimate and truth lists must be non-empty and of equal length");
  }
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    if (estimates[i].size() != truths[i].size()) { throw ConfigError("rmse: angle count mismatch in trial " + std::to_string(i)); }
    auto e = estimates[i];
    auto t = truths[i];
    std::sort(e.begin(), e.end());
    std::sort(t.begin(), t.end());
    for (std::size_t k = 0; k < e.size(); ++k) { sum += (e[k] - t[k]) * (e[k] - t[k]); }
    count += e.size();
  }
  return std::sqrt(sum / static_cast<double>(count));
}

std::vector<AggregateRow> aggregate(const std::vector<TrialRow> &rows)
{
  std::vector<AggregateRow> out;
  std::vector<double> sq, sq_all;
  std::map<std::pair<std::string, double>, std::size_t> index;
  for (const auto &r : rows) {
    auto key = std::make_pair(r.method, r.sweep_value);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, out.size()).first;
      out.push_back(AggregateRow{r.method, r.sweep_value});
      sq.push_back(0.0);
      sq_all.push_back(0.0);
    }
    auto &a = out[it->second];
    ++a.n_trials;
    if (!r.estimate.empty()) {
      ++a.n_estimated;
      sq_all[it->second] += r.error_deg * r.error_deg;
    }
    if (r.success) { sq[it->second] += r.error_deg * r.error_deg; }
    a.n_success += r.success ? 1 : 0;
    a.mean_srp += r.srp;
    a.crlb_deg += r.crlb_deg;
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto &a = out[i];
    a.rmse = a.n_success ? std::sqrt(sq[i] / a.n_success) : kNaN;
    a.rmse_all = a.n_estimated ? std::sqrt(sq_all[i] / a.n_estimated) : kNaN;
    a.recovery_rate = static_cast<double>(a.n_success) / a.n_trials;
    a.mean_srp /= a.n_trials;
    a.crlb_deg /= a.n_trials;
  }
  return out;
}

const AggregateRow &ExperimentReport::find(const std::string &method, double sweep_value) const
{
  for (const auto &a : aggregates) {
    if (a.method == method && a.sweep_value == sweep_value) { return a; }
  }
  throw ConfigError("report: no aggregate for " + method);
}

ExperimentReport run_sweep(const ExperimentPlan &plan)
{
  plan.validate();
  ExperimentReport report;
  const auto n_methods = plan.methods.size();
  for (double value : plan.sweep_values) {
    const ExperimentPlan p = plan.at(value);
    p.validate();
    std::vector<TrialRow> rows(static_cast<std::size_t>(p.n_mc) * n_methods);
    parallel_for(p.n_mc, p.workers, [&](int i) {
      const auto base = static_cast<std::size_t>(i) * n_methods;
      TrialData trial;
      std::string setup_error;
      try {
        trial = make_trial(p, i);
      } catch (const std::exception &e) {
        setup_error = e.what();
      }
      for (std::size_t m = 0; m < n_methods; ++m) {
        TrialRow &row = rows[base + m];
        row.method = p.methods[m].label();
        row.sweep_value = value;
        row.trial = i;
        row.seed = p.base_seed + static_cast<std::uint64_t>(i);
        row.truth = p.scene.theta;
        std::sort(row.truth.begin(), row.truth.end());
        row.error_deg = kNaN;
        row.crlb_deg = kNaN;
        if (!setup_error.empty()) { continue; }

        const auto outcome = run_method(p, trial, p.methods[m]);
        const auto &G = trial.control(p.methods[m].rosm);
        row.srp = srp(trial.measurement(p.methods[m].rosm));
        if (!p.noiseless) {
          try {
            row.crlb_deg = crlb_theta(fisher(trial.scene, G, p.noise.total_variance(trial.sigma2_sq))).rmse_deg;
          } catch (const std::exception &) {
            row.crlb_deg = kNaN;
          }
        }
        if (outcome.angles.size() == row.truth.size()) {
          row.estimate = outcome.angles;
          std::sort(row.estimate.begin(), row.estimate.end());
          row.error_deg = trial_error(row.estimate, row.truth);
          row.success = row.error_deg <= kFailureThresholdDeg;
        }
      }
    });
    report.rows.insert(report.rows.end(), rows.begin(), rows.end());
  }
  report.aggregates = aggregate(report.rows);
  return report;
}

void write_trials_csv(std::ostream &os, const ExperimentReport &report)
{
  os << "method,sweep_value,trial,seed,estimate_deg,truth_deg,error_deg,success,srp,crlb_deg\n";
  os << std::setprecision(12);
  for (const auto &r : report.rows) {
    os << r.method << ',' << r.sweep_value << ',' << r.trial << ',' << r.seed << ',';
    write_list(os, r.estimate);
    os << ',';
    write_list(os, r.truth);
    os << ',' << r.error_deg << ',' << (r.success ? 1 : 0) << ',' << r.srp << ',' << r.crlb_deg << '\n';
  }
}

void write_summary_csv(std::ostream &os, const ExperimentReport &report)
{
  os << "method,sweep_value,n_trials,n_estimated,n_success,rmse_deg,rmse_all_deg,recovery_rate,mean_srp,crlb_deg\n";
  os << std::setprecision(12);
  for (const auto &a : report.aggregates) {
    os << a.method << ',' << a.sweep_value << ',' << a.n_trials << ',' << a.n_estimated << ',' << a.n_success << ','
       << a.rmse << ',' << a.rmse_all << ',' << a.recovery_rate << ',' << a.mean_srp << ',' << a.crlb_deg << '\n';
  }
}

void write_report(const std::filesystem::path &dir, const std::string &stem, const ExperimentPlan &plan,
                  const ExperimentReport &report)
{
  std::filesystem::create_directories(dir);
  auto open = [&](const std::string &suffix) {
    std::ofstream f(dir / (stem + suffix));
    if (!f) { throw ConfigError("cannot write " + (dir / (stem + suffix)).string()); }
    return f;
  };
  {
    auto f = open("_trials.csv");
    write_trials_csv(f, report);
  }
  {
    auto f = open("_summary.csv");
    write_summary_csv(f, report);
  }
  {
    auto f = open("_plan.json");
    f << plan_to_json(plan) << '\n';
  }
}

namespace {

MethodSpec first_ln_method(const ExperimentPlan &plan)
{
  for (const auto &m : plan.methods) {
    if (m.method == Method::LnMusic) { return m; }
  }
  return MethodSpec{Method::LnMusic, true};
}

double scan_score(const ExperimentReport &r)
{
  const double v = r.aggregates.front().rmse_all;
  return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
}

} // namespace

std::vector<EpsilonScanRow> epsilon_scan(const ExperimentPlan &plan, std::vector<double> eps_grid,
                                         const std::vector<double> &snr_grid)
{
  if (eps_grid.empty() || snr_grid.empty()) { throw ConfigError("epsilon_scan: grids must be non-empty"); }
  std::sort(eps_grid.begin(), eps_grid.end());
  std::vector<EpsilonScanRow> out;
  for (double snr : snr_grid) {
    EpsilonScanRow row;
    row.snr_db = snr;
    row.best_rmse = std::numeric_limits<double>::infinity();
    row.best_epsilon = eps_grid.front();
    for (double eps : eps_grid) {
      ExperimentPlan p = plan;
      p.methods = {first_ln_method(plan)};
      p.noise.snr_db = snr;
      p.solver.epsilon = eps;
      p.epsilon_from_table = false;
      p.sweep_variable = "snr_db";
      p.sweep_values = {snr};
      const double score = scan_score(run_sweep(p));
      row.rmse.push_back(score);
      if (score < row.best_rmse) {
        row.best_rmse = score;
        row.best_epsilon = eps;
      }
    }
    out.push_back(std::move(row));
  }
  return out;
}

EpsilonTable table_from_scan(const std::vector<EpsilonScanRow> &scan)
{
  std::vector<std::pair<double, double>> knots;
  for (const auto &r : scan) { knots.emplace_back(r.snr_db, r.best_epsilon); }
  return EpsilonTable(std::move(knots));
}

void write_epsilon_scan_csv(std::ostream &os, const std::vector<double> &eps_grid,
                            const std::vector<EpsilonScanRow> &scan)
{
  auto sorted = eps_grid;
  std::sort(sorted.begin(), sorted.end());
  os << "snr_db,best_epsilon,best_rmse_deg";
  for (double e : sorted) { os << ",rmse_eps_" << e; }
  os << '\n' << std::setprecision(10);
  for (const auto &r : scan) {
    os << r.snr_db << ',' << r.best_epsilon << ',' << r.best_rmse;
    for (double v : r.rmse) { os << ',' << v; }
    os << '\n';
  }
}

std::vector<RhoZetaRow> rho_zeta_scan(const ExperimentPlan &plan, const std::vector<double> &rho_grid,
                                      const std::vector<double> &zeta_grid, const std::vector<double> &snr_grid)
{
  if (rho_grid.empty() || zeta_grid.empty() || snr_grid.empty()) {
    throw ConfigError("rho_zeta_scan: grids must be non-empty");
  }
  std::vector<RhoZetaRow> out;
  for (double snr : snr_grid) {
    for (double rho : rho_grid) {
      for (double zeta : zeta_grid) {
        ExperimentPlan p = plan;
        p.methods = {first_ln_method(plan)};
        p.noise.snr_db = snr;
        p.solver.rho = rho;
        p.solver.zeta = zeta;
        p.sweep_variable = "snr_db";
        p.sweep_values = {snr};
        const auto report = run_sweep(p);
        const auto &a = report.aggregates.front();
        out.push_back({rho, zeta, snr, a.rmse, a.recovery_rate});
      }
    }
  }
  return out;
}

void write_rho_zeta_csv(std::ostream &os, const std::vector<RhoZetaRow> &rows)
{
  os << "rho,zeta,snr_db,rmse_deg,recovery_rate\n" << std::setprecision(10);
  for (const auto &r : rows) {
    os << r.rho << ',' << r.zeta << ',' << r.snr_db << ',' << r.rmse << ',' << r.recovery_rate << '\n';
  }
}

} // namespace lnmusic
