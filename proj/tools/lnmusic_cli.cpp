// SPDX-License-Identifier: Apache-2.0
// lnmusic: Monte Carlo benchmark driver.
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lnmusic/bench.hpp"
#include "lnmusic/crlb.hpp"

namespace fs = std::filesystem;
using namespace lnmusic;

namespace {

struct Common {
  std::string plan;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::string out_dir = "out";
};

void add_common(CLI::App *cmd, Common &c)
{
  cmd->add_option("--plan", c.plan, "Experiment plan (JSON)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--seed", c.seed, "Override the plan's base seed");
  cmd->add_option("--workers", c.workers, "Worker threads for Monte Carlo trials")->check(CLI::PositiveNumber);
  cmd->add_option("--out-dir", c.out_dir, "Output directory");
}

ExperimentPlan load(const Common &c)
{
  ExperimentPlan plan = load_plan(c.plan);
  if (c.seed) { plan.base_seed = *c.seed; }
  if (c.workers) { plan.workers = *c.workers; }
  plan.validate();
  return plan;
}

std::ofstream open_out(const fs::path &dir, const std::string &name)
{
  fs::create_directories(dir);
  std::ofstream f(dir / name);
  if (!f) { throw ConfigError("cannot write " + (dir / name).string()); }
  return f;
}

void print_summary(const ExperimentReport &report, const std::string &variable)
{
  std::cout << std::left << std::setw(16) << "method" << std::setw(14) << variable << std::setw(12) << "rmse_deg"
            << std::setw(10) << "recovery" << "crlb_deg\n";
  for (const auto &a : report.aggregates) {
    std::cout << std::left << std::setw(16) << a.method << std::setw(14) << a.sweep_value << std::setw(12)
              << std::setprecision(5) << a.rmse << std::setw(10) << a.recovery_rate << a.crlb_deg << '\n';
  }
}

} // namespace

int main(int argc, char **argv)
{
  CLI::App app{"LN-MUSIC: robust single-antenna DOA estimation for RIS-aided links"};
  app.require_subcommand(1);

  Common sweep_opts;
  auto *sweep = app.add_subcommand("sweep", "Run an experiment plan and write trial/summary CSVs");
  add_common(sweep, sweep_opts);

  Common eps_opts;
  std::vector<double> eps_grid{1, 3, 10, 30, 100, 300, 1000};
  std::vector<double> eps_snr{-10, -5, 0, 5, 10, 15, 20};
  auto *scan_eps = app.add_subcommand("scan-eps", "Scan the ADMM penalty epsilon per SNR");
  add_common(scan_eps, eps_opts);
  scan_eps->add_option("--eps", eps_grid, "Candidate epsilon values")->delimiter(',');
  scan_eps->add_option("--snr", eps_snr, "SNR grid in dB")->delimiter(',');

  Common rz_opts;
  std::vector<double> rho_grid{0.01, 0.1, 1.0};
  std::vector<double> zeta_grid{0.0, 0.01, 1.0};
  std::vector<double> rz_snr{0, 10};
  auto *scan_rz = app.add_subcommand("scan-rho-zeta", "Scan the regularisation weight rho and Bregman weight zeta");
  add_common(scan_rz, rz_opts);
  scan_rz->add_option("--rho", rho_grid, "Candidate rho values")->delimiter(',');
  scan_rz->add_option("--zeta", zeta_grid, "Candidate zeta values")->delimiter(',');
  scan_rz->add_option("--snr", rz_snr, "SNR grid in dB")->delimiter(',');

  Common spec_opts;
  int trial_index = 0;
  std::string method_label = "ln_music+rosm";
  std::optional<double> sweep_value;
  auto *spec = app.add_subcommand("spectrum", "Dump the spatial spectrum of one trial");
  add_common(spec, spec_opts);
  spec->add_option("--trial", trial_index, "Trial index within the plan")->check(CLI::NonNegativeNumber);
  spec->add_option("--method", method_label, "ln_music, ln_music+rosm, lp_adm or lp_adm+rosm");
  spec->add_option("--sweep-value", sweep_value, "Sweep value to specialise the plan to (default: first)");

  Common crlb_opts;
  std::vector<double> crlb_snr{-10, -5, 0, 5, 10, 15, 20};
  auto *crlb_cmd = app.add_subcommand("crlb", "Tabulate the DOA Cramer-Rao bound against SNR");
  add_common(crlb_cmd, crlb_opts);
  crlb_cmd->add_option("--snr", crlb_snr, "SNR grid in dB")->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sweep) {
      const auto plan = load(sweep_opts);
      const auto report = run_sweep(plan);
      const std::string stem = fs::path(sweep_opts.plan).stem().string();
      write_report(sweep_opts.out_dir, stem, plan, report);
      print_summary(report, plan.sweep_variable);
    } else if (*scan_eps) {
      const auto plan = load(eps_opts);
      const auto scan = epsilon_scan(plan, eps_grid, eps_snr);
      auto f = open_out(eps_opts.out_dir, "epsilon_scan.csv");
      write_epsilon_scan_csv(f, eps_grid, scan);
      write_epsilon_scan_csv(std::cout, eps_grid, scan);
    } else if (*scan_rz) {
      const auto plan = load(rz_opts);
      const auto rows = rho_zeta_scan(plan, rho_grid, zeta_grid, rz_snr);
      auto f = open_out(rz_opts.out_dir, "rho_zeta_scan.csv");
      write_rho_zeta_csv(f, rows);
      write_rho_zeta_csv(std::cout, rows);
    } else if (*spec) {
      const auto base = load(spec_opts);
      const auto plan = base.at(sweep_value.value_or(base.sweep_values.front()));
      const MethodSpec method = MethodSpec::parse(method_label);
      if (method.method == Method::Omp) { throw ConfigError("spectrum: OMP has no spatial spectrum"); }
      ExperimentPlan p = plan;
      p.methods = {method};
      const TrialData trial = make_trial(p, trial_index);
      const auto outcome = run_method(p, trial, method);
      auto f = open_out(spec_opts.out_dir, "spectrum.csv");
      write_spectrum_csv(f, outcome.spectrum);
      auto g = open_out(spec_opts.out_dir, "control_matrix.txt");
      trial.control(method.rosm).write(g);
      std::cout << "seed " << trial.seed << " peaks:";
      for (double a : outcome.angles) { std::cout << ' ' << a; }
      if (!outcome.failure.empty()) { std::cout << " (failure: " << outcome.failure << ')'; }
      std::cout << '\n';
    } else if (*crlb_cmd) {
      const auto plan = load(crlb_opts);
      Rng rng = make_rng(plan.base_seed, Stream::ControlMatrix);
      const auto G = random_control_matrix(plan.scene.K, plan.scene.M, rng);
      const auto rows = crlb_vs_snr(plan.scene, G, plan.noise, crlb_snr);
      auto f = open_out(crlb_opts.out_dir, "crlb.csv");
      write_crlb_csv(f, rows);
      write_crlb_csv(std::cout, rows);
    }
  } catch (const std::exception &e) {
    std::cerr << "lnmusic: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
