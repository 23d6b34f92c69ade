// SPDX-License-Identifier: Apache-2.0
// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lnmusic/bench.hpp"
#include "lnmusic/crlb.hpp"
#include "lnmusic/lawson_admm.hpp"

using namespace lnmusic;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

class Clock {
public:
  double seconds() const
  {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(double v, int prec = 4)
{
  std::ostringstream os;
  os.precision(prec);
  os << v;
  return os.str();
}

std::string join(const std::vector<double> &v, int prec = 4)
{
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) { s += (i ? ", " : "") + fmt(v[i], prec); }
  return s + "]";
}

std::vector<double> column(const ExperimentReport &r, const std::string &method, const std::vector<double> &xs,
                           double AggregateRow::*field)
{
  std::vector<double> out;
  for (double x : xs) { out.push_back(r.find(method, x).*field); }
  return out;
}

CVector random_cvector(Eigen::Index n, std::mt19937_64 &rng)
{
  std::normal_distribution<double> g;
  CVector v(n);
  for (auto &c : v) { c = {g(rng), g(rng)}; }
  return v;
}

// ---------------------------------------------------------------------------

Verdict noiseless_exactness()
{
  Clock clk;
  ExperimentPlan plan;
  plan.noiseless = true;
  plan.n_mc = 100;
  plan.methods = {MethodSpec::parse("ln_music")};
  const auto rep = run_sweep(plan);
  int ok = 0;
  double worst = 0.0;
  for (const auto &row : rep.rows) {
    if (row.estimate.size() != row.truth.size()) { continue; }
    auto e = row.estimate;
    auto t = row.truth;
    std::sort(e.begin(), e.end());
    std::sort(t.begin(), t.end());
    double m = 0.0;
    for (std::size_t i = 0; i < e.size(); ++i) { m = std::max(m, std::abs(e[i] - t[i])); }
    worst = std::max(worst, m);
    ok += m <= plan.music.grid_step + 1e-9 ? 1 : 0;
  }
  const double t = clk.seconds();
  return {ok == 100 && t < 60.0,
          std::to_string(ok) + "/100 seeds within 0.01 deg, worst " + fmt(worst) + " deg, " + fmt(t, 3) + " s"};
}

Verdict lawson_suite()
{
  std::mt19937_64 rng(2024);
  double worst_p2 = 0.0;
  double worst_lim = 0.0;
  double worst_grad = 0.0;
  std::uniform_real_distribution<double> pick(0.1, 1.9);
  for (int rep = 0; rep < 100; ++rep) {
    const CVector v = random_cvector(8, rng);
    double sq = 0.0, lp = 0.0;
    for (const auto &c : v) {
      sq += std::norm(c);
      lp += std::pow(std::abs(c), 0.5);
    }
    worst_p2 = std::max(worst_p2, std::abs(lawson_norm(v, pick(rng), 2.0) - sq));
    worst_lim = std::max(worst_lim, std::abs(lawson_norm(v, 1e-8, 0.5) - lp) / lp);

    const double lambda = pick(rng);
    const double p = pick(rng);
    const CVector hv = weight_matrix(v, lambda, p).cwiseProduct(v);
    CVector fd(v.size());
    const double h = 1e-6;
    for (Eigen::Index k = 0; k < v.size(); ++k) {
      CVector a = v, b = v;
      a(k) += h;
      b(k) -= h;
      const double dre = (lawson_norm(a, lambda, p) - lawson_norm(b, lambda, p)) / (2.0 * h);
      a = v;
      b = v;
      a(k) += cplx(0.0, h);
      b(k) -= cplx(0.0, h);
      const double dim = (lawson_norm(a, lambda, p) - lawson_norm(b, lambda, p)) / (2.0 * h);
      fd(k) = {dre, dim};
    }
    worst_grad = std::max(worst_grad, (hv - fd).norm() / hv.norm());
  }
  return {worst_p2 == 0.0 && worst_lim <= 1e-4 && worst_grad <= 1e-6,
          "p=2 abs diff " + fmt(worst_p2) + ", lambda->0 rel " + fmt(worst_lim) + ", gradient rel " +
              fmt(worst_grad) + " (100 vectors)"};
}

struct SnrSweep {
  std::vector<double> snr{-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0};
  ExperimentReport report;
  double seconds = 0.0;
};

SnrSweep run_snr_sweep()
{
  SnrSweep s;
  Clock clk;
  ExperimentPlan plan;
  plan.sweep_variable = "snr_db";
  plan.sweep_values = s.snr;
  plan.n_mc = 100;
  plan.base_seed = 1;
  plan.methods = {MethodSpec::parse("ln_music+rosm"), MethodSpec::parse("ln_music"), MethodSpec::parse("lp_adm"),
                  MethodSpec::parse("omp")};
  s.report = run_sweep(plan);
  s.seconds = clk.seconds();
  return s;
}

Verdict robustness_ordering(const SnrSweep &s)
{
  const std::vector<double> pts{0.0, 10.0, 20.0};
  const auto ln = column(s.report, "ln_music+rosm", pts, &AggregateRow::rmse);
  const auto lp = column(s.report, "lp_adm", pts, &AggregateRow::rmse);
  const auto om = column(s.report, "omp", pts, &AggregateRow::rmse);
  bool order = true;
  for (std::size_t i = 0; i < pts.size(); ++i) { order = order && ln[i] < lp[i] && ln[i] < om[i]; }

  const auto trend = column(s.report, "ln_music+rosm", s.snr, &AggregateRow::rmse);
  int inversions = 0;
  for (std::size_t i = 1; i < trend.size(); ++i) { inversions += trend[i] > trend[i - 1] ? 1 : 0; }
  const bool fast = s.seconds < 600.0;
  return {order && inversions <= 1 && fast,
          "RMSE at 0/10/20 dB: ln_music+rosm " + join(ln) + ", lp_adm " + join(lp) + ", omp " + join(om) +
              "; SNR trend inversions " + std::to_string(inversions) + "; " + fmt(s.seconds, 3) + " s"};
}

Verdict rosm_gain(const SnrSweep &s)
{
  const auto with = column(s.report, "ln_music+rosm", s.snr, &AggregateRow::rmse);
  const auto without = column(s.report, "ln_music", s.snr, &AggregateRow::rmse);
  std::vector<double> ratio;
  bool never_worse = true;
  for (std::size_t i = 0; i < s.snr.size(); ++i) {
    ratio.push_back(without[i] / with[i]);
    never_worse = never_worse && with[i] <= without[i];
  }
  double mean = 0.0;
  for (double r : ratio) { mean += r; }
  mean /= static_cast<double>(ratio.size());
  return {mean >= 1.15 && never_worse,
          "mean RMSE ratio without/with " + fmt(mean) + " (improvement " + fmt(100.0 * (mean - 1.0), 3) +
              "%), per SNR " + join(ratio, 3)};
}

Verdict recovery_rate(const SnrSweep &s)
{
  const auto &a = s.report.find("ln_music+rosm", -5.0);
  return {a.recovery_rate >= 0.95,
          "ln_music+rosm recovery at -5 dB " + fmt(a.recovery_rate, 3) + " (" + std::to_string(a.n_success) + "/" +
              std::to_string(a.n_trials) + ")"};
}

Verdict crlb_consistency(const SnrSweep &s)
{
  SceneConfig scene;
  Rng rng(7);
  randomize_source_phases(scene, rng);
  const auto G = random_control_matrix(scene.K, scene.M, rng);
  const auto curve = crlb_vs_snr(scene, G, NoiseConfig{}, s.snr);
  bool decreasing = true;
  for (std::size_t i = 1; i < curve.size(); ++i) { decreasing = decreasing && curve[i].rmse_deg < curve[i - 1].rmse_deg; }

  const auto rm = column(s.report, "ln_music+rosm", s.snr, &AggregateRow::rmse);
  const auto cb = column(s.report, "ln_music+rosm", s.snr, &AggregateRow::crlb_deg);
  int below = 0;
  for (std::size_t i = 0; i < rm.size(); ++i) { below += rm[i] < cb[i] ? 1 : 0; }

  // score vs central differences of the log-likelihood
  const CMatrix &Gm = G.matrix();
  RVector th(scene.N());
  for (int n = 0; n < scene.N(); ++n) { th(n) = deg2rad(scene.theta[n]); }
  const CVector x = target_amplitudes(scene);
  std::mt19937_64 g(11);
  std::normal_distribution<double> nd;
  double worst = 0.0;
  for (int rep = 0; rep < 10; ++rep) {
    RVector t = th;
    for (Eigen::Index n = 0; n < t.size(); ++n) { t(n) += 0.01 * nd(g); }
    CVector xx = x;
    for (auto &c : xx) { c += cplx(0.005 * nd(g), 0.005 * nd(g)); }
    CVector y = Gm * array_manifold(scene, scene.M) * x;
    for (auto &c : y) { c += cplx(0.1 * nd(g), 0.1 * nd(g)); }
    const double var = 0.01;
    const RVector sc = score(y, Gm, t, xx, scene.varphi, scene.d, var);
    RVector fd(sc.size());
    const double h = 1e-7;
    const auto N = t.size();
    for (Eigen::Index i = 0; i < sc.size(); ++i) {
      RVector tp = t, tm = t;
      CVector xp = xx, xm = xx;
      if (i < N) {
        tp(i) += h;
        tm(i) -= h;
      } else if (i < 2 * N) {
        xp(i - N) += h;
        xm(i - N) -= h;
      } else {
        xp(i - 2 * N) += cplx(0.0, h);
        xm(i - 2 * N) -= cplx(0.0, h);
      }
      fd(i) = (log_likelihood(y, Gm, tp, xp, scene.varphi, scene.d, var) -
               log_likelihood(y, Gm, tm, xm, scene.varphi, scene.d, var)) /
              (2.0 * h);
    }
    worst = std::max(worst, (sc - fd).norm() / sc.norm());
  }
  std::vector<double> bound;
  for (const auto &r : curve) { bound.push_back(r.rmse_deg); }
  return {decreasing && below == 0 && worst <= 1e-5,
          std::string("CRLB ") + (decreasing ? "strictly decreasing " : "NOT decreasing ") + join(bound, 3) +
              "; RMSE below CRLB at " + std::to_string(below) + "/" + std::to_string(rm.size()) +
              " SNRs (RMSE " + join(rm, 3) + " vs CRLB " + join(cb, 3) + "); score rel err " + fmt(worst)};
}

std::vector<double> sweep_rmse(const std::string &variable, const std::vector<double> &values, int n_mc,
                               double snr_db, std::uint64_t seed)
{
  ExperimentPlan plan;
  plan.sweep_variable = variable;
  plan.sweep_values = values;
  plan.n_mc = n_mc;
  plan.noise.snr_db = snr_db;
  plan.base_seed = seed;
  plan.methods = {MethodSpec::parse("ln_music+rosm")};
  const auto rep = run_sweep(plan);
  return column(rep, "ln_music+rosm", values, &AggregateRow::rmse);
}

Verdict m_k_trends()
{
  const std::vector<double> Ms{8, 16, 24, 32, 40};
  const std::vector<double> Ks{32, 64, 128, 256};
  const auto rm = sweep_rmse("M", Ms, 50, 10.0, 100);
  const auto rk = sweep_rmse("K", Ks, 50, 10.0, 200);
  auto non_increasing = [](const std::vector<double> &v) {
    for (std::size_t i = 1; i < v.size(); ++i) {
      if (!(v[i] <= v[i - 1])) { return false; }
    }
    return true;
  };
  const double first = std::abs(rm[1] - rm[0]) / (Ms[1] - Ms[0]);
  const double last = std::abs(rm[4] - rm[3]) / (Ms[4] - Ms[3]);
  const bool flat = last < 0.5 * first;
  return {non_increasing(rm) && non_increasing(rk) && flat,
          "RMSE vs M " + join(rm) + ", vs K " + join(rk) + "; M slope first " + fmt(first) + " last " + fmt(last)};
}

Verdict ds_trend()
{
  const std::vector<double> ds{3, 6, 9, 12};
  const auto r10 = sweep_rmse("d_ris_antenna", ds, 100, 10.0, 300);
  const auto r20 = sweep_rmse("d_ris_antenna", ds, 100, 20.0, 400);
  const double worst = std::max(*std::max_element(r10.begin(), r10.end()), *std::max_element(r20.begin(), r20.end()));
  return {worst < 0.1, "RMSE vs d_ris_antenna at 10 dB " + join(r10) + ", at 20 dB " + join(r20)};
}

Verdict determinism()
{
  ExperimentPlan plan;
  plan.sweep_values = {0.0, 10.0};
  plan.n_mc = 6;
  plan.base_seed = 77;
  plan.methods = {MethodSpec::parse("ln_music+rosm"), MethodSpec::parse("lp_adm"), MethodSpec::parse("omp")};
  auto dump = [](const ExperimentPlan &p) {
    const auto rep = run_sweep(p);
    std::ostringstream os;
    write_trials_csv(os, rep);
    write_summary_csv(os, rep);
    return os.str();
  };
  const std::string a = dump(plan);
  const std::string b = dump(plan);
  plan.workers = 4;
  const std::string c = dump(plan);
  const std::string d = dump(parse_plan(plan_to_json(plan)));
  return {a == b && a == c && a == d,
          std::string("re-run ") + (a == b ? "identical" : "differs") + ", 4 workers " + (a == c ? "identical" : "differs") +
              ", reloaded plan " + (a == d ? "identical" : "differs") + " (" + std::to_string(a.size()) + " bytes)"};
}

} // namespace

int main()
{
  int failures = 0;
  auto report = [&](int id, const std::string &name, const std::function<Verdict()> &fn) {
    Verdict v;
    try {
      v = fn();
    } catch (const std::exception &e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failures += v.pass ? 0 : 1;
    std::cout << (v.pass ? "PASS" : "FAIL") << " AC" << id << " " << name << ": " << v.detail << std::endl;
  };

  report(1, "noiseless exactness", noiseless_exactness);
  report(2, "lawson norm suite", lawson_suite);
  const SnrSweep snr = run_snr_sweep();
  report(3, "impulsive-noise robustness ordering", [&] { return robustness_ordering(snr); });
  report(4, "ROSM gain", [&] { return rosm_gain(snr); });
  report(5, "recovery rate at -5 dB", [&] { return recovery_rate(snr); });
  report(6, "CRLB consistency", [&] { return crlb_consistency(snr); });
  report(7, "M and K trends", m_k_trends);
  report(8, "d_s trend", ds_trend);
  report(9, "determinism", determinism);

  std::cout << (failures == 0 ? "ALL CRITERIA PASS" : std::to_string(failures) + " CRITERIA FAIL") << std::endl;
  return failures == 0 ? 0 : 1;
}
