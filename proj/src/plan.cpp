// SPDX-License-Identifier: Apache-2.0
// ExperimentPlan <-> JSON.
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "lnmusic/bench.hpp"

namespace lnmusic {

using nlohmann::json;

namespace {

void reject_unknown(const json &obj, const std::string &section, std::initializer_list<const char *> known)
{
  if (!obj.is_object()) { throw ConfigError("plan: section '" + section + "' must be an object"); }
  const std::set<std::string> allowed(known.begin(), known.end());
  for (const auto &item : obj.items()) {
    if (!allowed.count(item.key())) { throw ConfigError("plan: unknown key '" + section + "." + item.key() + "'"); }
  }
}

template <typename T>
void read(const json &obj, const char *key, T &out)
{
  if (auto it = obj.find(key); it != obj.end()) {
    try {
      out = it->get<T>();
    } catch (const json::exception &e) {
      throw ConfigError(std::string("plan: bad value for '") + key + "': " + e.what());
    }
  }
}

std::vector<cplx> read_complex_list(const json &arr)
{
  std::vector<cplx> out;
  for (const auto &v : arr) {
    if (v.is_number()) {
      out.emplace_back(v.get<double>(), 0.0);
    } else if (v.is_array() && v.size() == 2) {
      out.emplace_back(v[0].get<double>(), v[1].get<double>());
    } else {
      throw ConfigError("plan: complex values are numbers or [re, im] pairs");
    }
  }
  return out;
}

// Per-target lists default to their first entry repeated once per target.
template <typename T>
void broadcast(std::vector<T> &v, std::size_t n)
{
  if (v.size() != n && !v.empty()) { v.assign(n, v.front()); }
}

SceneConfig read_scene(const json &j)
{
  reject_unknown(j, "scene", {"M", "K", "d", "varphi", "theta", "d_target_ris", "d_ris_antenna", "alpha", "gamma",
                              "s_amp", "angle_min", "angle_max"});
  SceneConfig s;
  read(j, "M", s.M);
  read(j, "K", s.K);
  read(j, "d", s.d);
  read(j, "varphi", s.varphi);
  read(j, "theta", s.theta);
  read(j, "d_ris_antenna", s.d_ris_antenna);
  read(j, "gamma", s.gamma);
  read(j, "angle_min", s.angle_min);
  read(j, "angle_max", s.angle_max);
  const auto n = s.theta.size();
  if (j.contains("d_target_ris")) { read(j, "d_target_ris", s.d_target_ris); } else { broadcast(s.d_target_ris, n); }
  if (j.contains("alpha")) { read(j, "alpha", s.alpha); } else { broadcast(s.alpha, n); }
  if (j.contains("s_amp")) { s.s_amp = read_complex_list(j["s_amp"]); } else { broadcast(s.s_amp, n); }
  return s;
}

} // namespace

std::string MethodSpec::label() const
{
  std::string base;
  switch (method) {
  case Method::LnMusic: base = "ln_music"; break;
  case Method::LpAdm: base = "lp_adm"; break;
  case Method::Omp: base = "omp"; break;
  }
  return rosm ? base + "+rosm" : base;
}

MethodSpec MethodSpec::parse(std::string_view label)
{
  MethodSpec spec;
  std::string_view base = label;
  if (auto pos = label.find('+'); pos != std::string_view::npos) {
    if (label.substr(pos) != "+rosm") { throw ConfigError("plan: unknown method modifier in '" + std::string(label) + "'"); }
    spec.rosm = true;
    base = label.substr(0, pos);
  }
  if (base == "ln_music") {
    spec.method = Method::LnMusic;
  } else if (base == "lp_adm") {
    spec.method = Method::LpAdm;
  } else if (base == "omp") {
    spec.method = Method::Omp;
  } else {
    throw ConfigError("plan: unknown method '" + std::string(label) + "'");
  }
  return spec;
}

ExperimentPlan parse_plan(std::string_view text)
{
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error &e) {
    throw ConfigError(std::string("plan: invalid JSON: ") + e.what());
  }
  reject_unknown(j, "plan", {"scene", "noise", "solver", "rosm", "music", "lp_adm", "sweep", "n_mc", "base_seed",
                             "methods", "workers", "noiseless", "randomize_source_phases"});
  ExperimentPlan p;
  if (j.contains("scene")) { p.scene = read_scene(j["scene"]); }
  if (j.contains("noise")) {
    const auto &n = j["noise"];
    reject_unknown(n, "noise", {"kappa", "variance_ratio", "snr_db", "seed"});
    read(n, "kappa", p.noise.kappa);
    read(n, "variance_ratio", p.noise.variance_ratio);
    read(n, "snr_db", p.noise.snr_db);
    read(n, "seed", p.noise.seed);
  }
  if (j.contains("solver")) {
    const auto &s = j["solver"];
    reject_unknown(s, "solver", {"p1", "p2", "lambda1", "lambda2", "rho", "epsilon", "zeta", "eta", "lambda1_floor",
                                 "lambda1_scale", "max_iter", "hz_uses_p1", "epsilon_from_table", "epsilon_table"});
    auto &P = p.solver;
    read(s, "p1", P.p1);
    read(s, "p2", P.p2);
    read(s, "lambda1", P.lambda1);
    read(s, "lambda2", P.lambda2);
    read(s, "rho", P.rho);
    read(s, "epsilon", P.epsilon);
    read(s, "zeta", P.zeta);
    read(s, "eta", P.eta);
    read(s, "lambda1_floor", P.lambda1_floor);
    read(s, "lambda1_scale", P.lambda1_scale);
    read(s, "max_iter", P.max_iter);
    read(s, "hz_uses_p1", P.hz_uses_p1);
    read(s, "epsilon_from_table", p.epsilon_from_table);
    if (s.contains("epsilon_table")) {
      std::vector<std::pair<double, double>> knots;
      for (const auto &k : s["epsilon_table"]) {
        if (!k.is_array() || k.size() != 2) { throw ConfigError("plan: epsilon_table entries are [snr_db, epsilon]"); }
        knots.emplace_back(k[0].get<double>(), k[1].get<double>());
      }
      p.epsilon_table = EpsilonTable(std::move(knots));
    }
  }
  if (j.contains("rosm")) {
    const auto &r = j["rosm"];
    reject_unknown(r, "rosm", {"T", "phase_bits", "noisy_probe"});
    read(r, "T", p.rosm.T);
    read(r, "phase_bits", p.rosm.phase_bits);
    read(r, "noisy_probe", p.rosm.noisy_probe);
  }
  if (j.contains("music")) {
    const auto &m = j["music"];
    reject_unknown(m, "music", {"L", "grid_start", "grid_stop", "grid_step", "spectral_ceiling"});
    read(m, "L", p.music.L);
    read(m, "grid_start", p.music.grid_start);
    read(m, "grid_stop", p.music.grid_stop);
    read(m, "grid_step", p.music.grid_step);
    read(m, "spectral_ceiling", p.music.spectral_ceiling);
  }
  if (j.contains("lp_adm")) {
    const auto &l = j["lp_adm"];
    reject_unknown(l, "lp_adm", {"p", "rho", "delta", "max_iter", "step0", "backtrack", "step_growth"});
    read(l, "p", p.lp_adm.p);
    read(l, "rho", p.lp_adm.rho);
    read(l, "delta", p.lp_adm.delta);
    read(l, "max_iter", p.lp_adm.max_iter);
    read(l, "step0", p.lp_adm.step0);
    read(l, "backtrack", p.lp_adm.backtrack);
    read(l, "step_growth", p.lp_adm.step_growth);
  }
  if (j.contains("sweep")) {
    const auto &s = j["sweep"];
    reject_unknown(s, "sweep", {"variable", "values"});
    read(s, "variable", p.sweep_variable);
    read(s, "values", p.sweep_values);
  }
  read(j, "n_mc", p.n_mc);
  read(j, "base_seed", p.base_seed);
  read(j, "workers", p.workers);
  read(j, "noiseless", p.noiseless);
  read(j, "randomize_source_phases", p.randomize_source_phases);
  if (j.contains("methods")) {
    p.methods.clear();
    for (const auto &m : j["methods"]) { p.methods.push_back(MethodSpec::parse(m.get<std::string>())); }
  }
  p.music.N = p.scene.N();
  p.validate();
  return p;
}

ExperimentPlan load_plan(const std::filesystem::path &path)
{
  std::ifstream in(path);
  if (!in) { throw ConfigError("plan: cannot open " + path.string()); }
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_plan(buf.str());
}

std::string plan_to_json(const ExperimentPlan &p)
{
  json j;
  const auto &s = p.scene;
  json amps = json::array();
  for (const auto &a : s.s_amp) { amps.push_back({a.real(), a.imag()}); }
  j["scene"] = {{"M", s.M},
                {"K", s.K},
                {"d", s.d},
                {"varphi", s.varphi},
                {"theta", s.theta},
                {"d_target_ris", s.d_target_ris},
                {"d_ris_antenna", s.d_ris_antenna},
                {"alpha", s.alpha},
                {"gamma", s.gamma},
                {"s_amp", amps},
                {"angle_min", s.angle_min},
                {"angle_max", s.angle_max}};
  j["noise"] = {{"kappa", p.noise.kappa},
                {"variance_ratio", p.noise.variance_ratio},
                {"snr_db", p.noise.snr_db},
                {"seed", p.noise.seed}};
  json table = json::array();
  for (const auto &[snr, eps] : p.epsilon_table.knots()) { table.push_back({snr, eps}); }
  const auto &P = p.solver;
  j["solver"] = {{"p1", P.p1},
                 {"p2", P.p2},
                 {"lambda1", P.lambda1},
                 {"lambda2", P.lambda2},
                 {"rho", P.rho},
                 {"epsilon", P.epsilon},
                 {"zeta", P.zeta},
                 {"eta", P.eta},
                 {"lambda1_floor", P.lambda1_floor},
                 {"lambda1_scale", P.lambda1_scale},
                 {"max_iter", P.max_iter},
                 {"hz_uses_p1", P.hz_uses_p1},
                 {"epsilon_from_table", p.epsilon_from_table},
                 {"epsilon_table", table}};
  j["rosm"] = {{"T", p.rosm.T}, {"phase_bits", p.rosm.phase_bits}, {"noisy_probe", p.rosm.noisy_probe}};
  j["music"] = {{"L", p.music.L},
                {"grid_start", p.music.grid_start},
                {"grid_stop", p.music.grid_stop},
                {"grid_step", p.music.grid_step},
                {"spectral_ceiling", p.music.spectral_ceiling}};
  j["lp_adm"] = {{"p", p.lp_adm.p},
                 {"rho", p.lp_adm.rho},
                 {"delta", p.lp_adm.delta},
                 {"max_iter", p.lp_adm.max_iter},
                 {"step0", p.lp_adm.step0},
                 {"backtrack", p.lp_adm.backtrack},
                 {"step_growth", p.lp_adm.step_growth}};
  j["sweep"] = {{"variable", p.sweep_variable}, {"values", p.sweep_values}};
  j["n_mc"] = p.n_mc;
  j["base_seed"] = p.base_seed;
  j["workers"] = p.workers;
  j["noiseless"] = p.noiseless;
  j["randomize_source_phases"] = p.randomize_source_phases;
  json methods = json::array();
  for (const auto &m : p.methods) { methods.push_back(m.label()); }
  j["methods"] = methods;
  return j.dump(2);
}

} // namespace lnmusic
