// SPDX-License-Identifier: Apache-2.0
#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lnmusic/bench.hpp"
#include "lnmusic/crlb.hpp"

namespace py = pybind11;
using namespace lnmusic;

namespace {

py::dict summary_row(const AggregateRow &a)
{
  py::dict d;
  d["method"] = a.method;
  d["sweep_value"] = a.sweep_value;
  d["n_trials"] = a.n_trials;
  d["n_success"] = a.n_success;
  d["rmse"] = a.rmse;
  d["rmse_all"] = a.rmse_all;
  d["recovery_rate"] = a.recovery_rate;
  d["mean_srp"] = a.mean_srp;
  d["crlb_deg"] = a.crlb_deg;
  return d;
}

} // namespace

PYBIND11_MODULE(_lnmusic, m)
{
  m.doc() = "Single-snapshot RIS DOA estimation under impulsive noise";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
  py::register_exception<EstimationFailure>(m, "EstimationFailure", PyExc_RuntimeError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);

  py::class_<SceneConfig>(m, "SceneConfig")
      .def(py::init<>())
      .def_readwrite("M", &SceneConfig::M)
      .def_readwrite("K", &SceneConfig::K)
      .def_readwrite("d", &SceneConfig::d)
      .def_readwrite("varphi", &SceneConfig::varphi)
      .def_readwrite("theta", &SceneConfig::theta)
      .def_readwrite("d_target_ris", &SceneConfig::d_target_ris)
      .def_readwrite("d_ris_antenna", &SceneConfig::d_ris_antenna)
      .def_readwrite("alpha", &SceneConfig::alpha)
      .def_readwrite("gamma", &SceneConfig::gamma)
      .def_readwrite("s_amp", &SceneConfig::s_amp)
      .def_readwrite("angle_min", &SceneConfig::angle_min)
      .def_readwrite("angle_max", &SceneConfig::angle_max)
      .def_property_readonly("N", &SceneConfig::N)
      .def("validate", &SceneConfig::validate);

  m.def("steering_vector", &steering_vector, py::arg("theta_deg"), py::arg("varphi_deg"), py::arg("L"),
        py::arg("d") = 0.5);
  m.def("array_manifold", &array_manifold, py::arg("scene"), py::arg("L"));
  m.def("target_amplitudes", &target_amplitudes, py::arg("scene"));
  m.def(
      "random_control_matrix",
      [](int K, int M, std::uint64_t seed) {
        Rng rng = make_rng(seed, Stream::ControlMatrix);
        return random_control_matrix(K, M, rng).matrix();
      },
      py::arg("K"), py::arg("M"), py::arg("seed") = 0);
  m.def(
      "synthesize",
      [](const SceneConfig &scene, const CMatrix &G) {
        const auto c = synthesize_clean(scene, RisControlMatrix{G});
        return py::make_tuple(c.z, c.y0);
      },
      py::arg("scene"), py::arg("G"), "Returns (z, G z).");

  m.def("calibrate_sigma2", &calibrate_sigma2, py::arg("z"), py::arg("snr_db"));
  m.def(
      "sample_noise",
      [](Eigen::Index K, double sigma2_sq, double kappa, double variance_ratio, std::uint64_t seed) {
        return sample_noise(K, sigma2_sq, NoiseConfig{kappa, variance_ratio, 0.0, seed});
      },
      py::arg("K"), py::arg("sigma2_sq"), py::arg("kappa") = 0.1, py::arg("variance_ratio") = 100.0,
      py::arg("seed") = 0);

  m.def("lawson_norm", &lawson_norm, py::arg("v"), py::arg("lam"), py::arg("p"));
  m.def("weight_matrix", &weight_matrix, py::arg("v"), py::arg("lam"), py::arg("p"));
  m.def("residual_noise_scale", &residual_noise_scale, py::arg("y"), py::arg("G"));

  py::class_<LawsonParams>(m, "LawsonParams")
      .def(py::init<>())
      .def_readwrite("p1", &LawsonParams::p1)
      .def_readwrite("p2", &LawsonParams::p2)
      .def_readwrite("lambda1", &LawsonParams::lambda1)
      .def_readwrite("lambda2", &LawsonParams::lambda2)
      .def_readwrite("rho", &LawsonParams::rho)
      .def_readwrite("epsilon", &LawsonParams::epsilon)
      .def_readwrite("zeta", &LawsonParams::zeta)
      .def_readwrite("eta", &LawsonParams::eta)
      .def_readwrite("lambda1_floor", &LawsonParams::lambda1_floor)
      .def_readwrite("lambda1_scale", &LawsonParams::lambda1_scale)
      .def_readwrite("max_iter", &LawsonParams::max_iter)
      .def_readwrite("hz_uses_p1", &LawsonParams::hz_uses_p1);

  m.def(
      "solve",
      [](const CVector &y, const CMatrix &G, const LawsonParams &params) {
        const auto r = solve(y, G, params);
        std::vector<double> residual;
        for (const auto &t : r.trace) { residual.push_back(t.primal_residual); }
        return py::make_tuple(r.z, residual);
      },
      py::arg("y"), py::arg("G"), py::arg("params") = LawsonParams{},
      "Returns (z, primal residual per iteration).");

  m.def("hankel", &hankel, py::arg("z"), py::arg("L"), py::arg("N"));
  m.def("noise_subspace", &noise_subspace, py::arg("H"), py::arg("N"));
  m.def(
      "estimate_doas",
      [](const CVector &z, int N, int L, double varphi, double d, double grid_step) {
        HankelConfig cfg;
        cfg.N = N;
        cfg.L = L;
        cfg.grid_step = grid_step;
        const auto s = estimate_doas(z, cfg, varphi, d);
        return py::make_tuple(s.angles, s.values, s.peaks);
      },
      py::arg("z"), py::arg("N") = 3, py::arg("L") = 0, py::arg("varphi") = 10.0, py::arg("d") = 0.5,
      py::arg("grid_step") = 0.01, "Returns (angles, spectrum, peaks).");

  m.def("srp", &srp, py::arg("y"));
  m.def(
      "rosm_optimize",
      [](const CVector &z, int K, int T, std::uint64_t seed, double snr_db, std::uint64_t noise_seed, bool noisy) {
        RosmConfig cfg;
        cfg.T = T;
        cfg.seed = seed;
        cfg.noisy_probe = noisy;
        NoiseConfig nc;
        nc.snr_db = snr_db;
        nc.seed = noise_seed;
        const auto r = rosm_optimize(z, K, cfg, nc);
        return py::make_tuple(r.G.matrix(), r.index, r.srp);
      },
      py::arg("z"), py::arg("K"), py::arg("T") = 64, py::arg("seed") = 0, py::arg("snr_db") = 10.0,
      py::arg("noise_seed") = 0, py::arg("noisy_probe") = true, "Returns (G, index, probe SRPs).");

  m.def(
      "crlb",
      [](const SceneConfig &scene, const CMatrix &G, double variance) {
        const auto r = crlb_theta(fisher(scene, RisControlMatrix{G}, variance));
        return py::make_tuple(r.variance_rad2, r.rmse_deg);
      },
      py::arg("scene"), py::arg("G"), py::arg("noise_variance"), "Returns (per-target variance in rad^2, RMSE bound in deg).");

  m.def("rmse", &rmse, py::arg("estimates"), py::arg("truths"));
  m.def("default_plan_json", [] { return plan_to_json(ExperimentPlan{}); });
  m.def(
      "run_sweep",
      [](const std::string &plan_json) {
        ExperimentReport rep;
        {
          py::gil_scoped_release release;
          rep = run_sweep(parse_plan(plan_json));
        }
        py::list out;
        for (const auto &a : rep.aggregates) { out.append(summary_row(a)); }
        return out;
      },
      py::arg("plan_json"), "Runs a plan given as JSON text and returns the summary rows.");
}
