// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "helpers.hpp"
#include "lnmusic/baselines.hpp"
#include "lnmusic/hankel_music.hpp"
#include "lnmusic/scene.hpp"

using namespace lnmusic;

namespace {

CMatrix control(std::uint64_t seed, int K = 128, int M = 32)
{
  Rng rng(seed);
  return random_control_matrix(K, M, rng).matrix();
}

} // namespace

TEST_CASE("OMP on exact dictionary atoms")
{
  const CMatrix G = control(1);
  const auto dict = GridDictionary::build(G, HankelConfig{}.grid(), 10.0, 0.5);
  CHECK((dict.D.colwise().norm().array() - 1.0).abs().maxCoeff() < 1e-12);

  const auto one = omp(CVector(dict.D.col(1234) * cplx(2.0, 1.0)), dict, 1);
  CHECK(one.support.front() == 1234);

  const auto zero = omp(CVector::Zero(G.rows()), dict, 3);
  CHECK(zero.degenerate);
  CHECK(zero.support == std::vector<Eigen::Index>{0, 1, 2});

  CHECK_THROWS_AS(omp(CVector::Zero(G.rows() + 1), dict, 1), ConfigError);
  CHECK_THROWS_AS(omp(CVector::Zero(G.rows()), dict, 0), ConfigError);
}

TEST_CASE("OMP recovers on-grid targets without noise")
{
  // Exact support needs a grid whose neighbouring atoms are well separated; on the
  // 0.01 degree grid greedy selection settles on a nearby atom instead.
  HankelConfig coarse;
  coarse.grid_step = 5.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    SceneConfig scene;
    Rng rng(seed);
    randomize_source_phases(scene, rng);
    const RisControlMatrix G = random_control_matrix(scene.K, scene.M, rng);
    const auto clean = synthesize_clean(scene, G);
    const auto dict = GridDictionary::build(G.matrix(), coarse.grid(), scene.varphi, scene.d);
    const auto r = omp(clean.y0, dict, 3);
    REQUIRE(r.angles.size() == 3);
    for (int n = 0; n < 3; ++n) { CHECK(std::abs(r.angles[n] - scene.theta[n]) < 1e-9); }
    for (std::size_t i = 1; i < r.residual_norms.size(); ++i) {
      CHECK(r.residual_norms[i] < r.residual_norms[i - 1]);
    }
    CHECK(r.residual_norms.back() < 1e-9 * r.residual_norms.front());

    const auto fine = GridDictionary::build(G.matrix(), HankelConfig{}.grid(), scene.varphi, scene.d);
    const auto rf = omp(clean.y0, fine, 3);
    for (int n = 0; n < 3; ++n) { CHECK(std::abs(rf.angles[n] - scene.theta[n]) < 1.0); }
  }
}

TEST_CASE("Lp-ADM objective never increases")
{
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const CMatrix G = control(seed, 64, 16);
    std::mt19937_64 rng(seed);
    const CVector y = G * test::random_cvector(16, rng) + test::random_cvector(64, rng, 0.3);
    LpAdmConfig cfg;
    cfg.rho = 0.5;
    const auto r = lp_adm(y, G, cfg);
    REQUIRE(r.objective.size() > 1);
    for (std::size_t i = 1; i < r.objective.size(); ++i) {
      CHECK(r.objective[i] <= r.objective[i - 1] * (1.0 + 1e-12));
    }
    CHECK(r.objective.back() == doctest::Approx(lp_adm_objective(y, G, r.z, cfg)).epsilon(1e-10));
  }
}

TEST_CASE("Lp-ADM at p = 2 without sparsity is least squares")
{
  const CMatrix G = control(3);
  std::mt19937_64 rng(3);
  const CVector z = test::random_cvector(32, rng);
  const CVector y = G * z + test::random_cvector(128, rng, 0.1);
  LpAdmConfig cfg;
  cfg.p = 2.0;
  cfg.rho = 0.0;
  cfg.max_iter = 500;
  const CVector ls = G.colPivHouseholderQr().solve(y);
  CHECK((lp_adm(y, G, cfg).z - ls).norm() / ls.norm() < 1e-6);
}

TEST_CASE("Lp-ADM at p = 2 matches plain ISTA")
{
  const CMatrix G = control(4, 20, 8);
  std::mt19937_64 rng(4);
  const CVector y = test::random_cvector(20, rng, 2.0);
  LpAdmConfig cfg;
  cfg.p = 2.0;
  cfg.rho = 3.0;
  cfg.max_iter = 3000;

  // ISTA on sum |r|^2 + rho ||z||_1 with fixed step 1 / (2 ||G||^2).
  const double lip = 2.0 * std::pow(Eigen::JacobiSVD<CMatrix>(G).singularValues()(0), 2);
  const double step = 1.0 / lip;
  CVector z = CVector::Zero(8);
  for (int it = 0; it < 20000; ++it) {
    const CVector v = z + 2.0 * step * (G.adjoint() * (y - G * z));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      const double m = std::abs(v(i));
      z(i) = m > step * cfg.rho ? v(i) * ((m - step * cfg.rho) / m) : cplx(0.0, 0.0);
    }
  }
  const double ista = lp_adm_objective(y, G, z, cfg);
  const auto r = lp_adm(y, G, cfg);
  CHECK(test::rel_err(r.objective.back(), ista) < 1e-8);
  CHECK((r.z - z).norm() <= 1e-5 * z.norm());
}

TEST_CASE("Lp-ADM parameter checks")
{
  LpAdmConfig cfg;
  cfg.step0 = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ParameterError);
  cfg = LpAdmConfig{};
  cfg.p = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ParameterError);
  cfg = LpAdmConfig{};
  cfg.rho = -1.0;
  CHECK_THROWS_AS(cfg.validate(), ParameterError);
}
