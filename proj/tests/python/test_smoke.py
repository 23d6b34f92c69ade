# SPDX-License-Identifier: Apache-2.0
import math

import numpy as np
import pytest

import lnmusic as lm


def test_steering_vector_closed_form():
    a = lm.steering_vector(20.0, 10.0, 3, 0.5)
    assert np.allclose(a, [1, 1j, -1], atol=1e-12)
    assert np.array_equal(lm.steering_vector(-10.0, 10.0, 5), np.ones(5))


def test_lawson_norm_values():
    v = np.array([1.0 + 0j])
    assert lm.lawson_norm(v, 0.3, 0.4) == pytest.approx(0.933380668061437196, rel=1e-14)
    w = np.array([1 + 2j, -0.5j, 3.0])
    assert lm.lawson_norm(w, 0.7, 2.0) == pytest.approx(np.sum(np.abs(w) ** 2), rel=1e-15)
    with pytest.raises(ValueError):
        lm.lawson_norm(w, 0.0, 0.4)


def test_noiseless_pipeline_recovers_angles():
    scene = lm.SceneConfig()
    G = lm.random_control_matrix(scene.K, scene.M, seed=3)
    z, y = lm.synthesize(scene, G)
    assert np.allclose(G @ z, y)
    z_hat, residual = lm.solve(y, G, lm.LawsonParams())
    assert np.linalg.norm(z_hat - z) < 1e-2 * np.linalg.norm(z)
    assert len(residual) == 40
    _, values, peaks = lm.estimate_doas(z_hat, N=3, L=8)
    assert len(values) == 8001
    assert np.allclose(peaks, scene.theta, atol=0.01 + 1e-9)


def test_estimation_failure_is_raised():
    with pytest.raises(RuntimeError):
        lm.estimate_doas(np.zeros(32, dtype=complex), N=3)


def test_noise_and_crlb():
    v = lm.sample_noise(200000, 1.0, kappa=0.1, variance_ratio=100.0, seed=1)
    assert np.mean(np.abs(v) ** 2) == pytest.approx(11.0, rel=0.03)
    scene = lm.SceneConfig()
    G = lm.random_control_matrix(scene.K, scene.M, seed=1)
    _, hi = lm.crlb(scene, G, 1e-2)
    _, lo = lm.crlb(scene, G, 1e-3)
    assert lo < hi
    assert lo == pytest.approx(hi / math.sqrt(10.0), rel=1e-9)


def test_rmse_and_plan_round_trip():
    assert lm.rmse([[-19, 0, 25], [-20, 2, 25]], [[-20, 0, 25]] * 2) == pytest.approx(math.sqrt(5 / 6))
    plan = lm.default_plan()
    plan.update({"n_mc": 3, "noiseless": True, "methods": ["ln_music", "omp"]})
    rows = lm.run_plan(plan)
    assert [r["method"] for r in rows] == ["ln_music", "omp"]
    assert rows[0]["recovery_rate"] == 1.0
    with pytest.raises(ValueError):
        lm.run_plan({"bogus": 1})
