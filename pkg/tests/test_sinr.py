"""Tests for the deterministic-equivalent SINR and frame SE layer."""

import math

import numpy as np
import pytest

from agingmimo import (FrameConfig, NoiseParams, Scenario, WINDOWS,
                       deterministic_equivalent_sinr, frame_spectral_efficiency,
                       interference_floor, monte_carlo_sinr, scalar_iid_sinr,
                       spectral_efficiency_slot)
from agingmimo.sinr import (_matrix_slot_quantities, FIXED_POINT_TOL)

from scenario_factories import random_iid_scenario


def test_single_user_closed_form():
    # K = 1: the fixed point is gamma = tr(Phi beta^{-1}) = N_r phi / beta
    n_r, phi, beta = 6, 2.5, 0.75
    gamma = scalar_iid_sinr(np.array([phi]), beta, n_r, tagged=0)
    assert gamma == pytest.approx(n_r * phi / beta, rel=1e-14)
    res = deterministic_equivalent_sinr([phi * np.eye(n_r)],
                                        beta * np.eye(n_r), tagged=0)
    assert res.gamma_bar == pytest.approx(n_r * phi / beta, rel=1e-12)


def test_two_symmetric_users_quadratic_root():
    # equal powers: gamma solves beta*g^2 + (beta - N_r*phi + phi)*g - N_r*phi = 0
    n_r, phi, beta = 8, 1.7, 0.4
    b = beta - n_r * phi + phi
    root = (-b + math.sqrt(b * b + 4.0 * beta * n_r * phi)) / (2.0 * beta)
    gamma = scalar_iid_sinr(np.array([phi, phi]), beta, n_r, tagged=0)
    assert gamma == pytest.approx(root, rel=1e-12)


def test_fixed_point_matches_scalar_root(rng):
    for _ in range(30):
        k = int(rng.integers(1, 5))
        n_r = int(rng.integers(2, 10))
        phis = rng.uniform(0.1, 3.0, size=k)
        beta = float(rng.uniform(0.05, 2.0))
        for tagged in range(k):
            g_scalar = scalar_iid_sinr(phis, beta, n_r, tagged)
            res = deterministic_equivalent_sinr(
                [p * np.eye(n_r) for p in phis], beta * np.eye(n_r), tagged)
            assert res.gamma_bar == pytest.approx(g_scalar, rel=1e-10)
            assert res.residual < FIXED_POINT_TOL


def test_zero_signal_power_gives_zero_sinr():
    assert scalar_iid_sinr(np.array([0.0, 1.0]), 0.5, 4, tagged=0) == 0.0


def test_interference_floor():
    users = random_iid_scenario(np.random.default_rng(0), n_users=2, n_r=3).users
    zs = [0.2 * np.eye(3), 0.3 * np.eye(3)]
    beta = interference_floor(users, zs, sigma2_data=1e-6)
    expected = sum(u.channel.alpha ** 2 * u.p_data * z
                   for u, z in zip(users, zs)) + 1e-6 * np.eye(3)
    np.testing.assert_allclose(beta, expected)


def test_spectral_efficiency_slot():
    assert spectral_efficiency_slot(1.0) == pytest.approx(1.0)
    assert spectral_efficiency_slot(0.0) == 0.0
    assert spectral_efficiency_slot(math.e - 1.0, natural_log=True) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        spectral_efficiency_slot(-0.1)


def test_frame_se_overhead_denominator(rng):
    scn = random_iid_scenario(rng, n_users=2, n_r=4)
    delta = 6
    fs = frame_spectral_efficiency(scn, delta)
    assert fs.slot_se.shape == (2, delta)
    assert fs.gamma.shape == (2, delta)
    assert fs.se == pytest.approx(fs.slot_se.sum() / (delta + 1), rel=1e-14)
    assert np.all(fs.gamma >= 0.0)


def test_frame_se_natural_log_scaling(rng):
    scn = random_iid_scenario(rng, n_users=2, n_r=4)
    bits = frame_spectral_efficiency(scn, 4)
    nats = frame_spectral_efficiency(scn, 4, natural_log=True)
    assert nats.se == pytest.approx(bits.se * math.log(2.0), rel=1e-12)


def test_scalar_route_matches_matrix_route(rng):
    # the IID fast path must agree with the generic matrix fixed point
    scn = random_iid_scenario(rng, n_users=3, n_r=3)
    delta = 5
    fs = frame_spectral_efficiency(scn, delta)
    for idx, i in enumerate(range(1, delta + 1)):
        zs, phis = _matrix_slot_quantities(scn, delta, i, 1.0)
        beta = interference_floor(scn.users, zs, scn.noise.sigma2_data)
        for k in range(scn.n_users):
            res = deterministic_equivalent_sinr(phis, beta, tagged=k)
            assert res.gamma_bar == pytest.approx(fs.gamma[k, idx], rel=1e-9)


def test_matched_mismatch_factor_is_identity(rng):
    scn = random_iid_scenario(rng, n_users=2, n_r=4)
    a = frame_spectral_efficiency(scn, 5)
    b = frame_spectral_efficiency(scn, 5, doppler_scale=1.0)
    np.testing.assert_allclose(a.gamma, b.gamma, rtol=1e-14)


def test_mismatch_degrades_frame_se(rng):
    scn = random_iid_scenario(rng, n_users=2, n_r=4)
    matched = frame_spectral_efficiency(scn, 6).se
    for factor in (0.2, 5.0):
        assert frame_spectral_efficiency(scn, 6, doppler_scale=factor).se \
            <= matched + 1e-12


def test_scenario_validation(rng):
    scn = random_iid_scenario(rng, n_users=2, n_r=4)
    with pytest.raises(ValueError):
        Scenario(users=scn.users, frame=FrameConfig(delta=4, f=1),
                 window=WINDOWS["2b1a"], noise=scn.noise)  # K > F
    with pytest.raises(ValueError):
        Scenario(users=(), frame=FrameConfig(delta=4, f=2),
                 window=WINDOWS["2b1a"], noise=scn.noise)


def test_monte_carlo_reproducible_and_validated(rng):
    scn = random_iid_scenario(rng, n_users=2, n_r=8, delta=6,
                              valid_bound=False)
    i = 3
    a = monte_carlo_sinr(scn, i, trials=1500, seed=99)
    b = monte_carlo_sinr(scn, i, trials=1500, seed=99)
    assert a.mean == b.mean and a.stderr == b.stderr
    det = frame_spectral_efficiency(scn, 6).gamma[scn.tagged, i - 1]
    assert a.mean == pytest.approx(det, rel=0.2)
    with pytest.raises(ValueError):
        monte_carlo_sinr(scn, i, trials=0, seed=1)
