"""Shared scenario builders for the test suite."""

import numpy as np

from agingmimo import (ChannelParams, FrameConfig, NoiseParams, Scenario,
                       UserLink, WINDOWS, exp_corr_covariance, iid_covariance)


def random_iid_scenario(rng, n_users=None, n_r=None, f=2, window="2b1a",
                        valid_bound=False, delta=None):
    """Random IID-antenna scenario; optionally inside the bound's validity region.

    With valid_bound=True the pilot noise is scaled so every user's
    per-block noise scale s_k exceeds 3 c_k, which keeps the surrogate
    interference floor positive for every (delta, i).
    """
    k = n_users if n_users is not None else int(rng.integers(1, 4))
    n_r = n_r if n_r is not None else int(rng.integers(2, 8))
    f = max(f, k)  # at least one frequency channel per user
    tau_p = f
    users = []
    cs, alphas, p_pilots = [], [], []
    for _ in range(k):
        c = float(rng.uniform(0.5, 2.0))
        q_bar = -float(rng.uniform(0.05, 0.5))
        alpha = 10.0 ** (-rng.uniform(3.5, 5.0))
        p_data = float(rng.uniform(50.0, 200.0))
        p_pilot = float(rng.uniform(50.0, 200.0))
        ch = ChannelParams(cov=iid_covariance(c, n_r), q=complex(q_bar, 0.0),
                           alpha=alpha)
        users.append(UserLink(channel=ch, p_data=p_data, p_pilot=p_pilot))
        cs.append(c)
        alphas.append(alpha)
        p_pilots.append(p_pilot)
    if valid_bound:
        sigma2_pilot = 3.5 * tau_p * max(
            a * a * pp * c for a, pp, c in zip(alphas, p_pilots, cs))
    else:
        sigma2_pilot = float(rng.uniform(1e-9, 1e-6))
    sigma2_data = float(rng.uniform(1e-9, 1e-6))
    delta = delta if delta is not None else int(rng.integers(1, 12))
    return Scenario(users=tuple(users), frame=FrameConfig(delta=delta, f=f),
                    window=WINDOWS[window],
                    noise=NoiseParams(sigma2_pilot=sigma2_pilot,
                                      sigma2_data=sigma2_data))


def random_matrix_scenario(rng, n_users=2, n_r=3, f=2, window="2b1a",
                           valid_bound=False, delta=None):
    """Random scenario with correlated (non-IID) antenna covariances."""
    f = max(f, n_users)
    users = []
    worst = 0.0
    for _ in range(n_users):
        c = float(rng.uniform(0.5, 2.0))
        r = float(rng.uniform(0.1, 0.8))
        q_bar = -float(rng.uniform(0.05, 0.5))
        alpha = 10.0 ** (-rng.uniform(3.5, 5.0))
        ch = ChannelParams(cov=exp_corr_covariance(c, r, n_r),
                           q=complex(q_bar, 0.0), alpha=alpha)
        p_pilot = float(rng.uniform(50.0, 200.0))
        users.append(UserLink(channel=ch, p_data=float(rng.uniform(50.0, 200.0)),
                              p_pilot=p_pilot))
        # spectral norm of exp-corr covariance is below c (1+r)/(1-r)
        worst = max(worst, alpha * alpha * p_pilot * c * (1 + r) / (1 - r))
    sigma2_pilot = (3.5 * f * worst if valid_bound
                    else float(rng.uniform(1e-9, 1e-6)))
    delta = delta if delta is not None else int(rng.integers(1, 10))
    return Scenario(users=tuple(users), frame=FrameConfig(delta=delta, f=f),
                    window=WINDOWS[window],
                    noise=NoiseParams(sigma2_pilot=sigma2_pilot,
                                      sigma2_data=float(rng.uniform(1e-9, 1e-6))))
