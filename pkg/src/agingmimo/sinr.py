"""Per-slot SINR: deterministic-equivalent fixed point, scalar IID root,
spectral efficiency aggregation and a Monte-Carlo instantaneous oracle."""

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .channel import ChannelParams, sample_joint_channel
from .errors import FixedPointError
from .estimation import (FrameConfig, NoiseParams, PilotWindow, estimation_moments,
                         mismatched_error_covariance, mmse_estimate, pilot_noise_scale)
from .linalg import herm, solve_hermitian
from .scalar import scalar_error_variances, scalar_mismatched_error_variances

FIXED_POINT_TOL = 1e-12
FIXED_POINT_MAX_ITER = 10_000


@dataclass(frozen=True)
class Scenario:
    """K co-scheduled uplink users sharing one frame configuration."""

    users: tuple
    frame: FrameConfig
    window: PilotWindow
    noise: NoiseParams
    tagged: int = 0

    def __post_init__(self):
        users = tuple(self.users)
        object.__setattr__(self, "users", users)
        if len(users) < 1:
            raise ValueError("need at least one user")
        if len(users) > self.frame.f:
            raise ValueError(f"K={len(users)} exceeds F={self.frame.f} frequency channels")
        n_r = users[0].channel.n_r
        if any(u.channel.n_r != n_r for u in users):
            raise ValueError("all users must share N_r")
        if not 0 <= self.tagged < len(users):
            raise ValueError(f"tagged index {self.tagged} out of range")

    @property
    def n_users(self) -> int:
        return len(self.users)

    @property
    def n_r(self) -> int:
        return self.users[0].channel.n_r

    def iid_scales(self):
        """Per-user c with C_k = c_k I, or None if any user is not IID."""
        scales = [u.channel.iid_scale() for u in self.users]
        if any(c is None for c in scales):
            return None
        return scales


@dataclass(frozen=True)
class SinrResult:
    """Deterministic-equivalent SINR of the tagged user plus diagnostics."""

    gamma_bar: float
    iterations: int
    residual: float


def interference_floor(users, err_covs, sigma2_data: float) -> np.ndarray:
    """beta = sum_k alpha_k^2 P_k Z_k + sigma_d^2 I (Hermitian PD)."""
    n_r = users[0].channel.n_r
    beta = sigma2_data * np.eye(n_r, dtype=complex)
    for u, z in zip(users, err_covs):
        beta = beta + u.channel.alpha ** 2 * u.p_data * z
    return herm(beta)


def deterministic_equivalent_sinr(phis, beta, tagged: int,
                                  tol: float = FIXED_POINT_TOL,
                                  max_iter: int = FIXED_POINT_MAX_ITER) -> SinrResult:
    """Solve the K-equation fixed point for the tagged user's SINR.

    delta_m = tr(Phi_m (sum_{l != tagged} Phi_l/(1+delta_l) + beta)^{-1})
    solved by Picard iteration from the interference-free start
    delta_m = tr(Phi_m beta^{-1}); damping 0.5 kicks in when the update
    residual grows. Returns gamma_bar = delta_tagged.
    """
    phis = [np.asarray(p) for p in phis]
    n_users = len(phis)
    n_r = beta.shape[0]
    eye = np.eye(n_r)

    beta_inv = solve_hermitian(beta, eye, guard=False)
    deltas = np.array([float(np.real(np.trace(p @ beta_inv))) for p in phis])
    others = [m for m in range(n_users) if m != tagged]

    damping = 1.0
    prev_residual = math.inf
    for it in range(1, max_iter + 1):
        denom = beta.copy()
        for l in others:
            denom = denom + phis[l] / (1.0 + deltas[l])
        t_inv = solve_hermitian(denom, eye, guard=False)
        proposed = np.array([float(np.real(np.trace(p @ t_inv))) for p in phis])
        new = damping * proposed + (1.0 - damping) * deltas
        residual = float(np.max(np.abs(new - deltas) / np.maximum(np.abs(new), 1e-300)))
        deltas = new
        if residual < tol:
            return SinrResult(gamma_bar=max(deltas[tagged], 0.0),
                              iterations=it, residual=residual)
        if residual > prev_residual and damping == 1.0:
            damping = 0.5
        prev_residual = residual
    raise FixedPointError(
        f"SINR fixed point did not converge in {max_iter} iterations "
        f"(residual {prev_residual:.3e})",
        residual=prev_residual, iterations=max_iter)


def scalar_iid_sinr(phis, beta: float, n_r: int, tagged: int) -> float:
    """Positive root of the scalar K-equation for IID antennas.

    beta = N_r phi_t / gamma - sum_{m != tagged} phi_m / (1 + gamma phi_m / phi_t)
    solved on (0, N_r phi_t / beta] by bracketed root-finding.
    """
    phis = np.asarray(phis, dtype=float)
    phi_t = phis[tagged]
    if phi_t <= 0.0:
        return 0.0
    others = np.delete(phis, tagged)
    hi = n_r * phi_t / beta
    if others.size == 0:
        return hi

    def f(g):
        return n_r * phi_t / g - np.sum(others / (1.0 + g * others / phi_t)) - beta

    lo = hi * 1e-30
    # f is strictly decreasing, f(0+) = +inf, f(hi) <= 0
    return float(brentq(f, lo, hi, xtol=1e-300, rtol=1e-15, maxiter=200))


def spectral_efficiency_slot(gamma_bar: float, natural_log: bool = False) -> float:
    """SE of one data slot, log2(1 + gamma) bit/s/Hz (or natural log)."""
    if gamma_bar < 0:
        raise ValueError(f"gamma_bar must be >= 0, got {gamma_bar}")
    if natural_log:
        return math.log1p(gamma_bar)
    return math.log1p(gamma_bar) / math.log(2.0)


@dataclass(frozen=True)
class FrameSe:
    """Aggregate frame SE plus the per-user per-slot SE/SINR tables."""

    se: float
    slot_se: np.ndarray   # (K, delta)
    gamma: np.ndarray     # (K, delta)


def _scalar_slot_quantities(scenario: Scenario, delta: int, scales, doppler_scale: float):
    """Per-user z_k(i), phi_k(i) arrays of shape (K, delta) on the scalar path."""
    tau_p = scenario.frame.tau_p
    z = np.empty((scenario.n_users, delta))
    phi = np.empty((scenario.n_users, delta))
    for k, (user, c) in enumerate(zip(scenario.users, scales)):
        ch = user.channel
        s = pilot_noise_scale(ch.alpha, user.p_pilot, tau_p, scenario.noise.sigma2_pilot)
        if doppler_scale == 1.0:
            zk = scalar_error_variances(c, ch.q_bar, scenario.window, delta, s)
        else:
            zk = scalar_mismatched_error_variances(
                c, ch.q_bar, ch.q_bar * doppler_scale, scenario.window, delta, s)
        z[k] = zk
        phi[k] = ch.alpha ** 2 * user.p_data * np.maximum(c - zk, 0.0)
    return z, phi


def _matrix_slot_quantities(scenario: Scenario, delta: int, i: int, doppler_scale: float):
    """Per-user (Z_k, Phi_k) matrices at one data slot on the matrix path."""
    tau_p = scenario.frame.tau_p
    zs, phis = [], []
    for user in scenario.users:
        ch = user.channel
        if doppler_scale == 1.0:
            m = estimation_moments(ch, scenario.window, delta, i, scenario.noise,
                                   user.p_pilot, tau_p, user.p_data)
            zs.append(m.err_cov)
            phis.append(m.sig_cov)
        else:
            assumed = ChannelParams(cov=ch.cov, q=ch.q * doppler_scale, alpha=ch.alpha)
            z_mis, phi_mis = mismatched_error_covariance(
                ch, assumed, scenario.window, delta, i, scenario.noise,
                user.p_pilot, tau_p, user.p_data)
            zs.append(z_mis)
            phis.append(phi_mis)
    return zs, phis


def frame_spectral_efficiency(scenario: Scenario, delta: int,
                              natural_log: bool = False,
                              doppler_scale: float = 1.0) -> FrameSe:
    """Aggregate SE(delta) = sum_k sum_i SE_k(delta, i) / (delta + 1).

    The denominator charges the pilot slot as overhead. doppler_scale
    builds the interpolator with a scaled (mismatched) decay rate while
    the channel keeps the true one; 1.0 is the matched case. IID
    scenarios take the scalar route automatically.
    """
    if delta < 1:
        raise ValueError(f"delta must be >= 1, got {delta}")
    n_users, n_r = scenario.n_users, scenario.n_r
    gamma = np.empty((n_users, delta))
    scales = scenario.iid_scales()

    if scales is not None:
        z, phi = _scalar_slot_quantities(scenario, delta, scales, doppler_scale)
        sigma2 = scenario.noise.sigma2_data
        for i_idx in range(delta):
            beta = sigma2 + sum(
                u.channel.alpha ** 2 * u.p_data * z[k, i_idx]
                for k, u in enumerate(scenario.users))
            for k in range(n_users):
                gamma[k, i_idx] = scalar_iid_sinr(phi[:, i_idx], beta, n_r, tagged=k)
    else:
        for i_idx, i in enumerate(range(1, delta + 1)):
            try:
                zs, phis = _matrix_slot_quantities(scenario, delta, i, doppler_scale)
                beta = interference_floor(scenario.users, zs, scenario.noise.sigma2_data)
                for k in range(n_users):
                    gamma[k, i_idx] = deterministic_equivalent_sinr(phis, beta, tagged=k).gamma_bar
            except FixedPointError as exc:
                raise FixedPointError(
                    f"fixed point failed at slot i={i}, delta={delta}: {exc}",
                    residual=exc.residual, iterations=exc.iterations) from exc

    log_base = math.e if natural_log else 2.0
    slot_se = np.log1p(gamma) / math.log(log_base)
    return FrameSe(se=float(slot_se.sum() / (delta + 1)), slot_se=slot_se, gamma=gamma)


@dataclass(frozen=True)
class McSinr:
    """Monte-Carlo mean instantaneous SINR with its standard error."""

    mean: float
    stderr: float
    trials: int


def monte_carlo_sinr(scenario: Scenario, i: int, trials: int, seed,
                     chunk: int = 256) -> McSinr:
    """Sample the instantaneous SINR of the tagged user at data slot i.

    Per trial: all users' channels are drawn jointly at the pilot slots
    and slot i, de-spread pilot observations are formed with fresh AWGN,
    the MMSE interpolator produces hhat_k, and the optimal linear
    receiver SINR gamma = b^H Jbar^{-1} b is evaluated with
    b_k = alpha_k sqrt(P_k) hhat_k and Jbar the interference-plus-floor
    covariance. Trials are split into chunks with seeds derived from a
    single SeedSequence and reduced in a fixed order, so results are
    reproducible bit-exact for a given seed.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    delta = scenario.frame.delta
    tau_p = scenario.frame.tau_p
    window = scenario.window
    noise = scenario.noise
    offsets = window.offsets(delta)
    slots = sorted(set(offsets) | {i})
    slot_pos = slots.index(i)
    pilot_pos = [slots.index(o) for o in offsets]
    n_r = scenario.n_r

    moments = [estimation_moments(u.channel, window, delta, i, noise,
                                  u.p_pilot, tau_p, u.p_data)
               for u in scenario.users]
    beta = interference_floor(scenario.users, [m.err_cov for m in moments],
                              noise.sigma2_data)

    seq = np.random.SeedSequence(seed)
    child_seeds = seq.spawn(2 * scenario.n_users)

    values = np.empty(trials)
    done = 0
    rngs_h = [np.random.default_rng(child_seeds[2 * k]) for k in range(scenario.n_users)]
    rngs_n = [np.random.default_rng(child_seeds[2 * k + 1]) for k in range(scenario.n_users)]
    while done < trials:
        n = min(chunk, trials - done)
        bs = []
        for k, (user, m) in enumerate(zip(scenario.users, moments)):
            ch = user.channel
            h = sample_joint_channel(ch, slots, rngs_h[k], draws=n)  # (n, S, N_r)
            hbar = h[:, pilot_pos, :].reshape(n, -1)
            dim = hbar.shape[1]
            despread_noise = (rngs_n[k].standard_normal((n, dim))
                              + 1j * rngs_n[k].standard_normal((n, dim)))
            despread_noise *= np.sqrt(tau_p * noise.sigma2_pilot / 2.0)
            obs = ch.alpha * np.sqrt(user.p_pilot) * tau_p * hbar + despread_noise
            hhat = mmse_estimate(m, obs)
            bs.append(ch.alpha * np.sqrt(user.p_data) * hhat)
        b_tag = bs[scenario.tagged]
        for t in range(n):
            jbar = beta.copy()
            for l, b in enumerate(bs):
                if l != scenario.tagged:
                    jbar = jbar + np.outer(b[t], b[t].conj())
            x = solve_hermitian(jbar, b_tag[t], guard=False)
            values[done + t] = float(np.real(b_tag[t].conj() @ x))
        done += n

    mean = float(values.mean())
    stderr = float(values.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    return McSinr(mean=mean, stderr=stderr, trials=trials)
