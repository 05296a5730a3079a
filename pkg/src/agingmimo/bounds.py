"""Closed-form upper bounds on the deterministic-equivalent SINR and SE.

The bound replaces the pilot-stack covariance with a diagonal Loewner
lower bound eta*I (x) C, which turns the estimator quadratic form into
rho(delta, i) * C (eta C + Sigma)^{-1} C with rho a sum of decaying
exponentials. The resulting per-frame SE bound is monotone decreasing in
delta, which is what makes the frame-size search truncation work.
"""

import math

import numpy as np

from .errors import BoundUnavailableError, SearchCeilingError
from .estimation import TWO_BEFORE_ONE_AFTER, PilotWindow, pilot_noise_scale
from .linalg import herm, min_eigval, solve_hermitian
from .sinr import Scenario

DEFAULT_ETA_FRACTION = 0.99
DEFAULT_DELTA_CEILING = 100_000


def rho(q_bar: float, delta: int, i: int,
        window: PilotWindow = TWO_BEFORE_ONE_AFTER) -> float:
    """rho(delta, i) = sum over pilot offsets o of exp(2 q_bar |i - o|).

    For the three-pilot window this is
    e^{2q(delta+1+i)} + e^{2q i} + e^{2q(delta+1-i)}. Two-pilot windows
    drop the missing term; that generalization is experimental and not
    covered by the bound theorem.
    """
    if not 1 <= i <= delta:
        raise ValueError(f"data slot i={i} outside 1..{delta}")
    return float(sum(math.exp(2.0 * q_bar * abs(i - o)) for o in window.offsets(delta)))


def m3_kernel(a: float, i: int) -> np.ndarray:
    """Scalar 3x3 pilot-stack kernel with ratio a^i, a = e^{2 q_bar}."""
    b = a ** i
    return np.array([[1.0, b, b * b],
                     [b, 1.0, b],
                     [b * b, b, 1.0]])


def m3_eigenvalues(a: float, i: int):
    """Closed-form eigenvalues (l1, l2, l3) of the 3x3 kernel.

    l1 = 1 - a^{2i}, l2/l3 = (2 + a^{2i} -/+ a^i sqrt(8 + a^{2i})) / 2;
    the minimum over i >= 1 is l2(1).
    """
    b = a ** i
    root = b * math.sqrt(8.0 + b * b)
    l1 = 1.0 - b * b
    l2 = 0.5 * (2.0 + b * b - root)
    l3 = 0.5 * (2.0 + b * b + root)
    return l1, l2, l3


def eta_max(a: float) -> float:
    """Largest admissible eta, (2 + a^2 - a sqrt(8 + a^2)) / 2 = l2(1)."""
    if not 0.0 < a < 1.0:
        raise BoundUnavailableError(f"need 0 < a < 1 (q_bar < 0), got a={a}")
    return 0.5 * (2.0 + a * a - a * math.sqrt(8.0 + a * a))


def _user_bound_scales(scenario: Scenario, eta_fraction: float):
    """Per-user (rho-exponent base a_k, eta_k, noise scale s_k)."""
    if not 0.0 < eta_fraction < 1.0:
        raise ValueError(f"eta_fraction must be in (0, 1), got {eta_fraction}")
    out = []
    for u in scenario.users:
        q_bar = u.channel.q_bar
        if q_bar >= 0:
            raise BoundUnavailableError("bound requires q_bar < 0 for every user")
        a = math.exp(2.0 * q_bar)
        eta = eta_fraction * eta_max(a)
        s = pilot_noise_scale(u.channel.alpha, u.p_pilot, scenario.frame.tau_p,
                              scenario.noise.sigma2_pilot)
        out.append((a, eta, s))
    return out


def upper_bound_moments(scenario: Scenario, user_idx: int, delta: int, i: int,
                        eta_fraction: float = DEFAULT_ETA_FRACTION):
    """(Z_u, Phi_u) of one user: Z_u = C - rho C (eta C + s I)^{-1} C."""
    scales = _user_bound_scales(scenario, eta_fraction)
    _, eta, s = scales[user_idx]
    u = scenario.users[user_idx]
    cov = u.channel.cov
    n_r = cov.shape[0]
    r = rho(u.channel.q_bar, delta, i, scenario.window)
    core = cov @ solve_hermitian(eta * cov + s * np.eye(n_r), cov)
    z_u = herm(cov - r * core)
    phi_u = herm(u.channel.alpha ** 2 * u.p_data * r * core)
    return z_u, phi_u


def gamma_upper(scenario: Scenario, delta: int, i: int,
                eta_fraction: float = DEFAULT_ETA_FRACTION,
                tagged=None) -> float:
    """SINR upper bound tr(Phi_u (sum_l a_l^2 P_l Z_u_l + sigma_d^2 I)^{-1}).

    Each user contributes its own rho_k and eta_k. Raises
    BoundUnavailableError when any q_bar >= 0 or when the surrogate
    interference floor loses positive definiteness (outside the bound's
    validity region).
    """
    if tagged is None:
        tagged = scenario.tagged
    scales = scenario.iid_scales()
    if scales is not None:
        gammas = _gamma_upper_scalar_all(scenario, delta, i, eta_fraction, scales)
        return gammas[tagged]

    n_r = scenario.n_r
    beta_u = scenario.noise.sigma2_data * np.eye(n_r, dtype=complex)
    phi_u_tagged = None
    for k, u in enumerate(scenario.users):
        z_u, phi_u = upper_bound_moments(scenario, k, delta, i, eta_fraction)
        beta_u = beta_u + u.channel.alpha ** 2 * u.p_data * z_u
        if k == tagged:
            phi_u_tagged = phi_u
    if min_eigval(beta_u) <= 0.0:
        raise BoundUnavailableError(
            "surrogate interference floor is not positive definite; the bound "
            "does not apply at these parameters")
    return float(np.real(np.trace(phi_u_tagged @ solve_hermitian(beta_u, np.eye(n_r),
                                                                 guard=False))))


def _scalar_bound_slots(scenario: Scenario, delta: int, slots, eta_fraction, scales):
    """Per-user (z_u, phi_u) arrays over the given slots for IID scenarios."""
    bound_scales = _user_bound_scales(scenario, eta_fraction)
    slots = np.atleast_1d(np.asarray(slots, dtype=float))
    offs = np.asarray(scenario.window.offsets(delta), dtype=float)
    z_u = np.empty((scenario.n_users, slots.size))
    phi_u = np.empty((scenario.n_users, slots.size))
    for k, (u, c, (a, eta, s)) in enumerate(zip(scenario.users, scales, bound_scales)):
        q_bar = u.channel.q_bar
        r = np.exp(2.0 * q_bar * np.abs(slots[:, None] - offs[None, :])).sum(axis=1)
        core = c * c / (eta * c + s)
        z_u[k] = c - r * core
        phi_u[k] = u.channel.alpha ** 2 * u.p_data * r * core
    return z_u, phi_u


def _gamma_upper_scalar_all(scenario: Scenario, delta: int, i: int, eta_fraction, scales):
    z_u, phi_u = _scalar_bound_slots(scenario, delta, [i], eta_fraction, scales)
    beta_u = scenario.noise.sigma2_data + sum(
        u.channel.alpha ** 2 * u.p_data * z_u[k, 0]
        for k, u in enumerate(scenario.users))
    if beta_u <= 0.0:
        raise BoundUnavailableError(
            "surrogate interference floor is not positive; the bound does not "
            "apply at these parameters")
    return scenario.n_r * phi_u[:, 0] / beta_u


def se_upper_total(scenario: Scenario, delta: int,
                   eta_fraction: float = DEFAULT_ETA_FRACTION,
                   natural_log: bool = False) -> float:
    """SE upper bound sum_k sum_i log(1 + gamma_u_k(delta, i)) / delta.

    The denominator is delta (not delta + 1), which is what makes the
    bound monotone decreasing in delta.
    """
    if delta < 1:
        raise ValueError(f"delta must be >= 1, got {delta}")
    log_base = math.e if natural_log else 2.0
    scales = scenario.iid_scales()
    if scales is not None:
        slots = np.arange(1, delta + 1)
        z_u, phi_u = _scalar_bound_slots(scenario, delta, slots, eta_fraction, scales)
        beta_u = scenario.noise.sigma2_data + sum(
            u.channel.alpha ** 2 * u.p_data * z_u[k]
            for k, u in enumerate(scenario.users))
        if np.any(beta_u <= 0.0):
            raise BoundUnavailableError(
                "surrogate interference floor is not positive; the bound does "
                "not apply at these parameters")
        gamma_u = scenario.n_r * phi_u / beta_u[None, :]
        return float(np.log1p(gamma_u).sum() / math.log(log_base) / delta)

    total = 0.0
    for k in range(scenario.n_users):
        for i in range(1, delta + 1):
            g = gamma_upper(scenario, delta, i, eta_fraction, tagged=k)
            total += math.log1p(g) / math.log(log_base)
    return total / delta


def se_upper_inverse(scenario: Scenario, target_se: float,
                     eta_fraction: float = DEFAULT_ETA_FRACTION,
                     ceiling: int = DEFAULT_DELTA_CEILING,
                     natural_log: bool = False) -> int:
    """Smallest delta with SE_u(delta) < target_se.

    Exploits monotonicity: exponential bracketing followed by binary
    search. Returns 1 when even SE_u(1) is below the target. Raises
    SearchCeilingError when the bracket exceeds the ceiling.
    """
    if target_se <= 0:
        raise ValueError(f"target_se must be > 0, got {target_se}")

    def below(d):
        return se_upper_total(scenario, d, eta_fraction, natural_log) < target_se

    if below(1):
        return 1
    lo = 1  # SE_u(lo) >= target
    hi = 2
    while not below(hi):
        lo = hi
        hi *= 2
        if hi > ceiling:
            raise SearchCeilingError(
                f"SE upper-bound inverse exceeded ceiling {ceiling}", ceiling=ceiling)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if below(mid):
            hi = mid
        else:
            lo = mid
    return hi
