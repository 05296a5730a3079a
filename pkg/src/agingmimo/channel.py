"""Aging-channel model: AR(1)-in-time Rayleigh fading with exponential decay.

The continuous-time channel is represented per slot lag ``i`` by the
autocovariance R(i) = C exp(q* i), where C is the stationary covariance
across antennas and q is a complex per-slot decay rate with Re(q) <= 0.
The decay rate maps to a maximum Doppler frequency through
Re(q) = -2*pi*f_D*T.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.special import j0

from .errors import IllConditionedError
from .linalg import herm, is_psd, psd_sqrt_factor

_TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class DopplerSpec:
    """Maximum Doppler frequency (Hz) and slot duration (s)."""

    f_d: float
    t_slot: float

    def __post_init__(self):
        if self.f_d < 0:
            raise ValueError(f"f_d must be >= 0, got {self.f_d}")
        if self.t_slot <= 0:
            raise ValueError(f"t_slot must be > 0, got {self.t_slot}")


def decay_rate_from_doppler(d: DopplerSpec) -> complex:
    """Per-slot complex decay rate q for a Doppler spec.

    Uses Re(q) = -2*pi*f_D*T and Im(q) = 0, so that Re(q) < 0 whenever
    f_D > 0.
    """
    return complex(-_TWO_PI * d.f_d * d.t_slot, 0.0)


def doppler_from_decay(q: complex, t_slot: float) -> float:
    """Inverse of decay_rate_from_doppler (Doppler frequency in Hz)."""
    return -q.real / (_TWO_PI * t_slot)


def iid_covariance(c: float, n_r: int) -> np.ndarray:
    """Stationary covariance c*I for IID antennas."""
    return c * np.eye(n_r)


def exp_corr_covariance(c: float, r: float, n_r: int) -> np.ndarray:
    """Exponential antenna correlation C_{mn} = c * r^|m-n|."""
    if not 0 <= r < 1:
        raise ValueError(f"correlation coefficient must be in [0, 1), got {r}")
    idx = np.arange(n_r)
    return c * r ** np.abs(idx[:, None] - idx[None, :])


@dataclass(frozen=True)
class ChannelParams:
    """Stationary covariance, decay rate and large-scale fading of one link."""

    cov: np.ndarray
    q: complex
    alpha: float

    def __post_init__(self):
        cov = np.asarray(self.cov, dtype=complex)
        object.__setattr__(self, "cov", cov)
        if cov.ndim != 2 or cov.shape[0] != cov.shape[1]:
            raise ValueError(f"cov must be square, got shape {cov.shape}")
        if not np.allclose(cov, cov.conj().T):
            raise ValueError("cov must be Hermitian")
        if not is_psd(cov):
            raise ValueError("cov must be positive semidefinite")
        if self.q.real > 0:
            raise ValueError(f"Re(q) must be <= 0, got {self.q.real}")
        if self.alpha <= 0:
            raise ValueError(f"alpha must be > 0, got {self.alpha}")

    @property
    def n_r(self) -> int:
        return self.cov.shape[0]

    @property
    def q_bar(self) -> float:
        return self.q.real

    def iid_scale(self, tol=1e-12):
        """Return c if cov == c*I within tolerance, else None."""
        c = float(np.real(self.cov[0, 0]))
        if np.allclose(self.cov, c * np.eye(self.n_r), rtol=tol, atol=tol * max(c, 1.0)):
            return c
        return None


@dataclass(frozen=True)
class UserLink:
    """One user's channel plus its per-symbol transmit powers (mW)."""

    channel: ChannelParams
    p_data: float
    p_pilot: float

    def __post_init__(self):
        if self.p_data <= 0:
            raise ValueError(f"p_data must be > 0, got {self.p_data}")
        if self.p_pilot <= 0:
            raise ValueError(f"p_pilot must be > 0, got {self.p_pilot}")


def autocorrelation(p: ChannelParams, lag: int) -> np.ndarray:
    """Autocovariance R(lag) = C exp(q* lag) for lag >= 0 (in slots)."""
    if lag < 0:
        raise ValueError(f"lag must be >= 0, got {lag}")
    return p.cov * np.exp(np.conj(p.q) * lag)


def bessel_autocorrelation(d: DopplerSpec, c_scale: float, lag: int) -> float:
    """Reference Jakes autocorrelation c * J0(2*pi*f_D*T*lag).

    Only used as a reference curve; the estimator works on the
    exponential model.
    """
    if lag < 0:
        raise ValueError(f"lag must be >= 0, got {lag}")
    return c_scale * float(j0(_TWO_PI * d.f_d * d.t_slot * lag))


def joint_covariance(p: ChannelParams, slots) -> np.ndarray:
    """Joint covariance of (h(t) for t in slots), stacked per slot.

    Block (a, b) is E(h(t_a) h^H(t_b)) = R(t_b - t_a) for t_b >= t_a and
    the conjugate transpose otherwise.
    """
    slots = list(slots)
    n = p.n_r
    cov = np.empty((len(slots) * n, len(slots) * n), dtype=complex)
    for a, ta in enumerate(slots):
        for b, tb in enumerate(slots):
            blk = autocorrelation(p, abs(tb - ta))
            if tb < ta:
                blk = blk.conj().T
            cov[a * n:(a + 1) * n, b * n:(b + 1) * n] = blk
    return herm(cov)


def sample_joint_channel(p: ChannelParams, slots, rng, draws: int = 1) -> np.ndarray:
    """Draw joint realizations of the channel at the given slots.

    slots must be sorted ascending. Returns an array of shape
    (draws, len(slots), N_r); the default draws=1 gives one realization
    per slot. rng is a numpy Generator (or a seed accepted by
    default_rng), which makes sampling deterministic under a fixed seed.

    Raises IllConditionedError when the assembled joint covariance is not
    PSD, which signals an inconsistent (C, q) pair.
    """
    slots = list(slots)
    if any(b < a for a, b in zip(slots, slots[1:])):
        raise ValueError("slots must be sorted ascending")
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    cov = joint_covariance(p, slots)
    try:
        factor = psd_sqrt_factor(cov)
    except IllConditionedError as exc:
        raise IllConditionedError(f"joint channel covariance is not PSD: {exc}") from exc
    dim = cov.shape[0]
    white = (rng.standard_normal((draws, dim)) + 1j * rng.standard_normal((draws, dim)))
    white /= np.sqrt(2.0)
    samples = white @ factor.T  # row w -> F @ w, so cov = F F^H
    return samples.reshape(draws, len(slots), p.n_r)
