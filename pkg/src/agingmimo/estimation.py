"""Multi-pilot MMSE channel interpolation.

The estimator conditions the channel at data slot i on the de-spread
pilot statistics observed at a window of pilot slots around the frame.
Pilot sequences never appear explicitly: with S^H S = tau_p * I only the
sequence length enters, through the per-block noise scale
s = sigma_p^2 / (alpha^2 * P_p * tau_p).
"""

from dataclasses import dataclass

import numpy as np

from .channel import ChannelParams, autocorrelation
from .linalg import herm, psd_clip, solve_hermitian


@dataclass(frozen=True)
class FrameConfig:
    """Frame geometry: delta data slots per pilot slot, F frequency channels."""

    delta: int
    f: int

    def __post_init__(self):
        if self.delta < 1:
            raise ValueError(f"delta must be >= 1, got {self.delta}")
        if self.f < 1:
            raise ValueError(f"f must be >= 1, got {self.f}")

    @property
    def tau_p(self) -> int:
        """Pilot sequence length (= number of frequency channels)."""
        return self.f


@dataclass(frozen=True)
class PilotWindow:
    """Set of pilot slots used to interpolate a data slot.

    Pilot offsets are integer multiples of the frame period (delta + 1),
    so "two before, one after" is multiples (-1, 0, 1) i.e. slots
    -(delta+1), 0 and delta+1 around the current frame.
    """

    name: str
    frame_multiples: tuple

    def __post_init__(self):
        if any(b <= a for a, b in zip(self.frame_multiples, self.frame_multiples[1:])):
            raise ValueError("pilot offsets must be strictly increasing")

    def offsets(self, delta: int) -> tuple:
        return tuple(m * (delta + 1) for m in self.frame_multiples)

    @property
    def n_pilots(self) -> int:
        return len(self.frame_multiples)


TWO_BEFORE_ONE_AFTER = PilotWindow("2b1a", (-1, 0, 1))
ONE_BEFORE_ONE_AFTER = PilotWindow("1b1a", (0, 1))
TWO_BEFORE = PilotWindow("2b", (-1, 0))

WINDOWS = {w.name: w for w in (TWO_BEFORE_ONE_AFTER, ONE_BEFORE_ONE_AFTER, TWO_BEFORE)}


@dataclass(frozen=True)
class NoiseParams:
    """AWGN variances on pilot and data symbols."""

    sigma2_pilot: float
    sigma2_data: float

    def __post_init__(self):
        if self.sigma2_pilot <= 0:
            raise ValueError(f"sigma2_pilot must be > 0, got {self.sigma2_pilot}")
        if self.sigma2_data <= 0:
            raise ValueError(f"sigma2_data must be > 0, got {self.sigma2_data}")


def pilot_noise_scale(alpha: float, p_pilot: float, tau_p: int, sigma2_pilot: float) -> float:
    """Per-pilot-block noise scale s = sigma_p^2 / (alpha^2 P_p tau_p)."""
    return sigma2_pilot / (alpha ** 2 * p_pilot * tau_p)


def _check_slot(window: PilotWindow, delta: int, i: int):
    if not 1 <= i <= delta:
        raise ValueError(f"data slot i={i} outside 1..{delta}")
    if i in window.offsets(delta):
        raise ValueError(f"data slot i={i} collides with a pilot offset")


def build_cross_covariance(p: ChannelParams, window: PilotWindow, delta: int, i: int) -> np.ndarray:
    """Block row E with one N_r x N_r block per pilot offset.

    Block j is R(|i - o_j|), conjugate-transposed when the pilot comes
    after the data slot (i < o_j).
    """
    _check_slot(window, delta, i)
    blocks = []
    for o in window.offsets(delta):
        blk = autocorrelation(p, abs(i - o))
        if i < o:
            blk = blk.conj().T
        blocks.append(blk)
    return np.hstack(blocks)


def build_pilot_stack_covariance(p: ChannelParams, window: PilotWindow, delta: int) -> np.ndarray:
    """Hermitian PSD covariance of the stacked pilot-slot channels.

    Block (j, l) is R(o_l - o_j) for o_l >= o_j, with diagonal blocks C.
    """
    offs = window.offsets(delta)
    n = p.n_r
    m = np.empty((len(offs) * n, len(offs) * n), dtype=complex)
    for j, oj in enumerate(offs):
        for l, ol in enumerate(offs):
            blk = autocorrelation(p, abs(ol - oj))
            if ol < oj:
                blk = blk.conj().T
            m[j * n:(j + 1) * n, l * n:(l + 1) * n] = blk
    return herm(m)


@dataclass(frozen=True)
class EstimationMoments:
    """Second-order moments of the multi-pilot MMSE interpolator.

    cross is the N_r x (P N_r) block row E, stack the (P N_r)^2 pilot
    covariance M, noise_scale the scalar s on the de-spread statistic,
    err_cov the error covariance Z and sig_cov the effective signal
    covariance Phi = alpha^2 P (C - Z).
    """

    cross: np.ndarray
    stack: np.ndarray
    noise_scale: float
    err_cov: np.ndarray
    sig_cov: np.ndarray
    alpha: float
    p_pilot: float
    tau_p: int


def error_covariance(p: ChannelParams, cross: np.ndarray, stack: np.ndarray,
                     noise_scale: float) -> np.ndarray:
    """Z = C - E (M + s I)^{-1} E^H, symmetrized."""
    dim = stack.shape[0]
    gain = solve_hermitian(stack + noise_scale * np.eye(dim), cross.conj().T).conj().T
    z = herm(p.cov - gain @ cross.conj().T)
    if not np.all(np.isfinite(z)):
        raise FloatingPointError("non-finite entries in error covariance")
    return z


def effective_signal_covariance(p: ChannelParams, err_cov: np.ndarray, p_data: float) -> np.ndarray:
    """Phi = alpha^2 * P_data * (C - Z)."""
    return herm(p.alpha ** 2 * p_data * (p.cov - err_cov))


def estimation_moments(p: ChannelParams, window: PilotWindow, delta: int, i: int,
                       noise: NoiseParams, p_pilot: float, tau_p: int,
                       p_data: float) -> EstimationMoments:
    """Assemble all estimator moments for one (user, delta, i)."""
    cross = build_cross_covariance(p, window, delta, i)
    stack = build_pilot_stack_covariance(p, window, delta)
    s = pilot_noise_scale(p.alpha, p_pilot, tau_p, noise.sigma2_pilot)
    z = error_covariance(p, cross, stack, s)
    phi = effective_signal_covariance(p, z, p_data)
    return EstimationMoments(cross=cross, stack=stack, noise_scale=s, err_cov=z,
                             sig_cov=phi, alpha=p.alpha, p_pilot=p_pilot, tau_p=tau_p)


def mmse_estimate(m: EstimationMoments, stacked_observation: np.ndarray) -> np.ndarray:
    """Linear MMSE channel estimate from the stacked de-spread observation.

    The observation is alpha*sqrt(P_p)*tau_p*hbar + (I (x) S^H) N, of
    dimension P*N_r; the estimate is
    (1 / (alpha sqrt(P_p) tau_p)) E (M + s I)^{-1} y.
    """
    y = np.asarray(stacked_observation)
    dim = m.stack.shape[0]
    if y.shape[-1] != dim:
        raise ValueError(f"observation dimension {y.shape[-1]} != {dim}")
    scale = 1.0 / (m.alpha * np.sqrt(m.p_pilot) * m.tau_p)
    weights = solve_hermitian(m.stack + m.noise_scale * np.eye(dim), m.cross.conj().T).conj().T
    return scale * (y @ weights.T)


def mismatched_error_covariance(true_p: ChannelParams, assumed_p: ChannelParams,
                                window: PilotWindow, delta: int, i: int,
                                noise: NoiseParams, p_pilot: float, tau_p: int,
                                p_data: float):
    """Error and signal covariance of a plug-in estimator under wrong statistics.

    The interpolator weights are built from assumed_p while the channel
    follows true_p; with matched inputs this reduces exactly to
    error_covariance / effective_signal_covariance. Phi is clipped to
    the PSD cone since the orthogonality principle fails under mismatch.
    """
    if true_p.n_r != assumed_p.n_r:
        raise ValueError("true and assumed channels must share N_r")
    s = pilot_noise_scale(true_p.alpha, p_pilot, tau_p, noise.sigma2_pilot)
    dim = window.n_pilots * true_p.n_r
    eye = np.eye(dim)

    cross_a = build_cross_covariance(assumed_p, window, delta, i)
    stack_a = build_pilot_stack_covariance(assumed_p, window, delta)
    weights = solve_hermitian(stack_a + s * eye, cross_a.conj().T).conj().T

    cross_t = build_cross_covariance(true_p, window, delta, i)
    stack_t = build_pilot_stack_covariance(true_p, window, delta)
    f_true = stack_t + s * eye

    z_mis = herm(true_p.cov
                 - weights @ cross_t.conj().T
                 - cross_t @ weights.conj().T
                 + weights @ f_true @ weights.conj().T)
    phi_mis = psd_clip(true_p.alpha ** 2 * p_data * (true_p.cov - z_mis))
    return z_mis, phi_mis
