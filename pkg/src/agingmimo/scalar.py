"""Scalar reduction of the estimator for IID antennas (C = c*I).

All covariances collapse to real multiples of the identity, so the error
variance per slot comes from a P x P kernel solve instead of block
matrices. This path backs the fast frame sweeps and cross-checks the
matrix path.
"""

import numpy as np

from .estimation import PilotWindow


def scalar_kernel(c: float, q_bar: float, window: PilotWindow, delta: int) -> np.ndarray:
    """P x P pilot-stack kernel with entries c * exp(q_bar |o_j - o_l|)."""
    offs = np.asarray(window.offsets(delta), dtype=float)
    return c * np.exp(q_bar * np.abs(offs[:, None] - offs[None, :]))


def scalar_cross_rows(c: float, q_bar: float, window: PilotWindow, delta: int,
                      slots=None) -> np.ndarray:
    """Cross-covariance rows c * exp(q_bar |i - o_j|), one row per data slot."""
    if slots is None:
        slots = np.arange(1, delta + 1)
    slots = np.atleast_1d(np.asarray(slots, dtype=float))
    offs = np.asarray(window.offsets(delta), dtype=float)
    return c * np.exp(q_bar * np.abs(slots[:, None] - offs[None, :]))


def scalar_error_variances(c: float, q_bar: float, window: PilotWindow, delta: int,
                           s: float, slots=None) -> np.ndarray:
    """Error variances z(i) = c - e(i) (K + s I)^{-1} e(i)^T per data slot."""
    kernel = scalar_kernel(c, q_bar, window, delta) + s * np.eye(window.n_pilots)
    rows = scalar_cross_rows(c, q_bar, window, delta, slots)
    gains = np.linalg.solve(kernel, rows.T).T
    return c - np.einsum("ij,ij->i", gains, rows)


def scalar_error_variance(c: float, q_bar: float, window: PilotWindow, delta: int,
                          i: int, s: float) -> float:
    """Error variance for a single data slot."""
    return float(scalar_error_variances(c, q_bar, window, delta, s, slots=[i])[0])


def scalar_mismatched_error_variances(c: float, q_bar_true: float, q_bar_assumed: float,
                                      window: PilotWindow, delta: int, s: float,
                                      slots=None) -> np.ndarray:
    """Plug-in error variances when the interpolator assumes a wrong decay rate."""
    eye = s * np.eye(window.n_pilots)
    kernel_a = scalar_kernel(c, q_bar_assumed, window, delta) + eye
    rows_a = scalar_cross_rows(c, q_bar_assumed, window, delta, slots)
    weights = np.linalg.solve(kernel_a, rows_a.T).T

    kernel_t = scalar_kernel(c, q_bar_true, window, delta) + eye
    rows_t = scalar_cross_rows(c, q_bar_true, window, delta, slots)
    quad = np.einsum("ij,jk,ik->i", weights, kernel_t, weights)
    lin = np.einsum("ij,ij->i", weights, rows_t)
    return c - 2.0 * lin + quad
