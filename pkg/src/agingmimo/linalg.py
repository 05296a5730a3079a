"""Small Hermitian/PSD helpers used by the estimation and SINR layers."""

import numpy as np
import scipy.linalg

from .errors import IllConditionedError

# Condition number above which Hermitian solves are refused.
COND_LIMIT = 1e14


def herm(a):
    """Symmetrize a square matrix as (A + A^H)/2."""
    return 0.5 * (a + a.conj().T)


def min_eigval(a):
    """Smallest eigenvalue of a Hermitian matrix."""
    return float(np.linalg.eigvalsh(herm(a))[0])


def is_psd(a, tol=1e-10):
    """Check A >= 0 up to a relative tolerance on the spectral norm."""
    scale = max(float(np.linalg.norm(a, 2)), 1.0)
    return min_eigval(a) >= -tol * scale


def psd_clip(a):
    """Project a Hermitian matrix onto the PSD cone by clipping eigenvalues."""
    w, v = np.linalg.eigh(herm(a))
    w = np.clip(w, 0.0, None)
    return herm((v * w) @ v.conj().T)


def psd_sqrt_factor(a, rel_tol=1e-10):
    """Factor L with A = L L^H for a Hermitian PSD matrix.

    Raises IllConditionedError when A has eigenvalues below -rel_tol
    relative to the largest one (i.e. it is not PSD to tolerance).
    """
    a = herm(a)
    w, v = np.linalg.eigh(a)
    scale = max(float(w[-1]), 0.0)
    if w[0] < -rel_tol * max(scale, 1.0):
        raise IllConditionedError(
            f"matrix is not PSD: min eigenvalue {w[0]:.3e} vs scale {scale:.3e}"
        )
    w = np.clip(w, 0.0, None)
    return v * np.sqrt(w)


def solve_hermitian(a, b, guard=True):
    """Solve A X = B for Hermitian positive definite A.

    With guard=True the condition number is checked against COND_LIMIT
    before solving; estimation-layer callers rely on this to surface
    ill-conditioned pilot-stack covariances instead of returning noise.
    """
    a = herm(a)
    if guard:
        cond = np.linalg.cond(a)
        if not np.isfinite(cond) or cond > COND_LIMIT:
            raise IllConditionedError(f"condition number {cond:.3e} exceeds {COND_LIMIT:.0e}")
    return scipy.linalg.solve(a, b, assume_a="her")
