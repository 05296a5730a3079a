"""Frame-size search bounded by the SE upper bound, plus power/frame sweeps."""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .bounds import DEFAULT_ETA_FRACTION, se_upper_inverse
from .errors import AgingMimoError, BoundUnavailableError
from .sinr import Scenario, frame_spectral_efficiency

FALLBACK_DELTA_CEILING = 512


@dataclass
class SearchTrace:
    """Everything the frame-size search looked at.

    evaluated holds (delta, SE(delta)) in scan order; delta_max_history
    records successive search-space truncations (non-increasing).
    bound_used is False when the SE upper bound was unavailable and the
    search fell back to an exhaustive scan up to a fixed ceiling.
    """

    evaluated: list = field(default_factory=list)
    delta_max_history: list = field(default_factory=list)
    delta_opt: int = 1
    se_opt: float = 0.0
    bound_used: bool = True


def optimal_frame_size(scenario: Scenario,
                       eta_fraction: float = DEFAULT_ETA_FRACTION,
                       fallback_ceiling: int = FALLBACK_DELTA_CEILING) -> SearchTrace:
    """Scan delta upward, truncating the search with the SE upper bound.

    The incumbent starts at delta=1 (whose SE the scan computes anyway)
    rather than at an unevaluated delta_max. Whenever the incumbent
    improves, the truncation point is re-tightened via the bound
    inverse, which only ever shrinks the remaining search space. Every
    delta that is never evaluated has SE upper bound below the returned
    se_opt.
    """
    trace = SearchTrace()
    se1 = frame_spectral_efficiency(scenario, 1).se
    trace.evaluated.append((1, se1))
    trace.delta_opt, trace.se_opt = 1, se1

    try:
        delta_max = se_upper_inverse(scenario, se1, eta_fraction)
        trace.bound_used = True
    except BoundUnavailableError:
        delta_max = fallback_ceiling
        trace.bound_used = False
    trace.delta_max_history.append(delta_max)

    delta = 2
    while delta < delta_max:
        se = frame_spectral_efficiency(scenario, delta).se
        trace.evaluated.append((delta, se))
        if se > trace.se_opt:
            trace.delta_opt, trace.se_opt = delta, se
            if trace.bound_used:
                tightened = min(delta_max, se_upper_inverse(scenario, trace.se_opt,
                                                            eta_fraction))
                if tightened != delta_max:
                    delta_max = tightened
                    trace.delta_max_history.append(delta_max)
        delta += 1
    return trace


@dataclass
class SweepSurface:
    """SE over a pilot-power x frame-size grid."""

    p_pilot_grid: np.ndarray
    delta_grid: np.ndarray
    se: np.ndarray          # (len(p_pilot_grid), len(delta_grid)), NaN on failure
    errors: dict            # (p_idx, d_idx) -> message
    argmax: tuple           # (p_pilot, delta) of the best finite cell


def _with_pilot_power(scenario: Scenario, p_pilot: float) -> Scenario:
    users = tuple(replace(u, p_pilot=p_pilot) for u in scenario.users)
    return replace(scenario, users=users)


def sweep_pilot_power_and_frame(scenario: Scenario, p_pilot_grid, delta_grid,
                                threads: int = 1) -> SweepSurface:
    """Evaluate SE for every (pilot power, delta) grid cell.

    Cells are independent; per-cell failures are recorded, not fatal.
    """
    p_grid = np.asarray(list(p_pilot_grid), dtype=float)
    d_grid = np.asarray(list(delta_grid), dtype=int)
    if p_grid.size == 0 or d_grid.size == 0:
        raise ValueError("grids must be non-empty")
    se = np.full((p_grid.size, d_grid.size), np.nan)
    errors = {}

    def cell(idx):
        pi, di = idx
        scn = _with_pilot_power(scenario, float(p_grid[pi]))
        return frame_spectral_efficiency(scn, int(d_grid[di])).se

    cells = [(pi, di) for pi in range(p_grid.size) for di in range(d_grid.size)]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda idx: _safe(cell, idx), cells))
    else:
        results = [_safe(cell, idx) for idx in cells]
    for idx, (value, err) in zip(cells, results):
        if err is None:
            se[idx] = value
        else:
            errors[idx] = err

    if np.all(np.isnan(se)):
        raise AgingMimoError("every grid cell failed")
    best = np.unravel_index(np.nanargmax(se), se.shape)
    argmax = (float(p_grid[best[0]]), int(d_grid[best[1]]))
    return SweepSurface(p_pilot_grid=p_grid, delta_grid=d_grid, se=se,
                        errors=errors, argmax=argmax)


def _safe(fn, idx):
    try:
        return fn(idx), None
    except AgingMimoError as exc:
        return None, str(exc)
