"""Tests for the frame-size search and power/frame sweeps."""

import numpy as np
import pytest

from agingmimo import (frame_spectral_efficiency, optimal_frame_size,
                       se_upper_inverse, sweep_pilot_power_and_frame)

from scenario_factories import random_iid_scenario


def test_search_matches_exhaustive(rng):
    for _ in range(15):
        scn = random_iid_scenario(rng, valid_bound=True)
        trace = optimal_frame_size(scn)
        assert trace.bound_used
        delta_max = trace.delta_max_history[0]
        ses = [frame_spectral_efficiency(scn, d).se
               for d in range(1, delta_max + 1)]
        exhaustive_opt = int(np.argmax(ses)) + 1
        assert trace.delta_opt == exhaustive_opt
        assert trace.se_opt == pytest.approx(max(ses), rel=1e-12)
        assert len(trace.evaluated) <= len(ses)


def test_search_truncation_is_sound(rng):
    # every delta past the final truncation point has bound below the optimum
    scn = random_iid_scenario(rng, n_users=2, n_r=6, valid_bound=True)
    trace = optimal_frame_size(scn)
    final_max = trace.delta_max_history[-1]
    assert all(b <= a for a, b in zip(trace.delta_max_history,
                                      trace.delta_max_history[1:]))
    from agingmimo import se_upper_total
    assert se_upper_total(scn, final_max) < trace.se_opt


def test_search_falls_back_without_bound(rng):
    # low pilot noise breaks the bound; the search must still find the optimum
    scn = random_iid_scenario(rng, n_users=2, n_r=4, valid_bound=False, delta=4)
    trace = optimal_frame_size(scn, fallback_ceiling=40)
    if not trace.bound_used:
        assert trace.delta_max_history == [40]
    ses = [frame_spectral_efficiency(scn, d).se for d in range(1, 40)]
    assert trace.se_opt == pytest.approx(max(ses), rel=1e-12)


def test_sweep_surface_shape_and_argmax(rng):
    scn = random_iid_scenario(rng, n_users=2, n_r=4, valid_bound=True)
    p_grid = [50.0, 100.0, 150.0]
    d_grid = range(1, 7)
    surf = sweep_pilot_power_and_frame(scn, p_grid, d_grid)
    assert surf.se.shape == (3, 6)
    assert np.isfinite(surf.se).all()
    assert not surf.errors
    best = np.unravel_index(np.argmax(surf.se), surf.se.shape)
    assert surf.argmax == (p_grid[best[0]], list(d_grid)[best[1]])
    # more pilot power never hurts at fixed delta
    assert np.all(np.diff(surf.se, axis=0) >= -1e-12)


def test_sweep_surface_threaded_matches_serial(rng):
    scn = random_iid_scenario(rng, n_users=2, n_r=4, valid_bound=True)
    serial = sweep_pilot_power_and_frame(scn, [60.0, 120.0], range(1, 5))
    threaded = sweep_pilot_power_and_frame(scn, [60.0, 120.0], range(1, 5),
                                           threads=4)
    np.testing.assert_array_equal(serial.se, threaded.se)


def test_sweep_surface_rejects_empty_grid(rng):
    scn = random_iid_scenario(rng, n_users=1, n_r=2)
    with pytest.raises(ValueError):
        sweep_pilot_power_and_frame(scn, [], range(1, 3))
