"""Spectral-efficiency analysis of multiuser MIMO uplinks over aging channels.

The package models a block-fading uplink whose channels age between
periodic pilot slots following a first-order autoregressive process,
estimates them by multi-pilot MMSE interpolation, evaluates the
large-system deterministic-equivalent SINR per data slot, bounds the
achievable spectral efficiency in closed form, and searches for the
frame size (pilot spacing) that maximizes it.
"""

__version__ = "0.1.0"

from .errors import (AgingMimoError, BoundUnavailableError, ConfigError,
                     FixedPointError, IllConditionedError, SearchCeilingError)
from .channel import (ChannelParams, DopplerSpec, UserLink, autocorrelation,
                      bessel_autocorrelation, decay_rate_from_doppler,
                      doppler_from_decay, exp_corr_covariance, iid_covariance,
                      joint_covariance, sample_joint_channel)
from .estimation import (FrameConfig, NoiseParams, PilotWindow, WINDOWS,
                         TWO_BEFORE, TWO_BEFORE_ONE_AFTER, ONE_BEFORE_ONE_AFTER,
                         estimation_moments, mismatched_error_covariance,
                         mmse_estimate, pilot_noise_scale)
from .scalar import (scalar_error_variance, scalar_error_variances,
                     scalar_mismatched_error_variances)
from .sinr import (FrameSe, McSinr, Scenario, SinrResult,
                   deterministic_equivalent_sinr, frame_spectral_efficiency,
                   interference_floor, monte_carlo_sinr, scalar_iid_sinr,
                   spectral_efficiency_slot)
from .bounds import (eta_max, gamma_upper, m3_eigenvalues, m3_kernel, rho,
                     se_upper_inverse, se_upper_total, upper_bound_moments)
from .optimize import (SearchTrace, SweepSurface, optimal_frame_size,
                       sweep_pilot_power_and_frame)
from .config import ExperimentConfig, load_config, parse_config
from .runner import SweepRecord, run_experiment, write_csv

__all__ = [name for name in dir() if not name.startswith("_")]
