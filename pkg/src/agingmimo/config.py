"""Experiment configuration: JSON ingestion, defaults and validation."""

import hashlib
import json
from dataclasses import dataclass, field

from .channel import ChannelParams, DopplerSpec, decay_rate_from_doppler, \
    exp_corr_covariance, iid_covariance, UserLink
from .errors import ConfigError
from .estimation import WINDOWS, FrameConfig, NoiseParams
from .sinr import Scenario

EXPERIMENT_KINDS = (
    "frame-sweep", "per-slot", "power-surface", "doppler-optimum",
    "bound-curve", "window-compare", "mismatch", "mc-validate",
)

# Defaults follow the reference system parameters; the noise variances
# are chosen so the single-antenna data SNR alpha^2 P / sigma_d^2 is
# 10 dB at the default path loss and data power.
DEFAULTS = {
    "experiment": "frame-sweep",
    "n_r": 10,
    "k": 2,
    "alpha_db": 90.0,
    "p_data_mw": 125.0,
    "p_pilot_mw": 125.0,
    "f": 2,
    "sigma2_pilot": 1.25e-11,
    "sigma2_data": 1.25e-11,
    "f_d_hz": [50.0, 500.0, 1500.0],
    "t_slot_s": 32e-6,
    "window": "2b1a",
    "delta_min": 1,
    "delta_max": 50,
    "delta": 50,
    "slot": None,
    "p_pilot_grid_mw": [50.0, 75.0, 100.0, 125.0],
    "mismatch_factors": [0.2, 1.0, 5.0],
    "mc_trials": 2000,
    "seed": 0,
    "c_scale": 1.0,
    "antenna_corr": 0.0,
}

_POSITIVE_FIELDS = ("p_data_mw", "p_pilot_mw", "sigma2_pilot", "sigma2_data",
                    "t_slot_s", "c_scale")


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated experiment configuration with defaults filled in."""

    experiment: str
    n_r_list: tuple
    k: int
    alpha_db: tuple        # per user, dB
    p_data_mw: float
    p_pilot_mw: float
    f: int
    sigma2_pilot: float
    sigma2_data: float
    f_d_hz: tuple
    t_slot_s: float
    window: str
    delta_min: int
    delta_max: int
    delta: int
    slot: int
    p_pilot_grid_mw: tuple
    mismatch_factors: tuple
    mc_trials: int
    seed: int
    c_scale: float
    antenna_corr: float

    def alpha_linear(self):
        """Amplitude path-loss factors, alpha = 10^(-dB/20)."""
        return tuple(10.0 ** (-db / 20.0) for db in self.alpha_db)

    def delta_range(self):
        return range(self.delta_min, self.delta_max + 1)

    def scenario_hash(self) -> str:
        payload = json.dumps(self.as_dict(), sort_keys=True).encode()
        return hashlib.sha256(payload).hexdigest()[:16]

    def as_dict(self):
        return {
            "experiment": self.experiment, "n_r": list(self.n_r_list), "k": self.k,
            "alpha_db": list(self.alpha_db), "p_data_mw": self.p_data_mw,
            "p_pilot_mw": self.p_pilot_mw, "f": self.f,
            "sigma2_pilot": self.sigma2_pilot, "sigma2_data": self.sigma2_data,
            "f_d_hz": list(self.f_d_hz), "t_slot_s": self.t_slot_s,
            "window": self.window, "delta_min": self.delta_min,
            "delta_max": self.delta_max, "delta": self.delta, "slot": self.slot,
            "p_pilot_grid_mw": list(self.p_pilot_grid_mw),
            "mismatch_factors": list(self.mismatch_factors),
            "mc_trials": self.mc_trials, "seed": self.seed,
            "c_scale": self.c_scale, "antenna_corr": self.antenna_corr,
        }

    def build_scenario(self, n_r: int, f_d: float, p_pilot=None,
                       window=None) -> Scenario:
        """Assemble a Scenario for one sweep point."""
        q = decay_rate_from_doppler(DopplerSpec(f_d=f_d, t_slot=self.t_slot_s))
        if self.antenna_corr > 0.0:
            cov = exp_corr_covariance(self.c_scale, self.antenna_corr, n_r)
        else:
            cov = iid_covariance(self.c_scale, n_r)
        users = []
        for alpha in self.alpha_linear():
            ch = ChannelParams(cov=cov, q=q, alpha=alpha)
            users.append(UserLink(channel=ch, p_data=self.p_data_mw,
                                  p_pilot=self.p_pilot_mw if p_pilot is None else p_pilot))
        return Scenario(users=tuple(users),
                        frame=FrameConfig(delta=self.delta, f=self.f),
                        window=WINDOWS[window or self.window],
                        noise=NoiseParams(sigma2_pilot=self.sigma2_pilot,
                                          sigma2_data=self.sigma2_data))


def _fail(name, message):
    raise ConfigError(f"{name}: {message}")


def parse_config(raw: dict) -> ExperimentConfig:
    """Validate a raw key-value mapping and fill defaults."""
    unknown = set(raw) - set(DEFAULTS)
    if unknown:
        _fail(sorted(unknown)[0], "unknown configuration key")
    merged = {**DEFAULTS, **raw}

    if merged["experiment"] not in EXPERIMENT_KINDS:
        _fail("experiment", f"must be one of {', '.join(EXPERIMENT_KINDS)}")
    for name in _POSITIVE_FIELDS:
        try:
            value = float(merged[name])
        except (TypeError, ValueError):
            _fail(name, f"must be a number, got {merged[name]!r}")
        if value <= 0:
            _fail(name, f"must be > 0, got {value}")
        merged[name] = value

    n_r = merged["n_r"]
    n_r_list = tuple(int(v) for v in (n_r if isinstance(n_r, list) else [n_r]))
    if any(v < 1 for v in n_r_list):
        _fail("n_r", "antenna counts must be >= 1")

    k = int(merged["k"])
    if k < 1:
        _fail("k", "must be >= 1")
    f = int(merged["f"])
    if f < k:
        _fail("f", f"must be >= k (k={k}, f={f})")

    alpha_db = merged["alpha_db"]
    alpha_list = tuple(float(v) for v in (alpha_db if isinstance(alpha_db, list)
                                          else [alpha_db] * k))
    if len(alpha_list) != k:
        _fail("alpha_db", f"need {k} entries, got {len(alpha_list)}")

    f_d = tuple(float(v) for v in merged["f_d_hz"])
    if not f_d or any(v < 0 for v in f_d):
        _fail("f_d_hz", "need a non-empty list of frequencies >= 0")

    if merged["window"] not in WINDOWS:
        _fail("window", f"must be one of {', '.join(sorted(WINDOWS))}")

    delta_min, delta_max = int(merged["delta_min"]), int(merged["delta_max"])
    if delta_min < 1 or delta_max < delta_min:
        _fail("delta_min", f"need 1 <= delta_min <= delta_max, got "
                           f"({delta_min}, {delta_max})")
    delta = int(merged["delta"])
    if delta < 1:
        _fail("delta", "must be >= 1")
    slot = merged["slot"]
    slot = (delta + 1) // 2 if slot is None else int(slot)
    if not 1 <= slot <= delta:
        _fail("slot", f"must be in 1..{delta}, got {slot}")

    p_grid = tuple(float(v) for v in merged["p_pilot_grid_mw"])
    if not p_grid or any(v <= 0 for v in p_grid):
        _fail("p_pilot_grid_mw", "need a non-empty list of powers > 0")
    factors = tuple(float(v) for v in merged["mismatch_factors"])
    if not factors or any(v <= 0 for v in factors):
        _fail("mismatch_factors", "need a non-empty list of factors > 0")

    mc_trials = int(merged["mc_trials"])
    if mc_trials < 1:
        _fail("mc_trials", "must be >= 1")
    if merged["antenna_corr"] < 0 or merged["antenna_corr"] >= 1:
        _fail("antenna_corr", "must be in [0, 1)")

    return ExperimentConfig(
        experiment=merged["experiment"], n_r_list=n_r_list, k=k,
        alpha_db=alpha_list, p_data_mw=merged["p_data_mw"],
        p_pilot_mw=merged["p_pilot_mw"], f=f,
        sigma2_pilot=merged["sigma2_pilot"], sigma2_data=merged["sigma2_data"],
        f_d_hz=f_d, t_slot_s=merged["t_slot_s"], window=merged["window"],
        delta_min=delta_min, delta_max=delta_max, delta=delta, slot=slot,
        p_pilot_grid_mw=p_grid, mismatch_factors=factors, mc_trials=mc_trials,
        seed=int(merged["seed"]), c_scale=merged["c_scale"],
        antenna_corr=float(merged["antenna_corr"]))


def load_config(path) -> ExperimentConfig:
    """Load and validate a JSON config file; empty files mean all defaults."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not text.strip():
        raw = {}
    else:
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        _fail("<root>", "config must be a JSON object")
    return parse_config(raw)
