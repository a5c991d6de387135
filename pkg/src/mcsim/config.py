"""JSON configuration for the simulator, controller and metrics.

One file carries five optional sections (vehicle, spring, estimator,
controller, harness); every key falls back to the built-in defaults, which
reproduce the reference parameter set.  Unknown keys are rejected so typos
cannot silently fall back to defaults.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .airspring import SpringParams
from .controller import Thresholds
from .errors import ConfigError, InvalidParameterError
from .vehicle import VehicleParams

_VEHICLE_KEYS = {
    "sprung_mass_kg": "sprung_mass",
    "wheelbase_m": "wheelbase",
    "track_m": "track",
    "cog_height_m": "cog_height",
    "roll_inertia_kgm2": "roll_inertia",
    "pitch_inertia_kgm2": "pitch_inertia",
    "unsprung_mass_kg": "unsprung_mass",
    "tire_stiffness_n_per_m": "tire_stiffness",
    "front_axle_distance_m": "front_axle_distance",
    "rear_axle_distance_m": "rear_axle_distance",
}
_SPRING_KEYS = {
    "gamma": "gamma",
    "area_m2": "area",
    "v_main_0_m3": "v_main_0",
    "v_aux_m3": "v_aux",
    "p_atm_pa": "p_atm",
    "damping_c_ns_per_m": "damping_c",
}
_CONTROLLER_KEYS = {
    "t1_n": "t1_n",
    "t2_n": "t2_n",
    "t3_n": "t3_n",
    "stroke_tol_m": "stroke_tol_m",
    "backup_timeout_s": "backup_timeout_s",
    "min_switch_interval_s": "min_switch_interval_s",
}
_ESTIMATOR_KEYS = {"tau_fast_s", "tau_slow_s", "t3_n"}
_HARNESS_KEYS = {"dt_s", "jz_window_s"}
_SECTIONS = {"vehicle", "spring", "estimator", "controller", "harness"}


@dataclass(frozen=True)
class SimConfig:
    """Everything a run needs besides the scenario itself."""

    vehicle: VehicleParams
    thresholds: Thresholds
    tau_fast_s: float = 0.02
    tau_slow_s: float = 0.3
    dt_s: float = 1e-3
    jz_window_s: float = 1.0

    def __post_init__(self):
        if self.dt_s <= 0.0:
            raise ConfigError("dt_s must be > 0")
        if self.jz_window_s <= 0.0:
            raise ConfigError("jz_window_s must be > 0")
        if self.tau_fast_s <= 0.0 or self.tau_slow_s <= 0.0:
            raise ConfigError("filter time constants must be > 0")


def default_config() -> SimConfig:
    return SimConfig(vehicle=VehicleParams(), thresholds=Thresholds())


def _pick(raw: dict, mapping: dict, section: str) -> dict:
    unknown = set(raw) - set(mapping)
    if unknown:
        raise ConfigError(f"unknown keys in '{section}' section: {sorted(unknown)}")
    try:
        return {mapping[k]: float(v) for k, v in raw.items()}
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"non-numeric value in '{section}' section: {exc}") from exc


def config_from_dict(raw: dict) -> SimConfig:
    if not isinstance(raw, dict):
        raise ConfigError("config file must hold a JSON object")
    unknown = set(raw) - _SECTIONS
    if unknown:
        raise ConfigError(f"unknown config sections: {sorted(unknown)}")

    spring_kwargs = _pick(raw.get("spring", {}), _SPRING_KEYS, "spring")
    vehicle_kwargs = _pick(raw.get("vehicle", {}), _VEHICLE_KEYS, "vehicle")
    controller_kwargs = _pick(raw.get("controller", {}), _CONTROLLER_KEYS, "controller")

    est_raw = raw.get("estimator", {})
    unknown = set(est_raw) - _ESTIMATOR_KEYS
    if unknown:
        raise ConfigError(f"unknown keys in 'estimator' section: {sorted(unknown)}")
    if "t3_n" in est_raw:
        # t3 may be given in either section, but not inconsistently in both
        t3 = float(est_raw["t3_n"])
        if "t3_n" in controller_kwargs and controller_kwargs["t3_n"] != t3:
            raise ConfigError("t3_n given in both sections with different values")
        controller_kwargs["t3_n"] = t3

    harness_raw = raw.get("harness", {})
    unknown = set(harness_raw) - _HARNESS_KEYS
    if unknown:
        raise ConfigError(f"unknown keys in 'harness' section: {sorted(unknown)}")

    try:
        spring = SpringParams(**spring_kwargs)
        vehicle = VehicleParams(springs=(spring,) * 4, **vehicle_kwargs)
        thresholds = Thresholds(**controller_kwargs)
    except InvalidParameterError as exc:
        raise ConfigError(str(exc)) from exc

    return SimConfig(
        vehicle=vehicle,
        thresholds=thresholds,
        tau_fast_s=float(est_raw.get("tau_fast_s", 0.02)),
        tau_slow_s=float(est_raw.get("tau_slow_s", 0.3)),
        dt_s=float(harness_raw.get("dt_s", 1e-3)),
        jz_window_s=float(harness_raw.get("jz_window_s", 1.0)),
    )


def load_config(path=None) -> SimConfig:
    """Load a config JSON; None gives the built-in defaults."""
    if path is None:
        return default_config()
    with open(path) as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON in {path}: {exc}") from exc
    return config_from_dict(raw)


__all__ = ["SimConfig", "default_config", "config_from_dict", "load_config"]
