"""Run configuration: JSON with SI units only.

Lengths are in meters (converted to one-way times with the exact speed of
light), powers in watts, frequencies in rad/s.  Each pump port takes
either power + phase or a raw complex amplitude, never both.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.constants import hbar

from .cooling import MechanicalMode
from .errors import ConfigError
from .scattering import SPEED_OF_LIGHT, InterferometerParams, PortVector

__all__ = ["RunConfig", "parse_config", "load_config", "config_digest"]

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class RunConfig:
    params: InterferometerParams
    pump: PortVector
    grid: np.ndarray
    mechanical: MechanicalMode | None
    det_tol: float | None
    energy_budget: float | None
    optimize_constraint: str
    echo: dict


def _get(section: dict, key: str, path: str, required=True, default=None):
    if key not in section:
        if required:
            raise ConfigError(f"{path}.{key}", "missing")
        return default
    return section[key]


def _number(section: dict, key: str, path: str, required=True, default=None):
    value = _get(section, key, path, required, default)
    if value is default and not required:
        return default
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise ConfigError(f"{path}.{key}", f"expected a number, got {value!r}")
    return float(value)


def _mirror_pair(section: dict, name: str, path: str) -> tuple[float, float]:
    """Resolve (r, t) from whichever of r_<name>/t_<name> is present."""
    r_key, t_key = f"r_{name}", f"t_{name}"
    has_r, has_t = r_key in section, t_key in section
    if not has_r and not has_t:
        raise ConfigError(f"{path}.{r_key}", f"need {r_key} or {t_key}")
    if has_r and has_t:
        r = _number(section, r_key, path)
        t = _number(section, t_key, path)
    elif has_r:
        r = _number(section, r_key, path)
        if not 0.0 <= r <= 1.0:
            raise ConfigError(f"{path}.{r_key}", f"{r!r} outside [0, 1]")
        t = math.sqrt(1.0 - r * r)
    else:
        t = _number(section, t_key, path)
        if not 0.0 <= t <= 1.0:
            raise ConfigError(f"{path}.{t_key}", f"{t!r} outside [0, 1]")
        r = math.sqrt(1.0 - t * t)
    return r, t


def _path_time(section: dict, name: str, path: str) -> float:
    tau_key, length_key = f"tau_{name}_s", f"l_{name}_m"
    has_tau, has_len = tau_key in section, length_key in section
    if has_tau == has_len:
        raise ConfigError(
            f"{path}.{tau_key}", f"give exactly one of {tau_key}, {length_key}"
        )
    if has_tau:
        return _number(section, tau_key, path)
    return _number(section, length_key, path) / SPEED_OF_LIGHT


def _port_amplitude(section: dict, path: str, omega_p: float) -> complex:
    has_power = "power_w" in section
    has_amp = "amplitude" in section
    if has_power == has_amp:
        raise ConfigError(path, "give exactly one of power_w(+phase_rad), amplitude")
    if has_power:
        power = _number(section, "power_w", path)
        if power < 0.0:
            raise ConfigError(f"{path}.power_w", f"{power!r} is negative")
        phase = _number(section, "phase_rad", path, required=False, default=0.0)
        return math.sqrt(power / (hbar * omega_p)) * np.exp(1j * phase)
    amp = _get(section, "amplitude", path)
    if (
        not isinstance(amp, (list, tuple))
        or len(amp) != 2
        or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in amp)
    ):
        raise ConfigError(f"{path}.amplitude", "expected [re, im]")
    return complex(amp[0], amp[1])


def _sweep_grid(section: dict, path: str) -> np.ndarray:
    start = _number(section, "start_rad_s", path)
    stop = _number(section, "stop_rad_s", path)
    points = _get(section, "points", path)
    if not isinstance(points, int) or isinstance(points, bool) or points < 2:
        raise ConfigError(f"{path}.points", f"need an integer >= 2, got {points!r}")
    spacing = _get(section, "spacing", path, required=False, default="linear")
    if spacing == "linear":
        return np.linspace(start, stop, points)
    if spacing == "log":
        if start <= 0.0 or stop <= 0.0:
            raise ConfigError(f"{path}.spacing", "log spacing needs positive bounds")
        return np.geomspace(start, stop, points)
    raise ConfigError(f"{path}.spacing", f"unknown spacing {spacing!r}")


def parse_config(raw: dict) -> RunConfig:
    """Validate a configuration dict and build the domain objects."""
    if not isinstance(raw, dict):
        raise ConfigError("<root>", "top level must be an object")
    schema = raw.get("schema", SCHEMA_VERSION)
    if schema != SCHEMA_VERSION:
        raise ConfigError("schema", f"unsupported schema {schema!r}")

    ifo = _get(raw, "interferometer", "<root>")
    if not isinstance(ifo, dict):
        raise ConfigError("interferometer", "must be an object")
    wavelength = _number(ifo, "wavelength_m", "interferometer")
    if wavelength <= 0.0:
        raise ConfigError("interferometer.wavelength_m", f"{wavelength!r} <= 0")
    r_s, t_s = _mirror_pair(ifo, "s", "interferometer")
    r_w, t_w = _mirror_pair(ifo, "w", "interferometer")
    try:
        params = InterferometerParams(
            theta_m=_number(ifo, "theta_m_rad", "interferometer"),
            epsilon=_number(ifo, "epsilon_rad", "interferometer"),
            kappa=_number(ifo, "kappa", "interferometer"),
            tau_s=_path_time(ifo, "s", "interferometer"),
            tau_w=_path_time(ifo, "w", "interferometer"),
            r_s=r_s,
            t_s=t_s,
            r_w=r_w,
            t_w=t_w,
            k_p=2.0 * math.pi / wavelength,
        )
    except ValueError as exc:
        raise ConfigError("interferometer", str(exc)) from exc

    pump_sec = _get(raw, "pump", "<root>")
    if not isinstance(pump_sec, dict):
        raise ConfigError("pump", "must be an object")
    ports = {}
    for port in ("west", "south"):
        sec = _get(pump_sec, port, "pump", required=False, default={"power_w": 0.0})
        if not isinstance(sec, dict):
            raise ConfigError(f"pump.{port}", "must be an object")
        ports[port] = _port_amplitude(sec, f"pump.{port}", params.omega_p)
    pump = PortVector(west=ports["west"], south=ports["south"])

    sweep = _get(raw, "sweep", "<root>")
    if not isinstance(sweep, dict):
        raise ConfigError("sweep", "must be an object")
    grid = _sweep_grid(sweep, "sweep")

    mech = None
    if "mechanical" in raw:
        sec = raw["mechanical"]
        if not isinstance(sec, dict):
            raise ConfigError("mechanical", "must be an object")
        has_t = "temperature_k" in sec
        has_n = "n_thermal" in sec
        if has_t == has_n:
            raise ConfigError(
                "mechanical", "give exactly one of temperature_k, n_thermal"
            )
        try:
            mech = MechanicalMode(
                omega_m=_number(sec, "omega_m_rad_s", "mechanical"),
                h_friction=_number(sec, "h_friction_kg_s", "mechanical"),
                temperature=_number(sec, "temperature_k", "mechanical", required=has_t)
                if has_t
                else None,
                n_thermal=_number(sec, "n_thermal", "mechanical", required=has_n)
                if has_n
                else None,
                mass=_number(sec, "mass_kg", "mechanical", required=False),
            )
        except ValueError as exc:
            raise ConfigError("mechanical", str(exc)) from exc

    tol_sec = raw.get("tolerances", {})
    if not isinstance(tol_sec, dict):
        raise ConfigError("tolerances", "must be an object")
    det_tol = _number(tol_sec, "det_tol", "tolerances", required=False)

    opt_sec = raw.get("optimize", {})
    if not isinstance(opt_sec, dict):
        raise ConfigError("optimize", "must be an object")
    energy_budget = _number(opt_sec, "energy_budget", "optimize", required=False)
    constraint = opt_sec.get("constraint", "intracavity")
    if constraint not in ("intracavity", "injected"):
        raise ConfigError("optimize.constraint", f"unknown constraint {constraint!r}")

    return RunConfig(
        params=params,
        pump=pump,
        grid=grid,
        mechanical=mech,
        det_tol=det_tol,
        energy_budget=energy_budget,
        optimize_constraint=constraint,
        echo=raw,
    )


def load_config(path: str | Path) -> RunConfig:
    """Parse a JSON configuration file."""
    try:
        raw = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError("<file>", f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError("<file>", f"invalid JSON in {path}: {exc}") from exc
    return parse_config(raw)


def config_digest(echo: dict) -> str:
    """Stable hash of the configuration echo (for output provenance)."""
    import hashlib

    canonical = json.dumps(echo, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()
