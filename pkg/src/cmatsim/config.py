"""Run-configuration parsing: one JSON document per run, flags override scalars.

A config is a flat JSON object of scalar fields plus an optional nested
"sweep" object:

    {
      "units": "gamma",            // or "absolute"
      "g": 50.0, "kappa": 6.25, "gamma": 1.0,
      "omega0": 5.0, "tau": 1.13, "halfwidth": 7.5,
      "f_adi": 8.0, "f_cp": 0.5,
      "rel_tol": 1e-9, "abs_tol": 1e-12, "max_step": null, "sample_count": 1000,
      "sweep": {
        "mode": "success_map", "fixed_c": 200.0,
        "x_axis": {"name": "g_over_gamma", "min": 1.0, "max": 300.0,
                    "count": 41, "scale": "log"},
        "y_axis": {...}
      }
    }

Rates default to units of gamma (gamma = 1, times in 1/gamma).  With
"units": "absolute" the rates may be given in any common unit; they are
normalized by the (then mandatory, positive) gamma on load.  Every parse
error names the offending field path.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .adiabatic import AdiabaticFactors
from .dynamics import SimConfig
from .errors import ConfigError, ParameterError
from .model import CqedParams, PulseSchedule
from .sweep import AxisSpec, SweepMode, SweepSpec

__all__ = ["RunConfig", "load_config", "build_run_config", "config_from_file"]

_SCALAR_FIELDS = {
    "g", "kappa", "gamma", "omega0", "tau", "halfwidth",
    "f_adi", "f_cp", "rel_tol", "abs_tol", "max_step", "sample_count",
}
_TOP_FIELDS = _SCALAR_FIELDS | {"units", "sweep"}
_AXIS_FIELDS = {"name", "min", "max", "count", "scale"}
_SWEEP_FIELDS = {"mode", "fixed_c", "x_axis", "y_axis"}


@dataclass(frozen=True)
class RunConfig:
    """Validated union of everything a subcommand may need.

    ``params`` is present whenever ``g`` was given; ``pulse`` whenever both
    ``omega0`` and ``tau`` were.  ``sweep`` mirrors the optional sweep block.
    """

    params: CqedParams | None
    pulse: PulseSchedule | None
    factors: AdiabaticFactors
    sim: SimConfig
    sweep: SweepSpec | None
    units: str
    source: str = "<inline>"


def load_config(path: str) -> dict:
    """Read a JSON config document from disk."""
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as err:
        raise ConfigError(path, f"cannot read config: {err}") from err
    except json.JSONDecodeError as err:
        raise ConfigError(path, f"invalid JSON: {err}") from err
    if not isinstance(doc, dict):
        raise ConfigError(path, "config root must be a JSON object")
    return doc


def _number(doc: dict, key: str, prefix: str = "", integer: bool = False):
    if key not in doc or doc[key] is None:
        return None
    v = doc[key]
    path = prefix + key
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(path, f"expected a number, got {v!r}")
    if integer:
        if int(v) != v:
            raise ConfigError(path, f"expected an integer, got {v!r}")
        return int(v)
    v = float(v)
    if not math.isfinite(v):
        raise ConfigError(path, f"must be finite, got {v!r}")
    return v


def _parse_axis(doc, path: str) -> AxisSpec:
    if not isinstance(doc, dict):
        raise ConfigError(path, "expected an object")
    unknown = set(doc) - _AXIS_FIELDS
    if unknown:
        raise ConfigError(f"{path}.{sorted(unknown)[0]}", "unknown field")
    for req in ("min", "max", "count"):
        if req not in doc:
            raise ConfigError(f"{path}.{req}", "required field missing")
    try:
        return AxisSpec(
            name=str(doc.get("name", "x")),
            min=_number(doc, "min", f"{path}."),
            max=_number(doc, "max", f"{path}."),
            count=_number(doc, "count", f"{path}.", integer=True),
            scale=str(doc.get("scale", "log")),
        )
    except ParameterError as err:
        raise ConfigError(path, str(err)) from err


def _parse_sweep(doc, factors: AdiabaticFactors, sim: SimConfig) -> SweepSpec:
    if not isinstance(doc, dict):
        raise ConfigError("sweep", "expected an object")
    unknown = set(doc) - _SWEEP_FIELDS
    if unknown:
        raise ConfigError(f"sweep.{sorted(unknown)[0]}", "unknown field")
    mode_raw = doc.get("mode")
    try:
        mode = SweepMode(mode_raw)
    except ValueError:
        valid = ", ".join(m.value for m in SweepMode)
        raise ConfigError("sweep.mode", f"must be one of {valid}; got {mode_raw!r}") from None
    if "x_axis" not in doc:
        raise ConfigError("sweep.x_axis", "required field missing")
    x_axis = _parse_axis(doc["x_axis"], "sweep.x_axis")
    y_axis = None
    if doc.get("y_axis") is not None:
        y_axis = _parse_axis(doc["y_axis"], "sweep.y_axis")
    try:
        return SweepSpec(
            mode=mode,
            x_axis=x_axis,
            y_axis=y_axis,
            fixed_c=_number(doc, "fixed_c", "sweep."),
            factors=factors,
            cfg=sim,
        )
    except ParameterError as err:
        raise ConfigError("sweep", str(err)) from err


def build_run_config(doc: dict, overrides: dict | None = None,
                     source: str = "<inline>") -> RunConfig:
    """Validate a config document (plus flag overrides) into a RunConfig."""
    doc = dict(doc)
    for key, val in (overrides or {}).items():
        if val is not None:
            doc[key] = val

    unknown = set(doc) - _TOP_FIELDS
    if unknown:
        raise ConfigError(sorted(unknown)[0], "unknown field")

    units = doc.get("units", "gamma")
    if units not in ("gamma", "absolute"):
        raise ConfigError("units", f"must be 'gamma' or 'absolute', got {units!r}")

    g = _number(doc, "g")
    kappa = _number(doc, "kappa")
    gamma = _number(doc, "gamma")
    omega0 = _number(doc, "omega0")
    tau = _number(doc, "tau")
    halfwidth = _number(doc, "halfwidth")
    if units == "absolute":
        if gamma is None or gamma <= 0:
            raise ConfigError("gamma", "absolute units require gamma > 0")
        scale = gamma
        g = g / scale if g is not None else None
        kappa = kappa / scale if kappa is not None else None
        omega0 = omega0 / scale if omega0 is not None else None
        tau = tau * scale if tau is not None else None
        gamma = 1.0
    if gamma is None:
        gamma = 1.0
    if kappa is None:
        kappa = 0.0

    params = None
    if g is not None:
        try:
            params = CqedParams(g=g, kappa=kappa, gamma=gamma)
        except ParameterError as err:
            raise ConfigError("g" if g <= 0 else ("kappa" if kappa < 0 else "gamma"),
                              str(err)) from err

    pulse = None
    if omega0 is not None or tau is not None:
        if omega0 is None:
            raise ConfigError("omega0", "required when tau is set")
        if tau is None:
            raise ConfigError("tau", "required when omega0 is set")
        try:
            pulse = PulseSchedule(omega0=omega0, tau=tau,
                                  halfwidth=halfwidth if halfwidth is not None else 7.5)
        except ParameterError as err:
            field = "omega0" if omega0 <= 0 else ("tau" if tau <= 0 else "halfwidth")
            raise ConfigError(field, str(err)) from err

    try:
        factors = AdiabaticFactors(
            f_adi=_number(doc, "f_adi") if doc.get("f_adi") is not None else 8.0,
            f_cp=_number(doc, "f_cp") if doc.get("f_cp") is not None else 0.5,
        )
    except ParameterError as err:
        raise ConfigError("f_adi" if "f_adi" in str(err) else "f_cp", str(err)) from err

    try:
        sample_count = _number(doc, "sample_count", integer=True)
        sim = SimConfig(
            rel_tol=_number(doc, "rel_tol") if doc.get("rel_tol") is not None else 1e-9,
            abs_tol=_number(doc, "abs_tol") if doc.get("abs_tol") is not None else 1e-12,
            max_step=_number(doc, "max_step"),
            sample_count=sample_count if sample_count is not None else 1000,
        )
    except ParameterError as err:
        for field in ("rel_tol", "abs_tol", "max_step", "sample_count"):
            if field in str(err):
                raise ConfigError(field, str(err)) from err
        raise ConfigError("sim", str(err)) from err

    sweep = None
    if doc.get("sweep") is not None:
        sweep = _parse_sweep(doc["sweep"], factors, sim)

    return RunConfig(params=params, pulse=pulse, factors=factors, sim=sim,
                     sweep=sweep, units=units, source=source)


def config_from_file(path: str, overrides: dict | None = None) -> RunConfig:
    """Load and validate a config file in one step."""
    return build_run_config(load_config(path), overrides, source=path)
