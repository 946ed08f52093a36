"""Parameter-space sweeps emitted as CSV/JSON data grids.

Three studies:

* success map — axes (g/gamma, tau*gamma) at fixed cooperativity C, cavity
  decay derived per cell from kappa = g^2/(2*gamma*C), drive amplitude
  optimized per cell; records raw and ceiling-normalized success probability
  plus the per-cell fidelity (the success and fidelity maps come from the
  same run).
* dissipation-free map — axes (Omega_0*tau, g*tau) with gamma = kappa = 0;
  records transfer fidelity.
* truncation study — fidelity vs T/tau under g = Omega_0, Omega_0*T = 1000.

Overlay curves (analytic threshold lines and numerically extracted contours)
are attached to the result and written as sidecar files by :func:`emit`.
Everything is single-threaded and deterministic: identical specs produce
byte-identical outputs.  Rendering is deliberately left to callers.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .adiabatic import AdiabaticFactors, tau0
from .dynamics import SimConfig, evolve
from .errors import CmatError, ParameterError
from .lossmodel import Objective, optimize_omega0_result
from .model import CqedParams, PulseSchedule

__all__ = [
    "AxisSpec",
    "SweepMode",
    "SweepSpec",
    "CellRecord",
    "SweepResult",
    "EmitFormat",
    "run_success_map",
    "run_dissipation_free_map",
    "run_truncation_study",
    "run_sweep",
    "emit",
    "default_success_map_spec",
    "default_dissipation_free_spec",
    "default_truncation_spec",
]

CSV_HEADER = "x,y,success_probability,fidelity,norm_final,i_a,i_cav,omega0_opt"


class SweepMode(enum.Enum):
    SUCCESS_MAP = "success_map"
    FIDELITY_MAP = "fidelity_map"
    DISSIPATION_FREE_MAP = "dissipation_free_map"
    TRUNCATION_STUDY = "truncation_study"


class EmitFormat(enum.Enum):
    CSV = "csv"
    JSON = "json"


@dataclass(frozen=True)
class AxisSpec:
    """One sweep axis: name, range, sample count, and linear/log spacing."""

    name: str
    min: float
    max: float
    count: int
    scale: str = "log"

    def __post_init__(self):
        if self.count < 2:
            raise ParameterError(f"axis {self.name}: count must be >= 2, got {self.count}")
        if not (self.min < self.max):
            raise ParameterError(f"axis {self.name}: need min < max, got [{self.min}, {self.max}]")
        if self.scale not in ("linear", "log"):
            raise ParameterError(f"axis {self.name}: scale must be 'linear' or 'log', got {self.scale!r}")
        if self.scale == "log" and self.min <= 0:
            raise ParameterError(f"axis {self.name}: log scale needs min > 0, got {self.min}")

    def values(self) -> np.ndarray:
        if self.scale == "log":
            return np.logspace(math.log10(self.min), math.log10(self.max), self.count)
        return np.linspace(self.min, self.max, self.count)


@dataclass(frozen=True)
class SweepSpec:
    """What to sweep.  ``y_axis`` may be None only for the truncation study."""

    mode: SweepMode
    x_axis: AxisSpec
    y_axis: AxisSpec | None = None
    fixed_c: float | None = None
    factors: AdiabaticFactors = AdiabaticFactors()
    cfg: SimConfig = SimConfig()

    def __post_init__(self):
        two_d = self.mode is not SweepMode.TRUNCATION_STUDY
        if two_d and self.y_axis is None:
            raise ParameterError(f"mode {self.mode.value}: y_axis is required")
        if self.mode in (SweepMode.SUCCESS_MAP, SweepMode.FIDELITY_MAP):
            if self.fixed_c is None or not (self.fixed_c > 0):
                raise ParameterError(
                    f"mode {self.mode.value}: fixed_c must be positive, got {self.fixed_c}"
                )


@dataclass(frozen=True)
class CellRecord:
    x: float
    y: float
    success_probability: float
    fidelity: float
    norm_final: float
    i_a: float
    i_cav: float
    omega0_opt: float
    success_probability_normalized: float | None = None
    error: str | None = None


@dataclass(frozen=True)
class SweepResult:
    """Grid in row-major order (y outer, x inner), overlay curves, metadata."""

    spec: SweepSpec
    grid: list[CellRecord]
    overlays: dict[str, list[tuple[float, float]]]
    metadata: dict = field(default_factory=dict)


def _failed_cell(x: float, y: float, err: Exception) -> CellRecord:
    nan = float("nan")
    return CellRecord(x, y, nan, nan, nan, nan, nan, nan, None, str(err))


def _interp_crossing(ts, deltas, log_t: bool):
    """First sign change of ``deltas`` along ``ts``, linearly interpolated.

    Interpolation runs in log10(t) when ``log_t``; returns None if the delta
    sequence never crosses zero (or is too NaN-ridden to tell).
    """
    for j in range(len(ts) - 1):
        d0, d1 = deltas[j], deltas[j + 1]
        if not (math.isfinite(d0) and math.isfinite(d1)):
            continue
        if d0 == 0.0:
            return float(ts[j])
        if d0 * d1 < 0.0:
            w = d0 / (d0 - d1)
            if log_t:
                lt = math.log10(ts[j]) + w * (math.log10(ts[j + 1]) - math.log10(ts[j]))
                return 10.0**lt
            return float(ts[j] + w * (ts[j + 1] - ts[j]))
    return None


def run_success_map(spec: SweepSpec) -> SweepResult:
    """Per-cell Omega_0-optimized transfer at fixed C over (g/gamma, tau*gamma).

    gamma = 1 internally; kappa follows from the cell's g and the fixed C.
    Cell failures are recorded in place and the sweep continues.  Overlays:
    the two analytic threshold lines, plus the tau = F_adi*tau_0 and
    Omega_0/g = F_cp contours extracted from the computed grid.
    """
    if spec.mode not in (SweepMode.SUCCESS_MAP, SweepMode.FIDELITY_MAP):
        raise ParameterError(f"run_success_map needs a success/fidelity mode, got {spec.mode.value}")
    xs = spec.x_axis.values()
    ys = spec.y_axis.values()
    c = float(spec.fixed_c)
    ub = math.exp(-2.0 / math.sqrt(c))
    f_adi, f_cp = spec.factors.f_adi, spec.factors.f_cp

    grid: list[CellRecord] = []
    omega_opt = np.full((len(ys), len(xs)), np.nan)
    for iy, y in enumerate(ys):
        for ix, x in enumerate(xs):
            p = CqedParams(g=float(x), kappa=float(x) ** 2 / (2.0 * c), gamma=1.0)
            try:
                omega0, res = optimize_omega0_result(
                    p, float(y), Objective.SUCCESS_PROBABILITY, spec.cfg
                )
                omega_opt[iy, ix] = omega0
                grid.append(
                    CellRecord(
                        x=float(x), y=float(y),
                        success_probability=res.success_probability,
                        fidelity=res.fidelity,
                        norm_final=res.norm_final,
                        i_a=res.i_a, i_cav=res.i_cav,
                        omega0_opt=omega0,
                        success_probability_normalized=res.success_probability / ub,
                    )
                )
            except CmatError as err:
                grid.append(_failed_cell(float(x), float(y), err))

    root_c = math.sqrt(c)
    tau_a = f_adi**2 / (8.0 * root_c)
    overlays: dict[str, list[tuple[float, float]]] = {
        "tau_a": [(float(x), tau_a) for x in xs],
        "tau_c": [(float(x), 2.0 * root_c / (f_cp**2 * float(x) ** 2)) for x in xs],
    }

    log_y = spec.y_axis.scale == "log"
    adi_curve: list[tuple[float, float]] = []
    cp_curve: list[tuple[float, float]] = []
    for ix, x in enumerate(xs):
        p = CqedParams(g=float(x), kappa=float(x) ** 2 / (2.0 * c), gamma=1.0)
        d_adi, d_cp = [], []
        for iy, y in enumerate(ys):
            w = omega_opt[iy, ix]
            if math.isfinite(w):
                d_adi.append(float(y) - f_adi * tau0(p, w))
                d_cp.append(w / float(x) - f_cp)
            else:
                d_adi.append(float("nan"))
                d_cp.append(float("nan"))
        y_adi = _interp_crossing(ys, d_adi, log_y)
        y_cp = _interp_crossing(ys, d_cp, log_y)
        if y_adi is not None:
            adi_curve.append((float(x), y_adi))
        if y_cp is not None:
            cp_curve.append((float(x), y_cp))
    overlays["f_adi_tau0"] = adi_curve
    overlays["f_cp_ratio"] = cp_curve

    meta = {"version": __version__, "upper_bound": ub, "gamma": 1.0}
    return SweepResult(spec=spec, grid=grid, overlays=overlays, metadata=meta)


def _tau0_scaled(ratio: float) -> float:
    """eta(r) = Omega_0 * tau_0 as a function of r = Omega_0/g alone."""
    return ratio * tau0(CqedParams(g=1.0, kappa=0.0, gamma=0.0), ratio)


def run_dissipation_free_map(spec: SweepSpec) -> SweepResult:
    """Fidelity over (Omega_0*tau, g*tau) with gamma = kappa = 0 (tau = 1)."""
    if spec.mode is not SweepMode.DISSIPATION_FREE_MAP:
        raise ParameterError(f"run_dissipation_free_map got mode {spec.mode.value}")
    xs = spec.x_axis.values()
    ys = spec.y_axis.values()
    f_adi = spec.factors.f_adi

    grid: list[CellRecord] = []
    for y in ys:
        p = CqedParams(g=float(y), kappa=0.0, gamma=0.0)
        for x in xs:
            try:
                res = evolve(p, PulseSchedule(omega0=float(x), tau=1.0), spec.cfg)
                grid.append(
                    CellRecord(
                        x=float(x), y=float(y),
                        success_probability=res.success_probability,
                        fidelity=res.fidelity,
                        norm_final=res.norm_final,
                        i_a=res.i_a, i_cav=res.i_cav,
                        omega0_opt=float(x),
                    )
                )
            except CmatError as err:
                grid.append(_failed_cell(float(x), float(y), err))

    overlays: dict[str, list[tuple[float, float]]] = {
        "omega0_tau_2": [(2.0, float(y)) for y in ys],
        "g_tau_2": [(float(x), 2.0) for x in xs],
    }
    # tau = F_adi * tau_0 in these axes: u = F_adi * eta(u/v) with u = Omega_0*tau,
    # v = g*tau.  Solve per row by bisection in log10(u).
    curve: list[tuple[float, float]] = []
    lo, hi = math.log10(float(xs[0])), math.log10(float(xs[-1]))
    for y in ys:
        v = float(y)

        def imbalance(log_u: float) -> float:
            u = 10.0**log_u
            return u - f_adi * _tau0_scaled(u / v)

        f_lo, f_hi = imbalance(lo), imbalance(hi)
        if f_lo == 0.0:
            curve.append((10.0**lo, v))
            continue
        if f_lo * f_hi > 0.0:
            continue
        a, b, fa = lo, hi, f_lo
        for _ in range(48):
            m = 0.5 * (a + b)
            fm = imbalance(m)
            if fa * fm <= 0.0:
                b = m
            else:
                a, fa = m, fm
        curve.append((10.0 ** (0.5 * (a + b)), v))
    overlays["f_adi_tau0"] = curve

    meta = {"version": __version__, "gamma": 0.0, "kappa": 0.0}
    return SweepResult(spec=spec, grid=grid, overlays=overlays, metadata=meta)


def run_truncation_study(spec: SweepSpec) -> SweepResult:
    """Fidelity vs T/tau at g = Omega_0 and Omega_0*T = 1000, loss-free."""
    if spec.mode is not SweepMode.TRUNCATION_STUDY:
        raise ParameterError(f"run_truncation_study got mode {spec.mode.value}")
    xs = spec.x_axis.values()
    grid: list[CellRecord] = []
    for x in xs:
        ratio = float(x)  # T/tau
        omega0 = 1000.0 / ratio  # tau = 1, so T = ratio and Omega_0*T = 1000
        p = CqedParams(g=omega0, kappa=0.0, gamma=0.0)
        try:
            res = evolve(p, PulseSchedule(omega0, 1.0, halfwidth=ratio / 2.0), spec.cfg)
            grid.append(
                CellRecord(
                    x=ratio, y=0.0,
                    success_probability=res.success_probability,
                    fidelity=res.fidelity,
                    norm_final=res.norm_final,
                    i_a=res.i_a, i_cav=res.i_cav,
                    omega0_opt=omega0,
                )
            )
        except CmatError as err:
            grid.append(_failed_cell(ratio, 0.0, err))
    meta = {"version": __version__, "omega0_times_duration": 1000.0}
    return SweepResult(spec=spec, grid=grid, overlays={}, metadata=meta)


def run_sweep(spec: SweepSpec) -> SweepResult:
    """Dispatch to the runner matching ``spec.mode``."""
    if spec.mode in (SweepMode.SUCCESS_MAP, SweepMode.FIDELITY_MAP):
        return run_success_map(spec)
    if spec.mode is SweepMode.DISSIPATION_FREE_MAP:
        return run_dissipation_free_map(spec)
    return run_truncation_study(spec)


def _fmt(v: float) -> str:
    return repr(float(v))


def _axis_dict(a: AxisSpec | None):
    if a is None:
        return None
    return {"name": a.name, "min": a.min, "max": a.max, "count": a.count, "scale": a.scale}


def _spec_dict(spec: SweepSpec) -> dict:
    return {
        "mode": spec.mode.value,
        "fixed_c": spec.fixed_c,
        "x_axis": _axis_dict(spec.x_axis),
        "y_axis": _axis_dict(spec.y_axis),
        "factors": {"f_adi": spec.factors.f_adi, "f_cp": spec.factors.f_cp},
        "cfg": {
            "rel_tol": spec.cfg.rel_tol,
            "abs_tol": spec.cfg.abs_tol,
            "max_step": spec.cfg.max_step,
            "sample_count": spec.cfg.sample_count,
        },
    }


def _clean(v):
    """NaN -> None so the JSON document stays strictly standard."""
    if v is None:
        return None
    if isinstance(v, float) and not math.isfinite(v):
        return None
    return v


def emit(result: SweepResult, path: str, format: EmitFormat | str = EmitFormat.CSV) -> None:
    """Write the sweep to ``path``.

    CSV: one row per cell under the fixed header, floats in shortest
    round-trip form, overlays in ``<path>.overlay-<name>.csv`` sidecars.
    JSON: a single document with keys "spec", "grid", "overlays" (plus
    "metadata"); grid records carry the normalized success probability and
    any per-cell error string, which the fixed CSV schema cannot hold.
    """
    fmt = EmitFormat(format) if not isinstance(format, EmitFormat) else format
    try:
        if fmt is EmitFormat.CSV:
            lines = [CSV_HEADER]
            for cell in result.grid:
                lines.append(
                    ",".join(
                        _fmt(v)
                        for v in (
                            cell.x, cell.y, cell.success_probability, cell.fidelity,
                            cell.norm_final, cell.i_a, cell.i_cav, cell.omega0_opt,
                        )
                    )
                )
            with open(path, "w") as fh:
                fh.write("\n".join(lines) + "\n")
            for name, pts in result.overlays.items():
                side = f"{path}.overlay-{name}.csv"
                with open(side, "w") as fh:
                    fh.write("x,y\n")
                    for px, py in pts:
                        fh.write(f"{_fmt(px)},{_fmt(py)}\n")
        else:
            doc = {
                "spec": _spec_dict(result.spec),
                "grid": [
                    {
                        "x": cell.x,
                        "y": cell.y,
                        "success_probability": _clean(cell.success_probability),
                        "fidelity": _clean(cell.fidelity),
                        "norm_final": _clean(cell.norm_final),
                        "i_a": _clean(cell.i_a),
                        "i_cav": _clean(cell.i_cav),
                        "omega0_opt": _clean(cell.omega0_opt),
                        "success_probability_normalized": _clean(
                            cell.success_probability_normalized
                        ),
                        "error": cell.error,
                    }
                    for cell in result.grid
                ],
                "overlays": {
                    name: [[px, py] for px, py in pts]
                    for name, pts in result.overlays.items()
                },
                "metadata": result.metadata,
            }
            with open(path, "w") as fh:
                json.dump(doc, fh, indent=2, allow_nan=False)
                fh.write("\n")
    except OSError as err:
        raise CmatError(f"failed writing sweep output to {path}: {err}") from err


def default_success_map_spec(c: float = 200.0, count: int = 41,
                             cfg: SimConfig = SimConfig()) -> SweepSpec:
    """Map over g/gamma in [1, 300], tau*gamma in [1e-3, 10], log-spaced."""
    return SweepSpec(
        mode=SweepMode.SUCCESS_MAP,
        x_axis=AxisSpec("g_over_gamma", 1.0, 300.0, count, "log"),
        y_axis=AxisSpec("tau_gamma", 1e-3, 10.0, count, "log"),
        fixed_c=c,
        cfg=cfg,
    )


def default_dissipation_free_spec(count: int = 41, cfg: SimConfig = SimConfig()) -> SweepSpec:
    """Map over Omega_0*tau and g*tau in [0.1, 100], log-spaced."""
    return SweepSpec(
        mode=SweepMode.DISSIPATION_FREE_MAP,
        x_axis=AxisSpec("omega0_tau", 0.1, 100.0, count, "log"),
        y_axis=AxisSpec("g_tau", 0.1, 100.0, count, "log"),
        cfg=cfg,
    )


def default_truncation_spec(count: int = 31, cfg: SimConfig = SimConfig()) -> SweepSpec:
    """T/tau from 5 to 20 in even steps."""
    return SweepSpec(
        mode=SweepMode.TRUNCATION_STUDY,
        x_axis=AxisSpec("t_over_tau", 5.0, 20.0, count, "linear"),
        cfg=cfg,
    )
