"""Analytic photon-loss model and the drive-amplitude optimizer.

In the adiabatic, weakly driven regime the no-loss probability is well
approximated by exp(-beta) with

    beta = kappa * tau*Omega_0^2 / g^2  +  gamma * 2 / (tau*Omega_0^2),

the first term from cavity decay of the dark state's photon component, the
second from spontaneous emission during the nonadiabatic admixture.  By
AM-GM, beta >= 2/sqrt(C) with equality exactly at the balancing condition
tau*Omega_0^2 = g*sqrt(2*gamma/kappa), which pins the success-probability
ceiling exp(-2/sqrt(C)).

The sweep maps optimize Omega_0 per grid cell by maximizing a simulated
objective; the optimization method is a choice of this implementation (a
41-point grid over log10(Omega_0/g) in [-3, 1], then golden-section
refinement to 1e-4 relative in Omega_0), deterministic and cached per call.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .dynamics import SimConfig, SimResult, evolve
from .errors import IntegrationError, ParameterError
from .model import DEFAULT_HALFWIDTH, CqedParams, PulseSchedule

__all__ = [
    "LossPrediction",
    "Objective",
    "beta",
    "optimize_omega0",
    "balancing_optimality_scan",
]

OPT_GRID_POINTS = 41
OPT_LOG_RANGE = (-3.0, 1.0)
OPT_REL_TOL = 1e-4
_INV_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class LossPrediction:
    """Loss exponent split into its two channels.

    ``upper_bound`` is exp(-2/sqrt(C)), present only when C is defined
    (both decay rates positive).
    """

    beta: float
    p_pl: float
    beta_cavity: float
    beta_spont: float
    upper_bound: float | None = None


class Objective(enum.Enum):
    """Quantity maximized by the drive-amplitude optimizer."""

    SUCCESS_PROBABILITY = "success_probability"
    FIDELITY = "fidelity"


def beta(p: CqedParams, tau: float, omega0: float) -> LossPrediction:
    """Evaluate the loss exponent at (tau, Omega_0)."""
    if not (tau > 0 and math.isfinite(tau)):
        raise ParameterError(f"tau must be positive, got {tau}")
    if not (omega0 > 0 and math.isfinite(omega0)):
        raise ParameterError(f"omega0 must be positive, got {omega0}")
    x = tau * omega0 * omega0
    b_cav = p.kappa * x / (p.g * p.g)
    b_sp = 2.0 * p.gamma / x
    b = b_cav + b_sp
    ub = None
    if p.kappa > 0 and p.gamma > 0:
        ub = math.exp(-2.0 / math.sqrt(p.cooperativity()))
    return LossPrediction(beta=b, p_pl=1.0 - math.exp(-b), beta_cavity=b_cav,
                          beta_spont=b_sp, upper_bound=ub)


def optimize_omega0(
    p: CqedParams,
    tau: float,
    objective: Objective = Objective.SUCCESS_PROBABILITY,
    cfg: SimConfig = SimConfig(),
    halfwidth: float = DEFAULT_HALFWIDTH,
) -> tuple[float, float]:
    """Maximize the simulated objective over the drive amplitude.

    Returns (omega0, value).  Probes are cached per call keyed by the exact
    Omega_0 float, so repeated evaluations during refinement are free and the
    result is bit-reproducible for identical inputs.
    """
    if not (tau > 0 and math.isfinite(tau)):
        raise ParameterError(f"tau must be positive, got {tau}")
    attr = objective.value
    cache: dict[float, float] = {}

    def score(log_ratio: float) -> float:
        omega0 = float(p.g * 10.0**log_ratio)
        if omega0 not in cache:
            try:
                res = evolve(p, PulseSchedule(omega0, tau, halfwidth), cfg)
            except IntegrationError as exc:
                raise IntegrationError(
                    f"optimizer probe failed at omega0={omega0!r}, tau={tau!r}: {exc}",
                    last_t=exc.last_t,
                ) from exc
            cache[omega0] = getattr(res, attr)
        return cache[omega0]

    lo, hi = OPT_LOG_RANGE
    grid = np.linspace(lo, hi, OPT_GRID_POINTS)
    vals = [score(x) for x in grid]
    k = int(np.argmax(vals))
    a = float(grid[max(k - 1, 0)])
    b = float(grid[min(k + 1, len(grid) - 1)])

    # 1e-4 relative in Omega_0 is log10(1 + 1e-4) wide in log-ratio space.
    width = math.log10(1.0 + OPT_REL_TOL)
    x1 = b - _INV_GOLDEN * (b - a)
    x2 = a + _INV_GOLDEN * (b - a)
    f1, f2 = score(x1), score(x2)
    while (b - a) > width:
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + _INV_GOLDEN * (b - a)
            f2 = score(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - _INV_GOLDEN * (b - a)
            f1 = score(x1)

    best_omega0 = max(cache, key=cache.__getitem__)
    return best_omega0, cache[best_omega0]


def optimize_omega0_result(
    p: CqedParams,
    tau: float,
    objective: Objective = Objective.SUCCESS_PROBABILITY,
    cfg: SimConfig = SimConfig(),
    halfwidth: float = DEFAULT_HALFWIDTH,
) -> tuple[float, SimResult]:
    """Like :func:`optimize_omega0` but re-evolves once to return the full result."""
    omega0, _ = optimize_omega0(p, tau, objective, cfg, halfwidth)
    return omega0, evolve(p, PulseSchedule(omega0, tau, halfwidth), cfg)


def balancing_optimality_scan(p: CqedParams, tau: float, n: int = 101,
                              decades: float = 2.0) -> list[tuple[float, float]]:
    """Tabulate (Omega_0, beta) on a log grid straddling the balancing point.

    The grid is centered on the exact balancing amplitude (for odd n the
    center row *is* the balancing point), spanning ``decades`` total, so the
    argmin row demonstrates the AM-GM optimum numerically.
    """
    from .adiabatic import omega0_from_balancing

    if n < 3:
        raise ParameterError(f"n must be >= 3, got {n}")
    center = omega0_from_balancing(p, tau)
    exponents = np.linspace(-decades / 2.0, decades / 2.0, n)
    rows = []
    for e in exponents:
        omega0 = center * 10.0**e
        rows.append((float(omega0), beta(p, tau, omega0).beta))
    return rows
