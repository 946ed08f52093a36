"""Adiabatic condition, the speed-limit time constant tau_0, and thresholds.

Transfer stays on the dark state when the nonadiabatic coupling into the
nearest bright pair is small compared to the gap |omega_1|:

    ratio(t) = g*Omega_0^2 * |A1*f1'*f2 + B1*f1*f2'| / (sqrt(N0*N1) * |omega_1|)  << 1.

Using the closed-form envelope derivatives f1' = f1*f2^2/tau and
f2' = -f1^2*f2/tau, the ratio is proportional to 1/tau, so its worst case
over the protocol defines a pure time constant

    tau_0 = max_t [ tau * ratio(t) ]
          = max_s  g*Omega_0^2*f1*f2*|A1*f2^2 - B1*f1^2| / (|omega_1|*sqrt(N0*N1)),

independent of tau (s = t/tau).  The adiabatic condition is then written
tau > F_adi * tau_0 with the calibration F_adi = 8, and in the small-Omega_0
regime tau_0 -> 1/(2*Omega_0).

Requiring the dark state's photon population to stay below F_cp^2 and the
protocol to stay adiabatic yields two lower bounds on tau,

    tau_a = F_adi^2 / (8*gamma*sqrt(C)),      (adiabatic)
    tau_c = 2*gamma*sqrt(C) / (F_cp^2 * g^2), (cavity-population suppression)

whose crossover sits at kappa* = 8*gamma/(F_adi*F_cp)^2, equivalently
g* = 4*gamma*sqrt(C)/(F_adi*F_cp): above it the adiabatic condition binds.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, SingularGapError
from .model import DEFAULT_HALFWIDTH, CqedParams, PulseSchedule, pulse_f, pulse_f_derivatives

__all__ = [
    "AdiabaticFactors",
    "Binding",
    "SpeedLimitReport",
    "adiabatic_coupling_ratio",
    "tau0",
    "thresholds",
    "omega0_from_balancing",
]

# Coarse-scan resolution and golden-section target width for the tau_0 search.
TAU0_SCAN_POINTS = 4001
TAU0_REFINE_TOL = 1e-10
_INV_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class AdiabaticFactors:
    """Safety factors: f_adi multiplies tau_0, f_cp caps sqrt(photon population)."""

    f_adi: float = 8.0
    f_cp: float = 0.5

    def __post_init__(self):
        if not (self.f_adi > 0 and math.isfinite(self.f_adi)):
            raise ParameterError(f"f_adi must be positive, got {self.f_adi}")
        if not (0.0 < self.f_cp < 1.0):
            raise ParameterError(f"f_cp must lie in (0, 1), got {self.f_cp}")


class Binding(enum.Enum):
    """Which lower bound on tau is the operative speed limit."""

    ADIABATIC_LIMITED = "adiabatic_limited"
    CAVITY_SUPPRESSION_LIMITED = "cavity_suppression_limited"


@dataclass(frozen=True)
class SpeedLimitReport:
    """Threshold times, crossover parameters, and the binding condition.

    ``tau0`` is filled only when the report was built with a known Omega_0
    (the thresholds themselves do not depend on it).
    """

    tau_a: float
    tau_c: float
    kappa_star: float
    g_star: float
    binding: Binding
    tau0: float | None = None


def _bracket_terms(f1, f2, omega0: float, g: float):
    """Shared algebra: (w1, A1, B1, N0, N1) at envelope values (f1, f2)."""
    o1sq = (omega0 * f1) ** 2
    o2sq = (omega0 * f2) ** 2
    gsq = g * g
    disc = np.hypot(2.0 * gsq, o1sq - o2sq)
    w1sq = (2.0 * gsq + o1sq + o2sq - disc) / 2.0
    a1 = o2sq - w1sq + 2.0 * gsq
    b1 = -o1sq + w1sq - 2.0 * gsq
    n0 = gsq * (o1sq + o2sq) + o1sq * o2sq
    n1 = a1 * a1 * o1sq + b1 * b1 * o2sq + w1sq * (a1 * a1 + b1 * b1) + gsq * (a1 + b1) ** 2
    return w1sq, a1, b1, n0, n1


def adiabatic_coupling_ratio(t: float, p: CqedParams, s: PulseSchedule) -> float:
    """Instantaneous nonadiabatic coupling over gap; adiabaticity wants << 1."""
    f1, f2 = pulse_f(t, s.tau)
    df1, df2 = pulse_f_derivatives(t, s.tau)
    w1sq, a1, b1, n0, n1 = _bracket_terms(f1, f2, s.omega0, p.g)
    if w1sq <= 0.0 or n0 <= 0.0 or n1 <= 0.0:
        raise SingularGapError("adiabatic ratio undefined: vanishing gap (both pulses zero)")
    num = p.g * s.omega0**2 * abs(a1 * df1 * f2 + b1 * f1 * df2)
    return float(num / (math.sqrt(n0 * n1) * math.sqrt(w1sq)))


def _tau0_bracket(svals, omega0: float, g: float):
    """tau-free maximand: g*W0^2*f1*f2*|A1*f2^2 - B1*f1^2| / (|w1|*sqrt(N0*N1))."""
    f1, f2 = pulse_f(svals, 1.0)
    w1sq, a1, b1, n0, n1 = _bracket_terms(f1, f2, omega0, g)
    return g * omega0**2 * f1 * f2 * np.abs(a1 * f2 * f2 - b1 * f1 * f1) / (
        np.sqrt(w1sq) * np.sqrt(n0 * n1)
    )


def tau0(p: CqedParams, omega0: float, halfwidth: float = DEFAULT_HALFWIDTH) -> float:
    """Worst-case adiabatic time constant tau_0 for drive amplitude ``omega0``.

    Maximizes the tau-independent bracket over s = t/tau in
    [-halfwidth, +halfwidth]: a 4001-point coarse scan locates the global
    peak (the bracket turns bimodal at large Omega_0/g), then golden-section
    refinement narrows it to 1e-10 absolute in s.
    """
    if not (omega0 > 0 and math.isfinite(omega0)):
        raise ParameterError(f"omega0 must be positive, got {omega0}")
    if not (halfwidth > 0 and math.isfinite(halfwidth)):
        raise ParameterError(f"halfwidth must be positive, got {halfwidth}")
    grid = np.linspace(-halfwidth, halfwidth, TAU0_SCAN_POINTS)
    vals = _tau0_bracket(grid, omega0, p.g)
    k = int(np.argmax(vals))
    lo = grid[max(k - 1, 0)]
    hi = grid[min(k + 1, len(grid) - 1)]

    def f(s: float) -> float:
        return float(_tau0_bracket(np.asarray(s, dtype=float), omega0, p.g))

    best_s, best_v = _golden_max(f, float(lo), float(hi), TAU0_REFINE_TOL)
    return max(best_v, float(vals[k]))


def _golden_max(f, a: float, b: float, tol: float):
    """Golden-section maximization of a unimodal scalar function on [a, b]."""
    x1 = b - _INV_GOLDEN * (b - a)
    x2 = a + _INV_GOLDEN * (b - a)
    f1, f2 = f(x1), f(x2)
    while (b - a) > tol:
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + _INV_GOLDEN * (b - a)
            f2 = f(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - _INV_GOLDEN * (b - a)
            f1 = f(x1)
    xm = (a + b) / 2.0
    return xm, max(f1, f2, f(xm))


def thresholds(
    p: CqedParams,
    f: AdiabaticFactors = AdiabaticFactors(),
    omega0: float | None = None,
) -> SpeedLimitReport:
    """Speed-limit thresholds and crossover for the given CQED rates.

    Needs a defined cooperativity (kappa, gamma > 0).  When ``omega0`` is
    supplied the report also carries tau_0 at that drive amplitude.
    """
    c = p.cooperativity()
    root_c = math.sqrt(c)
    tau_a = f.f_adi**2 / (8.0 * p.gamma * root_c)
    tau_c = 2.0 * p.gamma * root_c / (f.f_cp**2 * p.g**2)
    kappa_star = 8.0 * p.gamma / (f.f_adi * f.f_cp) ** 2
    g_star = 4.0 * p.gamma * root_c / (f.f_adi * f.f_cp)
    binding = Binding.ADIABATIC_LIMITED if tau_a >= tau_c else Binding.CAVITY_SUPPRESSION_LIMITED
    t0 = tau0(p, omega0) if omega0 is not None else None
    return SpeedLimitReport(
        tau_a=tau_a,
        tau_c=tau_c,
        kappa_star=kappa_star,
        g_star=g_star,
        binding=binding,
        tau0=t0,
    )


def omega0_from_balancing(p: CqedParams, tau: float) -> float:
    """Drive amplitude equalizing the two photon-loss channels.

    Solves tau*Omega_0^2 = g*sqrt(2*gamma/kappa) for Omega_0 > 0; at this
    point the loss exponent reaches its floor 2/sqrt(C).
    """
    if not (tau > 0 and math.isfinite(tau)):
        raise ParameterError(f"tau must be positive, got {tau}")
    if p.kappa <= 0 or p.gamma <= 0:
        raise ParameterError(
            f"balancing requires kappa > 0 and gamma > 0 (kappa={p.kappa}, gamma={p.gamma})"
        )
    return math.sqrt(p.g * math.sqrt(2.0 * p.gamma / p.kappa) / tau)
