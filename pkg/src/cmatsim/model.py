"""Domain types, pulse functions, and the 5x5 Hamiltonian matrices.

The system is two three-level atoms (levels |g>, |u>, |e>) in a single-mode
cavity, restricted to the five-state subspace reachable from |u>_1 |g>_2 |0>_c
under the transfer protocol:

    index 0:  |u>_1 |g>_2 |0>_c   (UG0)
    index 1:  |g>_1 |u>_2 |0>_c   (GU0)
    index 2:  |e>_1 |g>_2 |0>_c   (EG0)
    index 3:  |g>_1 |e>_2 |0>_c   (GE0)
    index 4:  |g>_1 |g>_2 |1>_c   (GG1)

Every matrix and vector in the package uses this ordering.  In this basis the
Hamiltonian is H(t)/hbar = i*M(t) with M real antisymmetric,

        [ 0    0   -W1   0    0 ]
        [ 0    0    0   -W2   0 ]
    M = [ W1   0    0    0    g ]          W_i = Omega_i(t),
        [ 0    W2   0    0    g ]
        [ 0    0   -g   -g    0 ]

and the dark state (instantaneous zero-eigenvalue eigenstate with no excited
or photonic amplitude) is

    |D(t)> = (g*W2, g*W1, 0, 0, -W1*W2) / sqrt(N0),
    N0 = g^2 W1^2 + g^2 W2^2 + W1^2 W2^2.

Counter-intuitive pulse pair:

    Omega_1(t) = Omega_0 * f1(t),  f1 = e^{t/tau} / sqrt(e^{2t/tau} + 1),
    Omega_2(t) = Omega_0 * f2(t),  f2 = 1       / sqrt(e^{2t/tau} + 1),

so f1^2 + f2^2 = 1 identically and the dark state rotates from UG0 to GU0 as
t runs from -infinity to +infinity.  Simulations truncate to a finite window
t in [-s_max*tau, +s_max*tau] (default s_max = 7.5).

Rates (g, kappa, gamma, Omega_0) are plain floats in any consistent unit
system; the conventional choice throughout tests and the CLI is units of
gamma (gamma = 1) with times in 1/gamma.

Only the |u>_1|g>_2|0>_c branch is ever evolved: a transfer acting on a
superposition input follows from this branch by linearity because the
orthogonal |g>_1|g>_2|0>_c component is left untouched by the protocol.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateStateError, ParameterError, UndefinedCooperativityError

__all__ = [
    "BasisIndex",
    "CqedParams",
    "PulseSchedule",
    "StateVector",
    "pulse_f",
    "pulse_f_derivatives",
    "hamiltonian",
    "effective_hamiltonian",
    "darkstate",
    "cavity_population",
]

DEFAULT_HALFWIDTH = 7.5


class BasisIndex(enum.IntEnum):
    """Positions of the five basis states in every matrix/vector."""

    UG0 = 0
    GU0 = 1
    EG0 = 2
    GE0 = 3
    GG1 = 4


@dataclass(frozen=True)
class CqedParams:
    """Cavity-QED rate triple.

    Parameters
    ----------
    g : float
        Atom-cavity coupling constant (> 0).
    kappa : float
        Cavity field amplitude decay rate (>= 0).
    gamma : float
        Atomic polarization decay rate of spontaneous emission (>= 0).
    """

    g: float
    kappa: float
    gamma: float

    def __post_init__(self):
        if not (self.g > 0 and math.isfinite(self.g)):
            raise ParameterError(f"g must be positive and finite, got {self.g}")
        if not (self.kappa >= 0 and math.isfinite(self.kappa)):
            raise ParameterError(f"kappa must be >= 0 and finite, got {self.kappa}")
        if not (self.gamma >= 0 and math.isfinite(self.gamma)):
            raise ParameterError(f"gamma must be >= 0 and finite, got {self.gamma}")

    def cooperativity(self) -> float:
        """C = g^2 / (2*kappa*gamma).  Undefined when a decay rate is zero."""
        if self.kappa <= 0 or self.gamma <= 0:
            raise UndefinedCooperativityError(
                "cooperativity requires kappa > 0 and gamma > 0 "
                f"(kappa={self.kappa}, gamma={self.gamma})"
            )
        return self.g**2 / (2.0 * self.kappa * self.gamma)


@dataclass(frozen=True)
class PulseSchedule:
    """Counter-intuitive pulse pair Omega_i(t) = Omega_0 * f_i(t).

    Parameters
    ----------
    omega0 : float
        Peak Rabi frequency (> 0).
    tau : float
        Pulse time constant (> 0).
    halfwidth : float
        Dimensionless window half-width s_max; the protocol runs over
        t in [-s_max*tau, +s_max*tau], total duration T = 2*s_max*tau.
    """

    omega0: float
    tau: float
    halfwidth: float = DEFAULT_HALFWIDTH

    def __post_init__(self):
        if not (self.omega0 > 0 and math.isfinite(self.omega0)):
            raise ParameterError(f"omega0 must be positive, got {self.omega0}")
        if not (self.tau > 0 and math.isfinite(self.tau)):
            raise ParameterError(f"tau must be positive, got {self.tau}")
        if not (self.halfwidth > 0 and math.isfinite(self.halfwidth)):
            raise ParameterError(f"halfwidth must be positive, got {self.halfwidth}")

    @property
    def t_start(self) -> float:
        return -self.halfwidth * self.tau

    @property
    def t_end(self) -> float:
        return self.halfwidth * self.tau

    @property
    def duration(self) -> float:
        """Total protocol duration T = 2 * halfwidth * tau."""
        return 2.0 * self.halfwidth * self.tau

    def rabi(self, t):
        """(Omega_1(t), Omega_2(t)); accepts scalars or arrays."""
        f1, f2 = pulse_f(t, self.tau)
        return self.omega0 * f1, self.omega0 * f2


def pulse_f(t, tau: float):
    """Evaluate the pulse envelope pair (f1, f2) at time(s) ``t``.

    f1(t) = e^{t/tau} / sqrt(e^{2t/tau} + 1) rises monotonically from 0 to 1,
    f2(t) = 1 / sqrt(e^{2t/tau} + 1) falls from 1 to 0, and f1^2 + f2^2 = 1
    exactly.  Evaluated through a = e^{-|t|/tau} so no overflow occurs for
    arbitrarily large |t|/tau: on the dominant side f = 1/sqrt(1 + a^2) and on
    the suppressed side f = a/sqrt(1 + a^2).

    Parameters
    ----------
    t : float or ndarray
        Time(s), finite.
    tau : float
        Pulse time constant, > 0.

    Returns
    -------
    (f1, f2) : pair of floats or ndarrays matching the shape of ``t``.
    """
    if not (tau > 0 and math.isfinite(tau)):
        raise ParameterError(f"tau must be positive and finite, got {tau}")
    s = np.asarray(t, dtype=float) / tau
    a = np.exp(-np.abs(s))
    big = 1.0 / np.sqrt(1.0 + a * a)
    small = a * big
    f1 = np.where(s >= 0, big, small)
    f2 = np.where(s >= 0, small, big)
    if np.ndim(t) == 0:
        return float(f1), float(f2)
    return f1, f2


def pulse_f_derivatives(t, tau: float):
    """Closed-form time derivatives (df1/dt, df2/dt).

    df1/dt = f1*f2^2/tau and df2/dt = -f1^2*f2/tau, obtained by
    differentiating the envelopes and using f1^2 + f2^2 = 1.
    """
    f1, f2 = pulse_f(t, tau)
    return f1 * f2 * f2 / tau, -f1 * f1 * f2 / tau


def _generator_matrix(o1: float, o2: float, g: float) -> np.ndarray:
    """Real antisymmetric M with H/hbar = i*M, in basis order."""
    return np.array(
        [
            [0.0, 0.0, -o1, 0.0, 0.0],
            [0.0, 0.0, 0.0, -o2, 0.0],
            [o1, 0.0, 0.0, 0.0, g],
            [0.0, o2, 0.0, 0.0, g],
            [0.0, 0.0, -g, -g, 0.0],
        ]
    )


def hamiltonian(t: float, p: CqedParams, s: PulseSchedule) -> np.ndarray:
    """H(t)/hbar as a 5x5 complex Hermitian matrix (rate units)."""
    o1, o2 = s.rabi(t)
    return 1j * _generator_matrix(o1, o2, p.g)


def effective_hamiltonian(t: float, p: CqedParams, s: PulseSchedule) -> np.ndarray:
    """H_eff(t)/hbar = H(t)/hbar - i*diag(0, 0, gamma, gamma, kappa).

    The anti-Hermitian part encodes conditional no-loss evolution: amplitude
    decays out of the excited states at rate gamma and out of the one-photon
    state at rate kappa, so the squared norm of the evolving state is the
    probability that no photon has been lost.
    """
    h = hamiltonian(t, p, s)
    decay = np.array([0.0, 0.0, p.gamma, p.gamma, p.kappa])
    return h - 1j * np.diag(decay)


@dataclass(frozen=True)
class StateVector:
    """Complex amplitudes over the five basis states, in BasisIndex order."""

    amps: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.amps, dtype=complex)
        if a.shape != (5,):
            raise ParameterError(f"amps must have shape (5,), got {a.shape}")
        object.__setattr__(self, "amps", a)

    def squared_norm(self) -> float:
        """<psi|psi>; under the effective Hamiltonian this is the no-loss probability."""
        return float(np.sum(np.abs(self.amps) ** 2))

    def __getitem__(self, idx) -> complex:
        return complex(self.amps[idx])


def _dark_components(o1: float, o2: float, g: float):
    n0 = g * g * (o1 * o1 + o2 * o2) + o1 * o1 * o2 * o2
    return n0, np.array([g * o2, g * o1, 0.0, 0.0, -o1 * o2])


def darkstate(t: float, p: CqedParams, s: PulseSchedule) -> StateVector:
    """Normalized instantaneous dark state |D(t)>.

    |D> = (g*W2, g*W1, 0, 0, -W1*W2)/sqrt(N0) is the zero-eigenvalue
    eigenstate of H(t) carrying no excited-state amplitude; the adiabatic
    transfer rides it from UG0 (early times, W1 << W2) to GU0 (late times).
    """
    o1, o2 = s.rabi(t)
    n0, v = _dark_components(o1, o2, p.g)
    if n0 <= 0.0:
        raise DegenerateStateError("dark state undefined: both pulses vanish (N0 = 0)")
    return StateVector(v / math.sqrt(n0))


def cavity_population(t: float, p: CqedParams, s: PulseSchedule) -> float:
    """Dark-state photon population p_a = W1^2 W2^2 / N0 = |<GG1|D>|^2."""
    o1, o2 = s.rabi(t)
    n0, _ = _dark_components(o1, o2, p.g)
    if n0 <= 0.0:
        raise DegenerateStateError("cavity population undefined: N0 = 0")
    return (o1 * o1 * o2 * o2) / n0
