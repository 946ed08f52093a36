"""Self-contained invariant suites behind the ``validate`` subcommand.

Each check returns a CheckResult; the CLI prints them as a pass/fail table.
The checks repeat, at runtime and with a caller-supplied seed, the load-
bearing identities the test suite freezes: closed-form eigensystem vs dense
diagonalization, probability-budget accounting, the AM-GM floor of the loss
exponent, the small-drive limit of tau_0, and tau_0's independence of tau.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import adiabatic, dynamics, eigensystem, lossmodel, model

__all__ = ["CheckResult", "run_all", "eigensystem_check", "budget_check",
           "amgm_check", "asymptotic_tau0_check", "tau_independence_check"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def default_hamiltonian_builder(o1: float, o2: float, g: float) -> np.ndarray:
    """H/hbar from raw couplings; swap in a broken builder to test the detector."""
    return eigensystem._hermitian_matrix(o1, o2, g)


def eigensystem_check(
    rng: np.random.Generator,
    n: int = 200,
    tol: float = 1e-10,
    hamiltonian_builder: Callable[[float, float, float], np.ndarray] = default_hamiltonian_builder,
) -> CheckResult:
    """Closed-form eigenpairs vs numpy's dense Hermitian eigensolver."""
    worst_eig = 0.0
    worst_res = 0.0
    for _ in range(n):
        o1, o2, g = 10.0 ** rng.uniform(-1.5, 1.5, size=3)
        h = hamiltonian_builder(o1, o2, g)
        es = eigensystem.eigen_closed(o1, o2, g)
        scale = max(np.max(np.abs(es.omega)), 1e-300)
        w_num = np.sort(np.linalg.eigvalsh(h))
        worst_eig = max(worst_eig, float(np.max(np.abs(np.sort(es.omega) - w_num))) / scale)
        for k in range(5):
            res = np.linalg.norm(h @ es.vectors[k] - es.omega[k] * es.vectors[k])
            worst_res = max(worst_res, float(res) / scale)
    passed = worst_eig < tol and worst_res < tol
    return CheckResult(
        "eigensystem closed forms vs dense diagonalization",
        passed,
        f"max eigenvalue err {worst_eig:.2e}, max residual {worst_res:.2e} (tol {tol:g})",
    )


def budget_check(rng: np.random.Generator, n: int = 10, tol: float = 1e-6) -> CheckResult:
    """norm + I_a + I_cav = 1 and monotone norm decay on random dissipative runs."""
    worst = 0.0
    monotone = True
    for _ in range(n):
        p = model.CqedParams(
            g=10.0 ** rng.uniform(0.0, 1.3),
            kappa=10.0 ** rng.uniform(-1.0, 1.0),
            gamma=10.0 ** rng.uniform(-1.0, 0.5),
        )
        s = model.PulseSchedule(
            omega0=p.g * 10.0 ** rng.uniform(-1.5, 0.0),
            tau=10.0 ** rng.uniform(-0.5, 0.5),
        )
        r = dynamics.evolve(p, s)
        worst = max(worst, abs(r.norm_final + r.i_a + r.i_cav - 1.0))
        monotone = monotone and dynamics.norm_history_check(r)
    return CheckResult(
        "probability budget and monotone norm decay",
        worst < tol and monotone,
        f"max |norm + I_a + I_cav - 1| = {worst:.2e} (tol {tol:g}), monotone={monotone}",
    )


def amgm_check(rng: np.random.Generator, n: int = 200) -> CheckResult:
    """beta >= 2/sqrt(C) everywhere; equality at the balancing amplitude."""
    worst_gap = 0.0  # most negative (beta - floor), should stay >= -eps
    worst_eq = 0.0
    for _ in range(n):
        p = model.CqedParams(
            g=10.0 ** rng.uniform(0.0, 2.0),
            kappa=10.0 ** rng.uniform(-2.0, 2.0),
            gamma=10.0 ** rng.uniform(-2.0, 1.0),
        )
        floor = 2.0 / np.sqrt(p.cooperativity())
        tau = 10.0 ** rng.uniform(-2.0, 2.0)
        omega0 = 10.0 ** rng.uniform(-2.0, 2.0)
        worst_gap = min(worst_gap, lossmodel.beta(p, tau, omega0).beta - floor)
        bal = adiabatic.omega0_from_balancing(p, tau)
        worst_eq = max(worst_eq, abs(lossmodel.beta(p, tau, bal).beta / floor - 1.0))
    passed = worst_gap >= -1e-12 and worst_eq < 1e-12
    return CheckResult(
        "loss exponent AM-GM floor 2/sqrt(C)",
        passed,
        f"min(beta - floor) = {worst_gap:.2e}, balancing equality err {worst_eq:.2e}",
    )


def asymptotic_tau0_check() -> CheckResult:
    """tau_0 -> 1/(2*Omega_0) as the drive weakens."""
    p = model.CqedParams(g=1.0, kappa=0.0, gamma=0.0)
    r05 = adiabatic.tau0(p, 0.05) * 2.0 * 0.05
    r01 = adiabatic.tau0(p, 0.01) * 2.0 * 0.01
    passed = abs(r05 - 1.0) < 0.05 and abs(r01 - 1.0) < 0.02
    return CheckResult(
        "small-drive limit tau_0 = 1/(2*Omega_0)",
        passed,
        f"tau0*2*Omega0 = {r05:.6f} at Omega0/g=0.05, {r01:.6f} at 0.01",
    )


def tau_independence_check() -> CheckResult:
    """Maximizing tau*ratio(t) over t gives the same tau_0 at tau = 1 and 10."""
    p = model.CqedParams(g=2.0, kappa=0.0, gamma=0.0)
    omega0 = 1.0
    ref = adiabatic.tau0(p, omega0)
    worst = 0.0
    for tau in (1.0, 10.0):
        s = model.PulseSchedule(omega0=omega0, tau=tau)
        ts = np.linspace(s.t_start, s.t_end, 20001)
        vals = np.array([tau * adiabatic.adiabatic_coupling_ratio(t, p, s) for t in ts])
        worst = max(worst, abs(float(vals.max()) / ref - 1.0))
    return CheckResult(
        "tau_0 independent of tau (change of variables)",
        worst < 1e-6,
        f"max relative deviation {worst:.2e} across tau in {{1, 10}}",
    )


def run_all(seed: int = 12345, eig_samples: int = 200, budget_samples: int = 10) -> list[CheckResult]:
    """Run every suite with one seeded generator; order is fixed."""
    rng = np.random.default_rng(seed)
    return [
        eigensystem_check(rng, n=eig_samples),
        budget_check(rng, n=budget_samples),
        amgm_check(rng),
        asymptotic_tau0_check(),
        tau_independence_check(),
    ]
