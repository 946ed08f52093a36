"""cmatsim: cavity-mediated adiabatic transfer between two three-level atoms.

A simulator and analysis toolkit for dark-state adiabatic transfer through an
optical cavity: exact 5x5 Hamiltonian dynamics under no-loss conditioning,
closed-form instantaneous eigensystem, the adiabatic speed-limit constant
tau_0, the photon-loss balancing optimum with its 2/sqrt(C) floor, threshold
crossovers, and parameter-space sweeps with CSV/JSON output.
"""

__version__ = "0.1.0"

from .adiabatic import (
    AdiabaticFactors,
    Binding,
    SpeedLimitReport,
    adiabatic_coupling_ratio,
    omega0_from_balancing,
    tau0,
    thresholds,
)
from .dynamics import SimConfig, SimResult, evolve, norm_history_check, photon_loss_probability
from .eigensystem import EigenSystem, eigenvalues, eigenvectors, validate_against_numeric
from .errors import (
    CmatError,
    ConfigError,
    DegenerateStateError,
    IntegrationError,
    ParameterError,
    SingularGapError,
    UndefinedCooperativityError,
)
from .lossmodel import LossPrediction, Objective, balancing_optimality_scan, beta, optimize_omega0
from .model import (
    BasisIndex,
    CqedParams,
    PulseSchedule,
    StateVector,
    cavity_population,
    darkstate,
    effective_hamiltonian,
    hamiltonian,
    pulse_f,
)
from .sweep import (
    AxisSpec,
    CellRecord,
    EmitFormat,
    SweepMode,
    SweepResult,
    SweepSpec,
    emit,
    run_dissipation_free_map,
    run_success_map,
    run_sweep,
    run_truncation_study,
)

__all__ = [
    "__version__",
    "AdiabaticFactors", "Binding", "SpeedLimitReport", "adiabatic_coupling_ratio",
    "omega0_from_balancing", "tau0", "thresholds",
    "SimConfig", "SimResult", "evolve", "norm_history_check", "photon_loss_probability",
    "EigenSystem", "eigenvalues", "eigenvectors", "validate_against_numeric",
    "CmatError", "ConfigError", "DegenerateStateError", "IntegrationError",
    "ParameterError", "SingularGapError", "UndefinedCooperativityError",
    "LossPrediction", "Objective", "balancing_optimality_scan", "beta", "optimize_omega0",
    "BasisIndex", "CqedParams", "PulseSchedule", "StateVector", "cavity_population",
    "darkstate", "effective_hamiltonian", "hamiltonian", "pulse_f",
    "AxisSpec", "CellRecord", "EmitFormat", "SweepMode", "SweepResult", "SweepSpec",
    "emit", "run_dissipation_free_map", "run_success_map", "run_sweep",
    "run_truncation_study",
]
