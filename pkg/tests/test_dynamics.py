"""Time evolution tests: unitarity, loss bookkeeping, adiabatic convergence."""

import dataclasses

import numpy as np
import pytest

from cmatsim.errors import ParameterError
from cmatsim.model import BasisIndex, CqedParams, PulseSchedule, StateVector
from cmatsim.adiabatic import tau0
from cmatsim.dynamics import (
    SimConfig,
    SimResult,
    TrajectorySamples,
    evolve,
    norm_history_check,
    photon_loss_probability,
)

LOSSLESS = CqedParams(g=10.0, kappa=0.0, gamma=0.0)
DISSIPATIVE = CqedParams(g=50.0, kappa=6.25, gamma=1.0)  # C = 200

# keep unit-test runs quick; accuracy-sensitive tests override this
FAST = SimConfig(rel_tol=1e-8, abs_tol=1e-11, sample_count=400)


def test_simconfig_validation():
    with pytest.raises(ParameterError):
        SimConfig(rel_tol=0.0)
    with pytest.raises(ParameterError):
        SimConfig(abs_tol=-1e-9)
    with pytest.raises(ParameterError):
        SimConfig(max_step=0.0)
    with pytest.raises(ParameterError):
        SimConfig(sample_count=1)


def test_lossless_evolution_is_unitary():
    """Without decay the norm must be conserved and the losses stay zero."""
    res = evolve(LOSSLESS, PulseSchedule(omega0=10.0, tau=1.0), FAST)
    assert res.norm_final == pytest.approx(1.0, abs=1e-8)
    assert res.i_a == 0.0
    assert res.i_cav == 0.0
    assert photon_loss_probability(res) == pytest.approx(0.0, abs=1e-8)


def test_long_pulse_transfers_population():
    # W0 T = 1000 with g = W0: deep in the adiabatic limit
    w = 1000.0 / 15.0
    res = evolve(
        CqedParams(g=w, kappa=0.0, gamma=0.0),
        PulseSchedule(omega0=w, tau=1.0),
        SimConfig(sample_count=200),
    )
    assert res.fidelity > 0.999
    assert abs(res.final_state[BasisIndex.UG0]) ** 2 < 1e-3


def test_eight_tau0_reaches_99_percent():
    """tau = 8 tau_0 is the advertised fidelity>=0.99 operating point."""
    p = CqedParams(g=10.0, kappa=0.0, gamma=0.0)
    t0 = tau0(p, 10.0)
    res = evolve(p, PulseSchedule(omega0=10.0, tau=8.0 * t0), FAST)
    assert res.fidelity >= 0.99


def test_fidelity_converges_with_pulse_duration():
    p = CqedParams(g=10.0, kappa=0.0, gamma=0.0)
    t0 = tau0(p, 10.0)
    fids = [
        evolve(p, PulseSchedule(10.0, m * t0), FAST).fidelity for m in (2, 4, 8, 16)
    ]
    assert all(b > a for a, b in zip(fids, fids[1:]))
    assert fids[-1] > 0.999


def test_loss_budget_closes():
    """norm + I_a + I_cav must account for all probability."""
    rng = np.random.default_rng(31)
    for _ in range(5):
        p = CqedParams(
            g=float(10 ** rng.uniform(0, 1.2)),
            kappa=float(10 ** rng.uniform(-1, 1)),
            gamma=float(10 ** rng.uniform(-1, 0.5)),
        )
        s = PulseSchedule(
            omega0=p.g * float(10 ** rng.uniform(-1.5, 0)),
            tau=float(10 ** rng.uniform(-0.5, 0.5)),
        )
        res = evolve(p, s, FAST)
        assert res.norm_final + res.i_a + res.i_cav == pytest.approx(1.0, abs=1e-6)
        assert photon_loss_probability(res) == pytest.approx(
            res.i_a + res.i_cav, abs=1e-6
        )


def test_norm_never_increases_under_decay():
    res = evolve(DISSIPATIVE, PulseSchedule(omega0=5.0, tau=1.131), FAST)
    assert norm_history_check(res)
    assert res.samples.norms[0] == pytest.approx(1.0, abs=1e-12)
    assert res.norm_final < 1.0


def test_norm_history_check_rejects_upticks():
    res = evolve(DISSIPATIVE, PulseSchedule(omega0=5.0, tau=0.5), FAST)
    norms = res.samples.norms.copy()
    norms[len(norms) // 2] += 1e-2  # larger than any per-sample decrement
    tampered = dataclasses.replace(
        res, samples=TrajectorySamples(res.samples.times, res.samples.amps, norms)
    )
    assert not norm_history_check(tampered)


def test_success_probability_relations():
    res = evolve(DISSIPATIVE, PulseSchedule(omega0=5.0, tau=1.131), FAST)
    assert res.success_probability == abs(res.final_state[BasisIndex.GU0]) ** 2
    assert res.success_probability == pytest.approx(
        res.fidelity * res.norm_final, rel=1e-12
    )
    assert 0.0 < res.success_probability < 1.0


def test_tolerance_refinement_is_converged():
    """Halving rel_tol moves the answer by far less than the check threshold."""
    s = PulseSchedule(omega0=5.0, tau=1.131)
    a = evolve(DISSIPATIVE, s, SimConfig(rel_tol=1e-9, abs_tol=1e-12, sample_count=100))
    b = evolve(DISSIPATIVE, s, SimConfig(rel_tol=5e-10, abs_tol=1e-12, sample_count=100))
    assert abs(a.success_probability - b.success_probability) < 1e-7


def test_evolution_is_deterministic():
    s = PulseSchedule(omega0=3.0, tau=0.7)
    a = evolve(DISSIPATIVE, s, FAST)
    b = evolve(DISSIPATIVE, s, FAST)
    assert a.success_probability == b.success_probability
    np.testing.assert_array_equal(a.samples.amps, b.samples.amps)


def test_sample_grid_spans_pulse_window():
    s = PulseSchedule(omega0=3.0, tau=0.7)
    res = evolve(DISSIPATIVE, s, SimConfig(sample_count=256))
    assert len(res.samples.times) == 256
    assert res.samples.times[0] == pytest.approx(s.t_start)
    assert res.samples.times[-1] == pytest.approx(s.t_end)
    assert isinstance(res.final_state, StateVector)
    assert res.samples.amps.shape == (256, 5)


def test_initial_state_is_ug0():
    res = evolve(DISSIPATIVE, PulseSchedule(omega0=3.0, tau=0.5), FAST)
    first = res.samples.amps[0]
    assert first[BasisIndex.UG0] == 1.0 + 0.0j
    assert np.all(first[1:] == 0.0)
