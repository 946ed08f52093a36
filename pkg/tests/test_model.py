"""Tests for the five-state model: pulse shapes, Hamiltonians, dark state."""

import numpy as np
import pytest

from cmatsim.errors import DegenerateStateError, ParameterError, UndefinedCooperativityError
from cmatsim.model import (
    BasisIndex,
    CqedParams,
    PulseSchedule,
    StateVector,
    cavity_population,
    darkstate,
    effective_hamiltonian,
    hamiltonian,
    pulse_f,
    pulse_f_derivatives,
)

# f1(tau, tau) = e / sqrt(e^2 + 1), frozen to full double precision.
F1_AT_ONE_TAU = 0.9385078997951388


# ---------------------------------------------------------------------------
# Pulse envelopes
# ---------------------------------------------------------------------------

def test_pulse_sum_of_squares_is_one_everywhere():
    """f1^2 + f2^2 = 1 must hold to machine precision across the window."""
    s = np.linspace(-30.0, 30.0, 2001)
    for t in s:
        f1, f2 = pulse_f(float(t), 1.0)
        assert abs(f1 * f1 + f2 * f2 - 1.0) <= 1e-15


def test_pulse_midpoint_and_frozen_value():
    f1, f2 = pulse_f(0.0, 1.0)
    assert f1 == pytest.approx(np.sqrt(0.5), rel=1e-15)
    assert f2 == pytest.approx(np.sqrt(0.5), rel=1e-15)

    f1, f2 = pulse_f(1.0, 1.0)
    assert f1 == pytest.approx(F1_AT_ONE_TAU, rel=1e-15)
    assert f2 == pytest.approx(np.sqrt(1.0 - F1_AT_ONE_TAU**2), rel=1e-14)


def test_pulse_mirror_symmetry():
    # swapping t -> -t swaps the two envelopes
    for t in (0.3, 1.7, 4.2, 11.0):
        f1, f2 = pulse_f(t, 2.0)
        g1, g2 = pulse_f(-t, 2.0)
        assert f1 == pytest.approx(g2, rel=1e-15)
        assert f2 == pytest.approx(g1, rel=1e-15)


def test_pulse_saturates_without_overflow():
    """Extreme arguments must neither overflow nor lose the identity."""
    with np.errstate(over="raise", invalid="raise"):
        f1, f2 = pulse_f(1e4, 1.0)
        assert f1 == 1.0 and f2 == 0.0
        f1, f2 = pulse_f(-1e8, 1.0)
        assert f1 == 0.0 and f2 == 1.0
        f1, f2 = pulse_f(700.0, 1.0)  # e^{2t/tau} alone would overflow
        assert f1 == 1.0
        assert np.isfinite(f2)


def test_pulse_monotonicity():
    s = np.linspace(-12.0, 12.0, 401)
    f1 = np.array([pulse_f(float(t), 1.0)[0] for t in s])
    f2 = np.array([pulse_f(float(t), 1.0)[1] for t in s])
    assert np.all(np.diff(f1) > 0)
    assert np.all(np.diff(f2) < 0)


def test_pulse_derivatives_match_finite_differences():
    h = 1e-6
    for t in (-3.0, -0.5, 0.0, 0.9, 2.5):
        df1, df2 = pulse_f_derivatives(t, 1.3)
        fd1 = (pulse_f(t + h, 1.3)[0] - pulse_f(t - h, 1.3)[0]) / (2 * h)
        fd2 = (pulse_f(t + h, 1.3)[1] - pulse_f(t - h, 1.3)[1]) / (2 * h)
        assert df1 == pytest.approx(fd1, rel=1e-7, abs=1e-10)
        assert df2 == pytest.approx(fd2, rel=1e-7, abs=1e-10)


def test_pulse_derivative_closed_forms():
    # df1/dt = f1 f2^2 / tau and df2/dt = -f1^2 f2 / tau
    tau = 0.7
    for t in (-2.0, 0.0, 1.1):
        f1, f2 = pulse_f(t, tau)
        df1, df2 = pulse_f_derivatives(t, tau)
        assert df1 == pytest.approx(f1 * f2 * f2 / tau, rel=1e-14)
        assert df2 == pytest.approx(-f1 * f1 * f2 / tau, rel=1e-14)


def test_pulse_rejects_bad_tau():
    with pytest.raises(ParameterError):
        pulse_f(0.0, 0.0)
    with pytest.raises(ParameterError):
        pulse_f(0.0, -1.0)


def test_pulse_accepts_arrays():
    t = np.array([-1.0, 0.0, 1.0])
    f1, f2 = pulse_f(t, 1.0)
    assert f1.shape == (3,)
    assert np.allclose(f1**2 + f2**2, 1.0, atol=1e-15)


# ---------------------------------------------------------------------------
# Parameter containers
# ---------------------------------------------------------------------------

def test_params_validation():
    p = CqedParams(g=50.0, kappa=6.25, gamma=1.0)
    assert (p.g, p.kappa, p.gamma) == (50.0, 6.25, 1.0)
    with pytest.raises(ParameterError):
        CqedParams(g=0.0, kappa=1.0, gamma=1.0)
    with pytest.raises(ParameterError):
        CqedParams(g=1.0, kappa=-0.1, gamma=1.0)
    with pytest.raises(ParameterError):
        CqedParams(g=1.0, kappa=1.0, gamma=-2.0)


def test_cooperativity():
    assert CqedParams(50.0, 6.25, 1.0).cooperativity() == pytest.approx(200.0, rel=1e-15)
    with pytest.raises(UndefinedCooperativityError):
        CqedParams(1.0, 0.0, 1.0).cooperativity()
    with pytest.raises(UndefinedCooperativityError):
        CqedParams(1.0, 1.0, 0.0).cooperativity()


def test_pulse_schedule_window():
    s = PulseSchedule(omega0=2.0, tau=0.4)
    assert s.t_start == pytest.approx(-3.0)
    assert s.t_end == pytest.approx(3.0)
    assert s.duration == pytest.approx(6.0)
    o1, o2 = s.rabi(0.0)
    assert o1 == pytest.approx(2.0 * np.sqrt(0.5))
    assert o2 == pytest.approx(o1)

    wide = PulseSchedule(omega0=2.0, tau=0.4, halfwidth=10.0)
    assert wide.duration == pytest.approx(8.0)

    with pytest.raises(ParameterError):
        PulseSchedule(omega0=-1.0, tau=1.0)
    with pytest.raises(ParameterError):
        PulseSchedule(omega0=1.0, tau=0.0)
    with pytest.raises(ParameterError):
        PulseSchedule(omega0=1.0, tau=1.0, halfwidth=0.0)


def test_rabi_bounded_by_omega0():
    s = PulseSchedule(omega0=3.0, tau=1.0)
    for t in np.linspace(s.t_start, s.t_end, 101):
        o1, o2 = s.rabi(float(t))
        assert 0.0 <= o1 <= 3.0
        assert 0.0 <= o2 <= 3.0


def test_basis_order():
    assert [int(b) for b in BasisIndex] == [0, 1, 2, 3, 4]
    assert BasisIndex.UG0 == 0
    assert BasisIndex.GU0 == 1
    assert BasisIndex.EG0 == 2
    assert BasisIndex.GE0 == 3
    assert BasisIndex.GG1 == 4


def test_statevector():
    v = StateVector(np.array([1.0, 0, 0, 0, 1.0j]))
    assert v.squared_norm() == pytest.approx(2.0)
    assert v[4] == 1.0j
    with pytest.raises(ParameterError):
        StateVector(np.zeros(4))


# ---------------------------------------------------------------------------
# Hamiltonians
# ---------------------------------------------------------------------------

def test_hamiltonian_matches_explicit_matrix():
    """Spot-check every entry against the written-out coupling matrix."""
    p = CqedParams(g=2.0, kappa=0.0, gamma=0.0)
    s = PulseSchedule(omega0=1.5, tau=1.0)
    t = 0.35
    o1, o2 = s.rabi(t)
    g = p.g
    want = 1j * np.array(
        [
            [0, 0, -o1, 0, 0],
            [0, 0, 0, -o2, 0],
            [o1, 0, 0, 0, g],
            [0, o2, 0, 0, g],
            [0, 0, -g, -g, 0],
        ]
    )
    np.testing.assert_allclose(hamiltonian(t, p, s), want, atol=0.0)


def test_hamiltonian_is_hermitian():
    rng = np.random.default_rng(42)
    for _ in range(50):
        p = CqedParams(g=float(10 ** rng.uniform(-1, 1)), kappa=0.0, gamma=0.0)
        s = PulseSchedule(omega0=float(10 ** rng.uniform(-1, 1)), tau=1.0)
        t = float(rng.uniform(-7.5, 7.5))
        h = hamiltonian(t, p, s)
        np.testing.assert_array_equal(h, h.conj().T)
        assert np.all(h.real == 0.0)  # purely imaginary entries


def test_hamiltonian_annihilates_darkstate():
    rng = np.random.default_rng(7)
    for _ in range(50):
        p = CqedParams(g=float(10 ** rng.uniform(-1, 1)), kappa=0.0, gamma=0.0)
        s = PulseSchedule(omega0=float(10 ** rng.uniform(-1, 1)), tau=1.0)
        t = float(rng.uniform(-6.0, 6.0))
        h = hamiltonian(t, p, s)
        d = darkstate(t, p, s).amps
        scale = max(p.g, s.omega0)
        assert np.max(np.abs(h @ d)) < 1e-12 * scale


def test_effective_hamiltonian_decay_block():
    p = CqedParams(g=3.0, kappa=0.8, gamma=0.2)
    s = PulseSchedule(omega0=1.0, tau=1.0)
    h = hamiltonian(0.1, p, s)
    he = effective_hamiltonian(0.1, p, s)
    np.testing.assert_array_equal(
        he - h, -1j * np.diag([0.0, 0.0, p.gamma, p.gamma, p.kappa])
    )

    lossless = CqedParams(g=3.0, kappa=0.0, gamma=0.0)
    np.testing.assert_array_equal(
        effective_hamiltonian(0.1, lossless, s), hamiltonian(0.1, lossless, s)
    )


# ---------------------------------------------------------------------------
# Dark state and cavity population
# ---------------------------------------------------------------------------

def test_darkstate_symmetric_point():
    # W1 = W2 = g  ==>  |D> = (1, 1, 0, 0, -1)/sqrt(3)
    g = 1.7
    p = CqedParams(g=g, kappa=0.0, gamma=0.0)
    s = PulseSchedule(omega0=g * np.sqrt(2.0), tau=1.0)
    d = darkstate(0.0, p, s).amps
    np.testing.assert_allclose(
        d, np.array([1.0, 1.0, 0.0, 0.0, -1.0]) / np.sqrt(3.0), rtol=1e-14, atol=1e-15
    )


def test_darkstate_connects_the_two_ground_states():
    """Far before the pulses the dark state is UG0; far after it is GU0."""
    p = CqedParams(g=2.0, kappa=0.0, gamma=0.0)
    s = PulseSchedule(omega0=1.0, tau=1.0, halfwidth=50.0)
    early = darkstate(-40.0, p, s).amps
    late = darkstate(40.0, p, s).amps
    np.testing.assert_allclose(early, np.eye(5)[BasisIndex.UG0], atol=1e-12)
    np.testing.assert_allclose(late, np.eye(5)[BasisIndex.GU0], atol=1e-12)


def test_darkstate_normalized_with_no_excited_amplitude():
    rng = np.random.default_rng(3)
    for _ in range(30):
        p = CqedParams(g=float(10 ** rng.uniform(-1, 1)), kappa=0.0, gamma=0.0)
        s = PulseSchedule(omega0=float(10 ** rng.uniform(-1, 1)), tau=1.0)
        d = darkstate(float(rng.uniform(-5, 5)), p, s)
        assert d.squared_norm() == pytest.approx(1.0, rel=1e-13)
        assert d[BasisIndex.EG0] == 0.0
        assert d[BasisIndex.GE0] == 0.0


def test_cavity_population_values():
    g = 1.7
    p = CqedParams(g=g, kappa=0.0, gamma=0.0)
    # symmetric point with W = g: p_a = 1/3
    s = PulseSchedule(omega0=g * np.sqrt(2.0), tau=1.0)
    assert cavity_population(0.0, p, s) == pytest.approx(1.0 / 3.0, rel=1e-14)
    # general symmetric point: p_a = W^2 / (2 g^2 + W^2)
    s2 = PulseSchedule(omega0=0.9, tau=1.0)
    w = 0.9 * np.sqrt(0.5)
    assert cavity_population(0.0, p, s2) == pytest.approx(
        w * w / (2 * g * g + w * w), rel=1e-13
    )


def test_cavity_population_matches_darkstate_photon_weight():
    rng = np.random.default_rng(11)
    for _ in range(20):
        p = CqedParams(g=float(10 ** rng.uniform(-1, 1)), kappa=0.0, gamma=0.0)
        s = PulseSchedule(omega0=float(10 ** rng.uniform(-1, 1)), tau=1.0)
        t = float(rng.uniform(-4, 4))
        d = darkstate(t, p, s)
        assert cavity_population(t, p, s) == pytest.approx(
            abs(d[BasisIndex.GG1]) ** 2, rel=1e-12
        )


def test_cavity_population_grows_with_drive():
    """At the pulse midpoint p_a increases with Omega_0 and vanishes as it -> 0."""
    p = CqedParams(g=1.0, kappa=0.0, gamma=0.0)
    omegas = np.logspace(-3, 1, 25)
    pa = [cavity_population(0.0, p, PulseSchedule(float(w), 1.0)) for w in omegas]
    assert np.all(np.diff(pa) > 0)
    assert pa[0] < 1e-6
