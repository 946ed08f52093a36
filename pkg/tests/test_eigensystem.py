"""Closed-form eigensystem tests, cross-checked against dense diagonalization."""

import numpy as np
import pytest

from cmatsim.errors import ParameterError
from cmatsim.model import CqedParams, PulseSchedule, darkstate
from cmatsim.eigensystem import (
    EigenSystem,
    bright_pair,
    bright_vector_raw,
    eigen_closed,
    eigenvalues,
    eigenvectors,
    validate_against_numeric,
    _hermitian_matrix,
)


def _random_triple(rng):
    return tuple(float(10 ** rng.uniform(-1.5, 1.5)) for _ in range(3))


class TestClosedFormValues:
    def test_symmetric_point_frequencies(self):
        """W1 = W2 = 1, g = 2: branch frequencies are exactly 1 and 3."""
        es = eigen_closed(1.0, 1.0, 2.0)
        np.testing.assert_allclose(es.omega, [0.0, 1.0, -1.0, 3.0, -3.0], rtol=1e-15)

    def test_frequency_sum_rule(self):
        # w1^2 + w2^2 = 2 g^2 + W1^2 + W2^2
        rng = np.random.default_rng(21)
        for _ in range(100):
            o1, o2, g = _random_triple(rng)
            es = eigen_closed(o1, o2, g)
            lhs = es.omega[1] ** 2 + es.omega[3] ** 2
            rhs = 2 * g * g + o1 * o1 + o2 * o2
            assert lhs == pytest.approx(rhs, rel=1e-12)

    def test_symmetric_point_coefficients(self):
        """At W1 = W2 the inner pair reduces to A1 = 2 g^2, B1 = -2 g^2."""
        g = 1.3
        es = eigen_closed(0.8, 0.8, g)
        a1, b1, a2, b2 = es.coeffs
        assert a1 == pytest.approx(2 * g * g, rel=1e-14)
        assert b1 == pytest.approx(-2 * g * g, rel=1e-14)
        # outer pair: A2 = B2 = W^2 - w2^2 (equal and nonzero)
        assert a2 == b2
        assert a2 != 0.0

    def test_inner_pair_has_no_photon_weight_at_symmetric_point(self):
        es = eigen_closed(0.8, 0.8, 1.3)
        assert abs(es.vectors[1][4]) == 0.0
        assert abs(es.vectors[2][4]) == 0.0

    def test_wrong_branch_template_vanishes_at_symmetric_point(self):
        """Pair-2 coefficients evaluated on the pair-1 branch must collapse."""
        o, g = 0.8, 1.3
        es = eigen_closed(o, o, g)
        w1sq = float(es.omega[1]) ** 2
        a, b = bright_pair(w1sq, o, o, g, which=2)
        scale = 2 * g * g + 2 * o * o
        assert abs(a) < 1e-15 * scale
        assert abs(b) < 1e-15 * scale
        raw = bright_vector_raw(es.omega[1], a, b, o, o, g)
        assert np.max(np.abs(raw)) < 1e-14 * scale


class TestAgainstDenseDiagonalization:
    def test_random_triples(self):
        """Eigenvalues and residuals versus numpy.linalg.eigh, 300 draws."""
        rng = np.random.default_rng(99)
        worst_val = 0.0
        worst_res = 0.0
        for _ in range(300):
            o1, o2, g = _random_triple(rng)
            es = eigen_closed(o1, o2, g)
            h = _hermitian_matrix(o1, o2, g)
            w_num = np.linalg.eigvalsh(h)
            worst_val = max(worst_val, float(np.max(np.abs(np.sort(es.omega) - w_num))))
            for k in range(5):
                r = h @ es.vectors[k] - es.omega[k] * es.vectors[k]
                worst_res = max(worst_res, float(np.max(np.abs(r))))
        assert worst_val < 1e-10
        assert worst_res < 1e-10

    def test_orthonormal_basis(self):
        rng = np.random.default_rng(5)
        for _ in range(100):
            o1, o2, g = _random_triple(rng)
            es = eigen_closed(o1, o2, g)
            gram = es.vectors @ es.vectors.conj().T
            assert np.max(np.abs(gram - np.eye(5))) < 1e-10

    def test_dark_slot_is_darkstate_verbatim(self):
        p = CqedParams(g=1.0, kappa=0.0, gamma=0.0)
        # include a strong-drive case where the photon amplitude dominates
        for omega0 in (0.3, 1.0, 6.0):
            s = PulseSchedule(omega0=omega0, tau=1.0)
            for t in (-1.2, 0.0, 0.8):
                es = eigenvectors(t, p, s)
                np.testing.assert_array_equal(
                    es.vectors[0], darkstate(t, p, s).amps.astype(complex)
                )

    def test_deterministic_output(self):
        a = eigen_closed(0.37, 1.9, 2.2)
        b = eigen_closed(0.37, 1.9, 2.2)
        np.testing.assert_array_equal(a.omega, b.omega)
        np.testing.assert_array_equal(a.vectors, b.vectors)


class TestDegenerateHandling:
    def test_zero_drive_falls_back_numerically(self):
        """W1 = W2 = 0 leaves a threefold-degenerate zero eigenvalue."""
        g = 2.0
        es = eigen_closed(0.0, 0.0, g)
        assert es.numeric_fallback == (0, 1, 2)
        np.testing.assert_allclose(
            np.sort(es.omega), [-np.sqrt(2) * g, 0, 0, 0, np.sqrt(2) * g], atol=1e-14
        )
        h = _hermitian_matrix(0.0, 0.0, g)
        for k in range(5):
            r = h @ es.vectors[k] - es.omega[k] * es.vectors[k]
            assert np.max(np.abs(r)) < 1e-12
        gram = es.vectors @ es.vectors.conj().T
        assert np.max(np.abs(gram - np.eye(5))) < 1e-12

    def test_generic_points_use_closed_form_only(self):
        rng = np.random.default_rng(13)
        for _ in range(50):
            es = eigen_closed(*_random_triple(rng))
            assert es.numeric_fallback == ()


# ---------------------------------------------------------------------------
# Time-dependent wrappers and the self-check report
# ---------------------------------------------------------------------------

def test_eigenvalues_wrapper_consistency():
    p = CqedParams(g=2.0, kappa=0.0, gamma=0.0)
    s = PulseSchedule(omega0=1.1, tau=0.7)
    for t in (-2.0, 0.0, 0.4):
        np.testing.assert_array_equal(eigenvalues(t, p, s), eigenvectors(t, p, s).omega)


def test_eigenvalue_continuity_along_pulse():
    """Branch frequencies are smooth in t: max jump shrinks with the grid."""
    p = CqedParams(g=1.5, kappa=0.0, gamma=0.0)
    s = PulseSchedule(omega0=2.0, tau=1.0)

    def max_jump(n):
        ts = np.linspace(s.t_start, s.t_end, n)
        om = np.array([eigenvalues(float(t), p, s) for t in ts])
        return float(np.max(np.abs(np.diff(om, axis=0))))

    coarse, fine = max_jump(200), max_jump(2000)
    assert fine < coarse / 5.0


def test_validate_report_passes_on_generic_point():
    p = CqedParams(g=2.0, kappa=0.0, gamma=0.0)
    s = PulseSchedule(omega0=1.0, tau=1.0)
    rep = validate_against_numeric(0.3, p, s, tol=1e-10)
    assert rep.passed
    assert rep.max_eigenvalue_error < 1e-12
    assert rep.max_subspace_angle < 1e-7
    assert not rep.degenerate
    assert not rep.decay_ignored
    assert rep.fallback_slots == ()


def test_validate_report_flags_decay_rates():
    s = PulseSchedule(omega0=1.0, tau=1.0)
    rep = validate_against_numeric(0.0, CqedParams(2.0, 0.5, 0.1), s, tol=1e-10)
    assert rep.decay_ignored
    assert rep.passed  # decay does not enter H(t) itself


def test_validate_report_flags_degeneracy_instead_of_failing():
    """With a coarse clustering tolerance everything merges; report says so."""
    p = CqedParams(g=2.0, kappa=0.0, gamma=0.0)
    s = PulseSchedule(omega0=1.0, tau=1.0)
    rep = validate_against_numeric(0.0, p, s, tol=2.0)
    assert rep.degenerate


def test_validate_rejects_bad_tolerance():
    p = CqedParams(g=2.0, kappa=0.0, gamma=0.0)
    s = PulseSchedule(omega0=1.0, tau=1.0)
    with pytest.raises(ParameterError):
        validate_against_numeric(0.0, p, s, tol=0.0)


def test_eigensystem_is_frozen():
    es = eigen_closed(1.0, 1.0, 2.0)
    assert isinstance(es, EigenSystem)
    with pytest.raises(AttributeError):
        es.omega = np.zeros(5)
