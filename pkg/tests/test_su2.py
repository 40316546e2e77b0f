import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from twinpulse.su2 import (
    A,
    B,
    C,
    D,
    IDENTITY,
    PulseArea,
    Su2Matrix,
    compose,
    equivalent_up_to_global_phase,
    phase_shift,
    resonant_propagator,
    rotation,
    survival_probability,
    transition_probability,
)

from conftest import pulse_matrix

angles = st.floats(-10, 10, allow_nan=False)
errors = st.floats(-1.5, 1.5, allow_nan=False)
areas = st.sampled_from([D, A, B, C, PulseArea(3), PulseArea(12)])


def random_su2(rng) -> Su2Matrix:
    v = rng.normal(size=4)
    v /= np.linalg.norm(v)
    return Su2Matrix(complex(v[0], v[1]), complex(v[2], v[3]))


def test_pulse_area_units():
    assert (D.quarter_pi, A.quarter_pi, B.quarter_pi, C.quarter_pi) == (1, 2, 4, 8)
    assert B.nominal == pytest.approx(math.pi)
    assert A.actual(0.2) == pytest.approx(math.pi / 2 * 1.2)
    assert A.doubled() == B and B.doubled() == C
    assert [x.symbol for x in (D, A, B, C)] == ["D", "A", "B", "C"]
    assert PulseArea.from_symbol("C") == C


@pytest.mark.parametrize("bad", [0, -2, 1.5])
def test_pulse_area_rejects(bad):
    with pytest.raises(ValueError):
        PulseArea(bad)


def test_exact_pi_pulse():
    u = resonant_propagator(B, 0.0)
    assert abs(u.a) < 1e-15
    assert u.b == pytest.approx(-1j, abs=1e-15)


def test_exact_half_pi_pulse():
    u = resonant_propagator(A, 0.0)
    assert u.a == pytest.approx(math.sqrt(2) / 2, abs=1e-15)
    assert u.b == pytest.approx(-1j * math.sqrt(2) / 2, abs=1e-15)


def test_pi_pulse_with_error():
    # direct evaluation of sin^2(area / 2), area = 1.1 pi
    expected = math.sin(0.55 * math.pi) ** 2
    assert transition_probability(resonant_propagator(B, 0.1)) == pytest.approx(expected, abs=1e-15)
    assert expected == pytest.approx(0.97553, abs=5e-6)


@given(areas, errors, angles)
def test_matches_matrix_exponential(area, eps, phi):
    u = phase_shift(resonant_propagator(area, eps), phi)
    np.testing.assert_allclose(u.matrix(), pulse_matrix(area.actual(eps), phi), atol=1e-12)


def test_phase_shift_examples():
    u = resonant_propagator(A, 0.3)
    assert phase_shift(u, 0.0) == u
    v = phase_shift(Su2Matrix(0j, -1j), math.pi / 2)
    assert v.b == pytest.approx(1, abs=1e-15)
    assert v.a == 0


@given(areas, errors, angles, angles)
def test_phase_shift_additive(area, eps, p1, p2):
    u = resonant_propagator(area, eps)
    lhs = phase_shift(phase_shift(u, p1), p2)
    rhs = phase_shift(u, p1 + p2)
    assert abs(lhs.a - rhs.a) < 1e-12 and abs(lhs.b - rhs.b) < 1e-12


@given(areas, errors, angles)
def test_probability_ignores_phase(area, eps, phi):
    u = resonant_propagator(area, eps)
    assert transition_probability(phase_shift(u, phi)) == pytest.approx(transition_probability(u), abs=1e-15)


def test_compose_identity():
    u = phase_shift(resonant_propagator(A, 0.37), 1.1)
    assert compose(IDENTITY, u) == u
    assert compose(u, IDENTITY) == u


def test_compose_order_is_chronological():
    later = phase_shift(resonant_propagator(A, 0.1), 0.4)
    earlier = phase_shift(resonant_propagator(B, -0.2), 2.0)
    np.testing.assert_allclose(compose(later, earlier).matrix(), later.matrix() @ earlier.matrix(), atol=1e-15)
    assert (later @ earlier) == compose(later, earlier)


@pytest.mark.parametrize("single, double", [(A, B), (B, C)])
@pytest.mark.parametrize("phi", np.linspace(0, 2 * np.pi, 64, endpoint=False))
def test_pulse_merging(single, double, phi):
    for eps in np.linspace(-1, 1, 101):
        x = phase_shift(resonant_propagator(single, eps), phi)
        merged = phase_shift(resonant_propagator(double, eps), phi)
        got = compose(x, x)
        assert abs(got.a - merged.a) < 1e-14 and abs(got.b - merged.b) < 1e-14


def test_unitarity_over_100_compositions():
    rng = np.random.default_rng(20240117)
    u = IDENTITY
    for _ in range(100):
        area = [D, A, B, C][rng.integers(4)]
        u = compose(phase_shift(resonant_propagator(area, rng.uniform(-1, 1)), rng.uniform(0, 2 * np.pi)), u)
        assert u.unitarity_defect() < 1e-12


def test_probabilities():
    assert transition_probability(resonant_propagator(B, 0)) == 1.0
    assert transition_probability(IDENTITY) == 0.0
    u = resonant_propagator(A, 0.2)
    assert transition_probability(u) + survival_probability(u) == pytest.approx(1.0, abs=1e-15)


def test_probability_is_clamped():
    assert transition_probability(Su2Matrix(0j, complex(1 + 1e-13))) == 1.0


def test_global_phase_equivalence():
    rng = np.random.default_rng(3)
    u = random_su2(rng)
    assert equivalent_up_to_global_phase(u, u)
    assert equivalent_up_to_global_phase(u, Su2Matrix(-u.a, -u.b))
    assert not equivalent_up_to_global_phase(resonant_propagator(B, 0), IDENTITY)
    # same |b| but a different operator
    assert not equivalent_up_to_global_phase(rotation(1.0, 0.0), rotation(1.0, 0.5))


def test_dagger_inverts():
    u = random_su2(np.random.default_rng(9))
    w = compose(u, u.dagger())
    assert abs(w.a - 1) < 1e-15 and abs(w.b) < 1e-15


def test_rotation_matches_resonant():
    assert rotation(math.pi) == resonant_propagator(B, 0.0)
    u = rotation(2.0, 0.3)
    assert u.b == pytest.approx(-1j * math.sin(1.0) * cmath.exp(0.3j))
