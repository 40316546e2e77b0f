from fractions import Fraction as F

import numpy as np
import pytest

from twinpulse.robustness import propagator_arrays
from twinpulse.sequences import (
    CompositeSequence,
    Family,
    Pulse,
    build_twin,
    expected_total_area,
    half_sequence,
    phases_type1,
    phases_type23,
    reference_sequence,
    single_pulse,
    total_area,
    twin,
)
from twinpulse.su2 import A, B, C, D


def listing(text: str) -> tuple[Pulse, ...]:
    """Parse 'A 0 | B 1/4 | ...' into pulses (phases in units of pi)."""
    out = []
    for item in text.split("|"):
        sym, phase = item.split()
        area = {"D": D, "A": A, "B": B, "C": C}[sym]
        out.append(Pulse(area, F(phase)))
    return tuple(out)


def test_phases_type1_examples():
    assert phases_type1(2) == [0, F(1, 2)]
    assert phases_type1(3) == [0, F(1, 4), 1]
    assert phases_type1(4) == [0, F(1, 6), F(2, 3), F(3, 2)]


def test_phases_type23_examples():
    assert phases_type23(2) == [0, F(2, 3)]
    assert phases_type23(3) == [0, F(2, 5), F(8, 5)]
    assert phases_type23(5) == [0, F(2, 9), F(8, 9), 0, F(14, 9)]


@pytest.mark.parametrize("fn", [phases_type1, phases_type23])
@pytest.mark.parametrize("bad", [1, 0, -3])
def test_phases_reject_small_n(fn, bad):
    with pytest.raises(ValueError):
        fn(bad)


@pytest.mark.parametrize("n", range(2, 21))
def test_phase_denominators(n):
    for p in phases_type1(n):
        assert (2 * (n - 1)) % p.denominator == 0 and 0 <= p < 2
    for p in phases_type23(n):
        assert (2 * n - 1) % p.denominator == 0 and 0 <= p < 2


# Listings as printed for type 1 and type 2, N = 2..5.
PRINTED = {
    (Family.TYPE1, 2): "A 0 | B 1/2 | A 0",
    (Family.TYPE1, 3): "A 0 | B 1/4 | B 1 | B 1/4 | A 0",
    (Family.TYPE1, 4): "A 0 | B 1/6 | B 2/3 | B 3/2 | B 2/3 | B 1/6 | A 0",
    (Family.TYPE1, 5): "A 0 | B 1/8 | B 1/2 | B 9/8 | B 0 | B 9/8 | B 1/2 | B 1/8 | A 0",
    (Family.TYPE2, 2): "A 0 | C 2/3 | A 0",
    (Family.TYPE2, 3): "A 0 | B 2/5 | C 8/5 | B 2/5 | A 0",
    (Family.TYPE2, 4): "A 0 | B 2/7 | B 8/7 | C 4/7 | B 8/7 | B 2/7 | A 0",
    (Family.TYPE2, 5): "A 0 | B 2/9 | B 8/9 | B 0 | C 14/9 | B 0 | B 8/9 | B 2/9 | A 0",
}


@pytest.mark.parametrize("key", sorted(PRINTED, key=lambda k: (k[0].value, k[1])))
def test_build_twin_matches_printed_listings(key):
    family, n = key
    seq = build_twin(family, n)
    assert seq.pulses == listing(PRINTED[key])
    assert seq.describe() == PRINTED[key]


def test_type3_follows_reversed_type2_half():
    assert build_twin("type3", 2).describe() == "B 2/3 | B 0 | B 2/3"
    assert build_twin("type3", 3).describe() == "B 8/5 | B 2/5 | B 0 | B 2/5 | B 8/5"


def test_type3_n2_equivalent_to_printed_form():
    # B_0 B_{2pi/3} B_0 as printed: same profile (reflected phases plus a frame rotation)
    printed = CompositeSequence(listing("B 0 | B 2/3 | B 0"))
    eps = np.linspace(-1, 1, 401)
    _, b1 = propagator_arrays(printed, eps)
    _, b2 = propagator_arrays(build_twin("type3", 2), eps)
    assert np.max(np.abs(np.abs(b1) ** 2 - np.abs(b2) ** 2)) < 1e-14


def test_printed_type3_n3_is_not_broadband():
    # The printed N = 3 type-3 listing reuses the type-2 phase order and does
    # not produce 1 - sin^10(pi eps / 2); the reversed-half construction does.
    printed = CompositeSequence(listing("B 0 | B 2/5 | B 8/5 | B 2/5 | B 0"))
    eps = np.linspace(-1, 1, 401)
    target = 1 - np.sin(np.pi * eps / 2) ** 10
    _, b_printed = propagator_arrays(printed, eps)
    _, b_built = propagator_arrays(build_twin("type3", 3), eps)
    assert np.max(np.abs(np.abs(b_printed) ** 2 - target)) > 0.5
    assert np.max(np.abs(np.abs(b_built) ** 2 - target)) < 1e-13


@pytest.mark.parametrize("family", ["type1", "type2", "type3"])
@pytest.mark.parametrize("n", range(2, 21))
def test_twin_structure(family, n):
    seq = build_twin(family, n)
    assert len(seq) == 2 * n - 1
    assert seq.pulses == seq.pulses[::-1]
    assert total_area(seq) == expected_total_area(family, n)
    assert seq.n == n and seq.family is Family(family)


@pytest.mark.parametrize("n", range(2, 21))
def test_twin_phases_match_formulas(n):
    t1 = build_twin("type1", n)
    assert [p.phase for p in t1.pulses[:n]] == phases_type1(n)
    t2 = build_twin("type2", n)
    assert [p.phase for p in t2.pulses[:n]] == phases_type23(n)
    t3 = build_twin("type3", n)
    assert [p.phase for p in t3.pulses[:n]] == phases_type23(n)[::-1]


@pytest.mark.parametrize("n", range(2, 21))
def test_type3_is_twin_of_reversed_type2_half(n):
    reversed_half = half_sequence("type2", n)[::-1]
    assert build_twin("type3", n).pulses == tuple(twin(reversed_half))


def test_total_area_examples():
    assert total_area(build_twin("type1", 5)) == 8
    assert total_area(build_twin("type2", 3)) == 5
    lone = total_area(single_pulse(A))
    assert lone == F(1, 2) and lone.denominator != 1


def test_build_twin_errors():
    with pytest.raises(ValueError):
        build_twin("type4", 3)
    with pytest.raises(ValueError):
        build_twin("reference", 3)
    with pytest.raises(ValueError):
        build_twin("type1", 1)


def test_references():
    assert reference_sequence("L1").pulses == build_twin("type1", 2).pulses
    assert reference_sequence("L2").pulses == build_twin("type2", 2).pulses
    l4 = reference_sequence("L4")
    assert l4.describe() == "A 1/2 | A 0 | A 3/2 | A 0 | A 0 | A 3/2 | A 0 | A 1/2"
    assert len(l4) == 8 and total_area(l4) == 4
    plus, minus = reference_sequence("L3plus"), reference_sequence("L3minus")
    assert len(plus) == 9 and total_area(plus) == 4
    assert plus.pulses[4] == Pulse(B, F(1, 2)) and minus.pulses[4] == Pulse(B, F(3, 2))
    assert plus.pulses[:4] == minus.pulses[:4] and plus.pulses[5:] == minus.pulses[5:]
    with pytest.raises(ValueError):
        reference_sequence("L5")


def test_phase_reduction():
    assert Pulse(B, F(-1, 2)).phase == F(3, 2)
    assert Pulse(B, F(18, 9)).phase == 0
    assert Pulse(B, F(7, 3)).phase == F(1, 3)


@pytest.mark.parametrize(
    "seq", [build_twin("type2", 4), reference_sequence("L3minus"), single_pulse(C, F(1, 3)), build_twin("type3", 5)]
)
def test_json_round_trip(seq):
    back = CompositeSequence.from_json(seq.to_json())
    assert back == seq
    if seq.family is not Family.CUSTOM:
        assert back.label == seq.label


def test_json_layout():
    data = build_twin("type1", 2).to_dict()
    assert data == {
        "family": "type1",
        "N": 2,
        "pulses": [
            {"area_quarter_pi": 2, "phase_num": 0, "phase_den": 1},
            {"area_quarter_pi": 4, "phase_num": 1, "phase_den": 2},
            {"area_quarter_pi": 2, "phase_num": 0, "phase_den": 1},
        ],
    }
