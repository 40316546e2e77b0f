"""Twin composite pi-pulse sequences and the literature reference sequences.

Phases are kept as exact fractions of pi reduced into [0, 2), so sequences
compare exactly and print as the rational listings they are.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from twinpulse.su2 import A, B, C, D, PulseArea


class Family(enum.Enum):
    TYPE1 = "type1"
    TYPE2 = "type2"
    TYPE3 = "type3"
    REFERENCE = "reference"
    CUSTOM = "custom"

    @property
    def is_twin(self) -> bool:
        return self in TWIN_FAMILIES

    @classmethod
    def parse(cls, value: str | Family) -> Family:
        if isinstance(value, Family):
            return value
        try:
            return cls(value.strip().lower())
        except ValueError:
            raise ValueError(f"unknown family {value!r}") from None


TWIN_FAMILIES = (Family.TYPE1, Family.TYPE2, Family.TYPE3)

REFERENCE_NAMES = ("L1", "L2", "L3plus", "L3minus", "L4")


def reduce_phase(phase) -> Fraction:
    """Phase in units of pi, reduced into [0, 2)."""
    return Fraction(phase) % 2


@dataclass(frozen=True)
class Pulse:
    """One constituent pulse: nominal area and phase (in units of pi)."""

    area: PulseArea
    phase: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "phase", reduce_phase(self.phase))

    @property
    def phase_radians(self) -> float:
        return float(self.phase) * math.pi

    def label(self) -> str:
        return f"{self.area.symbol} {format_phase(self.phase)}"


def format_phase(phase: Fraction) -> str:
    return str(phase.numerator) if phase.denominator == 1 else f"{phase.numerator}/{phase.denominator}"


@dataclass(frozen=True)
class CompositeSequence:
    pulses: tuple[Pulse, ...]
    family: Family = Family.CUSTOM
    n: int | None = None
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "pulses", tuple(self.pulses))

    def __len__(self) -> int:
        return len(self.pulses)

    def __iter__(self):
        return iter(self.pulses)

    @property
    def label(self) -> str:
        if self.name:
            return self.name
        if self.family.is_twin:
            return f"{self.family.value}_N{self.n}"
        return self.family.value

    def describe(self) -> str:
        return " | ".join(p.label() for p in self.pulses)

    def to_dict(self) -> dict:
        return {
            "family": self.name if self.family is Family.REFERENCE else self.family.value,
            "N": self.n,
            "pulses": [
                {
                    "area_quarter_pi": p.area.quarter_pi,
                    "phase_num": p.phase.numerator,
                    "phase_den": p.phase.denominator,
                }
                for p in self.pulses
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, data: dict) -> CompositeSequence:
        pulses = [
            Pulse(PulseArea(int(p["area_quarter_pi"])), Fraction(int(p["phase_num"]), int(p.get("phase_den", 1))))
            for p in data["pulses"]
        ]
        family_value = data.get("family", "custom")
        if family_value in REFERENCE_NAMES:
            return cls(tuple(pulses), Family.REFERENCE, None, family_value)
        family = Family.parse(family_value)
        n = data.get("N")
        return cls(tuple(pulses), family, None if n is None else int(n))

    @classmethod
    def from_json(cls, text: str) -> CompositeSequence:
        return cls.from_dict(json.loads(text))


def _check_n(n: int) -> None:
    if not isinstance(n, int) or isinstance(n, bool) or n < 2:
        raise ValueError(f"twin sequences need N >= 2, got {n!r}")


def phases_type1(n: int) -> list[Fraction]:
    """Half-sequence phases (units of pi): ``(k-1)^2 / (2(N-1))``."""
    _check_n(n)
    return [reduce_phase(Fraction((k - 1) ** 2, 2 * (n - 1))) for k in range(1, n + 1)]


def phases_type23(n: int) -> list[Fraction]:
    """Half-sequence phases (units of pi) shared by types 2 and 3: ``2(k-1)^2 / (2N-1)``."""
    _check_n(n)
    return [reduce_phase(Fraction(2 * (k - 1) ** 2, 2 * n - 1)) for k in range(1, n + 1)]


def half_sequence(family: Family | str, n: int) -> list[Pulse]:
    """The half-sequence S_N in chronological order, before twinning."""
    family = Family.parse(family)
    if family is Family.TYPE1:
        phases = phases_type1(n)
        areas = [A] + [B] * (n - 2) + [A]
        return [Pulse(a, p) for a, p in zip(areas, phases)]
    if family in (Family.TYPE2, Family.TYPE3):
        phases = phases_type23(n)
        areas = [A] + [B] * (n - 1)
        half = [Pulse(a, p) for a, p in zip(areas, phases)]
        # Type 3 uses the type-2 half-sequence in reverse order.
        return half if family is Family.TYPE2 else half[::-1]
    raise ValueError(f"{family.value!r} is not a twin family")


def twin(half: Sequence[Pulse]) -> list[Pulse]:
    """``S S~`` with the two identical seam pulses merged into one of double area."""
    if not half:
        raise ValueError("empty half-sequence")
    seam = half[-1]
    merged = Pulse(seam.area.doubled(), seam.phase)
    return list(half[:-1]) + [merged] + list(half[-2::-1])


def build_twin(family: Family | str, n: int) -> CompositeSequence:
    """Build T_N of the given family (2N - 1 pulses after merging)."""
    family = Family.parse(family)
    if not family.is_twin:
        raise ValueError(f"{family.value!r} is not a twin family")
    _check_n(n)
    return CompositeSequence(tuple(twin(half_sequence(family, n))), family, n)


def total_area(seq: CompositeSequence | Iterable[Pulse]) -> Fraction:
    """Total nominal area in units of pi.

    Integral for every twin family; a non-integral result (e.g. ``1/2`` for a
    lone A pulse) is returned as is, check ``.denominator``.
    """
    return Fraction(sum(p.area.quarter_pi for p in seq), 4)


def expected_total_area(family: Family | str, n: int) -> int:
    family = Family.parse(family)
    _check_n(n)
    if family is Family.TYPE1:
        return 2 * (n - 1)
    if family in (Family.TYPE2, Family.TYPE3):
        return 2 * n - 1
    raise ValueError(f"{family.value!r} is not a twin family")


def _seq(spec: list[tuple[PulseArea, Fraction | int]]) -> tuple[Pulse, ...]:
    return tuple(Pulse(area, Fraction(phase)) for area, phase in spec)


_HALF = Fraction(1, 2)


def reference_sequence(name: str) -> CompositeSequence:
    """Classic broadband reference sequences L1-L4.

    L3's centre pulse carries a +/- sign; both choices are exposed as
    ``L3plus`` and ``L3minus``.
    """
    if name == "L1":
        pulses = _seq([(A, 0), (B, _HALF), (A, 0)])
    elif name == "L2":
        pulses = _seq([(A, 0), (C, Fraction(2, 3)), (A, 0)])
    elif name in ("L3plus", "L3minus"):
        sign = 1 if name == "L3plus" else -1
        pulses = _seq(
            [
                (D, -_HALF),
                (A, 0),
                (A, _HALF),
                (D, 0),
                (B, sign * _HALF),
                (D, 0),
                (A, -_HALF),
                (A, 0),
                (D, _HALF),
            ]
        )
    elif name == "L4":
        pulses = _seq([(A, _HALF), (A, 0), (A, -_HALF), (A, 0), (A, 0), (A, -_HALF), (A, 0), (A, _HALF)])
    else:
        raise ValueError(f"unknown reference sequence {name!r}; expected one of {', '.join(REFERENCE_NAMES)}")
    return CompositeSequence(pulses, Family.REFERENCE, None, name)


def single_pulse(area: PulseArea = B, phase=0) -> CompositeSequence:
    """A lone pulse, the uncompensated baseline."""
    return CompositeSequence((Pulse(area, Fraction(phase)),), Family.CUSTOM, None, f"single_{area.symbol}")
