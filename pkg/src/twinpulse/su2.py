"""Resonant two-level propagators in Cayley-Klein form.

A propagator is stored as the pair ``(a, b)`` of the matrix

    U = [[ a,   b ],
         [-b*,  a*]]

so unitarity reduces to the single scalar condition ``|a|^2 + |b|^2 = 1``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

UNITARITY_TOL = 1e-12

# Quarter-pi counts of the nominal pulses.
_SYMBOLS = {1: "D", 2: "A", 4: "B", 8: "C"}


@dataclass(frozen=True)
class PulseArea:
    """Nominal pulse area as an integer number of quarter-pi units."""

    quarter_pi: int

    def __post_init__(self):
        if not isinstance(self.quarter_pi, int) or self.quarter_pi < 1:
            raise ValueError(f"pulse area must be a positive number of quarter-pi units, got {self.quarter_pi!r}")

    @property
    def nominal(self) -> float:
        return self.quarter_pi * math.pi / 4

    def actual(self, epsilon: float) -> float:
        """Area in radians for fractional area error ``epsilon``."""
        return self.nominal * (1.0 + epsilon)

    @property
    def symbol(self) -> str:
        return _SYMBOLS.get(self.quarter_pi, f"{self.quarter_pi}/4")

    def doubled(self) -> PulseArea:
        return PulseArea(2 * self.quarter_pi)

    @classmethod
    def from_symbol(cls, symbol: str) -> PulseArea:
        for q, s in _SYMBOLS.items():
            if s == symbol:
                return cls(q)
        raise ValueError(f"unknown pulse symbol {symbol!r}")


D = PulseArea(1)
A = PulseArea(2)
B = PulseArea(4)
C = PulseArea(8)


@dataclass(frozen=True)
class Su2Matrix:
    a: complex
    b: complex

    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [-self.b.conjugate(), self.a.conjugate()]], dtype=complex)

    def unitarity_defect(self) -> float:
        return abs(abs(self.a) ** 2 + abs(self.b) ** 2 - 1.0)

    def dagger(self) -> Su2Matrix:
        return Su2Matrix(self.a.conjugate(), -self.b)

    def __matmul__(self, other: Su2Matrix) -> Su2Matrix:
        return compose(self, other)


IDENTITY = Su2Matrix(1 + 0j, 0j)


def product_ab(a1, b1, a2, b2):
    """(a, b) of the product U1 @ U2.

    Plain arithmetic only, so it works for Python complex, numpy arrays
    and mpmath numbers alike.
    """
    return a1 * a2 - b1 * b2.conjugate(), a1 * b2 + b1 * a2.conjugate()


def rotation(area: float, phase: float = 0.0) -> Su2Matrix:
    """Resonant propagator for a real pulse area in radians and a phase."""
    return Su2Matrix(complex(math.cos(area / 2)), -1j * math.sin(area / 2) * cmath.exp(1j * phase))


def resonant_propagator(area: PulseArea, epsilon: float) -> Su2Matrix:
    """Propagator of a resonant pulse of nominal ``area`` with area error ``epsilon``."""
    return rotation(area.actual(epsilon))


def phase_shift(u: Su2Matrix, phi: float) -> Su2Matrix:
    """Imprint the drive phase ``phi``: ``b -> b e^{i phi}``, ``a`` unchanged."""
    return Su2Matrix(u.a, u.b * cmath.exp(1j * phi))


def compose(later: Su2Matrix, earlier: Su2Matrix) -> Su2Matrix:
    """Matrix product with the chronologically later factor on the left."""
    return Su2Matrix(*product_ab(complex(later.a), complex(later.b), complex(earlier.a), complex(earlier.b)))


def transition_probability(u: Su2Matrix) -> float:
    return min(max(abs(u.b) ** 2, 0.0), 1.0)


def survival_probability(u: Su2Matrix) -> float:
    """``|a|^2``; use this rather than ``1 - transition_probability`` near unit transfer."""
    return min(max(abs(u.a) ** 2, 0.0), 1.0)


def equivalent_up_to_global_phase(u: Su2Matrix, v: Su2Matrix, tol: float = 1e-10) -> bool:
    """True iff ``u = e^{i theta} v`` for some real theta, via ``|tr(u v^dagger)| = 2``."""
    m = u.matrix() @ v.matrix().conj().T
    return abs(abs(m[0, 0] + m[1, 1]) - 2.0) <= tol
