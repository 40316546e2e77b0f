"""Time-domain propagation of shaped resonant pulses.

On resonance every time step commutes with every other one, so a stepped
envelope is propagated exactly and the only error is how well the trapezoid
sub-areas represent the envelope.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from twinpulse.sequences import CompositeSequence
from twinpulse.su2 import IDENTITY, Su2Matrix, compose, phase_shift, product_ab

DEFAULT_STEPS = 1000
AREA_TOL = 1e-10

Shape = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class Envelope:
    """Sampled Rabi frequency (rad/s) against time (s).

    With ``target_area`` set, the samples are rescaled so that their
    trapezoid area equals it.
    """

    times: np.ndarray
    omega: np.ndarray
    target_area: float | None = None

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        w = np.asarray(self.omega, dtype=float)
        if t.ndim != 1 or t.shape != w.shape or t.size < 2:
            raise ValueError("envelope needs matching 1-d time and omega samples (at least 2)")
        if not np.all(np.diff(t) > 0):
            raise ValueError("envelope times must be strictly increasing")
        if np.any(w < 0):
            raise ValueError("Rabi frequency must be non-negative")
        if self.target_area is not None:
            area = np.trapezoid(w, t)
            if area <= 0:
                raise ValueError("cannot normalise an envelope with zero area")
            w = w * (self.target_area / area)
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "omega", w)

    @property
    def area(self) -> float:
        return float(np.trapezoid(self.omega, self.times))

    def step_areas(self) -> np.ndarray:
        return 0.5 * (self.omega[1:] + self.omega[:-1]) * np.diff(self.times)

    @classmethod
    def from_shape(cls, shape: Shape | str, area: float, duration: float = 1.0, steps: int = DEFAULT_STEPS) -> Envelope:
        fn = SHAPES[shape] if isinstance(shape, str) else shape
        t = np.linspace(0.0, duration, steps + 1)
        return cls(t, fn(t / duration), area)

    @classmethod
    def read_csv(cls, path: str | Path, target_area: float | None = None) -> Envelope:
        """Two columns ``t,omega`` with a header row."""
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            header = [h.strip() for h in next(reader, [])]
            if header != ["t", "omega"]:
                raise ValueError(f"{path}: expected header 't,omega', got {','.join(header)!r}")
            rows = [(float(r[0]), float(r[1])) for r in reader if r]
        t, w = zip(*rows) if rows else ((), ())
        return cls(np.array(t), np.array(w), target_area)

    def write_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["t", "omega"])
            for t, w in zip(self.times, self.omega):
                writer.writerow([f"{t:.17g}", f"{w:.17g}"])


def _rectangular(x):
    return np.ones_like(x)


def _gaussian(x):
    return np.exp(-0.5 * ((x - 0.5) / (1 / 6)) ** 2)


def _sech(x):
    return 1 / np.cosh((x - 0.5) * 10)


def _sin2(x):
    return np.sin(np.pi * x) ** 2


SHAPES: dict[str, Shape] = {
    "rectangular": _rectangular,
    "gaussian": _gaussian,
    "sech": _sech,
    "sin2": _sin2,
}


def integrate(envelope: Envelope, phase: float = 0.0) -> Su2Matrix:
    """Propagator of a shaped resonant pulse with drive phase ``phase`` (radians)."""
    a, b = 1 + 0j, 0j
    for sub_area in envelope.step_areas():
        a, b = product_ab(complex(math.cos(sub_area / 2)), -1j * math.sin(sub_area / 2), a, b)
    return phase_shift(Su2Matrix(a, b), phase)


def integrate_sequence(envelopes: Sequence[Envelope], phases: Sequence[float]) -> Su2Matrix:
    """Chronological product of shaped pulses; phases in radians."""
    if len(envelopes) != len(phases):
        raise ValueError(f"{len(envelopes)} envelopes for {len(phases)} phases")
    u = IDENTITY
    for env, phi in zip(envelopes, phases):
        u = compose(integrate(env, phi), u)
    return u


def shaped_envelopes(
    seq: CompositeSequence,
    epsilon: float,
    shapes: str | Shape | Sequence[str | Shape] = "gaussian",
    steps: int = DEFAULT_STEPS,
) -> list[Envelope]:
    """One envelope per pulse of ``seq``, each carrying area ``nominal * (1 + epsilon)``."""
    if isinstance(shapes, str) or callable(shapes):
        shapes = [shapes] * len(seq)
    if len(shapes) != len(seq):
        raise ValueError(f"{len(shapes)} shapes for {len(seq)} pulses")
    return [Envelope.from_shape(shape, p.area.actual(epsilon), steps=steps) for shape, p in zip(shapes, seq.pulses)]


def integrate_composite(
    seq: CompositeSequence,
    epsilon: float,
    shapes: str | Shape | Sequence[str | Shape] = "gaussian",
    steps: int = DEFAULT_STEPS,
) -> Su2Matrix:
    envelopes = shaped_envelopes(seq, epsilon, shapes, steps)
    return integrate_sequence(envelopes, [p.phase_radians for p in seq.pulses])
