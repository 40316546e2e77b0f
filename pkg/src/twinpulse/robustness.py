"""Excitation profiles, compensation orders, bandwidths and comparisons."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from pathlib import Path
from typing import TextIO

import mpmath
import numpy as np
from scipy.optimize import bisect

from twinpulse.sequences import CompositeSequence, Family, build_twin, total_area
from twinpulse.su2 import Su2Matrix, product_ab

SAME_PROFILE_TOL = 1e-10
BISECTION_XTOL = 1e-10
DEFAULT_ORDER_WINDOW = (1e-3, 1e-2)
UNDERFLOW_FLOOR = 1e-300


# -- propagators ---------------------------------------------------------------


def propagator_arrays(seq: CompositeSequence, epsilons) -> tuple[np.ndarray, np.ndarray]:
    """Cayley-Klein ``(a, b)`` of the whole sequence, vectorised over ``epsilons``.

    Grid points are independent; every array slot is computed separately.
    """
    eps = np.asarray(epsilons, dtype=float)
    a = np.ones_like(eps, dtype=complex)
    b = np.zeros_like(eps, dtype=complex)
    for pulse in seq.pulses:
        half_area = pulse.area.nominal * (1.0 + eps) / 2
        pa = np.cos(half_area) + 0j
        pb = -1j * np.sin(half_area) * np.exp(1j * pulse.phase_radians)
        # later pulse multiplies from the left
        a, b = product_ab(pa, pb, a, b)
    return a, b


def sequence_propagator(seq: CompositeSequence, epsilon: float) -> Su2Matrix:
    a, b = propagator_arrays(seq, np.array([epsilon]))
    return Su2Matrix(complex(a[0]), complex(b[0]))


def working_dps(seq: CompositeSequence, epsilon) -> int:
    """Decimal digits needed to resolve ``U_11`` at ``epsilon``.

    Near eps = 0 the product cancels down to roughly eps^(A_tot/pi), and
    ``1 + eps`` itself must keep eps, so both depths are added to a guard.
    """
    eps = abs(float(epsilon))
    depth = 0 if eps == 0 else max(0, math.ceil(-math.log10(eps)))
    return 30 + depth * (math.ceil(total_area(seq)) + 1)


def survival_amplitude_mp(seq: CompositeSequence, epsilon, dps: int | None = None):
    """``U_11`` in multiprecision arithmetic (double precision cannot resolve it near eps = 0)."""
    if dps is None:
        dps = working_dps(seq, epsilon)
    with mpmath.workdps(dps):
        eps = mpmath.mpf(epsilon)
        a = mpmath.mpc(1)
        b = mpmath.mpc(0)
        for pulse in seq.pulses:
            half_area = pulse.area.quarter_pi * mpmath.pi / 8 * (1 + eps)
            phase = mpmath.pi * pulse.phase.numerator / pulse.phase.denominator
            pa = mpmath.mpc(mpmath.cos(half_area))
            pb = -1j * mpmath.sin(half_area) * mpmath.expj(phase)
            a, b = product_ab(pa, pb, a, b)
        return +a


def survival_probability_mp(seq: CompositeSequence, epsilon, dps: int | None = None):
    if dps is None:
        dps = working_dps(seq, epsilon)
    with mpmath.workdps(dps):
        return abs(survival_amplitude_mp(seq, epsilon, dps)) ** 2


# -- closed forms --------------------------------------------------------------


def profile_exponent(family: Family | str, n: int) -> int:
    """Power of sin(pi eps / 2) in the infidelity: 4(N-1) for type 1, 4N-2 for types 2 and 3."""
    family = Family.parse(family)
    if n < 2:
        raise ValueError(f"twin sequences need N >= 2, got {n!r}")
    if family is Family.TYPE1:
        return 4 * (n - 1)
    if family in (Family.TYPE2, Family.TYPE3):
        return 4 * n - 2
    raise ValueError(f"{family.value!r} is not a twin family")


def analytic_probability(family: Family | str, n: int, epsilon):
    """Closed-form transition probability ``1 - sin^k(pi eps / 2)`` of a twin sequence.

    Types 2 and 3 share the same profile. Accepts scalars or arrays.
    """
    k = profile_exponent(family, n)
    return 1.0 - np.sin(np.pi * np.asarray(epsilon, dtype=float) / 2) ** k


def analytic_infidelity(family: Family | str, n: int, epsilon):
    k = profile_exponent(family, n)
    return np.sin(np.pi * np.asarray(epsilon, dtype=float) / 2) ** k


def unified_probability(seq: CompositeSequence, epsilon):
    """``1 - sin^(2 A_tot / pi)(pi eps / 2)`` with A_tot read off the sequence itself."""
    area = total_area(seq)
    if area.denominator != 1:
        raise ValueError(f"total area {area} pi is not an integer multiple of pi")
    return 1.0 - np.sin(np.pi * np.asarray(epsilon, dtype=float) / 2) ** (2 * int(area))


# -- profiles ------------------------------------------------------------------


@dataclass(frozen=True)
class GridSpec:
    eps_min: float = -1.0
    eps_max: float = 1.0
    points: int = 2001

    def __post_init__(self):
        if self.points < 2:
            raise ValueError("grid needs at least 2 points")
        if not self.eps_min < self.eps_max:
            raise ValueError("grid needs eps_min < eps_max")

    def values(self) -> np.ndarray:
        return np.linspace(self.eps_min, self.eps_max, self.points)


@dataclass
class ProfileTable:
    epsilons: np.ndarray
    p_numeric: np.ndarray
    one_minus_p_numeric: np.ndarray
    p_analytic: np.ndarray | None
    sequence_id: str

    def __post_init__(self):
        n = len(self.epsilons)
        if len(self.p_numeric) != n or len(self.one_minus_p_numeric) != n:
            raise ValueError("profile columns differ in length")
        if self.p_analytic is not None and len(self.p_analytic) != n:
            raise ValueError("analytic column differs in length")
        if n > 1 and not np.all(np.diff(self.epsilons) > 0):
            raise ValueError("epsilons must be strictly increasing")

    def max_analytic_deviation(self) -> float:
        if self.p_analytic is None:
            raise ValueError(f"no closed form for {self.sequence_id}")
        return float(np.max(np.abs(self.p_numeric - self.p_analytic)))

    def write_csv(self, stream: TextIO) -> None:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(["epsilon", "p_numeric", "p_analytic", "one_minus_p_numeric"])
        for i, eps in enumerate(self.epsilons):
            analytic = "" if self.p_analytic is None else _fmt(self.p_analytic[i])
            writer.writerow([_fmt(eps), _fmt(self.p_numeric[i]), analytic, _fmt(self.one_minus_p_numeric[i])])

    def to_csv(self) -> str:
        buf = io.StringIO()
        self.write_csv(buf)
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "sequence": self.sequence_id,
            "epsilon": self.epsilons.tolist(),
            "p_numeric": self.p_numeric.tolist(),
            "p_analytic": None if self.p_analytic is None else self.p_analytic.tolist(),
            "one_minus_p_numeric": self.one_minus_p_numeric.tolist(),
        }

    @classmethod
    def read_csv(cls, path: str | Path, sequence_id: str = "") -> ProfileTable:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.DictReader(fh))
        analytic = None
        if rows and rows[0]["p_analytic"] != "":
            analytic = np.array([float(r["p_analytic"]) for r in rows])
        return cls(
            np.array([float(r["epsilon"]) for r in rows]),
            np.array([float(r["p_numeric"]) for r in rows]),
            np.array([float(r["one_minus_p_numeric"]) for r in rows]),
            analytic,
            sequence_id,
        )


def _fmt(x) -> str:
    return f"{float(x):.17g}"


def profile(seq: CompositeSequence, grid: GridSpec | np.ndarray | None = None) -> ProfileTable:
    """Sample the excitation profile; twin families also get the closed-form column."""
    eps = GridSpec().values() if grid is None else grid.values() if isinstance(grid, GridSpec) else np.asarray(grid)
    if eps.size == 0:
        raise ValueError("empty epsilon grid")
    a, b = propagator_arrays(seq, eps)
    p = np.clip(np.abs(b) ** 2, 0.0, 1.0)
    q = np.clip(np.abs(a) ** 2, 0.0, 1.0)
    analytic = analytic_probability(seq.family, seq.n, eps) if seq.family.is_twin else None
    return ProfileTable(eps, p, q, analytic, seq.label)


# -- compensation order --------------------------------------------------------


@dataclass(frozen=True)
class OrderEstimate:
    fitted_slope: float
    inferred_order: int
    fit_window: tuple[float, float]
    residual: float

    @property
    def slope_deviation(self) -> float:
        return abs(self.fitted_slope - self.inferred_order)


def estimate_order(
    seq: CompositeSequence,
    window: tuple[float, float] = DEFAULT_ORDER_WINDOW,
    points: int = 21,
) -> OrderEstimate:
    """Fit the log-log slope of the infidelity near eps = 0.

    The infidelity is taken as the survival probability |U_11|^2 evaluated
    in multiprecision; the nearest even integer to the slope is the order.
    """
    q0 = float(survival_probability_mp(seq, 0))
    if q0 > 1e-12:
        raise ValueError(f"{seq.label} is not a pi pulse at eps = 0 (1 - P = {q0!r})")

    lo, hi = window
    if not 0 < lo < hi:
        raise ValueError(f"invalid fit window {window!r}")
    # shrink towards larger eps until the infidelity clears the underflow floor
    while survival_probability_mp(seq, lo) < UNDERFLOW_FLOOR:
        lo *= 2
        if lo >= hi:
            hi = 2 * lo
        if hi > 0.5:
            raise ValueError(f"no usable fit window for {seq.label}: infidelity below {UNDERFLOW_FLOOR}")

    eps = np.geomspace(lo, hi, points)
    log_q = np.array([float(mpmath.log10(survival_probability_mp(seq, e))) for e in eps])
    log_e = np.log10(eps)
    slope, intercept = np.polyfit(log_e, log_q, 1)
    residual = float(np.sqrt(np.mean((log_q - (slope * log_e + intercept)) ** 2)))
    order = 2 * int(round(slope / 2))
    return OrderEstimate(float(slope), order, (float(lo), float(hi)), residual)


# -- bandwidth -----------------------------------------------------------------


def _check_threshold(threshold: float) -> None:
    if not 0 < threshold < 1:
        raise ValueError(f"threshold must lie in (0, 1), got {threshold!r}")


def analytic_bandwidth(family: Family | str, n: int, threshold: float) -> float:
    """Half-width where ``sin^k(pi eps / 2)`` first reaches ``threshold``."""
    _check_threshold(threshold)
    k = profile_exponent(family, n)
    return 2 / math.pi * math.asin(threshold ** (1 / k))


def numeric_bandwidth(seq: CompositeSequence, threshold: float, step: float = 1e-3, limit: float = 2.0) -> float:
    """Bisection for the largest eps* with 1 - P <= threshold on [-eps*, eps*]."""
    _check_threshold(threshold)

    def excess(e: float) -> float:
        a, _ = propagator_arrays(seq, np.array([e]))
        return abs(a[0]) ** 2 - threshold

    if excess(0.0) > 0:
        return 0.0
    widths = []
    for sign in (1.0, -1.0):
        ticks = sign * np.arange(0.0, limit + step / 2, step)
        a, _ = propagator_arrays(seq, ticks)
        over = np.nonzero(np.abs(a) ** 2 > threshold)[0]
        if over.size == 0:
            widths.append(limit)
            continue
        i = over[0]
        root = bisect(excess, ticks[i - 1], ticks[i], xtol=BISECTION_XTOL)
        widths.append(abs(root))
    return min(widths)


def bandwidth(target, threshold: float, n: int | None = None, numeric: bool = False) -> float:
    """High-fidelity half-width at infidelity ``threshold``.

    ``target`` is a CompositeSequence or a twin family (then ``n`` is
    required). Twin families use the closed form unless ``numeric`` is set.
    """
    _check_threshold(threshold)
    if isinstance(target, CompositeSequence):
        if target.family.is_twin and not numeric:
            return analytic_bandwidth(target.family, target.n, threshold)
        return numeric_bandwidth(target, threshold)
    family = Family.parse(target)
    if n is None:
        raise ValueError("n is required when passing a family")
    if numeric:
        return numeric_bandwidth(build_twin(family, n), threshold)
    return analytic_bandwidth(family, n, threshold)


# -- comparison ----------------------------------------------------------------


@dataclass
class ComparisonReport:
    label_a: str
    label_b: str
    threshold: float
    bandwidth_a: float
    bandwidth_b: float
    max_abs_difference: float
    regions: list[dict]

    @property
    def identical(self) -> bool:
        return self.max_abs_difference < SAME_PROFILE_TOL

    def to_dict(self) -> dict:
        return {
            "sequence_a": self.label_a,
            "sequence_b": self.label_b,
            "threshold": self.threshold,
            "bandwidth_a": self.bandwidth_a,
            "bandwidth_b": self.bandwidth_b,
            "max_abs_difference": self.max_abs_difference,
            "identical_within_1e-10": self.identical,
            "pointwise_dominance_regions": self.regions,
        }


def dominance_regions(epsilons: np.ndarray, err_a: np.ndarray, err_b: np.ndarray, tie_tol: float = 1e-12) -> list[dict]:
    """Runs of grid points where one profile has the smaller infidelity."""
    diff = err_a - err_b
    sign = np.where(np.abs(diff) <= tie_tol, 0, np.sign(diff)).astype(int)
    names = {-1: "a", 0: "tie", 1: "b"}
    regions = []
    start = 0
    for i in range(1, len(sign) + 1):
        if i == len(sign) or sign[i] != sign[start]:
            regions.append(
                {"eps_start": float(epsilons[start]), "eps_end": float(epsilons[i - 1]), "better": names[sign[start]]}
            )
            start = i
    return regions


def compare(
    seq_a: CompositeSequence,
    seq_b: CompositeSequence,
    grid: GridSpec | None = None,
    threshold: float = 1e-4,
) -> ComparisonReport:
    grid = grid or GridSpec()
    ta, tb = profile(seq_a, grid), profile(seq_b, grid)
    return ComparisonReport(
        seq_a.label,
        seq_b.label,
        threshold,
        bandwidth(seq_a, threshold),
        bandwidth(seq_b, threshold),
        float(np.max(np.abs(ta.p_numeric - tb.p_numeric))),
        dominance_regions(ta.epsilons, ta.one_minus_p_numeric, tb.one_minus_p_numeric),
    )
