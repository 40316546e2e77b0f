"""Numerical certification of the closed-form survival amplitude.

For a type-1 twin sequence ``U_11`` is a polynomial of degree N - 1 in
``s = sin^2(pi eps / 2)`` whose coefficients ``Z_1 .. Z_N`` should all vanish
except ``Z_N = 1``. Types 2 and 3 are handled the same way once their
measured parity is taken into account: ``U_11`` turns out odd in
``sin(pi eps / 2)``, so one sine factor is split off before fitting in ``s``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import mpmath
import numpy as np
from numpy.polynomial import chebyshev as cheb
from numpy.polynomial import polynomial as poly

from twinpulse.robustness import profile_exponent, propagator_arrays, survival_amplitude_mp
from twinpulse.sequences import Family, build_twin, phases_type1

COEFF_TOL = 1e-9
REEVAL_TOL = 1e-9
ILL_CONDITIONED_TOL = 1e-8
CLOSED_FORM_TOL = 1e-12
CHEBYSHEV_REL_TOL = 1e-13
PROFILE_TOL = 1e-10
FIT_DPS = 40


class IllConditionedError(ArithmeticError):
    """The interpolation system did not reproduce U_11 at fresh points."""


@dataclass(frozen=True)
class SurvivalPolynomial:
    coefficients: np.ndarray  # Z_1 .. Z_N, complex
    sine_power: int  # 0 or 1: U_11 = sin^p(pi eps/2) * sum_j Z_{j+1} s^j
    reevaluation_residual: float


def _u11(family: Family, n: int, eps: np.ndarray) -> np.ndarray:
    a, _ = propagator_arrays(build_twin(family, n), eps)
    return a


def measure_sine_parity(family: Family | str, n: int) -> int:
    """0 if U_11 is even in eps, 1 if odd (then it carries a factor sin(pi eps/2))."""
    family = Family.parse(family)
    eps = np.linspace(0.05, 0.95, 19)
    up, um = _u11(family, n, eps), _u11(family, n, -eps)
    even_defect = np.max(np.abs(up - um))
    odd_defect = np.max(np.abs(up + um))
    return 0 if even_defect <= odd_defect else 1


def fit_survival_polynomial(family: Family | str, n: int, fresh_points: int = 50) -> SurvivalPolynomial:
    """Recover ``Z_1 .. Z_N`` by interpolation at Chebyshev-spaced nodes in s.

    The monomial system loses about a digit per degree in double precision,
    so node values and the solve run at ``FIT_DPS`` digits.
    """
    family = Family.parse(family)
    if not family.is_twin:
        raise ValueError(f"{family.value!r} is not a twin family")
    seq = build_twin(family, n)
    sine_power = measure_sine_parity(family, n)

    with mpmath.workdps(FIT_DPS):
        # Chebyshev points mapped into s in (0.05, 0.95)
        s = [
            mpmath.mpf(0.5) + mpmath.mpf(0.45) * mpmath.cos((2 * k - 1) * mpmath.pi / (2 * n))
            for k in range(1, n + 1)
        ]
        vander = mpmath.matrix([[node**j for j in range(n)] for node in s])
        rhs = mpmath.matrix(
            [
                survival_amplitude_mp(seq, 2 / mpmath.pi * mpmath.asin(mpmath.sqrt(node)), FIT_DPS)
                / mpmath.sqrt(node) ** sine_power
                for node in s
            ]
        )
        solution = mpmath.lu_solve(vander, rhs)
        coefficients = np.array([complex(solution[j]) for j in range(n)])

    fresh_eps = np.linspace(-0.98, 0.98, fresh_points)
    fresh_s = np.sin(np.pi * fresh_eps / 2)
    predicted = fresh_s**sine_power * poly.polyval(fresh_s**2, coefficients)
    residual = float(np.max(np.abs(predicted - _u11(family, n, fresh_eps))))
    return SurvivalPolynomial(coefficients, sine_power, residual)


def extract_z_coefficients(family: Family | str, n: int) -> list[complex]:
    """``[Z_1, ..., Z_N]`` for the twin sequence of the given family and N.

    Raises IllConditionedError if the interpolant misses U_11 at fresh
    points by more than 1e-8.
    """
    fit = fit_survival_polynomial(family, n)
    if fit.reevaluation_residual > ILL_CONDITIONED_TOL:
        raise IllConditionedError(
            f"Z extraction for {Family.parse(family).value} N={n} misses U_11 by {fit.reevaluation_residual:.3g}"
        )
    return [complex(z) for z in fit.coefficients]


def z_n_product_form(phases_radians) -> complex:
    """Leading coefficient from the half-sequence phases, before simplification.

    ``Z_N = 1/2 exp(-i(phi_1 + phi_N + 2 sum_{j=2}^{N-1} phi_j)) prod_j (e^{i phi_j} + e^{i phi_{j+1}})^2``
    """
    phi = list(phases_radians)
    total = phi[0] + phi[-1] + 2 * sum(phi[1:-1])
    prod = 1 + 0j
    for p, q in zip(phi, phi[1:]):
        prod *= (cmath.exp(1j * p) + cmath.exp(1j * q)) ** 2
    return 0.5 * cmath.exp(-1j * total) * prod


def z_n_closed_form(n: int) -> complex:
    """``1/2 * 2^(2(N-1)) * prod_{j=1}^{N-1} cos^2((2j-1) pi / (4(N-1)))`` for type-1 phases."""
    if n < 2:
        raise ValueError(f"N must be >= 2, got {n}")
    m = n - 1
    prod = math.prod(math.cos((2 * j - 1) * math.pi / (4 * m)) ** 2 for j in range(1, m + 1))
    return complex(0.5 * 4.0**m * prod)


def chebyshev_cos_product(n: int) -> float:
    """``prod_{j=1}^{n} cos((2j-1) pi / (4n))``; equals sqrt(2) / 2^n."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return math.prod(math.cos((2 * j - 1) * math.pi / (4 * n)) for j in range(1, n + 1))


def chebyshev_relative_residual(n: int) -> float:
    expected = math.sqrt(2) / 2**n
    return abs(chebyshev_cos_product(n) - expected) / expected


def chebyshev_factorization_residual(n: int, samples: int = 33) -> float:
    """Max gap between T_n(x) and ``2^(n-1) prod_j (x - cos((2j-1) pi / (2n)))`` on [-1, 1]."""
    x = np.linspace(-1, 1, samples)
    roots = np.cos((2 * np.arange(1, n + 1) - 1) * np.pi / (2 * n))
    factored = 2.0 ** (n - 1) * np.prod(x[:, None] - roots[None, :], axis=1)
    t_n = cheb.chebval(x, [0] * n + [1])
    return float(np.max(np.abs(factored - t_n)))


@dataclass
class IdentityReport:
    family: Family
    n: int
    z_coefficients: list[complex]
    sine_power: int
    leading_index: int  # 1-based index of the unit-magnitude coefficient
    max_off_coefficient: float
    reevaluation_residual: float
    z_n_closed_form: complex | None
    z_n_product_form: complex | None
    chebyshev_residual: float
    profile_residual: float
    failures: list[str] = field(default_factory=list)

    def __post_init__(self):
        if len(self.z_coefficients) != self.n:
            raise ValueError("one Z coefficient per half-sequence pulse expected")

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        def pair(z):
            return None if z is None else [z.real, z.imag]

        return {
            "family": self.family.value,
            "n": self.n,
            "z": [pair(z) for z in self.z_coefficients],
            "z_n_closed_form": pair(self.z_n_closed_form),
            "z_n_product_form": pair(self.z_n_product_form),
            "sine_power": self.sine_power,
            "leading_index": self.leading_index,
            "chebyshev_residual": self.chebyshev_residual,
            "max_off_coefficient": self.max_off_coefficient,
            "reevaluation_residual": self.reevaluation_residual,
            "profile_residual": self.profile_residual,
            "failures": self.failures,
            "passed": self.passed,
        }


def verify_identities(family: Family | str, n: int, grid_points: int = 101) -> IdentityReport:
    """Run every identity check for one twin sequence; failures are listed, never dropped."""
    family = Family.parse(family)
    fit = fit_survival_polynomial(family, n)
    z = [complex(c) for c in fit.coefficients]
    mags = np.abs(fit.coefficients)
    lead = int(np.argmax(mags))
    off = float(np.max(np.delete(mags, lead))) if n > 1 else 0.0
    failures = []

    if abs(mags[lead] - 1) >= COEFF_TOL:
        failures.append(f"leading |Z_{lead + 1}| = {mags[lead]:.17g}, expected 1")
    if off >= COEFF_TOL:
        failures.append(f"off-leading coefficient magnitude {off:.3g} >= {COEFF_TOL}")
    if fit.reevaluation_residual >= REEVAL_TOL:
        failures.append(f"re-evaluation residual {fit.reevaluation_residual:.3g} >= {REEVAL_TOL}")

    closed = product = None
    if family is Family.TYPE1:
        if lead != n - 1 or abs(z[-1] - 1) >= COEFF_TOL:
            failures.append(f"expected Z_N = 1, got Z_N = {z[-1]!r}")
        closed = z_n_closed_form(n)
        product = z_n_product_form([float(p) * math.pi for p in phases_type1(n)])
        if abs(closed - 1) >= CLOSED_FORM_TOL:
            failures.append(f"closed-form Z_N = {closed!r}")
        if abs(product - 1) >= CLOSED_FORM_TOL:
            failures.append(f"product-form Z_N = {product!r}")

    cheb_res = chebyshev_relative_residual(n - 1)
    if cheb_res >= CHEBYSHEV_REL_TOL:
        failures.append(f"Chebyshev cosine product relative residual {cheb_res:.3g}")

    eps = np.linspace(-1, 1, grid_points)
    a, _ = propagator_arrays(build_twin(family, n), eps)
    k = profile_exponent(family, n)
    profile_res = float(np.max(np.abs(np.abs(a) ** 2 - np.sin(np.pi * eps / 2) ** k)))
    if profile_res >= PROFILE_TOL:
        failures.append(f"survival probability misses sin^{k} by {profile_res:.3g}")

    return IdentityReport(
        family, n, z, fit.sine_power, lead + 1, off, fit.reevaluation_residual, closed, product, cheb_res, profile_res,
        failures,
    )


@dataclass(frozen=True)
class ChebyshevCheck:
    n: int
    product: float
    closed_form: float
    relative_residual: float

    @property
    def passed(self) -> bool:
        return self.relative_residual < CHEBYSHEV_REL_TOL

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "product": self.product,
            "closed_form": self.closed_form,
            "relative_residual": self.relative_residual,
            "passed": self.passed,
        }


def check_chebyshev(n: int) -> ChebyshevCheck:
    return ChebyshevCheck(n, chebyshev_cos_product(n), math.sqrt(2) / 2**n, chebyshev_relative_residual(n))
