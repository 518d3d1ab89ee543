"""Characteristic polynomials, exact unit-circle root location, Pisot verdicts.

A matrix is Pisot when its dominant eigenvalue is simple and every other
eigenvalue has modulus strictly below one.  For an integer matrix this is
decided exactly from the characteristic polynomial: the verdict is
equivalent to "d - 1 roots strictly inside the unit disk, none on it"
(the remaining root is then automatically simple, real and dominant).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal

from . import _rootloc
from ._rootloc import RootLocationError
from .intmat import ExactMatrix, is_primitive

__all__ = [
    "IntPolynomial",
    "PisotReport",
    "DominantEigenvector",
    "NotPrimitiveError",
    "char_poly",
    "count_roots_in_open_unit_disk",
    "has_root_on_unit_circle",
    "pisot_check",
    "dominant_eigenvector",
    "parse_polynomial",
    "format_polynomial",
    "RootLocationError",
]


class NotPrimitiveError(ValueError):
    """An operation that needs a primitive matrix was given a non-primitive one."""


@dataclass(frozen=True)
class IntPolynomial:
    """Monic integer polynomial, coefficients ascending (constant term first)."""

    coefficients: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.coefficients) < 1:
            raise ValueError("polynomial needs at least a constant term")
        if self.coefficients[-1] != 1:
            raise ValueError("polynomial must be monic")

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, x):
        return _rootloc.poly_eval(self.coefficients, x)

    def __str__(self) -> str:
        return format_polynomial(self)


def parse_polynomial(text: str) -> IntPolynomial:
    """Space-separated coefficients, constant term first."""
    return IntPolynomial(tuple(int(tok) for tok in text.split()))


def format_polynomial(p: IntPolynomial) -> str:
    return " ".join(str(c) for c in p.coefficients)


def char_poly(m: ExactMatrix) -> IntPolynomial:
    """Exact characteristic polynomial det(xI - M) by Faddeev-LeVerrier.

    The trace divisions are exact over the integers; the assertion guards
    against ever silently losing that exactness.
    """
    d = m.dim
    ident = ExactMatrix.identity(d)
    coeffs_desc = [1]  # x^d
    mk = m
    for k in range(1, d + 1):
        tr = sum(mk.entries[i][i] for i in range(d))
        if tr % k != 0:
            raise ArithmeticError("Faddeev-LeVerrier trace division was not exact")
        ck = -(tr // k)
        coeffs_desc.append(ck)
        if k < d:
            shifted = ExactMatrix(
                tuple(
                    tuple(e + (ck if i == j else 0) for j, e in enumerate(row))
                    for i, row in enumerate(mk.entries)
                )
            )
            mk = m @ shifted
    return IntPolynomial(tuple(reversed(coeffs_desc)))


def count_roots_in_open_unit_disk(p: IntPolynomial) -> int:
    """Number of roots with |z| < 1, with multiplicity; exact.

    Raises RootLocationError in the (unreached in practice) case where the
    scaled-radius bracketing cannot be closed.
    """
    return _rootloc.count_inside_unit_disk(p.coefficients)


def has_root_on_unit_circle(p: IntPolynomial) -> Literal["yes", "no", "indeterminate"]:
    """Certified unit-circle test.

    "no" is returned only when gcd(p, reverse(p)) is constant or provably
    free of unit-modulus roots; "yes" only when a circle root is certified.
    """
    try:
        return "yes" if _rootloc.unit_circle_count(p.coefficients) > 0 else "no"
    except RootLocationError:
        return "indeterminate"


_REASONS = ("ok", "root_on_unit_circle", "multiple_outside_roots", "dominant_not_simple", "indeterminate")


@dataclass(frozen=True)
class PisotReport:
    """Verdict plus validated eigenvalue data for one product matrix.

    counts = (inside, on_circle, outside) root counts with multiplicity;
    the verdict is `inside == d - 1 and on_circle == 0`.  lambda1 and
    lambda2_modulus are certified float enclosures (lambda2 is the maximum
    modulus over the non-dominant roots).
    """

    is_pisot: bool
    reason: str
    lambda1: tuple[float, float] | None
    lambda2_modulus: tuple[float, float] | None
    counts: tuple[int, int, int] | None
    det: int
    polynomial: IntPolynomial


def _outward(lo: Fraction, hi: Fraction) -> tuple[float, float]:
    return (math.nextafter(float(lo), -math.inf), math.nextafter(float(hi), math.inf))


def pisot_check(m: ExactMatrix, precision_bits: int = 40) -> PisotReport:
    """Combine exact root counting with modulus enclosures into a verdict."""
    if not m.is_nonnegative():
        raise ValueError("pisot_check expects a nonnegative integer matrix")
    p = char_poly(m)
    d = p.degree
    det = m.det()
    try:
        on_circle = _rootloc.unit_circle_count(p.coefficients)
        inside = count_roots_in_open_unit_disk(p)
    except RootLocationError:
        return PisotReport(False, "indeterminate", None, None, None, det, p)
    outside = d - inside - on_circle
    if inside == d - 1 and on_circle == 0:
        is_pisot, reason = True, "ok"
    elif on_circle > 0:
        is_pisot, reason = False, "root_on_unit_circle"
    elif outside >= 2:
        is_pisot, reason = False, "multiple_outside_roots"
    else:  # outside == 0 with nothing on the circle: dominant root repeated/inside
        is_pisot, reason = False, "dominant_not_simple"
    moduli = _rootloc.moduli_enclosures(p.coefficients, bits=precision_bits, top=min(2, d))
    lambda1 = _outward(*moduli[0])
    lambda2 = _outward(*moduli[1]) if d >= 2 else None
    return PisotReport(is_pisot, reason, lambda1, lambda2, (inside, on_circle, outside), det, p)


@dataclass(frozen=True)
class DominantEigenvector:
    """Perron vector data: strictly positive, sup-norm one, with residual bound."""

    vector: tuple[float, ...]
    eigenvalue: float
    residual: float


def dominant_eigenvector(m: ExactMatrix, tol: float = 1e-12) -> DominantEigenvector:
    """Power iteration until the relative residual drops below tol.

    Refuses non-primitive input: without primitivity the positive dominant
    eigenvector may fail to exist or be non-unique.  Plain Python matvecs;
    at these dimensions they beat array overhead and this gets called once
    per enumerated word.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if not is_primitive(m):
        raise NotPrimitiveError("dominant_eigenvector needs a primitive matrix")
    rows = [[float(e) for e in row] for row in m.entries]
    if not all(math.isfinite(e) for row in rows for e in row):
        raise OverflowError("matrix entries exceed float range")
    d = m.dim
    v = [1.0] * d
    w = [sum(row[j] * v[j] for j in range(d)) for row in rows]
    for _ in range(200000):
        lam = max(w)
        v = [x / lam for x in w]
        w = [sum(row[j] * v[j] for j in range(d)) for row in rows]
        residual = max(abs(w[i] - lam * v[i]) for i in range(d))
        if residual <= tol * lam:
            return DominantEigenvector(tuple(v), lam, residual)
    raise ArithmeticError("power iteration failed to reach the requested tolerance")
