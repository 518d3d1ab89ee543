"""Adapted projective cones, membership tests and eigenvector localization.

Both standard domains are simplicial: the fully subtractive domain is the
hull of the rays f_i = e - e_i and the Brun domain is the hull of
(1,0,0), (1,1,0), (1,1,1).  Cones are stored as exactly d rational rays
forming a basis, so membership reduces to one exact linear solve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .charpoly import dominant_eigenvector
from .intmat import Family, Word, product, solve_exact

__all__ = [
    "Cone",
    "BarycentricPoint",
    "UnsupportedConeError",
    "standard_domain",
    "contains",
    "image_domain",
    "barycentric_grid",
    "localize_check",
    "cone_to_json",
]


class UnsupportedConeError(ValueError):
    """The cone's rays do not form a basis, so membership cannot be solved."""


@dataclass(frozen=True)
class Cone:
    """Projective convex cone spanned by d nonnegative rational rays."""

    dim: int
    rays: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        rays = tuple(tuple(Fraction(x) for x in ray) for ray in self.rays)
        object.__setattr__(self, "rays", rays)
        if len(rays) != self.dim:
            raise ValueError("expected exactly dim rays")
        for ray in rays:
            if len(ray) != self.dim:
                raise ValueError("ray length must equal dim")
            if any(x < 0 for x in ray) or all(x == 0 for x in ray):
                raise ValueError("rays must be nonnegative and nonzero")

    def ray_columns(self) -> list[list[Fraction]]:
        """Rows of the matrix whose columns are the rays."""
        return [[self.rays[j][i] for j in range(self.dim)] for i in range(self.dim)]


@dataclass(frozen=True)
class BarycentricPoint:
    """Convex weights over a cone's rays; the point is sum(mu_i * ray_i)."""

    mu: tuple[Fraction, ...]
    cone: Cone

    def __post_init__(self) -> None:
        mu = tuple(Fraction(x) for x in self.mu)
        object.__setattr__(self, "mu", mu)
        if len(mu) != self.cone.dim:
            raise ValueError("weight count must match the cone dimension")
        if any(x < 0 for x in mu) or sum(mu) != 1:
            raise ValueError("weights must be nonnegative and sum to one")

    def point(self) -> tuple[Fraction, ...]:
        return tuple(
            sum(m * ray[i] for m, ray in zip(self.mu, self.cone.rays))
            for i in range(self.cone.dim)
        )

    def is_interior(self) -> bool:
        return all(x > 0 for x in self.mu)


def standard_domain(family: Family, dim: int) -> Cone:
    """The adapted domain: FS rays e - e_i, Brun rays of the sorted simplex."""
    if family is Family.FS:
        rays = tuple(
            tuple(Fraction(0) if j == i else Fraction(1) for j in range(dim))
            for i in range(dim)
        )
        return Cone(dim, rays)
    if dim != 3:
        raise ValueError("Brun domain is three-dimensional")
    return Cone(3, ((Fraction(1), Fraction(0), Fraction(0)),
                    (Fraction(1), Fraction(1), Fraction(0)),
                    (Fraction(1), Fraction(1), Fraction(1))))


def barycentric_coordinates(cone: Cone, x: Sequence) -> tuple[Fraction, ...]:
    """Solve sum(mu_i ray_i) = x exactly; raises if the rays are not a basis."""
    solution = solve_exact(cone.ray_columns(), [Fraction(v) for v in x])
    if solution is None:
        raise UnsupportedConeError("cone rays are linearly dependent")
    return tuple(solution)


def contains(cone: Cone, x: Sequence, strict: bool = False) -> bool:
    """Exact membership test; projective, so any positive scaling of x agrees."""
    if all(v == 0 for v in x):
        raise ValueError("membership is undefined for the zero vector")
    mu = barycentric_coordinates(cone, x)
    if strict:
        return all(m > 0 for m in mu)
    return all(m >= 0 for m in mu)


def image_domain(word: Word) -> Cone:
    """The cone A^(w) D: rays are the word's product applied to the domain rays."""
    base = standard_domain(word.family, word.dim)
    m = product(word)
    return Cone(word.dim, tuple(m.apply(ray) for ray in base.rays))


def _compositions(total: int, parts: int):
    """Positive integer compositions of total into parts, first part descending."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total - parts + 1, 0, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def barycentric_grid(cone: Cone, resolution: int) -> list[BarycentricPoint]:
    """All interior weights with denominator `resolution` (needs resolution >= d)."""
    d = cone.dim
    if resolution < d:
        raise ValueError("resolution must be at least the dimension")
    return [
        BarycentricPoint(tuple(Fraction(k, resolution) for k in combo), cone)
        for combo in _compositions(resolution, d)
    ]


def localize_check(word: Word, tol: float = 1e-9) -> bool:
    """Does the Perron vector of the word's product lie in its image cone?

    The eigenvector is irrational, so the membership solve runs in floats
    against the exact rays, with slack tol on the barycentric coordinates.
    """
    m = product(word)
    perron = dominant_eigenvector(m)
    cone = image_domain(word)
    rays = np.array(
        [[float(cone.rays[j][i]) for j in range(cone.dim)] for i in range(cone.dim)]
    )
    mu = np.linalg.solve(rays, np.array(perron.vector))
    total = mu.sum()
    if not math.isfinite(total) or total == 0:
        return False
    mu = mu / total
    return bool(mu.min() >= -tol)


def cone_to_json(cone: Cone) -> list[str]:
    """Rays as integer-vector strings with cleared denominators."""
    out = []
    for ray in cone.rays:
        den = math.lcm(*(x.denominator for x in ray))
        cleared = [x * den for x in ray]
        g = math.gcd(*(int(x) for x in cleared)) or 1
        out.append(" ".join(str(int(x) // g) for x in cleared))
    return out
