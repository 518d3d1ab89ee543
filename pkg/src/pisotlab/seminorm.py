"""The hyperplane semi-norm, cone certificates and second-eigenvalue bounds.

For a nonzero v, the semi-norm of B is the operator norm (sup norm on both
sides) of B restricted to the hyperplane H_v = {z : <v, z> = 0}.  The
feasible set H_v with the unit-cube constraint is a polytope whose vertices
have at least d - 1 coordinates at +-1, so the exact maximum is found by
enumerating those vertices in rational arithmetic.  That removes all
floating-point doubt from the <= 1 certificates.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .charpoly import NotPrimitiveError, dominant_eigenvector
from .cones import BarycentricPoint, Cone, barycentric_grid, standard_domain
from .intmat import ExactMatrix, Family, Word, is_primitive, product, transpose

__all__ = [
    "SeminormValue",
    "SeminormCertificate",
    "StochasticMatrix",
    "hyperplane_seminorm",
    "hyperplane_vertices",
    "cone_seminorm_certify",
    "stochastic_rep",
    "dobrushin_coefficient",
    "dobrushin_chain_bound",
    "second_eigenvalue_bound",
]


@dataclass(frozen=True)
class SeminormValue:
    """Exact semi-norm value together with a vertex attaining it."""

    value: Fraction
    argmax_vertex: tuple[Fraction, ...]


def hyperplane_vertices(v: Sequence, dim: int) -> list[tuple[Fraction, ...]]:
    """Vertices of {z : <v, z> = 0, |z_i| <= 1}.

    A vertex fixes d - 1 coordinates at +-1 and solves the hyperplane
    equation for the remaining one (which needs v_k != 0 there); cube
    corners lying on the hyperplane appear as the |z_k| = 1 cases.
    """
    v = [Fraction(x) for x in v]
    if all(x == 0 for x in v):
        raise ValueError("v must be nonzero")
    verts: set[tuple[Fraction, ...]] = set()
    others = list(range(dim))
    for k in range(dim):
        if v[k] == 0:
            continue
        rest = others[:k] + others[k + 1 :]
        for signs in itertools.product((1, -1), repeat=dim - 1):
            zk = -sum(v[j] * s for j, s in zip(rest, signs)) / v[k]
            if abs(zk) <= 1:
                z = [Fraction(0)] * dim
                for j, s in zip(rest, signs):
                    z[j] = Fraction(s)
                z[k] = zk
                verts.add(tuple(z))
    return sorted(verts)


def hyperplane_seminorm(b: ExactMatrix, v: Sequence) -> SeminormValue:
    """Exact sup of |B z|_inf over z in H_v with |z|_inf <= 1.

    The objective is a maximum of convex functions, so it peaks at a vertex
    of the polytope; ties break toward the lexicographically first vertex.
    """
    dim = b.dim
    best: Fraction | None = None
    best_z: tuple[Fraction, ...] | None = None
    for z in hyperplane_vertices(v, dim):
        value = max(abs(x) for x in b.apply(z))
        if best is None or value > best:
            best, best_z = value, z
    if best is None or best_z is None:
        raise ValueError("hyperplane meets the cube only at the origin")
    return SeminormValue(best, best_z)


@dataclass(frozen=True)
class SeminormCertificate:
    """Grid-sampled bound on the cone semi-norm sup_{v in cone} |B|_v.

    This checks the supremum at the interior barycentric grid points only;
    it is a sampled certificate, not a proof over the whole cone.
    """

    label: str
    grid_resolution: int
    max_value: Fraction
    worst_point: BarycentricPoint
    verdict: str  # strict_contraction | certified_le_one | violation


def cone_seminorm_certify(b: ExactMatrix, cone: Cone, resolution: int, label: str = "") -> SeminormCertificate:
    best: Fraction | None = None
    worst: BarycentricPoint | None = None
    for point in barycentric_grid(cone, resolution):
        value = hyperplane_seminorm(b, point.point()).value
        if best is None or value > best:
            best, worst = value, point
    assert best is not None and worst is not None
    if best > 1:
        verdict = "violation"
    elif best == 1:
        verdict = "certified_le_one"
    else:
        verdict = "strict_contraction"
    return SeminormCertificate(label, resolution, best, worst, verdict)


@dataclass(frozen=True)
class StochasticMatrix:
    """Row-stochastic rational matrix."""

    rows: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        rows = tuple(tuple(Fraction(x) for x in row) for row in self.rows)
        object.__setattr__(self, "rows", rows)
        for row in rows:
            if len(row) != len(rows):
                raise ValueError("matrix must be square")
            if any(x < 0 for x in row):
                raise ValueError("entries must be nonnegative")
            if sum(row) != 1:
                raise ValueError("rows must sum to exactly one")

    def apply(self, z: Sequence) -> tuple:
        return tuple(sum(a * x for a, x in zip(row, z)) for row in self.rows)


def stochastic_rep(letter: int, mu: BarycentricPoint) -> StochasticMatrix:
    """The action of the transposed FS generator on H_v, v = sum(mu_i f_i).

    It is the identity with row `letter` replaced by the weights mu.  The
    representation is specific to the fully subtractive family.
    """
    cone = mu.cone
    if cone != standard_domain(Family.FS, cone.dim):
        raise ValueError("stochastic_rep is defined on the fully subtractive domain")
    d = cone.dim
    if not 1 <= letter <= d:
        raise ValueError(f"letter {letter} out of range for dimension {d}")
    rows = []
    for i in range(d):
        if i == letter - 1:
            rows.append(tuple(mu.mu))
        else:
            rows.append(tuple(Fraction(1) if j == i else Fraction(0) for j in range(d)))
    return StochasticMatrix(tuple(rows))


def dobrushin_coefficient(rows: Iterable[Sequence]) -> Fraction | float:
    """Half the maximal L1 distance between two rows of a stochastic matrix."""
    rows = [list(row) for row in rows]
    worst = max(
        (sum(abs(a - b) for a, b in zip(r1, r2)) for r1, r2 in itertools.combinations(rows, 2)),
        default=0,
    )
    return worst / 2


def _require_primitive(word: Word) -> ExactMatrix:
    m = product(word)
    if not is_primitive(m):
        raise NotPrimitiveError(f"word {word.letters} does not give a primitive product")
    return m


def dobrushin_chain_bound(word: Word, tol: float = 1e-12) -> float:
    """Dobrushin coefficient of the stochastic chain along a periodic FS word.

    The transposed cocycle acts on the moving hyperplanes H_{v_i} as the
    product P(x_{p-1}, mu^(p-1)) ... P(x_0, mu^(0)), where v_i is the Perron
    vector of the word rotated to start at position i, written in the ray
    basis.  The coefficient bounds the modulus of every non-unit eigenvalue
    of the chain, hence |lambda_2| of the word's product.
    """
    if word.family is not Family.FS:
        raise ValueError("the stochastic chain is specific to the fully subtractive family")
    _require_primitive(word)
    d = word.dim
    rays = standard_domain(Family.FS, d).rays
    ray_matrix = np.array(
        [[float(rays[j][i]) for j in range(d)] for i in range(d)]
    )
    chain = np.eye(d)
    for i, letter in enumerate(word.letters):
        perron = dominant_eigenvector(product(word.rotated(i)), tol=tol)
        mu = np.linalg.solve(ray_matrix, np.array(perron.vector))
        mu = mu / mu.sum()
        p = np.eye(d)
        p[letter - 1] = mu
        chain = p @ chain
    return float(dobrushin_coefficient(chain))


def second_eigenvalue_bound(word: Word, max_denominator: int = 10**6) -> Fraction:
    """Exact semi-norm of the transposed product at a rationalized Perron vector.

    The hyperplane of the true Perron vector is invariant under the
    transposed product and carries exactly the non-dominant spectrum, so the
    semi-norm there dominates |lambda_2|; rationalizing v (continued
    fraction rounding with bounded denominator) perturbs the bound by an
    amount far below the reported 1e-6 comparison slack.
    """
    m = _require_primitive(word)
    perron = dominant_eigenvector(m)
    v = tuple(Fraction(x).limit_denominator(max_denominator) for x in perron.vector)
    return hyperplane_seminorm(transpose(m), v).value
