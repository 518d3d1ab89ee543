"""Exact root location for integer polynomials relative to circles |z| = rho.

Coefficient sequences are ascending (constant term first).  The decision
procedures here are exact: a Schur-Cohn transform chain counts roots in an
open disk when it completes, and the (frequent, because our characteristic
polynomials have |constant| = |leading| = 1) degenerate cases are resolved
by bracketing with rationally scaled radii, using an exact count of roots
on the unit circle.  Circle roots are counted through gcd with the
reciprocal polynomial, the substitution y = x + 1/x and a Sturm chain on
the transformed polynomial.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

Coeffs = tuple[int, ...]


class RootLocationError(Exception):
    """A root count or enclosure could not be certified."""


def normalize(coeffs: Sequence[int]) -> Coeffs:
    """Drop zero leading coefficients (end of the ascending sequence)."""
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def degree(coeffs: Sequence[int]) -> int:
    return len(coeffs) - 1


def poly_eval(coeffs: Sequence, x):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def primitive(coeffs: Sequence[int]) -> Coeffs:
    """Divide out the content and make the leading coefficient positive."""
    c = normalize(coeffs)
    if not c:
        return c
    g = math.gcd(*(abs(x) for x in c))
    if c[-1] < 0:
        g = -g
    return tuple(x // g for x in c)


def derivative(coeffs: Sequence) -> tuple:
    return tuple(i * c for i, c in enumerate(coeffs) if i > 0)


def reverse_poly(coeffs: Sequence[int]) -> Coeffs:
    """x^n p(1/x); assumes a nonzero constant term."""
    return tuple(reversed(normalize(coeffs)))


def _frac(coeffs: Sequence) -> list[Fraction]:
    return [Fraction(c) for c in coeffs]


def _trim(c: list[Fraction]) -> list[Fraction]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _frac_divmod(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    a = _trim(list(a))
    b = _trim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    while len(a) >= len(b):
        k = len(a) - len(b)
        f = a[-1] / lead
        q[k] = f
        for i, bc in enumerate(b):
            a[k + i] -= f * bc
        a.pop()
        _trim(a)
    return q, a


def poly_gcd(a: Sequence[int], b: Sequence[int]) -> Coeffs:
    """Primitive integer gcd (leading coefficient positive) via rational Euclid."""
    fa, fb = _trim(_frac(a)), _trim(_frac(b))
    while fb:
        _, r = _frac_divmod(fa, fb)
        fa, fb = fb, _trim(r)
    if not fa:
        return ()
    den = math.lcm(*(f.denominator for f in fa))
    return primitive([int(f * den) for f in fa])


def _exact_div(a: Sequence[int], b: Sequence[int]) -> Coeffs:
    """a / b for integer polynomials when the division is exact in Z[x]."""
    q, r = _frac_divmod(_frac(a), _frac(b))
    if _trim(r):
        raise ArithmeticError("expected exact polynomial division")
    q = _trim(q)
    if any(x.denominator != 1 for x in q):
        raise ArithmeticError("expected integral quotient")
    return tuple(int(x) for x in q)


def _sub_poly(a: Sequence[int], b: Sequence[int]) -> Coeffs:
    n = max(len(a), len(b))
    aa = list(a) + [0] * (n - len(a))
    bb = list(b) + [0] * (n - len(b))
    return normalize(tuple(x - y for x, y in zip(aa, bb)))


def squarefree_decomposition(p: Sequence[int]) -> list[tuple[Coeffs, int]]:
    """Yun's algorithm; primitive integer factors with their multiplicities."""
    f = primitive(p)
    if degree(f) <= 0:
        return []
    fp = derivative(f)
    g = poly_gcd(f, fp)
    if degree(g) == 0:
        return [(f, 1)]
    w = _exact_div(f, g)
    z = _sub_poly(_exact_div(fp, g), derivative(w))
    out: list[tuple[Coeffs, int]] = []
    i = 1
    while degree(w) > 0:
        a = poly_gcd(w, z) if z else tuple(w)
        if degree(a) > 0:
            out.append((primitive(a), i))
        w = _exact_div(w, a)
        z = _sub_poly(_exact_div(z, a) if z else (), derivative(w))
        i += 1
    return out


def deflate_linear(p: Sequence[int], root: int) -> Coeffs:
    """Exact synthetic division of p by (x - root); the remainder must vanish."""
    desc = list(reversed(normalize(p)))
    out = [desc[0]]
    for c in desc[1:]:
        out.append(c + root * out[-1])
    if out[-1] != 0:
        raise ArithmeticError(f"{root} is not a root")
    return tuple(reversed(out[:-1]))


def sturm_count_open(h: Sequence[int], a: Fraction, b: Fraction) -> int:
    """Number of distinct real roots of h in (a, b); needs h(a), h(b) != 0."""
    if poly_eval(h, a) == 0 or poly_eval(h, b) == 0:
        raise RootLocationError("Sturm endpoints must not be roots")
    chain = [_trim(_frac(h))]
    d = _trim(_frac(derivative(h)))
    if d:
        chain.append(d)
        while True:
            _, r = _frac_divmod(chain[-2], chain[-1])
            r = _trim(r)
            if not r:
                break
            chain.append([-x for x in r])

    def variations(x: Fraction) -> int:
        signs = []
        for poly in chain:
            v = poly_eval(poly, x)
            if v != 0:
                signs.append(1 if v > 0 else -1)
        return sum(1 for s, t in zip(signs, signs[1:]) if s != t)

    return variations(a) - variations(b)


def chebyshev_transform(g: Sequence[int]) -> Coeffs:
    """For palindromic g of even degree 2m, the h with g(x)/x^m = h(x + 1/x).

    Unit-circle roots e^{i theta} of g correspond to real roots 2 cos(theta)
    of h in (-2, 2), one per conjugate pair.
    """
    g = normalize(g)
    n = degree(g)
    if n % 2 != 0 or g != tuple(reversed(g)):
        raise RootLocationError("Chebyshev transform needs an even palindromic polynomial")
    m = n // 2
    # V_j(y) = x^j + x^{-j} as a polynomial in y = x + 1/x:
    # V_0 = 2, V_1 = y, V_{j+1} = y V_j - V_{j-1}
    h = [0] * (m + 1)
    h[0] += g[m]
    vprev, vcur = [2], [0, 1]
    for j in range(1, m + 1):
        for i, c in enumerate(vcur):
            h[i] += g[m + j] * c
        if j < m:
            vnext = [0] + list(vcur)
            for i, c in enumerate(vprev):
                vnext[i] -= c
            vprev, vcur = vcur, vnext
    return normalize(h)


def schur_cohn_inside(p: Sequence[int]) -> int | None:
    """Roots of p in |z| < 1, or None when a transform step degenerates.

    Each step forms T p = a_0 p - a_n p* and applies Rouche on |z| = 1: for
    |a_0| > |a_n| the count is preserved, for |a_0| < |a_n| it flips to
    n - count.  A completed chain certifies that no level has roots on the
    circle (a circle root would propagate to the final nonzero constant).
    """
    cur = primitive(p)
    if not cur or cur[0] == 0:
        return None
    n = degree(cur)
    if n == 0:
        return 0
    a0, an = cur[0], cur[-1]
    gamma = a0 * a0 - an * an
    if gamma == 0:
        return None
    t = primitive(tuple(a0 * cur[j] - an * cur[n - j] for j in range(n)))
    sub = schur_cohn_inside(t)
    if sub is None:
        return None
    return sub if gamma > 0 else n - sub


def scale_radius(p: Sequence[int], rho: Fraction) -> Coeffs:
    """Integer-cleared p(rho x): roots of p in |z| < rho map to |x| < 1."""
    p = normalize(p)
    n = degree(p)
    a, b = rho.numerator, rho.denominator
    return primitive(tuple(c * a**i * b ** (n - i) for i, c in enumerate(p)))


def count_inside_radius(p: Sequence[int], rho: Fraction) -> int | None:
    if rho <= 0:
        raise ValueError("radius must be positive")
    return schur_cohn_inside(scale_radius(p, rho))


def _strip_zero_roots(p: Sequence[int]) -> tuple[int, Coeffs]:
    c = normalize(p)
    if not c:
        raise ValueError("zero polynomial has no root counts")
    k = 0
    while c[k] == 0:
        k += 1
    return k, c[k:]


def unit_circle_count(p: Sequence[int]) -> int:
    """Number of roots with |z| = 1, counted with multiplicity.  Exact.

    Works factor-by-factor on the squarefree decomposition: rational circle
    roots are exactly +-1; the remaining candidates all divide
    gcd(q, reverse(q)), which is palindromic of even degree here, and its
    circle roots are counted by Sturm after the y = x + 1/x substitution.
    """
    _, pp = _strip_zero_roots(p)
    if degree(pp) == 0:
        return 0
    total = 0
    for q, mult in squarefree_decomposition(pp):
        c = 0
        if poly_eval(q, 1) == 0:
            q = deflate_linear(q, 1)
            c += 1
        if poly_eval(q, -1) == 0:
            q = deflate_linear(q, -1)
            c += 1
        if degree(q) > 0:
            g = poly_gcd(q, reverse_poly(q))
            if degree(g) > 0:
                h = chebyshev_transform(g)
                c += 2 * sturm_count_open(h, Fraction(-2), Fraction(2))
        total += mult * c
    return total


def count_inside_unit_disk(p: Sequence[int]) -> int:
    """Roots with |z| < 1, counted with multiplicity.  Exact.

    The direct Schur-Cohn chain is attempted first; on degeneracy the count
    is bracketed between radii 1 - eps and 1 + eps, which closes as soon as
    the annulus holds only the (exactly counted) unit-circle roots.
    """
    zeros, pp = _strip_zero_roots(p)
    if degree(pp) == 0:
        return zeros
    direct = schur_cohn_inside(pp)
    if direct is not None:
        return zeros + direct
    circle = unit_circle_count(pp)
    for k in range(1, 64):
        eps = Fraction(1, 2**k)
        n_lo = count_inside_radius(pp, 1 - eps)
        n_hi = count_inside_radius(pp, 1 + eps)
        if n_lo is None or n_hi is None:
            continue
        if n_hi - n_lo == circle:
            return zeros + n_lo
    raise RootLocationError("unit-disk count did not stabilize")


def _cauchy_bounds(pp: Coeffs) -> tuple[Fraction, Fraction]:
    n = degree(pp)
    hi = 1 + max(Fraction(abs(c), abs(pp[-1])) for c in pp[:n])
    lo = 1 / (1 + max(Fraction(abs(c), abs(pp[0])) for c in pp[1:]))
    return lo, hi


_MID_OFFSETS = (
    Fraction(1, 2), Fraction(3, 8), Fraction(5, 8), Fraction(7, 16),
    Fraction(9, 16), Fraction(13, 32), Fraction(19, 32), Fraction(27, 64),
    Fraction(37, 64),
)


def moduli_enclosures(
    p: Sequence[int], bits: int = 48, top: int | None = None
) -> list[tuple[Fraction, Fraction]]:
    """Certified enclosures of all root moduli, sorted descending.

    The j-th smallest modulus is bracketed by bisection on the exact count
    of roots in |z| < rho; enclosures have width at most 2^-bits.  When the
    count at a bisection point degenerates (a root modulus equals rho, or
    the Schur-Cohn chain collapses) a nearby off-center point is used
    instead.  `top` restricts the output to the largest few moduli.
    """
    zeros, pp = _strip_zero_roots(p)
    n = degree(pp)
    results: list[tuple[Fraction, Fraction]] = []
    if n > 0:
        lo_bound, hi_bound = _cauchy_bounds(pp)
        width = Fraction(1, 2**bits)
        memo: dict[Fraction, int | None] = {}

        def count(rho: Fraction) -> int | None:
            if rho not in memo:
                memo[rho] = count_inside_radius(pp, rho)
            return memo[rho]

        wanted = range(n, 0, -1)[: top if top is not None else n]
        for j in wanted:  # j-th smallest modulus, largest first
            lo, hi = lo_bound / 2, hi_bound * 2
            while hi - lo > width:
                for offset in _MID_OFFSETS:
                    mid = lo + (hi - lo) * offset
                    c = count(mid)
                    if c is not None:
                        break
                else:
                    raise RootLocationError("no usable bisection point found")
                if c >= j:
                    hi = mid
                else:
                    lo = mid
            results.append((lo, hi))
    results.extend([(Fraction(0), Fraction(0))] * zeros)
    if top is not None:
        results = results[:top]
    return results
