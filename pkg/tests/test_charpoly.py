"""Characteristic polynomials and exact root location."""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from pisotlab import _rootloc
from pisotlab.charpoly import (
    IntPolynomial,
    NotPrimitiveError,
    char_poly,
    count_roots_in_open_unit_disk,
    dominant_eigenvector,
    format_polynomial,
    has_root_on_unit_circle,
    parse_polynomial,
    pisot_check,
)
from pisotlab.intmat import ExactMatrix, Family, Word, iter_words, product

from conftest import words
from oracles import char_poly_cofactor, count_roots_numeric, numeric_roots


def test_char_poly_examples():
    fs = product(Word(Family.FS, 3, (1, 2, 3)))
    assert char_poly(fs).coefficients == (-1, 5, -7, 1)
    assert char_poly(ExactMatrix.identity(3)).coefficients == (-1, 3, -3, 1)
    br = product(Word(Family.BRUN, 3, (1, 2, 3)))
    assert char_poly(br).coefficients == (1, -1, -3, 1)


def test_char_poly_against_cofactor_oracle_examples():
    for word in [Word(Family.FS, 3, (1, 2, 3)), Word(Family.BRUN, 3, (3, 3, 1))]:
        m = product(word)
        assert char_poly(m).coefficients == char_poly_cofactor(m.entries)


@settings(max_examples=50)
@given(words(Family.FS, 4, max_len=5))
def test_char_poly_against_cofactor_oracle(word):
    m = product(word)
    assert char_poly(m).coefficients == char_poly_cofactor(m.entries)


@settings(max_examples=50)
@given(words(Family.BRUN, 3, max_len=6))
def test_char_poly_constant_term_is_det(word):
    m = product(word)
    p = char_poly(m)
    assert p.coefficients[0] == (-1) ** m.dim * m.det()


def test_int_polynomial_validation_and_text():
    with pytest.raises(ValueError):
        IntPolynomial((2, 1, 3))
    p = parse_polynomial("-1 5 -7 1")
    assert p.degree == 3 and p(0) == -1 and p(1) == -2
    assert format_polynomial(p) == "-1 5 -7 1"


def test_count_roots_examples():
    assert count_roots_in_open_unit_disk(parse_polynomial("-1 5 -7 1")) == 2
    assert count_roots_in_open_unit_disk(parse_polynomial("-1 3 -3 1")) == 0
    assert count_roots_in_open_unit_disk(parse_polynomial("1 -3 1")) == 1


def test_unit_circle_examples():
    assert has_root_on_unit_circle(parse_polynomial("1 1 -3 1")) == "yes"
    assert has_root_on_unit_circle(parse_polynomial("-1 5 -7 1")) == "no"
    assert has_root_on_unit_circle(parse_polynomial("1 -3 1")) == "no"
    # cyclotomic pair on the circle, no rational root
    assert has_root_on_unit_circle(parse_polynomial("1 1 1")) == "yes"
    assert count_roots_in_open_unit_disk(parse_polynomial("1 1 1")) == 0


def test_permutation_matrix_counts():
    perm = ExactMatrix.from_rows([[0, 1, 0], [0, 0, 1], [1, 0, 0]])
    report = pisot_check(perm)
    assert report.counts == (0, 3, 0)
    assert report.reason == "root_on_unit_circle"


int_polys = st.lists(st.integers(-9, 9), min_size=2, max_size=7).filter(
    lambda c: c[-1] != 0 and any(x != 0 for x in c[:-1])
)


@settings(max_examples=150, deadline=None)
@given(int_polys)
def test_root_counts_match_numeric_oracle(coeffs):
    oracle = count_roots_numeric(coeffs)
    assume(oracle is not None)
    inside = _rootloc.count_inside_unit_disk(tuple(coeffs))
    on_circle = _rootloc.unit_circle_count(tuple(coeffs))
    assert (inside, on_circle) == (oracle[0], oracle[1])


def test_root_counts_on_multiple_circle_roots():
    # -(x+1)^3 (x-1)^2: numpy splits the clusters, the exact counts must not.
    coeffs = (-1, -1, 2, 2, -1, -1)
    assert _rootloc.count_inside_unit_disk(coeffs) == 0
    assert _rootloc.unit_circle_count(coeffs) == 5


@settings(max_examples=80, deadline=None)
@given(int_polys)
def test_moduli_enclosures_cover_numeric_roots(coeffs):
    # 1e-3 slack: numpy splits a k-fold root into a cluster of radius
    # ~1e-16^(1/k), up to ~1e-4 for the quadruple roots reachable here.
    enclosures = _rootloc.moduli_enclosures(tuple(coeffs), bits=40)
    moduli = sorted(np.abs(numeric_roots(coeffs)), reverse=True)
    assert len(enclosures) == len(moduli)
    for (lo, hi), m in zip(enclosures, moduli):
        assert float(lo) - 1e-3 <= m <= float(hi) + 1e-3


def test_counts_partition_degree_on_words():
    for word in iter_words(Family.BRUN, 3, 4):
        report = pisot_check(product(word))
        assert sum(report.counts) == 3


def test_root_moduli_product_is_one():
    # |det| = 1 forces sum of log-moduli to vanish, checkable from enclosures.
    for letters in [(1, 2, 3), (3, 3, 1), (2, 3, 2, 1)]:
        p = char_poly(product(Word(Family.BRUN, 3, letters)))
        enclosures = _rootloc.moduli_enclosures(p.coefficients, bits=50)
        lo = sum(math.log(float(a)) for a, _ in enclosures)
        hi = sum(math.log(float(b)) for _, b in enclosures)
        assert lo <= 0 <= hi


def test_pisot_check_examples():
    report = pisot_check(product(Word(Family.FS, 3, (1, 2, 3))))
    assert report.is_pisot and report.reason == "ok"
    assert 6.22 < report.lambda1[0] <= report.lambda1[1] < 6.23
    assert 0.40 < report.lambda2_modulus[0] <= report.lambda2_modulus[1] < 0.41
    assert report.counts == (2, 0, 1)

    report2 = pisot_check(product(Word(Family.BRUN, 3, (1, 2))))
    assert not report2.is_pisot and report2.reason == "root_on_unit_circle"

    report3 = pisot_check(ExactMatrix.identity(3))
    assert not report3.is_pisot


def test_pisot_check_multiple_outside():
    m = ExactMatrix.from_rows([[2, 0], [0, 3]])
    report = pisot_check(m)
    assert not report.is_pisot and report.reason == "multiple_outside_roots"


def test_pisot_check_nilpotent():
    m = ExactMatrix.from_rows([[0, 1], [0, 0]])
    report = pisot_check(m)
    assert not report.is_pisot and report.reason == "dominant_not_simple"
    assert report.counts == (2, 0, 0)


@settings(max_examples=40, deadline=None)
@given(words(Family.BRUN, 3, min_len=1, max_len=6))
def test_pisot_enclosures_contain_numeric_eigenvalues(word):
    m = product(word)
    report = pisot_check(m)
    moduli = sorted(np.abs(np.linalg.eigvals(np.array(m.entries, float))), reverse=True)
    assert report.lambda1[0] - 1e-8 <= moduli[0] <= report.lambda1[1] + 1e-8
    assert report.lambda2_modulus[0] - 1e-8 <= moduli[1] <= report.lambda2_modulus[1] + 1e-8


def test_dominant_eigenvector_examples():
    m = product(Word(Family.FS, 3, (1, 2, 3)))
    result = dominant_eigenvector(m, tol=1e-12)
    assert max(result.vector) == 1.0 and min(result.vector) > 0
    assert result.residual <= 1e-12 * result.eigenvalue
    # residual contract, recomputed directly
    mv = [sum(e * x for e, x in zip(row, result.vector)) for row in m.entries]
    assert max(abs(a - result.eigenvalue * b) for a, b in zip(mv, result.vector)) <= 1e-12 * result.eigenvalue

    golden = dominant_eigenvector(ExactMatrix.from_rows([[2, 1], [1, 1]]))
    phi = (1 + math.sqrt(5)) / 2
    assert golden.vector[0] == 1.0
    assert abs(golden.vector[1] - 1 / phi) < 1e-9

    with pytest.raises(NotPrimitiveError):
        dominant_eigenvector(ExactMatrix.identity(3))


def test_schur_cohn_degenerates_on_unit_determinant():
    # |a_0| = |a_n| = 1 collapses the first transform; the bracketing path
    # must still produce the exact count.
    assert _rootloc.schur_cohn_inside((-1, 5, -7, 1)) is None
    assert _rootloc.count_inside_unit_disk((-1, 5, -7, 1)) == 2
