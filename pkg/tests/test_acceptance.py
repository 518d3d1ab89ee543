"""Acceptance suite: one test per criterion, each printing a pass line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines; the whole module takes a few minutes (it enumerates tens of
thousands of words with exact arithmetic and runs 4*10^7 Monte-Carlo
steps).
"""

import itertools
import json
import math
import random
import subprocess
import sys
import time
from fractions import Fraction

import pytest

from pisotlab.charpoly import char_poly, pisot_check
from pisotlab.cli import EXIT_OK, run_certify, run_enumerate
from pisotlab.cones import image_domain, localize_check, standard_domain
from pisotlab.dynamics import BernoulliSpec, lyapunov_estimate, orbit, periodic_lyapunov
from pisotlab.intmat import (
    ExactMatrix,
    Family,
    Word,
    alphabet,
    family_generator,
    is_primitive,
    product,
    transpose,
)
from pisotlab.seminorm import dobrushin_chain_bound, hyperplane_seminorm, second_eigenvalue_bound

from oracles import char_poly_cofactor, numeric_roots

BOUNDS = [(Family.FS, 3, 8), (Family.FS, 4, 6), (Family.BRUN, 3, 8)]


def _walk_products(family, dim, max_len):
    """Yield (letters, product matrix) for every word to max_len, incrementally."""
    stack = [((a,), family_generator(family, dim, a)) for a in reversed(alphabet(family, dim))]
    while stack:
        letters, matrix = stack.pop()
        yield letters, matrix
        if len(letters) < max_len:
            for a in reversed(alphabet(family, dim)):
                stack.append((letters + (a,), matrix @ family_generator(family, dim, a)))


def _primitive_products(family, dim, max_len):
    for letters, matrix in _walk_products(family, dim, max_len):
        if is_primitive(matrix):
            yield letters, matrix


def _report(line):
    print(f"\n[acceptance] {line}")


def test_criterion_01_fs_letter_criterion_desk_scale():
    start = time.monotonic()
    payload, code = run_enumerate(Family.FS, 3, 8)
    elapsed = time.monotonic() - start
    assert code == EXIT_OK
    assert payload["summary"]["words_checked"] == 9840
    assert payload["summary"]["mismatches"] == 0
    assert elapsed < 120, f"FS3 enumeration took {elapsed:.1f}s"

    payload4, code4 = run_enumerate(Family.FS, 4, 6)
    assert code4 == EXIT_OK
    assert payload4["summary"]["words_checked"] == 5460
    assert payload4["summary"]["mismatches"] == 0
    _report(
        f"criterion 1 PASS: FS3 9840 words + FS4 5460 words, 0 mismatches "
        f"(FS3 in {elapsed:.1f}s)"
    )


def test_criterion_02_brun_letter_criterion_desk_scale():
    payload, code = run_enumerate(Family.BRUN, 3, 8)
    assert code == EXIT_OK
    assert payload["summary"]["words_checked"] == 9840
    assert payload["summary"]["mismatches"] == 0
    # primitivity iff letter 3 occurs, and primitive implies Pisot
    for record in payload["records"]:
        assert record["primitive"] == ("3" in record["word"].split(":")[2].split(","))
        if record["primitive"]:
            assert record["pisot"]
    _report("criterion 2 PASS: Brun 9840 words, 0 mismatches")


def test_criterion_03_seminorm_certificates():
    for family, dim, grid in [(Family.FS, 3, 12), (Family.FS, 4, 8), (Family.BRUN, 3, 12)]:
        payload, code = run_certify(family, dim, grid)
        assert code == EXIT_OK, (family, dim)
        assert payload["violations"] == 0
        for cert in payload["certificates"]:
            value = Fraction(cert["max_value"])
            assert value <= 1
    _report("criterion 3 PASS: certify FS3/12, FS4/8, Brun/12 all <= 1 exactly")


def test_criterion_04_exact_value_reproduction():
    # Semi-norm value, re-derived through the stated hand oracle: vertices of
    # H_v with |z| <= 1 for v = (13,9,6), images under the transposed product.
    b = transpose(product(Word(Family.BRUN, 3, (3, 3, 3))))
    assert b.entries == ((2, 1, 1), (1, 1, 0), (1, 1, 1))
    value = hyperplane_seminorm(b, (13, 9, 6)).value
    assert value == Fraction(7, 9)
    vertices = []
    v = (13, 9, 6)
    for k in range(3):
        for signs in itertools.product((1, -1), repeat=2):
            rest = [j for j in range(3) if j != k]
            z = [None] * 3
            for j, s in zip(rest, signs):
                z[j] = Fraction(s)
            z[k] = -sum(Fraction(v[j]) * z[j] for j in rest) / Fraction(v[k])
            if abs(z[k]) <= 1:
                vertices.append(tuple(z))
    oracle_value = max(
        max(abs(sum(e * x for e, x in zip(row, z))) for row in b.entries)
        for z in vertices
    )
    assert oracle_value == Fraction(7, 9)

    m = product(Word(Family.FS, 3, (1, 2, 3)))
    assert char_poly(m).coefficients == (-1, 5, -7, 1)
    assert char_poly_cofactor(m.entries) == (-1, 5, -7, 1)
    _report("criterion 4 PASS: seminorm 7/9 and charpoly x^3-7x^2+5x-1, both oracle-checked")


def test_criterion_05_eigenvalue_bound_soundness():
    checked = 0
    for family, dim, max_len in BOUNDS:
        for letters, matrix in _primitive_products(family, dim, max_len):
            word = Word(family, dim, letters)
            lam2_hi = pisot_check(matrix, precision_bits=30).lambda2_modulus[1]
            assert float(second_eigenvalue_bound(word)) + 1e-6 >= lam2_hi, word
            if family is Family.FS:
                assert dobrushin_chain_bound(word) + 1e-6 >= lam2_hi, word
            checked += 1
    assert checked == 8334 + 1824 + 9330
    _report(f"criterion 5 PASS: bounds dominate |lambda_2| for {checked} primitive words")


def test_criterion_06_localization():
    checked = 0
    for family, dim, max_len in BOUNDS:
        for letters, _ in _primitive_products(family, dim, max_len):
            assert localize_check(Word(family, dim, letters)), letters
            checked += 1
    assert checked == 8334 + 1824 + 9330
    _report(f"criterion 6 PASS: localization holds for {checked} primitive words")


def test_criterion_07_lyapunov_consistency():
    word = Word(Family.BRUN, 3, (1, 2, 3))
    exact = periodic_lyapunov(word)
    assert exact.stderr1 <= 1e-6 and exact.stderr2 <= 1e-6
    moduli = sorted(abs(r) for r in numeric_roots((1, -1, -3, 1)))
    assert abs(exact.gamma1 - math.log(moduli[-1]) / 3) < 1e-9
    assert abs(exact.gamma2 - math.log(moduli[-2]) / 3) < 1e-9
    mc = lyapunov_estimate(Family.BRUN, word, 3000, 1)
    assert abs(mc.gamma1 - exact.gamma1) < 1e-6
    assert abs(mc.gamma2 - exact.gamma2) < 1e-6
    _report(
        f"criterion 7 PASS: periodic (gamma1, gamma2) = "
        f"({exact.gamma1:.6f}, {exact.gamma2:.6f}), MC matches to "
        f"{max(abs(mc.gamma1 - exact.gamma1), abs(mc.gamma2 - exact.gamma2)):.2e}"
    )


def test_criterion_08_pisot_spectrum_monte_carlo():
    start = time.monotonic()
    for family, dim in [(Family.FS, 3), (Family.BRUN, 3)]:
        spec = BernoulliSpec((Fraction(1, 3),) * 3, seed=20260810)
        est = lyapunov_estimate(family, spec, 10**6, 20, dim=dim)
        assert est.gamma1 - 2.58 * est.stderr1 > 0, (family, est)
        assert est.gamma2 + 2.58 * est.stderr2 < 0, (family, est)
    elapsed = time.monotonic() - start
    assert elapsed < 300, f"Monte-Carlo took {elapsed:.0f}s"
    _report(f"criterion 8 PASS: gamma1 > 0 > gamma2 at 99% confidence in {elapsed:.0f}s")


def test_criterion_09_orbit_exactness():
    rng = random.Random(20260810)
    for index in range(1000):
        family = Family.BRUN if index % 2 else Family.FS
        point = tuple(
            Fraction(rng.randint(1, 10**4), rng.randint(1, 10**3)) for _ in range(3)
        )
        trace = orbit(family, point, 30)
        assert product(trace.word()).apply(trace.final()) == trace.start
    _report("criterion 9 PASS: 1000 random orbits reconstruct exactly")


def test_criterion_10_deterministic_json():
    def run(args):
        return subprocess.run(
            [sys.executable, "-m", "pisotlab.cli", *args],
            capture_output=True,
            text=True,
        )

    lyap_args = ["lyapunov", "Brun", "--weights", "1/3,1/3,1/3", "--steps", "5000",
                 "--trials", "3", "--seed", "77", "--json"]
    enum_args = ["enumerate", "FS", "3", "--max-len", "3", "--json"]
    first = run(lyap_args), run(enum_args)
    second = run(lyap_args), run(enum_args)
    for a, b in zip(first, second):
        assert a.stdout and a.stdout == b.stdout
    json.loads(first[0].stdout)
    _report("criterion 10 PASS: repeated seeded runs are byte-identical")
