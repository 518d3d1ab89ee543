"""Exact integer matrices for two continued-fraction generator families.

The fully subtractive family lives in any dimension d >= 2 and has one
generator per coordinate; the Brun family is the classical triple of 3x3
matrices.  A word (i0, i1, ..., i_{n-1}) denotes the left-to-right product
A^(i0) A^(i1) ... A^(i_{n-1}); the empty word is the identity.

All arithmetic in this module is exact: entries are Python integers (they
grow exponentially with word length and must never wrap) and vector solves
use fractions.Fraction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import reduce
from typing import Iterator, Sequence

__all__ = [
    "ExactMatrix",
    "Family",
    "PrimitivityResult",
    "Word",
    "alphabet",
    "family_generator",
    "product",
    "transpose",
    "inverse",
    "inverse_apply",
    "is_primitive",
    "wielandt_bound",
    "iter_words",
    "parse_word",
    "format_word",
    "load_matrix_text",
    "dump_matrix_text",
    "solve_exact",
]


class Family(Enum):
    """Generator family identifier."""

    FS = "FS"
    BRUN = "BR"

    @classmethod
    def parse(cls, text: str) -> "Family":
        key = str(text).strip().lower()
        if key in ("fs", "fully_subtractive", "fully-subtractive"):
            return cls.FS
        if key in ("br", "brun"):
            return cls.BRUN
        raise ValueError(f"unknown family {text!r} (expected FS or Brun)")


def _check_family_dim(family: Family, dim: int) -> None:
    if family is Family.FS:
        if dim < 2:
            raise ValueError("fully subtractive family needs dimension >= 2")
    elif family is Family.BRUN:
        if dim != 3:
            raise ValueError("Brun family is defined in dimension 3 only")
    else:  # pragma: no cover
        raise ValueError(f"unknown family {family!r}")


def alphabet(family: Family, dim: int) -> range:
    """Letters of the family: 1..d for FS, 1..3 for Brun."""
    _check_family_dim(family, dim)
    return range(1, dim + 1) if family is Family.FS else range(1, 4)


@dataclass(frozen=True)
class ExactMatrix:
    """Square matrix with arbitrary-precision integer entries."""

    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        d = len(self.entries)
        if d == 0 or any(len(row) != d for row in self.entries):
            raise ValueError("matrix must be square and non-empty")
        for row in self.entries:
            for e in row:
                if not isinstance(e, int):
                    raise ValueError("entries must be Python integers")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "ExactMatrix":
        return cls(tuple(tuple(int(e) for e in row) for row in rows))

    @classmethod
    def identity(cls, dim: int) -> "ExactMatrix":
        return cls(tuple(tuple(1 if i == j else 0 for j in range(dim)) for i in range(dim)))

    @property
    def dim(self) -> int:
        return len(self.entries)

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        cols = tuple(zip(*other.entries))
        return ExactMatrix(
            tuple(
                tuple(sum(a * b for a, b in zip(row, col)) for col in cols)
                for row in self.entries
            )
        )

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(tuple(zip(*self.entries)))

    def apply(self, vector: Sequence) -> tuple:
        """Matrix-vector product; works for int and Fraction coordinates."""
        if len(vector) != self.dim:
            raise ValueError("dimension mismatch")
        return tuple(sum(a * x for a, x in zip(row, vector)) for row in self.entries)

    def is_nonnegative(self) -> bool:
        return all(e >= 0 for row in self.entries for e in row)

    def inf_norm(self) -> int:
        """Maximum absolute row sum."""
        return max(sum(abs(e) for e in row) for row in self.entries)

    def det(self) -> int:
        """Exact determinant by fraction-free Bareiss elimination."""
        a = [list(row) for row in self.entries]
        n = self.dim
        sign = 1
        prev = 1
        for k in range(n - 1):
            if a[k][k] == 0:
                pivot = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
                if pivot is None:
                    return 0
                a[k], a[pivot] = a[pivot], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
                a[i][k] = 0
            prev = a[k][k]
        return sign * a[n - 1][n - 1]

    def power(self, k: int) -> "ExactMatrix":
        if k < 0:
            raise ValueError("negative powers not supported here")
        result = ExactMatrix.identity(self.dim)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base if k > 1 else base
            k >>= 1
        return result


@dataclass(frozen=True)
class Word:
    """A finite word over a family alphabet, remembering family and dimension."""

    family: Family
    dim: int
    letters: tuple[int, ...]

    def __post_init__(self) -> None:
        _check_family_dim(self.family, self.dim)
        letters = tuple(int(a) for a in self.letters)
        object.__setattr__(self, "letters", letters)
        valid = alphabet(self.family, self.dim)
        for a in letters:
            if a not in valid:
                raise ValueError(f"letter {a} outside alphabet {list(valid)}")

    def __len__(self) -> int:
        return len(self.letters)

    def __add__(self, other: "Word") -> "Word":
        if (self.family, self.dim) != (other.family, other.dim):
            raise ValueError("cannot concatenate words from different families")
        return Word(self.family, self.dim, self.letters + other.letters)

    def rotated(self, i: int) -> "Word":
        """Cyclic rotation starting at position i."""
        if not self.letters:
            return self
        i %= len(self.letters)
        return Word(self.family, self.dim, self.letters[i:] + self.letters[:i])


# Brun generators as displayed in dimension 3.
_BRUN_GENERATORS = {
    1: ((1, 1, 0), (0, 1, 0), (0, 0, 1)),
    2: ((1, 1, 0), (1, 0, 0), (0, 0, 1)),
    3: ((1, 0, 1), (1, 0, 0), (0, 1, 0)),
}


def family_generator(family: Family, dim: int, letter: int) -> ExactMatrix:
    """The family generator for one letter.

    FS rule: entry (i, j) is 1 when j == letter or i == j, else 0.
    """
    if letter not in alphabet(family, dim):
        raise ValueError(f"letter {letter} invalid for {family.value} in dimension {dim}")
    if family is Family.FS:
        k = letter - 1
        return ExactMatrix(
            tuple(
                tuple(1 if (j == k or i == j) else 0 for j in range(dim))
                for i in range(dim)
            )
        )
    return ExactMatrix(_BRUN_GENERATORS[letter])


def product(word: Word) -> ExactMatrix:
    """Left-to-right product of the word's generators; empty word is the identity."""
    mats = (family_generator(word.family, word.dim, a) for a in word.letters)
    return reduce(lambda x, y: x @ y, mats, ExactMatrix.identity(word.dim))


def transpose(m: ExactMatrix) -> ExactMatrix:
    return m.transpose()


def solve_exact(rows: Sequence[Sequence], rhs: Sequence) -> list[Fraction] | None:
    """Solve M x = rhs exactly over the rationals; None if M is singular."""
    n = len(rows)
    a = [[Fraction(e) for e in row] + [Fraction(r)] for row, r in zip(rows, rhs)]
    for col in range(n):
        pivot = next((i for i in range(col, n) if a[i][col] != 0), None)
        if pivot is None:
            return None
        a[col], a[pivot] = a[pivot], a[col]
        inv = a[col][col]
        a[col] = [e / inv for e in a[col]]
        for i in range(n):
            if i != col and a[i][col] != 0:
                f = a[i][col]
                a[i] = [e - f * g for e, g in zip(a[i], a[col])]
    return [a[i][n] for i in range(n)]


def inverse_apply(m: ExactMatrix, vector: Sequence) -> tuple[Fraction, ...]:
    """Exact M^{-1} x for a unimodular matrix (|det| = 1)."""
    if abs(m.det()) != 1:
        raise ValueError("inverse_apply requires |det| = 1")
    solution = solve_exact(m.entries, vector)
    assert solution is not None
    return tuple(solution)


def inverse(m: ExactMatrix) -> ExactMatrix:
    """Exact integer inverse of a unimodular matrix."""
    if abs(m.det()) != 1:
        raise ValueError("matrix inverse requires |det| = 1")
    d = m.dim
    cols = []
    for j in range(d):
        rhs = [1 if i == j else 0 for i in range(d)]
        col = solve_exact(m.entries, rhs)
        assert col is not None
        cols.append(col)
    rows = tuple(tuple(int(cols[j][i]) for j in range(d)) for i in range(d))
    if any(cols[j][i].denominator != 1 for i in range(d) for j in range(d)):
        raise ArithmeticError("unimodular inverse should be integral")
    return ExactMatrix(rows)


def wielandt_bound(dim: int) -> int:
    """A primitive d x d matrix has A^((d-1)^2 + 1) entrywise positive."""
    return (dim - 1) ** 2 + 1


@dataclass(frozen=True)
class PrimitivityResult:
    """Outcome of the primitivity test.

    ``exponent`` is the smallest n with A^n entrywise positive when primitive;
    ``witness_zero`` is a (row, col) pair (0-based) that is still zero at the
    Wielandt bound when not.
    """

    primitive: bool
    exponent: int | None = None
    witness_zero: tuple[int, int] | None = None

    def __bool__(self) -> bool:
        return self.primitive


def _bool_rows(m: ExactMatrix) -> list[int]:
    return [sum(1 << j for j, e in enumerate(row) if e != 0) for row in m.entries]


def _bool_mul(a: list[int], b: list[int]) -> list[int]:
    out = []
    for row in a:
        acc = 0
        rest = row
        while rest:
            k = (rest & -rest).bit_length() - 1
            acc |= b[k]
            rest &= rest - 1
        out.append(acc)
    return out


def is_primitive(m: ExactMatrix) -> PrimitivityResult:
    """Decide primitivity by boolean powers up to the Wielandt bound."""
    if not m.is_nonnegative():
        raise ValueError("primitivity is defined for nonnegative matrices")
    d = m.dim
    bound = wielandt_bound(d)
    full = (1 << d) - 1
    base = _bool_rows(m)
    power = base
    n = 1
    while True:
        if all(row == full for row in power):
            return PrimitivityResult(True, exponent=n)
        if n == bound:
            break
        power = _bool_mul(power, base)
        n += 1
    i = next(i for i, row in enumerate(power) if row != full)
    j = next(j for j in range(d) if not (power[i] >> j) & 1)
    return PrimitivityResult(False, witness_zero=(i, j))


def iter_words(family: Family, dim: int, max_len: int, min_len: int = 1) -> Iterator[Word]:
    """All words of length min_len..max_len in (length, lexicographic) order."""
    letters = list(alphabet(family, dim))
    for n in range(min_len, max_len + 1):
        for combo in itertools.product(letters, repeat=n):
            yield Word(family, dim, combo)


def parse_word(text: str) -> Word:
    """Parse the word text format, e.g. "FS:3:1,2,3" or "BR:3:3,3".

    An empty letter section denotes the empty word.
    """
    parts = text.strip().split(":")
    if len(parts) != 3:
        raise ValueError(f"malformed word {text!r} (expected FAMILY:DIM:LETTERS)")
    family = Family.parse(parts[0])
    dim = int(parts[1])
    letters = tuple(int(a) for a in parts[2].split(",")) if parts[2] else ()
    return Word(family, dim, letters)


def format_word(word: Word) -> str:
    return f"{word.family.value}:{word.dim}:{','.join(str(a) for a in word.letters)}"


def load_matrix_text(text: str) -> ExactMatrix:
    """Parse the matrix text format: first line d, then d rows of d integers."""
    lines = [line for line in text.strip().splitlines() if line.strip()]
    if not lines:
        raise ValueError("empty matrix text")
    d = int(lines[0])
    if len(lines) != d + 1:
        raise ValueError(f"expected {d} rows, found {len(lines) - 1}")
    rows = []
    for line in lines[1:]:
        row = [int(tok) for tok in line.split()]
        if len(row) != d:
            raise ValueError(f"row {line!r} does not have {d} entries")
        rows.append(row)
    return ExactMatrix.from_rows(rows)


def dump_matrix_text(m: ExactMatrix) -> str:
    lines = [str(m.dim)]
    lines += [" ".join(str(e) for e in row) for row in m.entries]
    return "\n".join(lines) + "\n"
