"""Shared hypothesis strategies and fixtures."""

from __future__ import annotations

import sys
from fractions import Fraction
from pathlib import Path

from hypothesis import strategies as st

from pisotlab.intmat import Family, Word, alphabet

sys.path.insert(0, str(Path(__file__).parent))


def words(family: Family, dim: int, min_len: int = 0, max_len: int = 6):
    letters = list(alphabet(family, dim))
    return st.lists(
        st.sampled_from(letters), min_size=min_len, max_size=max_len
    ).map(lambda ls: Word(family, dim, tuple(ls)))


def primitive_words(family: Family, dim: int, max_extra: int = 4):
    """Words guaranteed primitive: a permutation of the required letters plus noise."""
    letters = list(alphabet(family, dim))
    required = letters if family is Family.FS else [3]

    @st.composite
    def build(draw):
        base = list(required) + draw(
            st.lists(st.sampled_from(letters), max_size=max_extra)
        )
        perm = draw(st.permutations(base))
        return Word(family, dim, tuple(perm))

    return build()


def positive_rationals(max_num: int = 60):
    return st.builds(
        Fraction,
        st.integers(min_value=1, max_value=max_num),
        st.integers(min_value=1, max_value=max_num),
    )


def positive_vectors(dim: int, max_num: int = 60):
    return st.lists(positive_rationals(max_num), min_size=dim, max_size=dim).map(tuple)
