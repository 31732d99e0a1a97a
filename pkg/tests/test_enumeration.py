"""Tests for src.enumeration: vector kernels checked against scalar arithmetic."""

import numpy as np
import pytest

from src.enumeration import (
    ArrayArithmetic,
    chunk_ranges,
    count_chunk,
    decode_tuples,
    merge_counts,
    run_chunks,
)
from src.errors import ArithmeticOverflowError
from src.metacyclic import FamilyTag, GroupElement, elements, inverse, make_family, multiply, power
from src.word_parser import parse


def _as_arrays(xs):
    return np.array([x.alpha for x in xs], dtype=np.int64), np.array([x.beta for x in xs], dtype=np.int64)


def _as_elements(pair):
    return [GroupElement(int(a), int(b)) for a, b in zip(*pair)]


class TestArrayArithmetic:
    def test_multiply_matches_scalar(self, small_families):
        for G in small_families:
            xs = elements(G)
            left = [x for x in xs for _ in xs]
            right = [y for _ in xs for y in xs]
            got = _as_elements(ArrayArithmetic(G).multiply(_as_arrays(left), _as_arrays(right)))
            assert got == [multiply(G, x, y) for x, y in zip(left, right)]

    def test_inverse_matches_scalar(self, small_families):
        for G in small_families:
            xs = elements(G)
            assert _as_elements(ArrayArithmetic(G).inverse(_as_arrays(xs))) == [inverse(G, x) for x in xs]

    @pytest.mark.parametrize("e", [-5, -1, 0, 1, 2, 7])
    def test_power_matches_scalar(self, sd16, e):
        xs = elements(sd16)
        assert _as_elements(ArrayArithmetic(sd16).power(_as_arrays(xs), e)) == [power(sd16, x, e) for x in xs]

    def test_identity(self, d8):
        alpha, beta = ArrayArithmetic(d8).identity(3)
        assert alpha.tolist() == [0, 0, 0]
        assert beta.tolist() == [0, 0, 0]

    def test_overflow_guard(self):
        G = make_family(FamilyTag.DIHEDRAL, 2, 31)
        with pytest.raises(ArithmeticOverflowError):
            ArrayArithmetic(G)


class TestDecode:
    def test_row_major_order(self, d8):
        values = decode_tuples(d8, 2, 0, d8.order**2)
        first, second = values
        # tuple index t = i * |G| + j with i the first coordinate
        assert first[1].tolist()[:8] == [0] * 8
        assert (first[0][8], first[1][8]) == (0, 1)
        assert (second[0][9], second[1][9]) == (0, 1)

    def test_chunk_slice(self, d8):
        full = decode_tuples(d8, 2, 0, 64)
        part = decode_tuples(d8, 2, 10, 20)
        for i in range(2):
            assert full[i][0][10:20].tolist() == part[i][0].tolist()
            assert full[i][1][10:20].tolist() == part[i][1].tolist()


class TestChunks:
    def test_chunk_ranges_cover(self):
        assert chunk_ranges(10, 4) == [(0, 4), (4, 8), (8, 10)]
        assert chunk_ranges(0, 4) == []

    def test_count_chunk_totals(self, q8):
        counts = count_chunk((q8, parse("x1^2").letters, 1, 0, q8.order))
        assert counts.sum() == 8
        assert counts[q8.index_of(GroupElement(0, 0))] == 2
        assert counts[q8.index_of(GroupElement(2, 0))] == 6

    def test_merge_counts_is_exact(self):
        parts = [np.array([1, 2, 0]), np.array([3, 0, 5])]
        merged = merge_counts(parts, 3)
        assert merged == (4, 2, 5)
        assert all(type(n) is int for n in merged)

    def test_run_chunks_single_worker_keeps_order(self):
        assert run_chunks(abs, [-3, 1, -2], workers=1) == [3, 1, 2]

    def test_split_chunks_agree_with_single_chunk(self, d16):
        letters = parse("[x1,x2] x1^2").letters
        whole = count_chunk((d16, letters, 2, 0, 256))
        parts = [count_chunk((d16, letters, 2, s, e)) for s, e in chunk_ranges(256, 37)]
        assert merge_counts(parts, d16.order) == tuple(whole.tolist())
