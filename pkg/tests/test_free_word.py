"""Tests for src.free_word: evaluation checks use the Cayley oracle from conftest."""

import itertools

import pytest

from src.errors import PreconditionError, WordLimitError
from src.free_word import (
    MAX_VARIABLES,
    MAX_WORD_LENGTH,
    FreeWord,
    abelianized_exponents,
    collect_split,
    commutator_word,
    concat,
    exponent_gcd,
    invert,
    length,
    pad_arity,
    prefix_word,
    reduce_letters,
    render,
    variables,
)
from src.word_parser import parse


class TestFreeWord:
    def test_rejects_unreduced_letters(self):
        with pytest.raises(PreconditionError):
            FreeWord(letters=((1, 1), (1, 2)), arity_hint=1)

    def test_rejects_zero_exponent(self):
        with pytest.raises(PreconditionError):
            FreeWord(letters=((1, 0),), arity_hint=1)

    def test_rejects_small_arity(self):
        with pytest.raises(PreconditionError):
            FreeWord(letters=((2, 1),), arity_hint=1)

    def test_rejects_variable_zero(self):
        with pytest.raises(WordLimitError):
            FreeWord(letters=((0, 1),), arity_hint=1)

    def test_length_limit(self):
        letters = [(1 + i % 2, 1) for i in range(MAX_WORD_LENGTH + 1)]
        with pytest.raises(WordLimitError):
            reduce_letters(letters)

    def test_arity_cap(self):
        assert FreeWord(letters=((1, 1),), arity_hint=MAX_VARIABLES).arity_hint == MAX_VARIABLES
        with pytest.raises(WordLimitError):
            FreeWord(letters=((1, 1),), arity_hint=MAX_VARIABLES + 1)

    def test_reduction_is_confluent(self):
        letters = [(1, 1), (2, 1), (2, -1), (1, -1), (3, 2), (3, -2), (1, 1)]
        assert reduce_letters(letters) == ((1, 1),)
        assert reduce_letters(reduce_letters(letters[:3]) + tuple(letters[3:])) == ((1, 1),)


class TestHelpers:
    def test_render(self):
        assert render(parse("x1^2 x2^-1")) == "x1^2 x2^-1"
        assert render(FreeWord()) == "1"

    def test_length_and_variables(self):
        w = parse("x3^2 x1^-1 x3")
        assert length(w) == 4
        assert variables(w) == [1, 3]

    def test_invert_examples(self):
        assert invert(FreeWord()) == FreeWord()
        assert render(invert(parse("x1^2"))) == "x1^-2"
        assert render(invert(parse("x1 x2"))) == "x2^-1 x1^-1"

    def test_invert_is_involution(self):
        w = parse("[x1,x2,x3] x2^5")
        assert invert(invert(w)) == w

    def test_concat_reduces(self):
        assert concat(parse("x1 x2"), parse("x2^-1 x1")).letters == ((1, 2),)

    def test_commutator_word_matches_parser(self):
        assert commutator_word(parse("x1"), parse("x2")) == parse("[x1,x2]")


class TestAbelianization:
    def test_commutator_vanishes(self):
        assert abelianized_exponents(parse("[x1,x2]")) == (0, 0)

    def test_examples(self):
        assert abelianized_exponents(parse("x1^2 [x1,x2]")) == (2, 0)
        assert abelianized_exponents(parse("x1^3 x2^-1 x1")) == (4, -1)

    def test_homomorphism_on_concatenation(self):
        u, v = parse("x1^3 x2"), parse("x2^-4 [x1,x2] x1")
        total = abelianized_exponents(concat(u, v))
        assert total == tuple(a + b for a, b in zip(abelianized_exponents(u), abelianized_exponents(v)))

    def test_exponent_gcd(self):
        assert exponent_gcd(parse("x1^4 x2^6")) == 2
        assert exponent_gcd(parse("[x1,x2]")) == 0


class TestCollectSplit:
    def test_power(self):
        e, kappa = collect_split(parse("x1^2"))
        assert e == (2,)
        assert kappa.letters == ()

    def test_commutator_unchanged(self):
        e, kappa = collect_split(parse("[x1,x2]"))
        assert e == (0, 0)
        assert kappa == parse("[x1,x2]")

    def test_reduced_kappa(self):
        e, kappa = collect_split(parse("x1 x2 x1"))
        assert e == (2, 1)
        assert kappa == parse("x2^-1 x1^-1 x2 x1")
        assert abelianized_exponents(kappa) == (0, 0)

    @pytest.mark.parametrize("text", ["x1 x2 x1", "x1^3 x2^-1 x1 x2^2", "[x1,x2] x1^2", "x2 x1^-1 x2"])
    def test_evaluation_equality_on_d8(self, text, d8, cayley):
        table = cayley(d8)
        w = parse(text)
        e, kappa = collect_split(w)
        rebuilt = concat(prefix_word(e), kappa)
        for t in itertools.product(range(table.order), repeat=w.arity_hint):
            assert table.evaluate(w, t) == table.evaluate(rebuilt, t)


class TestPadArity:
    def test_examples(self):
        assert pad_arity(parse("x1"), 3).arity_hint == 3
        assert pad_arity(parse("x1"), 1) == parse("x1")
        padded = pad_arity(parse("[x1,x2]"), 5)
        assert padded.arity_hint == 5
        assert padded.letters == parse("[x1,x2]").letters

    def test_cannot_shrink(self):
        with pytest.raises(PreconditionError):
            pad_arity(parse("x1 x2"), 1)
