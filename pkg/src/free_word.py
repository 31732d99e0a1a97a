"""Reduced words of the free group F_k on x1, ..., xk."""

from dataclasses import dataclass
from math import gcd
from typing import Iterable

from src.errors import PreconditionError, WordLimitError

MAX_WORD_LENGTH = 10_000
MAX_EXPONENT = 2**63 - 1
MAX_VARIABLES = 256

Letter = tuple[int, int]  # (variable index >= 1, nonzero exponent)


def _checked_sum(a: int, b: int) -> int:
    total = a + b
    if abs(total) > MAX_EXPONENT:
        raise WordLimitError(f"exponent {total} exceeds {MAX_EXPONENT}")
    return total


def append_letter(stack: list[Letter], letter: Letter) -> None:
    """Push one letter onto an already reduced stack, cancelling in place."""
    var, exp = letter
    if stack and stack[-1][0] == var:
        merged = _checked_sum(stack[-1][1], exp)
        if merged == 0:
            stack.pop()
        else:
            stack[-1] = (var, merged)
    elif exp != 0:
        stack.append((var, exp))


def reduce_letters(letters: Iterable[Letter]) -> tuple[Letter, ...]:
    """Free reduction: merge equal neighbours, drop zero exponents."""
    stack: list[Letter] = []
    for letter in letters:
        append_letter(stack, letter)
    if len(stack) > MAX_WORD_LENGTH:
        raise WordLimitError(f"word has {len(stack)} letters, limit is {MAX_WORD_LENGTH}")
    return tuple(stack)


def invert_letters(letters: Iterable[Letter]) -> list[Letter]:
    return [(var, -exp) for var, exp in reversed(list(letters))]


@dataclass(frozen=True)
class FreeWord:
    letters: tuple[Letter, ...] = ()
    arity_hint: int = 0

    def __post_init__(self):
        if self.arity_hint > MAX_VARIABLES:
            raise WordLimitError(f"arity {self.arity_hint} exceeds {MAX_VARIABLES} variables")
        for i, (var, exp) in enumerate(self.letters):
            if var < 1:
                raise WordLimitError(f"variable index must be >= 1, got {var}")
            if exp == 0:
                raise PreconditionError("letters must have nonzero exponents")
            if i and self.letters[i - 1][0] == var:
                raise PreconditionError("letters are not freely reduced")
            if var > self.arity_hint:
                raise PreconditionError(f"arity_hint {self.arity_hint} below variable x{var}")

    @classmethod
    def from_letters(cls, letters: Iterable[Letter], arity: int | None = None) -> "FreeWord":
        reduced = reduce_letters(letters)
        top = max((var for var, _ in reduced), default=0)
        return cls(letters=reduced, arity_hint=max(top, arity or 0))

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return render(self)


def render(w: FreeWord) -> str:
    if not w.letters:
        return "1"
    return " ".join(f"x{var}" if exp == 1 else f"x{var}^{exp}" for var, exp in w.letters)


def length(w: FreeWord) -> int:
    """Length in the generators x_i^(+-1)."""
    return sum(abs(exp) for _, exp in w.letters)


def variables(w: FreeWord) -> list[int]:
    return sorted({var for var, _ in w.letters})


def invert(w: FreeWord) -> FreeWord:
    return FreeWord(letters=tuple(invert_letters(w.letters)), arity_hint=w.arity_hint)


def concat(u: FreeWord, v: FreeWord) -> FreeWord:
    return FreeWord.from_letters(u.letters + v.letters, max(u.arity_hint, v.arity_hint))


def commutator_word(u: FreeWord, v: FreeWord) -> FreeWord:
    """[u, v] = u v u^-1 v^-1."""
    letters = u.letters + v.letters + tuple(invert_letters(u.letters)) + tuple(invert_letters(v.letters))
    return FreeWord.from_letters(letters, max(u.arity_hint, v.arity_hint))


def abelianized_exponents(w: FreeWord) -> tuple[int, ...]:
    sums = [0] * w.arity_hint
    for var, exp in w.letters:
        sums[var - 1] += exp
    return tuple(sums)


def exponent_gcd(w: FreeWord) -> int:
    """gcd of the exponent sums; 0 when every sum vanishes."""
    d = 0
    for e in abelianized_exponents(w):
        d = gcd(d, e)
    return d


def collect_split(w: FreeWord) -> tuple[tuple[int, ...], FreeWord]:
    """Split w = x1^e1 ... xk^ek * kappa with kappa in the derived subgroup.

    kappa is the formal product (x1^e1 ... xk^ek)^-1 w, freely reduced.
    """
    e = abelianized_exponents(w)
    prefix = [(i + 1, ei) for i, ei in enumerate(e) if ei]
    kappa = FreeWord.from_letters(invert_letters(prefix) + list(w.letters), w.arity_hint)
    return e, kappa


def prefix_word(e: tuple[int, ...]) -> FreeWord:
    return FreeWord.from_letters([(i + 1, ei) for i, ei in enumerate(e) if ei], len(e))


def pad_arity(w: FreeWord, mu: int) -> FreeWord:
    """Same letters in mu variables; the extra variables are dummies."""
    if mu < w.arity_hint:
        raise PreconditionError(f"cannot pad arity {w.arity_hint} down to {mu}")
    return FreeWord(letters=w.letters, arity_hint=mu)
