"""Parses word strings such as "x1^2 [x1, x2, x3] (x2 x3)^-1" into FreeWords.

Grammar (whitespace is insignificant):

    word := term+
    term := atom ['^' int]
    atom := 'x' int | '1' | '(' word ')' | '[' word (',' word)+ ']'

'[u, v, w]' is the left-normed commutator [[u, v], w] and [u, v] = u v u^-1 v^-1.
"""

import re
from dataclasses import dataclass

from src.errors import WordLimitError, WordSyntaxError
from src.free_word import (
    MAX_EXPONENT,
    MAX_VARIABLES,
    MAX_WORD_LENGTH,
    FreeWord,
    Letter,
    append_letter,
    invert_letters,
    reduce_letters,
)

TOKEN_PATTERN = re.compile(r"(?:(x)(\d+)|([+-]?\d+)|([\^()\[\],]))")
WHITESPACE = re.compile(r"\s*")


@dataclass
class Token:
    kind: str  # "var", "int", or the punctuation character itself
    text: str
    position: int
    value: int = 0


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while True:
        pos = WHITESPACE.match(text, pos).end()
        if pos >= len(text):
            break
        match = TOKEN_PATTERN.match(text, pos)
        if not match:
            raise WordSyntaxError(f"unexpected character {text[pos]!r}", text, pos)
        if match.group(1):
            start = match.start(1)
            index = int(match.group(2))
            if index == 0:
                raise WordSyntaxError("variable index must be >= 1", text, start)
            if index > MAX_VARIABLES:
                raise WordLimitError(f"variable x{index} at position {start} exceeds x{MAX_VARIABLES}")
            tokens.append(Token("var", match.group(0), start, index))
        elif match.group(3):
            start = match.start(3)
            value = int(match.group(3))
            if abs(value) > MAX_EXPONENT:
                raise WordLimitError(f"exponent {value} at position {start} exceeds {MAX_EXPONENT}")
            tokens.append(Token("int", match.group(3), start, value))
        else:
            start = match.start(4)
            tokens.append(Token(match.group(4), match.group(4), start))
        pos = match.end()
    return tokens


def _cyclic_core(letters: list[Letter]) -> tuple[list[Letter], list[Letter]]:
    """Split a reduced word as c v c^-1 with v cyclically reduced; returns (c, v)."""
    prefix: list[Letter] = []
    core = list(letters)
    while len(core) >= 2 and core[0][0] == core[-1][0]:
        var, first = core[0]
        last = core[-1][1]
        if first == -last:
            prefix.append(core[0])
            core = core[1:-1]
        else:
            # x^f m x^l = x^-l (x^(f+l) m) x^l, and m cannot end in x
            prefix.append((var, -last))
            core = [(var, first + last)] + core[1:-1]
    return prefix, core


def _raise_power(letters: tuple[Letter, ...], e: int) -> tuple[Letter, ...]:
    if not letters or e == 0:
        return ()
    base = list(letters) if e > 0 else invert_letters(letters)
    prefix, core = _cyclic_core(base)
    if len(core) == 1:
        var, exp = core[0]
        total = exp * abs(e)
        if abs(total) > MAX_EXPONENT:
            raise WordLimitError(f"exponent {total} exceeds {MAX_EXPONENT}")
        powered = [(var, total)]
    else:
        if len(core) * abs(e) > MAX_WORD_LENGTH:
            raise WordLimitError(f"power expands beyond {MAX_WORD_LENGTH} letters")
        powered = core * abs(e)
    return reduce_letters(prefix + powered + invert_letters(prefix))


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.index = 0
        self.max_var = 0

    def peek(self) -> Token | None:
        return self.tokens[self.index] if self.index < len(self.tokens) else None

    def fail(self, message: str) -> WordSyntaxError:
        token = self.peek()
        position = token.position if token else len(self.text)
        return WordSyntaxError(message, self.text, position)

    def expect(self, kind: str) -> Token:
        token = self.peek()
        if token is None or token.kind != kind:
            raise self.fail(f"expected {kind!r}")
        self.index += 1
        return token

    def starts_atom(self, token: Token | None) -> bool:
        if token is None:
            return False
        return token.kind in ("var", "(", "[") or (token.kind == "int" and token.text == "1")

    def word(self) -> tuple[Letter, ...]:
        if not self.starts_atom(self.peek()):
            raise self.fail("expected a term")
        stack: list[Letter] = []
        while self.starts_atom(self.peek()):
            for letter in self.term():
                append_letter(stack, letter)
        return reduce_letters(stack)

    def term(self) -> tuple[Letter, ...]:
        atom = self.atom()
        token = self.peek()
        if token is not None and token.kind == "^":
            self.index += 1
            exponent = self.expect("int")
            return _raise_power(atom, exponent.value)
        return atom

    def atom(self) -> tuple[Letter, ...]:
        token = self.peek()
        self.index += 1
        if token.kind == "var":
            self.max_var = max(self.max_var, token.value)
            return ((token.value, 1),)
        if token.kind == "int":
            return ()
        if token.kind == "(":
            inner = self.word()
            self.expect(")")
            return inner
        # left-normed commutator bracket
        acc = self.word()
        if self.peek() is None or self.peek().kind != ",":
            raise self.fail("commutator needs at least two entries")
        while self.peek() is not None and self.peek().kind == ",":
            self.index += 1
            right = self.word()
            acc = reduce_letters(acc + right + tuple(invert_letters(acc)) + tuple(invert_letters(right)))
        self.expect("]")
        return acc

    def parse(self) -> FreeWord:
        letters = self.word()
        if self.peek() is not None:
            raise self.fail(f"unexpected {self.peek().text!r}")
        return FreeWord.from_letters(letters, self.max_var)


def parse(text: str, arity: int | None = None) -> FreeWord:
    """Parse and freely reduce a word; arity defaults to the largest index mentioned."""
    word = _Parser(text).parse()
    if arity is not None:
        if arity < word.arity_hint:
            raise WordLimitError(f"arity {arity} is below the largest variable x{word.arity_hint}")
        word = FreeWord(letters=word.letters, arity_hint=arity)
    return word
