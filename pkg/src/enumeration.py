"""Vectorized normal-form arithmetic and chunked enumeration of tuple spaces."""

import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Sequence, TypeVar

import numpy as np

from src.errors import ArithmeticOverflowError
from src.metacyclic import MetacyclicPresentation

logger = logging.getLogger(__name__)

# products alpha * r^beta stay below p^(2n) < 2^62
MAX_VECTOR_MODULUS = 2**31

T = TypeVar("T")
R = TypeVar("R")

Pair = tuple[np.ndarray, np.ndarray]


class ArrayArithmetic:
    """multiply/inverse/power on int64 arrays of normal forms (alpha, beta)."""

    def __init__(self, G: MetacyclicPresentation):
        if G.pn >= MAX_VECTOR_MODULUS or G.pm >= MAX_VECTOR_MODULUS:
            raise ArithmeticOverflowError(f"{G.label}: p^n={G.pn} too large for int64 kernels")
        self.G = G
        self.pn = G.pn
        self.pm = G.pm
        self.carry = G.carry
        self.r_pow = np.array([pow(G.r, b, G.pn) for b in range(G.pm)], dtype=np.int64)
        self.r_inv_pow = np.array([pow(G.r, -b, G.pn) for b in range(G.pm)], dtype=np.int64)

    def identity(self, size: int) -> Pair:
        return np.zeros(size, dtype=np.int64), np.zeros(size, dtype=np.int64)

    def multiply(self, x: Pair, y: Pair) -> Pair:
        xa, xb = x
        ya, yb = y
        s = xb + yb
        carries = (s >= self.pm).astype(np.int64)
        beta = s - carries * self.pm
        alpha = (xa + ya * self.r_pow[xb] + carries * self.carry) % self.pn
        return alpha, beta

    def inverse(self, x: Pair) -> Pair:
        xa, xb = x
        beta = (-xb) % self.pm
        carries = ((xb + beta) >= self.pm).astype(np.int64)
        alpha = (-(xa + carries * self.carry) % self.pn) * self.r_inv_pow[xb] % self.pn
        return alpha, beta

    def power(self, x: Pair, e: int) -> Pair:
        if e < 0:
            x, e = self.inverse(x), -e
        result = self.identity(len(x[0]))
        while e:
            if e & 1:
                result = self.multiply(result, x)
            e >>= 1
            if e:
                x = self.multiply(x, x)
        return result

    def evaluate(self, letters: Sequence[tuple[int, int]], values: Sequence[Pair], size: int) -> Pair:
        """Evaluate a reduced word letter by letter on arrays of tuples."""
        acc = self.identity(size)
        cache: dict[tuple[int, int], Pair] = {}
        for var, exp in letters:
            key = (var, exp)
            if key not in cache:
                cache[key] = self.power(values[var - 1], exp)
            acc = self.multiply(acc, cache[key])
        return acc


def decode_tuples(G: MetacyclicPresentation, k: int, start: int, end: int) -> list[Pair]:
    """Row-major decode of tuple indices [start, end) into k arrays of normal forms."""
    order = G.order
    t = np.arange(start, end, dtype=np.int64)
    values: list[Pair] = [None] * k  # type: ignore[list-item]
    for i in range(k - 1, -1, -1):
        t, digit = np.divmod(t, order)
        alpha, beta = np.divmod(digit, G.pm)
        values[i] = (alpha, beta)
    return values


def count_chunk(payload: tuple) -> np.ndarray:
    """Dense count array of word values over one contiguous chunk of G^k."""
    G, letters, k, start, end = payload
    arith = ArrayArithmetic(G)
    values = decode_tuples(G, k, start, end)
    alpha, beta = arith.evaluate(letters, values, end - start)
    return np.bincount(alpha * G.pm + beta, minlength=G.order).astype(np.int64)


def chunk_ranges(total: int, chunk_size: int) -> list[tuple[int, int]]:
    return [(start, min(start + chunk_size, total)) for start in range(0, total, chunk_size)]


def run_chunks(fn: Callable[[T], R], payloads: list[T], workers: int = 1) -> list[R]:
    """Apply fn to every payload, preserving payload order whatever the worker count."""
    if workers <= 1 or len(payloads) <= 1:
        return [fn(payload) for payload in payloads]
    logger.debug("dispatching %d chunks to %d workers", len(payloads), workers)
    with ProcessPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(fn, payloads))


def merge_counts(parts: list[np.ndarray], size: int) -> tuple[int, ...]:
    """Sum partial count arrays in chunk order into exact Python integers."""
    total = [0] * size
    for part in parts:
        for index, value in enumerate(part.tolist()):
            total[index] += value
    return tuple(total)
