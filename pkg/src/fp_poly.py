"""Sparse multivariate polynomials over F_p in reduced form (every exponent < p).

Interpolation and evaluation work on the dense value tensor of shape (p,) * num_vars,
transforming one axis at a time, so no intermediate grows beyond p^num_vars entries.
"""

import random
from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np
from sympy import isprime

from src.errors import BudgetExceededError, ParameterConstraintError, PreconditionError

DEFAULT_MAX_POINTS = 2**20

Exponents = tuple[int, ...]


def reduce_exponent(e: int, p: int) -> int:
    """t^p = t on F_p: e > 0 maps to ((e - 1) mod (p - 1)) + 1."""
    if e == 0:
        return 0
    return (e - 1) % (p - 1) + 1


@dataclass(frozen=True)
class FpPolynomial:
    p: int
    num_vars: int
    terms: tuple[tuple[Exponents, int], ...] = field(default=())

    def __post_init__(self):
        if not isprime(self.p):
            raise ParameterConstraintError(f"p={self.p} is not prime")
        for exps, coeff in self.terms:
            if len(exps) != self.num_vars:
                raise ParameterConstraintError(f"term {exps} does not have {self.num_vars} exponents")
            if not all(0 <= e < self.p for e in exps) or not 1 <= coeff < self.p:
                raise ParameterConstraintError(f"term {exps}:{coeff} is not reduced mod {self.p}")

    @property
    def degree(self) -> Optional[int]:
        """Total degree; None stands for the zero polynomial's -infinity."""
        if not self.terms:
            return None
        return max(sum(exps) for exps, _ in self.terms)

    @property
    def is_constant(self) -> bool:
        return self.degree is None or self.degree == 0

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "num_vars": self.num_vars,
            "degree": self.degree,
            "terms": [{"exps": list(exps), "coeff": coeff} for exps, coeff in self.terms],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "FpPolynomial":
        return reduce_terms(
            data["p"],
            data["num_vars"],
            ((tuple(t["exps"]), t["coeff"]) for t in data["terms"]),
        )

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exps, coeff in self.terms:
            factors = [f"t{i + 1}" if e == 1 else f"t{i + 1}^{e}" for i, e in enumerate(exps) if e]
            if coeff != 1 or not factors:
                factors.insert(0, str(coeff))
            parts.append("*".join(factors))
        return " + ".join(parts)


def reduce_terms(p: int, num_vars: int, terms: Iterable[tuple[Sequence[int], int]]) -> FpPolynomial:
    """Canonical reduced polynomial from arbitrary exponents and integer coefficients."""
    collected: dict[Exponents, int] = {}
    for exps, coeff in terms:
        key = tuple(reduce_exponent(e, p) for e in exps)
        if len(key) != num_vars:
            raise ParameterConstraintError(f"term {tuple(exps)} does not have {num_vars} exponents")
        collected[key] = (collected.get(key, 0) + coeff) % p
    kept = tuple(sorted((exps, c) for exps, c in collected.items() if c))
    return FpPolynomial(p=p, num_vars=num_vars, terms=kept)


def zero(p: int, num_vars: int) -> FpPolynomial:
    return FpPolynomial(p=p, num_vars=num_vars)


def add_constant(q: FpPolynomial, c: int) -> FpPolynomial:
    return reduce_terms(q.p, q.num_vars, list(q.terms) + [((0,) * q.num_vars, c)])


def pad(q: FpPolynomial, num_vars: int) -> FpPolynomial:
    """The same polynomial in extra, unused variables."""
    if num_vars < q.num_vars:
        raise PreconditionError(f"cannot pad {q.num_vars} variables down to {num_vars}")
    extra = (0,) * (num_vars - q.num_vars)
    return FpPolynomial(p=q.p, num_vars=num_vars, terms=tuple((exps + extra, c) for exps, c in q.terms))


def evaluate(q: FpPolynomial, point: Sequence[int]) -> int:
    if len(point) != q.num_vars:
        raise PreconditionError(f"point has {len(point)} coordinates, polynomial has {q.num_vars} variables")
    total = 0
    for exps, coeff in q.terms:
        term = coeff
        for x, e in zip(point, exps):
            term = term * pow(x, e, q.p) % q.p
        total += term
    return total % q.p


# ---------------------------------------------------------------------------
# Dense tensors
# ---------------------------------------------------------------------------

def _check_points(p: int, num_vars: int, max_points: int) -> None:
    if p**num_vars > max_points:
        raise BudgetExceededError(f"F_{p}^{num_vars} table", p**num_vars, max_points)


def _transform(tensor: np.ndarray, matrix: np.ndarray, p: int) -> np.ndarray:
    for axis in range(tensor.ndim):
        tensor = np.moveaxis(np.tensordot(matrix, tensor, axes=([1], [axis])), 0, axis) % p
    return tensor


def _indicator_matrix(p: int) -> np.ndarray:
    """M[e, c] = coefficient of t^e in 1 - (t - c)^(p-1)."""
    M = np.zeros((p, p), dtype=np.int64)
    for c in range(p):
        for e in range(p):
            M[e, c] = ((1 if e == 0 else 0) - comb(p - 1, e) * pow(-c, p - 1 - e)) % p
    return M


def _power_matrix(p: int) -> np.ndarray:
    """E[c, e] = c^e mod p with 0^0 = 1."""
    return np.array([[pow(c, e, p) for e in range(p)] for c in range(p)], dtype=np.int64)


def value_table(q: FpPolynomial, max_points: int = DEFAULT_MAX_POINTS) -> np.ndarray:
    """Values at all p^num_vars points, row-major with t1 most significant."""
    _check_points(q.p, q.num_vars, max_points)
    coeffs = np.zeros((q.p,) * q.num_vars, dtype=np.int64)
    for exps, c in q.terms:
        coeffs[exps] = c
    return _transform(coeffs, _power_matrix(q.p), q.p).reshape(-1)


def interpolate(
    p: int,
    num_vars: int,
    table: Mapping[tuple[int, ...], int] | Sequence[int] | np.ndarray,
    max_points: int = DEFAULT_MAX_POINTS,
) -> FpPolynomial:
    """Unique reduced polynomial agreeing with a total table F_p^num_vars -> F_p.

    Expands sum_c f(c) prod_i (1 - (t_i - c_i)^(p-1)) one variable at a time.
    """
    _check_points(p, num_vars, max_points)
    size = p**num_vars
    if isinstance(table, Mapping):
        dense = np.zeros(size, dtype=np.int64)
        seen = 0
        for point, value in table.items():
            if len(point) != num_vars or not all(0 <= x < p for x in point):
                raise PreconditionError(f"table point {point} is not in F_{p}^{num_vars}")
            dense[int(np.ravel_multi_index(tuple(point), (p,) * num_vars)) if num_vars else 0] = value % p
            seen += 1
        if seen != size:
            raise PreconditionError(f"incomplete table: {seen} of {size} points")
    else:
        dense = np.asarray(table, dtype=np.int64).reshape(-1) % p
        if dense.size != size:
            raise PreconditionError(f"incomplete table: {dense.size} of {size} points")
    if num_vars == 0:
        return reduce_terms(p, 0, [((), int(dense[0]))])
    coeffs = _transform(dense.reshape((p,) * num_vars), _indicator_matrix(p), p)
    terms = [(tuple(int(e) for e in idx), int(coeffs[tuple(idx)])) for idx in np.argwhere(coeffs)]
    return reduce_terms(p, num_vars, terms)


def count_solutions(q: FpPolynomial, target: int, max_points: int = DEFAULT_MAX_POINTS) -> int:
    return int(np.count_nonzero(value_table(q, max_points) == target % q.p))


# ---------------------------------------------------------------------------
# Chevalley-Warning
# ---------------------------------------------------------------------------

@dataclass
class FibreRow:
    target: int
    solutions: int
    bound: int

    @property
    def passed(self) -> bool:
        return self.solutions >= self.bound

    def to_dict(self) -> dict:
        return {"target": self.target, "solutions": self.solutions, "bound": self.bound, "pass": self.passed}


@dataclass
class ChevalleyWarningReport:
    p: int
    num_vars: int
    degree: Optional[int]
    applicable: bool
    reason: str = ""
    rows: list[FibreRow] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.applicable and all(row.passed for row in self.rows)

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "num_vars": self.num_vars,
            "degree": self.degree,
            "applicable": self.applicable,
            "reason": self.reason,
            "pass": self.passed,
            "rows": [row.to_dict() for row in self.rows],
        }


def chevalley_warning_check(q: FpPolynomial, max_points: int = DEFAULT_MAX_POINTS) -> ChevalleyWarningReport:
    """Every nonempty fibre q = i must have at least p^(num_vars - degree) points."""
    d = q.degree
    report = ChevalleyWarningReport(p=q.p, num_vars=q.num_vars, degree=d, applicable=False)
    if q.is_constant:
        report.reason = "constant polynomial"
        return report
    if d >= q.num_vars:
        report.reason = f"degree {d} >= {q.num_vars} variables"
        return report
    report.applicable = True
    bound = q.p ** (q.num_vars - d)
    for i in range(q.p):
        solutions = count_solutions(add_constant(q, -i), 0, max_points)
        if solutions:
            report.rows.append(FibreRow(target=i, solutions=solutions, bound=bound))
    return report


def random_polynomial(p: int, num_vars: int, max_degree: int, rng: random.Random, num_terms: int = 4) -> FpPolynomial:
    """Seeded random reduced polynomial of total degree in [1, max_degree]."""
    if max_degree < 1 or num_vars < 1:
        raise PreconditionError("random polynomials need num_vars >= 1 and max_degree >= 1")
    terms = []
    for _ in range(num_terms):
        budget = rng.randint(1, max_degree)
        exps = [0] * num_vars
        for _ in range(budget):
            i = rng.randrange(num_vars)
            if exps[i] < p - 1:
                exps[i] += 1
        terms.append((tuple(exps), rng.randrange(1, p)))
    q = reduce_terms(p, num_vars, terms)
    if q.is_constant:
        # keep the degree in range when every term cancelled
        return reduce_terms(p, num_vars, list(q.terms) + [(tuple(1 if i == 0 else 0 for i in range(num_vars)), 1)])
    return q
