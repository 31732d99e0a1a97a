"""Exact arithmetic for finite metacyclic p-groups.

Groups are given by the presentation

    G = < a, b | a^(p^n) = 1, b^(p^m) = a^(p^(n - epsilon)), b a b^-1 = a^r >

and every element is held in its normal form a^alpha b^beta with
0 <= alpha < p^n and 0 <= beta < p^m. No Cayley table is ever built; products
are computed directly from b^beta a^alpha = a^(alpha r^beta) b^beta plus one
a^(p^(n - epsilon)) per carry of the b-exponent past p^m.
"""

from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import NamedTuple, Optional

from sympy import isprime

from src.errors import BudgetExceededError, ParameterConstraintError, PreconditionError

DEFAULT_MAX_ORDER = 2**12


class FamilyTag(str, Enum):
    DIHEDRAL = "dihedral"
    GENERALISED_QUATERNION = "quaternion"
    SEMIDIHEDRAL = "semidihedral"
    MODULAR_2 = "modular2"
    MODULAR_ODD = "modular"
    CUSTOM = "custom"

    @classmethod
    def parse(cls, text: str) -> "FamilyTag":
        """Accept either the value ("quaternion") or the member name."""
        key = text.strip().lower().replace("-", "_")
        aliases = {
            "generalised_quaternion": cls.GENERALISED_QUATERNION,
            "generalized_quaternion": cls.GENERALISED_QUATERNION,
            "modular_2": cls.MODULAR_2,
            "modular_odd": cls.MODULAR_ODD,
        }
        if key in aliases:
            return aliases[key]
        for tag in cls:
            if tag.value == key or tag.name.lower() == key:
                return tag
        raise ParameterConstraintError(f"unknown family {text!r}")


class GroupElement(NamedTuple):
    """Normal form a^alpha b^beta; both residues are kept reduced."""

    alpha: int
    beta: int

    def __str__(self) -> str:
        return f"({self.alpha},{self.beta})"


class PresentationType(NamedTuple):
    sign: str  # "+" for r = p^(n-delta) + 1, "-" for r = p^(n-delta) - 1
    delta: int


@dataclass(frozen=True)
class MetacyclicPresentation:
    p: int
    n: int
    m: int
    epsilon: int
    r: int
    family_tag: FamilyTag = FamilyTag.CUSTOM
    # derived presentations (quotients) skip the class-2 epsilon = 1 rule
    canonical: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        p, n, m, eps, r = self.p, self.n, self.m, self.epsilon, self.r
        if not isprime(p):
            raise ParameterConstraintError(f"p={p} is not prime")
        if n < 1 or m < 1:
            raise ParameterConstraintError(f"n and m must be positive, got n={n}, m={m}")
        if not 0 <= eps <= n:
            raise ParameterConstraintError(f"epsilon={eps} outside [0, {n}]")
        pn = p**n
        if not 1 <= r < pn:
            raise ParameterConstraintError(f"r={r} outside [1, {pn})")
        if r % p == 0:
            raise ParameterConstraintError(f"gcd(r, p) != 1 for r={r}, p={p}")
        if (p ** (n - eps) * (r - 1)) % pn != 0:
            raise ParameterConstraintError(
                f"p^n does not divide p^(n-epsilon)(r-1) for n={n}, epsilon={eps}, r={r}"
            )
        if (pow(r, p**m, pn) - 1) % pn != 0:
            raise ParameterConstraintError(f"p^n does not divide r^(p^m) - 1 for r={r}")
        # A class-2 presentation with epsilon = 1 is only kept for Q8.
        if self.canonical and n >= 2 and eps == 1 and r == 1 + p ** (n - 1) and (p, n, m) != (2, 2, 1):
            raise ParameterConstraintError(
                f"r = 1 + p^(n-1) with epsilon = 1 is only admitted for Q8, got p={p}, n={n}, m={m}"
            )

    @property
    def pn(self) -> int:
        return self.p**self.n

    @property
    def pm(self) -> int:
        return self.p**self.m

    @property
    def order(self) -> int:
        return self.p ** (self.n + self.m)

    @property
    def carry(self) -> int:
        """a-exponent contributed by b^(p^m)."""
        return self.p ** (self.n - self.epsilon) % self.pn

    @property
    def key(self) -> tuple[int, int, int, int, int]:
        return (self.p, self.n, self.m, self.epsilon, self.r)

    @property
    def label(self) -> str:
        tag, order = self.family_tag, self.order
        if tag is FamilyTag.DIHEDRAL:
            return f"D{order}"
        if tag is FamilyTag.GENERALISED_QUATERNION:
            return f"Q{order}"
        if tag is FamilyTag.SEMIDIHEDRAL:
            return f"SD{order}"
        if tag in (FamilyTag.MODULAR_2, FamilyTag.MODULAR_ODD):
            return f"M({self.p},{self.n})"
        return f"G({self.p},{self.n},{self.m},{self.epsilon},{self.r})"

    def element(self, alpha: int, beta: int) -> GroupElement:
        """Normal form of a^alpha b^beta for arbitrary integer exponents."""
        return multiply(self, GroupElement(alpha % self.pn, 0), power(self, B_GEN, beta))

    def index_of(self, x: GroupElement) -> int:
        return x.alpha * self.pm + x.beta

    def element_at(self, index: int) -> GroupElement:
        alpha, beta = divmod(index, self.pm)
        return GroupElement(alpha, beta)

    def to_record(self) -> dict:
        return {
            "p": self.p,
            "n": self.n,
            "m": self.m,
            "epsilon": self.epsilon,
            "r": self.r,
            "family_tag": self.family_tag.value,
        }


IDENTITY = GroupElement(0, 0)
A_GEN = GroupElement(1, 0)
B_GEN = GroupElement(0, 1)


# ---------------------------------------------------------------------------
# Families
# ---------------------------------------------------------------------------

def make_family(family: FamilyTag, p: int, n: int) -> MetacyclicPresentation:
    """The five families of nonabelian p-groups with a cyclic maximal subgroup (m = 1)."""
    family = FamilyTag.parse(family) if isinstance(family, str) else family
    if family is FamilyTag.CUSTOM:
        raise ParameterConstraintError("CUSTOM has no family constructor; give (p, n, m, epsilon, r)")

    if family in (FamilyTag.DIHEDRAL, FamilyTag.GENERALISED_QUATERNION, FamilyTag.SEMIDIHEDRAL, FamilyTag.MODULAR_2):
        if p != 2:
            raise ParameterConstraintError(f"{family.value} requires p = 2, got p={p}")
    elif not isprime(p) or p == 2:
        raise ParameterConstraintError(f"{family.value} requires an odd prime, got p={p}")

    min_n = 3 if family is FamilyTag.SEMIDIHEDRAL else 2
    if n < min_n:
        raise ParameterConstraintError(f"{family.value} requires n >= {min_n}, got n={n}")

    if family is FamilyTag.DIHEDRAL:
        eps, r = 0, 2**n - 1
    elif family is FamilyTag.GENERALISED_QUATERNION:
        eps, r = 1, 2**n - 1
    elif family is FamilyTag.SEMIDIHEDRAL:
        eps, r = 0, 2 ** (n - 1) - 1
    else:
        eps, r = 0, p ** (n - 1) + 1
    return MetacyclicPresentation(p=p, n=n, m=1, epsilon=eps, r=r, family_tag=family)


# ---------------------------------------------------------------------------
# Arithmetic
# ---------------------------------------------------------------------------

def multiply(G: MetacyclicPresentation, x: GroupElement, y: GroupElement) -> GroupElement:
    carries, beta = divmod(x.beta + y.beta, G.pm)
    alpha = (x.alpha + y.alpha * pow(G.r, x.beta, G.pn) + carries * G.carry) % G.pn
    return GroupElement(alpha, beta)


def inverse(G: MetacyclicPresentation, x: GroupElement) -> GroupElement:
    beta = -x.beta % G.pm
    carries = (x.beta + beta) // G.pm
    alpha = -(x.alpha + carries * G.carry) * pow(G.r, -x.beta, G.pn) % G.pn
    return GroupElement(alpha, beta)


def power(G: MetacyclicPresentation, x: GroupElement, e: int) -> GroupElement:
    if e < 0:
        x, e = inverse(G, x), -e
    result = IDENTITY
    while e:
        if e & 1:
            result = multiply(G, result, x)
        x = multiply(G, x, x)
        e >>= 1
    return result


def commutator(G: MetacyclicPresentation, x: GroupElement, y: GroupElement) -> GroupElement:
    """[x, y] = x y x^-1 y^-1."""
    xy = multiply(G, x, y)
    return multiply(G, multiply(G, xy, inverse(G, x)), inverse(G, y))


def conjugate(G: MetacyclicPresentation, x: GroupElement, h: GroupElement) -> GroupElement:
    """h x h^-1."""
    return multiply(G, multiply(G, h, x), inverse(G, h))


def order_of(G: MetacyclicPresentation, x: GroupElement) -> int:
    y, k = x, 1
    while y != IDENTITY:
        y = multiply(G, y, x)
        k += 1
    return k


def special_power_pn1(G: MetacyclicPresentation, x: GroupElement) -> GroupElement:
    """(a^alpha b^beta)^(p^(n-1)) = a^(alpha (1 + r^beta + ... + r^((p^(n-1) - 1) beta))).

    Only valid when b^(p^(n-1)) = 1.
    """
    steps = G.p ** (G.n - 1)
    if power(G, B_GEN, steps) != IDENTITY:
        raise PreconditionError(f"b^(p^(n-1)) != 1 in {G.label}")
    ratio = pow(G.r, x.beta, G.pn)
    total, term = 0, 1
    for _ in range(steps):
        total = (total + term) % G.pn
        term = term * ratio % G.pn
    return GroupElement(x.alpha * total % G.pn, 0)


# ---------------------------------------------------------------------------
# Structure
# ---------------------------------------------------------------------------

def identity(G: MetacyclicPresentation) -> GroupElement:
    return IDENTITY


def elements(G: MetacyclicPresentation, max_order: int = DEFAULT_MAX_ORDER) -> list[GroupElement]:
    if G.order > max_order:
        raise BudgetExceededError(f"element enumeration of {G.label}", G.order, max_order)
    return [GroupElement(alpha, beta) for alpha in range(G.pn) for beta in range(G.pm)]


def center_Z(G: MetacyclicPresentation) -> GroupElement:
    """Generator a^(p^(n-1)) of Z, the unique subgroup of order p in <a>."""
    return GroupElement(G.p ** (G.n - 1), 0)


def z_elements(G: MetacyclicPresentation) -> list[GroupElement]:
    z = center_Z(G).alpha
    return [GroupElement(i * z, 0) for i in range(G.p)]


def is_abelian(G: MetacyclicPresentation) -> bool:
    return G.r % G.pn == 1


def quotient_by_Z(G: MetacyclicPresentation) -> MetacyclicPresentation:
    """Presentation of G/Z, matched to the projection (alpha, beta) -> (alpha mod p^(n-1), beta)."""
    if G.n < 2:
        raise PreconditionError(
            f"{G.label}/Z is cyclic of order p^m = {G.pm} and has no presentation with n' >= 1"
        )
    n = G.n - 1
    # keep p^(n'-eps') = p^(n-eps) when that power survives modulo p^(n-1)
    eps = G.epsilon - 1 if G.epsilon >= 2 else 0
    return MetacyclicPresentation(p=G.p, n=n, m=G.m, epsilon=eps, r=G.r % G.p**n, canonical=False)


def project_to_quotient(G: MetacyclicPresentation, x: GroupElement) -> GroupElement:
    return GroupElement(x.alpha % G.p ** (G.n - 1), x.beta)


def presentation_type(G: MetacyclicPresentation) -> Optional[PresentationType]:
    """(sign, delta) with r = p^(n-delta) +- 1 when r has that shape; never stored."""
    if G.r == 1:
        return PresentationType("+", 0)
    for sign, gap in (("+", G.r - 1), ("-", G.r + 1)):
        for j in range(G.n + 1):
            if G.p**j == gap:
                return PresentationType(sign, G.n - j)
    return None


def intersection_AB(G: MetacyclicPresentation) -> list[GroupElement]:
    """Elements of <a> that are powers of b."""
    found = [IDENTITY]
    y = multiply(G, B_GEN, IDENTITY)
    while y != IDENTITY:
        if y.beta == 0:
            found.append(y)
        y = multiply(G, y, B_GEN)
    return sorted(found)


def is_split(G: MetacyclicPresentation) -> bool:
    return intersection_AB(G) == [IDENTITY]


def _subgroup_closure(G: MetacyclicPresentation, generators) -> set[GroupElement]:
    gens = sorted({g for g in generators if g != IDENTITY})
    group = {IDENTITY}
    frontier = [IDENTITY]
    while frontier:
        grown = []
        for x in frontier:
            for g in gens:
                y = multiply(G, x, g)
                if y not in group:
                    group.add(y)
                    grown.append(y)
        frontier = grown
    return group


def lower_central_series(G: MetacyclicPresentation, max_order: int = DEFAULT_MAX_ORDER) -> list[set[GroupElement]]:
    """gamma_1 = G, gamma_(i+1) = <[g, h] : g in gamma_i, h in G>, down to the trivial group."""
    everything = elements(G, max_order)
    series = [set(everything)]
    while len(series[-1]) > 1:
        current = series[-1]
        brackets = {commutator(G, g, h) for g in current for h in everything}
        series.append(_subgroup_closure(G, brackets))
    return series


@lru_cache(maxsize=256)
def nilpotency_class(G: MetacyclicPresentation, max_order: int = DEFAULT_MAX_ORDER) -> int:
    return len(lower_central_series(G, max_order)) - 1
