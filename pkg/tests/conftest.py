"""Shared fixtures for all test modules."""

import itertools
from collections import Counter

import pytest
from sympy.combinatorics import Permutation
from sympy.combinatorics.fp_groups import FpGroup
from sympy.combinatorics.free_groups import free_group

from src.config import Budgets
from src.free_word import FreeWord
from src.metacyclic import FamilyTag, MetacyclicPresentation, elements, make_family

CUSTOM_PRESENTATIONS = [
    (2, 2, 2, 1, 1),
    (2, 3, 2, 0, 5),
    (3, 2, 2, 1, 7),
    (2, 2, 2, 2, 1),
    (2, 3, 2, 2, 5),
]


class CayleyTable:
    """Brute-force oracle built from the defining relations alone.

    Coset enumeration over the trivial subgroup gives the regular permutation
    representation of < a, b | relations >; row i of the table is the normal form
    a^alpha b^beta at index alpha * p^m + beta, realised as A^alpha * B^beta.
    """

    def __init__(self, G: MetacyclicPresentation):
        self.G = G
        F, a, b = free_group("a, b")
        relators = [
            a ** G.pn,
            b ** G.pm * a ** -(G.p ** (G.n - G.epsilon)),
            b * a * b**-1 * a**-G.r,
        ]
        cosets = FpGroup(F, relators).coset_table([])
        if len(cosets) != G.order:
            raise AssertionError(f"relations of {G.label} define a group of order {len(cosets)}")
        # columns alternate generator, inverse: a, a^-1, b, b^-1
        a_perm = Permutation([row[0] for row in cosets])
        b_perm = Permutation([row[2] for row in cosets])

        self.elements = elements(G)
        perms = [a_perm**x.alpha * b_perm**x.beta for x in self.elements]
        self.index = {perm: i for i, perm in enumerate(perms)}
        if len(self.index) != G.order:
            raise AssertionError(f"normal forms of {G.label} are not distinct")
        self.table = [[self.index[x * y] for y in perms] for x in perms]
        self.identity = 0
        self.inverses = [row.index(self.identity) for row in self.table]

    @property
    def order(self) -> int:
        return len(self.elements)

    def mul(self, i: int, j: int) -> int:
        return self.table[i][j]

    def power(self, i: int, e: int) -> int:
        if e < 0:
            i, e = self.inverses[i], -e
        result = self.identity
        for _ in range(e):
            result = self.mul(result, i)
        return result

    def evaluate(self, w: FreeWord, indices: tuple[int, ...]) -> int:
        result = self.identity
        for var, exp in w.letters:
            result = self.mul(result, self.power(indices[var - 1], exp))
        return result

    def distribution(self, w: FreeWord, k: int) -> tuple[int, ...]:
        counts = Counter(self.evaluate(w, t) for t in itertools.product(range(self.order), repeat=k))
        return tuple(counts.get(i, 0) for i in range(self.order))

    def is_associative(self) -> bool:
        n = self.order
        return all(
            self.mul(self.mul(x, y), z) == self.mul(x, self.mul(y, z))
            for x in range(n)
            for y in range(n)
            for z in range(n)
        )


@pytest.fixture
def d8():
    return make_family(FamilyTag.DIHEDRAL, 2, 2)


@pytest.fixture
def q8():
    return make_family(FamilyTag.GENERALISED_QUATERNION, 2, 2)


@pytest.fixture
def d16():
    return make_family(FamilyTag.DIHEDRAL, 2, 3)


@pytest.fixture
def q16():
    return make_family(FamilyTag.GENERALISED_QUATERNION, 2, 3)


@pytest.fixture
def sd16():
    return make_family(FamilyTag.SEMIDIHEDRAL, 2, 3)


@pytest.fixture
def m16():
    return make_family(FamilyTag.MODULAR_2, 2, 3)


@pytest.fixture
def m27():
    return make_family(FamilyTag.MODULAR_ODD, 3, 2)


@pytest.fixture
def small_families():
    return [
        make_family(FamilyTag.DIHEDRAL, 2, 2),
        make_family(FamilyTag.GENERALISED_QUATERNION, 2, 2),
        make_family(FamilyTag.DIHEDRAL, 2, 3),
        make_family(FamilyTag.GENERALISED_QUATERNION, 2, 3),
        make_family(FamilyTag.SEMIDIHEDRAL, 2, 3),
        make_family(FamilyTag.MODULAR_2, 2, 3),
        make_family(FamilyTag.MODULAR_ODD, 3, 2),
    ]


@pytest.fixture
def cayley():
    """Factory for Cayley-table oracles, cached per presentation."""
    cache: dict = {}

    def build(G: MetacyclicPresentation) -> CayleyTable:
        if G.key not in cache:
            cache[G.key] = CayleyTable(G)
        return cache[G.key]

    return build


@pytest.fixture
def small_budgets():
    return Budgets(chunk_size=64, workers=1)


@pytest.fixture
def families_up_to_32():
    """Every five-family instance of order <= 32."""
    shapes = [
        (FamilyTag.DIHEDRAL, 2, [2, 3, 4]),
        (FamilyTag.GENERALISED_QUATERNION, 2, [2, 3, 4]),
        (FamilyTag.SEMIDIHEDRAL, 2, [3, 4]),
        (FamilyTag.MODULAR_2, 2, [3, 4]),
        (FamilyTag.MODULAR_ODD, 3, [2]),
    ]
    return [make_family(family, p, n) for family, p, ns in shapes for n in ns]


@pytest.fixture(params=CUSTOM_PRESENTATIONS, ids=lambda key: "G" + "-".join(map(str, key)))
def custom(request):
    """Custom presentations with m > 1 or epsilon >= 2."""
    p, n, m, epsilon, r = request.param
    return MetacyclicPresentation(p=p, n=n, m=m, epsilon=epsilon, r=r)
