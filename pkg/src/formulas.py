"""Closed forms for left-normed commutators gamma_l = a^(q_l(alpha, beta)).

Each evaluator takes raw integer exponents and reduces on its own, so callers can
probe representative independence. The private helpers are written with plain
arithmetic and % so they run unchanged on ints and on int64 numpy arrays; the
agreement suite uses the array form to cover every tuple.
"""

import logging
from typing import NamedTuple, Sequence, Union

import numpy as np

from src.config import DEFAULT_BUDGETS, Budgets
from src.enumeration import ArrayArithmetic, decode_tuples
from src.errors import BudgetExceededError, PreconditionError
from src.metacyclic import (
    B_GEN,
    IDENTITY,
    FamilyTag,
    MetacyclicPresentation,
    commutator,
    elements,
    make_family,
    nilpotency_class,
    power,
    special_power_pn1,
)
from src.tally import CheckOutcome, CheckStatus

logger = logging.getLogger(__name__)

Residue = Union[int, np.ndarray]

ACCEPTANCE_GROUPS: list[tuple[FamilyTag, int, int]] = [
    (FamilyTag.DIHEDRAL, 2, 2),
    (FamilyTag.DIHEDRAL, 2, 3),
    (FamilyTag.DIHEDRAL, 2, 4),
    (FamilyTag.GENERALISED_QUATERNION, 2, 2),
    (FamilyTag.GENERALISED_QUATERNION, 2, 3),
    (FamilyTag.GENERALISED_QUATERNION, 2, 4),
    (FamilyTag.SEMIDIHEDRAL, 2, 3),
    (FamilyTag.SEMIDIHEDRAL, 2, 4),
    (FamilyTag.MODULAR_2, 2, 2),
    (FamilyTag.MODULAR_2, 2, 3),
    (FamilyTag.MODULAR_2, 2, 4),
    (FamilyTag.MODULAR_2, 2, 5),
    (FamilyTag.MODULAR_ODD, 3, 2),
    (FamilyTag.MODULAR_ODD, 5, 2),
]


class CommutatorExponent(NamedTuple):
    value: int
    length: int


def acceptance_groups() -> list[MetacyclicPresentation]:
    return [make_family(family, p, n) for family, p, n in ACCEPTANCE_GROUPS]


# ---------------------------------------------------------------------------
# Generic kernels (int or array)
# ---------------------------------------------------------------------------

def _r_power(G: MetacyclicPresentation, beta: Residue) -> Residue:
    # r^(p^m) = 1 mod p^n, so r^beta only depends on beta mod p^m
    if isinstance(beta, np.ndarray):
        table = np.array([pow(G.r, b, G.pn) for b in range(G.pm)], dtype=np.int64)
        return table[beta % G.pm]
    return pow(G.r, beta % G.pm, G.pn)


def _q2_general(G, a1: Residue, b1: Residue, a2: Residue, b2: Residue) -> Residue:
    pn = G.pn
    left = (a1 % pn) * ((1 - _r_power(G, b2)) % pn) % pn
    right = (a2 % pn) * ((1 - _r_power(G, b1)) % pn) % pn
    return (left - right) % pn


def _q_ell_general(G, alphas: Sequence[Residue], betas: Sequence[Residue]) -> Residue:
    value = _q2_general(G, alphas[0], betas[0], alphas[1], betas[1])
    for beta in betas[2:]:
        value = value * ((1 - _r_power(G, beta)) % G.pn) % G.pn
    return value


def _q_ell_dihedral_quaternion(n: int, ell: int, alphas, betas) -> Residue:
    mod = 2**n
    bars = [b % 2 for b in betas]
    value = (alphas[0] % mod) * bars[1] - (alphas[1] % mod) * bars[0]
    for bar in bars[2:ell]:
        value = value * bar
    return 2 ** (ell - 1) * (value % mod) % mod


def _q_ell_semidihedral(n: int, ell: int, alphas, betas) -> Residue:
    mod = 2**n
    bits = [b % 2 for b in betas]
    value = (alphas[0] % mod) * bits[1] - (alphas[1] % mod) * bits[0]
    for bit in bits[2:ell]:
        value = value * bit
    factor = 2 ** (ell - 1) * pow((1 - 2 ** (n - 2)) % mod, ell - 1, mod) % mod
    return factor * (value % mod) % mod


def _q2_class2(p: int, n: int, a1, b1, a2, b2) -> Residue:
    mod = p**n
    return p ** (n - 1) * ((a2 % mod) * b1 - (a1 % mod) * b2 % mod) % mod


# ---------------------------------------------------------------------------
# Public evaluators
# ---------------------------------------------------------------------------

def _check_lengths(alphas: Sequence[int], betas: Sequence[int]) -> int:
    if len(alphas) != len(betas) or len(alphas) < 2:
        raise PreconditionError("alpha and beta need the same length l >= 2")
    return len(alphas)


def q2_general(G: MetacyclicPresentation, a1: int, b1: int, a2: int, b2: int) -> CommutatorExponent:
    return CommutatorExponent(int(_q2_general(G, a1, b1, a2, b2)), 2)


def q_ell_general(G: MetacyclicPresentation, alphas: Sequence[int], betas: Sequence[int]) -> CommutatorExponent:
    ell = _check_lengths(alphas, betas)
    return CommutatorExponent(int(_q_ell_general(G, list(alphas), list(betas))), ell)


def q_ell_dihedral_quaternion(n: int, m: int, ell: int, alphas: Sequence[int], betas: Sequence[int]) -> CommutatorExponent:
    """2^(l-1) bbar_l ... bbar_3 (alpha_1 bbar_2 - alpha_2 bbar_1) mod 2^n, bbar = beta mod 2."""
    if m < 1 or ell < 2 or len(alphas) < ell or len(betas) < ell:
        raise PreconditionError(f"need m >= 1 and l >= 2 entries, got m={m}, l={ell}")
    return CommutatorExponent(int(_q_ell_dihedral_quaternion(n, ell, list(alphas), list(betas))), ell)


def q_ell_semidihedral(n: int, ell: int, alphas: Sequence[int], betas: Sequence[int]) -> CommutatorExponent:
    """2^(l-1) (1 - 2^(n-2))^(l-1) beta_3 ... beta_l (alpha_1 beta_2 - alpha_2 beta_1) mod 2^n.

    b has order 2, so betas are read mod 2.
    """
    if n < 2 or ell < 2 or len(alphas) < ell or len(betas) < ell:
        raise PreconditionError(f"need n >= 2 and l >= 2 entries, got n={n}, l={ell}")
    return CommutatorExponent(int(_q_ell_semidihedral(n, ell, list(alphas), list(betas))), ell)


def q2_class2(p: int, n: int, a1: int, b1: int, a2: int, b2: int) -> CommutatorExponent:
    """p^(n-1) (alpha_2 beta_1 - alpha_1 beta_2) mod p^n, for r = 1 + p^(n-1)."""
    return CommutatorExponent(int(_q2_class2(p, n, a1, b1, a2, b2)), 2)


def left_normed_exponent(G: MetacyclicPresentation, alphas: Sequence[int], betas: Sequence[int]) -> CommutatorExponent:
    """[a^alpha_1 b^beta_1, ..., a^alpha_l b^beta_l] by normal-form multiplication."""
    ell = _check_lengths(alphas, betas)
    xs = [G.element(alpha, beta) for alpha, beta in zip(alphas, betas)]
    acc = xs[0]
    for x in xs[1:]:
        acc = commutator(G, acc, x)
    if acc.beta != 0:
        raise PreconditionError(f"commutator {acc} left <a> in {G.label}")
    return CommutatorExponent(acc.alpha, ell)


# ---------------------------------------------------------------------------
# Suites
# ---------------------------------------------------------------------------

def _specialized(G: MetacyclicPresentation, ell: int, alphas, betas):
    tag = G.family_tag
    if tag in (FamilyTag.DIHEDRAL, FamilyTag.GENERALISED_QUATERNION):
        return _q_ell_dihedral_quaternion(G.n, ell, alphas, betas)
    if tag is FamilyTag.SEMIDIHEDRAL:
        return _q_ell_semidihedral(G.n, ell, alphas, betas)
    if tag in (FamilyTag.MODULAR_2, FamilyTag.MODULAR_ODD) and ell == 2:
        return _q2_class2(G.p, G.n, alphas[0], betas[0], alphas[1], betas[1])
    return None


def agreement_suite(
    G: MetacyclicPresentation, ell_max: int | None = None, budgets: Budgets = DEFAULT_BUDGETS
) -> CheckOutcome:
    """Specialized q_l == general q_l == direct commutator for every tuple, l = 2..ell_max."""
    ell_max = ell_max or nilpotency_class(G, budgets.max_order)
    arith = ArrayArithmetic(G)
    detail: dict = {"group": G.label, "lengths": {}, "mismatches": []}
    for ell in range(2, ell_max + 1):
        total = G.order**ell
        if total > budgets.max_evals:
            raise BudgetExceededError(f"formula agreement on {G.label}, l={ell}", total, budgets.max_evals)
        values = decode_tuples(G, ell, 0, total)
        alphas = [v[0] for v in values]
        betas = [v[1] for v in values]

        acc = values[0]
        for x in values[1:]:
            xy = arith.multiply(acc, x)
            acc = arith.multiply(arith.multiply(xy, arith.inverse(acc)), arith.inverse(x))
        direct_alpha, direct_beta = acc
        general = _q_ell_general(G, alphas, betas)
        special = _specialized(G, ell, alphas, betas)

        checks = {
            "direct_in_A": bool(np.all(direct_beta == 0)),
            "general_vs_direct": bool(np.array_equal(general, direct_alpha)),
        }
        if special is not None:
            checks["special_vs_general"] = bool(np.array_equal(special, general))
        if G.family_tag in (FamilyTag.DIHEDRAL, FamilyTag.GENERALISED_QUATERNION):
            shifted = [b + 2 for b in betas]
            checks["mod2_insensitive"] = bool(
                np.array_equal(_q_ell_dihedral_quaternion(G.n, ell, alphas, shifted), special)
                and np.array_equal(_q_ell_general(G, alphas, shifted), general)
            )
        if ell >= 3:
            vanishing = np.zeros(total, dtype=bool)
            for beta in betas[2:]:
                vanishing |= beta % G.pm == 0
            checks["vanishing"] = bool(np.all(general[vanishing] == 0))

        detail["lengths"][str(ell)] = {"tuples": total, **checks}
        for name, ok in checks.items():
            if not ok:
                detail["mismatches"].append({"length": ell, "check": name})
        logger.debug("%s l=%d: %s", G.label, ell, checks)

    status = CheckStatus.FAIL if detail["mismatches"] else CheckStatus.PASS
    return CheckOutcome("formula_agreement", status, detail)


def special_power_suite(G: MetacyclicPresentation, budgets: Budgets = DEFAULT_BUDGETS) -> CheckOutcome:
    """special_power_pn1(x) == x^(p^(n-1)) for every element, when b^(p^(n-1)) = 1."""
    steps = G.p ** (G.n - 1)
    if power(G, B_GEN, steps) != IDENTITY:
        return CheckOutcome("special_power", CheckStatus.NOT_APPLICABLE, {"group": G.label, "reason": "b^(p^(n-1)) != 1"})
    mismatches = [
        {"alpha": x.alpha, "beta": x.beta}
        for x in elements(G, budgets.max_order)
        if special_power_pn1(G, x) != power(G, x, steps)
    ]
    status = CheckStatus.FAIL if mismatches else CheckStatus.PASS
    return CheckOutcome("special_power", status, {"group": G.label, "elements": G.order, "mismatches": mismatches})
