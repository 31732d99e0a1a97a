"""Checks of the probability bound P_w(g) >= 1/|G| and the lemmas behind it.

Mathematical failures never raise: every check returns a CheckOutcome (or a report
with a pass flag) carrying enough data to reproduce the case. Only broken
preconditions and exhausted budgets raise.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from src.config import DEFAULT_BUDGETS, Budgets
from src.distribution import Distribution, compute_distribution
from src.enumeration import ArrayArithmetic, decode_tuples
from src.errors import BudgetExceededError, PreconditionError
from src.fp_poly import ChevalleyWarningReport, FpPolynomial, chevalley_warning_check, count_solutions, interpolate, pad
from src.free_word import FreeWord, exponent_gcd, render, variables
from src.metacyclic import (
    B_GEN,
    IDENTITY,
    GroupElement,
    MetacyclicPresentation,
    intersection_AB,
    multiply,
    nilpotency_class,
    power,
    z_elements,
)
from src.tally import CheckOutcome, CheckStatus

logger = logging.getLogger(__name__)


class ImageLocation(str, Enum):
    FULL_GROUP = "full_group"
    IN_A_NOT_Z = "in_a_not_z"
    IN_Z_NONTRIVIAL = "in_z_nontrivial"
    TRIVIAL = "trivial"
    OUTSIDE_A = "outside_a"


class Alternative(str, Enum):
    FULL_GROUP = "full_group"
    SUBSET_OF_A = "subset_of_a"


def _fraction_record(x: Fraction) -> dict:
    return {"num": x.numerator, "den": x.denominator}


def _resolve_k(w: FreeWord, k: Optional[int]) -> int:
    return w.arity_hint if k is None else k


def classify_image(G: MetacyclicPresentation, support: Sequence[GroupElement]) -> ImageLocation:
    if len(support) == G.order:
        return ImageLocation.FULL_GROUP
    if all(g == IDENTITY for g in support):
        return ImageLocation.TRIVIAL
    zs = set(z_elements(G))
    if all(g in zs for g in support):
        return ImageLocation.IN_Z_NONTRIVIAL
    if all(g.beta == 0 for g in support):
        return ImageLocation.IN_A_NOT_Z
    return ImageLocation.OUTSIDE_A


# ---------------------------------------------------------------------------
# Dichotomy
# ---------------------------------------------------------------------------

def predict_alternative(G: MetacyclicPresentation, w: FreeWord) -> Alternative:
    """p does not divide the exponent-sum gcd -> surjective, otherwise G_w lies in A."""
    d = exponent_gcd(w)
    return Alternative.FULL_GROUP if d % G.p else Alternative.SUBSET_OF_A


def dichotomy_check(
    G: MetacyclicPresentation,
    w: FreeWord,
    k: Optional[int] = None,
    dist: Optional[Distribution] = None,
    budgets: Budgets = DEFAULT_BUDGETS,
) -> CheckOutcome:
    """Either G_w = G or G_w is inside A, and the gcd of exponent sums says which."""
    if power(G, B_GEN, G.p).beta != 0:
        return CheckOutcome("dichotomy", CheckStatus.NOT_APPLICABLE, {"reason": "b^p is not in A"})
    dist = dist or compute_distribution(G, w, _resolve_k(w, k), budgets=budgets)
    support = dist.support()
    if len(support) == G.order:
        observed = Alternative.FULL_GROUP
    elif all(g.beta == 0 for g in support):
        observed = Alternative.SUBSET_OF_A
    else:
        observed = None
    predicted = predict_alternative(G, w)
    detail = {
        "alternative": observed.value if observed else None,
        "predicted": predicted.value,
        "exponent_gcd": exponent_gcd(w),
        "image_size": len(support),
    }
    status = CheckStatus.PASS if observed is predicted else CheckStatus.FAIL
    return CheckOutcome("dichotomy", status, detail)


# ---------------------------------------------------------------------------
# Z-image polynomial
# ---------------------------------------------------------------------------

@dataclass
class PolynomialDetail:
    """Polynomial f with w(...) = (a^(p^(n-1)))^f(alpha mod p, beta mod p)."""

    polynomial: FpPolynomial
    degree: Optional[int]
    nilpotency_class: int
    well_defined: bool
    effective_vars: list[int]
    k_padded: int
    image_equals_Z: bool
    lift_checks: int
    chevalley_warning: Optional[ChevalleyWarningReport] = None

    @property
    def ell_effective(self) -> int:
        return self.polynomial.num_vars

    @property
    def ell_padded(self) -> int:
        return 2 * self.k_padded

    @property
    def degree_ok(self) -> bool:
        return self.degree is None or self.degree <= self.nilpotency_class

    def to_dict(self) -> dict:
        return {
            "polynomial": self.polynomial.to_dict(),
            "rendered": str(self.polynomial),
            "degree": self.degree,
            "class": self.nilpotency_class,
            "degree_ok": self.degree_ok,
            "well_defined": self.well_defined,
            "effective_vars": self.effective_vars,
            "ell_effective": self.ell_effective,
            "ell_padded": self.ell_padded,
            "k_padded": self.k_padded,
            "image_equals_Z": self.image_equals_Z,
            "lift_checks": self.lift_checks,
            "chevalley_warning": self.chevalley_warning.to_dict() if self.chevalley_warning else None,
        }


def padded_arity(k: int, c: int) -> int:
    """Smallest k' >= k with 2k' > c."""
    return max(k, c // 2 + 1)


class _ZTable:
    """Z-exponents of w on arrays of tuples, with the effective variables placed in slots."""

    def __init__(self, G: MetacyclicPresentation, w: FreeWord, effective: list[int]):
        self.G = G
        self.w = w
        self.effective = effective
        self.arith = ArrayArithmetic(G)
        self.z_step = G.p ** (G.n - 1)

    def exponents(self, alphas: Sequence[np.ndarray], betas: Sequence[np.ndarray]) -> np.ndarray:
        size = len(alphas[0])
        values = [self.arith.identity(size) for _ in range(self.w.arity_hint)]
        for slot, var in enumerate(self.effective):
            values[var - 1] = (np.asarray(alphas[slot], dtype=np.int64), np.asarray(betas[slot], dtype=np.int64))
        alpha, beta = self.arith.evaluate(self.w.letters, values, size)
        if np.any(beta != 0) or np.any(alpha % self.z_step != 0):
            raise PreconditionError(f"{render(self.w)} takes values outside Z on {self.G.label}")
        return alpha // self.z_step


def z_word_polynomial_extract(
    G: MetacyclicPresentation,
    w: FreeWord,
    k: Optional[int] = None,
    budgets: Budgets = DEFAULT_BUDGETS,
    seed: int = 0,
    exhaustive_lifts: bool = False,
    dist: Optional[Distribution] = None,
) -> PolynomialDetail:
    """Interpolate the Z-exponent of w as a polynomial over F_p in the residues of its inputs.

    Points are (alpha_1 mod p, beta_1 mod p, ..., alpha_v mod p, beta_v mod p) over the
    variables v that occur in w. Canonical lifts build the table; random alternate lifts
    (or every lift, when asked and |G| <= 16) decide well_defined.
    """
    k = _resolve_k(w, k)
    dist = dist or compute_distribution(G, w, k, budgets=budgets)
    support = dist.support()
    location = classify_image(G, support)
    if location is not ImageLocation.IN_Z_NONTRIVIAL:
        raise PreconditionError(f"image of {render(w)} on {G.label} is {location.value}, not 1 != G_w <= Z")

    p = G.p
    effective = variables(w)
    ell = 2 * len(effective)
    if p**ell > budgets.max_points:
        raise BudgetExceededError(f"Z-table of {render(w)} on {G.label}", p**ell, budgets.max_points)
    table = _ZTable(G, w, effective)

    coords = np.indices((p,) * ell).reshape(ell, -1)
    base_alphas, base_betas = coords[0::2], coords[1::2]
    values = table.exponents(base_alphas, base_betas)
    polynomial = interpolate(p, ell, values % p, budgets.max_points)

    well_defined = True
    checks = 0
    if exhaustive_lifts and G.order <= 16:
        total = G.order ** len(effective)
        if total > budgets.max_evals:
            raise BudgetExceededError(f"lift audit of {render(w)} on {G.label}", total, budgets.max_evals)
        tuples = decode_tuples(G, len(effective), 0, total)
        alphas = [t[0] for t in tuples]
        betas = [t[1] for t in tuples]
        index = np.zeros(total, dtype=np.int64)
        for alpha, beta in zip(alphas, betas):
            index = (index * p + alpha % p) * p + beta % p
        well_defined = bool(np.array_equal(table.exponents(alphas, betas), values[index]))
        checks = total
    else:
        rng = np.random.default_rng(seed)
        size = coords.shape[1]
        for _ in range(budgets.lifts):
            alpha_lift = base_alphas + p * rng.integers(0, G.p ** (G.n - 1), size=base_alphas.shape)
            if G.m > 1:
                beta_lift = base_betas + p * rng.integers(0, G.p ** (G.m - 1), size=base_betas.shape)
            else:
                beta_lift = base_betas
            lifted = table.exponents(alpha_lift, beta_lift)
            checks += size
            if not np.array_equal(lifted, values):
                well_defined = False
                break

    c = nilpotency_class(G, budgets.max_order)
    detail = PolynomialDetail(
        polynomial=polynomial,
        degree=polynomial.degree,
        nilpotency_class=c,
        well_defined=well_defined,
        effective_vars=effective,
        k_padded=padded_arity(k, c),
        image_equals_Z=set(support) == set(z_elements(G)),
        lift_checks=checks,
    )
    padded = pad(polynomial, detail.ell_padded)
    if p**detail.ell_padded <= budgets.max_points:
        detail.chevalley_warning = chevalley_warning_check(padded, budgets.max_points)
    logger.debug("%s on %s: f = %s, degree %s, class %d", render(w), G.label, polynomial, polynomial.degree, c)
    return detail


def z_word_probability_bound_check(
    G: MetacyclicPresentation,
    w: FreeWord,
    k: Optional[int] = None,
    budgets: Budgets = DEFAULT_BUDGETS,
    dist: Optional[Distribution] = None,
    detail: Optional[PolynomialDetail] = None,
) -> CheckOutcome:
    """N_w(g) >= p^(k(n-1)) p^(k(m-1)) p^(2k-c) on every g in G_w <= Z, so P >= p^-c > 1/|G|.

    k is padded to k' with 2k' > c first; padding multiplies every count by |G|^(k'-k).
    """
    k = _resolve_k(w, k)
    dist = dist or compute_distribution(G, w, k, budgets=budgets)
    if classify_image(G, dist.support()) is not ImageLocation.IN_Z_NONTRIVIAL:
        return CheckOutcome("z_probability_bound", CheckStatus.NOT_APPLICABLE, {"reason": "G_w is not 1 != G_w <= Z"})
    detail = detail or z_word_polynomial_extract(G, w, k, budgets=budgets, dist=dist)
    if not detail.well_defined:
        return CheckOutcome(
            "z_probability_bound", CheckStatus.NOT_APPLICABLE, {"reason": "Z-exponent depends on more than residues mod p"}
        )

    p, c = G.p, detail.nilpotency_class
    k_pad = detail.k_padded
    scale = G.order ** (k_pad - k)
    bound = p ** (k_pad * (G.n - 1) + k_pad * (G.m - 1) + 2 * k_pad - c)
    floor = Fraction(1, p**c)
    rows, failures = [], []
    fibres_match = True
    lifts_per_point = p ** (k_pad * (G.n + G.m - 2))
    padded = pad(detail.polynomial, detail.ell_padded)
    count_fibres = p**detail.ell_padded <= budgets.max_points

    for i, z in enumerate(z_elements(G)):
        n_w = dist.count(z)
        if not n_w:
            continue
        padded_count = n_w * scale
        row = {"i": i, "n": n_w, "n_padded": padded_count, "bound": bound, "probability": _fraction_record(dist.probability(z))}
        if count_fibres:
            solutions = count_solutions(padded, i)
            row["solutions"] = solutions
            if solutions * lifts_per_point != padded_count:
                fibres_match = False
        rows.append(row)
        if padded_count < bound or dist.probability(z) < floor:
            failures.append(i)

    ok = not failures and floor > Fraction(1, G.order) and detail.degree_ok and fibres_match
    status = CheckStatus.PASS if ok else CheckStatus.FAIL
    return CheckOutcome(
        "z_probability_bound",
        status,
        {
            "class": c,
            "k_padded": k_pad,
            "floor": _fraction_record(floor),
            "fibres_match": fibres_match,
            "degree_ok": detail.degree_ok,
            "rows": rows,
            "failures": failures,
        },
    )


# ---------------------------------------------------------------------------
# Intersection lemma
# ---------------------------------------------------------------------------

def intersection_lemma_check(
    G: MetacyclicPresentation,
    w: FreeWord,
    k: Optional[int] = None,
    budgets: Budgets = DEFAULT_BUDGETS,
    dist: Optional[Distribution] = None,
) -> CheckOutcome:
    """With A n B <= Z, G_w <= A and G_w not in Z: Z < G_w and N(g) = N(gz) <= N(z)."""
    k = _resolve_k(w, k)
    zs = z_elements(G)
    z_set = set(zs)
    if not set(intersection_AB(G)) <= z_set:
        return CheckOutcome("intersection_lemma", CheckStatus.NOT_APPLICABLE, {"reason": "A n B is not in Z"})
    dist = dist or compute_distribution(G, w, k, budgets=budgets)
    support = dist.support()
    if classify_image(G, support) is not ImageLocation.IN_A_NOT_Z:
        return CheckOutcome("intersection_lemma", CheckStatus.NOT_APPLICABLE, {"reason": "G_w is not in A minus Z"})

    violations = []
    image = set(support)
    if not z_set < image:
        violations.append({"check": "Z strictly inside G_w"})
    floor = G.order ** (k - 1) if k else 1
    for g in sorted(image - z_set):
        n_g = dist.count(g)
        if n_g < floor:
            violations.append({"check": "N(g) >= |G|^(k-1)", "g": str(g), "n": n_g})
        for z in zs:
            if dist.count(multiply(G, g, z)) != n_g or n_g > dist.count(z):
                violations.append({"check": "N(g) = N(gz) <= N(z)", "g": str(g), "z": str(z)})
    if dist.min_probability() < Fraction(1, G.order):
        violations.append({"check": "min P >= 1/|G|"})
    status = CheckStatus.FAIL if violations else CheckStatus.PASS
    return CheckOutcome("intersection_lemma", status, {"image_size": len(image), "violations": violations})


# ---------------------------------------------------------------------------
# Probability bound
# ---------------------------------------------------------------------------

@dataclass
class VerificationReport:
    group: MetacyclicPresentation
    word: FreeWord
    k: int
    image_size: int
    image_location: ImageLocation
    min_probability: Fraction
    bound: Fraction
    passed: bool
    polynomial_detail: Optional[PolynomialDetail] = None
    outcomes: list[CheckOutcome] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "group": self.group.to_record(),
            "label": self.group.label,
            "word": render(self.word),
            "k": self.k,
            "image_size": self.image_size,
            "image_location": self.image_location.value,
            "min_probability": _fraction_record(self.min_probability),
            "bound": _fraction_record(self.bound),
            "pass": self.passed,
            "polynomial_detail": self.polynomial_detail.to_dict() if self.polynomial_detail else None,
            "checks": [outcome.to_dict() for outcome in self.outcomes],
        }


def amit_ashurst_check(
    G: MetacyclicPresentation,
    w: FreeWord,
    k: Optional[int] = None,
    method: str = "coset_split",
    budgets: Budgets = DEFAULT_BUDGETS,
    with_polynomial: bool = False,
    dist: Optional[Distribution] = None,
) -> VerificationReport:
    """min over G_w of P_w(g) against 1/|G|, from an exact distribution."""
    k = _resolve_k(w, k)
    dist = dist or compute_distribution(G, w, k, method, budgets)
    support = dist.support()
    location = classify_image(G, support)
    min_p = dist.min_probability()
    bound = Fraction(1, G.order)
    report = VerificationReport(
        group=G,
        word=w,
        k=k,
        image_size=len(support),
        image_location=location,
        min_probability=min_p,
        bound=bound,
        passed=min_p >= bound,
    )
    if with_polynomial and location is ImageLocation.IN_Z_NONTRIVIAL:
        report.polynomial_detail = z_word_polynomial_extract(G, w, k, budgets=budgets, dist=dist)
    if not report.passed:
        logger.warning("bound violated: %s on %s, min P = %s < %s", render(w), G.label, min_p, bound)
    return report
