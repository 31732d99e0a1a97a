"""Exact word-value distributions N_w(g) and P_w(g) on metacyclic groups."""

import csv
import io
import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

from src.config import DEFAULT_BUDGETS, Budgets
from src.enumeration import chunk_ranges, count_chunk, merge_counts, run_chunks
from src.errors import BudgetExceededError, PreconditionError
from src.free_word import FreeWord, render
from src.metacyclic import (
    IDENTITY,
    GroupElement,
    MetacyclicPresentation,
    center_Z,
    multiply,
    power,
    quotient_by_Z,
    z_elements,
)
from src.tally import CheckOutcome, CheckStatus

logger = logging.getLogger(__name__)

METHODS = ("exhaustive", "coset_split")


@dataclass(frozen=True)
class Distribution:
    """Fibre sizes of a word map G^k -> G, dense in the order alpha * p^m + beta."""

    group: MetacyclicPresentation
    k: int
    counts: tuple[int, ...]

    @property
    def group_order(self) -> int:
        return self.group.order

    @property
    def total(self) -> int:
        return sum(self.counts)

    def count(self, g: GroupElement) -> int:
        return self.counts[self.group.index_of(g)]

    def probability(self, g: GroupElement) -> Fraction:
        return Fraction(self.count(g), self.group_order**self.k)

    def support(self) -> list[GroupElement]:
        return [self.group.element_at(i) for i, n in enumerate(self.counts) if n]

    def min_count(self) -> int:
        return min(n for n in self.counts if n)

    def min_probability(self) -> Fraction:
        return Fraction(self.min_count(), self.group_order**self.k)

    def scaled(self, factor: int, k: int) -> "Distribution":
        return Distribution(group=self.group, k=k, counts=tuple(n * factor for n in self.counts))

    def to_dict(self, word: FreeWord | None = None) -> dict:
        record = {
            "k": self.k,
            "group": self.group.to_record(),
            "counts": [
                {"alpha": g.alpha, "beta": g.beta, "n": self.counts[i]}
                for i, g in enumerate(map(self.group.element_at, range(self.group_order)))
            ],
        }
        if word is not None:
            record["word"] = render(word)
        return record

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["alpha", "beta", "count"])
        for i, n in enumerate(self.counts):
            g = self.group.element_at(i)
            writer.writerow([g.alpha, g.beta, n])
        return buffer.getvalue()


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

def evaluate(G: MetacyclicPresentation, w: FreeWord, values: Sequence[GroupElement]) -> GroupElement:
    if len(values) < w.arity_hint:
        raise PreconditionError(f"word in {w.arity_hint} variables given {len(values)} values")
    result = IDENTITY
    for var, exp in w.letters:
        result = multiply(G, result, power(G, values[var - 1], exp))
    return result


def _check_arity(w: FreeWord, k: int) -> None:
    if k < w.arity_hint:
        raise PreconditionError(f"k={k} is below the word's arity {w.arity_hint}")


def _check_order(G: MetacyclicPresentation, budgets: Budgets) -> None:
    # counts are dense over G
    if G.order > budgets.max_order:
        raise BudgetExceededError(f"distribution on {G.label}", G.order, budgets.max_order)


def distribution_exhaustive(
    G: MetacyclicPresentation, w: FreeWord, k: int, budgets: Budgets = DEFAULT_BUDGETS
) -> Distribution:
    """Evaluate w on every tuple of G^k, chunk by chunk."""
    _check_arity(w, k)
    _check_order(G, budgets)
    total = G.order**k
    if total > budgets.max_evals:
        raise BudgetExceededError(f"exhaustive distribution on {G.label}^{k}", total, budgets.max_evals)
    payloads = [(G, w.letters, k, start, end) for start, end in chunk_ranges(total, budgets.chunk_size)]
    parts = run_chunks(count_chunk, payloads, budgets.workers)
    return Distribution(group=G, k=k, counts=merge_counts(parts, G.order))


def distribution_coset_split(
    G: MetacyclicPresentation, w: FreeWord, k: int, budgets: Budgets = DEFAULT_BUDGETS
) -> Distribution:
    """Sum over b-tuples of the affine maps alpha -> sum c_i alpha_i + w(b) on A^k.

    On each coset (b^beta_1, ..., b^beta_k) A^k the word acts as a homomorphism of the
    cyclic group A followed by translation by w(b). Its image is generated by
    d = gcd(c_1, ..., c_k, p^n) and every fibre has p^(n(k-1)) * d elements.
    """
    _check_arity(w, k)
    _check_order(G, budgets)
    loops = G.pm**k
    if loops > budgets.max_btuples:
        raise BudgetExceededError(f"coset split on {G.label}^{k}", loops, budgets.max_btuples)
    pn = G.pn
    counts = [0] * G.order
    for betas in itertools.product(range(G.pm), repeat=k):
        values = [GroupElement(0, beta) for beta in betas]
        base = evaluate(G, w, values)
        d = pn
        for i in range(k):
            probe = list(values)
            probe[i] = GroupElement(1, betas[i])
            shifted = evaluate(G, w, probe)
            d = gcd(d, (shifted.alpha - base.alpha) % pn)
        fibre = pn**k * d // pn
        for j in range(pn // d):
            counts[G.index_of(GroupElement((base.alpha + j * d) % pn, base.beta))] += fibre
    return Distribution(group=G, k=k, counts=tuple(counts))


def compute_distribution(
    G: MetacyclicPresentation,
    w: FreeWord,
    k: int,
    method: str = "coset_split",
    budgets: Budgets = DEFAULT_BUDGETS,
) -> Distribution:
    if method == "exhaustive":
        return distribution_exhaustive(G, w, k, budgets)
    if method == "coset_split":
        return distribution_coset_split(G, w, k, budgets)
    raise PreconditionError(f"unknown method {method!r}; choose one of {METHODS}")


def image(G: MetacyclicPresentation, w: FreeWord, k: int, budgets: Budgets = DEFAULT_BUDGETS) -> list[GroupElement]:
    return compute_distribution(G, w, k, budgets=budgets).support()


# ---------------------------------------------------------------------------
# Quotient identities
# ---------------------------------------------------------------------------

def quotient_pushforward_check(
    G: MetacyclicPresentation,
    N_generator: GroupElement,
    w: FreeWord,
    k: int,
    method: str = "coset_split",
    budgets: Budgets = DEFAULT_BUDGETS,
) -> bool:
    """N_{w,G/N}(gN) |N|^k == sum over n in N of N_{w,G}(gn), for N = Z."""
    zs = z_elements(G)
    if N_generator == IDENTITY or N_generator not in zs:
        raise PreconditionError(f"{N_generator} does not generate Z = <{center_Z(G)}>")
    Q = quotient_by_Z(G)
    upstairs = compute_distribution(G, w, k, method, budgets)
    downstairs = compute_distribution(Q, w, k, method, budgets)
    scale = len(zs) ** k
    for index, n_bar in enumerate(downstairs.counts):
        g = Q.element_at(index)
        fibre_sum = sum(upstairs.count(multiply(G, g, z)) for z in zs)
        if n_bar * scale != fibre_sum:
            logger.debug("pushforward mismatch on %s at %s: %d vs %d", G.label, g, n_bar * scale, fibre_sum)
            return False
    return True


def induction_lemma_check(
    G: MetacyclicPresentation, w: FreeWord, k: int, dist: Distribution | None = None
) -> CheckOutcome:
    """N_w(g) >= |G|^(k-1) for every g in G_w whose fibre sizes are constant on gZ."""
    if k == 0:
        return CheckOutcome("induction_lemma", CheckStatus.NOT_APPLICABLE, {"reason": "k = 0"})
    dist = dist or compute_distribution(G, w, k)
    zs = z_elements(G)
    bound = G.order ** (k - 1)
    checked, violations = 0, []
    for g in dist.support():
        coset = [dist.count(multiply(G, g, z)) for z in zs]
        if len(set(coset)) != 1:
            continue
        checked += 1
        if dist.count(g) < bound:
            violations.append({"alpha": g.alpha, "beta": g.beta, "n": dist.count(g)})
    if checked == 0:
        return CheckOutcome("induction_lemma", CheckStatus.NOT_APPLICABLE, {"reason": "no Z-constant cosets"})
    status = CheckStatus.FAIL if violations else CheckStatus.PASS
    return CheckOutcome("induction_lemma", status, {"cosets_checked": checked, "bound": bound, "violations": violations})
