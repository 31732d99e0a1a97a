"""Scan campaigns: every configured check over a group x word grid."""

import asyncio
import csv
import io
import logging
import random
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Optional

from src.config import Budgets
from src.distribution import compute_distribution, induction_lemma_check, quotient_pushforward_check
from src.free_word import FreeWord, Letter, render
from src.metacyclic import FamilyTag, MetacyclicPresentation, center_Z, quotient_by_Z
from src.models import CampaignConfig, WordGenSpec
from src.tally import CheckOutcome, CheckStatus, CheckTally
from src.verifier import (
    ImageLocation,
    VerificationReport,
    amit_ashurst_check,
    dichotomy_check,
    intersection_lemma_check,
    z_word_polynomial_extract,
    z_word_probability_bound_check,
)

logger = logging.getLogger(__name__)

X1 = FreeWord.from_letters([(1, 1)])


# ---------------------------------------------------------------------------
# Word generation
# ---------------------------------------------------------------------------

def _symbols(k: int) -> list[Letter]:
    return [(var, sign) for var in range(1, k + 1) for sign in (1, -1)]


def _reduced_sequences(k: int, length: int) -> Iterator[tuple[Letter, ...]]:
    """Sequences of x_i^(+-1) with no letter next to its own inverse."""
    symbols = _symbols(k)
    stack: list[tuple[Letter, ...]] = [()]
    while stack:
        prefix = stack.pop()
        if len(prefix) == length:
            yield prefix
            continue
        for symbol in reversed(symbols):
            if prefix and prefix[-1] == (symbol[0], -symbol[1]):
                continue
            stack.append(prefix + (symbol,))


def gen_words(spec: WordGenSpec) -> list[FreeWord]:
    """Exhaustive: every reduced word of length 1..len_max in k_max variables.
    Random: spec.count words from a generator seeded with spec.seed.
    """
    if spec.mode == "exhaustive":
        return [
            FreeWord.from_letters(seq)
            for length in range(1, spec.len_max + 1)
            for seq in _reduced_sequences(spec.k_max, length)
        ]

    rng = random.Random(spec.seed)
    words = []
    for _ in range(spec.count):
        symbols = _symbols(rng.randint(1, spec.k_max))
        seq: list[Letter] = []
        for _ in range(rng.randint(1, spec.len_max)):
            choices = [s for s in symbols if not seq or seq[-1] != (s[0], -s[1])]
            seq.append(rng.choice(choices))
        words.append(FreeWord.from_letters(seq))
    return words


def word_key(w: FreeWord) -> tuple:
    return (sum(abs(e) for _, e in w.letters), w.letters)


def campaign_words(config: CampaignConfig) -> list[FreeWord]:
    seen: set[tuple[Letter, ...]] = set()
    words = []
    for spec in config.words:
        for w in gen_words(spec):
            if w.letters not in seen:
                seen.add(w.letters)
                words.append(w)
    return words


def campaign_groups(config: CampaignConfig) -> list[MetacyclicPresentation]:
    groups = [spec.to_presentation() for spec in config.groups]
    if config.include_quotients:
        keys = {G.key for G in groups}
        for G in list(groups):
            if G.n < 2:
                continue
            Q = quotient_by_Z(G)
            if Q.key not in keys:
                keys.add(Q.key)
                groups.append(Q)
    return groups


# ---------------------------------------------------------------------------
# One grid point
# ---------------------------------------------------------------------------

@dataclass
class GridResult:
    group: MetacyclicPresentation
    word: FreeWord
    report: VerificationReport
    outcomes: list[CheckOutcome] = field(default_factory=list)

    @property
    def sort_key(self) -> tuple:
        return (self.group.key, word_key(self.word))

    def reproduction(self) -> dict:
        return {"group": self.group.to_record(), "word": render(self.word), "k": self.report.k}


def _not_applicable(name: str, reason: str) -> CheckOutcome:
    return CheckOutcome(name, CheckStatus.NOT_APPLICABLE, {"reason": reason})


def check_word(
    G: MetacyclicPresentation,
    w: FreeWord,
    checks: list[str],
    budgets: Budgets,
    method: str = "coset_split",
    max_polynomial_order: int = 32,
) -> GridResult:
    k = w.arity_hint
    dist = compute_distribution(G, w, k, method, budgets)
    report = amit_ashurst_check(G, w, k, budgets=budgets, dist=dist)
    result = GridResult(group=G, word=w, report=report)

    if "amit_ashurst" in checks:
        status = CheckStatus.PASS if report.passed else CheckStatus.FAIL
        result.outcomes.append(CheckOutcome("amit_ashurst", status, {"min_probability": str(report.min_probability)}))
    if "dichotomy" in checks:
        result.outcomes.append(dichotomy_check(G, w, k, dist=dist))
    if "intersection_lemma" in checks:
        result.outcomes.append(intersection_lemma_check(G, w, k, budgets=budgets, dist=dist))
    if "induction_lemma" in checks:
        result.outcomes.append(induction_lemma_check(G, w, k, dist=dist))

    wants_polynomial = "z_polynomial" in checks or "z_probability_bound" in checks
    in_z = report.image_location is ImageLocation.IN_Z_NONTRIVIAL
    if wants_polynomial and not in_z:
        reason = f"image is {report.image_location.value}"
    elif wants_polynomial and G.order > max_polynomial_order:
        reason = f"|G| = {G.order} above {max_polynomial_order}"
    else:
        reason = ""
    if wants_polynomial and reason:
        for name in ("z_polynomial", "z_probability_bound"):
            if name in checks:
                result.outcomes.append(_not_applicable(name, reason))
    elif wants_polynomial:
        detail = z_word_polynomial_extract(G, w, k, budgets=budgets, dist=dist)
        report.polynomial_detail = detail
        if "z_polynomial" in checks:
            cw_ok = detail.chevalley_warning is None or detail.chevalley_warning.passed
            if not detail.well_defined and G.family_tag is FamilyTag.CUSTOM:
                result.outcomes.append(_not_applicable("z_polynomial", "not well defined on a custom presentation"))
            else:
                ok = detail.well_defined and detail.degree_ok and cw_ok
                status = CheckStatus.PASS if ok else CheckStatus.FAIL
                result.outcomes.append(CheckOutcome("z_polynomial", status, detail.to_dict()))
        if "z_probability_bound" in checks:
            result.outcomes.append(z_word_probability_bound_check(G, w, k, budgets=budgets, dist=dist, detail=detail))
    return result


def scan_batch(payload: tuple) -> list[GridResult]:
    G, words, checks, budgets, method, max_polynomial_order = payload
    return [check_word(G, w, checks, budgets, method, max_polynomial_order) for w in words]


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------

@dataclass
class CampaignReport:
    groups: list[MetacyclicPresentation]
    results: list[GridResult]
    checks: list[str]
    equality_witness: dict[str, bool] = field(default_factory=dict)

    def tallies(self) -> dict[str, CheckTally]:
        tallies = {name: CheckTally(name) for name in self.checks}
        for result in self.results:
            for outcome in result.outcomes:
                tallies[outcome.name].record(outcome)
        return tallies

    def histogram(self) -> dict[str, dict[str, int]]:
        """Per group, how many words reach each exact minimum probability."""
        per_group: dict[str, Counter] = {G.label: Counter() for G in self.groups}
        for result in self.results:
            per_group[result.group.label][str(result.report.min_probability)] += 1
        return {label: dict(sorted(counts.items())) for label, counts in per_group.items()}

    def remark_tally(self) -> dict[str, int]:
        """Words with 1 != G_w <= Z, split by whether G_w is all of Z."""
        equal, proper = 0, 0
        for result in self.results:
            detail = result.report.polynomial_detail
            if detail is None:
                continue
            if detail.image_equals_Z:
                equal += 1
            else:
                proper += 1
        return {"image_equals_Z": equal, "proper_subset": proper}

    def failures(self) -> list[dict]:
        rows = []
        for result in self.results:
            for outcome in result.outcomes:
                if outcome.failed:
                    rows.append({**result.reproduction(), "check": outcome.name, "detail": outcome.detail})
        return rows

    @property
    def passed(self) -> bool:
        return not self.failures() and all(self.equality_witness.values())

    def to_dict(self) -> dict:
        return {
            "groups": [{"label": G.label, **G.to_record()} for G in self.groups],
            "grid_points": len(self.results),
            "summary": {name: tally.to_dict() for name, tally in self.tallies().items()},
            "histogram": self.histogram(),
            "equality_witness": self.equality_witness,
            "remark": self.remark_tally(),
            "failures": self.failures(),
            "pass": self.passed,
        }

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["group", "word", "image_size", "min_prob_num", "min_prob_den", "pass"])
        for result in self.results:
            report = result.report
            ok = report.passed and not any(o.failed for o in result.outcomes)
            writer.writerow(
                [
                    result.group.label,
                    render(result.word),
                    report.image_size,
                    report.min_probability.numerator,
                    report.min_probability.denominator,
                    str(ok).lower(),
                ]
            )
        return buffer.getvalue()

    def summary_lines(self) -> list[str]:
        lines = [str(tally) for tally in self.tallies().values()]
        lines.append(f"{'equality witness x1':<24} {sum(self.equality_witness.values())}/{len(self.equality_witness)}")
        return lines


# ---------------------------------------------------------------------------
# Campaign
# ---------------------------------------------------------------------------

async def scan_campaign(config: CampaignConfig, budgets: Optional[Budgets] = None) -> CampaignReport:
    """Run the configured checks on every (group, word) pair.

    Batches of words go to a process pool when budgets.workers > 1; results are
    sorted by (group key, word key), so the report does not depend on scheduling.
    """
    budgets = config.budgets.apply(budgets or Budgets.from_env())
    groups = campaign_groups(config)
    words = campaign_words(config)
    inner = budgets.override(workers=1)
    size = config.batch_size
    payloads = [
        (G, words[i:i + size], config.checks, inner, config.method, config.max_polynomial_order)
        for G in groups
        for i in range(0, len(words), size)
    ]
    logger.info("scanning %d groups x %d words in %d batches", len(groups), len(words), len(payloads))

    loop = asyncio.get_running_loop()
    semaphore = asyncio.Semaphore(budgets.workers)
    executor = ProcessPoolExecutor(max_workers=budgets.workers) if budgets.workers > 1 else None

    async def _run(payload: tuple) -> list[GridResult]:
        async with semaphore:
            return await loop.run_in_executor(executor, scan_batch, payload)

    try:
        batches = await asyncio.gather(*(_run(payload) for payload in payloads))
    finally:
        if executor is not None:
            executor.shutdown()

    results = sorted((r for batch in batches for r in batch), key=lambda r: r.sort_key)
    witness = {}
    for G in groups:
        report = amit_ashurst_check(G, X1, 1, budgets=inner)
        witness[G.label] = report.min_probability == report.bound
    report = CampaignReport(groups=groups, results=results, checks=list(config.checks), equality_witness=witness)
    for failure in report.failures():
        logger.warning("check %s failed on %s, word %s", failure["check"], failure["group"], failure["word"])
    return report


# ---------------------------------------------------------------------------
# Quotient identity sample
# ---------------------------------------------------------------------------

def quotient_sample(
    config: CampaignConfig, count: int = 100, seed: int = 0
) -> list[tuple[MetacyclicPresentation, FreeWord, int]]:
    """Seeded (G, w, k) triples with n >= 2, k between the word's arity and arity + 1."""
    groups = [G for G in campaign_groups(config) if G.n >= 2]
    words = campaign_words(config)
    if not groups or not words:
        return []
    rng = random.Random(seed)
    sample = []
    for _ in range(count):
        G = rng.choice(groups)
        w = rng.choice(words)
        sample.append((G, w, w.arity_hint + rng.randint(0, 1)))
    return sample


def pushforward_sample_check(
    config: CampaignConfig, count: int = 100, seed: int = 0, budgets: Optional[Budgets] = None
) -> CheckOutcome:
    budgets = config.budgets.apply(budgets or Budgets.from_env())
    mismatches = []
    triples = quotient_sample(config, count, seed)
    for G, w, k in triples:
        if not quotient_pushforward_check(G, center_Z(G), w, k, config.method, budgets):
            mismatches.append({"group": G.to_record(), "word": render(w), "k": k})
    status = CheckStatus.FAIL if mismatches else CheckStatus.PASS
    return CheckOutcome("quotient_pushforward", status, {"sampled": len(triples), "mismatches": mismatches})
