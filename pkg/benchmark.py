#!/usr/bin/env python3
"""
benchmark.py: runs the acceptance sweep and records a verdict and timing per criterion.

Per-criterion output:
  criterion, name, pass, seconds, detail

Usage:
    uv run python benchmark.py
    uv run python benchmark.py --workers 4 --random-words 100
"""

import argparse
import asyncio
import json
import random
import time
from pathlib import Path

from dotenv import load_dotenv

from src.campaign import campaign_groups, campaign_words, pushforward_sample_check, scan_campaign
from src.config import Budgets
from src.distribution import distribution_coset_split, distribution_exhaustive
from src.formulas import acceptance_groups, agreement_suite, special_power_suite
from src.fp_poly import chevalley_warning_check, random_polynomial
from src.models import CampaignConfig, GroupSpec, WordGenSpec

load_dotenv()

SCAN_FAMILIES = [
    ("dihedral", 2, [2, 3, 4, 5]),
    ("quaternion", 2, [2, 3, 4, 5]),
    ("semidihedral", 2, [3, 4, 5]),
    ("modular2", 2, [3, 4, 5]),
    ("modular", 3, [2]),
]


def scan_config(max_order: int, random_words: int, seed: int) -> CampaignConfig:
    groups = [
        GroupSpec(family=family, p=p, n=n)
        for family, p, ns in SCAN_FAMILIES
        for n in ns
        if p ** (n + 1) <= max_order
    ]
    words = [WordGenSpec(mode="exhaustive", k_max=2, len_max=6)]
    if random_words:
        words.append(WordGenSpec(mode="random", k_max=3, len_max=10, count=random_words, seed=seed))
    return CampaignConfig(groups=groups, words=words)


def timed(criterion: int, name: str, fn) -> dict:
    started = time.perf_counter()
    passed, detail = fn()
    seconds = round(time.perf_counter() - started, 3)
    print(f"[{criterion:>2}] {name:<32} {'pass' if passed else 'FAIL'}  {seconds}s")
    return {"criterion": criterion, "name": name, "pass": passed, "seconds": seconds, "detail": detail}


# ---------------------------------------------------------------------------
# Criteria
# ---------------------------------------------------------------------------

def formula_agreement(budgets: Budgets):
    outcomes = [agreement_suite(G, budgets=budgets) for G in acceptance_groups()]
    return all(o.passed for o in outcomes), [o.to_dict() for o in outcomes]


def special_power(budgets: Budgets):
    outcomes = [special_power_suite(G, budgets) for G in acceptance_groups()]
    return not any(o.failed for o in outcomes), [o.to_dict() for o in outcomes]


def chevalley_warning_random(seed: int, count: int = 200):
    rng = random.Random(seed)
    failures, applicable = [], 0
    for i in range(count):
        p, top = (2, 8) if i % 2 == 0 else (3, 5)
        num_vars = rng.randint(2, top)
        q = random_polynomial(p, num_vars, rng.randint(1, num_vars - 1), rng)
        report = chevalley_warning_check(q)
        applicable += report.applicable
        if report.applicable and not report.passed:
            failures.append({"polynomial": q.to_dict(), "report": report.to_dict()})
    return not failures, {"polynomials": count, "applicable": applicable, "failures": failures}


def oracle_equivalence(budgets: Budgets):
    config = CampaignConfig(
        groups=scan_config(32, 0, 0).groups,
        words=[WordGenSpec(mode="exhaustive", k_max=2, len_max=6)],
    )
    mismatches, pairs = [], 0
    for G in campaign_groups(config):
        for w in campaign_words(config):
            pairs += 1
            fast = distribution_coset_split(G, w, w.arity_hint, budgets)
            slow = distribution_exhaustive(G, w, w.arity_hint, budgets)
            if fast.counts != slow.counts:
                mismatches.append({"group": G.label, "word": str(w)})
    return not mismatches, {"pairs": pairs, "mismatches": mismatches}


def tally_verdict(report: dict, name: str):
    summary = report["summary"][name]
    return summary["fail"] == 0, summary


async def determinism(budgets: Budgets, workers: int, seed: int):
    config = CampaignConfig(
        groups=[GroupSpec(family="dihedral", p=2, n=3), GroupSpec(family="quaternion", p=2, n=3)],
        words=[WordGenSpec(mode="exhaustive", k_max=2, len_max=3), WordGenSpec(mode="random", count=40, seed=seed)],
    )
    single = await scan_campaign(config, budgets.override(workers=1))
    many = await scan_campaign(config, budgets.override(workers=max(2, workers)))
    a = json.dumps(single.to_dict(), indent=2, sort_keys=True)
    b = json.dumps(many.to_dict(), indent=2, sort_keys=True)
    return a == b and single.to_csv() == many.to_csv(), {"bytes": len(a), "workers": max(2, workers)}


async def main() -> None:
    parser = argparse.ArgumentParser(description="Acceptance sweep for the word-map toolkit")
    parser.add_argument("--workers",       type=int,  default=1)
    parser.add_argument("--seed",          type=int,  default=0)
    parser.add_argument("--random-words",  type=int,  default=500)
    parser.add_argument("--max-order",     type=int,  default=64)
    parser.add_argument("--output-json",   type=Path, default=Path("outputs/benchmark_results.json"))
    args = parser.parse_args()

    budgets = Budgets.from_env().override(workers=args.workers)
    results = []

    results.append(timed(1, "formula agreement", lambda: formula_agreement(budgets)))
    results.append(timed(2, "special power formula", lambda: special_power(budgets)))

    print("Scanning families...")
    started = time.perf_counter()
    config = scan_config(args.max_order, args.random_words, args.seed)
    report = (await scan_campaign(config, budgets)).to_dict()
    scan_seconds = round(time.perf_counter() - started, 3)
    print(f"  → {report['grid_points']} grid points in {scan_seconds}s")

    def bound():
        ok = report["summary"]["amit_ashurst"]["fail"] == 0 and all(report["equality_witness"].values())
        return ok, {"summary": report["summary"]["amit_ashurst"], "equality_witness": report["equality_witness"]}

    results.append(timed(3, "probability bound scan", bound))
    results[-1]["seconds"] = scan_seconds
    results.append(timed(4, "dichotomy", lambda: tally_verdict(report, "dichotomy")))

    def pushforward():
        outcome = pushforward_sample_check(config, count=100, seed=args.seed, budgets=budgets)
        return outcome.passed, outcome.detail

    results.append(timed(5, "quotient counting identity", pushforward))
    results.append(timed(6, "intersection lemma", lambda: tally_verdict(report, "intersection_lemma")))

    def z_pipeline():
        poly_ok, poly = tally_verdict(report, "z_polynomial")
        bound_ok, bound_summary = tally_verdict(report, "z_probability_bound")
        return poly_ok and bound_ok, {"z_polynomial": poly, "z_probability_bound": bound_summary, "remark": report["remark"]}

    results.append(timed(7, "Z-image polynomial pipeline", z_pipeline))
    results.append(timed(8, "Chevalley-Warning random", lambda: chevalley_warning_random(args.seed)))
    results.append(timed(9, "engine oracle equivalence", lambda: oracle_equivalence(budgets.override(workers=1))))

    started = time.perf_counter()
    ok, detail = await determinism(budgets, args.workers, args.seed)
    seconds = round(time.perf_counter() - started, 3)
    print(f"[10] {'determinism across workers':<32} {'pass' if ok else 'FAIL'}  {seconds}s")
    results.append({"criterion": 10, "name": "determinism across workers", "pass": ok, "seconds": seconds, "detail": detail})

    args.output_json.parent.mkdir(parents=True, exist_ok=True)
    args.output_json.write_text(json.dumps(results, indent=2))
    print(f"\nResults saved → {args.output_json}")


if __name__ == "__main__":
    asyncio.run(main())
