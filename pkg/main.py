#!/usr/bin/env python3
"""CLI entry point for exact word-map checks on metacyclic p-groups.

Exit codes: 0 all checks pass, 1 a check failed, 2 usage or configuration error,
3 budget exceeded.
"""

import argparse
import asyncio
import inspect
import json
import logging
import random
import re
import sys
from pathlib import Path

from dotenv import load_dotenv

from src.campaign import scan_campaign
from src.config import Budgets
from src.distribution import METHODS, compute_distribution, evaluate
from src.errors import BudgetExceededError, ParameterConstraintError
from src.formulas import acceptance_groups, agreement_suite, special_power_suite
from src.fp_poly import FpPolynomial, chevalley_warning_check, random_polynomial, reduce_terms
from src.metacyclic import (
    FamilyTag,
    GroupElement,
    MetacyclicPresentation,
    center_Z,
    intersection_AB,
    is_abelian,
    is_split,
    make_family,
    nilpotency_class,
    presentation_type,
    quotient_by_Z,
)
from src.models import load_campaign_config
from src.verifier import (
    ImageLocation,
    amit_ashurst_check,
    dichotomy_check,
    intersection_lemma_check,
    z_word_polynomial_extract,
    z_word_probability_bound_check,
)
from src.word_parser import parse

# Load environment variables from .env file
load_dotenv()

logger = logging.getLogger("wordmaps")

EXIT_OK, EXIT_CHECK_FAILED, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

PAIR_PATTERN = re.compile(r"\s*\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)\s*")


def emit(payload: dict, out: Path | None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True)
    if out:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text + "\n", encoding="utf-8")
    else:
        print(text)


def write_csv(text: str, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def summary(line: str) -> None:
    print(line, file=sys.stderr)


def parse_tuple(text: str, G: MetacyclicPresentation) -> list[GroupElement]:
    """'(alpha,beta);(alpha,beta);...' into reduced normal forms."""
    if not text.strip():
        return []
    values = []
    for part in text.split(";"):
        match = PAIR_PATTERN.fullmatch(part)
        if not match:
            raise ParameterConstraintError(f"bad tuple entry {part!r}; expected (alpha,beta)")
        values.append(G.element(int(match.group(1)), int(match.group(2))))
    return values


def group_from_args(args: argparse.Namespace) -> MetacyclicPresentation:
    if args.p is None or args.n is None:
        raise ParameterConstraintError("--p and --n are required")
    if args.family and FamilyTag.parse(args.family) is not FamilyTag.CUSTOM:
        return make_family(FamilyTag.parse(args.family), args.p, args.n)
    if None in (args.m, args.epsilon, args.r):
        raise ParameterConstraintError("a custom group needs --m, --epsilon and --r")
    return MetacyclicPresentation(p=args.p, n=args.n, m=args.m, epsilon=args.epsilon, r=args.r)


def budgets_from_args(args: argparse.Namespace) -> Budgets:
    return Budgets.from_env().override(
        max_evals=args.max_evals,
        workers=getattr(args, "workers", None),
        lifts=getattr(args, "lifts", None),
    )


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def group_info_command(args: argparse.Namespace) -> int:
    G = group_from_args(args)
    budgets = budgets_from_args(args)
    ptype = presentation_type(G)
    payload = {
        "group": G.to_record(),
        "label": G.label,
        "order": G.order,
        "class": nilpotency_class(G, budgets.max_order),
        "center_Z": str(center_Z(G)),
        "abelian": is_abelian(G),
        "split": is_split(G),
        "intersection_AB": [str(x) for x in intersection_AB(G)],
        "presentation_type": {"sign": ptype.sign, "delta": ptype.delta} if ptype else None,
        "quotient_by_Z": quotient_by_Z(G).to_record() if G.n >= 2 else None,
    }
    emit(payload, args.out)
    summary(f"{G.label}: order {G.order}, class {payload['class']}")
    return EXIT_OK


def eval_command(args: argparse.Namespace) -> int:
    G = group_from_args(args)
    w = parse(args.word)
    value = evaluate(G, w, parse_tuple(args.tuple, G))
    emit({"group": G.to_record(), "word": str(w), "value": str(value), "alpha": value.alpha, "beta": value.beta}, args.out)
    return EXIT_OK


def dist_command(args: argparse.Namespace) -> int:
    G = group_from_args(args)
    w = parse(args.word)
    k = w.arity_hint if args.k is None else args.k
    dist = compute_distribution(G, w, k, args.method, budgets_from_args(args))
    emit(dist.to_dict(word=w), args.out)
    if args.csv:
        write_csv(dist.to_csv(), args.csv)
    summary(f"{w} on {G.label}^{k}: |G_w| = {len(dist.support())}, min P = {dist.min_probability()}")
    return EXIT_OK


def verify_command(args: argparse.Namespace) -> int:
    G = group_from_args(args)
    w = parse(args.word)
    k = w.arity_hint if args.k is None else args.k
    budgets = budgets_from_args(args)
    dist = compute_distribution(G, w, k, args.method, budgets)
    report = amit_ashurst_check(G, w, k, args.method, budgets, dist=dist)
    if report.image_location is ImageLocation.IN_Z_NONTRIVIAL:
        report.polynomial_detail = z_word_polynomial_extract(G, w, k, budgets=budgets, seed=args.seed or 0, dist=dist)
    report.outcomes = [
        dichotomy_check(G, w, k, dist=dist),
        intersection_lemma_check(G, w, k, budgets=budgets, dist=dist),
        z_word_probability_bound_check(G, w, k, budgets=budgets, dist=dist, detail=report.polynomial_detail),
    ]
    emit(report.to_dict(), args.out)
    failed = not report.passed or any(outcome.failed for outcome in report.outcomes)
    verdict = "FAIL" if failed else "pass"
    summary(f"{w} on {G.label}: {verdict}, min P = {report.min_probability} (bound {report.bound})")
    return EXIT_CHECK_FAILED if failed else EXIT_OK


async def scan_command(args: argparse.Namespace) -> int:
    config = load_campaign_config(args.config)
    if args.seed is not None:
        config.words = [spec.model_copy(update={"seed": args.seed}) for spec in config.words]
    if args.method:
        config.method = args.method
    report = await scan_campaign(config, budgets_from_args(args))
    emit(report.to_dict(), args.out)
    if args.csv:
        write_csv(report.to_csv(), args.csv)
    for line in report.summary_lines():
        summary(line)
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


def formulas_command(args: argparse.Namespace) -> int:
    budgets = budgets_from_args(args)
    groups = [group_from_args(args)] if args.p is not None else acceptance_groups()
    outcomes = []
    for G in groups:
        for outcome in (agreement_suite(G, args.ell_max, budgets), special_power_suite(G, budgets)):
            outcomes.append({"group": G.label, **outcome.to_dict()})
            summary(f"{G.label:<10} {outcome.name:<20} {outcome.status.value}")
    failed = any(o["status"] == "fail" for o in outcomes)
    emit({"outcomes": outcomes, "pass": not failed}, args.out)
    return EXIT_CHECK_FAILED if failed else EXIT_OK


def interp_command(args: argparse.Namespace) -> int:
    G = group_from_args(args)
    w = parse(args.word)
    k = w.arity_hint if args.k is None else args.k
    detail = z_word_polynomial_extract(
        G, w, k, budgets=budgets_from_args(args), seed=args.seed or 0, exhaustive_lifts=args.exhaustive_lifts
    )
    emit({"group": G.to_record(), "word": str(w), "k": k, **detail.to_dict()}, args.out)
    summary(f"f = {detail.polynomial}, degree {detail.degree}, class {detail.nilpotency_class}")
    ok = detail.well_defined and detail.degree_ok
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def cw_command(args: argparse.Namespace) -> int:
    budgets = budgets_from_args(args)
    if args.poly:
        if args.p is None:
            raise ParameterConstraintError("--poly needs --p")
        terms = json.loads(args.poly)
        num_vars = args.vars if args.vars is not None else max((len(t["exps"]) for t in terms), default=0)
        polys: list[FpPolynomial] = [reduce_terms(args.p, num_vars, ((t["exps"], t["coeff"]) for t in terms))]
    elif args.random:
        rng = random.Random(args.seed or 0)
        polys = []
        primes = [args.p] if args.p is not None else [2, 3]
        for i in range(args.random):
            p = primes[i % len(primes)]
            num_vars = rng.randint(2, args.vars or (8 if p == 2 else 5))
            polys.append(random_polynomial(p, num_vars, rng.randint(1, num_vars - 1), rng))
    else:
        raise ParameterConstraintError("cw needs --poly or --random")

    reports = [chevalley_warning_check(q, budgets.max_points) for q in polys]
    failed = any(r.applicable and not r.passed for r in reports)
    emit(
        {"reports": [{"polynomial": str(q), **r.to_dict()} for q, r in zip(polys, reports)], "pass": not failed},
        args.out,
    )
    summary(f"{sum(r.passed for r in reports)}/{len(reports)} pass, {sum(not r.applicable for r in reports)} not applicable")
    return EXIT_CHECK_FAILED if failed else EXIT_OK


COMMANDS = {
    "group-info": group_info_command,
    "eval": eval_command,
    "dist": dist_command,
    "verify": verify_command,
    "scan": scan_command,
    "formulas": formulas_command,
    "interp": interp_command,
    "cw": cw_command,
}


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", type=Path, default=None, help="Write JSON here instead of stdout")
    common.add_argument("--max-evals", type=int, default=None, help="Evaluation budget (default: WORDMAP_MAX_EVALS)")
    common.add_argument("--seed", type=int, default=None, help="RNG seed")
    common.add_argument("--verbose", action="store_true", help="Debug logging on stderr")

    group = argparse.ArgumentParser(add_help=False)
    group.add_argument("--family", type=str, default=None, help="dihedral, quaternion, semidihedral, modular2, modular or custom")
    group.add_argument("--p", type=int, default=None, help="Prime p")
    group.add_argument("--n", type=int, default=None, help="|a| = p^n")
    group.add_argument("--m", type=int, default=None, help="|G : <a>| = p^m (custom groups)")
    group.add_argument("--epsilon", type=int, default=None, help="b^(p^m) = a^(p^(n-epsilon)) (custom groups)")
    group.add_argument("--r", type=int, default=None, help="b a b^-1 = a^r (custom groups)")

    word = argparse.ArgumentParser(add_help=False)
    word.add_argument("--word", type=str, required=True, help='Word such as "x1^2 [x1,x2]"')
    word.add_argument("--k", type=int, default=None, help="Number of variables (default: the word's arity)")

    engine = argparse.ArgumentParser(add_help=False)
    engine.add_argument("--method", choices=METHODS, default="coset_split", help="Distribution engine (default: coset_split)")
    engine.add_argument("--workers", type=int, default=None, help="Worker processes (default: WORDMAP_WORKERS)")

    parser = argparse.ArgumentParser(
        description="Exact word maps on finite metacyclic p-groups",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    subparsers = parser.add_subparsers(dest="command", help="Command to execute")

    subparsers.add_parser("group-info", parents=[common, group], help="Presentation, class and center")

    eval_parser = subparsers.add_parser("eval", parents=[common, group], help="Evaluate a word on one tuple")
    eval_parser.add_argument("--word", type=str, required=True, help="Word to evaluate")
    eval_parser.add_argument("--tuple", type=str, required=True, help='Tuple "(alpha,beta);(alpha,beta);..."')

    dist_parser = subparsers.add_parser("dist", parents=[common, group, word, engine], help="Exact distribution N_w")
    dist_parser.add_argument("--csv", type=Path, default=None, help="Also write counts as CSV")

    subparsers.add_parser("verify", parents=[common, group, word, engine], help="Check min P_w >= 1/|G|")

    scan_parser = subparsers.add_parser("scan", parents=[common, engine], help="Run a campaign config")
    scan_parser.add_argument("--config", type=Path, required=True, help="Campaign config (.json or .toml)")
    scan_parser.add_argument("--csv", type=Path, default=None, help="Per-word CSV rows")
    scan_parser.set_defaults(method=None)

    formulas_parser = subparsers.add_parser(
        "formulas", parents=[common, group], help="Exhaustive commutator formula agreement"
    )
    formulas_parser.add_argument("--ell-max", type=int, default=None, help="Longest commutator (default: class)")

    interp_parser = subparsers.add_parser("interp", parents=[common, group, word], help="Z-image polynomial")
    interp_parser.add_argument("--lifts", type=int, default=None, help="Random lifts per point (default: WORDMAP_LIFTS)")
    interp_parser.add_argument("--exhaustive-lifts", action="store_true", help="Audit every lift (|G| <= 16)")

    cw_parser = subparsers.add_parser("cw", parents=[common], help="Chevalley-Warning fibre bound")
    cw_parser.add_argument("--p", type=int, default=None, help="Prime field")
    cw_parser.add_argument("--vars", type=int, default=None, help="Number of variables")
    cw_parser.add_argument("--poly", type=str, default=None, help='JSON terms, e.g. [{"exps":[1,0],"coeff":1}]')
    cw_parser.add_argument("--random", type=int, default=None, help="Check N seeded random polynomials")

    return parser


async def main(argv: list[str] | None = None) -> int:
    """Main CLI entry point."""
    parser = build_parser()
    args = parser.parse_args(argv)

    if not args.command:
        parser.print_help()
        return EXIT_USAGE

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )

    handler = COMMANDS[args.command]
    try:
        if inspect.iscoroutinefunction(handler):
            return await handler(args)
        return handler(args)
    except BudgetExceededError as exc:
        logger.error("%s", exc)
        return EXIT_BUDGET
    except ValueError as exc:
        # WordMapError and pydantic ValidationError both land here
        logger.error("%s", exc)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(asyncio.run(main()))
