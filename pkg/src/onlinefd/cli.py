"""
Command-line entry point: ``onlinefd run|verify|adversary|mms|fuzz``.

Exit codes: 0 success, 2 advice/algorithm mismatch, 3 unreadable input,
4 incomplete allocation, 5 a certified bound or fuzzed property failed.
"""
from __future__ import annotations

import argparse
import logging
import random
import sys
from fractions import Fraction
from typing import Optional, Sequence

from onlinefd.adversaries import ADVERSARIES, certify_bound, make_adversary
from onlinefd.augmented import noisy_freq_run, noisy_norm_run
from onlinefd.core import (
    Frequency,
    Instance,
    TotalIntervals,
    Totals,
    exact_advice,
    golden_geq,
    run_online,
)
from onlinefd.errors import (
    AdviceMismatch,
    BruteForceBudgetExceeded,
    CardinalityMismatch,
    ExhaustedPredictions,
    IdenticalViolation,
    IncompleteAllocation,
    InvalidAdvice,
    InvalidValue,
    ParseError,
    PredictionViolated,
    SequenceLengthMismatch,
    Unsupported,
)
from onlinefd.fairness import BruteForceBudget, fairness_report, format_factor, mms_values
from onlinefd.fileio import (
    build_report,
    dump_json,
    format_rational,
    load_advice,
    load_allocation,
    load_instance,
    parse_rational,
)
from onlinefd.frequency import run_freq_pipeline
from onlinefd.generators import random_identical_instance, random_instance
from onlinefd.registry import ALGORITHMS, FREQ_ORACLE, NATURAL_ADVICE

logger = logging.getLogger("onlinefd")

EXIT_OK, EXIT_MISMATCH, EXIT_PARSE, EXIT_INCOMPLETE, EXIT_BOUND = 0, 2, 3, 4, 5

_MISMATCH_ERRORS = (AdviceMismatch, IdenticalViolation, InvalidAdvice, PredictionViolated,
                    CardinalityMismatch, SequenceLengthMismatch, ExhaustedPredictions,
                    BruteForceBudgetExceeded, Unsupported)


def _rational_arg(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ParseError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _emit(data, out: Optional[str]) -> None:
    text = dump_json(data, out)
    if out is None:
        sys.stdout.write(text)


def _budget(args) -> BruteForceBudget:
    return BruteForceBudget(args.max_goods, args.max_agents)


# ---------------------------------------------------------------- commands


def cmd_run(args) -> int:
    instance, file_advice = load_instance(args.instance)
    algo = args.algo
    extra = {}
    if args.noisy_intervals:
        if algo != "norm":
            raise AdviceMismatch("--noisy-intervals only applies to --algo norm")
        intervals = load_advice(args.noisy_intervals)
        if isinstance(intervals, Totals):
            intervals = intervals.as_intervals()
        if not isinstance(intervals, TotalIntervals):
            raise AdviceMismatch(f"--noisy-intervals needs interval advice, got {intervals.kind!r}")
        allocation, noisy = noisy_norm_run(instance, intervals)
        advice = intervals
        extra["noisy_norm"] = {
            "rho": [format_rational(r) for r in noisy.rho],
            "kappa": [format_rational(k) for k in noisy.kappa],
            "additive_ef1_slack": format_factor(noisy.additive_ef1_slack),
            "additive_ef1_holds": noisy.additive_ef1_holds,
            "kappa_prop1_holds": noisy.kappa_prop1_holds,
        }
    elif args.noisy_freq:
        if algo not in FREQ_ORACLE:
            raise AdviceMismatch("--noisy-freq only applies to the freq-* algorithms")
        predicted = load_advice(args.noisy_freq)
        if not isinstance(predicted, Frequency):
            raise AdviceMismatch(f"--noisy-freq needs frequency advice, got {predicted.kind!r}")
        allocation, trace, holds = noisy_freq_run(instance, predicted.multisets, FREQ_ORACLE[algo],
                                                  budget=_budget(args))
        advice = predicted
        extra["noisy_freq"] = {
            "eta": [format_rational(v) for v in trace.eta],
            "eps": [format_rational(v) for v in trace.eps],
            "shares": [format_rational(v) for v in trace.shares],
            "matching_cost": [format_rational(v) for v in trace.matching_cost],
            "guarantee_holds": holds,
        }
    else:
        advice = file_advice if file_advice is not None else exact_advice(instance, NATURAL_ADVICE[algo])
        if algo in FREQ_ORACLE and advice == exact_advice(instance, "frequency"):
            allocation, freq = run_freq_pipeline(instance, FREQ_ORACLE[algo], budget=_budget(args))
            extra["shares"] = {
                "sequence": [a + 1 for a in freq.sequence],
                "benchmark": [format_rational(v) for v in freq.benchmark],
                "values": [format_rational(v) for v in freq.values],
                "meets_benchmark": freq.meets_benchmark,
            }
        else:
            allocation = run_online(ALGORITHMS[algo], instance, advice)
    report = fairness_report(instance, allocation, _budget(args))
    _emit(build_report(instance, allocation, report, algorithm=algo, advice=advice, extra=extra), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    instance, _ = load_instance(args.instance)
    allocation = load_allocation(args.allocation, instance)
    report = fairness_report(instance, allocation, _budget(args))
    for name, value in report.as_strings().items():
        print(f"{name}: {value}")
    return EXIT_OK


def cmd_adversary(args) -> int:
    params = {"K": args.K, "eps": args.eps, "delta": args.delta, "k": args.k, "n": args.n}
    adversary = make_adversary(args.adv, **params)
    transcript, bound, holds = certify_bound(adversary, ALGORITHMS[args.algo])
    measured = transcript.report.factor(bound.property)
    for t, (vec, agent) in enumerate(zip(transcript.instance.goods, transcript.decisions)):
        print(f"g{t + 1}: [{', '.join(format_rational(v) for v in vec)}] -> agent {agent + 1}")
    print(f"branch: {transcript.branch}")
    print(f"{bound.property.lower()}: {format_factor(measured)}")
    print(f"ceiling: {format_rational(bound.ceiling)}")
    print(f"holds: {str(holds).lower()}")
    if transcript.inconsistencies:
        print("inconsistent with advice: " + "; ".join(transcript.inconsistencies))
    if args.out:
        extra = {"adversary": args.adv, "branch": transcript.branch,
                 "bound": {"property": bound.property, "ceiling": format_rational(bound.ceiling)},
                 "holds": holds}
        dump_json(build_report(transcript.instance, transcript.allocation, transcript.report,
                               algorithm=args.algo, advice=transcript.advice, extra=extra), args.out)
    return EXIT_OK if holds else EXIT_BOUND


def cmd_mms(args) -> int:
    instance, _ = load_instance(args.instance)
    for i, v in enumerate(mms_values(instance, _budget(args))):
        print(f"agent {i + 1}: {format_rational(v)}")
    return EXIT_OK


def _fuzz_violation(algo: str, instance: Instance) -> Optional[str]:
    """Return a description of the first property the algorithm breaks, if any."""
    n = instance.n
    if algo in FREQ_ORACLE:
        allocation, freq = run_freq_pipeline(instance, FREQ_ORACLE[algo])
        if not freq.meets_benchmark:
            return "below IDO benchmark"
        report = fairness_report(instance, allocation)
        if algo == "freq-leximin" and report.efx < 1:
            return f"efx {report.efx} < 1"
        if algo == "freq-bruteforce" and report.mms is not None and report.mms < freq.ratio:
            return f"mms {report.mms} < offline ratio {freq.ratio}"
        return None
    advice = exact_advice(instance, NATURAL_ADVICE[algo])
    allocation = run_online(ALGORITHMS[algo], instance, advice)
    report = fairness_report(instance, allocation)
    if algo == "norm":
        if report.prop1 < 1:
            return f"prop1 {report.prop1} < 1"
        if n == 2 and report.ef1 < 1:
            return f"ef1 {report.ef1} < 1"
    if algo == "greedy" and report.ef1 < 1:
        return f"ef1 {report.ef1} < 1"
    if algo == "threshold" and not golden_geq(report.efx):
        return f"efx {report.efx} below the golden-ratio conjugate"
    return None


def cmd_fuzz(args) -> int:
    rng = random.Random(args.seed)
    identical = args.algo in ("greedy", "threshold")
    failures = 0
    for case in range(args.count):
        n = 2 if args.algo in ("threshold", "freq-leximin") else rng.randint(2, args.n)
        m = rng.randint(1, args.m)
        gen = random_identical_instance if identical else random_instance
        instance = gen(rng, n, m, args.denominator)
        problem = _fuzz_violation(args.algo, instance)
        if problem:
            failures += 1
            print(f"case {case}: {problem}; goods={[[str(v) for v in g] for g in instance.goods]}")
    print(f"{args.algo}: {args.count - failures}/{args.count} cases passed (seed {args.seed})")
    return EXIT_OK if failures == 0 else EXIT_BOUND


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="onlinefd", description="Online fair division with exact arithmetic.")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    parser.add_argument("--max-goods", type=int, default=12, help="brute-force budget on goods")
    parser.add_argument("--max-agents", type=int, default=4, help="brute-force budget on agents")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="allocate an instance online and report fairness")
    run.add_argument("--algo", required=True, choices=sorted(ALGORITHMS))
    run.add_argument("--instance", required=True)
    run.add_argument("--noisy-intervals", help="JSON interval advice for --algo norm")
    run.add_argument("--noisy-freq", help="JSON predicted multisets for the freq-* algorithms")
    run.add_argument("--out", help="write the JSON report here instead of stdout")
    run.set_defaults(func=cmd_run)

    verify = sub.add_parser("verify", help="print the four fairness factors of an allocation")
    verify.add_argument("--instance", required=True)
    verify.add_argument("--allocation", required=True)
    verify.set_defaults(func=cmd_verify)

    adv = sub.add_parser("adversary", help="play an adaptive adversary against an algorithm")
    adv.add_argument("--adv", required=True, choices=sorted(ADVERSARIES))
    adv.add_argument("--algo", required=True, choices=sorted(ALGORITHMS))
    adv.add_argument("--K", type=_rational_arg)
    adv.add_argument("--eps", type=_rational_arg)
    adv.add_argument("--delta", type=_rational_arg)
    adv.add_argument("--k", type=int, help="exponent parameter of a2")
    adv.add_argument("--n", type=int, help="agent count where the construction allows it")
    adv.add_argument("--out")
    adv.set_defaults(func=cmd_adversary)

    mms = sub.add_parser("mms", help="print each agent's maximin share")
    mms.add_argument("--instance", required=True)
    mms.set_defaults(func=cmd_mms)

    fuzz = sub.add_parser("fuzz", help="check an algorithm's guarantee on seeded random instances")
    fuzz.add_argument("--algo", required=True, choices=sorted(ALGORITHMS))
    fuzz.add_argument("--seed", type=int, default=0)
    fuzz.add_argument("--count", type=int, default=200)
    fuzz.add_argument("--n", type=int, default=3, help="largest agent count")
    fuzz.add_argument("--m", type=int, default=8, help="largest good count")
    fuzz.add_argument("--denominator", type=int, default=64)
    fuzz.set_defaults(func=cmd_fuzz)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except IncompleteAllocation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INCOMPLETE
    except _MISMATCH_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except InvalidValue as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
