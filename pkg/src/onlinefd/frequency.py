"""
Frequency predictions: picking sequences, offline share oracles and the
online meta-allocator that replays a sequence against the real stream.

Each agent announces the multiset of values it will see. Sorting every
multiset in decreasing order gives the *identical-order* (IDO) profile, on
which picking sequences are easy to reason about: the k-th pick is always the
k-th good. The meta-allocator keeps a sequence, and at every arrival it
simulates the sequence on a virtual table whose first column holds the actual
values of the arriving good and whose remaining columns are the sorted
leftovers of each multiset. Whoever would pick that first column receives it.

>>> simulate_picking((0, 1, 0), ido_profile([[3, 2, 1], [3, 2, 1]]))
(0, 1, 0)
>>> share_round_robin(2, 4)
(0, 1, 0, 1)
>>> from onlinefd.core import Instance
>>> inst = Instance.from_columns([[1, 3, 2], [2, 1, 3]])
>>> alloc, report = run_freq_pipeline(inst, "rr")
>>> alloc.owner
(1, 0, 0)
>>> report.benchmark
(Fraction(4, 1), Fraction(2, 1))
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence, Union

from onlinefd.core import INF, Advice, Allocation, Factor, Frequency, Instance, OnlineAllocator
from onlinefd.errors import (
    BruteForceBudgetExceeded,
    CardinalityMismatch,
    NotIdo,
    PredictionViolated,
    SequenceLengthMismatch,
    Unsupported,
)
from onlinefd.fairness import DEFAULT_BUDGET, BruteForceBudget, maximin_value

logger = logging.getLogger(__name__)

Profile = tuple[tuple[Fraction, ...], ...]  # profile[i][g]: agent-major value table


def ido_profile(multisets: Sequence[Sequence]) -> Profile:
    """Sort each agent's multiset in decreasing order.

    >>> ido_profile([[1, 1], [0, 2]])
    ((Fraction(1, 1), Fraction(1, 1)), (Fraction(2, 1), Fraction(0, 1)))
    """
    if len({len(ms) for ms in multisets}) > 1:
        raise CardinalityMismatch(f"multisets have sizes {[len(ms) for ms in multisets]}")
    return tuple(tuple(sorted((Fraction(x) for x in ms), reverse=True)) for ms in multisets)


def simulate_picking(sequence: Sequence[int], profile: Profile) -> tuple[int, ...]:
    """Each scheduled agent takes its favourite remaining good, ties to the lowest index.

    Returns the owner of every good (the column order of ``profile``).
    """
    m = len(profile[0]) if profile else 0
    if len(sequence) != m:
        raise SequenceLengthMismatch(f"sequence has {len(sequence)} turns for {m} goods")
    owner: list[Optional[int]] = [None] * m
    for agent in sequence:
        row = profile[agent]
        best = None
        for g in range(m):
            if owner[g] is None and (best is None or row[g] > row[best]):
                best = g
        owner[best] = agent
    return tuple(owner)


def picking_order(sequence: Sequence[int], profile: Profile) -> tuple[int, ...]:
    """The good picked at each turn of ``sequence``."""
    m = len(profile[0]) if profile else 0
    if len(sequence) != m:
        raise SequenceLengthMismatch(f"sequence has {len(sequence)} turns for {m} goods")
    taken = [False] * m
    order = []
    for agent in sequence:
        row = profile[agent]
        best = max((g for g in range(m) if not taken[g]), key=lambda g: (row[g], -g))
        taken[best] = True
        order.append(best)
    return tuple(order)


def is_ido(profile: Profile) -> bool:
    return all(all(a >= b for a, b in zip(row, row[1:])) for row in profile)


def allocation_to_sequence(owner: Sequence[int], profile: Profile) -> tuple[int, ...]:
    """Read off the sequence whose k-th turn belongs to the owner of good k.

    >>> allocation_to_sequence((0, 1, 0, 1), ido_profile([[4, 3, 2, 1]] * 2))
    (0, 1, 0, 1)
    """
    if not is_ido(profile):
        raise NotIdo("profile values must be nonincreasing in good index for every agent")
    if profile and len(owner) != len(profile[0]):
        raise SequenceLengthMismatch(f"{len(owner)} owners for {len(profile[0])} goods")
    return tuple(owner)


def share_round_robin(n: int, m: int) -> tuple[int, ...]:
    return tuple(t % n for t in range(m))


# ----------------------------------------------------------- share oracles


@dataclass(frozen=True)
class ShareResult:
    """A picking sequence plus what it promises each agent.

    ``benchmark[i]`` is agent i's value for the bundle the sequence gives it on
    the IDO profile; ``shares[i]`` is the share value the oracle certifies
    (never above the benchmark); ``ratio`` is the achieved MMS ratio when the
    oracle computes one.
    """

    sequence: tuple[int, ...]
    benchmark: tuple[Fraction, ...]
    shares: tuple[Fraction, ...]
    ratio: Optional[Factor] = None


def ido_bundle_values(sequence: Sequence[int], profile: Profile) -> tuple[Fraction, ...]:
    n = len(profile)
    owner = simulate_picking(sequence, profile)
    out = [Fraction(0)] * n
    for g, a in enumerate(owner):
        out[a] += profile[a][g]
    return tuple(out)


def round_robin_oracle(multisets: Sequence[Sequence]) -> ShareResult:
    profile = ido_profile(multisets)
    m = len(profile[0]) if profile else 0
    seq = share_round_robin(len(profile), m)
    bench = ido_bundle_values(seq, profile)
    return ShareResult(seq, bench, bench)


def leximin_cut_choose(multisets: Sequence[Sequence], max_goods: int = 20) -> ShareResult:
    """Two agents: agent 0 cuts the most balanced partition, agent 1 chooses.

    Among cuts with the same imbalance the one whose poorer side has more goods
    wins, then the lexicographically first membership vector. The chooser
    breaks exact indifference toward the side without the first good.

    >>> leximin_cut_choose([[1, 1], [1, 1]]).sequence
    (0, 1)
    >>> leximin_cut_choose([["1/2", "1/2"], [1, 0]]).sequence
    (1, 0)
    """
    profile = ido_profile(multisets)
    if len(profile) != 2:
        raise Unsupported(f"cut-and-choose is for two agents, got n={len(profile)}")
    m = len(profile[0])
    if m > max_goods:
        raise BruteForceBudgetExceeded(f"cut-and-choose over {m} goods exceeds {max_goods}")
    totals = [sum(row, Fraction(0)) for row in profile]
    if totals[0] == 0 or totals[1] == 0:
        receiver = 1 if totals[0] == 0 else 0
        seq = (receiver,) * m
        bench = ido_bundle_values(seq, profile)
        return ShareResult(seq, bench, bench)
    if m == 0:
        return ShareResult((), (Fraction(0), Fraction(0)), (Fraction(0), Fraction(0)))
    cutter = [v / totals[0] for v in profile[0]]
    chooser = [v / totals[1] for v in profile[1]]

    best_key, best_side = None, None
    for rest in itertools.product((0, 1), repeat=m - 1):
        side = (0,) + rest
        x_val = sum((cutter[g] for g in range(m) if side[g] == 0), Fraction(0))
        y_val = 1 - x_val
        x_size = side.count(0)
        y_size = m - x_size
        if x_val < y_val:
            poorer_size = x_size
        elif y_val < x_val:
            poorer_size = y_size
        else:
            poorer_size = max(x_size, y_size)
        key = (abs(x_val - y_val), -poorer_size)
        if best_key is None or key < best_key:
            best_key, best_side = key, side
    x_for_chooser = sum((chooser[g] for g in range(m) if best_side[g] == 0), Fraction(0))
    # chooser takes the side labelled 0 (which holds the first good) only if strictly better
    chooser_side = 0 if x_for_chooser > 1 - x_for_chooser else 1
    owner = tuple(1 if s == chooser_side else 0 for s in best_side)
    seq = allocation_to_sequence(owner, profile)
    bench = ido_bundle_values(seq, profile)
    return ShareResult(seq, bench, bench)


def share_bruteforce_maximin_ratio(multisets: Sequence[Sequence],
                                   budget: Optional[BruteForceBudget] = None) -> ShareResult:
    """Exhaustive search on the IDO profile for the best worst-case MMS ratio.

    >>> r = share_bruteforce_maximin_ratio([[3, 1, 1, 1], [3, 1, 1, 1]])
    >>> r.sequence, r.ratio
    ((0, 1, 1, 1), Fraction(1, 1))
    """
    profile = ido_profile(multisets)
    n = len(profile)
    m = len(profile[0]) if profile else 0
    (budget or DEFAULT_BUDGET).check(n, m, "max-min-ratio oracle")
    mms = [maximin_value(row, n) for row in profile]
    best_owner, best = None, None
    for owner in itertools.product(range(n), repeat=m):
        values = [Fraction(0)] * n
        for g, a in enumerate(owner):
            values[a] += profile[a][g]
        score: Factor = INF
        for i in range(n):
            if mms[i] != 0:
                score = min(score, values[i] / mms[i])
        if best is None or score > best:
            best_owner, best = owner, score
    seq = allocation_to_sequence(best_owner, profile)
    bench = ido_bundle_values(seq, profile)
    shares = tuple(mms[i] if best == INF else best * mms[i] for i in range(n))
    return ShareResult(seq, bench, shares, best)


ORACLES: dict[str, Callable[..., ShareResult]] = {
    "rr": round_robin_oracle,
    "leximin": leximin_cut_choose,
    "bruteforce": share_bruteforce_maximin_ratio,
}


def resolve_oracle(oracle: Union[str, Callable[..., ShareResult]]) -> Callable[..., ShareResult]:
    if callable(oracle):
        return oracle
    try:
        return ORACLES[oracle]
    except KeyError:
        raise ValueError(f"unknown share oracle {oracle!r}; choose from {sorted(ORACLES)}") from None


# --------------------------------------------------------- meta-allocator


def take_exact(remaining: list[Fraction], observed: Fraction) -> Fraction:
    """Remove ``observed`` from a descending-sorted list; it must be present."""
    for idx, v in enumerate(remaining):
        if v == observed:
            del remaining[idx]
            return v
    raise PredictionViolated(f"value {observed} is not among the remaining predictions")


Instantiation = Callable[[list[Fraction], Fraction], Fraction]


class FreqMetaAllocator(OnlineAllocator):
    """Replays a picking sequence against the arriving goods.

    ``oracle`` names a share oracle (``"rr"``, ``"leximin"``, ``"bruteforce"``)
    or is a callable on the predicted multisets; alternatively pass an explicit
    ``sequence``. ``instantiate`` maps an observed value to a predicted one and
    removes it from the agent's remaining multiset.
    """

    name = "freq"
    accepts = frozenset({"frequency"})

    def __init__(self, n: int, advice: Advice, oracle="rr", sequence: Optional[Sequence[int]] = None,
                 instantiate: Instantiation = take_exact):
        super().__init__(n, advice)
        assert isinstance(advice, Frequency)
        if len(advice.multisets) != n:
            raise CardinalityMismatch(f"frequency advice for {len(advice.multisets)} agents, expected {n}")
        self.remaining = [list(ms) for ms in advice.multisets]
        if sequence is None:
            self.share = resolve_oracle(oracle)(advice.multisets)
            sequence = self.share.sequence
        else:
            self.share = None
        if len(sequence) != advice.m:
            raise SequenceLengthMismatch(f"sequence has {len(sequence)} turns for {advice.m} goods")
        self.initial_sequence = tuple(sequence)
        self.sequence = list(sequence)
        self.instantiate = instantiate
        self.virtual: list[tuple[Fraction, ...]] = []

    def _choose(self, values):
        if not self.sequence:
            raise PredictionViolated("more goods arrived than were predicted")
        virtual = tuple(self.instantiate(self.remaining[i], values[i]) for i in range(self.n))
        self.virtual.append(virtual)
        table = tuple((virtual[i],) + tuple(self.remaining[i]) for i in range(self.n))
        turns = picking_order(self.sequence, table)
        turn = turns.index(0)
        agent = self.sequence.pop(turn)
        return agent


# --------------------------------------------------------------- pipeline


@dataclass(frozen=True)
class FreqReport:
    sequence: tuple[int, ...]
    values: tuple[Fraction, ...]          # v_i(A_i) on the real instance
    benchmark: tuple[Fraction, ...]       # IDO value of the bundle the sequence promises
    shares: tuple[Fraction, ...]
    sizes: tuple[int, ...]
    benchmark_sizes: tuple[int, ...]
    ratio: Optional[Factor] = None

    @property
    def meets_benchmark(self) -> bool:
        return all(v >= b for v, b in zip(self.values, self.benchmark)) and self.sizes == self.benchmark_sizes


def run_freq_pipeline(instance: Instance, oracle="rr", sequence: Optional[Sequence[int]] = None,
                      budget: Optional[BruteForceBudget] = None) -> tuple[Allocation, FreqReport]:
    """Predict the exact multisets from ``instance``, pick a sequence, and play the stream."""
    advice = Frequency(instance.multisets())
    profile = advice.multisets
    if sequence is None:
        fn = resolve_oracle(oracle)
        share = fn(profile, budget) if fn is share_bruteforce_maximin_ratio else fn(profile)
    else:
        bench = ido_bundle_values(sequence, profile)
        share = ShareResult(tuple(sequence), bench, bench)
    alloc = FreqMetaAllocator(instance.n, advice, sequence=share.sequence)
    for g in instance.goods:
        alloc.step(g)
    allocation = alloc.allocation()
    bundles = allocation.bundles()
    values = tuple(sum((instance.goods[g][i] for g in bundles[i]), Fraction(0)) for i in range(instance.n))
    ido_owner = simulate_picking(share.sequence, profile)
    bench_sizes = tuple(ido_owner.count(i) for i in range(instance.n))
    report = FreqReport(share.sequence, values, share.benchmark, share.shares,
                        tuple(len(b) for b in bundles), bench_sizes, share.ratio)
    return allocation, report
