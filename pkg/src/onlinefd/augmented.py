"""
Allocators fed imperfect advice.

``noisy_norm_run`` runs the normalization allocator with certified total
intervals and reports the additive EF1 slack and the kappa-PROP1 check.
``noisy_freq_run`` runs the frequency meta-allocator on predicted multisets,
mapping each observed value to a predicted one with a pluggable rule.

>>> remaining = [Fraction(3), Fraction(1)]
>>> instantiate_closest(remaining, Fraction(2)), remaining
(Fraction(1, 1), [Fraction(3, 1)])
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from onlinefd.core import INF, Allocation, Factor, Frequency, Instance, TotalIntervals
from onlinefd.errors import CardinalityMismatch, ExhaustedPredictions, InvalidInterval
from onlinefd.fairness import BruteForceBudget, prop1_factor
from onlinefd.frequency import (
    FreqMetaAllocator,
    Instantiation,
    ShareResult,
    resolve_oracle,
    share_bruteforce_maximin_ratio,
)
from onlinefd.online import NormAllocator

logger = logging.getLogger(__name__)


# ------------------------------------------------------ noisy normalization


@dataclass(frozen=True)
class NoisyNormReport:
    rho: tuple[Fraction, ...]          # upper - lower
    kappa: tuple[Fraction, ...]        # lower / upper
    additive_ef1_slack: Factor         # min over pairs of v_i(A_i) - v_i(A_j - best) + rho_i
    prop1: Factor
    prop1_ratios: tuple[Factor, ...]   # per-agent PROP1 ratio

    @property
    def additive_ef1_holds(self) -> bool:
        return self.additive_ef1_slack >= 0

    @property
    def kappa_prop1_holds(self) -> bool:
        return all(r >= k for r, k in zip(self.prop1_ratios, self.kappa))


def check_intervals(instance: Instance, intervals: TotalIntervals) -> None:
    if len(intervals.bounds) != instance.n:
        raise InvalidInterval(f"{len(intervals.bounds)} intervals for {instance.n} agents")
    for i, ((lo, hi), total) in enumerate(zip(intervals.bounds, instance.totals())):
        if not 0 < lo <= total <= hi:
            raise InvalidInterval(f"agent {i}: total {total} not inside [{lo}, {hi}]")


def additive_ef1_slack(instance: Instance, allocation: Allocation, rho: Sequence[Fraction]) -> Factor:
    bundles = allocation.bundles()
    slack: Factor = INF
    for i in range(instance.n):
        own = sum((instance.goods[g][i] for g in bundles[i]), Fraction(0))
        for j in range(instance.n):
            if i == j or not bundles[j]:
                continue
            vals = [instance.goods[g][i] for g in bundles[j]]
            slack = min(slack, own - (sum(vals, Fraction(0)) - max(vals)) + rho[i])
    return slack


def _prop1_ratio(instance: Instance, allocation: Allocation, agent: int) -> Factor:
    total = instance.total(agent)
    own = Fraction(0)
    outside = []
    for t, a in enumerate(allocation.owner):
        if a == agent:
            own += instance.goods[t][agent]
        else:
            outside.append(instance.goods[t][agent])
    if not outside or total == 0:
        return INF
    return (own + max(outside)) / (total / instance.n)


def noisy_norm_run(instance: Instance, intervals: TotalIntervals) -> tuple[Allocation, NoisyNormReport]:
    """Normalization allocator scaled by lower bounds.

    >>> inst = Instance.from_columns([[1, 0], ["9/10", "1/10"]])
    >>> alloc, rep = noisy_norm_run(inst, TotalIntervals(((1, 1), ("9/10", 1))))
    >>> alloc.owner, rep.additive_ef1_slack
    ((0, 0), Fraction(0, 1))
    """
    check_intervals(instance, intervals)
    allocator = NormAllocator(instance.n, intervals)
    for g in instance.goods:
        allocator.step(g)
    allocation = allocator.allocation()
    rho = tuple(hi - lo for lo, hi in intervals.bounds)
    kappa = tuple(lo / hi for lo, hi in intervals.bounds)
    ratios = tuple(_prop1_ratio(instance, allocation, i) for i in range(instance.n))
    report = NoisyNormReport(rho, kappa, additive_ef1_slack(instance, allocation, rho),
                             prop1_factor(instance, allocation), ratios)
    return allocation, report


# --------------------------------------------------------- noisy frequency


def instantiate_closest(remaining: list[Fraction], observed: Fraction) -> Fraction:
    """Remove and return the unused prediction nearest to ``observed`` (ties to the smaller)."""
    if not remaining:
        raise ExhaustedPredictions("no predicted values left for this agent")
    idx = min(range(len(remaining)), key=lambda k: (abs(remaining[k] - observed), remaining[k]))
    return remaining.pop(idx)


def sorted_matching_cost(true_values: Sequence[Fraction], predicted: Sequence[Fraction]) -> Fraction:
    """Cheapest total |difference| over bijections: match the two sorted lists."""
    if len(true_values) != len(predicted):
        raise CardinalityMismatch("matching cost needs equal cardinalities")
    return sum((abs(a - b) for a, b in zip(sorted(true_values), sorted(predicted))), Fraction(0))


@dataclass(frozen=True)
class InstantiationTrace:
    virtual: tuple[tuple[Fraction, ...], ...]   # virtual[t][i]
    eta: tuple[Fraction, ...]
    eps: tuple[Fraction, ...]
    matching_cost: tuple[Fraction, ...]
    shares: tuple[Fraction, ...]
    values: tuple[Fraction, ...]                # true v_i(A_i)

    def virtual_multiset(self, agent: int) -> tuple[Fraction, ...]:
        return tuple(sorted((row[agent] for row in self.virtual), reverse=True))

    @property
    def multiplicative_holds(self) -> bool:
        return all(v >= (1 - e) * s for v, e, s in zip(self.values, self.eps, self.shares))

    @property
    def additive_holds(self) -> bool:
        return all(v >= s - h for v, s, h in zip(self.values, self.shares, self.eta))

    @property
    def matching_bound_holds(self) -> bool:
        return all(h >= c for h, c in zip(self.eta, self.matching_cost))


def noisy_freq_run(instance: Instance, predicted: Sequence[Sequence], oracle="rr",
                   instantiate: Instantiation = instantiate_closest,
                   budget: Optional[BruteForceBudget] = None
                   ) -> tuple[Allocation, InstantiationTrace, bool]:
    """Meta-allocator on predicted multisets; checks the degraded share guarantee.

    >>> inst = Instance.from_columns([[3, 2, 1], [3, 2, 1]])
    >>> alloc, trace, ok = noisy_freq_run(inst, [[3, 2, 1], [3, 2, 1]])
    >>> trace.eta, ok
    ((Fraction(0, 1), Fraction(0, 1)), True)
    """
    advice = Frequency(tuple(tuple(ms) for ms in predicted))
    if len(advice.multisets) != instance.n or advice.m != instance.m:
        raise CardinalityMismatch(f"predictions must list {instance.m} values for each of {instance.n} agents")
    fn = resolve_oracle(oracle)
    share: ShareResult = fn(advice.multisets, budget) if fn is share_bruteforce_maximin_ratio else fn(advice.multisets)
    allocator = FreqMetaAllocator(instance.n, advice, sequence=share.sequence, instantiate=instantiate)
    for g in instance.goods:
        allocator.step(g)
    allocation = allocator.allocation()
    bundles = allocation.bundles()
    n = instance.n
    values = tuple(sum((instance.goods[g][i] for g in bundles[i]), Fraction(0)) for i in range(n))
    eta = tuple(sum((abs(instance.goods[t][i] - allocator.virtual[t][i]) for t in range(instance.m)),
                    Fraction(0)) for i in range(n))
    eps = tuple(Fraction(0) if s == 0 else min(Fraction(1), h / s) for h, s in zip(eta, share.shares))
    cost = tuple(sorted_matching_cost(instance.column(i), advice.multisets[i]) for i in range(n))
    trace = InstantiationTrace(tuple(allocator.virtual), eta, eps, cost, share.shares, values)
    holds = trace.multiplicative_holds and trace.additive_holds
    return allocation, trace, holds
