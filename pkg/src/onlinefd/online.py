"""
Online allocators that see one good at a time.

* :class:`NormAllocator` uses per-agent totals (or certified lower bounds on
  them) and keeps every agent's proportional certificate alive.
* :class:`ThresholdAllocator` is the two-agent identical-valuation rule that
  fills the first bundle up to the golden-ratio conjugate.
* :class:`GreedyAllocator` gives each good to the least-loaded agent.
* :class:`DumpAllocator` and :class:`RoundRobinAllocator` are baselines.

>>> from onlinefd.core import Instance, Totals, run_online
>>> inst = Instance.identical(2, ["1/2", "3/10", "1/5"])
>>> run_online(ThresholdAllocator, inst, Totals((1, 1))).owner
(0, 1, 1)
>>> run_online(GreedyAllocator, Instance.identical(2, [1, 1, 1])).owner
(0, 1, 0)
"""
from __future__ import annotations

import logging
from fractions import Fraction

from onlinefd.core import (
    Advice,
    NoAdvice,
    OnlineAllocator,
    TotalIntervals,
    Totals,
    golden_leq,
)
from onlinefd.errors import IdenticalViolation, InvalidAdvice, Unsupported

logger = logging.getLogger(__name__)


def _common_value(values: tuple[Fraction, ...]) -> Fraction:
    if len(set(values)) > 1:
        raise IdenticalViolation(f"identical valuations expected, got {values}")
    return values[0]


class NormAllocator(OnlineAllocator):
    """Certificate-keeping allocator driven by per-agent totals.

    Values are divided by the lower total bound of each agent. An agent stays
    *active* while its bundle plus ``(n-1)/n`` of the best good it has seen go
    elsewhere is below ``1/n``. Active agents compete for each good; once no
    agent is active every remaining good goes to agent 0.
    """

    name = "norm"
    accepts = frozenset({"totals", "intervals"})

    def __init__(self, n: int, advice: Advice):
        super().__init__(n, advice)
        if isinstance(advice, Totals):
            scale = advice.totals
        else:
            assert isinstance(advice, TotalIntervals)
            scale = advice.lowers
        if len(scale) != n:
            raise InvalidAdvice(f"advice covers {len(scale)} agents, expected {n}")
        if any(s <= 0 for s in scale):
            raise InvalidAdvice(f"normalization needs positive totals, got {scale}")
        self.scale = tuple(scale)
        self.bundle_value = [Fraction(0)] * n
        self.outside_max = [Fraction(0)] * n
        self.active = set(range(n))
        self.exhausted = False
        self.removed_at: dict[int, int] = {}
        self.scaled_goods: list[tuple[Fraction, ...]] = []

    def _choose(self, values):
        t = len(self.owner)
        scaled = tuple(v / s for v, s in zip(values, self.scale))
        self.scaled_goods.append(scaled)
        if self.exhausted or not self.active:
            self.exhausted = True
            return 0
        n = self.n
        x = {i: self.bundle_value[i] + Fraction(n - 1, n) * max(self.outside_max[i], scaled[i])
             for i in self.active}
        for i in sorted(self.active):
            if x[i] >= Fraction(1, n):
                self.active.discard(i)
                self.removed_at[i] = t
                logger.debug("t=%d: agent %d leaves the active set (x=%s)", t, i, x[i])
        if not self.active:
            self.exhausted = True
            return 0
        k = min(self.active, key=lambda j: (-scaled[j], x[j], j))
        self.bundle_value[k] += scaled[k]
        for i in range(n):
            if i != k:
                self.outside_max[i] = max(self.outside_max[i], scaled[i])
        return k

    def certificate_holds(self) -> bool:
        """Every removed agent ends with ``v_i(A_i) + (n-1)/n * M_i >= 1/n`` (scaled values)."""
        owned = [Fraction(0)] * self.n
        outside = [Fraction(0)] * self.n
        for scaled, a in zip(self.scaled_goods, self.owner):
            for i in range(self.n):
                if i == a:
                    owned[i] += scaled[i]
                else:
                    outside[i] = max(outside[i], scaled[i])
        alpha = Fraction(self.n - 1, self.n)
        return all(owned[i] + alpha * outside[i] >= Fraction(1, self.n) for i in self.removed_at)


class ThresholdAllocator(OnlineAllocator):
    """Two agents, identical valuations, known common total.

    Agent 0 takes a good while its normalized bundle stays at or below
    ``(sqrt(5)-1)/2``; everything else goes to agent 1.
    """

    name = "threshold"
    accepts = frozenset({"totals", "intervals"})
    identical_only = True

    def __init__(self, n: int, advice: Advice):
        super().__init__(n, advice)
        if n != 2:
            raise Unsupported(f"threshold allocator is for two agents, got n={n}")
        if isinstance(advice, TotalIntervals):
            if advice.lowers != advice.uppers:
                raise Unsupported("threshold allocator needs exact totals, not intervals")
            totals = advice.lowers
        else:
            totals = advice.totals
        if len(totals) != 2 or totals[0] != totals[1] or totals[0] <= 0:
            raise InvalidAdvice(f"identical valuations need one equal positive total, got {totals}")
        self.total = totals[0]
        self.first_value = Fraction(0)

    def _choose(self, values):
        v = _common_value(values) / self.total
        if golden_leq(self.first_value + v):
            self.first_value += v
            return 0
        return 1


class GreedyAllocator(OnlineAllocator):
    """Least-loaded agent first, ties to the lowest index (identical valuations).

    >>> from onlinefd.core import Instance, run_online
    >>> run_online(GreedyAllocator, Instance.identical(2, [5, 1, 1, 1, 1, 1])).owner
    (0, 1, 1, 1, 1, 1)
    """

    name = "greedy"
    identical_only = True

    def __init__(self, n: int, advice: Advice = NoAdvice()):
        super().__init__(n, advice)
        self.load = [Fraction(0)] * n

    def _choose(self, values):
        v = _common_value(values)
        k = min(range(self.n), key=lambda i: (self.load[i], i))
        self.load[k] += v
        return k


class DumpAllocator(OnlineAllocator):
    """Every good to agent 0."""

    name = "dump"

    def _choose(self, values):
        return 0


class RoundRobinAllocator(OnlineAllocator):
    """Goods handed out cyclically, ignoring values."""

    name = "round-robin"

    def _choose(self, values):
        return len(self.owner) % self.n

