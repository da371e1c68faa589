"""
Adaptive adversaries that force small fairness factors.

Each adversary announces advice, reacts to the allocator's past decisions and
reports a symbolic ceiling on one fairness factor. :func:`certify_bound` plays
a match and checks that the measured factor does not exceed the ceiling.
Where a construction says "without loss of generality agent 1", the adversary
instead remembers which concrete agent ended up in that role.

>>> from onlinefd.online import GreedyAllocator
>>> transcript, bound, holds = certify_bound(A5IdenticalNoInfoEFX(4), GreedyAllocator)
>>> transcript.allocation.owner, transcript.report.efx, holds
((0, 1, 0), Fraction(1, 4), True)
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Optional

from onlinefd.core import (
    Adversary,
    AllocatorFactory,
    Bound,
    Frequency,
    NoAdvice,
    Totals,
    Transcript,
    run_match,
)
from onlinefd.errors import InvalidValue

DEFAULTS = {"K": Fraction(100), "eps": Fraction(1, 100), "delta": Fraction(100), "k": 2, "n": 3}


def _positive(name: str, value, lower=0) -> Fraction:
    v = Fraction(value)
    if v <= lower:
        raise InvalidValue(f"{name} must exceed {lower}, got {v}")
    return v


class A1NoInfoEF1(Adversary):
    """No advice: any rule can be pushed to EF1 factor at most ``1/K``."""

    name = "a1"

    def __init__(self, n: int = 2, K=DEFAULTS["K"]):
        super().__init__(n)
        if n < 2:
            raise InvalidValue("needs at least two agents")
        self.K = _positive("K", K, 1)
        self.emitted = 0

    def advice(self):
        return NoAdvice()

    def _emit(self, last):
        n, K = self.n, self.K
        self.emitted += 1
        if self.emitted == 1:
            return [Fraction(1)] * n
        a = self.history[0]
        if self.emitted == 2:
            return [K if i == a else 1 / K for i in range(n)]
        if self.history[1] == a:
            self.branch = "second good to first recipient"
            return [Fraction(0)] * n if self.emitted == 3 else None
        self.branch = "second good elsewhere"
        b = self.history[1]
        if self.emitted <= 2 + (n - 1):
            return [K if i in (a, b) else Fraction(1) for i in range(n)]
        return None

    def bound(self):
        return Bound("EF1", 1 / self.K)


class A2NormEFXTwoAgents(Adversary):
    """Two agents with unit totals; EFX factor driven toward zero as ``k`` grows.

    Tiny probes worth ``2**-k**3`` to the first recipient and ``2**-k**2`` to
    the other agent keep arriving until the other agent accepts one, at which
    point a finisher good restores both totals to 1.
    """

    name = "a2"

    def __init__(self, k: int = DEFAULTS["k"]):
        super().__init__(2)
        if int(k) != k or k < 2:
            raise InvalidValue(f"k must be an integer >= 2, got {k}")
        self.k = int(k)
        self.tiny = Fraction(1, 2 ** (self.k ** 3))
        self.small = Fraction(1, 2 ** (self.k ** 2))
        self.length = 2 ** (self.k ** 2)
        self.emitted = 0
        self.done = False

    def advice(self):
        return Totals((1, 1))

    def _pair(self, recipient_value, other_value):
        r = self.history[0]
        return [recipient_value, other_value] if r == 0 else [other_value, recipient_value]

    def _emit(self, last):
        if self.done:
            return None
        self.emitted += 1
        a, b, ell = self.tiny, self.small, self.length
        if self.emitted == 1:
            return [a, a]
        r = self.history[0]
        if self.emitted >= 3 and self.history[-1] != r:
            # the previous probe g_j went to the other agent: finish now
            j = self.emitted - 1
            self.done = True
            self.branch = f"probe g{j} to the other agent"
            return self._pair(1 - j * a, 1 - a - (j - 1) * b)
        if self.emitted <= ell:
            self.branch = "probing"
            return self._pair(a, b)
        self.done = True
        self.branch = "every probe to the first recipient"
        return self._pair(1 - ell * a, b - a)

    def bound(self):
        a, b, ell = self.tiny, self.small, self.length
        return Bound("EFX", max(1 / (2 ** (self.k ** 3) - 2), b / (1 - a - b), (b - a) / (1 - b),
                                ell * a / (1 - ell * a)))

    def branch_checks(self) -> dict[str, bool]:
        """Inequalities the construction relies on, evaluated at this ``k``."""
        a, b, ell = self.tiny, self.small, self.length
        return {
            "2*tiny < small": 2 * a < b,
            "tiny*length < 1": ell * a < 1,
            "tiny + small < 1": a + b < 1,
            "ceiling < 1": self.bound().ceiling < 1,
        }


class A3NormEF1ManyAgents(Adversary):
    """Unit totals, ``n >= 3``: EF1 factor at most ``max(1/delta, eps/(1/n - (n-1)eps))``."""

    name = "a3"

    def __init__(self, n: int = DEFAULTS["n"], eps=DEFAULTS["eps"], delta=DEFAULTS["delta"]):
        super().__init__(n)
        if n < 3:
            raise InvalidValue("needs at least three agents")
        self.eps = _positive("eps", eps)
        self.delta = _positive("delta", delta, 1)
        if self.eps >= Fraction(1, n * (n - 1)):
            raise InvalidValue(f"eps must be below 1/(n(n-1)) = {Fraction(1, n * (n - 1))}")
        self.emitted = 0

    def advice(self):
        return Totals((1,) * self.n)

    def _emit(self, last):
        n, e, d = self.n, self.eps, self.delta
        self.emitted += 1
        if self.emitted == 1:
            return [e] * n
        p = self.history[0]

        def row(mine, others):
            return [mine if i == p else others for i in range(n)]

        if self.emitted == 2:
            return row(Fraction(1, n), e / d)
        same = self.history[1] == p
        self.branch = "second good to first recipient" if same else "second good elsewhere"
        if self.emitted <= n:
            return row(Fraction(1, n) + e, e / d ** 2 if same else e)
        if self.emitted == n + 1:
            if same:
                return row(Fraction(1, n) - (n - 1) * e, 1 - e - e / d - (n - 2) * e / d ** 2)
            return row(Fraction(1, n) - (n - 1) * e, 1 - (n - 1) * e - e / d)
        return None

    def bound(self):
        n, e = self.n, self.eps
        return Bound("EF1", max(1 / self.delta, e / (Fraction(1, n) - (n - 1) * e)))


class A4FreqEFXManyAgents(Adversary):
    """Frequency predictions, ``n >= 3``: a fixed table with one relabelled row."""

    name = "a4"

    def __init__(self, n: int = DEFAULTS["n"], eps=DEFAULTS["eps"], K=DEFAULTS["K"]):
        super().__init__(n)
        if n < 3:
            raise InvalidValue("needs at least three agents")
        self.eps = _positive("eps", eps)
        self.K = _positive("K", K, 1)
        if self.eps >= self.K:
            raise InvalidValue("eps must be smaller than K")
        K2, e = self.K ** 2, self.eps
        self.special_row = [self.K, K2, e] + [K2] * (n - 3) + [e]
        self.plain_row = [self.K, e, e] + [K2] * (n - 2)
        self.emitted = 0

    def advice(self):
        return Frequency((tuple(self.plain_row),) * self.n)

    def _emit(self, last):
        t = self.emitted
        self.emitted += 1
        if t > self.n:
            return None
        if t == 0:
            return [self.K] * self.n
        special = self.history[0]
        self.branch = f"agent {special} holds the first good"
        return [self.special_row[t] if i == special else self.plain_row[t] for i in range(self.n)]

    def bound(self):
        K, e = self.K, self.eps
        return Bound("EFX", max(e / K, (K + 2 * e) / K ** 2))


class A5IdenticalNoInfoEFX(Adversary):
    """Two agents, identical values, no advice: EFX factor at most ``1/K``."""

    name = "a5"
    identical = True

    def __init__(self, K=DEFAULTS["K"]):
        super().__init__(2)
        self.K = _positive("K", K, 1)
        self.emitted = 0

    def advice(self):
        return NoAdvice()

    def _emit(self, last):
        self.emitted += 1
        if self.emitted <= 2:
            return [Fraction(1)] * 2
        if self.emitted == 3:
            together = self.history[0] == self.history[1]
            self.branch = "first two together" if together else "first two split"
            v = Fraction(0) if together else self.K
            return [v, v]
        return None

    def bound(self):
        return Bound("EFX", 1 / self.K)


class A6IdenticalNormEFXManyAgents(Adversary):
    """Identical values with unit totals, ``n >= 3``: EFX factor at most ``(n-1)eps/(1-2eps)``."""

    name = "a6"
    identical = True

    def __init__(self, n: int = DEFAULTS["n"], eps=DEFAULTS["eps"]):
        super().__init__(n)
        if n < 3:
            raise InvalidValue("needs at least three agents")
        self.eps = _positive("eps", eps)
        if self.eps >= Fraction(1, 2):
            raise InvalidValue("eps must be below 1/2")
        self.emitted = 0

    def advice(self):
        return Totals((1,) * self.n)

    def _emit(self, last):
        n, e = self.n, self.eps
        self.emitted += 1
        if self.emitted <= 2:
            return [e] * n
        if self.emitted > n + 1:
            return None
        if self.history[0] == self.history[1]:
            self.branch = "first two together"
            v = 1 - 2 * e if self.emitted == 3 else Fraction(0)
        else:
            self.branch = "first two split"
            v = (1 - 2 * e) / (n - 1)
        return [v] * n

    def bound(self):
        return Bound("EFX", (self.n - 1) * self.eps / (1 - 2 * self.eps))

    def branch_ceiling(self):
        if self.branch == "first two together":
            return Fraction(0)
        if self.branch == "first two split":
            return self.bound().ceiling
        return None


def a5_identical_noinfo_efx(K=DEFAULTS["K"], n: int = 2) -> Adversary:
    """Two-agent construction, or the unit-total one with ``eps = 1/K`` for ``n >= 3``."""
    if n == 2:
        return A5IdenticalNoInfoEFX(K)
    K = _positive("K", K, 4)
    return A6IdenticalNormEFXManyAgents(n, 1 / K)


def golden_block_size(eps: Fraction) -> int:
    """Smallest ``k`` with ``k*eps >= sqrt(5) - 2``, decided exactly."""
    k = max(1, math.floor(Fraction(236, 1000) / eps))
    while (k * eps + 2) ** 2 < 5:
        k += 1
    while k > 1 and ((k - 1) * eps + 2) ** 2 >= 5:
        k -= 1
    return k


class A7IdenticalNormEFXTwoAgents(Adversary):
    """Two agents, identical values, unit totals: pins EFX near ``(sqrt(5)-1)/2``."""

    name = "a7"
    identical = True

    def __init__(self, eps=DEFAULTS["eps"]):
        super().__init__(2)
        self.eps = _positive("eps", eps)
        self.k = golden_block_size(self.eps)
        if self.k < 2 or self.k * self.eps >= 1:
            raise InvalidValue(f"eps={self.eps} too large (block size {self.k})")
        self.emitted = 0

    def advice(self):
        return Totals((1, 1))

    def _emit(self, last):
        k, e = self.k, self.eps
        t = self.emitted
        self.emitted += 1
        if t < k:
            return [e, e]
        if len(set(self.history[:k])) == 2:
            self.branch = "small goods split"
            return [1 - k * e] * 2 if t == k else None
        if t < k + 2:
            return [(1 - k * e) / 2] * 2
        holder = self.history[0]
        to_other = self.history[k] != holder and self.history[k + 1] != holder
        self.branch = "both halves to the other agent" if to_other else "a half stays with the holder"
        return None

    def branch_ceilings(self) -> dict[str, Fraction]:
        k, e = self.k, self.eps
        return {
            "small goods split": (k - 1) * e / (1 - k * e),
            "a half stays with the holder": (1 - k * e) / (k * e - 2 * e + 1),
            "both halves to the other agent": 2 * k * e / (1 - k * e),
        }

    def branch_ceiling(self):
        return self.branch_ceilings().get(self.branch)

    def bound(self):
        return Bound("EFX", max(self.branch_ceilings().values()))


ADVERSARIES = {
    "a1": lambda K=DEFAULTS["K"], n=2, **_: A1NoInfoEF1(n, K),
    "a2": lambda k=DEFAULTS["k"], **_: A2NormEFXTwoAgents(k),
    "a3": lambda n=3, eps=DEFAULTS["eps"], delta=DEFAULTS["delta"], **_: A3NormEF1ManyAgents(n, eps, delta),
    "a4": lambda n=3, eps=DEFAULTS["eps"], K=DEFAULTS["K"], **_: A4FreqEFXManyAgents(n, eps, K),
    "a5": lambda K=DEFAULTS["K"], n=2, **_: a5_identical_noinfo_efx(K, n),
    "a6": lambda n=3, eps=DEFAULTS["eps"], **_: A6IdenticalNormEFXManyAgents(n, eps),
    "a7": lambda eps=DEFAULTS["eps"], **_: A7IdenticalNormEFXTwoAgents(eps),
}


def make_adversary(name: str, **params) -> Adversary:
    try:
        build = ADVERSARIES[name.lower()]
    except KeyError:
        raise InvalidValue(f"unknown adversary {name!r}; choose from {sorted(ADVERSARIES)}") from None
    return build(**{k: v for k, v in params.items() if v is not None})


def certify_bound(adversary: Adversary, factory: AllocatorFactory,
                  strict: bool = False) -> tuple[Transcript, Bound, bool]:
    """Play the match and check the measured factor against the adversary's ceiling."""
    transcript = run_match(factory, adversary, strict=strict)
    bound = adversary.bound()
    measured = transcript.report.factor(bound.property)
    return transcript, bound, measured is not None and measured <= bound.ceiling
