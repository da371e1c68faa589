"""Seeded random instances and picking sequences for fuzzing and tests."""
from __future__ import annotations

import random
from fractions import Fraction

from onlinefd.core import Instance


def random_values(rng: random.Random, m: int, denominator: int = 64) -> list[Fraction]:
    return [Fraction(rng.randint(0, denominator), denominator) for _ in range(m)]


def random_instance(rng: random.Random, n: int, m: int, denominator: int = 64,
                    positive_totals: bool = True) -> Instance:
    """Numerators uniform in ``[0, denominator]``; with ``positive_totals`` no agent values everything at 0."""
    while True:
        columns = [random_values(rng, m, denominator) for _ in range(n)]
        if not positive_totals or m == 0 or all(any(c) for c in columns):
            return Instance.from_columns(columns)


def random_identical_instance(rng: random.Random, n: int, m: int, denominator: int = 64,
                              positive_totals: bool = True) -> Instance:
    while True:
        values = random_values(rng, m, denominator)
        if not positive_totals or m == 0 or any(values):
            return Instance.identical(n, values)


def random_sequence(rng: random.Random, n: int, m: int) -> tuple[int, ...]:
    return tuple(rng.randrange(n) for _ in range(m))
