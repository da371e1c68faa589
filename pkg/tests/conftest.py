import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from onlinefd.core import Instance, OnlineAllocator

settings.register_profile("default", max_examples=150, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

EPS = Fraction(1, 100)
SIX_GOODS = [Fraction(1, 4) - EPS, EPS] + [Fraction(3, 16)] * 4


@pytest.fixture
def six_goods_instance():
    return Instance.identical(2, SIX_GOODS)


@pytest.fixture
def rng():
    return random.Random(20240611)


def values(denominator=16, max_numerator=16):
    return st.integers(0, max_numerator).map(lambda k: Fraction(k, denominator))


@st.composite
def instances(draw, n_min=1, n_max=3, m_min=0, m_max=6, positive_totals=False, identical=False):
    n = draw(st.integers(n_min, n_max))
    m = draw(st.integers(m_min, m_max))
    if identical:
        vals = draw(st.lists(values(), min_size=m, max_size=m))
        if positive_totals and m and not any(vals):
            vals[0] = Fraction(1, 16)
        return Instance.identical(n, vals)
    cols = [draw(st.lists(values(), min_size=m, max_size=m)) for _ in range(n)]
    if positive_totals and m:
        for c in cols:
            if not any(c):
                c[draw(st.integers(0, m - 1))] = Fraction(1, 16)
    return Instance.from_columns(cols)


@st.composite
def instance_and_owner(draw, **kw):
    inst = draw(instances(**kw))
    owner = tuple(draw(st.lists(st.integers(0, inst.n - 1), min_size=inst.m, max_size=inst.m)))
    return inst, owner


class ScriptedAllocator(OnlineAllocator):
    """Follows a fixed decision list (cycled), ignoring values; used to steer adversaries."""

    name = "scripted"

    def __init__(self, n, advice, script=(0,)):
        super().__init__(n, advice)
        self.script = tuple(script)

    def _choose(self, values):
        return self.script[len(self.owner) % len(self.script)] % self.n


def scripted(script):
    return lambda n, advice: ScriptedAllocator(n, advice, script)
