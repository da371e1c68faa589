from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import EPS, SIX_GOODS, instances
from oracles import naive_norm_allocator
from onlinefd.core import INF, Instance, NoAdvice, TotalIntervals, Totals, golden_geq, golden_leq, run_online
from onlinefd.errors import IdenticalViolation, InvalidAdvice, Unsupported
from onlinefd.fairness import ef1_factor, efx_factor, fairness_report, mms_factor, prop1_factor
from onlinefd.online import (
    DumpAllocator,
    GreedyAllocator,
    NormAllocator,
    RoundRobinAllocator,
    ThresholdAllocator,
)


def norm_run(inst, advice=None):
    alloc = NormAllocator(inst.n, advice or Totals(inst.totals()))
    for g in inst.goods:
        alloc.step(g)
    return alloc


class TestNorm:
    def test_six_goods_trace(self, six_goods_instance):
        run = norm_run(six_goods_instance)
        a = run.allocation()
        assert a.owner == (0, 1, 1, 1, 0, 0)
        assert run.removed_at == {1: 4, 0: 5}
        vals = [sum(six_goods_instance.goods[g][i] for g in a.bundle(i)) for i in range(2)]
        assert vals == [Fraction(5, 8) - EPS, Fraction(3, 8) + EPS]
        assert ef1_factor(six_goods_instance, a) >= 1
        assert prop1_factor(six_goods_instance, a) >= 1
        assert run.certificate_holds()

    def test_single_good_empties_active_set(self):
        run = norm_run(Instance.identical(2, [1]))
        assert run.allocation().owner == (0,)
        assert run.active == set() and run.exhausted

    def test_dump_mode_is_sticky(self):
        inst = Instance.identical(2, [1, 0, 0])
        assert norm_run(inst, Totals((1, 1))).allocation().owner == (0, 0, 0)

    def test_three_thirds(self):
        inst = Instance.identical(3, [Fraction(1, 3)] * 3)
        assert prop1_factor(inst, norm_run(inst).allocation()) >= 1

    def test_intervals_use_lowers(self):
        inst = Instance.from_columns([[1, 0], [Fraction(9, 10), Fraction(1, 10)]])
        iv = TotalIntervals(((1, 1), (Fraction(9, 10), 1)))
        assert norm_run(inst, iv).scale == (1, Fraction(9, 10))

    def test_rejects_nonpositive_totals(self):
        with pytest.raises(InvalidAdvice):
            NormAllocator(2, Totals((1, 0)))
        with pytest.raises(InvalidAdvice):
            NormAllocator(3, Totals((1, 1)))

    @given(instances(n_min=2, n_max=4, m_min=1, m_max=8, positive_totals=True))
    def test_matches_transcription(self, inst):
        assert norm_run(inst).allocation().owner == naive_norm_allocator(inst, inst.totals())

    @given(instances(n_min=2, n_max=4, m_min=1, m_max=8, positive_totals=True))
    def test_prop1_and_certificate(self, inst):
        run = norm_run(inst)
        assert prop1_factor(inst, run.allocation()) >= 1
        assert run.certificate_holds()

    @given(instances(n_min=2, n_max=4, m_min=1, m_max=8, positive_totals=True))
    def test_removed_agents_never_return(self, inst):
        run = NormAllocator(inst.n, Totals(inst.totals()))
        removed = set()
        for g in inst.goods:
            run.step(g)
            gone = set(range(inst.n)) - run.active
            assert removed <= gone
            removed = gone

    @given(instances(n_min=2, n_max=2, m_min=1, m_max=8, positive_totals=True))
    def test_two_agents_ef1_and_half_mms(self, inst):
        a = norm_run(inst).allocation()
        assert ef1_factor(inst, a) >= 1
        assert mms_factor(inst, a) >= Fraction(1, 2)


class TestThreshold:
    def test_three_goods(self):
        inst = Instance.identical(2, [Fraction(1, 2), Fraction(3, 10), Fraction(1, 5)])
        a = run_online(ThresholdAllocator, inst, Totals((1, 1)))
        assert a.owner == (0, 1, 1)
        assert efx_factor(inst, a) == Fraction(5, 3)

    def test_whole_good_goes_to_second(self):
        a = run_online(ThresholdAllocator, Instance.identical(2, [1]), Totals((1, 1)))
        assert a.owner == (1,)

    def test_small_goods_stay_together(self):
        inst = Instance.identical(2, [EPS] * 24 + [1 - 24 * EPS])
        a = run_online(ThresholdAllocator, inst, Totals((1, 1)))
        assert a.owner[:24] == (0,) * 24

    def test_scales_by_common_total(self):
        inst = Instance.identical(2, [5, 3, 2])
        assert run_online(ThresholdAllocator, inst, Totals((10, 10))).owner == (0, 1, 1)

    def test_errors(self):
        with pytest.raises(Unsupported):
            ThresholdAllocator(3, Totals((1, 1, 1)))
        with pytest.raises(InvalidAdvice):
            ThresholdAllocator(2, Totals((1, 2)))
        with pytest.raises(Unsupported):
            ThresholdAllocator(2, TotalIntervals(((1, 2), (1, 2))))
        with pytest.raises(IdenticalViolation):
            ThresholdAllocator(2, Totals((1, 1))).step((Fraction(1, 2), Fraction(1, 3)))

    @given(instances(n_min=2, n_max=2, m_min=1, m_max=9, identical=True, positive_totals=True))
    def test_golden_guarantee(self, inst):
        a = run_online(ThresholdAllocator, inst, Totals(inst.totals()))
        total = inst.total(0)
        first = sum((inst.goods[g][0] for g in a.bundle(0)), Fraction(0)) / total
        assert golden_leq(first)
        assert golden_geq(efx_factor(inst, a))


class TestGreedy:
    def test_three_ones(self):
        assert run_online(GreedyAllocator, Instance.identical(2, [1, 1, 1])).owner == (0, 1, 0)

    def test_big_first(self):
        inst = Instance.identical(2, [5, 1, 1, 1, 1, 1])
        a = run_online(GreedyAllocator, inst)
        assert a.owner == (0, 1, 1, 1, 1, 1)
        assert ef1_factor(inst, a) == Fraction(5, 4)

    def test_empty_stream(self):
        inst = Instance.identical(2, [])
        rep = fairness_report(inst, run_online(GreedyAllocator, inst))
        assert (rep.ef1, rep.efx, rep.prop1, rep.mms) == (INF, INF, INF, INF)

    def test_rejects_distinct_values(self):
        with pytest.raises(IdenticalViolation):
            GreedyAllocator(2).step((1, 2))

    @given(instances(n_min=2, n_max=4, m_max=10, identical=True))
    def test_ef1(self, inst):
        assert ef1_factor(inst, run_online(GreedyAllocator, inst)) >= 1


class TestBaselines:
    def test_dump(self):
        assert ef1_factor(Instance.identical(2, [1]), run_online(DumpAllocator, Instance.identical(2, [1]))) == INF
        inst = Instance.identical(2, [1, 1])
        assert ef1_factor(inst, run_online(DumpAllocator, inst)) == 0

    @given(st.integers(1, 4), st.integers(0, 9))
    def test_round_robin_cycles(self, n, m):
        inst = Instance.identical(n, [1] * m)
        assert run_online(RoundRobinAllocator, inst, NoAdvice()).owner == tuple(t % n for t in range(m))
