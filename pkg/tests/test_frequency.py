from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import instances
from onlinefd.core import Frequency, Instance, run_online
from onlinefd.errors import (
    CardinalityMismatch,
    NotIdo,
    PredictionViolated,
    SequenceLengthMismatch,
)
from onlinefd.fairness import efx_factor, mms_factor
from onlinefd.frequency import (
    FreqMetaAllocator,
    allocation_to_sequence,
    ido_bundle_values,
    ido_profile,
    leximin_cut_choose,
    run_freq_pipeline,
    share_bruteforce_maximin_ratio,
    share_round_robin,
    simulate_picking,
)

F = Fraction


def table(*rows):
    return tuple(tuple(F(v) for v in r) for r in rows)


@st.composite
def instance_and_sequence(draw, n_max=3, m_max=8):
    inst = draw(instances(n_min=1, n_max=n_max, m_min=1, m_max=m_max))
    seq = tuple(draw(st.lists(st.integers(0, inst.n - 1), min_size=inst.m, max_size=inst.m)))
    return inst, seq


class TestProfiles:
    def test_sorting(self):
        assert ido_profile([[1, 3, 2], [2, 1, 3]]) == table((3, 2, 1), (3, 2, 1))
        assert ido_profile([[5], [7]]) == table((5,), (7,))
        assert ido_profile([[1, 1], [0, 2]]) == table((1, 1), (2, 0))

    def test_unequal_sizes(self):
        with pytest.raises(CardinalityMismatch):
            ido_profile([[1, 2], [1]])


class TestPicking:
    def test_ido_picks_in_order(self):
        assert simulate_picking((0, 1, 0), table((3, 2, 1), (3, 2, 1))) == (0, 1, 0)

    def test_single(self):
        assert simulate_picking((0,), table((4,), (4,))) == (0,)

    def test_favourites(self):
        # agent 0 picks g2, agent 1 picks g1, agent 0 picks g3 (1-based)
        assert simulate_picking((0, 1, 0), table((1, 3, 2), (2, 3, 1))) == (1, 0, 0)

    def test_ties_to_lowest_good(self):
        assert simulate_picking((1, 0), table((1, 1), (1, 1))) == (1, 0)

    def test_length_mismatch(self):
        with pytest.raises(SequenceLengthMismatch):
            simulate_picking((0, 1), table((1,), (1,)))

    def test_allocation_to_sequence(self):
        ido = table((3, 2, 1), (3, 2, 1))
        assert allocation_to_sequence((0, 1, 0), ido) == (0, 1, 0)
        assert allocation_to_sequence((0, 0, 0), ido) == (0, 0, 0)
        assert allocation_to_sequence((0, 1, 0, 1), table((4, 3, 2, 1), (4, 3, 2, 1))) == (0, 1, 0, 1)
        with pytest.raises(NotIdo):
            allocation_to_sequence((0, 1), table((1, 2), (2, 1)))

    def test_round_robin_share(self):
        assert share_round_robin(2, 3) == (0, 1, 0)
        assert share_round_robin(3, 3) == (0, 1, 2)
        assert share_round_robin(2, 4) == (0, 1, 0, 1)

    @given(instance_and_sequence())
    def test_round_trip(self, case):
        inst, seq = case
        ido = ido_profile(inst.multisets())
        owner = simulate_picking(seq, ido)
        assert simulate_picking(allocation_to_sequence(owner, ido), ido) == owner

    @given(instance_and_sequence())
    def test_true_profile_beats_ido(self, case):
        inst, seq = case
        true = tuple(inst.column(i) for i in range(inst.n))
        owner = simulate_picking(seq, true)
        got = [sum((true[i][g] for g, a in enumerate(owner) if a == i), F(0)) for i in range(inst.n)]
        bench = ido_bundle_values(seq, ido_profile(inst.multisets()))
        assert all(v >= b for v, b in zip(got, bench))

    @given(instance_and_sequence())
    def test_turn_value_bound(self, case):
        inst, seq = case
        true = tuple(inst.column(i) for i in range(inst.n))
        ido = ido_profile(inst.multisets())
        owner = simulate_picking(seq, true)
        for i in range(inst.n):
            got = sum((true[i][g] for g, a in enumerate(owner) if a == i), F(0))
            assert got >= sum((ido[i][k] for k, a in enumerate(seq) if a == i), F(0))


class TestOracles:
    def test_leximin_poorer_side_size(self):
        # {3} | {2,1,1} and {3,1} | {2,1} both miss by 1; the second has the larger poorer side
        r = leximin_cut_choose([[3, 2, 1, 1], [3, 2, 1, 1]])
        assert sorted(Counter(r.sequence).values()) == [2, 2]

    def test_bruteforce_examples(self):
        r = share_bruteforce_maximin_ratio([[1, 1], [1, 1]])
        assert r.ratio == 1 and r.sequence == (0, 1)
        assert share_bruteforce_maximin_ratio([[4, 4], [4, 4]]).ratio == 1
        r = share_bruteforce_maximin_ratio([[3, 1, 1, 1], [3, 1, 1, 1]])
        assert r.ratio == 1 and r.sequence == (0, 1, 1, 1)

    def test_leximin_examples(self):
        assert leximin_cut_choose([[1, 1], [1, 1]]).sequence == (0, 1)
        assert leximin_cut_choose([[F(1, 2), F(1, 2)], [1, 0]]).sequence == (1, 0)
        assert leximin_cut_choose([[1], [1]]).sequence == (1,)

    def test_leximin_zero_total(self):
        assert leximin_cut_choose([[0, 0], [1, 2]]).sequence == (1, 1)
        assert leximin_cut_choose([[1, 2], [0, 0]]).sequence == (0, 0)

    def test_leximin_balanced_cut(self):
        # the only perfectly balanced cut is {4} | {2,1,1}
        r = leximin_cut_choose([[4, 2, 1, 1], [4, 2, 1, 1]])
        assert sorted(Counter(r.sequence).values()) == [1, 3]

    @given(instances(n_min=2, n_max=2, m_min=1, m_max=8))
    def test_leximin_gives_efx(self, inst):
        alloc, _ = run_freq_pipeline(inst, "leximin")
        assert efx_factor(inst, alloc) >= 1


class TestMeta:
    def test_hand_trace(self):
        inst = Instance.from_columns([[1, 3, 2], [2, 1, 3]])
        alloc, rep = run_freq_pipeline(inst, "rr")
        assert rep.sequence == (0, 1, 0)
        assert alloc.bundles() == [[1, 2], [0]]
        assert rep.values == (5, 2) and rep.benchmark == (4, 2)
        assert rep.meets_benchmark

    def test_ido_order_reproduces_simulation(self):
        inst = Instance.from_columns([[5, 3, 1, 1], [4, 4, 2, 0]])
        seq = (1, 0, 0, 1)
        alloc, _ = run_freq_pipeline(inst, sequence=seq)
        assert alloc.owner == simulate_picking(seq, ido_profile(inst.multisets()))

    def test_single_agent_sequence(self):
        inst = Instance.from_columns([[1, 2, 3], [3, 2, 1]])
        alloc, _ = run_freq_pipeline(inst, sequence=(0, 0, 0))
        assert alloc.owner == (0, 0, 0)

    def test_prediction_violated(self):
        adv = Frequency(((F(1), F(2)), (F(1), F(2))))
        alloc = FreqMetaAllocator(2, adv)
        with pytest.raises(PredictionViolated):
            alloc.step((F(3), F(1)))

    def test_extra_good(self):
        alloc = FreqMetaAllocator(2, Frequency(((F(1),), (F(1),))))
        alloc.step((1, 1))
        with pytest.raises(PredictionViolated):
            alloc.step((1, 1))

    def test_bad_sequence_length(self):
        with pytest.raises(SequenceLengthMismatch):
            FreqMetaAllocator(2, Frequency(((F(1),), (F(1),))), sequence=(0, 1))

    def test_wrong_agent_count(self):
        with pytest.raises(CardinalityMismatch):
            FreqMetaAllocator(3, Frequency(((F(1),), (F(1),))))

    @given(instance_and_sequence())
    def test_lemma(self, case):
        inst, seq = case
        _, rep = run_freq_pipeline(inst, sequence=seq)
        assert rep.meets_benchmark

    @given(instance_and_sequence())
    def test_sequence_surgery(self, case):
        inst, seq = case
        alloc = FreqMetaAllocator(inst.n, Frequency(inst.multisets()), sequence=seq)
        for g in inst.goods:
            before = Counter(alloc.sequence)
            agent = alloc.step(g)
            before[agent] -= 1
            assert +before == Counter(alloc.sequence)
        assert alloc.sequence == []

    @given(instance_and_sequence(), st.randoms(use_true_random=False))
    def test_order_invariance(self, case, rnd):
        inst, seq = case
        order = list(range(inst.m))
        rnd.shuffle(order)
        _, rep = run_freq_pipeline(inst.permuted(order), sequence=seq)
        assert rep.meets_benchmark

    @given(instances(n_min=2, n_max=3, m_min=1, m_max=6, identical=True))
    def test_bruteforce_identical_mms(self, inst):
        alloc, rep = run_freq_pipeline(inst, "bruteforce")
        assert mms_factor(inst, alloc) >= rep.ratio

    def test_run_online_with_frequency_advice(self):
        inst = Instance.from_columns([[1, 3, 2], [2, 1, 3]])
        alloc = run_online(FreqMetaAllocator, inst, Frequency(inst.multisets()))
        assert alloc.owner == (1, 0, 0)
