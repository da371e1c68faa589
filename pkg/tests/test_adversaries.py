from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import scripted
from onlinefd.adversaries import (
    ADVERSARIES,
    A2NormEFXTwoAgents,
    A3NormEF1ManyAgents,
    A5IdenticalNoInfoEFX,
    A6IdenticalNormEFXManyAgents,
    A7IdenticalNormEFXTwoAgents,
    a5_identical_noinfo_efx,
    certify_bound,
    golden_block_size,
    make_adversary,
)
from onlinefd.core import NoAdvice, golden_geq, run_match
from onlinefd.errors import AdversaryInconsistent, AdviceMismatch, InvalidValue
from onlinefd.online import DumpAllocator, GreedyAllocator, NormAllocator, RoundRobinAllocator, ThresholdAllocator
from onlinefd.registry import ALGORITHMS, compatible_algorithms

F = Fraction


class TestExamples:
    def test_a1_dump(self):
        t, b, ok = certify_bound(make_adversary("a1", K=10), DumpAllocator)
        assert t.report.ef1 == 0 and ok and b.ceiling == F(1, 10)

    def test_a1_splitter(self):
        t, _, ok = certify_bound(make_adversary("a1", K=10), RoundRobinAllocator)
        assert t.report.ef1 <= F(1, 10) and ok

    def test_a1_rejects_normalization(self):
        with pytest.raises(AdviceMismatch):
            run_match(NormAllocator, make_adversary("a1"))

    def test_a2_ceiling_and_branches(self):
        adv = A2NormEFXTwoAgents(2)
        assert all(adv.branch_checks().values())
        t, b, ok = certify_bound(adv, NormAllocator, strict=True)
        assert ok and t.report.efx == F(16, 239) == b.ceiling

    def test_a2_first_case_formula(self):
        # one of the case ratios; the ceiling is the largest of them
        adv = A2NormEFXTwoAgents(2)
        a, b = adv.tiny, adv.small
        assert (b - a) / (1 - b) == F(1, 16)

    def test_a3(self):
        for algo in (NormAllocator, DumpAllocator):
            t, b, ok = certify_bound(A3NormEF1ManyAgents(3, F(1, 100), 100), algo, strict=True)
            assert ok
        assert certify_bound(A3NormEF1ManyAgents(), DumpAllocator)[0].report.ef1 == 0
        assert A3NormEF1ManyAgents().bound().ceiling == max(F(1, 100), F(1, 100) / (F(1, 3) - F(2, 100)))

    def test_a4(self):
        t, b, ok = certify_bound(make_adversary("a4"), ALGORITHMS["freq-rr"], strict=True)
        assert ok and t.report.efx <= max(F(1, 10 ** 4), F(1, 100) + F(2, 100) / 10 ** 4)
        assert certify_bound(make_adversary("a4"), DumpAllocator)[0].report.efx == 0

    def test_a5(self):
        t, _, _ = certify_bound(A5IdenticalNoInfoEFX(4), GreedyAllocator)
        assert t.report.efx == F(1, 4)
        assert certify_bound(A5IdenticalNoInfoEFX(4), DumpAllocator)[0].report.efx == 0

    def test_a5_many_agents_delegates(self):
        adv = a5_identical_noinfo_efx(100, n=3)
        assert isinstance(adv, A6IdenticalNormEFXManyAgents) and adv.eps == F(1, 100)

    def test_a6(self):
        t, b, ok = certify_bound(A6IdenticalNormEFXManyAgents(3, F(1, 100)), GreedyAllocator, strict=True)
        assert ok and t.report.efx == F(1, 49) == b.ceiling
        assert certify_bound(A6IdenticalNormEFXManyAgents(), DumpAllocator)[0].report.efx == 0

    def test_a7_block(self):
        assert golden_block_size(F(1, 100)) == 24
        adv = A7IdenticalNormEFXTwoAgents(F(1, 100))
        assert adv.branch_ceilings()["a half stays with the holder"] == F(38, 61)

    def test_a7_threshold(self):
        t, b, ok = certify_bound(A7IdenticalNormEFXTwoAgents(), ThresholdAllocator, strict=True)
        assert t.decisions[:24] == [0] * 24
        assert t.branch == "both halves to the other agent"
        assert t.report.efx == F(12, 19) and ok
        assert golden_geq(t.report.efx)

    def test_bad_parameters(self):
        with pytest.raises(InvalidValue):
            A2NormEFXTwoAgents(1)
        with pytest.raises(InvalidValue):
            make_adversary("a1", K=1)
        with pytest.raises(InvalidValue):
            A7IdenticalNormEFXTwoAgents(F(1, 2))
        with pytest.raises(InvalidValue):
            make_adversary("a9")


MATRIX = [(name, algo) for name in sorted(ADVERSARIES) for algo in compatible_algorithms(make_adversary(name))]


@pytest.mark.parametrize("name,algo", MATRIX)
def test_builtin_matrix(name, algo):
    adv = make_adversary(name)
    t, b, ok = certify_bound(adv, ALGORITHMS[algo], strict=True)
    assert ok, (t.report.factor(b.property), b.ceiling)
    if adv.branch_ceiling() is not None:
        assert t.report.factor(b.property) <= adv.branch_ceiling()


@pytest.mark.parametrize("name", sorted(ADVERSARIES))
@given(script=st.lists(st.integers(0, 3), min_size=1, max_size=30))
def test_any_decision_sequence_is_bounded(name, script):
    adv = make_adversary(name)
    t, b, ok = certify_bound(adv, scripted(script), strict=True)
    assert ok and t.consistent


def test_strict_mode_raises_on_bad_advice():
    class Liar(A5IdenticalNoInfoEFX):
        def advice(self):
            from onlinefd.core import Totals
            return Totals((1, 1))

    with pytest.raises(AdversaryInconsistent):
        run_match(DumpAllocator, Liar(4), strict=True)
    assert not run_match(DumpAllocator, Liar(4)).consistent


def test_no_advice_adversaries_announce_nothing():
    assert isinstance(make_adversary("a1").advice(), NoAdvice)
    assert isinstance(make_adversary("a5").advice(), NoAdvice)
