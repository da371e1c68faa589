"""Deliberately naive re-implementations used only as cross-checks."""
import itertools
import math
from fractions import Fraction

INF = math.inf


def bundle(owner, agent):
    return [t for t, a in enumerate(owner) if a == agent]


def value(inst, agent, goods):
    return sum((inst.goods[g][agent] for g in goods), Fraction(0))


def _pair_ratio(own, rest_value):
    return INF if rest_value == 0 else own / rest_value


def naive_ef1(inst, owner):
    """For each ordered pair try every removable good and keep the best ratio."""
    worst = INF
    for i in range(inst.n):
        own = value(inst, i, bundle(owner, i))
        for j in range(inst.n):
            rival = bundle(owner, j)
            if i == j or not rival:
                continue
            best = max(_pair_ratio(own, value(inst, i, [h for h in rival if h != g])) for g in rival)
            worst = min(worst, best)
    return worst


def naive_efx(inst, owner):
    worst = INF
    for i in range(inst.n):
        own = value(inst, i, bundle(owner, i))
        for j in range(inst.n):
            rival = bundle(owner, j)
            if i == j or not rival:
                continue
            for g in rival:
                worst = min(worst, _pair_ratio(own, value(inst, i, [h for h in rival if h != g])))
    return worst


def naive_prop1(inst, owner):
    worst = INF
    for i in range(inst.n):
        mine = bundle(owner, i)
        total = value(inst, i, range(inst.m))
        others = [g for g in range(inst.m) if g not in mine]
        if not others or total == 0:
            continue
        share = total / inst.n
        worst = min(worst, max((value(inst, i, mine) + inst.goods[g][i]) / share for g in others))
    return worst


def naive_mms(inst, agent):
    """Enumerate assignment vectors over goods in reverse order."""
    m = inst.m
    best = Fraction(0)
    for assignment in itertools.product(range(inst.n), repeat=m):
        sums = [Fraction(0)] * inst.n
        for pos, b in enumerate(assignment):
            sums[b] += inst.goods[m - 1 - pos][agent]
        best = max(best, min(sums))
    return best


def naive_norm_allocator(inst, lowers):
    """Straight transcription of the active-set rule, kept separate from the library."""
    n = inst.n
    bundles = [[] for _ in range(n)]
    outside = [Fraction(0)] * n
    active = list(range(n))
    owner = []
    dumping = False
    for t, g in enumerate(inst.goods):
        v = [g[i] / lowers[i] for i in range(n)]
        if dumping:
            owner.append(0)
            continue
        x = {}
        for i in list(active):
            x[i] = sum((inst.goods[h][i] / lowers[i] for h in bundles[i]), Fraction(0)) \
                + Fraction(n - 1, n) * max(outside[i], v[i])
        active = [i for i in active if x[i] < Fraction(1, n)]
        if not active:
            dumping = True
            owner.append(0)
            continue
        top = max(v[j] for j in active)
        ties = [j for j in active if v[j] == top]
        k = sorted(ties, key=lambda j: (x[j], j))[0]
        bundles[k].append(t)
        owner.append(k)
        for i in range(n):
            if i != k:
                outside[i] = max(outside[i], v[i])
    return tuple(owner)
