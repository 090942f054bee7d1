from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lipvec.gauge import GaugeFunctional
from lipvec.lipstruct import (
    ChainMetric,
    ComponentMetric,
    GaugeMetric,
    LipschitzStructure,
    ScaledMetric,
    SumMetric,
    SupMetric,
    dominates,
    eval_metric,
    generate_structure,
    product_structure,
    structure_contains,
)
from lipvec.metrization import DyadicPseudoSeminorm, chain_from_convex
from lipvec.numkernel import DimensionError
from lipvec.sets import BalancedPolytope
from support import HEX, cross, cube, l1_ball, stacked_chain

L1 = GaugeMetric(GaugeFunctional(l1_ball(2)), "l1")
LINF = GaugeMetric(GaugeFunctional(cube(2)), "linf")
HEXM = GaugeMetric(GaugeFunctional(HEX), "hex")
ABS = GaugeMetric(GaugeFunctional(BalancedPolytope([(1,)])), "abs")
CHAIN = ChainMetric(DyadicPseudoSeminorm(stacked_chain(2, "xlxl")), "chain")


# --- evaluation ------------------------------------------------------------

def test_eval_examples():
    assert eval_metric(L1, (3, 4), (3, 4)) == 0
    assert eval_metric(L1, (1, 0), (0, 1)) == 2
    assert eval_metric(ScaledMetric(3, L1), (1, 0), (0, 1)) == 6
    assert eval_metric(CHAIN, (1, 1), (1, 1)) == 0


def test_sup_evaluates_to_max():
    d = SupMetric((L1, LINF))
    assert d((2, 1), (0, 0)) == max(L1((2, 1), (0, 0)), LINF((2, 1), (0, 0))) == 3


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        L1((1, 2, 3), (0, 0))
    with pytest.raises(DimensionError):
        LipschitzStructure((L1, ABS))


def test_scale_factor_must_be_positive():
    with pytest.raises(ValueError):
        ScaledMetric(0, L1)


# --- structures ------------------------------------------------------------

def test_generate_structure_examples():
    assert generate_structure([L1]).base == (L1,)
    base = generate_structure([L1, LINF]).base
    assert base[:2] == (L1, LINF) and isinstance(base[2], SupMetric)
    assert base[2].parts == (L1, LINF)
    assert len(generate_structure([L1, LINF, HEXM]).base) == 7


def test_generate_structure_limits():
    with pytest.raises(ValueError):
        generate_structure([])
    with pytest.raises(ValueError):
        generate_structure([ScaledMetric(k, L1) for k in range(1, 10)])


def test_product_structure_examples():
    LX, LY = generate_structure([L1]), generate_structure([ABS])
    P = product_structure(LX, LY)
    (d,) = P.base
    assert P.dim == 3
    u, v = (1, 2, 3), (0, 0, -1)
    assert d(u, v) == L1((1, 2), (0, 0)) + ABS((3,), (-1,)) == 7
    left = ComponentMetric("left", L1, 2, 1)
    assert left(u, v) <= d(u, v)
    assert len(product_structure(generate_structure([L1, LINF]), LY).base) == 3


# --- domination and containment ---------------------------------------------

def test_dominates_examples():
    assert dominates(L1, L1, 1).holds
    res = dominates(L1, LINF, 2)
    assert res.holds and res.needed == 2
    res = dominates(L1, LINF, 1)
    assert not res.holds and res.witness in ((1, 1), (1, -1))
    assert L1(res.witness, (0, 0)) == 2


def test_dominates_span_mismatch():
    seg = GaugeMetric(GaugeFunctional(BalancedPolytope([(1, 0)])), "seg")
    res = dominates(seg, L1, 5)
    assert not res.holds and res.witness == (0, 1)
    with pytest.raises(ValueError):
        dominates(CHAIN, L1, 1)


def test_contains_examples():
    L = generate_structure([L1, LINF])
    for i, b in enumerate(L.base):
        res = structure_contains(L, b)
        assert res.contained and res.alpha == 1 and res.base_index == i
    res = structure_contains(L, ScaledMetric(5, SupMetric((L1, LINF))))
    assert res.contained and res.alpha == 5 and res.kind == "exact"
    res = structure_contains(generate_structure([LINF]), L1)
    assert res.contained and res.alpha == 2 and res.kind == "exact"


def test_contains_closure_axioms():
    L = generate_structure([L1, HEXM])
    # (L2) positive multiples, (L3) finite sups, (L1) dominated metrics
    assert structure_contains(L, ScaledMetric(F(7, 3), HEXM)).alpha == F(7, 3)
    assert structure_contains(L, SupMetric((L1, HEXM))).alpha == 1
    small = ScaledMetric(F(1, 2), L1)
    assert dominates(small, L1, 1).holds
    assert structure_contains(L, small).contained
    # (L4) sums through d1 + d2 <= 2 (d1 v d2)
    sum_metric = SumMetric((L1, HEXM))
    for x in [(1, 0), (F(1, 3), -2), (5, 7)]:
        assert sum_metric(x, (0, 0)) <= 2 * SupMetric((L1, HEXM))(x, (0, 0))


def test_contains_rejects_unbounded_ratio():
    seg = GaugeMetric(GaugeFunctional(BalancedPolytope([(1, 0)])), "seg")
    # seg is infinite off the axis: no multiple of l1 bounds it, while l1 <= seg
    res = structure_contains(generate_structure([L1]), seg)
    assert not res.contained and res.kind == "exact"
    assert structure_contains(generate_structure([seg]), L1).alpha == 1


def test_chain_metrics_get_sampled_verdicts():
    res = structure_contains(generate_structure([L1]), CHAIN, samples=100, seed=1)
    assert res.kind == "sampled" and res.contained and res.samples == 100


def test_exact_alpha_is_tight():
    L = generate_structure([HEXM])
    res = structure_contains(L, LINF)
    # the ratio is attained at some generator of the hexagon
    gens = HEX.generators
    assert max(LINF(g, (0, 0)) / HEXM(g, (0, 0)) for g in gens) == res.alpha


# --- properties ------------------------------------------------------------

rat = st.fractions(min_value=-3, max_value=3, max_denominator=8)
point2 = st.tuples(rat, rat)
metrics = [L1, LINF, HEXM, CHAIN, SupMetric((L1, HEXM)), ScaledMetric(F(5, 2), LINF),
           SumMetric((LINF, CHAIN)), GaugeMetric(GaugeFunctional(cross(2)), "cross"),
           ChainMetric(DyadicPseudoSeminorm(chain_from_convex(HEX, 5)), "hexchain")]


@given(st.sampled_from(range(len(metrics))), point2, point2, point2)
def test_pseudo_metric_axioms(i, x, y, z):
    d = metrics[i]
    dxy = d(x, y)
    assert dxy >= 0 and d(x, x) == 0
    assert dxy == d(y, x)
    if d is not metrics[7]:  # a non-convex gauge need not satisfy the triangle inequality
        assert d(x, z) <= dxy + d(y, z)


def test_nonconvex_gauge_violates_triangle_inequality():
    d = metrics[7]
    x, y = (1, 0), (1, 1)
    assert d(x, (0, 0)) + d(y, x) < d(y, (0, 0))


@given(point2, point2, rat, rat)
def test_product_is_sum_of_components(x, y, a, b):
    (d,) = product_structure(generate_structure([HEXM]), generate_structure([ABS])).base
    assert d(x + (a,), y + (b,)) == HEXM(x, y) + ABS((a,), (b,))


@given(point2, point2)
def test_exact_alpha_replays(x, y):
    L = generate_structure([L1, HEXM])
    d = ScaledMetric(3, LINF)
    res = structure_contains(L, d)
    assert d(x, y) <= res.alpha * L.base[res.base_index](x, y)
