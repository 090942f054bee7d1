from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lipvec import sampling
from lipvec.bornology import BoundedDisk, check_bornological, check_disk_domination, disk_structure
from lipvec.gauge import GaugeFunctional, SpanError
from lipvec.lipstruct import GaugeMetric, generate_structure
from lipvec.numkernel import span_membership
from lipvec.sets import BalancedPolytope
from lipvec.veccheck import MapSpec, check_map
from support import HEX, cube, l1_ball

L1 = BoundedDisk(l1_ball(2), "l1")
SEG = BoundedDisk(BalancedPolytope([(1, 0)]), "seg")
PLANE3 = BoundedDisk(BalancedPolytope([(1, 0, 1), (0, 2, -1)]), "plane")


def test_disk_structure_examples():
    (d,) = disk_structure(L1).base
    assert d((1, -2), (0, 0)) == 3
    (d,) = disk_structure(SEG).base
    assert d((F(-5, 2), 0), (0, 0)) == F(5, 2)
    assert SEG.gauge((0, 0)) == 0


def test_span_errors_follow_span_membership():
    for x in [(1, 2, 0), (1, 2, 1), (2, 2, 1), (0, 0, 0)]:
        in_span = span_membership(PLANE3.span_basis, x)[0]
        assert PLANE3.in_span(x) == in_span
        if in_span:
            PLANE3.gauge(x)
        else:
            with pytest.raises(SpanError):
                PLANE3.gauge(x)


def test_disk_domination_examples():
    (rep,) = check_disk_domination(L1, [L1.gauge], samples=100)
    assert rep.ok and rep.bound == 1 and rep.max_ratio == 1
    (rep,) = check_disk_domination(L1, [GaugeFunctional(cube(2), name="linf")], samples=100)
    assert rep.ok and rep.bound == 1
    assert GaugeFunctional(cube(2))((1, 1)) == 1 < L1.gauge((1, 1))
    A = BoundedDisk(BalancedPolytope([(2, 0)]), "A")
    (rep,) = check_disk_domination(A, [GaugeFunctional(BalancedPolytope([(1, 0)]))], samples=100)
    assert rep.ok and rep.bound == 2 and rep.max_ratio == 2


def test_disk_domination_reports_infinite_sup():
    (rep,) = check_disk_domination(L1, [GaugeFunctional(BalancedPolytope([(1, 0)]))])
    assert not rep.ok


def test_bornological_identity():
    ident = MapSpec.linear([[1, 0], [0, 1]])
    [(name, report)] = check_bornological(ident, [L1], disk_structure(L1))
    assert name == "l1" and report.ok and report.certificates[0].constant == 1


def test_bornological_bound_composes():
    f = MapSpec.linear([[1, 2], [F(-1, 3), 1]])
    P = GaugeFunctional(HEX, name="hex")
    LX = generate_structure([GaugeMetric(P, "hex")])
    LY = generate_structure([GaugeMetric(GaugeFunctional(cube(2)), "linf")])
    c = check_map(f, LX, LY).certificates[0].constant
    for disk in (L1, SEG, BoundedDisk(BalancedPolytope([(1, 1), (F(1, 2), -2)]), "B")):
        (rep,) = check_disk_domination(disk, [P], samples=50)
        [(_, report)] = check_bornological(f, [disk], LY)
        assert report.ok and report.certificates[0].constant <= c * rep.bound


def test_bornological_blackbox_on_bounded_table():
    sq = MapSpec.blackbox([((F(k, 8),), (F(k * k, 64),)) for k in range(-8, 9)])
    D = BoundedDisk(BalancedPolytope([(F(1, 2),)]), "D")
    LY = generate_structure([GaugeMetric(GaugeFunctional(BalancedPolytope([(1,)])), "abs")])
    [(_, report)] = check_bornological(sq, [D], LY, mode="sampled", samples=200)
    assert report.ok and report.certificates[0].constant is not None


def test_samples_stay_in_span():
    rng = sampling.rng_for(0)
    for _ in range(50):
        assert PLANE3.in_span(PLANE3.sample(rng))


@given(st.sampled_from([L1, SEG, PLANE3, BoundedDisk(HEX, "hex")]), st.integers(0, 10 ** 6),
       st.fractions(min_value=0, max_value=F(99, 100), max_denominator=100))
def test_disk_gauge_at_and_inside_generators(disk, seed, t):
    rng = sampling.rng_for(seed)
    g = rng.choice(disk.polytope.generators)
    assert disk.gauge(g) <= 1
    assert disk.gauge(tuple(t * a for a in g)) < 1
    assert disk.gauge(sampling.point_in_polytope(rng, disk.polytope)) <= 1
