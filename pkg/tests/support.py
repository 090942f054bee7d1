"""Shared shapes and chain builders for the test suite.

The non-convex chains rely on the "cross" union: in dimension d, piece i is
the balanced hull of e_i and e_j / 4 (j != i). Every piece contains the l1
ball of radius 1/4 and lies inside the unit l1 ball, which gives simple
rules for stacking levels:

* after ``t * l1``:     ``(t/2) * l1``   or ``(t/4) * cross``
* after ``s * cross``:  ``(s/8) * l1``   or ``(s/8) * cross``
* after ``t * l1``:     ``(t/(2d)) * cube``; after ``t * cube``: ``(t/2) * l1``

each of which satisfies V_{n+1} + V_{n+1} ⊆ V_n by hand.
"""
from fractions import Fraction as F

from lipvec.metrization import CircledChain, chain_from_convex
from lipvec.sets import BalancedPolytope, CircledSet, scale


def unit(d, i, s=1):
    return tuple(F(s) if k == i else F(0) for k in range(d))


def l1_ball(d):
    return BalancedPolytope(tuple(unit(d, i) for i in range(d)))


def cube(d):
    if d == 2:
        return BalancedPolytope([(1, 1), (1, -1)])
    return BalancedPolytope([(1, 1, 1), (1, 1, -1), (1, -1, 1), (-1, 1, 1)])


HEX = BalancedPolytope([(1, F(1, 4)), (F(1, 3), 1), (F(-1, 2), F(2, 3))])
SKEW3 = BalancedPolytope([(1, 0, F(1, 3)), (F(1, 2), 1, 0), (0, F(-1, 4), 1), (F(1, 5), F(1, 5), F(1, 5))])


def cross(d):
    pieces = []
    for i in range(d):
        pieces.append(BalancedPolytope(tuple(unit(d, j, 1 if j == i else F(1, 4)) for j in range(d))))
    return CircledSet(tuple(pieces))


def stacked_chain(d, pattern):
    """Build a chain from a word over {"l", "x", "c"} (l1, cross, cube) using the rules above."""
    shapes = {"l": CircledSet((l1_ball(d),)), "x": cross(d), "c": CircledSet((cube(d),))}
    levels = []
    prev, t = None, F(1)
    for kind in pattern:
        if prev is None:
            t = F(1)
        elif prev == "l":
            t = t / {"l": 2, "x": 4, "c": 2 * d}[kind]
        elif prev == "x":
            assert kind in "lx"
            t = t / 8
        else:
            assert kind == "l"
            t = t / 2
        levels.append(scale(shapes[kind], t))
        prev = kind
    return CircledChain(tuple(levels))


def chain_suite():
    """(name, chain) pairs: 24 valid chains over d in {2, 3}, depth in {4, 8}."""
    out = []
    for depth in (4, 8):
        for name, U in (("l1-2", l1_ball(2)), ("linf-2", cube(2)), ("hex-2", HEX),
                        ("l1-3", l1_ball(3)), ("cube-3", cube(3)), ("skew-3", SKEW3)):
            out.append((f"{name}/N{depth}", chain_from_convex(U, depth)))
    for d in (2, 3):
        out.append((f"cross-{d}/N4", stacked_chain(d, "xxxx")))
        out.append((f"mixed-{d}/N4", stacked_chain(d, "xlxl")))
        out.append((f"alt-{d}/N4", stacked_chain(d, "lclc")))
        out.append((f"head-{d}/N8", stacked_chain(d, "xlllllll")))
        out.append((f"tail-{d}/N8", stacked_chain(d, "lclcllxx")))
        out.append((f"alt-{d}/N8", stacked_chain(d, "lclclclc")))
    return out


def cross2(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def hull2(points):
    """Exact planar convex hull, counter-clockwise, collinear points dropped."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    out = []
    for seq in (pts, pts[::-1]):
        part = []
        for p in seq:
            while len(part) >= 2 and cross2(part[-2], part[-1], p) <= 0:
                part.pop()
            part.append(p)
        out.extend(part[:-1])
    return out


# one line per acceptance criterion, printed again in the terminal summary
ACCEPTANCE_LINES = []


def record(number, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {number:2d}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok
