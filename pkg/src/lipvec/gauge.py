"""Minkowski functionals of circled sets.

``p_U(x) = inf{t > 0 : x in t U}``. For a balanced polytope the infimum is
an exact linear program; for a union it is the minimum over pieces, since
``t (A u B) = t A u t B``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from . import sampling
from .numkernel import INF, LinearProgram, check_dim, lp_minimize, smul, span_membership, vec
from .sets import BalancedPolytope, CircledSet, as_circled


class SpanError(ValueError):
    """A point outside the subspace on which a functional is defined."""


@dataclass(frozen=True)
class GaugeFunctional:
    """Gauge of a circled set.

    With ``on_span=True`` (only for a single convex piece) the functional is
    the seminorm ``p_A`` of a disk ``A``, defined on the span ``E_A`` alone.
    """

    base: CircledSet
    on_span: bool = False
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "base", as_circled(self.base))
        if self.on_span and not self.base.is_convex_piece:
            raise ValueError("p_A needs a single convex disk")

    @classmethod
    def of_disk(cls, disk: BalancedPolytope, name: str = "") -> "GaugeFunctional":
        return cls(CircledSet((disk,)), on_span=True, name=name)

    @property
    def dim(self) -> int:
        return self.base.dim

    @property
    def is_convex(self) -> bool:
        return self.base.is_convex_piece

    @property
    def polytope(self) -> BalancedPolytope:
        if not self.is_convex:
            raise ValueError("gauge base is not a single convex piece")
        return self.base.pieces[0]

    def __call__(self, x):
        return gauge_eval(self, x)


def _piece_gauge(piece: BalancedPolytope, x):
    """min t  s.t.  x = sum (l+ - l-) g,  sum (l+ + l-) <= t,  all variables >= 0."""
    gens = piece.generators
    k = len(gens)
    n = 2 * k + 1
    eq_rows = [[g[i] for g in gens] + [-g[i] for g in gens] + [0] for i in range(len(x))]
    ub_rows = [[1] * (2 * k) + [-1]]
    objective = [0] * (2 * k) + [1]
    out = lp_minimize(LinearProgram(n, objective=objective, eq_rows=eq_rows, eq_rhs=x,
                                    ub_rows=ub_rows, ub_rhs=[0], nonneg=range(n)))
    if out.status == "infeasible":
        return INF
    return out.value


def gauge_eval(G: GaugeFunctional, x):
    """Exact value of the gauge at ``x``, or ``INF`` outside every piece's span."""
    x = vec(x)
    check_dim(x, G.dim, "point")
    if G.on_span and not span_membership(G.polytope.generators, x)[0]:
        raise SpanError(f"{x} lies outside the span of the disk")
    if all(a == 0 for a in x):
        return Fraction(0)
    return min(_piece_gauge(p, x) for p in G.base.pieces)


class SupBound(NamedTuple):
    value: object  # Fraction or INF
    generator: tuple


def sup_over(A: BalancedPolytope, p: GaugeFunctional) -> SupBound:
    """``sup p(A)`` for a convex ``p``: attained at a generator of ``A``.

    An infinite value is returned together with the offending generator.
    """
    best = SupBound(Fraction(0), A.generators[0])
    for g in A.generators:
        v = gauge_eval(p, g)
        if v == INF:
            return SupBound(INF, g)
        if v > best.value:
            best = SupBound(v, g)
    return best


@dataclass(frozen=True)
class DominationReport:
    bound: object  # l = sup p(A)
    samples: int
    seed: int
    violations: tuple
    max_ratio: Fraction

    @property
    def ok(self) -> bool:
        return self.bound != INF and not self.violations


def domination_bound(p: GaugeFunctional, A: BalancedPolytope, samples: int = 200,
                     seed: int = 0) -> DominationReport:
    """Compute ``l = sup p(A)`` and spot-check ``p(x) <= l p_A(x)`` on ``E_A``.

    Points are drawn as ``t a`` with ``t >= 0`` and ``a`` in ``A``.
    """
    sup = sup_over(A, p)
    pA = GaugeFunctional.of_disk(A)
    if sup.value == INF:
        return DominationReport(INF, 0, seed, ((sup.generator, INF, None),), Fraction(0))
    rng = sampling.rng_for(seed)
    violations = []
    max_ratio = Fraction(0)
    for _ in range(samples):
        a = sampling.point_in_polytope(rng, A)
        x = smul(sampling.rational(rng, 0, 4), a)
        px, pax = gauge_eval(p, x), gauge_eval(pA, x)
        if px > sup.value * pax:
            violations.append((x, px, pax))
        if pax:
            max_ratio = max(max_ratio, px / pax)
    return DominationReport(sup.value, samples, seed, tuple(violations), max_ratio)
