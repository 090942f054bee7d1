"""Pseudo-metric descriptors and Lipschitz structures described by finite bases.

A structure is never materialised: it is the set of all pseudo-metrics
``d`` with ``d <= alpha * b`` for some base element ``b`` and ``alpha > 0``,
and every question about it is answered by comparing against the base.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import sampling
from .gauge import GaugeFunctional, gauge_eval
from .metrization import DyadicPseudoSeminorm
from .numkernel import (
    INF,
    DimensionError,
    LinearProgram,
    check_dim,
    dot,
    lp_minimize,
    matvec,
    sub,
    vec,
)
from .sets import BalancedPolytope, _candidate_normals, _directions

MAX_GENERATORS = 8


class Metric:
    """Translation-invariant pseudo-metric ``d(x1, x2) = p(x1 - x2)``."""

    name: str
    dim: int

    def norm(self, v):
        raise NotImplementedError

    def __call__(self, x1, x2):
        x1, x2 = vec(x1), vec(x2)
        check_dim(x1, self.dim, "point")
        check_dim(x2, self.dim, "point")
        return self.norm(sub(x1, x2))


@dataclass(frozen=True, eq=False)
class GaugeMetric(Metric):
    gauge: GaugeFunctional
    name: str = "gauge"

    @property
    def dim(self):
        return self.gauge.dim

    def norm(self, v):
        return gauge_eval(self.gauge, v)


@dataclass(frozen=True, eq=False)
class ChainMetric(Metric):
    """Metric of a dyadic pseudo-seminorm.

    ``d(x, x)`` is 0: the truncation floor ``2^-N`` of the functional at the
    origin is replaced by 0, which keeps balancedness and subadditivity.
    """

    psn: DyadicPseudoSeminorm
    name: str = "chain"

    @property
    def dim(self):
        return self.psn.dim

    def norm(self, v):
        if all(a == 0 for a in v):
            return Fraction(0)
        return self.psn(v)


@dataclass(frozen=True, eq=False)
class SupMetric(Metric):
    parts: tuple

    @property
    def name(self):
        return "sup(" + ",".join(p.name for p in self.parts) + ")"

    @property
    def dim(self):
        return self.parts[0].dim

    def norm(self, v):
        return max(p.norm(v) for p in self.parts)


@dataclass(frozen=True, eq=False)
class ScaledMetric(Metric):
    factor: Fraction
    metric: Metric

    def __post_init__(self):
        object.__setattr__(self, "factor", Fraction(self.factor))
        if self.factor <= 0:
            raise ValueError("scale factor must be positive")

    @property
    def name(self):
        return f"{self.factor}*{self.metric.name}"

    @property
    def dim(self):
        return self.metric.dim

    def norm(self, v):
        n = self.metric.norm(v)
        return INF if n == INF else self.factor * n


@dataclass(frozen=True, eq=False)
class SumMetric(Metric):
    parts: tuple

    @property
    def name(self):
        return "+".join(p.name for p in self.parts)

    @property
    def dim(self):
        return self.parts[0].dim

    def norm(self, v):
        total = Fraction(0)
        for p in self.parts:
            n = p.norm(v)
            if n == INF:
                return INF
            total += n
        return total


@dataclass(frozen=True, eq=False)
class ComponentMetric(Metric):
    """A metric on one factor of ``X x Y`` composed with the projection."""

    side: str  # "left" | "right"
    metric: Metric
    left_dim: int
    right_dim: int

    @property
    def name(self):
        return f"{self.metric.name}@{self.side}"

    @property
    def dim(self):
        return self.left_dim + self.right_dim

    def norm(self, v):
        part = v[: self.left_dim] if self.side == "left" else v[self.left_dim:]
        return self.metric.norm(part)


def eval_metric(d: Metric, x1, x2):
    return d(x1, x2)


def same_metric(a: Metric, b: Metric) -> bool:
    if a is b:
        return True
    if type(a) is not type(b):
        return False
    if isinstance(a, (SupMetric, SumMetric)):
        return len(a.parts) == len(b.parts) and all(map(same_metric, a.parts, b.parts))
    if isinstance(a, ScaledMetric):
        return a.factor == b.factor and same_metric(a.metric, b.metric)
    if isinstance(a, ComponentMetric):
        return (a.side, a.left_dim, a.right_dim) == (b.side, b.left_dim, b.right_dim) \
            and same_metric(a.metric, b.metric)
    if isinstance(a, GaugeMetric):
        return a.gauge.base == b.gauge.base
    return a.psn == b.psn


# ---------------------------------------------------------------------------
# structures
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LipschitzStructure:
    base: tuple

    def __post_init__(self):
        base = tuple(self.base)
        if not base:
            raise ValueError("a Lipschitz structure needs a nonempty base")
        for b in base:
            if b.dim != base[0].dim:
                raise DimensionError("base metrics live on different spaces")
        object.__setattr__(self, "base", base)

    @property
    def dim(self) -> int:
        return self.base[0].dim


def generate_structure(P) -> LipschitzStructure:
    """Base = suprema of all nonempty subsets of ``P``."""
    P = list(P)
    if not P:
        raise ValueError("need at least one generating metric")
    if len(P) > MAX_GENERATORS:
        raise ValueError(f"at most {MAX_GENERATORS} generating metrics are supported")
    base = []
    for r in range(1, len(P) + 1):
        for subset in itertools.combinations(P, r):
            base.append(subset[0] if r == 1 else SupMetric(subset))
    return LipschitzStructure(tuple(base))


def product_structure(LX: LipschitzStructure, LY: LipschitzStructure) -> LipschitzStructure:
    dx, dy = LX.dim, LY.dim
    return LipschitzStructure(tuple(
        SumMetric((ComponentMetric("left", bx, dx, dy), ComponentMetric("right", by, dx, dy)))
        for bx in LX.base for by in LY.base))


# ---------------------------------------------------------------------------
# convex descriptors
# ---------------------------------------------------------------------------

def convex_form(d: Metric) -> Optional[tuple]:
    """``(polytope, factor)`` with ``d = factor * gauge(polytope)``, when one exists.

    Covers gauges of one convex piece, positive multiples of those, and sums
    of lifted product components (``p(x) + q(y)`` is the gauge of the
    balanced hull of ``(g, 0)`` and ``(0, h)``).
    """
    if isinstance(d, GaugeMetric):
        if d.gauge.is_convex:
            return d.gauge.polytope, Fraction(1)
        return None
    if isinstance(d, ScaledMetric):
        inner = convex_form(d.metric)
        if inner is None:
            return None
        return inner[0], inner[1] * d.factor
    if isinstance(d, ComponentMetric):
        inner = convex_form(d.metric)
        if inner is None:
            return None
        poly, f = inner
        pad_l = (Fraction(0),) * d.left_dim
        pad_r = (Fraction(0),) * d.right_dim
        gens = [(g + pad_r) if d.side == "left" else (pad_l + g) for g in poly.generators]
        return BalancedPolytope(tuple(gens)), f
    if isinstance(d, SumMetric):
        gens = []
        for p in d.parts:
            inner = convex_form(p)
            if inner is None or not _disjoint_support(d.parts):
                return None
            poly, f = inner
            gens.extend(tuple(a / f for a in g) for g in poly.generators)
        return BalancedPolytope(tuple(gens)), Fraction(1)
    return None


def _disjoint_support(parts) -> bool:
    """Sum of components is a hull gauge only when each factor appears once."""
    sides = [p.side if isinstance(p, ComponentMetric) else None for p in parts]
    return None not in sides and len(set(sides)) == len(sides)


def convex_parts(d: Metric) -> Optional[list]:
    """Convex forms whose pointwise max is ``d``, or None."""
    if isinstance(d, SupMetric):
        out = []
        for p in d.parts:
            sub_parts = convex_parts(p)
            if sub_parts is None:
                return None
            out.extend(sub_parts)
        return out
    if isinstance(d, ScaledMetric) and isinstance(d.metric, SupMetric):
        inner = convex_parts(d.metric)
        if inner is None:
            return None
        return [(poly, f * d.factor) for poly, f in inner]
    form = convex_form(d)
    return None if form is None else [form]


def _form_value(form, v):
    poly, f = form
    g = gauge_eval(GaugeFunctional(poly), v)
    return INF if g == INF else f * g


def max_over_ball(target_parts, source_parts, matrix=None):
    """Exact ``max{ max_i t_i(M x) : s_j(x) <= 1 for all j }``.

    ``target_parts`` and ``source_parts`` are convex forms; ``M`` defaults
    to the identity. Returns ``(value, witness)`` or ``None`` when no exact
    route applies. With one source form the maximum of a convex function
    sits at a generator of its ball; with several, each target is written
    through its facet normals and one LP per normal is solved over the
    intersection of balls.
    """
    apply = (lambda x: x) if matrix is None else (lambda x: matvec(matrix, x))
    if len(source_parts) == 1:
        poly, f = source_parts[0]
        best, arg = Fraction(0), None
        for g in poly.generators:
            x = tuple(a / f for a in g)
            v = max(_form_value(t, apply(x)) for t in target_parts)
            if v == INF:
                return INF, x
            if arg is None or v > best:
                best, arg = v, x
        return best, arg
    best, arg = Fraction(0), None
    for tpoly, tf in target_parts:
        if len(tpoly.span_basis) != tpoly.dim or tpoly.dim > 3:
            return None
        normals = _candidate_normals(_directions(tpoly.generators), tpoly.dim)
        for w in normals:
            h = tpoly.support(w)
            wm = w if matrix is None else tuple(dot(w, col) for col in zip(*matrix))
            value, x = _lp_max_linear(wm, source_parts)
            if value is None:
                return None
            v = tf * value / h
            if arg is None or v > best:
                best, arg = v, x
    return best, arg


def _lp_max_linear(c, source_parts):
    """max c.x over the intersection of the balls ``(1/f) P``."""
    dim = source_parts[0][0].dim
    cols = dim
    blocks = []
    for poly, f in source_parts:
        blocks.append((cols, poly, f))
        cols += 2 * len(poly.generators)
    eq_rows, eq_rhs, ub_rows, ub_rhs = [], [], [], []
    for start, poly, f in blocks:
        k = len(poly.generators)
        for i in range(dim):
            row = [Fraction(0)] * cols
            row[i] = Fraction(-1)
            for j, g in enumerate(poly.generators):
                row[start + j] = g[i]
                row[start + k + j] = -g[i]
            eq_rows.append(row)
            eq_rhs.append(0)
        row = [Fraction(0)] * cols
        for j in range(2 * k):
            row[start + j] = Fraction(1)
        ub_rows.append(row)
        ub_rhs.append(1 / f)
    objective = [-a for a in c] + [0] * (cols - dim)
    out = lp_minimize(LinearProgram(cols, objective=objective, eq_rows=eq_rows, eq_rhs=eq_rhs,
                                    ub_rows=ub_rows, ub_rhs=ub_rhs, nonneg=range(dim, cols)))
    if out.status != "optimal":
        return None, None
    return -out.value, out.argmin[:dim]


# ---------------------------------------------------------------------------
# domination and containment
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Domination:
    holds: bool
    needed: object  # smallest alpha that works (Fraction or INF)
    witness: Optional[tuple] = None


def dominates(p: Metric, q: Metric, alpha) -> Domination:
    """Decide ``p <= alpha * q`` exactly for convex gauge-induced metrics.

    Checks ``p(g) <= alpha`` on the generators of the unit ball of ``q``.
    """
    alpha = Fraction(alpha)
    pf, qf = convex_form(p), convex_form(q)
    if pf is None or qf is None:
        raise ValueError("dominates needs convex gauge-induced metrics")
    needed, arg = max_over_ball([pf], [qf])
    if needed == INF or needed > alpha:
        witness = arg
        if needed != INF:
            # report the first violating generator rather than the argmax
            poly, f = qf
            for g in poly.generators:
                x = tuple(a / f for a in g)
                if _form_value(pf, x) > alpha:
                    witness = x
                    break
        return Domination(False, needed, witness)
    return Domination(True, needed)


@dataclass(frozen=True)
class Containment:
    contained: bool
    kind: str  # "exact" | "sampled"
    alpha: Optional[Fraction] = None
    base_index: Optional[int] = None
    witness: Optional[tuple] = None
    samples: int = 0
    seed: Optional[int] = None

    def __bool__(self):
        return self.contained


def structure_contains(L: LipschitzStructure, d: Metric, mode: str = "exact",
                       samples: int = 200, seed: int = 0) -> Containment:
    """Is ``d <= alpha * b`` for some base element ``b`` and ``alpha > 0``?

    The exact route needs convex gauge-induced descriptors on both sides;
    anything else is decided by sampling and tagged as such.
    """
    if d.dim != L.dim:
        raise DimensionError("metric and structure live on different spaces")
    for i, b in enumerate(L.base):
        if same_metric(b, d):
            return Containment(True, "exact", Fraction(1), i)
    if mode == "exact":
        result = _contains_exact(L, d)
        if result is not None:
            return result
    return _contains_sampled(L, d, samples, seed)


def _contains_exact(L, d):
    d_parts = convex_parts(d)
    if d_parts is None:
        return None
    best = None
    witness = None
    for i, b in enumerate(L.base):
        b_parts = convex_parts(b)
        if b_parts is None:
            return None
        res = max_over_ball(d_parts, b_parts)
        if res is None:
            return None
        needed, arg = res
        if needed == INF:
            witness = witness or arg
            continue
        if best is None or needed < best[0]:
            best = (needed, i)
    if best is None:
        return Containment(False, "exact", witness=witness)
    alpha = best[0] if best[0] > 0 else Fraction(1)
    return Containment(True, "exact", alpha, best[1])


def _contains_sampled(L, d, samples, seed):
    rng = sampling.rng_for(seed)
    ratios = [Fraction(0)] * len(L.base)
    dead = [None] * len(L.base)
    for _ in range(samples):
        x1 = sampling.box_point(rng, L.dim)
        x2 = sampling.box_point(rng, L.dim) if rng.random() < 0.5 else \
            tuple(a + sampling.rational(rng, -1, 1, (4, 8, 16)) for a in x1)
        dv = d(x1, x2)
        if dv == 0:
            continue
        for i, b in enumerate(L.base):
            if dead[i] is not None:
                continue
            bv = b(x1, x2)
            if bv == INF:
                continue
            if bv == 0 or dv == INF:
                dead[i] = (x1, x2)
                continue
            ratios[i] = max(ratios[i], dv / bv)
    alive = [i for i in range(len(L.base)) if dead[i] is None]
    if not alive:
        return Containment(False, "sampled", witness=dead[0], samples=samples, seed=seed)
    i = min(alive, key=lambda j: ratios[j])
    alpha = ratios[i] if ratios[i] > 0 else Fraction(1)
    return Containment(True, "sampled", alpha, i, samples=samples, seed=seed)
