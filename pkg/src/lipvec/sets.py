"""Circled subsets of R^d built from balanced polytopes.

A :class:`BalancedPolytope` is the balanced hull ``{sum l_j g_j : sum |l_j| <= 1}``
of finitely many generators. Unions of them (:class:`CircledSet`) model
non-convex circled sets, and :class:`SumExpression` keeps Minkowski sums
unevaluated so that only membership questions are ever answered.

Membership has two exact routes. ``"lp"`` solves one feasibility program
per piece (or per combination of pieces for a sum). ``"halfspace"`` compares
``|w.x|`` with the support function on a finite superset of facet normals;
it is available when the span of the generators has dimension at most
three. ``"auto"`` picks the halfspace route when it applies.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Optional, Union

from . import sampling
from .numkernel import (
    DimensionError,
    LinearProgram,
    check_dim,
    dot,
    independent_subset,
    lp_feasible,
    rank,
    smul,
    span_membership,
    sub,
    vec,
)

DEFAULT_CAP = 4096


class CombinationCapError(RuntimeError):
    """Too many piece combinations to enumerate for a Minkowski sum."""

    def __init__(self, count, cap):
        super().__init__(f"{count} piece combinations exceed the cap of {cap}")
        self.count = count
        self.cap = cap


@dataclass(frozen=True, eq=False)
class BalancedPolytope:
    generators: tuple

    def __post_init__(self):
        gens = tuple(vec(g) for g in self.generators)
        if not gens:
            raise ValueError("a balanced polytope needs at least one generator")
        dim = len(gens[0])
        if dim == 0:
            raise DimensionError("dimension must be positive")
        for g in gens:
            check_dim(g, dim, "generator")
        object.__setattr__(self, "generators", gens)

    @property
    def dim(self) -> int:
        return len(self.generators[0])

    def __eq__(self, other):
        return isinstance(other, BalancedPolytope) and self.generators == other.generators

    @cached_property
    def _hash(self):
        return hash(self.generators)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        gens = ", ".join("(" + ",".join(str(a) for a in g) + ")" for g in self.generators)
        return f"bal{{{gens}}}"

    def scaled(self, s) -> "BalancedPolytope":
        return BalancedPolytope(tuple(smul(s, g) for g in self.generators))

    def support(self, w) -> Fraction:
        """Support function ``max over the set of w.x``."""
        return max(abs(dot(w, g)) for g in self.generators)

    @cached_property
    def span_basis(self) -> tuple:
        return tuple(self.generators[i] for i in independent_subset(self.generators))


@dataclass(frozen=True, eq=False)
class CircledSet:
    pieces: tuple

    def __post_init__(self):
        pieces = tuple(p if isinstance(p, BalancedPolytope) else BalancedPolytope(p)
                       for p in self.pieces)
        if not pieces:
            raise ValueError("a circled set needs at least one piece")
        for p in pieces:
            if p.dim != pieces[0].dim:
                raise DimensionError("pieces of a circled set must share a dimension")
        object.__setattr__(self, "pieces", pieces)

    @classmethod
    def of(cls, *generator_lists) -> "CircledSet":
        return cls(tuple(BalancedPolytope(g) for g in generator_lists))

    @property
    def dim(self) -> int:
        return self.pieces[0].dim

    @property
    def is_convex_piece(self) -> bool:
        return len(self.pieces) == 1

    def __eq__(self, other):
        return isinstance(other, CircledSet) and self.pieces == other.pieces

    def __hash__(self):
        return hash(self.pieces)

    def __repr__(self):
        return " U ".join(map(repr, self.pieces))


@dataclass(frozen=True)
class SumExpression:
    terms: tuple

    def __post_init__(self):
        terms = tuple(as_circled(t) for t in self.terms)
        if not terms:
            raise ValueError("a Minkowski sum needs at least one term")
        for t in terms:
            if t.dim != terms[0].dim:
                raise DimensionError("terms of a Minkowski sum must share a dimension")
        object.__setattr__(self, "terms", terms)

    @property
    def dim(self) -> int:
        return self.terms[0].dim

    def combination_count(self) -> int:
        return math.prod(len(t.pieces) for t in self.terms)

    def combinations(self, cap: int = DEFAULT_CAP):
        count = self.combination_count()
        if count > cap:
            raise CombinationCapError(count, cap)
        return itertools.product(*(t.pieces for t in self.terms))


def as_circled(obj) -> CircledSet:
    if isinstance(obj, CircledSet):
        return obj
    if isinstance(obj, BalancedPolytope):
        return CircledSet((obj,))
    raise TypeError(f"expected a circled set, got {type(obj).__name__}")


def as_sum(obj) -> SumExpression:
    if isinstance(obj, SumExpression):
        return obj
    return SumExpression((as_circled(obj),))


# ---------------------------------------------------------------------------
# halfspace description of a sum of balanced polytopes
# ---------------------------------------------------------------------------

def _primitive(v) -> Optional[tuple]:
    """Scale a rational vector to a primitive integer vector with a canonical sign."""
    if all(a == 0 for a in v):
        return None
    lcm = 1
    for a in v:
        lcm = lcm * a.denominator // math.gcd(lcm, a.denominator)
    ints = [int(a * lcm) for a in v]
    g = 0
    for a in ints:
        g = math.gcd(g, a)
    ints = [a // g for a in ints]
    first = next(a for a in ints if a)
    if first < 0:
        ints = [-a for a in ints]
    return tuple(Fraction(a) for a in ints)


def _directions(points) -> set:
    pts = list(points) + [smul(-1, p) for p in points]
    out = set()
    for a, b in itertools.combinations(pts, 2):
        d = _primitive(sub(a, b))
        if d is not None:
            out.add(d)
    return out


def _cross(a, b):
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def _candidate_normals(directions, r: int) -> list:
    if r == 1:
        return [(Fraction(1),)]
    if r == 2:
        return sorted({_primitive((-d[1], d[0])) for d in directions})
    normals = set()
    for a, b in itertools.combinations(sorted(directions), 2):
        n = _primitive(_cross(a, b))
        if n is not None:
            normals.add(n)
    return sorted(normals)


def _shape_key(gens) -> tuple:
    """Generators rescaled so that the first nonzero entry has modulus one."""
    lead = next(a for g in gens for a in g if a)
    return tuple(smul(1 / abs(lead), g) for g in gens)


@lru_cache(maxsize=1024)
def _facet_normals(shapes: tuple, r: int) -> tuple:
    """Facet normals of the sum of the given generator lists, whose joint span has rank ``r``.

    The normal fan of a Minkowski sum does not change when summands are
    rescaled by positive factors, so only the distinct shapes matter.
    """
    directions = set()
    for gens in shapes:
        directions |= _directions(gens)
    out = []
    for w in _candidate_normals(directions, r):
        face_dirs = []
        for gens in shapes:
            pts = list(gens) + [smul(-1, g) for g in gens]
            vals = [dot(w, q) for q in pts]
            top = max(vals)
            face = [q for q, v in zip(pts, vals) if v == top]
            face_dirs.extend(sub(q, face[0]) for q in face[1:])
        # a facet is a maximizing face of codimension one
        if rank(face_dirs) == r - 1:
            out.append(w)
    return tuple(out)


class _Halfspaces:
    """Exact inequality description of ``P_1 + ... + P_k`` for balanced P_i.

    Every facet of a Minkowski sum of polytopes in dimension <= 3 has a
    normal that is perpendicular to an edge direction (dimension 2) or is
    the cross product of two edge directions (dimension 3) of the summands;
    differences of generator points give a superset of those directions,
    and candidates whose maximizing face is not a facet are dropped.
    """

    def __init__(self, pieces):
        gens = [g for p in pieces for g in p.generators]
        self.dim = pieces[0].dim
        basis_idx = independent_subset(gens)
        self.rank = len(basis_idx)
        self.basis = [gens[i] for i in basis_idx]
        self.full = self.rank == self.dim
        self.bounds = None
        if self.rank == 0 or self.rank > 3:
            return
        coords = {}

        def to_coords(v):
            if self.full:
                return v
            if v not in coords:
                coords[v] = span_membership(self.basis, v)[1]
            return coords[v]

        local_pieces = [tuple(to_coords(g) for g in p.generators) for p in pieces]
        shapes = tuple(sorted({_shape_key(lp) for lp in local_pieces if any(map(any, lp))}))
        self.bounds = [
            (w, sum(max(abs(dot(w, g)) for g in lp) for lp in local_pieces))
            for w in _facet_normals(shapes, self.rank)
        ]

    @property
    def available(self) -> bool:
        return self.rank == 0 or self.bounds is not None

    def contains(self, x) -> bool:
        if self.rank == 0:
            return all(a == 0 for a in x)
        if not self.full:
            ok, y = span_membership(self.basis, x)
            if not ok:
                return False
        else:
            y = x
        return all(abs(dot(w, y)) <= h for w, h in self.bounds)


@lru_cache(maxsize=8192)
def _halfspaces(pieces: tuple) -> _Halfspaces:
    return _Halfspaces(pieces)


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def _lp_member(pieces, x) -> bool:
    """One feasibility program: x = sum_ij (l+ - l-) g_ij, per-term sum (l+ + l-) <= 1."""
    dim = len(x)
    cols = []  # (term index, generator, sign)
    for t, p in enumerate(pieces):
        for g in p.generators:
            cols.append((t, g, 1))
            cols.append((t, g, -1))
    n = len(cols)
    eq_rows = [[sgn * g[i] for (_, g, sgn) in cols] for i in range(dim)]
    ub_rows = [[1 if t == k else 0 for (t, _, _) in cols] for k in range(len(pieces))]
    lp = LinearProgram(n, eq_rows=eq_rows, eq_rhs=x, ub_rows=ub_rows,
                       ub_rhs=[1] * len(pieces), nonneg=range(n))
    return lp_feasible(lp).feasible


def _combo_member(pieces: tuple, x, method: str) -> bool:
    if method == "lp":
        return _lp_member(pieces, x)
    hs = _halfspaces(pieces)
    if hs.available:
        return hs.contains(x)
    if method == "halfspace":
        raise ValueError("halfspace membership needs a generator span of dimension <= 3")
    return _lp_member(pieces, x)


def scale(S, s) -> CircledSet:
    """``s * S`` for a positive rational ``s``."""
    s = Fraction(s)
    if s <= 0:
        raise ValueError("scale factor must be positive")
    S = as_circled(S)
    return CircledSet(tuple(p.scaled(s) for p in S.pieces))


def member(S, x, method: str = "auto") -> bool:
    S = as_circled(S)
    x = vec(x)
    check_dim(x, S.dim, "point")
    return any(_combo_member((p,), x, method) for p in S.pieces)


def sum_member(E, x, cap: int = DEFAULT_CAP, method: str = "auto") -> bool:
    """Membership in a Minkowski sum of circled sets.

    Sums distribute over unions, so ``x`` belongs to the sum iff it belongs
    to the sum of some choice of one piece per term.
    """
    E = as_sum(E)
    x = vec(x)
    check_dim(x, E.dim, "point")
    if all(a == 0 for a in x):
        return True
    return any(_combo_member(combo, x, method) for combo in E.combinations(cap))


@dataclass(frozen=True)
class InclusionResult:
    included: bool
    kind: str  # "exact" | "sampled"
    witness: Optional[tuple] = None
    samples: int = 0
    seed: Optional[int] = None

    def __bool__(self):
        return self.included


def _vertex_candidates(E: SumExpression, cap: int):
    """Signed generator sums; every extreme point of the sum is among them."""
    seen = set()
    for combo in E.combinations(cap):
        choices = [[g for g in p.generators] + [smul(-1, g) for g in p.generators]
                   for p in combo]
        for pick in itertools.product(*choices):
            v = tuple(sum(c) for c in zip(*pick))
            if v not in seen:
                seen.add(v)
                yield v


def included_in_convex(E, C, cap: int = DEFAULT_CAP) -> InclusionResult:
    """Exact test of ``E`` (a sum or a circled set) inside one balanced polytope."""
    E = as_sum(E)
    if isinstance(C, CircledSet):
        if not C.is_convex_piece:
            raise ValueError("right-hand side must be a single convex piece")
        C = C.pieces[0]
    if E.dim != C.dim:
        raise DimensionError("left and right sets differ in dimension")
    for v in _vertex_candidates(E, cap):
        if not member(C, v):
            return InclusionResult(False, "exact", witness=v)
    return InclusionResult(True, "exact")


def included_in_sampled(E, S, samples: int = 200, seed: int = 0,
                        cap: int = DEFAULT_CAP) -> InclusionResult:
    """Search for points of ``E`` outside ``S``; finding none proves nothing."""
    if samples < 1:
        raise ValueError("samples must be at least 1")
    E = as_sum(E)
    S = as_circled(S)
    if E.dim != S.dim:
        raise DimensionError("left and right sets differ in dimension")
    E.combinations(cap)  # cap check up front
    rng = sampling.rng_for(seed)
    for _ in range(samples):
        x = sampling.point_in_sum(rng, E, boundary_bias=0.7)
        if not member(S, x):
            return InclusionResult(False, "sampled", witness=x, samples=samples, seed=seed)
    return InclusionResult(True, "sampled", samples=samples, seed=seed)


Left = Union[SumExpression, CircledSet, BalancedPolytope]
