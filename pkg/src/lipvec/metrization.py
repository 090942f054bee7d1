"""Dyadic pseudo-seminorms built from chains of circled sets.

Given circled sets ``V_1, ..., V_N`` with ``V_{n+1} + V_{n+1} ⊆ V_n`` the
functional

    |x| = min{ sum_{i in I} 2^-i : x in V_I },    V_I = sum_{i in I} V_i

over nonempty ``I ⊆ {1..N}`` (and ``|x| = 1`` when no ``V_I`` contains ``x``)
is balanced and subadditive, and sandwiches each level:
``{|x| < 2^-n} ⊆ V_n ⊆ {|x| <= 2^-n}``.

Depth truncation: because only indices up to ``N`` are used, ``|0|``
evaluates to ``2^-N`` and values over-approximate the untruncated infimum
by less than ``2^-(N-1)``. Carries in ``p_I1 + p_I2`` only move toward
smaller indices, so both axioms still hold exactly.

Writing ``k = sum_{i in I} 2^(N-i)`` identifies subsets with the integers
``1 .. 2^N - 1`` ordered by ``p_I = k / 2^N``. On a valid chain
``V_I ⊆ V_J`` whenever ``p_I <= p_J``, which is what the fast strategy
(binary search over ``k``) relies on.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional

from . import sampling
from .gauge import GaugeFunctional, gauge_eval
from .numkernel import INF, DimensionError, add, smul, vec
from .sets import (
    DEFAULT_CAP,
    CircledSet,
    SumExpression,
    as_circled,
    included_in_convex,
    included_in_sampled,
    member,
    scale,
    sum_member,
)

DEFAULT_DEPTH = 8
MAX_DEPTH = 16

UNVALIDATED = "unvalidated"
VALID_EXACT = "valid-exact"
VALID_SAMPLED = "valid-sampled"
INVALID = "invalid"


class InvalidChainError(ValueError):
    pass


@dataclass(frozen=True)
class CircledChain:
    levels: tuple
    status: str = UNVALIDATED
    witness: Optional[tuple] = None

    def __post_init__(self):
        levels = tuple(as_circled(v) for v in self.levels)
        if not levels:
            raise ValueError("a chain needs at least one level")
        if len(levels) > MAX_DEPTH:
            raise ValueError(f"chain depth is limited to {MAX_DEPTH}")
        for v in levels:
            if v.dim != levels[0].dim:
                raise DimensionError("chain levels must share a dimension")
        object.__setattr__(self, "levels", levels)

    @property
    def depth(self) -> int:
        return len(self.levels)

    @property
    def dim(self) -> int:
        return self.levels[0].dim

    @property
    def is_valid(self) -> bool:
        return self.status in (VALID_EXACT, VALID_SAMPLED)

    def level(self, n: int) -> CircledSet:
        """Level ``V_n`` with 1-based ``n``."""
        return self.levels[n - 1]

    def subset_sum(self, indices) -> SumExpression:
        return SumExpression(tuple(self.level(i) for i in indices))


@dataclass(frozen=True)
class ChainValidation:
    status: str
    failed_level: Optional[int] = None
    witness: Optional[tuple] = None
    kinds: tuple = ()  # certificate kind per checked level


def validate_chain(chain: CircledChain, mode: str = "exact", samples: int = 200,
                   seed: int = 0, cap: int = DEFAULT_CAP) -> ChainValidation:
    """Check ``V_{n+1} + V_{n+1} ⊆ V_n`` level by level.

    ``mode="exact"`` certifies exactly wherever ``V_n`` is a single convex
    piece and falls back to sampling elsewhere; ``mode="sampled"`` samples
    every level. The status records the weakest certificate used.
    """
    kinds = []
    for n in range(1, chain.depth):
        left = SumExpression((chain.level(n + 1), chain.level(n + 1)))
        right = chain.level(n)
        if mode == "exact" and right.is_convex_piece:
            res = included_in_convex(left, right, cap=cap)
        else:
            res = included_in_sampled(left, right, samples=samples, seed=seed + n, cap=cap)
        kinds.append(res.kind)
        if not res.included:
            return ChainValidation(INVALID, n, res.witness, tuple(kinds))
    status = VALID_SAMPLED if "sampled" in kinds else VALID_EXACT
    return ChainValidation(status, kinds=tuple(kinds))


def validated(chain: CircledChain, **kwargs) -> CircledChain:
    res = validate_chain(chain, **kwargs)
    return replace(chain, status=res.status, witness=res.witness)


def chain_from_convex(U, depth: int = DEFAULT_DEPTH) -> CircledChain:
    """``V_n = 2^-n U``; valid because ``U/2 + U/2 = U`` for convex ``U``."""
    if not 1 <= depth <= MAX_DEPTH:
        raise ValueError(f"depth must lie in 1..{MAX_DEPTH}")
    U = as_circled(U)
    if not U.is_convex_piece:
        raise ValueError("chain_from_convex needs a single convex piece")
    levels = tuple(scale(U, Fraction(1, 2 ** n)) for n in range(1, depth + 1))
    return CircledChain(levels, status=VALID_EXACT)


def scale_chain(chain: CircledChain, s) -> CircledChain:
    s = Fraction(s)
    if s <= 0:
        raise ValueError("scale factor must be positive")
    return CircledChain(tuple(scale(v, s) for v in chain.levels), chain.status, None)


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DyadicValue:
    value: Fraction
    indices: Optional[tuple]  # None for the sentinel value 1

    @property
    def is_sentinel(self) -> bool:
        return self.indices is None


def indices_of(k: int, depth: int) -> tuple:
    return tuple(i for i in range(1, depth + 1) if k >> (depth - i) & 1)


def _value(k: int, depth: int) -> DyadicValue:
    return DyadicValue(Fraction(k, 2 ** depth), indices_of(k, depth))


SENTINEL = DyadicValue(Fraction(1), None)


@dataclass(frozen=True)
class DyadicPseudoSeminorm:
    """Truncated dyadic pseudo-seminorm of a validated chain.

    ``strategy="fast"`` binary-searches the subset order and is only
    allowed on valid chains; ``"brute"`` scans every subset in order.
    ``skip_validation`` exists for deliberately broken chains.
    """

    chain: CircledChain
    strategy: str = "fast"
    cap: int = DEFAULT_CAP
    membership: str = "auto"
    name: str = ""
    skip_validation: bool = field(default=False, compare=False)

    def __post_init__(self):
        if self.strategy not in ("fast", "brute"):
            raise ValueError("strategy must be 'fast' or 'brute'")
        if self.chain.status == UNVALIDATED and not self.skip_validation:
            object.__setattr__(self, "chain", validated(self.chain))
        if self.chain.status == INVALID and not self.skip_validation:
            raise InvalidChainError(f"chain fails the doubling condition at {self.chain.witness}")
        if self.strategy == "fast" and not self.chain.is_valid:
            raise InvalidChainError("the fast strategy needs a valid chain")

    @property
    def depth(self) -> int:
        return self.chain.depth

    @property
    def dim(self) -> int:
        return self.chain.dim

    @property
    def floor(self) -> Fraction:
        return Fraction(1, 2 ** self.depth)

    def with_strategy(self, strategy: str) -> "DyadicPseudoSeminorm":
        return replace(self, strategy=strategy)

    def __call__(self, x) -> Fraction:
        return dyadic_eval(self, x).value


def _in_subset(psn: DyadicPseudoSeminorm, k: int, x) -> bool:
    expr = psn.chain.subset_sum(indices_of(k, psn.depth))
    return sum_member(expr, x, cap=psn.cap, method=psn.membership)


def dyadic_eval(psn: DyadicPseudoSeminorm, x) -> DyadicValue:
    x = vec(x)
    if len(x) != psn.dim:
        raise DimensionError(f"point has dimension {len(x)}, expected {psn.dim}")
    top = 2 ** psn.depth - 1
    if psn.strategy == "brute":
        for k in range(1, top + 1):
            if _in_subset(psn, k, x):
                return _value(k, psn.depth)
        return SENTINEL
    if not _in_subset(psn, top, x):
        return SENTINEL
    lo, hi = 1, top  # invariant: x in V_hi
    while lo < hi:
        mid = (lo + hi) // 2
        if _in_subset(psn, mid, x):
            hi = mid
        else:
            lo = mid + 1
    return _value(hi, psn.depth)


def dyadic_ceiling(g, depth: int) -> DyadicValue:
    """Smallest ``k / 2^depth >= g`` with ``1 <= k < 2^depth``, else the sentinel."""
    if g == INF:
        return SENTINEL
    k = max(1, -((-g * 2 ** depth).__floor__()))
    if k >= 2 ** depth:
        return SENTINEL
    return _value(k, depth)


def convex_chain_closed_form(U, depth: int, x) -> DyadicValue:
    """Oracle for ``chain_from_convex(U, depth)``: ``x in V_I`` iff ``p_U(x) <= p_I``."""
    U = as_circled(U)
    if not U.is_convex_piece:
        raise ValueError("closed form needs a single convex piece")
    return dyadic_ceiling(gauge_eval(GaugeFunctional(U), x), depth)


# ---------------------------------------------------------------------------
# property checks
# ---------------------------------------------------------------------------

def sample_point(rng, chain: CircledChain):
    """A random point at a random scale of the chain, often on a level boundary."""
    n = rng.randint(1, chain.depth)
    x = sampling.point_in_set(rng, chain.level(n), boundary_bias=0.6)
    r = rng.random()
    if r < 0.3:
        return x
    if r < 0.9:
        return smul(sampling.rational(rng, 0, 3), x)
    if r < 0.95:
        return x if n == 1 else sampling.point_in_sum(rng, chain.subset_sum(range(n, chain.depth + 1)))
    return tuple(Fraction(0) for _ in x)


def sample_scalar(rng, bound=1):
    """Rational with ``|l| <= bound``; the endpoints and zero turn up often."""
    bound = Fraction(bound)
    r = rng.random()
    if r < 0.1:
        return bound
    if r < 0.2:
        return -bound
    if r < 0.25:
        return Fraction(0)
    return sampling.rational(rng, -bound, bound)


@dataclass(frozen=True)
class AxiomReport:
    samples: int
    seed: int
    balanced_checked: int
    subadditive_checked: int
    violations: tuple  # (axiom, data...)
    min_balanced_slack: Fraction
    min_subadditive_slack: Fraction
    zero_value: Fraction

    @property
    def ok(self) -> bool:
        return not self.violations


def check_axioms(psn: DyadicPseudoSeminorm, samples: int = 500, seed: int = 0) -> AxiomReport:
    """Sampled exact check of ``|l x| <= |x|`` (``|l| <= 1``), subadditivity and ``|0| <= 2^-N``."""
    rng = sampling.rng_for(seed)
    violations = []
    zero = dyadic_eval(psn, (Fraction(0),) * psn.dim).value
    if zero > psn.floor:
        violations.append(("zero", zero))
    bal_slack = sub_slack = None
    for i in range(samples):
        x1 = sample_point(rng, psn.chain)
        x2 = sample_point(rng, psn.chain) if i % 10 else tuple(Fraction(0) for _ in x1)
        lam = sample_scalar(rng) if i % 7 else Fraction(1)
        v1, v2 = psn(x1), psn(x2)
        vl = psn(smul(lam, x1))
        vs = psn(add(x1, x2))
        slack = v1 - vl
        bal_slack = slack if bal_slack is None else min(bal_slack, slack)
        if slack < 0:
            violations.append(("balanced", lam, x1, vl, v1))
        slack = v1 + v2 - vs
        sub_slack = slack if sub_slack is None else min(sub_slack, slack)
        if slack < 0:
            violations.append(("subadditive", x1, x2, vs, v1, v2))
    return AxiomReport(samples, seed, samples, samples, tuple(violations),
                       bal_slack if bal_slack is not None else Fraction(0),
                       sub_slack if sub_slack is not None else Fraction(0), zero)


@dataclass(frozen=True)
class SandwichReport:
    level: int
    samples: int
    seed: int
    inner_checked: int  # points with |x| < 2^-n
    outer_checked: int  # points in V_n
    violations: tuple

    @property
    def ok(self) -> bool:
        return not self.violations


def check_sandwich(psn: DyadicPseudoSeminorm, n: int, samples: int = 200,
                   seed: int = 0) -> SandwichReport:
    """``|x| < 2^-n  =>  x in V_n`` and ``x in V_n  =>  |x| <= 2^-n`` on sampled points."""
    if not 1 <= n <= psn.depth:
        raise ValueError(f"level must lie in 1..{psn.depth}")
    rng = sampling.rng_for(seed)
    level = psn.chain.level(n)
    bound = Fraction(1, 2 ** n)
    inner = outer = 0
    violations = []
    for i in range(samples):
        if i % 2:
            x = sample_point(rng, psn.chain)
        else:
            # concentrate on the scale of V_n
            x = sampling.point_in_set(rng, level, boundary_bias=0.6)
            x = smul(sampling.rational(rng, 0, 2, (1, 2, 4, 8, 16, 2 ** psn.depth)), x)
        v = psn(x)
        inside = member(level, x, method=psn.membership)
        if v < bound:
            inner += 1
            if not inside:
                violations.append(("inner", x, v))
        if inside:
            outer += 1
            if v > bound:
                violations.append(("outer", x, v))
    return SandwichReport(n, samples, seed, inner, outer, tuple(violations))
