"""Seeded generators of small exact rationals and points of balanced sets."""
from __future__ import annotations

import random
from fractions import Fraction

from .numkernel import add, smul, zeros

DENOMINATORS = (1, 2, 3, 4, 5, 8, 10, 16)


def rng_for(seed) -> random.Random:
    return random.Random(seed)


def rational(rng: random.Random, lo, hi, denominators=DENOMINATORS) -> Fraction:
    """Uniform-ish rational in ``[lo, hi]`` with a small denominator."""
    lo, hi = Fraction(lo), Fraction(hi)
    q = rng.choice(denominators)
    a = -((-lo * q).__floor__())  # ceil(lo*q)
    b = (hi * q).__floor__()
    if a > b:
        return lo
    return Fraction(rng.randint(a, b), q)


def weights(rng: random.Random, k: int, resolution: int = 12) -> list:
    """Nonnegative rationals summing to one."""
    raw = [rng.randint(0, resolution) for _ in range(k)]
    total = sum(raw)
    if total == 0:
        raw[rng.randrange(k)] = 1
        total = 1
    return [Fraction(r, total) for r in raw]


def ball_coefficients(rng: random.Random, k: int, boundary_bias: float = 0.5) -> list:
    """Signed coefficients with ``sum |c| <= 1``; often exactly on the sphere."""
    w = weights(rng, k)
    if rng.random() >= boundary_bias:
        w = [a * rational(rng, 0, 1) for a in w]
    return [a if rng.random() < 0.5 else -a for a in w]


def point_in_polytope(rng, polytope, boundary_bias: float = 0.5):
    gens = polytope.generators
    if rng.random() < 0.15:
        g = rng.choice(gens)
        return g if rng.random() < 0.5 else smul(-1, g)
    coeffs = ball_coefficients(rng, len(gens), boundary_bias)
    out = zeros(polytope.dim)
    for c, g in zip(coeffs, gens):
        if c:
            out = add(out, smul(c, g))
    return out


def point_in_set(rng, circled_set, boundary_bias: float = 0.5):
    return point_in_polytope(rng, rng.choice(circled_set.pieces), boundary_bias)


def point_in_sum(rng, expression, boundary_bias: float = 0.5):
    out = zeros(expression.dim)
    for term in expression.terms:
        out = add(out, point_in_set(rng, term, boundary_bias))
    return out


def box_point(rng, dim: int, radius=2):
    return tuple(rational(rng, -radius, radius) for _ in range(dim))
