"""Certify or falsify Lipschitz properties of addition, scalar multiplication and maps."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from . import sampling
from .gauge import GaugeFunctional, gauge_eval
from .lipstruct import LipschitzStructure, Metric, convex_parts, max_over_ball
from .metrization import DyadicPseudoSeminorm, dyadic_eval, sample_point, sample_scalar, scale_chain
from .numkernel import INF, DimensionError, add, matvec, smul, sub, vec

GRID_STEP = Fraction(1, 64)
GRID_MAX = Fraction(1024)


class BlackboxError(ValueError):
    """Raised for operations a tabulated map cannot support."""


@dataclass(frozen=True)
class MapSpec:
    kind: str  # linear | affine | addition | scalar | blackbox
    in_dim: int
    out_dim: int
    matrix: Optional[tuple] = None
    shift: Optional[tuple] = None
    table: Optional[tuple] = None  # ((x, f(x)), ...)
    name: str = ""

    @classmethod
    def linear(cls, matrix, name=""):
        m = tuple(vec(r) for r in matrix)
        return cls("linear", len(m[0]), len(m), matrix=m, name=name)

    @classmethod
    def affine(cls, matrix, shift, name=""):
        m = tuple(vec(r) for r in matrix)
        b = vec(shift)
        if len(b) != len(m):
            raise DimensionError("shift length must match the output dimension")
        return cls("affine", len(m[0]), len(m), matrix=m, shift=b, name=name)

    @classmethod
    def addition(cls, dim, name="add"):
        """``(x, y) -> x + y`` on ``E x E``."""
        eye = [[Fraction(int(i == j)) for j in range(dim)] for i in range(dim)]
        m = tuple(tuple(row + row) for row in eye)
        return cls("addition", 2 * dim, dim, matrix=m, name=name)

    @classmethod
    def scalar_multiplication(cls, dim, name="smul"):
        """``(l, x) -> l x`` on ``R x E``; the first coordinate is the scalar."""
        return cls("scalar", dim + 1, dim, name=name)

    @classmethod
    def blackbox(cls, pairs, name=""):
        table = tuple((vec(x), vec(y)) for x, y in pairs)
        if not table:
            raise ValueError("a blackbox map needs at least one evaluated pair")
        return cls("blackbox", len(table[0][0]), len(table[0][1]), table=table, name=name)

    @property
    def linear_part(self):
        return self.matrix if self.kind in ("linear", "affine", "addition") else None

    def __call__(self, x):
        x = vec(x)
        if len(x) != self.in_dim:
            raise DimensionError(f"map input has dimension {len(x)}, expected {self.in_dim}")
        if self.kind == "scalar":
            return smul(x[0], x[1:])
        if self.kind == "blackbox":
            for a, b in self.table:
                if a == x:
                    return b
            raise BlackboxError(f"{x} is not tabulated")
        y = matvec(self.matrix, x)
        return add(y, self.shift) if self.shift is not None else y


@dataclass(frozen=True)
class LipschitzCertificate:
    target: str
    source: str
    constant: Optional[Fraction]
    kind: str  # exact | sampled
    samples: int = 0
    seed: Optional[int] = None
    violations: tuple = ()
    grid_constant: Optional[Fraction] = None
    max_ratio: Optional[object] = None
    witness: Optional[tuple] = None

    @property
    def ok(self) -> bool:
        return self.constant is not None and not self.violations


def _name(f):
    return getattr(f, "name", "") or type(f).__name__


def _norm(functional, v):
    if isinstance(functional, DyadicPseudoSeminorm):
        return dyadic_eval(functional, v).value
    if isinstance(functional, GaugeFunctional):
        return gauge_eval(functional, v)
    return functional.norm(v)


def _sample(rng, functional):
    if isinstance(functional, DyadicPseudoSeminorm):
        return sample_point(rng, functional.chain)
    if isinstance(functional, GaugeFunctional):
        x = sampling.point_in_set(rng, functional.base)
        return smul(sampling.rational(rng, 0, 3), x)
    return sampling.box_point(rng, functional.dim)


def check_addition(functional, samples: int = 1000, seed: int = 0) -> LipschitzCertificate:
    """``d(x1 + x2, y1 + y2) <= d(x1, y1) + d(x2, y2)`` on seeded quadruples.

    A passing report certifies addition with constant 1 against the product
    metric ``d + d`` on ``E x E``.
    """
    rng = sampling.rng_for(seed)
    violations = []
    worst = None
    for i in range(samples):
        x1, x2, y1 = (_sample(rng, functional) for _ in range(3))
        y2 = _sample(rng, functional) if i % 5 else x2
        if i % 11 == 0:
            y1 = x1
        lhs = _norm(functional, sub(add(x1, x2), add(y1, y2)))
        a, b = _norm(functional, sub(x1, y1)), _norm(functional, sub(x2, y2))
        rhs = INF if INF in (a, b) else a + b
        if lhs > rhs:
            violations.append((x1, x2, y1, y2, lhs, rhs))
        if rhs != INF and lhs != INF:
            worst = rhs - lhs if worst is None else min(worst, rhs - lhs)
    name = _name(functional)
    return LipschitzCertificate(name, f"{name}+{name}", Fraction(1), "sampled", samples, seed,
                                tuple(violations), max_ratio=worst)


def local_constants(lam_bar, x_bar, p: GaugeFunctional):
    """``c1 = 1 + |l_bar|`` and ``c2 = 1 + p(x_bar)`` for the local bound on scalar multiplication."""
    lam_bar = Fraction(lam_bar)
    px = gauge_eval(p, x_bar)
    if px == INF:
        raise ValueError("the gauge is infinite at the base point")
    return 1 + abs(lam_bar), 1 + px


@dataclass(frozen=True)
class ScalarMultReport:
    c1: Fraction
    c2: Fraction
    tested: int
    rejected: int
    seed: int
    violations: tuple
    min_slack: Optional[Fraction] = None

    @property
    def ok(self) -> bool:
        return not self.violations


def check_scalar_mult(p: GaugeFunctional, lam_bar, x_bar, samples: int = 1000,
                      seed: int = 0) -> ScalarMultReport:
    """``d(l1 x1, l2 x2) <= c1 d(x1, x2) + c2 |l1 - l2|`` near ``(l_bar, x_bar)``.

    The neighbourhood is ``|l_i - l_bar| <= 1`` and ``d(x_i, x_bar) <= 1``.
    Candidates are drawn from a slightly larger region and those outside
    the neighbourhood are rejected rather than tested.
    """
    lam_bar, x_bar = Fraction(lam_bar), vec(x_bar)
    c1, c2 = local_constants(lam_bar, x_bar, p)
    rng = sampling.rng_for(seed)
    violations = []
    tested = rejected = 0
    slack = None
    while tested < samples:
        lams = [lam_bar + sampling.rational(rng, Fraction(-9, 8), Fraction(9, 8)) for _ in range(2)]
        xs = []
        for _ in range(2):
            u = sampling.point_in_set(rng, p.base, boundary_bias=0.6)
            xs.append(add(x_bar, smul(sampling.rational(rng, 0, Fraction(5, 4)), u)))
        if rng.random() < 0.05:
            lams[1], xs[1] = lams[0], xs[0]
        if any(abs(l - lam_bar) > 1 for l in lams) or \
                any(gauge_eval(p, sub(x, x_bar)) > 1 for x in xs):
            rejected += 1
            continue
        tested += 1
        (l1, l2), (x1, x2) = lams, xs
        lhs = gauge_eval(p, sub(smul(l1, x1), smul(l2, x2)))
        rhs = c1 * gauge_eval(p, sub(x1, x2)) + c2 * abs(l1 - l2)
        if lhs > rhs:
            violations.append((l1, l2, x1, x2, lhs, rhs))
        slack = rhs - lhs if slack is None else min(slack, rhs - lhs)
    return ScalarMultReport(c1, c2, tested, rejected, seed, tuple(violations), slack)


@dataclass(frozen=True)
class ScaledChainReport:
    scale: Fraction
    samples: int
    seed: int
    records: tuple  # (lam, x, |lam x|_U, |x|_V)
    violations: tuple

    @property
    def ok(self) -> bool:
        return not self.violations


def check_scalar_mult_chain(psnV: DyadicPseudoSeminorm, s, samples: int = 500,
                            seed: int = 0) -> ScaledChainReport:
    """With ``U = s V`` (level by level): ``|l x|_U <= |x|_V`` whenever ``|l| <= s``."""
    s = Fraction(s)
    psnU = DyadicPseudoSeminorm(scale_chain(psnV.chain, s), psnV.strategy, psnV.cap,
                                psnV.membership)
    rng = sampling.rng_for(seed)
    records, violations = [], []
    for _ in range(samples):
        x = sample_point(rng, psnV.chain)
        lam = sample_scalar(rng, s)
        lhs, rhs = psnU(smul(lam, x)), psnV(x)
        records.append((lam, x, lhs, rhs))
        if lhs > rhs:
            violations.append((lam, x, lhs, rhs))
    return ScaledChainReport(s, samples, seed, tuple(records), tuple(violations))


# ---------------------------------------------------------------------------
# maps between Lipschitz spaces
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MapReport:
    certificates: tuple
    counterexample: Optional[LipschitzCertificate] = None
    failures: tuple = field(default=())

    @property
    def ok(self) -> bool:
        return not self.failures and all(c.ok for c in self.certificates)


def grid_ceiling(c) -> Optional[Fraction]:
    """Smallest ``k/64`` (``k >= 1``) not below ``c``, or None beyond the grid."""
    if c == INF or c > GRID_MAX:
        return None
    k = max(1, -((-c / GRID_STEP).__floor__()))
    return k * GRID_STEP


def _exact_constant(f: MapSpec, target: Metric, source: Metric):
    t_parts, s_parts = convex_parts(target), convex_parts(source)
    if t_parts is None or s_parts is None:
        return None
    return max_over_ball(t_parts, s_parts, matrix=f.linear_part)


def check_map(f: MapSpec, LX: LipschitzStructure, LY: LipschitzStructure, mode: str = "exact",
              samples: int = 300, seed: int = 0,
              domain: Optional[Callable] = None) -> MapReport:
    """For every base metric ``dY`` of ``LY`` find a base metric ``dX`` of ``LX``
    and ``c`` with ``dY(f x1, f x2) <= c dX(x1, x2)``.

    Exact mode handles maps with a linear part between convex gauge
    metrics: ``c`` is the maximum of ``dY(M x)`` over the unit ball of
    ``dX``. Other cases are sampled; when the largest observed ratio
    exceeds every grid constant the pair realising it is returned as a
    counterexample.

    ``domain`` restricts the sampled points: for a blackbox map it is a
    predicate on tabulated inputs, otherwise a function ``rng -> point``.
    """
    if LX.dim != f.in_dim or LY.dim != f.out_dim:
        raise DimensionError("structures do not match the map's dimensions")
    if mode == "exact" and f.kind == "blackbox":
        raise BlackboxError("a blackbox map only supports sampled checks")
    certs, failures = [], []
    counterexample = None
    for dY in LY.base:
        cert = None
        if mode == "exact" and f.linear_part is not None:
            cert = _exact_certificate(f, LX, dY)
        if cert is None:
            cert = _sampled_certificate(f, LX, dY, samples, seed, domain)
        certs.append(cert)
        if not cert.ok:
            failures.append(cert)
            if counterexample is None or (cert.max_ratio is not None and
                                          (counterexample.max_ratio is None or
                                           cert.max_ratio > counterexample.max_ratio)):
                counterexample = cert
    return MapReport(tuple(certs), counterexample, tuple(failures))


def _exact_certificate(f, LX, dY):
    best = None
    witness = None
    for dX in LX.base:
        res = _exact_constant(f, dY, dX)
        if res is None:
            return None
        c, arg = res
        if c == INF:
            witness = witness or arg
            continue
        if best is None or c < best[0]:
            best = (c, dX)
    if best is None:
        return LipschitzCertificate(dY.name, "-", None, "exact", witness=witness, max_ratio=INF)
    c, dX = best
    constant = c if c > 0 else GRID_STEP
    return LipschitzCertificate(dY.name, dX.name, constant, "exact",
                                grid_constant=grid_ceiling(constant), max_ratio=c)


def _sample_pairs(f, rng, samples, domain):
    if f.kind == "blackbox":
        pts = [a for a, _ in f.table]
        if domain is not None:
            pts = [p for p in pts if domain(p)]
        if len(pts) < 2:
            return []
        return [tuple(rng.sample(pts, 2)) for _ in range(samples)]
    pairs = []
    for _ in range(samples):
        if domain is not None:
            x1, x2 = domain(rng), domain(rng)
        else:
            x1 = sampling.box_point(rng, f.in_dim)
            x2 = sampling.box_point(rng, f.in_dim) if rng.random() < 0.5 else \
                add(x1, sampling.box_point(rng, f.in_dim, Fraction(1, 4)))
        pairs.append((x1, x2))
    return pairs


def _sampled_certificate(f, LX, dY, samples, seed, domain):
    rng = sampling.rng_for(seed)
    pairs = _sample_pairs(f, rng, samples, domain)
    best = None
    for dX in LX.base:
        ratio, arg = Fraction(0), None
        for x1, x2 in pairs:
            num = dY(f(x1), f(x2))
            if num == 0:
                continue
            den = dX(x1, x2)
            if den == INF:
                continue
            r = INF if den == 0 or num == INF else num / den
            if arg is None or r > ratio:
                ratio, arg = r, (x1, x2)
        if best is None or ratio < best[0]:
            best = (ratio, dX, arg)
    ratio, dX, arg = best
    c = grid_ceiling(ratio)
    if c is None:
        return LipschitzCertificate(dY.name, dX.name, None, "sampled", len(pairs), seed,
                                    violations=(arg,), max_ratio=ratio, witness=arg)
    return LipschitzCertificate(dY.name, dX.name, c, "sampled", len(pairs), seed,
                                grid_constant=c, max_ratio=ratio, witness=arg)
