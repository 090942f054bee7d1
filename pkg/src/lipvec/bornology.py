"""Bounded disks, the seminorm ``p_A`` on ``E_A`` and bornological Lipschitz checks."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from . import sampling
from .gauge import GaugeFunctional, gauge_eval, sup_over
from .lipstruct import GaugeMetric, LipschitzStructure
from .numkernel import INF, add, smul, span_membership, zeros
from .sets import BalancedPolytope
from .veccheck import MapSpec, check_map


@dataclass(frozen=True, eq=False)
class BoundedDisk:
    """A convex, circled, bounded set ``A`` and the subspace ``E_A`` it spans."""

    polytope: BalancedPolytope
    name: str = "A"

    @property
    def dim(self) -> int:
        return self.polytope.dim

    @property
    def span_basis(self) -> tuple:
        return self.polytope.span_basis

    @cached_property
    def gauge(self) -> GaugeFunctional:
        return GaugeFunctional.of_disk(self.polytope, name=f"p_{self.name}")

    def in_span(self, x) -> bool:
        return span_membership(self.span_basis, x)[0]

    def sample(self, rng, radius=3):
        """Random point of ``E_A`` drawn through coordinates in the span basis."""
        out = zeros(self.dim)
        for b in self.span_basis:
            out = add(out, smul(sampling.rational(rng, -radius, radius), b))
        return out


def disk_structure(disk: BoundedDisk) -> LipschitzStructure:
    """Structure on ``E_A`` generated by the metric of ``p_A``."""
    return LipschitzStructure((GaugeMetric(disk.gauge, name=disk.gauge.name),))


@dataclass(frozen=True)
class DominationCheck:
    gauge: str
    bound: object  # l = sup p(A)
    samples: int
    violations: tuple
    max_ratio: Fraction

    @property
    def ok(self) -> bool:
        return self.bound != INF and not self.violations


def check_disk_domination(disk: BoundedDisk, P, samples: int = 500, seed: int = 0) -> list:
    """For each convex gauge ``p``: ``l = sup p(A)`` and ``p(x) <= l p_A(x)`` on ``E_A``."""
    reports = []
    for k, p in enumerate(P):
        l, g = sup_over(disk.polytope, p)
        if l == INF:
            reports.append(DominationCheck(p.name, INF, 0, ((g,),), Fraction(0)))
            continue
        rng = sampling.rng_for(seed + k)
        violations = []
        max_ratio = Fraction(0)
        for i in range(samples):
            x = disk.sample(rng) if i % 3 else sampling.point_in_polytope(rng, disk.polytope)
            px, pa = gauge_eval(p, x), gauge_eval(disk.gauge, x)
            if px > l * pa:
                violations.append((x, px, pa))
            if pa:
                max_ratio = max(max_ratio, px / pa)
        reports.append(DominationCheck(p.name, l, samples, tuple(violations), max_ratio))
    return reports


def check_bornological(f: MapSpec, disks, LY: LipschitzStructure, mode: str = "exact",
                       samples: int = 300, seed: int = 0) -> list:
    """Run :func:`check_map` from ``(E_A, p_A)`` for every disk; one report per disk."""
    out = []
    for disk in disks:
        if f.kind == "blackbox":
            domain = disk.in_span
        else:
            def domain(rng, disk=disk):
                return disk.sample(rng)
        report = check_map(f, disk_structure(disk), LY, mode=mode, samples=samples, seed=seed,
                           domain=domain)
        out.append((disk.name, report))
    return out
