"""Exact rational linear algebra and a two-phase simplex solver.

Everything here works on :class:`fractions.Fraction`; floats are rejected
at the boundary so that every downstream inequality is an exact assertion.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Optional, Sequence

Rat = Fraction
Vector = tuple  # tuple of Fraction

INF = float("inf")


class DimensionError(ValueError):
    """Raised when vectors or constraint rows disagree in length."""


def as_rat(value) -> Fraction:
    """Convert ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are refused: they would silently smuggle rounding into exact code.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text or any(c in text for c in ".eE"):
            raise ValueError(f"malformed rational {value!r}")
        return Fraction(text)
    if isinstance(value, Rational):
        return Fraction(value.numerator, value.denominator)
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


def vec(values) -> Vector:
    return tuple(as_rat(v) for v in values)


def check_dim(x: Sequence, dim: int, what: str = "vector") -> None:
    if len(x) != dim:
        raise DimensionError(f"{what} has dimension {len(x)}, expected {dim}")


def add(x, y) -> Vector:
    return tuple(a + b for a, b in zip(x, y))


def sub(x, y) -> Vector:
    return tuple(a - b for a, b in zip(x, y))


def smul(s, x) -> Vector:
    return tuple(s * a for a in x)


def dot(x, y) -> Fraction:
    return sum((a * b for a, b in zip(x, y)), Fraction(0))


def zeros(dim: int) -> Vector:
    return (Fraction(0),) * dim


def matvec(matrix, x) -> Vector:
    return tuple(dot(row, x) for row in matrix)


# ---------------------------------------------------------------------------
# Linear programs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LinearProgram:
    """``min objective.x`` subject to equality rows, ``<=`` rows and sign bounds.

    Variables are free unless listed in ``nonneg``. An absent objective
    means a pure feasibility problem.
    """

    n_vars: int
    objective: Optional[tuple] = None
    eq_rows: tuple = ()
    eq_rhs: tuple = ()
    ub_rows: tuple = ()
    ub_rhs: tuple = ()
    nonneg: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        conv = lambda rows: tuple(vec(r) for r in rows)  # noqa: E731
        object.__setattr__(self, "eq_rows", conv(self.eq_rows))
        object.__setattr__(self, "ub_rows", conv(self.ub_rows))
        object.__setattr__(self, "eq_rhs", vec(self.eq_rhs))
        object.__setattr__(self, "ub_rhs", vec(self.ub_rhs))
        object.__setattr__(self, "nonneg", frozenset(self.nonneg))
        if self.objective is not None:
            object.__setattr__(self, "objective", vec(self.objective))
            check_dim(self.objective, self.n_vars, "objective")
        for row in self.eq_rows + self.ub_rows:
            check_dim(row, self.n_vars, "constraint row")
        if len(self.eq_rows) != len(self.eq_rhs) or len(self.ub_rows) != len(self.ub_rhs):
            raise DimensionError("row count and right-hand side count differ")
        if any(not 0 <= j < self.n_vars for j in self.nonneg):
            raise DimensionError("sign bound refers to a missing variable")

    def satisfied_by(self, x) -> bool:
        """Exact check of every constraint at ``x``."""
        if len(x) != self.n_vars:
            return False
        if any(x[j] < 0 for j in self.nonneg):
            return False
        if any(dot(r, x) != b for r, b in zip(self.eq_rows, self.eq_rhs)):
            return False
        return all(dot(r, x) <= b for r, b in zip(self.ub_rows, self.ub_rhs))

    def is_farkas_certificate(self, eq_mult, ub_mult) -> bool:
        """True when the multipliers prove the constraint system empty.

        Requires ``ub_mult >= 0``, the combined row to vanish on free
        variables and be ``>= 0`` on nonnegative ones, and a negative
        combined right-hand side.
        """
        if any(u < 0 for u in ub_mult):
            return False
        combo = [Fraction(0)] * self.n_vars
        rhs = Fraction(0)
        for u, row, b in list(zip(eq_mult, self.eq_rows, self.eq_rhs)) + list(
                zip(ub_mult, self.ub_rows, self.ub_rhs)):
            if u:
                for j, a in enumerate(row):
                    combo[j] += u * a
                rhs += u * b
        for j, c in enumerate(combo):
            if j in self.nonneg:
                if c < 0:
                    return False
            elif c != 0:
                return False
        return rhs < 0


@dataclass(frozen=True)
class Feasibility:
    feasible: bool
    witness: Optional[Vector] = None
    eq_certificate: Optional[Vector] = None
    ub_certificate: Optional[Vector] = None

    def __bool__(self):
        return self.feasible


@dataclass(frozen=True)
class Outcome:
    status: str  # "optimal" | "unbounded" | "infeasible"
    value: Optional[Fraction] = None
    argmin: Optional[Vector] = None


class _Tableau:
    """Dense simplex tableau over Fractions with Bland's anti-cycling rule."""

    def __init__(self, rows, rhs, basis):
        self.rows = [list(r) + [b] for r, b in zip(rows, rhs)]
        self.basis = list(basis)
        self.ncols = len(rows[0]) if rows else 0

    def pivot(self, i, j):
        prow = self.rows[i]
        piv = prow[j]
        if piv != 1:
            inv = 1 / piv
            prow = [a * inv for a in prow]
            self.rows[i] = prow
        nz = [k for k, a in enumerate(prow) if a]
        for r, row in enumerate(self.rows):
            if r != i:
                f = row[j]
                if f:
                    for k in nz:
                        row[k] -= f * prow[k]
        self.basis[i] = j

    def reduced_costs(self, cost):
        red = list(cost) + [Fraction(0)]
        for i, b in enumerate(self.basis):
            cb = cost[b]
            if cb:
                for k, a in enumerate(self.rows[i]):
                    if a:
                        red[k] -= cb * a
        return red

    def run(self, cost, allowed):
        """Minimise ``cost`` from the current basis; columns outside ``allowed`` never enter."""
        while True:
            red = self.reduced_costs(cost)
            entering = next((j for j in allowed if red[j] < 0), None)
            if entering is None:
                return "optimal"
            best = None
            for i, row in enumerate(self.rows):
                a = row[entering]
                if a > 0:
                    key = (row[-1] / a, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return "unbounded"
            self.pivot(best[1], entering)

    def solution(self):
        z = [Fraction(0)] * self.ncols
        for i, b in enumerate(self.basis):
            z[b] = self.rows[i][-1]
        return z


def _solve(lp: LinearProgram):
    """Two-phase simplex. Returns ``(status, x, value, eq_cert, ub_cert)``."""
    n = lp.n_vars
    # column layout: one column per nonneg variable, a +/- pair per free one
    col_of = []
    ncols = 0
    for j in range(n):
        if j in lp.nonneg:
            col_of.append((ncols, None))
            ncols += 1
        else:
            col_of.append((ncols, ncols + 1))
            ncols += 2
    n_struct = ncols
    n_eq, n_ub = len(lp.eq_rows), len(lp.ub_rows)
    m = n_eq + n_ub
    slack0 = ncols
    ncols += n_ub

    rows, rhs, sign = [], [], []
    for r, (row, b) in enumerate(list(zip(lp.eq_rows, lp.eq_rhs)) + list(zip(lp.ub_rows, lp.ub_rhs))):
        full = [Fraction(0)] * ncols
        for j, a in enumerate(row):
            p, q = col_of[j]
            full[p] = a
            if q is not None:
                full[q] = -a
        if r >= n_eq:
            full[slack0 + r - n_eq] = Fraction(1)
        s = -1 if b < 0 else 1
        if s < 0:
            full = [-a for a in full]
            b = -b
        rows.append(full)
        rhs.append(b)
        sign.append(s)

    # initial basis: a slack with +1 where possible, otherwise an artificial
    init_col, art_cols = [], []
    for r in range(m):
        if r >= n_eq and sign[r] > 0:
            init_col.append(slack0 + r - n_eq)
        else:
            init_col.append(ncols + len(art_cols))
            art_cols.append(r)
    total = ncols + len(art_cols)
    for k, r in enumerate(art_cols):
        for i in range(m):
            rows[i].append(Fraction(1) if i == r else Fraction(0))

    if m == 0:
        z = [Fraction(0)] * total
        tab = None
    else:
        tab = _Tableau(rows, rhs, init_col)
        if art_cols:
            cost1 = [Fraction(0)] * ncols + [Fraction(1)] * len(art_cols)
            tab.run(cost1, range(total))
            value1 = sum((tab.rows[i][-1] for i, b in enumerate(tab.basis) if b >= ncols), Fraction(0))
            if value1 > 0:
                y = [Fraction(0)] * m
                for i, b in enumerate(tab.basis):
                    if cost1[b]:
                        for r in range(m):
                            y[r] += cost1[b] * tab.rows[i][init_col[r]]
                u = [-sign[r] * y[r] for r in range(m)]
                return "infeasible", None, None, tuple(u[:n_eq]), tuple(u[n_eq:])
            # drive zero-level artificials out of the basis where possible
            for i, b in enumerate(tab.basis):
                if b >= ncols:
                    j = next((k for k in range(ncols) if tab.rows[i][k] != 0), None)
                    if j is not None:
                        tab.pivot(i, j)
        z = None

    if lp.objective is None:
        if tab is not None:
            z = tab.solution()
        x = _recover(z, col_of)
        return "optimal", x, None, None, None

    cost = [Fraction(0)] * total
    for j, c in enumerate(lp.objective):
        p, q = col_of[j]
        cost[p] = c
        if q is not None:
            cost[q] = -c
    if tab is None:
        # no constraints at all: bounded only if no direction improves
        for j in range(n_struct):
            if cost[j] < 0:
                return "unbounded", None, None, None, None
        x = tuple(Fraction(0) for _ in range(n))
        return "optimal", x, Fraction(0), None, None
    status = tab.run(cost, range(ncols))
    if status == "unbounded":
        return "unbounded", None, None, None, None
    x = _recover(tab.solution(), col_of)
    return "optimal", x, dot(lp.objective, x), None, None


def _recover(z, col_of):
    out = []
    for p, q in col_of:
        out.append(z[p] - (z[q] if q is not None else 0))
    return tuple(out)


def lp_feasible(lp: LinearProgram) -> Feasibility:
    """Decide feasibility exactly, with a witness or a Farkas certificate."""
    if lp.objective is not None:
        raise ValueError("lp_feasible expects a program without objective")
    status, x, _, eq_c, ub_c = _solve(lp)
    if status == "infeasible":
        assert lp.is_farkas_certificate(eq_c, ub_c), "simplex produced a bad certificate"
        return Feasibility(False, eq_certificate=eq_c, ub_certificate=ub_c)
    assert lp.satisfied_by(x), "simplex produced an infeasible witness"
    return Feasibility(True, witness=x)


def lp_minimize(lp: LinearProgram) -> Outcome:
    """Exact minimum of the objective, or ``unbounded`` / ``infeasible``."""
    if lp.objective is None:
        raise ValueError("lp_minimize needs an objective")
    status, x, value, _, _ = _solve(lp)
    if status != "optimal":
        return Outcome(status)
    return Outcome("optimal", value, x)


# ---------------------------------------------------------------------------
# Gaussian elimination
# ---------------------------------------------------------------------------

def row_reduce(matrix):
    """Reduced row echelon form. Returns ``(rows, pivot_columns)``."""
    rows = [list(map(as_rat, r)) for r in matrix]
    pivots = []
    r = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        p = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [a * inv for a in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank(vectors) -> int:
    vectors = list(vectors)
    if not vectors:
        return 0
    return len(row_reduce(vectors)[1])


def independent_subset(vectors) -> list:
    """Indices of a maximal linearly independent subset, greedily in order."""
    vectors = [vec(v) for v in vectors]
    if not vectors:
        return []
    cols = [list(c) for c in zip(*vectors)]  # vectors as columns
    _, pivots = row_reduce(cols)
    return pivots


def span_membership(generators, x):
    """Whether ``x`` is a linear combination of ``generators``.

    Returns ``(True, coords)`` with one coordinate per generator (zeros on
    the non-pivot generators) or ``(False, None)``.
    """
    x = vec(x)
    gens = [vec(g) for g in generators]
    for g in gens:
        check_dim(g, len(x), "generator")
    if not gens:
        return (all(a == 0 for a in x), () if all(a == 0 for a in x) else None)
    # augmented system [g_1 ... g_k | x]
    aug = [[g[i] for g in gens] + [x[i]] for i in range(len(x))]
    rows, pivots = row_reduce(aug)
    k = len(gens)
    if k in pivots:
        return False, None
    coords = [Fraction(0)] * k
    for r, c in enumerate(pivots):
        coords[c] = rows[r][k]
    return True, tuple(coords)
