import itertools
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lipvec.numkernel import (
    DimensionError,
    LinearProgram,
    as_rat,
    lp_feasible,
    lp_minimize,
    rank,
    span_membership,
)


# --- conversions -----------------------------------------------------------

def test_as_rat_accepts_exact_inputs():
    assert as_rat(3) == 3
    assert as_rat("2/6") == F(1, 3)
    assert as_rat(" -5 ") == -5
    assert as_rat(F(7, 9)) == F(7, 9)


@pytest.mark.parametrize("bad", [0.5, "0.5", "1e3", True, None, ""])
def test_as_rat_rejects_inexact_inputs(bad):
    with pytest.raises((TypeError, ValueError)):
        as_rat(bad)


# --- feasibility -----------------------------------------------------------

def test_box_contains_origin():
    lp = LinearProgram(1, ub_rows=[[1]], ub_rhs=[1], nonneg=[0])
    res = lp_feasible(lp)
    assert res.feasible and res.witness == (0,)


def test_disjoint_bounds_are_infeasible_with_certificate():
    lp = LinearProgram(1, ub_rows=[[1]], ub_rhs=[-1], nonneg=[0])
    res = lp_feasible(lp)
    assert not res.feasible
    assert lp.is_farkas_certificate(res.eq_certificate, res.ub_certificate)


def test_simplex_witness_on_segment():
    lp = LinearProgram(2, eq_rows=[[1, 1]], eq_rhs=[1], ub_rows=[[1, 0]], ub_rhs=[F(1, 3)],
                       nonneg=[0, 1])
    res = lp_feasible(lp)
    assert res.feasible and lp.satisfied_by(res.witness)
    # the witness is exact, so the constraints hold with no tolerance
    x, y = res.witness
    assert x + y == 1 and 0 <= x <= F(1, 3) and y >= 0


def test_row_length_mismatch():
    with pytest.raises(DimensionError):
        LinearProgram(2, ub_rows=[[1, 2, 3]], ub_rhs=[0])
    with pytest.raises(DimensionError):
        LinearProgram(2, eq_rows=[[1, 2]], eq_rhs=[0, 1])


def test_feasible_refuses_objective():
    with pytest.raises(ValueError):
        lp_feasible(LinearProgram(1, objective=[1]))


# --- minimization ----------------------------------------------------------

def test_minimize_lower_bound():
    # min t s.t. -t <= -3
    out = lp_minimize(LinearProgram(1, objective=[1], ub_rows=[[-1]], ub_rhs=[-3]))
    assert out.status == "optimal" and out.value == 3


def test_minimize_l1_gauge_setup():
    # x = sum (l+ - l-) e_i, sum (l+ + l-) <= t, x = (1, 1)
    eq = [[1, 0, -1, 0, 0], [0, 1, 0, -1, 0]]
    out = lp_minimize(LinearProgram(5, objective=[0, 0, 0, 0, 1], eq_rows=eq, eq_rhs=[1, 1],
                                    ub_rows=[[1, 1, 1, 1, -1]], ub_rhs=[0], nonneg=range(5)))
    assert out.value == 2


def test_minimize_unbounded():
    assert lp_minimize(LinearProgram(1, objective=[1])).status == "unbounded"


def test_minimize_infeasible():
    lp = LinearProgram(1, objective=[1], ub_rows=[[1], [-1]], ub_rhs=[0, -1])
    assert lp_minimize(lp).status == "infeasible"


def _solve_square(rows, rhs):
    """Gauss-Jordan on a square rational system; None when singular."""
    n = len(rows)
    m = [list(r) + [b] for r, b in zip(rows, rhs)]
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return None
        m[c], m[piv] = m[piv], m[c]
        for r in range(n):
            if r != c and m[r][c]:
                f = m[r][c] / m[c][c]
                m[r] = [a - f * b for a, b in zip(m[r], m[c])]
    return [m[i][n] / m[i][i] for i in range(n)]


def vertex_oracle(objective, eq_rows, eq_rhs, ub_rows, ub_rhs):
    """Minimum over basic feasible points (the polytope is bounded by construction)."""
    n = len(objective)
    best = None
    free = n - len(eq_rows)
    for active in itertools.combinations(range(len(ub_rows)), free):
        rows = list(eq_rows) + [ub_rows[i] for i in active]
        rhs = list(eq_rhs) + [ub_rhs[i] for i in active]
        x = _solve_square(rows, rhs)
        if x is None:
            continue
        if all(sum(a * v for a, v in zip(r, x)) <= b for r, b in zip(ub_rows, ub_rhs)):
            val = sum(a * v for a, v in zip(objective, x))
            best = val if best is None else min(best, val)
    return best


small = st.integers(-3, 3).map(F)


@st.composite
def bounded_lps(draw):
    n = draw(st.integers(1, 3))
    box = draw(st.integers(1, 4))
    ub_rows, ub_rhs = [], []
    for i in range(n):
        for sgn in (1, -1):
            ub_rows.append([F(sgn) if j == i else F(0) for j in range(n)])
            ub_rhs.append(F(box))
    extra = draw(st.integers(0, 8 - 2 * n if n < 4 else 0))
    for _ in range(extra):
        ub_rows.append([draw(small) for _ in range(n)])
        ub_rhs.append(draw(small))
    eq_rows, eq_rhs = [], []
    if n >= 2 and draw(st.booleans()):
        eq_rows.append([draw(small) for _ in range(n)])
        eq_rhs.append(draw(small))
    objective = [draw(small) for _ in range(n)]
    return objective, eq_rows, eq_rhs, ub_rows, ub_rhs


@given(bounded_lps())
def test_minimize_matches_vertex_enumeration(data):
    objective, eq_rows, eq_rhs, ub_rows, ub_rhs = data
    lp = LinearProgram(len(objective), objective=objective, eq_rows=eq_rows, eq_rhs=eq_rhs,
                       ub_rows=ub_rows, ub_rhs=ub_rhs)
    out = lp_minimize(lp)
    expected = vertex_oracle(objective, eq_rows, eq_rhs, ub_rows, ub_rhs)
    if expected is None:
        # either empty, or an equality row that is identically zero
        if out.status == "optimal":
            assert lp.satisfied_by(out.argmin)
            assert all(not any(r) for r in eq_rows)
        else:
            assert out.status == "infeasible"
            assert not lp_feasible(LinearProgram(lp.n_vars, eq_rows=eq_rows, eq_rhs=eq_rhs,
                                                 ub_rows=ub_rows, ub_rhs=ub_rhs)).feasible
    else:
        assert out.status == "optimal"
        assert out.value == expected
        assert lp.satisfied_by(out.argmin)


@given(bounded_lps())
def test_feasibility_witness_or_certificate_is_exact(data):
    _, eq_rows, eq_rhs, ub_rows, ub_rhs = data
    lp = LinearProgram(len(ub_rows[0]), eq_rows=eq_rows, eq_rhs=eq_rhs, ub_rows=ub_rows,
                       ub_rhs=ub_rhs)
    res = lp_feasible(lp)
    if res.feasible:
        assert lp.satisfied_by(res.witness)
    else:
        assert lp.is_farkas_certificate(res.eq_certificate, res.ub_certificate)


def test_degenerate_program_terminates():
    # a classic cycling-prone shape: many constraints active at the origin
    rows = [[F(1, 2), F(-11, 2), F(-5, 2), 9], [F(1, 2), F(-3, 2), F(-1, 2), 1], [1, 0, 0, 0]]
    lp = LinearProgram(4, objective=[-10, 57, 9, 24], ub_rows=rows, ub_rhs=[0, 0, 1],
                       nonneg=range(4))
    out = lp_minimize(lp)
    assert out.status == "optimal" and out.value == -1


# --- linear algebra --------------------------------------------------------

def test_span_membership_examples():
    assert span_membership([(1, 0)], (2, 0)) == (True, (2,))
    assert span_membership([(1, 0)], (0, 1)) == (False, None)
    assert span_membership([(1, 1), (1, -1)], (3, 1)) == (True, (2, 1))


def test_span_membership_dimension_mismatch():
    with pytest.raises(DimensionError):
        span_membership([(1, 0, 0)], (1, 0))


@given(st.lists(st.tuples(small, small, small), min_size=1, max_size=4),
       st.lists(small, min_size=4, max_size=4))
def test_span_membership_reconstructs(gens, coeffs):
    x = tuple(sum(c * g[i] for c, g in zip(coeffs, gens)) for i in range(3))
    ok, coords = span_membership(gens, x)
    assert ok
    assert tuple(sum(c * g[i] for c, g in zip(coords, gens)) for i in range(3)) == x
    assert rank(list(gens) + [x]) == rank(gens)
