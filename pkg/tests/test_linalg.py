import sympy as sp
import pytest
from hypothesis import given, strategies as st

from contactred import linalg
from contactred.errors import InputError

x, y = sp.symbols("x y")


def test_symbolic_inverse():
    m = [[x, 1], [0, sp.exp(y)]]
    inv = linalg.inverse(m)
    prod = sp.Matrix(m) * sp.Matrix(inv)
    assert sp.simplify(prod - sp.eye(2)) == sp.zeros(2)


def test_singular_matrix_raises():
    with pytest.raises(InputError):
        linalg.inverse([[x, 2 * x], [1, 2]])


def test_rank_nullspace_span():
    rows = [[1, 2, 3], [2, 4, 6]]
    assert linalg.rank(rows) == 1
    ns = linalg.nullspace(rows, 3)
    assert len(ns) == 2
    for v in ns:
        assert all(sum(a * b for a, b in zip(r, v)) == 0 for r in rows)
    assert linalg.in_span([[1, 0], [0, 0]], [3, 0])
    assert not linalg.in_span([[1, 0], [0, 0]], [0, 1])


small = st.integers(-4, 4)


@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=3, max_size=3), st.lists(small, min_size=3, max_size=3))
def test_solve_matches_sympy(rows, rhs):
    M = sp.Matrix(rows)
    if M.det() == 0:
        return
    sol = linalg.solve(rows, rhs)
    assert list(M.LUsolve(sp.Matrix(rhs))) == [sp.nsimplify(v) for v in sol]
