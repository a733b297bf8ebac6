"""Exact Gaussian elimination over canonical expressions.

Pivots are chosen as the first entry whose canonical form is nonzero, so all
results are exact in the rational-function field of the chart.
"""
from __future__ import annotations

import sympy as sp

from .errors import InputError
from .symexpr import normalize


def _mat(rows):
    return [[normalize(x) for x in r] for r in rows]


def row_reduce(rows):
    """Return (reduced rows, pivot columns) of a matrix given as lists."""
    m = _mat(rows)
    if not m:
        return m, []
    ncol = len(m[0])
    pivots = []
    r = 0
    for c in range(ncol):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        m[r] = [normalize(x / p) for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [normalize(a - f * b) for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows) -> int:
    return len(row_reduce(rows)[1])


def nullspace(rows, ncol: int | None = None):
    """Basis of {v : rows . v = 0}."""
    if not rows:
        n = ncol or 0
        return [[sp.Integer(int(i == j)) for i in range(n)] for j in range(n)]
    m, piv = row_reduce(rows)
    n = len(m[0])
    free = [c for c in range(n) if c not in piv]
    out = []
    for f in free:
        v = [sp.Integer(0)] * n
        v[f] = sp.Integer(1)
        for i, c in enumerate(piv):
            v[c] = normalize(-m[i][f])
        out.append(v)
    return out


def solve(rows, rhs, unique: bool = True):
    """Solve rows . v = rhs exactly; raise InputError if inconsistent."""
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    n = len(rows[0]) if rows else 0
    m, piv = row_reduce(aug)
    if n in piv:
        raise InputError("inconsistent linear system")
    if unique and len(piv) < n:
        raise InputError("linear system is underdetermined")
    v = [sp.Integer(0)] * n
    for i, c in enumerate(piv):
        v[c] = m[i][n]
    return v


def inverse(rows):
    """Exact inverse of a square matrix; InputError if singular."""
    n = len(rows)
    aug = [list(r) + [sp.Integer(int(i == j)) for j in range(n)] for i, r in enumerate(rows)]
    m, piv = row_reduce(aug)
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise InputError("matrix is singular")
    return [row[n:] for row in m]


def in_span(rows, v) -> bool:
    """Whether vector v lies in the row span of rows."""
    if not rows:
        return all(normalize(x) == 0 for x in v)
    return rank(list(rows) + [list(v)]) == rank(rows)
