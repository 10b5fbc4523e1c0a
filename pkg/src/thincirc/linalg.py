"""Exact integer linear algebra.

Rows are lists of ints. Elimination is fraction-free: every row operation
is ``row_i <- p * row_i - c * row_p`` followed by division by the row gcd,
so entries stay integral and small enough for the sizes used here.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence


def _normalize(row: list[int]) -> list[int]:
    g = 0
    for v in row:
        g = gcd(g, v)
    if g > 1:
        row = [v // g for v in row]
    return row


def echelon(rows: Sequence[Sequence[int]], ncols: int,
            column_order: Sequence[int] | None = None):
    """Reduce ``rows`` to reduced row-echelon form without fractions.

    Returns ``(reduced_rows, pivots)`` where ``pivots[r]`` is the column of
    the pivot in ``reduced_rows[r]``. Columns are scanned in
    ``column_order`` (default: natural order); every other entry in a pivot
    column is zero afterwards.
    """
    order = list(range(ncols)) if column_order is None else list(column_order)
    m = [_normalize(list(r)) for r in rows if any(r)]
    pivots: list[int] = []
    r = 0
    for c in order:
        if r == len(m):
            break
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        if m[r][c] < 0:
            m[r] = [-v for v in m[r]]
        pv = m[r][c]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = _normalize([pv * a - f * b for a, b in zip(m[i], m[r])])
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rank(rows: Sequence[Sequence[int]], ncols: int | None = None) -> int:
    rows = list(rows)
    if not rows:
        return 0
    if ncols is None:
        ncols = len(rows[0])
    return len(echelon(rows, ncols)[1])


def nullspace_parametrization(rows: Sequence[Sequence[int]], ncols: int,
                              column_order: Sequence[int] | None = None):
    """Express every variable through the free ones.

    Returns ``(free, coeffs)``: ``free`` lists the free columns (the
    non-pivot columns, in scan order) and ``coeffs[i][j]`` is the rational
    coefficient of ``free[j]`` in variable ``i``.
    """
    reduced, pivots = echelon(rows, ncols, column_order)
    order = list(range(ncols)) if column_order is None else list(column_order)
    pivot_set = set(pivots)
    free = [c for c in order if c not in pivot_set]
    coeffs = [[Fraction(0)] * len(free) for _ in range(ncols)]
    for j, f in enumerate(free):
        coeffs[f][j] = Fraction(1)
    for row, pc in zip(reduced, pivots):
        pv = row[pc]
        for j, f in enumerate(free):
            if row[f]:
                coeffs[pc][j] = Fraction(-row[f], pv)
    return free, coeffs
