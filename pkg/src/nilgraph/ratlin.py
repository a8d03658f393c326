"""Exact linear algebra over the rationals.

Matrices are plain lists of rows of Fractions.  Everything here is small and
dense; the point is bit-exact span and kernel computations, not speed.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Row = list  # list[Fraction]


def _as_rows(rows) -> list[Row]:
    return [[Fraction(x) for x in row] for row in rows]


def rref(rows) -> tuple[list[Row], list[int]]:
    """Reduced row echelon form.  Returns (nonzero rows, pivot columns)."""
    m = _as_rows(rows)
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        pv = m[r][c]
        m[r] = [x / pv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows) -> int:
    return len(rref(rows)[0])


def nullspace(rows) -> list[Row]:
    """Basis of {x : A x = 0}, one row per basis vector.

    Free variables are set to 1 in increasing column order, which makes the
    basis deterministic.
    """
    m = _as_rows(rows)
    if not m:
        return []
    ncols = len(m[0])
    echelon, pivots = rref(m)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for row, pc in zip(echelon, pivots):
            vec[pc] = -row[fc]
        basis.append(vec)
    return basis


def in_span(echelon: Sequence[Row], pivots: Sequence[int], vec) -> bool:
    """Membership test against a reduced-echelon row span."""
    v = [Fraction(x) for x in vec]
    for row, pc in zip(echelon, pivots):
        if v[pc] != 0:
            f = v[pc]
            v = [a - f * b for a, b in zip(v, row)]
    return all(x == 0 for x in v)


def span_equal(rows_a, rows_b) -> bool:
    """Whether two row sets span the same subspace."""
    ea, pa = rref(rows_a)
    eb, pb = rref(rows_b)
    return ea == eb and list(pa) == list(pb)


def span_dim(rows) -> int:
    return rank(rows)


def stack_echelon(echelon: list[Row], pivots: list[int], new_rows) -> tuple[list[Row], list[int]]:
    """Fold new rows into an existing reduced echelon basis."""
    combined = [list(r) for r in echelon] + _as_rows(new_rows)
    return rref(combined)


def annihilator(rows, dim: int) -> list[Row]:
    """Basis of {w : w . v = 0 for all v in rowspan(rows)}.

    ``dim`` is the ambient dimension (needed when ``rows`` is empty).
    """
    if not rows:
        return [
            [Fraction(1) if i == j else Fraction(0) for j in range(dim)]
            for i in range(dim)
        ]
    return nullspace(rows)
