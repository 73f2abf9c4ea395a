"""Exact Gauss-Jordan elimination over the rationals on small dense matrices."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence


def _primitive(row: list[int]) -> list[int]:
    g = math.gcd(*row)
    return [x // g for x in row] if g > 1 else row


def rref(rows: Sequence[Sequence], track: bool = False):
    """Reduced row echelon form.

    Returns ``(reduced, pivots, transform)`` where ``reduced`` holds only the
    nonzero rows, ``pivots[i]`` is the pivot column of ``reduced[i]`` and, when
    ``track`` is set, ``transform[i]`` expresses ``reduced[i]`` as a combination
    of the input rows.  Pivots are taken in column order, so the rows come out
    sorted by leading column.

    Elimination runs fraction-free on integer rows (the transform rides along as
    extra columns); rationals only appear in the final pivot normalization.
    """
    n_rows = len(rows)
    n_cols = len(rows[0]) if rows else 0
    m = []
    for i, row in enumerate(rows):
        fr = [Fraction(x) for x in row]
        den = math.lcm(*(x.denominator for x in fr)) if fr else 1
        ints = [int(x * den) for x in fr]
        if track:
            # scaling the row by den scales its transform entry by den too
            ints += [den if j == i else 0 for j in range(n_rows)]
        m.append(ints)
    pivots: list[int] = []
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        p = next((i for i in range(r, n_rows) if m[i][c]), None)
        if p is None:
            continue
        if p != r:
            m[r], m[p] = m[p], m[r]
        pr = m[r]
        a = pr[c]
        for i in range(n_rows):
            b = m[i][c]
            if i != r and b:
                g = math.gcd(a, b)
                x, y = a // g, b // g
                m[i] = _primitive([x * u - y * v for u, v in zip(m[i], pr)])
        pivots.append(c)
        r += 1
    reduced, transform = [], []
    for i, c in enumerate(pivots):
        lead = m[i][c]
        reduced.append([Fraction(x, lead) for x in m[i][:n_cols]])
        if track:
            transform.append([Fraction(x, lead) for x in m[i][n_cols:]])
    return reduced, pivots, (transform if track else None)


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1]) if rows else 0


def reduce_against(vec: Sequence, reduced: Sequence[Sequence], pivots: Sequence[int]) -> list[Fraction]:
    """Remainder of ``vec`` after clearing the pivot columns of an RREF basis."""
    v = [Fraction(x) for x in vec]
    for row, c in zip(reduced, pivots):
        if v[c]:
            f = v[c]
            v = [x - f * y for x, y in zip(v, row)]
    return v


def in_span(vec: Sequence, rows: Sequence[Sequence]) -> bool:
    if not rows:
        return not any(vec)
    reduced, pivots, _ = rref(rows)
    return not any(reduce_against(vec, reduced, pivots))


def nullspace(rows: Sequence[Sequence]) -> list[list[Fraction]]:
    """Basis of the right kernel ``{x : A x = 0}``."""
    n_cols = len(rows[0])
    reduced, pivots, _ = rref(rows)
    free = [c for c in range(n_cols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * n_cols
        x[f] = Fraction(1)
        for row, c in zip(reduced, pivots):
            x[c] = -row[f]
        basis.append(x)
    return basis
