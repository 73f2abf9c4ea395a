"""Spaces of quasimodular forms on SL2(Z) as spaces of truncated q-expansions.

A form of weight w and depth at most l is a polynomial in E2, E4, E6 in which
E2 appears to degree at most l.  Each space is handled through its monomial
expansions (or through derivatives of modular forms), row-reduced exactly to
the diagonal shape ``1, q, q^2, ...`` that exists for depth at most 4.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .eisenstein import eisenstein
from .linalg import in_span, rref
from .series import HalfQSeries, derive

MAX_DEPTH = 4


class QmSpaceError(ValueError):
    pass


def dim_modular(k: int) -> int:
    """Dimension of the space of modular forms of weight k on SL2(Z)."""
    if k < 0 or k % 2:
        return 0
    if k % 12 == 2:
        return k // 12
    return k // 12 + 1


def admissible(depth: int, weight: int) -> bool:
    return (
        weight >= 0
        and weight % 2 == 0
        and 0 <= depth <= weight // 2
        and depth != weight // 2 - 1
    )


def _dim_sum(depth: int, weight: int) -> int:
    return sum(dim_modular(weight - 2 * j) for j in range(depth + 1))


def dim_qm(depth: int, weight: int) -> int:
    """Sum of dim M_{w-2j} over j <= depth.

    Depths above w/2 are accepted (the extra terms vanish, so the space is that of
    depth w/2); positive depth w/2 - 1 is excluded.
    """
    if weight < 0 or weight % 2 or depth < 0 or (depth >= 1 and depth == weight // 2 - 1):
        raise QmSpaceError(f"inadmissible (depth, weight) = ({depth}, {weight})")
    return _dim_sum(depth, weight)


@dataclass(frozen=True)
class QmSpaceDescriptor:
    weight: int
    depth: int
    dim: int


@dataclass
class QmBasis:
    descriptor: QmSpaceDescriptor
    elements: list[HalfQSeries]  # echelonized: element j = q^j + O(q^m)
    form_exponents: list  # (i, a, b) for E2^i E4^a E6^b, or ("D", j, idx) labels
    route: str = "monomial"
    # element j as a combination of the generating forms listed in form_exponents
    combinations: list[list[Fraction]] = field(default_factory=list)
    pivots: list[int] = field(default_factory=list)


def monomials(depth: int, weight: int) -> list[tuple[int, int, int]]:
    """Exponents (i, a, b) with 2i + 4a + 6b = weight and i <= depth."""
    out = []
    for i in range(depth + 1):
        rest = weight - 2 * i
        if rest < 0:
            break
        for b in range(rest // 6 + 1):
            r = rest - 6 * b
            if r % 4 == 0:
                out.append((i, r // 4, b))
    return out


@lru_cache(maxsize=4096)
def _power(weight: int, n: int, order: int) -> HalfQSeries:
    if n == 0:
        return HalfQSeries.constant(1, 2 * order)
    if n == 1:
        return eisenstein(weight, order)
    half = _power(weight, n // 2, order)
    sq = half * half
    return sq * eisenstein(weight, order) if n % 2 else sq


@lru_cache(maxsize=4096)
def monomial_series(i: int, a: int, b: int, order: int) -> HalfQSeries:
    """``E2^i E4^a E6^b`` to ``q^(order-1)``."""
    return _power(2, i, order) * _power(4, a, order) * _power(6, b, order)


def _echelon(series: list[HalfQSeries], order: int, descriptor, labels, route) -> QmBasis:
    rows = [s.q_coeffs(0, order) for s in series]
    reduced, pivots, transform = rref(rows, track=True)
    m = descriptor.dim
    if len(pivots) != m:
        raise QmSpaceError(
            f"rank {len(pivots)} != dim {m} for depth {descriptor.depth}, weight {descriptor.weight} "
            f"at order {order}; generators: {labels}"
        )
    elements = [HalfQSeries.from_q_coeffs(r, order) for r in reduced]
    return QmBasis(descriptor, elements, list(labels), route, transform, pivots)


def _check_order(depth: int, weight: int, order: int, m: int) -> None:
    if order <= m + 2:
        raise QmSpaceError(
            f"order {order} too small to echelonize (depth {depth}, weight {weight}, dim {m}); "
            f"need order > {m + 2}"
        )


def monomial_basis(depth: int, weight: int, order: int, *, check: bool = True) -> QmBasis:
    """Echelonized basis from the monomials E2^i E4^a E6^b."""
    m = dim_qm(depth, weight) if check else _dim_sum(depth, weight)
    _check_order(depth, weight, order, m)
    exps = monomials(depth, weight)
    series = [monomial_series(i, a, b, order) for i, a, b in exps]
    return _echelon(series, order, QmSpaceDescriptor(weight, depth, m), exps, "monomial")


def miller_basis(weight: int, order: int) -> list[HalfQSeries]:
    """Miller basis of M_weight (empty if the space is zero)."""
    if dim_modular(weight) == 0:
        return []
    return monomial_basis(0, weight, order, check=False).elements


def derivative_basis(depth: int, weight: int, order: int) -> QmBasis:
    """Echelonized basis assembled from D^j applied to Miller bases of M_{w-2j}."""
    m = dim_qm(depth, weight)
    if not depth < weight / 2:
        raise QmSpaceError("derivative basis needs depth < weight/2")
    _check_order(depth, weight, order, m)
    series, labels = [], []
    for j in range(depth + 1):
        for idx, f in enumerate(miller_basis(weight - 2 * j, order)):
            for _ in range(j):
                f = derive(f)
            series.append(f)
            labels.append(("D", j, idx))
    return _echelon(series, order, QmSpaceDescriptor(weight, depth, m), labels, "derivative")


def depth_of(f: HalfQSeries, weight: int, max_depth: int = MAX_DEPTH) -> int:
    """Smallest depth whose space contains ``f`` at the available truncation."""
    order = f.q_order
    vec = f.q_coeffs(0, order)
    for d in range(0, max_depth + 1):
        if _dim_sum(d, weight) == 0:
            continue
        rows = [monomial_series(i, a, b, order).q_coeffs(0, order) for i, a, b in monomials(d, weight)]
        if in_span(vec, rows):
            return d
    raise QmSpaceError(f"series is not a quasimodular form of weight {weight} and depth <= {max_depth}")


@dataclass
class ExtremalSolution:
    series: HalfQSeries
    weight: int
    depth: int
    dim: int
    actual_depth: int
    depth_degenerate: bool
    # coefficients of the solution on the monomials E2^i E4^a E6^b (monomial route only)
    polynomial: dict | None = None


EXTREMAL_MARGIN = 10


def extremal_solve(depth: int, weight: int, order: int, basis: str = "monomial") -> ExtremalSolution:
    """Normalized extremal form of the given depth and weight by exact linear algebra.

    Pairs with ``depth == weight/2 - 1`` (where the space coincides with the one of
    smaller depth) are accepted; the result is flagged ``depth_degenerate`` whenever
    the form found has smaller depth than requested.
    """
    if depth > MAX_DEPTH:
        raise QmSpaceError(f"depth {depth} > {MAX_DEPTH} is not supported")
    if weight < 0 or weight % 2 or depth < 0 or depth > weight // 2:
        raise QmSpaceError(f"inadmissible (depth, weight) = ({depth}, {weight})")
    m = _dim_sum(depth, weight)
    if m < 1:
        raise QmSpaceError(f"space of depth {depth}, weight {weight} is zero")
    if order < m + EXTREMAL_MARGIN:
        raise QmSpaceError(f"order {order} < dim + {EXTREMAL_MARGIN} = {m + EXTREMAL_MARGIN}")
    if basis == "monomial":
        qb = monomial_basis(depth, weight, order, check=False)
    elif basis == "derivative":
        qb = derivative_basis(depth, weight, order)
    else:
        raise QmSpaceError(f"unknown basis route {basis!r}")
    if qb.pivots != list(range(m)):
        raise QmSpaceError(
            f"echelon pivots {qb.pivots} are not diagonal for depth {depth}, weight {weight}"
        )
    f = qb.elements[-1]
    poly = None
    if basis == "monomial":
        poly = {e: c for e, c in zip(qb.form_exponents, qb.combinations[-1]) if c}
        actual = max(e[0] for e in poly)
    else:
        actual = depth_of(f, weight, depth)
    return ExtremalSolution(f, weight, depth, m, actual, actual < depth, poly)
