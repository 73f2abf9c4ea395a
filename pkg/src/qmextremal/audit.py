"""Denominator-prime and positivity audits of normalized extremal forms."""

from __future__ import annotations

import datetime as _dt
from dataclasses import asdict, dataclass, field

from . import __version__
from .depth1 import QmFormDescriptor, depth1_form, f_linalg
from .qm_space import MAX_DEPTH, QmSpaceError, _dim_sum, admissible

DEFAULT_WINDOW = 50
MIN_MARGIN = 20


@dataclass
class PrimeFactorization:
    value: int
    factors: list[tuple[int, int]]

    def __str__(self):
        if not self.factors:
            return "1"
        return " * ".join(f"{p}^{e}" if e > 1 else str(p) for p, e in self.factors)

    @property
    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]


def factor(n: int) -> PrimeFactorization:
    """Trial division; inputs here are coefficient denominators of modest size."""
    if n < 1:
        raise ValueError(f"factor needs a positive integer, got {n}")
    value, out = n, []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return PrimeFactorization(value, out)


def compute_form(weight: int, depth: int, order: int, route: str | None = None) -> QmFormDescriptor:
    """Normalized extremal form of the given depth and weight.

    Depth 1 supports every route; higher depths only the linear-algebra route.
    """
    if not 0 <= depth <= MAX_DEPTH:
        raise QmSpaceError(f"depth must be in 0..{MAX_DEPTH}")
    if route is None:
        route = "ode" if depth == 1 else "linalg"
    if depth == 1 and weight >= 2:
        return depth1_form(weight, order, route)
    if route != "linalg":
        raise QmSpaceError(f"route {route!r} only exists in depth 1")
    return f_linalg(weight, order, depth)


@dataclass
class AuditReport:
    weight: int
    depth: int
    order: int
    route: str
    normalizing_index: int
    window: tuple[int, int]  # coefficient indices n audited for positivity: start <= n < stop
    denominator_primes: list[int]
    max_denominator_prime: int | None
    bound: int
    bound_kind: str  # "weight" or "six_k"
    prime_bound_pass: bool
    conjecture_bound: int
    conjecture_bound_pass: bool
    positivity_pass: bool | None  # None: not applicable (weight <= 2)
    first_nonpositive_index: int | None
    depth_degenerate: bool = False
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.prime_bound_pass and self.conjecture_bound_pass and self.positivity_pass is not False

    def to_json(self) -> dict:
        d = asdict(self)
        d["window"] = list(self.window)
        return d

    def comparable(self) -> dict:
        """Every field except the route, for route-independence checks."""
        d = self.to_json()
        d.pop("route")
        d.pop("notes")
        return d


def audit_bound(weight: int, depth: int) -> tuple[int, str]:
    if depth == 1 and weight % 6 == 4 and weight >= 10:
        return 6 * (weight // 6), "six_k"
    return weight, "weight"


def audit_form(weight: int, depth: int, order: int | None = None, route: str | None = None) -> AuditReport:
    m = _dim_sum(depth, weight)
    if not admissible(depth, weight) or m < 1:
        raise QmSpaceError(f"inadmissible (depth, weight) = ({depth}, {weight})")
    if order is None:
        order = m + DEFAULT_WINDOW
    if order < m + MIN_MARGIN:
        raise QmSpaceError(f"audit order {order} < dim + {MIN_MARGIN} = {m + MIN_MARGIN} for ({depth}, {weight})")
    f = compute_form(weight, depth, order, route)
    coeffs = f.coefficients()
    n0 = m - 1
    primes: set[int] = set()
    for c in coeffs:
        if c.denominator != 1:
            primes.update(factor(c.denominator).primes)
    plist = sorted(primes)
    bound, kind = audit_bound(weight, depth)
    positivity, first_bad = None, None
    if weight > 2:
        first_bad = next((n for n in range(n0, order) if coeffs[n] <= 0), None)
        positivity = first_bad is None
    return AuditReport(
        weight=weight,
        depth=depth,
        order=order,
        route=f.route,
        normalizing_index=n0,
        window=(n0, order),
        denominator_primes=plist,
        max_denominator_prime=plist[-1] if plist else None,
        bound=bound,
        bound_kind=kind,
        prime_bound_pass=all(p < bound for p in plist),
        conjecture_bound=weight,
        conjecture_bound_pass=all(p < weight for p in plist),
        positivity_pass=positivity,
        first_nonpositive_index=first_bad,
        depth_degenerate=f.depth_degenerate,
        notes=list(f.notes),
    )


def sweep_pairs(depths, weight_max: int) -> list[tuple[int, int]]:
    pairs = [
        (w, d)
        for w in range(0, weight_max + 1, 2)
        for d in sorted(set(depths))
        if admissible(d, w) and _dim_sum(d, w) >= 1 and not (d == 0)
    ]
    return sorted(pairs)


def audit_sweep(depths, weight_max: int, order: int | None = None, route: str | None = None,
                weights=None) -> list[AuditReport]:
    """Weight-ascending audit of every admissible (depth, weight) pair."""
    pairs = sweep_pairs(depths, weight_max)
    if weights is not None:
        allowed = set(weights)
        pairs = [p for p in pairs if p[0] in allowed]
    return [audit_form(w, d, order, route) for w, d in pairs]


def summarize(reports: list[AuditReport]) -> dict:
    return {
        "forms": len(reports),
        "prime_bound_failures": sum(not r.prime_bound_pass for r in reports),
        "conjecture_bound_failures": sum(not r.conjecture_bound_pass for r in reports),
        "positivity_failures": sum(r.positivity_pass is False for r in reports),
        "passed": sum(r.passed for r in reports),
    }


def report_document(reports: list[AuditReport]) -> dict:
    return {
        "version": __version__,
        "generated_at": _dt.datetime.now(_dt.timezone.utc).isoformat(),
        "summary": summarize(reports),
        "reports": [r.to_json() for r in reports],
    }
