"""E2, E4, E6 and the discriminant as exact truncated q-expansions."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .series import HalfQSeries, SeriesError, derive, sqrt, invert, truncate
from .verdict import Verdict, compare

EISENSTEIN_SCALE = {2: -24, 4: 240, 6: -504}


def sigma(j: int, n: int) -> int:
    """Divisor power sum ``sum_{d | n} d^j``."""
    if n <= 0:
        raise ValueError(f"sigma needs n >= 1, got {n}")
    if j < 0:
        raise ValueError(f"sigma needs j >= 0, got {j}")
    total = 0
    d = 1
    while d * d <= n:
        if n % d == 0:
            total += d**j
            e = n // d
            if e != d:
                total += e**j
        d += 1
    return total


@lru_cache(maxsize=None)
def sigma_table(j: int, n_max: int) -> tuple[int, ...]:
    """``(0, sigma_j(1), ..., sigma_j(n_max))`` via a divisor sieve."""
    table = [0] * (n_max + 1)
    for d in range(1, n_max + 1):
        p = d**j
        for m in range(d, n_max + 1, d):
            table[m] += p
    return tuple(table)


def eisenstein(weight: int, order: int) -> HalfQSeries:
    """Normalized Eisenstein series of weight 2, 4 or 6 to ``q^(order-1)``."""
    if weight not in EISENSTEIN_SCALE:
        raise ValueError(f"unsupported Eisenstein weight {weight}; expected 2, 4 or 6")
    if order < 1:
        raise ValueError("order must be at least 1")
    c = EISENSTEIN_SCALE[weight]
    sig = sigma_table(weight - 1, order)
    return HalfQSeries.from_q_coeffs([1] + [c * sig[n] for n in range(1, order)], order)


def delta_product(order: int) -> HalfQSeries:
    """``q prod_{n>=1} (1-q^n)^24`` truncated at ``q^(order-1)``."""
    n = order - 1
    prod = [1] + [0] * (n - 1)
    for k in range(1, n):
        for i in range(n - 1, k - 1, -1):
            prod[i] -= prod[i - k]
    body = HalfQSeries.from_q_coeffs(prod, n) ** 24
    return HalfQSeries.from_q_coeffs(body.q_coeffs(), order, valuation=1)


def delta_polynomial(order: int) -> HalfQSeries:
    """``(E4^3 - E6^2) / 1728``."""
    e4, e6 = eisenstein(4, order), eisenstein(6, order)
    return ((e4**3 - e6 * e6) / 1728).strip()


def delta(order: int, route: str = "polynomial") -> HalfQSeries:
    if order < 2:
        raise ValueError("delta needs order >= 2")
    if route == "product":
        return delta_product(order)
    if route == "polynomial":
        return delta_polynomial(order)
    raise ValueError(f"unknown delta route {route!r}")


@dataclass(frozen=True)
class GeneratorCache:
    """The generators and the derived roots/inverses used throughout, at one order."""

    order: int
    e2: HalfQSeries
    e4: HalfQSeries
    e6: HalfQSeries
    delta: HalfQSeries
    delta_sqrt: HalfQSeries
    delta_inv_sqrt: HalfQSeries
    e4_inv: HalfQSeries
    e4_sqrt: HalfQSeries

    def truncated(self, order: int) -> "GeneratorCache":
        if order > self.order:
            raise SeriesError(f"cache at order {self.order} cannot serve order {order}")
        # roots and inverses carry less precision than the order; keep the same loss
        drop = 2 * (self.order - order)
        return GeneratorCache(order, *(truncate(getattr(self, f), getattr(self, f).order - drop) for f in _FIELDS))


_FIELDS = ("e2", "e4", "e6", "delta", "delta_sqrt", "delta_inv_sqrt", "e4_inv", "e4_sqrt")
_largest: GeneratorCache | None = None
_views: dict[int, GeneratorCache] = {}


def _build(order: int) -> GeneratorCache:
    e2, e4, e6 = (eisenstein(w, order) for w in (2, 4, 6))
    d = delta_polynomial(order)
    ds = sqrt(d)
    return GeneratorCache(
        order=order,
        e2=e2,
        e4=e4,
        e6=e6,
        delta=d,
        delta_sqrt=ds,
        delta_inv_sqrt=invert(ds),
        e4_inv=invert(e4),
        e4_sqrt=sqrt(e4),
    )


def generators(order: int) -> GeneratorCache:
    """Memoized generators.  A request above the largest cached order rebuilds and
    replaces it; smaller requests are truncated views of the largest cache, so all
    callers see one consistent set of coefficients."""
    global _largest
    if order < 2:
        raise ValueError("generator cache needs order >= 2")
    if _largest is None or order > _largest.order:
        _largest = _build(order)
        _views.clear()
        _views[order] = _largest
    if order not in _views:
        _views[order] = _largest.truncated(order)
    return _views[order]


def verify_ramanujan(order: int, gens: GeneratorCache | None = None) -> Verdict:
    """Check D(E2), D(E4), D(E6) against Ramanujan's system and D(Delta) = E2 Delta."""
    if gens is None:
        gens = generators(max(order, 2))
    e2, e4, e6, d = gens.e2, gens.e4, gens.e6, gens.delta
    checks = [
        ("D(E2) = (E2^2 - E4)/12", derive(e2), (e2 * e2 - e4) / 12),
        ("D(E4) = (E2 E4 - E6)/3", derive(e4), (e2 * e4 - e6) / 3),
        ("D(E6) = (E2 E6 - E4^2)/2", derive(e6), (e2 * e6 - e4 * e4) / 2),
        ("D(Delta) = E2 Delta", derive(d), e2 * d),
    ]
    for name, lhs, rhs in checks:
        v = compare("ramanujan", lhs, rhs, order=order, detail=name)
        if not v.passed:
            return v
    return Verdict("ramanujan", True, order=order)


def remark42_identity(order: int) -> Verdict:
    """-(1/12)(E4 - E6^2/E4^2) = -144 Delta / E4^2."""
    g = generators(order)
    inv2 = g.e4_inv * g.e4_inv
    lhs = (g.e4 - g.e6 * g.e6 * inv2) * Fraction(-1, 12)
    rhs = g.delta * inv2 * -144
    return compare("remark_4_2", lhs, rhs, order=order)
