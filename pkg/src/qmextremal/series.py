"""Truncated Laurent series in q^(1/2) with exact rational coefficients.

A :class:`HalfQSeries` stores the coefficient of ``q^(u/2)`` for every
half-step index ``u`` in ``base <= u < order``.  Everything at or above
``order`` is unknown, and every operation propagates that bound
conservatively: nothing ever claims knowledge of a coefficient it could not
have computed.

Two unit conventions are used in this package:

* ``HalfQSeries.order`` / ``base`` are measured in half-steps;
* the ``order`` argument of higher-level constructors (Eisenstein series,
  extremal forms, ...) counts integral powers of ``q``, so ``order=N`` means
  ``q^0 .. q^(N-1)`` are known, i.e. a half-step order of ``2N``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence, Union

Scalar = Union[int, Fraction]


class SeriesError(ValueError):
    """Raised for invalid series operations (non-invertible input, bad window, ...)."""


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot use {type(x).__name__} as an exact coefficient")


def _stride(coeffs: Sequence) -> int:
    """2 if every odd relative offset is zero (a series in whole powers of q), else 1."""
    for c in coeffs[1::2]:
        if c:
            return 1
    return 2


def _as_integers(coeffs: Sequence[Fraction]) -> tuple[list[int], int]:
    den = math.lcm(*(c.denominator for c in coeffs)) if coeffs else 1
    return [c.numerator * (den // c.denominator) for c in coeffs], den


def _convolve(a: list[int], b: list[int], n: int) -> list[int]:
    out = [0] * n
    b = b[:n]
    for i, x in enumerate(a[:n]):
        if not x:
            continue
        lim = n - i
        for j, y in enumerate(b[:lim]):
            if y:
                out[i + j] += x * y
    return out


class HalfQSeries:
    """Immutable truncated series ``sum_{base <= u < order} c_u q^(u/2)``."""

    __slots__ = ("_base", "_coeffs", "_order")

    def __init__(self, base: int, coeffs: Iterable, order: int | None = None):
        cs = [_frac(c) for c in coeffs]
        if order is None:
            order = base + len(cs)
        if order <= base:
            raise SeriesError(f"empty window: base={base}, order={order}")
        if len(cs) > order - base:
            cs = cs[: order - base]
        elif len(cs) < order - base:
            cs.extend([Fraction(0)] * (order - base - len(cs)))
        self._base = int(base)
        self._order = int(order)
        self._coeffs = tuple(cs)

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_q_coeffs(cls, coeffs: Iterable, order: int | None = None, valuation: int = 0):
        """Series in whole powers of q: ``coeffs[n]`` is the coefficient of ``q^(valuation+n)``.

        ``order`` counts powers of q (exclusive) and defaults to the length given.
        """
        cs = list(coeffs)
        if order is None:
            order = valuation + len(cs)
        spread = []
        for c in cs[: order - valuation]:
            spread.append(c)
            spread.append(0)
        return cls(2 * valuation, spread, 2 * order)

    @classmethod
    def constant(cls, c: Scalar, order: int) -> "HalfQSeries":
        """The constant ``c`` known to half-step ``order``."""
        return cls(0, [c], order)

    @classmethod
    def monomial(cls, u: int, c: Scalar = 1, order: int | None = None) -> "HalfQSeries":
        """``c q^(u/2)``, exact to half-step ``order`` (default: one term)."""
        return cls(u, [c], order if order is not None else u + 1)

    @classmethod
    def zero(cls, order: int, base: int = 0) -> "HalfQSeries":
        return cls(base, [], order)

    # -- accessors ----------------------------------------------------------

    @property
    def base(self) -> int:
        return self._base

    @property
    def order(self) -> int:
        return self._order

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return self._coeffs

    @property
    def q_order(self) -> int:
        """Number of whole powers ``q^0 .. q^(n-1)`` that lie below ``order``."""
        return (self._order + 1) // 2

    def coeff(self, u: int) -> Fraction:
        """Coefficient of ``q^(u/2)``; zero below ``base``."""
        if u >= self._order:
            raise SeriesError(
                f"coefficient not determined at this truncation (u={u}, order={self._order})"
            )
        if u < self._base:
            return Fraction(0)
        return self._coeffs[u - self._base]

    def q_coeff(self, n: int) -> Fraction:
        """Coefficient of ``q^n``."""
        return self.coeff(2 * n)

    def q_coeffs(self, start: int = 0, stop: int | None = None) -> list[Fraction]:
        """Coefficients of ``q^start .. q^(stop-1)`` (default: all known whole powers)."""
        if stop is None:
            stop = self.q_order
        return [self.q_coeff(n) for n in range(start, stop)]

    def valuation(self) -> int | None:
        """Half-step index of the first nonzero known coefficient, or None."""
        for i, c in enumerate(self._coeffs):
            if c:
                return self._base + i
        return None

    def leading(self) -> Fraction:
        v = self.valuation()
        return Fraction(0) if v is None else self.coeff(v)

    def is_zero(self) -> bool:
        return self.valuation() is None

    def is_integral_exponents(self) -> bool:
        """True iff only whole powers of q carry nonzero coefficients."""
        return all(not c for u, c in self.items() if u % 2)

    def has_integer_coeffs(self) -> bool:
        return all(c.denominator == 1 for c in self._coeffs)

    def items(self):
        return ((self._base + i, c) for i, c in enumerate(self._coeffs))

    def strip(self) -> "HalfQSeries":
        """Drop known-zero leading terms (base moves up to the valuation)."""
        v = self.valuation()
        if v is None or v == self._base:
            return self
        return HalfQSeries(v, self._coeffs[v - self._base :], self._order)

    # -- comparison ---------------------------------------------------------

    def first_discrepancy(self, other: "HalfQSeries") -> int | None:
        """First half-step index where the two series differ on the common window."""
        lo = min(self._base, other._base)
        hi = min(self._order, other._order)
        for u in range(lo, hi):
            if self.coeff(u) != other.coeff(u):
                return u
        return None

    def agrees_with(self, other: "HalfQSeries") -> bool:
        return self.first_discrepancy(other) is None

    def __eq__(self, other):
        if not isinstance(other, HalfQSeries):
            return NotImplemented
        return self.agrees_with(other)

    __hash__ = None  # equality is window-dependent

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, HalfQSeries):
            other = HalfQSeries.constant(_frac(other), self._order)
        return add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return HalfQSeries(self._base, [-c for c in self._coeffs], self._order)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, HalfQSeries):
            return mul(self, other)
        return scale(self, _frac(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, HalfQSeries):
            return mul(self, invert(other))
        return scale(self, 1 / _frac(other))

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return invert(self) ** (-n)
        result = None
        acc = self
        while n:
            if n & 1:
                result = acc if result is None else mul(result, acc)
            n >>= 1
            if n:
                acc = mul(acc, acc)
        if result is None:
            return HalfQSeries.constant(1, self._order - self._base)
        return result

    def __repr__(self):
        shown = ", ".join(f"{u}:{c}" for u, c in list(self.items())[:6] if c)
        return f"HalfQSeries(base={self._base}, order={self._order}, {{{shown}}})"

    def __str__(self):
        return format_series(self)

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "base": self._base,
            "order": self._order,
            "coeffs": [f"{c.numerator}/{c.denominator}" for c in self._coeffs],
        }

    @classmethod
    def from_json(cls, data: dict) -> "HalfQSeries":
        return cls(data["base"], [Fraction(c) for c in data["coeffs"]], data["order"])

    # method forms of the module-level operations
    def derive(self):
        return derive(self)

    def invert(self):
        return invert(self)

    def sqrt(self):
        return sqrt(self)

    def truncate(self, order: int):
        return truncate(self, order)

    def shift(self, u: int):
        return shift(self, u)

    def scale(self, r: Scalar):
        return scale(self, r)


# -- module-level operations ------------------------------------------------


def add(a: HalfQSeries, b: HalfQSeries) -> HalfQSeries:
    base = min(a.base, b.base)
    order = min(a.order, b.order)
    if base >= order:
        raise SeriesError("sum has an empty window")
    return HalfQSeries(base, [a.coeff(u) + b.coeff(u) for u in range(base, order)], order)


def mul(a: HalfQSeries, b: HalfQSeries) -> HalfQSeries:
    """Truncated Cauchy product; the relative precision is the smaller of the two."""
    base = a.base + b.base
    order = min(a.order + b.base, b.order + a.base)
    n = order - base
    ca, cb = a.coeffs[:n], b.coeffs[:n]
    step = 2 if _stride(ca) == 2 and _stride(cb) == 2 else 1
    ia, da = _as_integers(ca[::step])
    ib, db = _as_integers(cb[::step])
    m = (n + step - 1) // step
    conv = _convolve(ia, ib, m)
    den = da * db
    out = [Fraction(0)] * n
    for i, c in enumerate(conv):
        if c:
            out[i * step] = Fraction(c, den)
    return HalfQSeries(base, out, order)


def scale(a: HalfQSeries, r: Scalar) -> HalfQSeries:
    r = _frac(r)
    return HalfQSeries(a.base, [r * c for c in a.coeffs], a.order)


def shift(a: HalfQSeries, u: int) -> HalfQSeries:
    """Multiply by ``q^(u/2)`` (exact, so the order moves with the base)."""
    return HalfQSeries(a.base + u, a.coeffs, a.order + u)


def truncate(a: HalfQSeries, order: int) -> HalfQSeries:
    if order > a.order:
        raise SeriesError(f"cannot extend a series from order {a.order} to {order}")
    if order <= a.base:
        return HalfQSeries(order - 1, [], order)
    return HalfQSeries(a.base, a.coeffs[: order - a.base], order)


def coeff(a: HalfQSeries, u: int) -> Fraction:
    if not a.base <= u < a.order:
        raise SeriesError(
            f"coefficient not determined at this truncation (u={u}, window=[{a.base}, {a.order}))"
        )
    return a.coeff(u)


def derive(a: HalfQSeries) -> HalfQSeries:
    """The derivation ``q d/dq``: the term at ``q^(u/2)`` is scaled by ``u/2``."""
    return HalfQSeries(
        a.base, [c * Fraction(u, 2) for u, c in a.items()], a.order
    )


def invert(a: HalfQSeries) -> HalfQSeries:
    """Multiplicative inverse; leading zeros are skipped, an all-zero window is rejected."""
    s = a.strip()
    v = s.valuation()
    if v is None:
        raise SeriesError("non-invertible series")
    n = s.order - v
    step = _stride(s.coeffs)
    r = s.coeffs[::step]
    m = len(r)
    inv0 = 1 / r[0]
    b = [inv0]
    for j in range(1, m):
        acc = Fraction(0)
        for i in range(1, j + 1):
            if r[i]:
                acc += r[i] * b[j - i]
        b.append(-acc * inv0)
    out = [Fraction(0)] * n
    for j, c in enumerate(b):
        out[j * step] = c
    return HalfQSeries(-v, out, -v + n)


def _rational_sqrt(c: Fraction) -> Fraction:
    if c <= 0:
        raise SeriesError(f"leading coefficient {c} is not positive")
    p, q = math.isqrt(c.numerator), math.isqrt(c.denominator)
    if p * p != c.numerator or q * q != c.denominator:
        raise SeriesError(f"leading coefficient {c} is not the square of a rational")
    return Fraction(p, q)


def sqrt(a: HalfQSeries) -> HalfQSeries:
    """Square root whose leading coefficient is the positive rational root."""
    s = a.strip()
    v = s.valuation()
    if v is None:
        raise SeriesError("square root of a zero window is undetermined")
    if v % 2:
        raise SeriesError(f"odd leading exponent u={v} has no square root in q^(1/2)-series")
    n = s.order - v
    step = _stride(s.coeffs)
    r = s.coeffs[::step]
    s0 = _rational_sqrt(r[0])
    half_inv = 1 / (2 * s0)
    root = [s0]
    for j in range(1, len(r)):
        acc = r[j]
        for i in range(1, j):
            acc -= root[i] * root[j - i]
        root.append(acc * half_inv)
    out = [Fraction(0)] * n
    for j, c in enumerate(root):
        out[j * step] = c
    return HalfQSeries(v // 2, out, v // 2 + n)


def format_series(a: HalfQSeries, terms: int = 8) -> str:
    """Human-readable rendering, e.g. ``q + 18q^2 + 84q^3 + O(q^4)``."""

    def power(u: int) -> str:
        if u == 0:
            return ""
        if u % 2:
            return f"q^({u}/2)"
        return "q" if u == 2 else f"q^{u // 2}"

    parts = []
    for u, c in a.items():
        if not c:
            continue
        if len(parts) == terms:
            break
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        p = power(u)
        if p and mag == 1:
            body = p
        else:
            body = f"({mag})" if mag.denominator != 1 and p else str(mag)
            body += p
        parts.append((sign, body))
    o = power(a.order) or "1"
    if not parts:
        return f"O({o})"
    text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        text += f" {sign} {body}"
    return f"{text} + O({o})"
