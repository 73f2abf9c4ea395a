"""Extremal quasimodular forms of depth 1 by three constructive routes.

Weights split by residue mod 6.  For ``w = 6k`` and ``w = 6k+2`` the forms are
built from the two-term recursion in E6 and Delta, from the closed polynomial
formula in ``E6 / Delta^(1/2)``, or by solving the weight-0 second-order ODE for
``f Delta^(-k/2)`` (resp. ``f Delta^(-k/2) E4^(-1/2)``) coefficient by
coefficient.  Weights ``6k+4`` are E4 times the weight-``6k`` form.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache

from .eisenstein import GeneratorCache, generators, sigma_table
from .qm_space import EXTREMAL_MARGIN, _dim_sum, extremal_solve
from .series import HalfQSeries, SeriesError, derive, truncate
from .verdict import Verdict, all_pass, compare

ROUTES = ("recursion", "ode", "linalg", "theorem31")
SLACK = 2


class ExtremalError(ValueError):
    pass


def mu(k: int) -> Fraction:
    """Multiplier of the weight-6k recursion; -1 at k = 0 by convention."""
    if k < 0:
        raise ValueError(f"mu needs k >= 0, got {k}")
    if k == 0:
        return Fraction(-1)
    return Fraction(12 * (6 * k + 1) * (6 * k + 5), k * (k + 1))


def mu_star(k: int) -> Fraction:
    """Multiplier of the weight-(6k+2) recursion; -1 at k = 0 by convention."""
    if k < 0:
        raise ValueError(f"mu_star needs k >= 0, got {k}")
    if k == 0:
        return Fraction(-1)
    return Fraction(12 * (6 * k - 1) * (6 * k + 7), k * (k + 1))


def residue_class(weight: int) -> tuple[int, int]:
    """``(r, k)`` with ``weight = 6k + r``, r in {0, 2, 4}."""
    if weight < 0 or weight % 2:
        raise ExtremalError(f"weight must be even and non-negative, got {weight}")
    return weight % 6, weight // 6


# -- polynomial sequences ----------------------------------------------------


@dataclass
class PolySeq:
    """P_k, Q_k (kind P/Q) or P*_k, Q*_k (Pstar/Qstar); rows[k][j] is the x^j coefficient."""

    kind: str
    rows: list[list[Fraction]]

    @classmethod
    def build(cls, kind: str, n: int) -> "PolySeq":
        mult = {"P": mu, "Q": mu, "Pstar": mu_star, "Qstar": mu_star}[kind]
        if kind.startswith("P"):
            rows = [[Fraction(1)], [Fraction(0), Fraction(1)]]
        else:
            rows = [[Fraction(0)], [Fraction(1)]]
        for k in range(1, n):
            shifted = [Fraction(0)] + rows[k]
            m = mult(k)
            prev = rows[k - 1] + [Fraction(0)] * (len(shifted) - len(rows[k - 1]))
            rows.append([a + m * b for a, b in zip(shifted, prev)])
        return cls(kind, [_trim(r) for r in rows[: n + 1]])

    def degree(self, k: int) -> int:
        r = self.rows[k]
        return max((j for j, c in enumerate(r) if c), default=-1)

    def evaluate(self, k: int, x: HalfQSeries) -> HalfQSeries:
        """Horner evaluation of row k at a series."""
        r = self.rows[k]
        acc = HalfQSeries.constant(r[-1], x.order - x.base)
        for c in reversed(r[:-1]):
            acc = acc * x + c
        return acc


def _trim(r: list[Fraction]) -> list[Fraction]:
    while len(r) > 1 and not r[-1]:
        r = r[:-1]
    return r


# -- form descriptors --------------------------------------------------------


@dataclass
class QmFormDescriptor:
    weight: int
    depth: int
    order: int  # whole powers of q known: q^0 .. q^(order-1)
    route: str
    series: HalfQSeries
    normalized: bool
    depth_degenerate: bool = False
    notes: list[str] = field(default_factory=list)

    @property
    def dim(self) -> int:
        return _dim_sum(self.depth, self.weight)

    @property
    def normalizing_index(self) -> int:
        return self.dim - 1

    def coefficients(self) -> list[Fraction]:
        return self.series.q_coeffs(0, self.order)


def _finish(s: HalfQSeries, order: int) -> HalfQSeries:
    if s.order < 2 * order:
        raise SeriesError(f"internal precision {s.order} fell short of {2 * order}")
    out = truncate(s, 2 * order)
    if out.base < 0 or not out.is_integral_exponents():
        raise ExtremalError("result is not supported on whole powers of q")
    # re-base at zero so every route yields the same window
    return HalfQSeries(0, [out.coeff(u) for u in range(0, 2 * order)], 2 * order)


def _gens(order: int) -> GeneratorCache:
    return generators(order + SLACK)


def f6_base(g: GeneratorCache) -> HalfQSeries:
    """D(E4)/240."""
    return derive(g.e4) / 240


def f8_base(g: GeneratorCache) -> HalfQSeries:
    """-D(E6)/504."""
    return derive(g.e6) / -504


def f_recursive(weight: int, order: int) -> QmFormDescriptor:
    """Unnormalized form from the two-term recursion in E6 and Delta."""
    r, k = residue_class(weight)
    if r == 4:
        raise ExtremalError(f"weight {weight} is 4 mod 6; the recursion covers 0 and 2 mod 6")
    g = _gens(order)
    if r == 0:
        seq = [HalfQSeries.constant(1, 2 * g.order), f6_base(g)]
        mult = mu
    else:
        seq = [g.e2, f8_base(g)]
        mult = mu_star
    for j in range(0, k - 1):
        seq.append(g.e6 * seq[j + 1] + g.delta * seq[j] * mult(j))
    return QmFormDescriptor(weight, 1, order, "recursion", _finish(seq[k], order), False)


def f_theorem31(weight: int, order: int) -> QmFormDescriptor:
    """Unnormalized form from the closed formula in ``x = E6 / Delta^(1/2)``."""
    r, k = residue_class(weight)
    if r == 4:
        raise ExtremalError(f"weight {weight} is 4 mod 6; the closed formula covers 0 and 2 mod 6")
    if k < 1:
        raise ExtremalError("the closed formula needs k >= 1")
    g = _gens(order)
    x = g.e6 * g.delta_inv_sqrt
    kinds = ("P", "Q") if r == 0 else ("Pstar", "Qstar")
    P, Q = (PolySeq.build(kd, k) for kd in kinds)
    if r == 0:
        lead, tail = f6_base(g), None
    else:
        lead, tail = f8_base(g), g.e2
    first = (g.delta_sqrt ** (k - 1)) * P.evaluate(k - 1, x) * lead
    second = (g.delta_sqrt**k) * Q.evaluate(k - 1, x)
    if tail is not None:
        second = second * tail
    s = first - second
    return QmFormDescriptor(weight, 1, order, "theorem31", _finish(s, order), False)


# -- the ODE route -----------------------------------------------------------


@lru_cache(maxsize=16)
def ode_auxiliary(n_terms: int) -> dict[str, tuple[Fraction, ...]]:
    """The coefficient recursions for 1/E4, E6/E4 and (E6/E4)^2 (b_n, c_n, d_n)."""
    s3 = sigma_table(3, max(n_terms, 1))
    s5 = sigma_table(5, max(n_terms, 1))
    b = [Fraction(1)]
    c = [Fraction(1)]
    for n in range(1, n_terms):
        b.append(-sum(240 * s3[m] * b[n - m] for m in range(1, n + 1)))
        c.append(-504 * s5[n] - sum(240 * s3[m] * c[n - m] for m in range(1, n + 1)))
    # inner sum over 1 <= m <= n-1: the m = n term is already in 2 c_n
    d = [Fraction(1)] + [2 * c[n] + sum(c[m] * c[n - m] for m in range(1, n)) for n in range(1, n_terms)]
    return {"b": tuple(b), "c": tuple(c), "d": tuple(d)}


def ode_a_coeffs(k: int, n_terms: int, residue: int = 2) -> list[Fraction]:
    """Coefficients a_n(k) of the potential in ``D^2 g = A g``.

    residue 2: ``A = (k^2/4 - 1/12) E4 + (1/12)(E6/E4)^2``; residue 0: ``A = (k^2/4) E4``.
    """
    s3 = sigma_table(3, max(n_terms, 1))
    kk = Fraction(k * k, 4)
    if residue == 0:
        return [kk] + [240 * s3[n] * kk for n in range(1, n_terms)]
    d = ode_auxiliary(n_terms)["d"]
    lam = kk - Fraction(1, 12)
    return [kk] + [240 * s3[n] * lam + d[n] / 12 for n in range(1, n_terms)]


def alpha_coeffs(k: int, n_terms: int, residue: int = 2) -> list[Fraction]:
    """Normalized solution coefficients: alpha_0 = 1, n(n+k) alpha_n = sum a_m alpha_{n-m}."""
    a = ode_a_coeffs(k, n_terms, residue)
    alpha = [Fraction(1)]
    for n in range(1, n_terms):
        den = n * (n + k)
        if den == 0:
            raise ExtremalError(f"recursion denominator n(n+k) vanishes at n={n}, k={k}")
        alpha.append(sum(a[m] * alpha[n - m] for m in range(1, n + 1)) / den)
    return alpha


def weight_zero_solution(k: int, order: int, residue: int = 2) -> HalfQSeries:
    """``q^(k/2) sum alpha_n(k) q^n`` to half-step ``order``."""
    n_terms = max((order - k + 1) // 2, 1)
    alpha = alpha_coeffs(k, n_terms, residue)
    spread = []
    for c in alpha:
        spread += [c, 0]
    return HalfQSeries(k, spread, order)


def f_ode(weight: int, order: int) -> QmFormDescriptor:
    """Normalized form obtained by solving the weight-0 ODE and undoing the twist."""
    r, k = residue_class(weight)
    if r == 4:
        raise ExtremalError("use f_class4 for weights 4 mod 6")
    if k < 0:
        raise ExtremalError("k must be non-negative")
    g = _gens(order)
    phi = weight_zero_solution(k, 2 * g.order, residue=r)
    s = phi * (g.delta_sqrt**k)
    if r == 2:
        s = s * g.e4_sqrt
    desc = QmFormDescriptor(weight, 1, order, "ode", _finish(s, order), True)
    if weight == 0:
        desc.depth_degenerate = True
        desc.notes.append("weight 0: the solution is the constant 1 (depth 0)")
    return desc


def f_linalg(weight: int, order: int, depth: int = 1) -> QmFormDescriptor:
    # the solver insists on a margin past the normalizing index; solve there, then cut
    sol = extremal_solve(depth, weight, max(order, _dim_sum(depth, weight) + EXTREMAL_MARGIN))
    d = QmFormDescriptor(weight, depth, order, "linalg", _finish(sol.series, order), True,
                         sol.depth_degenerate)
    if sol.depth_degenerate:
        d.notes.append(f"depth-degenerate: actual depth {sol.actual_depth}")
    return d


def normalize(f: QmFormDescriptor) -> QmFormDescriptor:
    """Divide by the coefficient at the normalizing index ``q^(m-1)``."""
    idx = f.normalizing_index
    s = f.series
    for n in range(idx):
        if s.q_coeff(n):
            raise ExtremalError(f"not extremal at expected index: coefficient of q^{n} is nonzero")
    c = s.q_coeff(idx)
    if not c:
        raise ExtremalError(f"not extremal at expected index: coefficient of q^{idx} vanishes")
    if c == 1 and f.normalized:
        return f
    return replace(f, series=s / c, normalized=True, notes=f.notes + [f"normalized by 1/({c})"])


def f_class4(weight: int, order: int, route: str = "ode") -> QmFormDescriptor:
    """Weight 6k+4: E4 times the normalized weight-6k form."""
    r, k = residue_class(weight)
    if r != 4:
        raise ExtremalError(f"weight {weight} is not 4 mod 6")
    base = depth1_form(6 * k, order, route) if k >= 1 else f_ode(0, order)
    g = _gens(order)
    s = _finish(g.e4 * base.series, order)
    desc = QmFormDescriptor(weight, 1, order, route, s, True)
    if k == 0:
        desc.depth_degenerate = True
        desc.notes.append("weight 4: the solution is E4 (depth 0)")
    return desc


def depth1_form(weight: int, order: int, route: str = "ode") -> QmFormDescriptor:
    """Normalized depth-1 extremal form by the requested route."""
    r, _ = residue_class(weight)
    if route == "linalg":
        return f_linalg(weight, order)
    if r == 4:
        return f_class4(weight, order, route)
    if route == "ode":
        return f_ode(weight, order)
    if route == "recursion":
        return normalize(f_recursive(weight, order))
    if route == "theorem31":
        return normalize(f_theorem31(weight, order))
    raise ExtremalError(f"unknown route {route!r}; expected one of {ROUTES}")


# -- verifiers ---------------------------------------------------------------


def ode_residual(f: HalfQSeries, weight: int, g: GeneratorCache) -> HalfQSeries:
    """Left-hand side of the depth-1 ODE for the residue class of ``weight``."""
    w = Fraction(weight)
    r = weight % 6
    df = derive(f)
    d2f = derive(df)
    de2 = derive(g.e2)
    first = g.e2 * (w / 6)
    zeroth = de2 * (w * (w - 1) / 12)
    if r == 2:
        e6_e4 = g.e6 * g.e4_inv
        first = first - e6_e4 / 3
        zeroth = zeroth - derive(g.e6) * g.e4_inv * ((w - 1) / 18)
    elif r == 4:
        e6_e4 = g.e6 * g.e4_inv
        first = first - e6_e4 * Fraction(2, 3)
        zeroth = (
            zeroth
            - derive(g.e6) * g.e4_inv * ((w - 1) / 9)
            - (g.e4 - e6_e4 * e6_e4) * Fraction(2, 9)
        )
    return d2f - first * df + zeroth * f


def verify_ode(f: QmFormDescriptor) -> Verdict:
    """Check the class-appropriate second-order ODE exactly on the truncation window."""
    name = {0: "ode_a", 2: "ode_b", 4: "ode_c"}[f.weight % 6]
    if f.order < f.normalizing_index + 10:
        raise ExtremalError("verify_ode needs order >= leading index + 10")
    g = generators(f.order)
    res = ode_residual(f.series, f.weight, g)
    zero = HalfQSeries.zero(res.order, res.base)
    v = compare(name, res, zero, order=f.order, detail=f"w={f.weight}")
    return v


def check_prop41b(phi: HalfQSeries, k: int, g: GeneratorCache) -> Verdict:
    a = g.e4 * (Fraction(k * k, 4) - Fraction(1, 12)) + (g.e6 * g.e4_inv) ** 2 / 12
    lhs = derive(derive(phi))
    return compare("prop41b", lhs, a * phi, k=k)


def check_prop41a(h: HalfQSeries, k: int, g: GeneratorCache) -> Verdict:
    lhs = derive(derive(h))
    return compare("prop41a", lhs, g.e4 * h * Fraction(k * k, 4), k=k)


def verify_prop41(k: int, order: int, route: str = "recursion") -> Verdict:
    """Both twisted weight-0 ODEs for the depth-1 forms of weights 6k and 6k+2.

    The forms come from ``route`` (not from the ODE route, which would make the
    check circular), and the rewritten potential with -144 Delta/E4^2 is checked
    alongside.
    """
    if k < 1:
        raise ExtremalError("verify_prop41 needs k >= 1")
    g = generators(order + SLACK)
    d_inv = g.delta_inv_sqrt**k
    f0 = depth1_form(6 * k, order, route).series
    f2 = depth1_form(6 * k + 2, order, route).series
    h = f0 * d_inv
    phi = f2 * d_inv * sqrt_inv_e4(g)
    kk = Fraction(k * k, 4)
    pot_a = g.e4 * kk - g.delta * g.e4_inv * g.e4_inv * 144
    pot_b = g.e4 * (kk - Fraction(1, 12)) + (g.e6 * g.e4_inv) ** 2 / 12
    results = [
        check_prop41a(h, k, g),
        check_prop41b(phi, k, g),
        compare("remark_4_2_rewrite", pot_a, pot_b, k=k),
    ]
    return all_pass("prop41", results, k=k, order=order)


def sqrt_inv_e4(g: GeneratorCache) -> HalfQSeries:
    return g.e4_sqrt.invert()
