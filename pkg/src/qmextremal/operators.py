"""Operator calculus on k-indexed families of q^(1/2)-series.

A family assigns to each integer k a series whose lowest exponent is
``q^(k/2)``; the formal factor Y with ``D(Y) = (k/2) Y`` is realized by that
offset, so ``derive`` sees it automatically.  Operators are sums of
compositions of four primitives: multiplication by a (possibly k-dependent)
series, the derivation D, the shift ``psi^j : k -> k + j`` and a k-dependent
scalar.  Compositions apply right to left, and a k-dependent coefficient uses
the value of k current where it sits, i.e. after every shift to its right.

Identities with coefficients in Q(k) are checked at sampled integers k.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence, Union

from .depth1 import ExtremalError, alpha_coeffs, depth1_form, mu, mu_star
from .eisenstein import GeneratorCache, generators
from .linalg import nullspace
from .series import HalfQSeries, derive
from .verdict import Verdict, compare

SLACK = 3
KFun = Callable[[int], HalfQSeries]


class DomainError(ExtremalError):
    pass


class KFamily:
    """A deterministic map k -> series on the integer interval ``[lo, hi]`` (hi may be None)."""

    def __init__(self, generator: KFun, lo: int = 0, hi: int | None = None, name: str = "family"):
        self._gen = generator
        self.lo, self.hi = lo, hi
        self.name = name
        self._cache: dict[int, HalfQSeries] = {}

    def contains(self, k: int) -> bool:
        return k >= self.lo and (self.hi is None or k <= self.hi)

    def __call__(self, k: int) -> HalfQSeries:
        if not self.contains(k):
            raise DomainError(f"{self.name}: k={k} outside domain [{self.lo}, {self.hi}]")
        if k not in self._cache:
            self._cache[k] = self._gen(k)
        return self._cache[k]


# -- primitives ----------------------------------------------------------------


@dataclass(frozen=True)
class Mul:
    series: KFun  # k -> multiplier
    label: str = "g"


@dataclass(frozen=True)
class Deriv:
    pass


@dataclass(frozen=True)
class Shift:
    j: int


@dataclass(frozen=True)
class Scalar:
    value: Callable[[int], Fraction]
    label: str = "c"


Primitive = Union[Mul, Deriv, Shift, Scalar]


class OperatorExpr:
    """Finite sum of compositions of primitives (each term listed left to right)."""

    def __init__(self, terms: Sequence[tuple[Primitive, ...]]):
        self.terms = [tuple(t) for t in terms]

    @classmethod
    def of(cls, *prims: Primitive) -> "OperatorExpr":
        return cls([tuple(prims)])

    def __add__(self, other: "OperatorExpr") -> "OperatorExpr":
        return OperatorExpr(self.terms + other.terms)

    def __neg__(self) -> "OperatorExpr":
        minus = Scalar(lambda k: Fraction(-1), "-1")
        return OperatorExpr([(minus,) + t for t in self.terms])

    def __sub__(self, other: "OperatorExpr") -> "OperatorExpr":
        return self + (-other)

    def __matmul__(self, other: "OperatorExpr") -> "OperatorExpr":
        return OperatorExpr([a + b for a in self.terms for b in other.terms])

    def scaled(self, value: Callable[[int], Fraction] | Fraction | int, label: str = "c") -> "OperatorExpr":
        fn = value if callable(value) else (lambda k, v=Fraction(value): v)
        return OperatorExpr([(Scalar(fn, label),) + t for t in self.terms])

    def at(self, f: KFamily, k: int) -> HalfQSeries:
        total = None
        for t in self.terms:
            v = _eval_term(t, f, k)
            total = v if total is None else total + v
        if total is None:
            raise ValueError("empty operator")
        return total

    def apply(self, f: KFamily) -> KFamily:
        shifts = [sum(p.j for p in t if isinstance(p, Shift)) for t in self.terms]
        lo = f.lo - min(0, min(shifts)) if shifts else f.lo
        hi = None if f.hi is None else f.hi - max(0, max(shifts))
        return KFamily(lambda k: self.at(f, k), lo, hi, name=f"op({f.name})")


def _eval_term(term: tuple[Primitive, ...], f: KFamily, k: int) -> HalfQSeries:
    if not term:
        return f(k)
    p, rest = term[0], term[1:]
    if isinstance(p, Shift):
        return _eval_term(rest, f, k + p.j)
    inner = _eval_term(rest, f, k)
    if isinstance(p, Deriv):
        return derive(inner)
    if isinstance(p, Mul):
        return p.series(k) * inner
    return inner * p.value(k)


IDENTITY = OperatorExpr([()])
D = OperatorExpr.of(Deriv())


def psi(j: int = 1) -> OperatorExpr:
    return OperatorExpr.of(Shift(j))


def mul_by(s: HalfQSeries | KFun, label: str = "g") -> OperatorExpr:
    fn = s if callable(s) else (lambda k, s=s: s)
    return OperatorExpr.of(Mul(fn, label))


def scalar(fn: Callable[[int], Fraction], label: str = "c") -> OperatorExpr:
    return OperatorExpr.of(Scalar(fn, label))


# -- the operators of the depth-1 argument ---------------------------------------


class OperatorLab:
    """Operators and families built over one generator cache."""

    def __init__(self, order: int):
        self.order = order
        self.g: GeneratorCache = generators(order + SLACK)
        g = self.g
        self.e6_over_rd = g.e6 * g.delta_inv_sqrt
        self.delta_over_e4sq = g.delta * g.e4_inv * g.e4_inv

    # operators -------------------------------------------------------------

    def script_D(self, k_offset: int = 0) -> OperatorExpr:
        """D^2 - (k^2/4) E4 + 144 Delta/E4^2."""
        g = self.g
        return (
            D @ D
            - scalar(lambda k: Fraction((k + k_offset) ** 2, 4), "k^2/4") @ mul_by(g.e4, "E4")
            + mul_by(self.delta_over_e4sq * 144, "144 Delta/E4^2")
        )

    def class0_D(self) -> OperatorExpr:
        """D^2 - (k^2/4) E4."""
        return D @ D - scalar(lambda k: Fraction(k * k, 4), "k^2/4") @ mul_by(self.g.e4, "E4")

    def script_F(self, uncorrected: bool = False) -> OperatorExpr:
        """Delta^(-1/2) (12 E4 D + E2 E4 + (6k+5) E6) psi; ``uncorrected`` uses 12 E2 D instead."""
        g = self.g
        lead = g.e2 if uncorrected else g.e4
        inner = (
            mul_by(lead * 12, "12E2" if uncorrected else "12E4") @ D
            + mul_by(g.e2 * g.e4, "E2E4")
            + scalar(lambda k: Fraction(6 * k + 5), "6k+5") @ mul_by(g.e6, "E6")
        )
        return mul_by(g.delta_inv_sqrt, "Delta^-1/2") @ inner @ psi(1)

    def script_Psi(self, mu_fn: Callable[[int], Fraction]) -> OperatorExpr:
        """psi^2 + mu(k) (E6 Delta^(-1/2) psi - 1)."""
        return psi(2) + (mul_by(self.e6_over_rd, "E6/Delta^1/2") @ psi(1) - IDENTITY).scaled(mu_fn, "mu")

    # families --------------------------------------------------------------

    def phi(self, k: int) -> HalfQSeries:
        return phi(k, self.order)

    def phi_family(self) -> KFamily:
        return KFamily(self.phi, 0, None, "phi")

    def class0_family(self) -> KFamily:
        return KFamily(lambda k: phi(k, self.order, residue=0), 0, None, "f6k/Delta^(k/2)")

    def random_family(self, seed: int) -> KFamily:
        return random_family(seed, self.order)


def phi(k: int, order: int, residue: int = 2) -> HalfQSeries:
    """``q^(k/2) sum_{n < order} alpha_n(k) q^n``: the normalized weight-0 solution.

    residue 2 gives ``f_{1,6k+2} Delta^(-k/2) E4^(-1/2)``; residue 0 gives
    ``f_{1,6k} Delta^(-k/2)``.
    """
    if k < 0:
        raise ExtremalError("phi needs k >= 0")
    alpha = alpha_coeffs(k, order, residue)
    spread = []
    for c in alpha:
        spread += [c, 0]
    return HalfQSeries(k, spread, k + 2 * order)


def random_family(seed: int, order: int, lo: int = 0, hi: int | None = None) -> KFamily:
    """Integer coefficients in [-9, 9] at every half-step, lowest term q^(k/2)."""

    def gen(k: int) -> HalfQSeries:
        rng = random.Random(f"{seed}:{k}")
        cs = [rng.randint(-9, 9) for _ in range(2 * order)]
        cs[0] = rng.choice([c for c in range(-9, 10) if c])
        return HalfQSeries(k, cs, k + 2 * order)

    return KFamily(gen, lo, hi, f"random[{seed}]")


def apply_psi(f: KFamily, j: int) -> KFamily:
    lo = f.lo - j
    hi = None if f.hi is None else f.hi - j
    return KFamily(lambda k: f(k + j), lo, hi, f"psi^{j}({f.name})")


_labs: dict[int, OperatorLab] = {}


def lab(order: int) -> OperatorLab:
    if order not in _labs:
        _labs[order] = OperatorLab(order)
    return _labs[order]


def apply_Psi(mu_val: Callable[[int], Fraction], f: KFamily, k: int, order: int) -> HalfQSeries:
    return lab(order).script_Psi(mu_val).at(f, k)


def apply_D_op(f: KFamily, k: int, order: int) -> HalfQSeries:
    return lab(order).script_D().at(f, k)


def apply_F_op(f: KFamily, k: int, order: int) -> HalfQSeries:
    return lab(order).script_F().at(f, k)


def _zero_like(s: HalfQSeries) -> HalfQSeries:
    return HalfQSeries.zero(s.order, s.base)


DEFAULT_SEEDS = (11, 23, 37)


def _families(L: OperatorLab, seeds: Sequence[int]):
    yield L.phi_family(), None
    for s in seeds:
        yield L.random_family(s), s


# -- verifiers -------------------------------------------------------------------


def verify_lemma_3_6(k: int, order: int) -> list[Verdict]:
    """beta_0 = 0 and beta_1 = 1 - mu mu*_{k+1} for several mu; beta_1 vanishes only at 1/mu*_{k+1}."""
    L = lab(order)
    fam = L.phi_family()
    target = 1 / mu_star(k + 1)
    out = []
    for label, m in (("mu=1/mu*_{k+1}", target), ("mu=1", Fraction(1)), ("mu=7/3", Fraction(7, 3))):
        s = L.script_Psi(lambda kk, m=m: m).at(fam, k)
        b0, b1 = s.coeff(k), s.coeff(k + 2)
        expected = 1 - m * mu_star(k + 1)
        ok = b0 == 0 and b1 == expected and ((b1 == 0) == (m == target))
        out.append(Verdict("lemma_3_6", ok, k=k, order=order,
                           detail=f"{label}: beta_0={b0}, beta_1={b1}, expected {expected}"))
    return out


def verify_lemma_3_5(k: int, mu_fn: Callable[[int], Fraction], order: int,
                     seeds: Sequence[int] = DEFAULT_SEEDS, label: str = "", perturb: bool = False) -> list[Verdict]:
    """psi^2 D psi^-2 Psi(mu) - Psi(mu) D = mu(k) E4 ((k+1) - F/12) on phi and random families."""
    L = lab(order)
    Dop, Pm = L.script_D(), L.script_Psi(mu_fn)
    lhs = psi(2) @ Dop @ psi(-2) @ Pm - Pm @ Dop
    rhs = (mul_by(L.g.e4, "E4") @ (IDENTITY.scaled(lambda kk: Fraction(kk + 1)) - L.script_F().scaled(Fraction(1, 12)))).scaled(mu_fn, "mu")
    if perturb:
        rhs = rhs + mul_by(L.g.e4, "E4").scaled(Fraction(1, 1000))
    out = []
    for fam, seed in _families(L, seeds):
        out.append(compare("lemma_3_5", lhs.at(fam, k), rhs.at(fam, k), k=k, order=order, seed=seed,
                           detail=f"{label} on {fam.name}".strip()))
    return out


def verify_lemma_3_4(k: int, order: int, seeds: Sequence[int] = DEFAULT_SEEDS, uncorrected: bool = False) -> list[Verdict]:
    """D F - F D = -4 Delta^(-1/2) (E2 E4 + 2 E6) psi D on phi and random families."""
    L = lab(order)
    Dop, F = L.script_D(), L.script_F(uncorrected=uncorrected)
    g = L.g
    lhs = Dop @ F - F @ Dop
    rhs = mul_by(g.delta_inv_sqrt * (g.e2 * g.e4 + g.e6 * 2) * -4, "-4(E2E4+2E6)/Delta^1/2") @ psi(1) @ Dop
    name = "lemma_3_4_uncorrected_F" if uncorrected else "lemma_3_4"
    out = []
    for fam, seed in _families(L, seeds):
        l, r = lhs.at(fam, k), rhs.at(fam, k)
        v = compare(name, l, r, k=k, order=order, seed=seed, detail=f"on {fam.name}")
        if fam.name == "phi" and not uncorrected:
            both_zero = l.is_zero() and r.is_zero()
            v.detail += "; both sides vanish" if both_zero else "; sides do not vanish"
            v.passed = v.passed and both_zero
        out.append(v)
    return out


def verify_prop_3_7(k: int, order: int) -> list[Verdict]:
    L = lab(order)
    fam = L.phi_family()
    Psi = L.script_Psi(lambda kk: 1 / mu_star(kk + 1))
    s = Psi.at(fam, k)
    out = [compare("prop_3_7", s, _zero_like(s), k=k, order=order, detail="Psi(1/mu*_{k+1}) phi = 0")]
    lhs = fam(k) - L.e6_over_rd * fam(k + 1)
    rhs = fam(k + 2) * mu_star(k + 1)
    out.append(compare("prop_3_7", lhs, rhs, k=k, order=order,
                       detail="phi - E6/Delta^1/2 psi(phi) = mu*_{k+1} psi^2(phi)"))
    g0 = L.class0_family()
    s0 = L.script_Psi(lambda kk: 1 / mu(kk + 1)).at(g0, k)
    out.append(compare("prop_3_7", s0, _zero_like(s0), k=k, order=order,
                       detail="class 0: Psi(1/mu_{k+1}) f_{1,6k} Delta^(-k/2) = 0"))
    return out


def verify_claim2(k: int, order: int) -> list[Verdict]:
    """F(phi) = 12(k+1) phi and omega_0(k) = 12(k+1)."""
    L = lab(order)
    fam = L.phi_family()
    Fphi = L.script_F().at(fam, k)
    lam = 12 * (k + 1)
    out = [compare("claim_2", Fphi, fam(k) * lam, k=k, order=order, detail="F(phi) = 12(k+1) phi")]
    w0 = Fphi.coeff(k)
    out.append(Verdict("claim_2", w0 == lam, k=k, order=order, detail=f"omega_0 = {w0}, expected {lam}"))
    return out


def verify_kernel(k: int, order: int) -> Verdict:
    """At truncation, the kernel of the D-operator inside q^(k/2) Q[[q^(1/2)]] is the line through phi."""
    L = lab(order)
    Dop = L.script_D()
    n = 2 * order
    cols = []
    for u in range(n):
        mono = HalfQSeries.monomial(k + u, 1, k + n)
        img = Dop.at(KFamily(lambda kk, m=mono: m, k, k, "monomial"), k)
        cols.append([img.coeff(k + j) for j in range(n)])
    matrix = [[cols[c][r] for c in range(n)] for r in range(n)]
    ns = nullspace(matrix)
    ok = len(ns) == 1
    detail = f"kernel dimension {len(ns)}"
    if ok:
        v = ns[0]
        v = [x / v[0] for x in v] if v[0] else v
        ph = L.phi(k)
        ok = all(v[u] == ph.coeff(k + u) for u in range(n))
        detail += "; kernel vector is phi" if ok else "; kernel vector differs from phi"
    return Verdict("claim_1_kernel", ok, k=k, order=order, detail=detail)


def verify_calculus(order: int, seeds: Sequence[int] = (1, 2, 3, 4, 5), ks: Sequence[int] = (0, 1, 2, 3)) -> list[Verdict]:
    """D psi = psi D, D g = g D + D(g), psi g = psi(g) psi and the expansion of D^2 g."""
    out = []
    for s in seeds:
        fam = random_family(s, order)
        gfam = random_family(1000 + s, order)
        g_k = lambda k: gfam(k).strip().shift(-k)  # a k-dependent multiplier of valuation 0
        G = mul_by(g_k, "g")
        DG = mul_by(lambda k: derive(g_k(k)), "D(g)")
        D2G = mul_by(lambda k: derive(derive(g_k(k))), "D^2(g)")
        psiG = mul_by(lambda k: g_k(k + 1), "psi(g)")
        rules = [
            ("D psi = psi D", D @ psi(1), psi(1) @ D),
            ("D g = g D + D(g)", D @ G, G @ D + DG),
            ("psi g = psi(g) psi", psi(1) @ G, psiG @ psi(1)),
            ("D^2 g = g D^2 + 2 D(g) D + D^2(g)", D @ D @ G,
             G @ D @ D + (DG @ D).scaled(2) + D2G),
        ]
        for name, a, b in rules:
            for k in ks:
                out.append(compare("operator_calculus", a.at(fam, k), b.at(fam, k), k=k, order=order,
                                   seed=s, detail=name))
    return out


def verify_delta_e6_derivatives(order: int) -> list[Verdict]:
    g = generators(order + SLACK)
    h = g.delta_inv_sqrt * g.e6
    e4sq = g.e4 * g.e4
    d1 = derive(h)
    d2 = derive(d1)
    return [
        compare("D(Delta^-1/2 E6)", d1, g.delta_inv_sqrt * e4sq * Fraction(-1, 2), order=order),
        compare("D^2(Delta^-1/2 E6)", d2,
                g.delta_inv_sqrt * (g.e4 * g.e6 / 3 - g.e2 * e4sq / 12), order=order),
    ]


def verify_phi_reconstruction(k: int, order: int) -> Verdict:
    """phi(k) Delta^(k/2) E4^(1/2) equals the normalized weight-(6k+2) form."""
    g = generators(order + SLACK)
    rebuilt = phi(k, order) * g.delta_sqrt**k * g.e4_sqrt
    target = depth1_form(6 * k + 2, order, "recursion").series
    return compare("phi_reconstruction", rebuilt, target, k=k, order=order)


def run_operator_suite(k_max: int = 8, order: int = 30, seeds: Sequence[int] = DEFAULT_SEEDS) -> list[Verdict]:
    """Every operator identity at k = 0..k_max (2..k_max where psi^-2 appears)."""
    out: list[Verdict] = []
    out += verify_calculus(order)
    out += verify_delta_e6_derivatives(order)
    for k in range(0, k_max + 1):
        Dphi = apply_D_op(lab(order).phi_family(), k, order)
        out.append(compare("script_D_phi", Dphi, _zero_like(Dphi), k=k, order=order, detail="D-operator kills phi"))
        c0 = lab(order).class0_D().at(lab(order).class0_family(), k)
        out.append(compare("class0_D", c0, _zero_like(c0), k=k, order=order,
                           detail="D^2 - (k^2/4)E4 kills f_{1,6k} Delta^(-k/2)"))
        out += verify_lemma_3_6(k, order)
        out += verify_lemma_3_4(k, order, seeds)
        out += verify_prop_3_7(k, order)
        out += verify_claim2(k, order)
        out.append(verify_kernel(k, order))
        out.append(verify_phi_reconstruction(k, order))
        # negative control: the uncorrected operator must break the commutation rule
        bad = verify_lemma_3_4(k, order, seeds, uncorrected=True)
        out.append(Verdict("lemma_3_4_uncorrected_F_fails", not all(v.passed for v in bad), k=k, order=order,
                           detail=f"{sum(not v.passed for v in bad)}/{len(bad)} families break the rule"))
    for k in range(2, k_max + 1):
        out += verify_lemma_3_5(k, lambda kk: 1 / mu_star(kk + 1), order, seeds, label="mu=1/mu*_{k+1}")
        out += verify_lemma_3_5(k, lambda kk: Fraction(1), order, seeds, label="mu=1")
    return out
