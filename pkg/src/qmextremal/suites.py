"""Named verification suites, as run by ``qmextremal verify``."""

from __future__ import annotations

from .depth1 import ROUTES, depth1_form, verify_ode, verify_prop41
from .eisenstein import delta_polynomial, delta_product, generators, remark42_identity, verify_ramanujan
from .qm_space import _dim_sum, extremal_solve
from .series import HalfQSeries
from .verdict import Verdict, compare
from . import operators

SUITES = ("ramanujan", "ode", "prop41", "operators", "routes")


def ramanujan_suite(order: int = 60) -> list[Verdict]:
    g = generators(order)
    out = [verify_ramanujan(order), remark42_identity(order)]
    out.append(compare("delta_routes", delta_product(order), delta_polynomial(order), order=order,
                       detail="product formula vs (E4^3 - E6^2)/1728"))
    out.append(Verdict("delta_integral", g.delta.has_integer_coeffs(), order=order))
    lead = (g.delta_inv_sqrt.coeff(-1), g.delta_inv_sqrt.coeff(1))
    out.append(Verdict("delta_inv_sqrt_leading", lead == (1, 12), order=order,
                       detail=f"coefficients at q^(-1/2), q^(1/2): {lead[0]}, {lead[1]}"))
    for name in ("delta_sqrt", "e4_sqrt"):
        s = getattr(g, name)
        out.append(Verdict(f"{name}_integral", s.has_integer_coeffs(), order=order))
    return out


def depth1_weights(weight_max: int, minimum: int = 2) -> list[int]:
    return [w for w in range(minimum, weight_max + 1, 2) if w != 4]


def ode_suite(weight_max: int = 80, order: int = 60) -> list[Verdict]:
    out = []
    for w in depth1_weights(weight_max, 6):
        f = depth1_form(w, max(order, _dim_sum(1, w) + 10))
        out.append(verify_ode(f))
    return out


def prop41_suite(k_max: int = 8, order: int = 60, weight_max: int | None = None) -> list[Verdict]:
    ks = range(1, k_max + 1)
    if weight_max is not None:
        ks = [k for k in ks if 6 * k + 2 <= weight_max]
    return [verify_prop41(k, order) for k in ks]


def routes_suite(weight_max: int = 120, order: int = 20, margin: int = 20) -> list[Verdict]:
    """All constructions of each depth-1 form agree exactly."""
    out = []
    for w in depth1_weights(weight_max):
        n = max(order, _dim_sum(1, w) + margin)
        routes = [r for r in ROUTES if not (r == "theorem31" and w < 6)]
        forms = {r: depth1_form(w, n, r).series for r in routes}
        ref = forms["linalg"]
        for r in routes:
            if r != "linalg":
                out.append(compare("route_agreement", forms[r], ref, order=n, detail=f"w={w}: {r} vs linalg"))
        if w % 6 == 4:
            direct = HalfQSeries.from_q_coeffs(extremal_solve(1, w, n).series.q_coeffs(), n)
            via_e4 = depth1_form(w, n, "ode").series
            out.append(compare("class4_vs_extremal_solve", via_e4, direct, order=n, detail=f"w={w}"))
    return out


def run_suite(name: str, k_max: int = 8, order: int = 30, weight_max: int | None = None) -> list[Verdict]:
    if name == "ramanujan":
        return ramanujan_suite(order)
    if name == "ode":
        return ode_suite(weight_max or 80, order)
    if name == "prop41":
        return prop41_suite(k_max, order, weight_max)
    if name == "operators":
        return operators.run_operator_suite(k_max, order)
    if name == "routes":
        return routes_suite(weight_max or 120)
    if name == "all":
        out = []
        for s in SUITES:
            out += run_suite(s, k_max, order, weight_max)
        return out
    raise ValueError(f"unknown suite {name!r}")
