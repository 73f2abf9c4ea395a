from dataclasses import replace
from fractions import Fraction

import pytest

from qmextremal.audit import factor
from qmextremal.depth1 import (
    ROUTES,
    ExtremalError,
    PolySeq,
    QmFormDescriptor,
    alpha_coeffs,
    check_prop41b,
    depth1_form,
    f8_base,
    f_class4,
    f_ode,
    f_recursive,
    f_theorem31,
    mu,
    mu_star,
    normalize,
    ode_auxiliary,
    residue_class,
    verify_ode,
    verify_prop41,
)
from qmextremal.eisenstein import eisenstein, generators
from qmextremal.qm_space import extremal_solve
from qmextremal.series import HalfQSeries, derive


def test_mu_values():
    assert mu(0) == mu_star(0) == -1
    assert mu(1) == 462
    assert mu_star(1) == 390
    assert mu(2) == Fraction(12 * 13 * 17, 6)
    with pytest.raises(ValueError):
        mu(-1)


def test_residue_class():
    assert residue_class(20) == (2, 3)
    assert residue_class(22) == (4, 3)
    with pytest.raises(ExtremalError):
        residue_class(7)


@pytest.mark.parametrize("kind", ["P", "Q", "Pstar", "Qstar"])
def test_polyseq_recursion_and_parity(kind):
    seq = PolySeq.build(kind, 10)
    mult = mu if kind in ("P", "Q") else mu_star
    for k in range(1, 10):
        nxt = [Fraction(0)] + seq.rows[k]
        prev = seq.rows[k - 1]
        expect = [c + (mult(k) * prev[j] if j < len(prev) else 0) for j, c in enumerate(nxt)]
        while len(expect) > 1 and not expect[-1]:
            expect.pop()
        assert seq.rows[k + 1] == expect
    for k in range(11):
        row = seq.rows[k]
        parity = k % 2 if kind.startswith("P") else (k + 1) % 2
        assert all(c == 0 for j, c in enumerate(row) if j % 2 != parity)
        assert seq.degree(k) == (k if kind.startswith("P") else k - 1)


def test_f12_by_hand():
    g = generators(10)
    f6 = derive(g.e4) / 240
    hand = g.e6 * f6 - g.delta
    f = f_recursive(12, 6).series
    assert f.q_coeffs(0, 4) == [0, 0, -462, -25872]
    assert hand.q_coeffs(0, 6) == f.q_coeffs(0, 6)
    assert str(factor(462)) == "2 * 3 * 7 * 11"


def test_f12_normalized():
    f = normalize(f_recursive(12, 20))
    assert f.series.q_coeff(2) == 1
    assert f.series.q_coeff(3) == Fraction(25872, 462)
    assert f.notes[-1] == "normalized by 1/(-462)"


def test_f14_integral_and_formula():
    g = generators(60)
    hand = g.e6 * f8_base(g) - g.delta * g.e2
    f = f_recursive(14, 50).series
    assert f.q_coeffs() == hand.q_coeffs(0, 50)
    assert f.has_integer_coeffs()
    assert depth1_form(14, 50).series.has_integer_coeffs()


def test_f20_leading_coefficients():
    f = f_recursive(20, 8).series
    assert f.q_coeffs(0, 5) == [0, 0, 0, 163020, 29832660]
    assert str(factor(163020)) == "2^2 * 3 * 5 * 11 * 13 * 19"


def test_f20_printed_alternative_is_not_extremal():
    # E6^2 f8 + mu*_1 Delta f8 fails to vanish at q^1 and q^2
    g = generators(12)
    f8 = depth1_form(8, 10).series
    alt = g.e6 * g.e6 * f8 + g.delta * f8 * mu_star(1)
    assert alt.q_coeff(1) != 0
    assert f_recursive(20, 10).series.q_coeff(1) == 0


def test_closed_formula_small_k():
    g = generators(20)
    assert normalize(f_theorem31(6, 15)).series == depth1_form(6, 15, "linalg").series
    t = f_theorem31(14, 15).series
    assert t == (g.e6 * f8_base(g) - g.delta * g.e2)
    with pytest.raises(ExtremalError):
        f_theorem31(4, 10)


# w = 10 is E4 (q + 18q^2 + 84q^3)
@pytest.mark.parametrize(
    "w,expected",
    [(2, [1, -24, -72]), (6, [0, 1, 18, 84]), (8, [0, 1, 66, 732]), (10, [0, 1, 258, 6564])],
)
@pytest.mark.parametrize("route", ROUTES)
def test_example_forms_every_route(w, expected, route):
    if route == "theorem31" and w < 6:
        pytest.skip("closed formula starts at k = 1")
    f = depth1_form(w, 15, route)
    assert f.normalized
    assert f.coefficients()[: len(expected)] == expected


def test_alpha0_is_one():
    for k in range(11):
        assert alpha_coeffs(k, 3)[0] == 1
        assert alpha_coeffs(k, 3, residue=0)[0] == 1


def test_ode_auxiliary_against_series():
    n = 25
    g = generators(n)
    aux = ode_auxiliary(n)
    e6_e4 = g.e6 * g.e4_inv
    assert list(aux["b"]) == g.e4_inv.q_coeffs(0, n)
    assert list(aux["c"]) == e6_e4.q_coeffs(0, n)
    assert list(aux["d"]) == (e6_e4 * e6_e4).q_coeffs(0, n)


def test_class4():
    f10 = f_class4(10, 20)
    assert f10.series == eisenstein(4, 20) * depth1_form(6, 20).series
    assert f10.series.valuation() == 2
    e4 = f_class4(4, 20)
    assert e4.series == eisenstein(4, 20)
    assert e4.depth_degenerate
    with pytest.raises(ExtremalError):
        f_class4(12, 10)


@pytest.mark.parametrize("k", range(16))
def test_class4_matches_solver(k):
    w = 6 * k + 4
    order = k + 12
    direct = extremal_solve(1, w, order).series
    assert f_class4(w, order).series == HalfQSeries.from_q_coeffs(direct.q_coeffs(), order)


def test_normalize_identity_and_errors():
    f = depth1_form(8, 15)
    assert normalize(f) is f
    bad = QmFormDescriptor(12, 1, 10, "x", HalfQSeries.from_q_coeffs([0, 3, 1], 10), False)
    with pytest.raises(ExtremalError, match="not extremal at expected index"):
        normalize(bad)
    zero = QmFormDescriptor(12, 1, 10, "x", HalfQSeries.zero(20), False)
    with pytest.raises(ExtremalError, match="not extremal at expected index"):
        normalize(zero)


@pytest.mark.parametrize("w,name", [(6, "ode_a"), (14, "ode_b"), (10, "ode_c"), (36, "ode_a"), (40, "ode_c")])
def test_ode_examples(w, name):
    v = verify_ode(depth1_form(w, 60, "recursion" if w % 6 != 4 else "linalg"))
    assert v.identity == name
    assert v.passed, v.detail


def test_ode_negative_control():
    f = depth1_form(14, 30)
    broken = replace(f, series=f.series + HalfQSeries.monomial(10, 1, f.series.order))
    assert not verify_ode(broken).passed


def test_ode_order_guard():
    with pytest.raises(ExtremalError):
        verify_ode(depth1_form(30, 8))


@pytest.mark.parametrize("k", range(1, 9))
def test_weight_zero_odes(k):
    v = verify_prop41(k, 40)
    assert v.passed, v.detail


def test_weight_zero_ode_corrupted_phi():
    g = generators(30)
    f2 = depth1_form(14, 30).series
    phi = f2 * g.delta_inv_sqrt**2 * g.e4_sqrt.invert()
    bad = phi + HalfQSeries.monomial(phi.base + 6, 1, phi.order)
    assert check_prop41b(phi, 2, g).passed
    assert not check_prop41b(bad, 2, g).passed


def test_integrality_to_200():
    for w in (2, 6, 8, 10, 14):
        assert depth1_form(w, 200).series.has_integer_coeffs(), w


def test_unknown_route():
    with pytest.raises(ExtremalError):
        depth1_form(8, 10, "magic")


def test_f_ode_weight_zero_flag():
    assert f_ode(0, 10).depth_degenerate
