import pytest

from algebra import PolyA, field_for_q
from carlitz import elem_sym_t
from errors import DomainError, PrecisionExceeded
from hpoly import h_interpolate
from mpoly import MPoly, t_vars
from tate import (TruncLaurent, gamma_poly, gamma_property_check, gamma_series, gamma_tail,
                  lambda_analytic, lambda_limit, lambda_limit_report, laurent_quotient,
                  lemma_ident_check, lower_coeff_verify, nu_value, nu_value_report)


@pytest.fixture(scope="module")
def h23():
    return h_interpolate(field_for_q(2), 3)


def test_laurent_quotient_and_product():
    field = field_for_q(2)
    one = PolyA.one(field)
    theta_plus_one = PolyA.from_ints(field, [1, 1])
    low, c = laurent_quotient(one, theta_plus_one, -5)
    assert low == -5
    assert c.coeffs == (1, 1, 1, 1, 1)

    inverse = TruncLaurent.scalar(field, 1, 0, (low, c), -5)
    exact = TruncLaurent.from_mpoly(MPoly.constant(field, theta_plus_one, t_vars(1)), 1, 0)
    product = inverse * exact
    assert product.floor == -4
    assert product.top() == 0
    assert product.nonneg_part() == MPoly.one(field, t_vars(1))


def test_trunc_laurent_box_and_floor():
    field = field_for_q(3)
    t1 = MPoly.var(field, "t1").extend(t_vars(2))
    f = t1 * t1 + PolyA.theta(field)
    series = TruncLaurent.from_mpoly(f, 2, 1)
    # t1^2 超出 box
    assert series.nonneg_part() == MPoly.constant(field, PolyA.theta(field), t_vars(2))
    empty = TruncLaurent(field, 2, 1, {}, -3)
    assert empty.is_zero()
    assert empty.top_bound() == -4
    assert empty.shift(2).floor == -1
    with pytest.raises(PrecisionExceeded):
        empty.shift(5).nonneg_part()
    with pytest.raises(DomainError):
        TruncLaurent(field, 2, 1, {(0,): (0, PolyA.one(field))})


@pytest.mark.parametrize("q,s,ds", [(2, 3, (2, 3, 4)), (2, 2, (1, 2, 3)), (3, 5, (2, 3)), (3, 3, (1, 2, 3))])
def test_lemma_identity(q, s, ds):
    field = field_for_q(q)
    for d in ds:
        assert lemma_ident_check(field, s, d)


def test_lambda_limit_windows_agree(h23):
    lam, report = lambda_limit_report(h23, 3, 5)
    assert report.passed
    assert [row.d for row in report.rows] == [3, 4, 5]
    assert lambda_limit(h23, 4, 6) == lam
    assert lam == -h23.y_coefficient(h23.mu)


def test_lambda_limit_window_too_short(h23):
    with pytest.raises(DomainError):
        lambda_limit(h23, 3, 4)
    with pytest.raises(DomainError):
        lambda_limit(h_interpolate(field_for_q(2), 1))


def test_gamma_series_small_case():
    field = field_for_q(2)
    series = gamma_series(field, 3, 2)
    e1, e2 = elem_sym_t(field, 1, 3), elem_sym_t(field, 2, 3)
    assert series.h_coeffs[0] == MPoly.one(field, t_vars(3))
    assert series.h_coeffs[1] == e1
    assert series.h_coeffs[2] == e1 * e1 + e1 + e2
    vars = t_vars(3) + ("Y",)
    assert gamma_poly(field, 3, 0) == MPoly.var(field, "Y").extend(vars) + e1.extend(vars)
    assert gamma_poly(field, 3, 1) == MPoly.one(field, vars)
    with pytest.raises(DomainError):
        gamma_poly(field, 3, 2)
    with pytest.raises(DomainError):
        gamma_series(field, 3, 0)


def test_gamma_poly_is_monic_of_expected_degree():
    field = field_for_q(3)
    for r in range(3):
        g = gamma_poly(field, 5, r)
        assert g.degree("Y") == 2 - r
        assert g.coefficient({"Y": 2 - r}) == MPoly.one(field, t_vars(5))


def test_gamma_property(h23):
    report = gamma_property_check(h23.field, 3, 0, range(2, 5))
    assert report.strictly_decreasing


def test_lower_coefficient(h23):
    report = lower_coeff_verify(h23, 0)
    assert report.strictly_decreasing
    with pytest.raises(DomainError):
        lower_coeff_verify(h23, 1)


def test_nu_two_ways_agree(h23):
    nu, report = nu_value_report(h23)
    assert report.passed
    e1 = elem_sym_t(h23.field, 1, 3)
    assert nu == h23.y_coefficient(0) + e1 * h23.y_coefficient(1)


@pytest.mark.slow
def test_nu_q3():
    H = h_interpolate(field_for_q(3), 5)
    _, report = nu_value_report(H)
    assert report.passed


def test_nu_requires_positive_mu():
    H = h_interpolate(field_for_q(3), 3)
    with pytest.raises(DomainError):
        nu_value_report(H)


def test_nu_value_matches_report(h23):
    assert nu_value(h23) == nu_value_report(h23)[0]


def test_gamma_tail_constant_part():
    field = field_for_q(2)
    tail = gamma_tail(field, 3, 2, -3, box=0)
    assert tail.nonneg_part() == MPoly.one(field, t_vars(3))
    assert tail.floor == -3
    with pytest.raises(DomainError):
        gamma_tail(field, 3, 1, -3)


def test_lambda_analytic_stable_in_d():
    field = field_for_q(2)
    assert lambda_analytic(field, 3, 5) == lambda_analytic(field, 3, 6)
    with pytest.raises(DomainError):
        lambda_analytic(field_for_q(3), 2, 4)


@pytest.fixture(scope="module")
def h35():
    return h_interpolate(field_for_q(3), 5)


def test_gamma_inverse_orientation():
    field = field_for_q(3)
    vars = t_vars(5) + ("Y",)
    Y = MPoly.var(field, "Y").extend(vars)
    e1, e2 = elem_sym_t(field, 1, 5).extend(vars), elem_sym_t(field, 2, 5).extend(vars)
    # Γ_d 的展开是 1/f，Γ_d^{−1} 的展开是 f（g 从 Y^9 开始）
    assert gamma_poly(field, 5, 1) == Y + e1
    assert gamma_poly(field, 5, 1, inverse=True) == Y - e1
    assert gamma_poly(field, 5, 0) == Y * Y + e1 * Y + e1 * e1 - e2
    assert gamma_poly(field, 5, 0, inverse=True) == Y * Y - e1 * Y + e2


def test_gamma_inverse_same_in_char_2():
    field = field_for_q(2)
    assert gamma_poly(field, 3, 0, inverse=True) == gamma_poly(field, 3, 0)


@pytest.mark.parametrize("r", [0, 1])
def test_lower_coefficients_q3(h35, r):
    report = lower_coeff_verify(h35, r)
    assert report.strictly_decreasing
    assert report.rows[-1].stable
    assert report.passed


def test_nu_q3_explicit_tail(h35):
    nu, report = nu_value_report(h35, 4, 6, D=6)
    assert report.passed
    assert report.tail_stable
    e1 = elem_sym_t(h35.field, 1, 5)
    assert nu == h35.y_coefficient(1) + e1 * h35.y_coefficient(2)
    with pytest.raises(DomainError):
        nu_value_report(h35, 4, 6, D=5)
