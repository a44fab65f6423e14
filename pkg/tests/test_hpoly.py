import pytest

from algebra import PolyA, field_for_q
from carlitz import elem_sym_t
from errors import DomainError, IndexOutOfRange, NonExactDivision
from hpoly import (HPolynomial, HRoute, check_row_degree, eq10_candidate, eq10_check,
                   frobenius_evaluations_integral, frobenius_factor, h_interpolate, h_params,
                   h_restrict, h_row, h_universal, interp_crosscheck, interpolation_degrees,
                   pi_factor, power_sum_via_h, resolve_sign, special_h, univ_coeffs, univ_identity_check)
from mpoly import MPoly, MPolyK, t_vars
from sums import SumSpec, harmonic_sum, power_sum

GRID = [(2, 2), (2, 3), (2, 4), (3, 3), (3, 5), (4, 4), (5, 5)]


@pytest.fixture(scope="module")
def h23():
    return h_interpolate(field_for_q(2), 3)


@pytest.fixture(scope="module")
def h35():
    return h_interpolate(field_for_q(3), 5)


def test_h_params():
    assert h_params(2, 3) == (2, 1)
    assert h_params(3, 5) == (2, 2)
    assert h_params(5, 9) == (2, 4)
    assert h_params(3, 3) == (1, 0)
    assert h_params(3, 1) == (0, 0)
    with pytest.raises(DomainError):
        h_params(3, 4)
    assert interpolation_degrees(2, 3) == ([2, 3], [4, 5])


def test_h_row_small_instance():
    field = field_for_q(2)
    row = h_row(field, 3, 2)
    theta = PolyA.theta(field)
    expected = (elem_sym_t(field, 3, 3) + elem_sym_t(field, 2, 3) * theta
                + elem_sym_t(field, 1, 3) * theta + MPoly.constant(field, theta * theta, t_vars(3)))
    assert row.poly(field) == expected
    assert row.theta_degree == 2
    assert row.verified == "full"


def test_h_row_definition():
    field = field_for_q(3)
    for d in (2, 3):
        row = h_row(field, 5, d)
        lhs = harmonic_sum(SumSpec(field, 1, 5, d))
        assert MPolyK(row.poly(field)) * pi_factor(field, 5, d) == lhs
    with pytest.raises(DomainError):
        h_row(field, 5, 1)


@pytest.mark.parametrize("q, s", [(2, 3), (3, 5), (3, 3)])
def test_h_row_theta_degree(q, s):
    field = field_for_q(q)
    m, mu = h_params(q, s)
    for d in range(max(m, 1), m + 3):
        assert h_row(field, s, d).theta_degree == m - 1 + mu * q ** (d - m)


def test_row_degree_mismatch_is_hard():
    check_row_degree(2, 3, 2, 2)
    with pytest.raises(NonExactDivision):
        check_row_degree(2, 3, 2, 3)
    with pytest.raises(NonExactDivision):
        check_row_degree(3, 5, 3, 6)


def test_universal_relations():
    f2, f3 = field_for_q(2), field_for_q(3)
    assert univ_coeffs(f2, (0, 1)) == {3: MPoly.one(f2, ("Y",))}
    for n in range(3):
        assert univ_identity_check(f2, (0, 0), n)
        assert univ_identity_check(f2, (0, 0, 1), n)
    assert univ_identity_check(f3, (0, 0, 0), 1)


@pytest.mark.parametrize("q,s", GRID)
def test_routes_agree_and_degrees(q, s):
    field = field_for_q(q)
    H = h_interpolate(field, s)
    assert h_universal(field, s, check=False) == H
    m, mu = h_params(q, s)
    assert H.y_degree == mu
    assert H.t_degree == m - 1
    assert H.corner() == (PolyA.one(field),)
    assert H.route is HRoute.VANDERMONDE


@pytest.mark.slow
def test_routes_agree_q5_s9():
    field = field_for_q(5)
    H = h_interpolate(field, 9)
    assert h_universal(field, 9, check=False) == H
    assert H.y_degree == 4


def test_holdout_rows_match(h23):
    field = h23.field
    for d in (4, 5, 6):
        y = PolyA.monomial(field, 2 ** (d - 2))
        assert h23.evaluate_table(y) == h_row(field, 3, d).table


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_h_q_is_one(q):
    field = field_for_q(q)
    H = h_interpolate(field, q)
    assert H.poly() == MPoly.one(field, t_vars(q) + ("Y",))
    assert resolve_sign(H).h_q == 1


def test_special_h():
    field = field_for_q(3)
    H = special_h(field)
    assert H.is_special
    assert h_interpolate(field, 1) == H
    with pytest.raises(DomainError):
        H.poly()


@pytest.mark.parametrize("s_prime", [0, 1, 2])
def test_power_sum_extraction(h23, s_prime):
    for d in range(1, 5):
        assert power_sum_via_h(h23, s_prime, d) == power_sum(SumSpec(h23.field, 1, s_prime, d))


def test_power_sum_extraction_q3(h35):
    for s_prime in (0, 1, 4):
        for d in (1, 2, 3):
            assert power_sum_via_h(h35, s_prime, d) == power_sum(SumSpec(h35.field, 1, s_prime, d))


def test_restrict_bounds(h23):
    assert h_restrict(h23, 0).vars == ("Y",)
    with pytest.raises(IndexOutOfRange):
        h_restrict(h23, 3)
    with pytest.raises(DomainError):
        power_sum_via_h(h23, 1, 0)


@pytest.mark.parametrize("q,s,d", [(2, 1, 1), (2, 2, 2), (2, 3, 3), (3, 1, 2), (3, 3, 2), (3, 5, 1)])
def test_interp_crosscheck(q, s, d):
    report = interp_crosscheck(field_for_q(q), s, d)
    assert report.interpolates
    assert report.divisible
    assert report.passed
    if s == 1:
        assert report.extraction is None


def test_eq10_closed_form(h35):
    report = eq10_check(h35)
    assert report.passed
    assert report.sign in (1, -1)
    with pytest.raises(DomainError):
        eq10_check(h_interpolate(field_for_q(2), 3))


@pytest.mark.slow
@pytest.mark.parametrize("q", [4, 5])
def test_eq10_larger_fields(q):
    field = field_for_q(q)
    assert eq10_check(h_interpolate(field, 2 * q - 1)).passed


def test_eq10_candidate_shape():
    field = field_for_q(3)
    f = eq10_candidate(field)
    # Y^5 的系数在 F_3 中相消
    assert f.degree("Y") == 2
    assert f.is_symmetric(t_vars(5))


def test_frobenius_factor():
    # q = 3：Y^2 + θ 不是 Y^3 − θ 的倍数
    field = field_for_q(3)
    Y = MPoly.var(field, "Y")
    theta = PolyA.theta(field)
    V = Y * Y + theta
    U = (Y ** 3 - theta) * V
    assert frobenius_factor(U, 1) == V
    assert frobenius_evaluations_integral(U, 1, range(3))
    with pytest.raises(NonExactDivision):
        frobenius_factor(V, 1)
    assert not frobenius_evaluations_integral(V, 2, [1])


def test_h_polynomial_strips_zero_rows():
    field = field_for_q(2)
    H = HPolynomial(field, 3, 2, 1, {(0, 0, 0): (PolyA.zero(field),), (1, 1, 1): (PolyA.one(field),)})
    assert list(H.table) == [(1, 1, 1)]
