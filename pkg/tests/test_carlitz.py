import random

import pytest

from algebra import FracK, PolyA, QuotCtx, field_for_q, iter_all, iter_monic, poly_lcm
from carlitz import (b_eval, b_poly, bc_number, bc_number_mod, bracket, carlitz_factorial, d_seq,
                     digit_profile, e_coeffs, e_eval, e_poly, elem_sym, elem_sym_t, ell_q, g_poly,
                     l_seq, linearized_eval, subspace_poly)
from errors import DomainError, IndexOutOfRange, PrecisionExceeded
from mpoly import MPoly, substitute


def test_digit_profile():
    profile = digit_profile(10, 3)
    assert profile.digits == (1, 0, 1)
    assert profile.ell == 2
    assert ell_q(0, 2) == 0
    assert ell_q(7, 2) == 3
    with pytest.raises(DomainError):
        digit_profile(-1, 2)


@pytest.mark.parametrize("q", [2, 3])
def test_d_is_product_of_monics(q):
    field = field_for_q(q)
    for n in range(0, 3):
        product = PolyA.one(field)
        for a in iter_monic(field, n):
            product = product * a
        assert d_seq(field, n) == product


@pytest.mark.parametrize("q,top", [(2, 3), (3, 2)])
def test_l_is_signed_lcm_of_monics(q, top):
    field = field_for_q(q)
    for n in range(1, top + 1):
        lcm = PolyA.one(field)
        for a in iter_monic(field, n):
            lcm = poly_lcm(lcm, a)
        sign = 1 if n % 2 == 0 else field.neg[1]
        assert l_seq(field, n) == lcm.scale(sign)
        assert l_seq(field, n) == -(bracket(field, n) * l_seq(field, n - 1))


def test_b_poly_roots():
    field = field_for_q(3)
    for n in range(4):
        assert b_poly(field, n).degree("Y") == n
        for i in range(n):
            assert b_eval(field, n, PolyA.monomial(field, 3 ** i)).is_zero()
        theta = PolyA.theta(field)
        value = substitute(b_poly(field, n), {"Y": theta + 1}).to_mpoly().constant_value()
        assert value == b_eval(field, n, theta + 1)


@pytest.mark.parametrize("q", [2, 3, 4])
def test_e_polynomial_properties(q):
    field = field_for_q(q)
    rng = random.Random(q)
    for i in range(3):
        # 在 A(i) 上为零，在 θ^i 处为 1
        for a in iter_all(field, i):
            assert e_eval(field, i, a).is_zero()
        assert e_eval(field, i, PolyA.monomial(field, i)) == FracK(PolyA.one(field))
        assert e_poly(field, i).degree("z") == q ** i
        for _ in range(20):
            a = PolyA(field, [rng.randrange(q) for _ in range(4)])
            b = PolyA(field, [rng.randrange(q) for _ in range(4)])
            c = rng.randrange(q)
            assert e_eval(field, i, a + b.scale(c)) == e_eval(field, i, a) + e_eval(field, i, b) * PolyA.constant(field, c)


def test_g_basis():
    field = field_for_q(2)
    assert g_poly(field, 0).num == MPoly.one(field, ("z",))
    assert g_poly(field, 2) == e_poly(field, 1)
    assert g_poly(field, 3) == e_poly(field, 0) * e_poly(field, 1)


def test_carlitz_factorial():
    field = field_for_q(3)
    assert carlitz_factorial(field, 2).is_one()
    assert carlitz_factorial(field, 3) == d_seq(field, 1)
    assert carlitz_factorial(field, 5) == d_seq(field, 1) * d_seq(field, 0) ** 2


def test_elementary_symmetric():
    field = field_for_q(2)
    e2 = elem_sym_t(field, 2, 3)
    assert len(e2.terms) == 3
    assert elem_sym(field, 0, ("t1",)) == MPoly.one(field, ("t1",))
    with pytest.raises(IndexOutOfRange):
        elem_sym_t(field, 4, 3)


@pytest.mark.parametrize("k", [0, 1, 2])
def test_subspace_poly_of_full_space(k):
    field = field_for_q(3)
    coeffs = subspace_poly(field, range(k))
    assert coeffs == e_coeffs(field, k)
    for v in iter_all(field, k):
        assert linearized_eval(coeffs, v).is_zero()


def test_bernoulli_carlitz_vanishing():
    field = field_for_q(3)
    assert bc_number(field, 0, 10) == FracK(PolyA.one(field))
    for j in (1, 3, 5, 7):
        assert bc_number(field, j, 10).is_zero()
    assert not bc_number(field, 2, 10).is_zero()
    with pytest.raises(PrecisionExceeded):
        bc_number(field, 11, 10)


def test_bernoulli_carlitz_mod_matches_exact():
    field = field_for_q(3)
    ctx = QuotCtx(PolyA.from_ints(field, [1, 0, 1]))
    for j in range(8):
        assert bc_number_mod(j, ctx) == bc_number(field, j, 8).reduce_mod(ctx)
    with pytest.raises(DomainError):
        bc_number_mod(8, ctx)
