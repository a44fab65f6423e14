import pytest

from algebra import PolyA, QuotCtx, field_for_q, iter_all, iter_monic, primes_up_to
from errors import DomainError
from mpoly import MPoly, MPolyK, t_vars
from sums import (SumSpec, TailSpec, bernoulli_goss, bernoulli_goss_mod, closed_form_check,
                  harmonic_sum, harmonic_sum_mod, monic_enum, power_sum, psi_expansion,
                  simon_sum, specialize_frobenius, tail_sum)


def twisted(a: PolyA, s: int) -> MPoly:
    """a(t_1)···a(t_s)"""
    field = a.field
    result = MPoly.one(field, t_vars(s))
    for name in t_vars(s):
        coeffs = [PolyA.constant(field, c) for c in a.coeffs] or [PolyA.zero(field)]
        result = result * MPoly.univariate(name, coeffs)
    return result


def brute_power_sum(field, n, s, d) -> MPolyK:
    total = MPolyK(MPoly.zero(field, t_vars(s)))
    for a in iter_monic(field, d):
        term = MPolyK(twisted(a, s))
        total = total + (term / a ** n if n > 0 else term * a ** (-n))
    return total


@pytest.mark.parametrize("q", [2, 3])
@pytest.mark.parametrize("n", [-1, 1, 2])
def test_power_sum_matches_enumeration(q, n):
    field = field_for_q(q)
    for s in range(3):
        for d in range(3):
            assert power_sum(SumSpec(field, n, s, d)) == brute_power_sum(field, n, s, d)


def test_power_sum_extension_field():
    field = field_for_q(4)
    for s in range(2):
        assert power_sum(SumSpec(field, 1, s, 1)) == brute_power_sum(field, 1, s, 1)


def test_harmonic_and_tail_sums():
    field = field_for_q(2)
    for s in range(3):
        for d in range(1, 4):
            expected = MPolyK(MPoly.zero(field, t_vars(s)))
            for i in range(d):
                expected = expected + brute_power_sum(field, 1, s, i)
            assert harmonic_sum(SumSpec(field, 1, s, d)) == expected
        tail = tail_sum(TailSpec(field, 2, 4, s))
        assert tail == harmonic_sum(SumSpec(field, 1, s, 5)) - harmonic_sum(SumSpec(field, 1, s, 2))
    with pytest.raises(DomainError):
        harmonic_sum(SumSpec(field, 1, 1, 0))
    with pytest.raises(DomainError):
        TailSpec(field, 3, 2, 1)
    with pytest.raises(DomainError):
        SumSpec(field, 1, -1, 2)


def test_monic_enum_order():
    field = field_for_q(3)
    monics = list(monic_enum(field, 1))
    assert [a.to_text() for a in monics] == ["0,1", "1,1", "2,1"]
    assert len(list(monic_enum(field, 3))) == 27


@pytest.mark.parametrize("q", [2, 3, 5])
def test_closed_form_for_s_one(q):
    field = field_for_q(q)
    for d in range(1, 5 if q < 5 else 3):
        assert closed_form_check(field, d)


@pytest.mark.parametrize("q,s,d", [(2, 3, 4), (3, 3, 3), (3, 5, 3), (2, 2, 3)])
def test_vanishing_locus(q, s, d):
    field = field_for_q(q)
    m = (s - 1) // (q - 1)
    F = harmonic_sum(SumSpec(field, 1, s, d))
    for r in range(d - m):
        assert specialize_frobenius(F, s, r).is_zero()


def test_harmonic_sum_mod_matches_reduction():
    field = field_for_q(3)
    for P in primes_up_to(field, 2):
        ctx = QuotCtx(P)
        for n in (1, 2, 4):
            for s in range(3):
                exact = harmonic_sum(SumSpec(field, n, s, ctx.d))
                assert harmonic_sum_mod(SumSpec(field, n, s, ctx.d), ctx) == exact.reduce_mod(ctx)
    with pytest.raises(DomainError):
        harmonic_sum_mod(SumSpec(field, 1, 1, 3), QuotCtx(PolyA.from_ints(field, [1, 0, 1])))


@pytest.mark.parametrize("q", [2, 3])
def test_simon_vanishing(q):
    field = field_for_q(q)
    for j in range(6):
        for s in range(11):
            if q == 3 and j > 4:
                continue
            zero = simon_sum(field, j, s).is_zero()
            assert zero == (j * (q - 1) > s)


def test_simon_matches_enumeration():
    field = field_for_q(3)
    for j in range(3):
        for s in range(4):
            expected = MPoly.zero(field, t_vars(s))
            for a in iter_monic(field, j):
                expected = expected + twisted(a, s)
            assert simon_sum(field, j, s) == expected


def test_bernoulli_goss_cutoff_and_mod():
    field = field_for_q(2)
    ctx = QuotCtx(PolyA.from_ints(field, [1, 1, 1]))
    for N in range(6):
        for s in range(3):
            value = bernoulli_goss(field, N, s)
            assert bernoulli_goss_mod(N, s, ctx) == value.reduce_mod(ctx)
    with pytest.raises(DomainError):
        bernoulli_goss(field, -1, 1)


def test_psi_expansion_coefficients():
    field = field_for_q(2)
    s, d = 2, 2
    coeffs = psi_expansion(field, s, d, 3)
    for i, c in enumerate(coeffs):
        expected = MPoly.zero(field, t_vars(s))
        for a in iter_all(field, d):
            expected = expected + twisted(a, s) * a ** i
        assert c == expected
