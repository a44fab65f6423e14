import random

import pytest

from algebra import FracK, PolyA, QuotCtx, field_for_q
from errors import ArityMismatch, DomainError, NonExactDivision
from mpoly import (MPoly, MPolyK, exact_div, expand_symmetric, substitute, sym_keys,
                   symmetric_table, t_vars)

VARS = ("t1", "t2", "Y")


def random_mpoly(rng, field, vars=VARS, terms=4, maxexp=2, maxdeg=2):
    out = {}
    for _ in range(terms):
        exps = tuple(rng.randint(0, maxexp) for _ in vars)
        out[exps] = PolyA(field, [rng.randrange(field.q) for _ in range(rng.randint(1, maxdeg + 1))])
    return MPoly(field, vars, out)


def test_ring_axioms_randomized():
    rng = random.Random(2024)
    for q in (2, 3, 4):
        field = field_for_q(q)
        for _ in range(1000 // 3):
            a, b, c = (random_mpoly(rng, field) for _ in range(3))
            assert a * (b + c) == a * b + a * c
            assert (a + b) - b == a
            assert a * b == b * a


def test_exact_division_round_trip():
    rng = random.Random(99)
    field = field_for_q(3)
    for _ in range(200):
        f = random_mpoly(rng, field)
        g = random_mpoly(rng, field, terms=2)
        if g.is_zero():
            continue
        assert exact_div(f * g, g) == f


def test_exact_division_failure():
    field = field_for_q(2)
    t1 = MPoly.var(field, "t1")
    with pytest.raises(NonExactDivision):
        exact_div(t1 * t1 + 1, t1)
    with pytest.raises(ZeroDivisionError):
        exact_div(t1, MPoly.zero(field, ("t1",)))


def test_unknown_variable_names():
    field = field_for_q(2)
    with pytest.raises(ArityMismatch):
        MPoly.var(field, "x")
    with pytest.raises(ArityMismatch):
        MPoly(field, ("t1", "t1"))
    with pytest.raises(ArityMismatch):
        substitute(MPoly.var(field, "t1"), {"w": PolyA.one(field)})


def test_substitute_is_homomorphism():
    rng = random.Random(5)
    field = field_for_q(3)
    value = MPolyK(MPoly.var(field, "Y") + PolyA.theta(field), PolyA.from_ints(field, [1, 1]))
    for _ in range(100):
        a, b = random_mpoly(rng, field), random_mpoly(rng, field)
        lhs = substitute(a * b, {"t1": value})
        rhs = substitute(a, {"t1": value}) * substitute(b, {"t1": value})
        assert lhs == rhs
        assert substitute(a + b, {"t2": value}) == substitute(a, {"t2": value}) + substitute(b, {"t2": value})


def test_substitute_theta_and_unused_variable():
    field = field_for_q(2)
    theta = PolyA.theta(field)
    f = MPoly.var(field, "t1") * theta + MPoly.constant(field, theta * theta, ("t1",))
    g = substitute(f, {"theta": theta + 1}).to_mpoly()
    assert g == MPoly.var(field, "t1") * (theta + 1) + MPoly.constant(field, theta * theta + 1, ("t1",))
    assert substitute(f, {"z": theta}) == MPolyK(f)


def test_division_by_variable_rejected():
    field = field_for_q(3)
    f = MPolyK(MPoly.var(field, "t1"))
    with pytest.raises(DomainError):
        f / MPoly.var(field, "Y")
    half = f / PolyA.from_ints(field, [0, 1])
    assert half.den == PolyA.theta(field)


def test_fraction_normal_form():
    field = field_for_q(3)
    theta = PolyA.theta(field)
    f = MPolyK(MPoly.var(field, "t1") * (theta * (theta + 1)), (theta + 1).scale(2))
    assert f.is_polynomial()
    assert f.num == MPoly.var(field, "t1") * theta.scale(2)
    assert MPolyK.from_text(field, f.to_text()) == f


def test_reduce_mod():
    field = field_for_q(3)
    ctx = QuotCtx(PolyA.from_ints(field, [1, 0, 1]))
    theta = PolyA.theta(field)
    f = MPolyK(MPoly.var(field, "t1") * (theta * theta), theta)
    assert f.reduce_mod(ctx) == MPoly.var(field, "t1") * theta


def test_symmetric_tables():
    field = field_for_q(2)
    table = {(0, 1): PolyA.one(field), (1, 1): PolyA.theta(field)}
    f = expand_symmetric(field, table, 2)
    assert f.is_symmetric(t_vars(2))
    assert symmetric_table(f, 2) == table
    assert len(sym_keys(3, 1)) == 4


def test_text_round_trip():
    field = field_for_q(4)
    rng = random.Random(1)
    f = random_mpoly(rng, field)
    assert MPoly.from_text(field, f.to_text()) == f


def test_coefficient_and_slices():
    field = field_for_q(2)
    t1, Y = MPoly.var(field, "t1"), MPoly.var(field, "Y")
    f = t1 * Y * Y + t1 + Y
    assert f.coefficient({"Y": 2}) == MPoly.var(field, "t1")
    assert sorted(f.slices("Y")) == [0, 1, 2]
    assert f.degree("Y") == 2
    assert FracK(PolyA.one(field)) == 1
