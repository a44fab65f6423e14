import pytest

from algebra import PolyA, QuotCtx, field_for_q, primes_up_to
from errors import DomainError, PreconditionUnmet
from finzeta import (Clause, ScanReport, Status, bc_unit_check, bc_unit_scan, classify,
                     conjecture_scan, judge, omega_hat, pi_hat, prop1_check, prop1_scan,
                     psi_nonvanish_check, psi_poly, theorem1_check, theorem1_scan, zeta_component)
from hpoly import h_interpolate
from mpoly import MPoly


@pytest.fixture
def ctx3():
    return QuotCtx(PolyA.from_ints(field_for_q(3), [1, 0, 1]))  # θ^2 + 1


def test_worked_instance(ctx3):
    field = ctx3.field
    theta = PolyA.theta(field)
    assert pi_hat(ctx3) == theta.scale(2)
    comp = zeta_component(ctx3, 1, 1)
    expected = MPoly.var(field, "t1") * theta + MPoly.constant(field, 2, ("t1",))
    assert comp.value == expected
    assert comp.is_unit
    assert len(comp.value_hash) == 16
    assert omega_hat(ctx3).is_unit
    with pytest.raises(DomainError):
        zeta_component(ctx3, 1, -1)


@pytest.mark.parametrize("q,s,maxdeg", [(2, 1, 3), (2, 2, 3), (2, 3, 3), (3, 1, 2), (3, 3, 2), (3, 5, 2)])
def test_nonvanishing_identity(q, s, maxdeg):
    field = field_for_q(q)
    H = None if s == 1 else h_interpolate(field, s)
    for P in primes_up_to(field, maxdeg):
        assert theorem1_check(QuotCtx(P), s, H)


def test_nonvanishing_rejects_small_s(ctx3):
    with pytest.raises(DomainError):
        theorem1_check(ctx3, 2)


def test_bg_congruence():
    field = field_for_q(2)
    ctx = QuotCtx(PolyA.from_ints(field, [1, 1, 1]))
    assert prop1_check(ctx, 3, 1)
    assert prop1_check(ctx, 3, 0)
    with pytest.raises(PreconditionUnmet):
        prop1_check(ctx, 1, 1)
    with pytest.raises(PreconditionUnmet):
        prop1_check(ctx, 4, 0)


def test_bg_congruence_noncongruent_q3(ctx3):
    # ℓ_3(4) = 2 > 1，4 ≢ 1 (mod 2)
    assert prop1_check(ctx3, 4, 1)
    # ℓ_3(8) = 4 > 2，8 ≡ 2 (mod 2)，两边为零
    assert prop1_check(ctx3, 8, 2)
    assert zeta_component(ctx3, 8, 2).is_zero


def test_bc_units(ctx3):
    assert bc_unit_check(ctx3, 3)
    with pytest.raises(DomainError):
        bc_unit_check(ctx3, 1)
    with pytest.raises(DomainError):
        bc_unit_check(ctx3, 4)
    with pytest.raises(DomainError):
        bc_unit_check(ctx3, 11)


def test_psi_polynomial():
    field = field_for_q(2)
    assert psi_poly(field, 2) == PolyA.from_ints(field, [1, 1, 1])
    report = psi_nonvanish_check(field, 3, 3)
    assert report.factorization
    assert report.expected_degree == 1 * 2 ** 1 + 1
    assert psi_nonvanish_check(field_for_q(3), 5, 4).factorization is None
    assert report.to_dict()["passed"] == report.passed


@pytest.mark.parametrize("q,d,n,s,clause", [
    (3, 2, 2, 1, Clause.NONCONGRUENT),
    (3, 2, 8, 2, Clause.VANISH),
    (3, 1, 8, 2, Clause.VANISH_UNBOUNDED),
    (3, 2, 3, 1, Clause.NONVANISH),
    (2, 3, 7, 2, Clause.VANISH),
    (3, 2, 4, 0, Clause.VANISH),
    (3, 1, 2, 0, Clause.VANISH_EXCEPTION),
    (2, 2, 3, 0, Clause.VANISH_EXCEPTION),
])
def test_classify(q, d, n, s, clause):
    assert classify(q, d, n, s) is clause


def test_judge():
    assert judge(Clause.NONCONGRUENT, True, 2, 1) is Status.HARD
    assert judge(Clause.NONCONGRUENT, True, 2, 0) is Status.SOFT
    assert judge(Clause.NONCONGRUENT, False, 2, 1) is Status.OK
    assert judge(Clause.VANISH, False, 4, 2) is Status.HARD
    assert judge(Clause.VANISH, True, 4, 2) is Status.OK
    assert judge(Clause.VANISH_UNBOUNDED, False, 4, 2) is Status.OK
    assert judge(Clause.NONVANISH, True, 3, 1) is Status.SOFT
    assert judge(Clause.NONVANISH, False, 3, 1) is Status.OK


def test_conjecture_scan_is_deterministic():
    field = field_for_q(3)
    first = conjecture_scan(field, 2, 8, 2)
    second = conjecture_scan(field, 2, 8, 2)
    assert first.to_dict() == second.to_dict()
    assert not first.hard
    assert first.summary()["cells"] == 8 * 3 * len(primes_up_to(field, 2))
    assert ScanReport.from_dict(first.to_dict()).to_dict() == first.to_dict()


def test_scans_have_no_counterexamples():
    f2 = field_for_q(2)
    assert not theorem1_scan(f2, 3, 3).hard
    assert not prop1_scan(f2, 3, 2).hard
    report = bc_unit_scan(f2, 3, 3)
    assert not report.hard
    # 一次素元 q^1 < s，不参与
    assert len(report.cells) == 3
    assert report.summary()["by_clause"] == {"bc-unit": {"pass": 3}}
    assert prop1_scan(f2, 2, 1).summary()["cells"] > 0


def test_bg_exception_cell():
    # s = 0，n = q^d − 1：F_1(2;0) ≡ BG(0;0) = 1 (mod θ)
    field = field_for_q(3)
    ctx = QuotCtx(PolyA.theta(field))
    assert not zeta_component(ctx, 2, 0).is_zero
    assert prop1_check(ctx, 2, 0)

    report = conjecture_scan(field, 1, 2, 0)
    assert not report.hard
    cells = [c for c in report.cells if c.clause == Clause.VANISH_EXCEPTION.value]
    assert len(cells) == 3
    assert all(c.verdict == "nonzero" and c.status == Status.OK.value for c in cells)
    assert report.summary()["by_clause"]["vanish-exception"] == {"nonzero": 3}
