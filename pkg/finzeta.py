"""
有限 zeta 值的分量

Z(n;s) 在素元 P 处的分量是 F_{deg P}(n;s) mod P。本模块计算分量、单位 π̂ 与 ω̂，
逐素元检验非零性、Bernoulli–Goss 同余，并对猜想做有界扫描。
"""

import hashlib
import logging
from dataclasses import asdict, dataclass, field as dc_field
from enum import Enum
from typing import Callable, Dict, Iterable, List, Optional, Tuple

from sympy import isprime

from algebra import FiniteField, PolyA, QuotCtx, enumerate_irreducibles, get_field, primes_up_to
from carlitz import bc_number_mod, ell_q
from errors import DomainError, PreconditionUnmet
from hpoly import HPolynomial, h_interpolate, h_params, h_row
from mpoly import MPoly, t_vars
from sums import SumSpec, bernoulli_goss_mod, harmonic_sum_mod

logger = logging.getLogger(__name__)


# ============== 分量 ==============

@dataclass
class ZetaComponent:
    """F_{deg P}(n;s) mod P"""
    ctx: QuotCtx
    n: int
    s: int
    value: MPoly

    @property
    def is_zero(self) -> bool:
        return self.value.is_zero()

    @property
    def is_unit(self) -> bool:
        """(F_q(t)[θ])/P 是域：非零即单位；与 t 无关时显式求逆确认"""
        if self.is_zero:
            return False
        if self.value.is_constant():
            self.ctx.inv(self.value.constant_value())
        return True

    @property
    def value_hash(self) -> str:
        return hashlib.sha256(self.value.to_text().encode("utf-8")).hexdigest()[:16]


def zeta_component(ctx: QuotCtx, n: int, s: int) -> ZetaComponent:
    if s < 0:
        raise DomainError(f"s = {s} 必须非负")
    value = harmonic_sum_mod(SumSpec(ctx.field, n, s, ctx.d), ctx)
    return ZetaComponent(ctx=ctx, n=n, s=s, value=value)


def pi_hat(ctx: QuotCtx) -> PolyA:
    """π̂ 的分量 −1/P′ mod P"""
    return -ctx.inv(ctx.P.derivative()) % ctx.P


@dataclass
class TFraction:
    """F_q[t] 中的分式 num/den"""
    num: MPoly
    den: MPoly

    @property
    def is_unit(self) -> bool:
        return not self.num.is_zero() and not self.den.is_zero()


def p_of_t(ctx: QuotCtx, var: str = "t1") -> MPoly:
    """P(t)：把 P 的 θ 换成 t"""
    field = ctx.field
    return MPoly.univariate(var, [PolyA.constant(field, c) for c in ctx.P.coeffs])


def omega_hat(ctx: QuotCtx, var: str = "t1") -> TFraction:
    """ω̂(t) 的分量 1/P(t)"""
    return TFraction(num=MPoly.one(ctx.field, (var,)), den=p_of_t(ctx, var))


# ============== 非零性 ==============

def theorem1_check(ctx: QuotCtx, s: int, H: Optional[HPolynomial] = None) -> bool:
    """
    F_d(1;s)·∏_i∏_{j=1}^m (t_i − θ^{q^{d−j}}) ≡ −π̂·∏_i P(t_i)·ℍ_s(θ^{q^{d−m}})  (mod P)

    θ^{q^{d−j}} 实现 θ^{q^{−j}}；s = 1 时 ℍ_1 = 1/(t − θ)，因子换成 (t − θ)。
    两边都在整环 (A/P)[t] 中比较，并要求分量是单位。
    """
    field, d = ctx.field, ctx.d
    m, _ = h_params(field.q, s)
    vars = t_vars(s)
    comp = zeta_component(ctx, 1, s)

    if s == 1:
        h_value = MPoly.one(field, vars)
        roots = [ctx.reduce(PolyA.theta(field))]
    else:
        if s < field.q:
            raise DomainError(f"s = {s} 既不是 1 也不满足 s ≥ q")
        if H is None:
            H = h_interpolate(field, s)
        h_value = H.evaluate_y_mod(ctx, ctx.frobenius_inverse(m)).extend(vars)
        roots = [ctx.frobenius_inverse(j) for j in range(1, m + 1)]

    lhs = comp.value.extend(vars)
    rhs = h_value * (-pi_hat(ctx))
    for v in vars:
        t = MPoly.var(field, v).extend(vars)
        for root in roots:
            lhs = lhs * (t - root)
        rhs = rhs * p_of_t(ctx, v).extend(vars)
    ok = lhs.reduce_mod(ctx) == rhs.reduce_mod(ctx)
    unit = comp.is_unit
    if not ok or not unit:
        logger.warning(f"P = {ctx.label}, s = {s}: 恒等式 {ok}, 单位 {unit}")
    return ok and unit


def psi_poly(field: FiniteField, d: int) -> PolyA:
    """Ψ_d = (θ^{q^d} − θ)/(θ^q − θ)"""
    theta = PolyA.theta(field)
    return (PolyA.monomial(field, field.q ** d) - theta).exact_quotient(
        PolyA.monomial(field, field.q) - theta)


@dataclass
class PsiReport:
    s: int
    d: int
    factorization: Optional[bool]
    nonvanishing: bool
    theta_degree: int
    expected_degree: int
    degree_ok: bool

    @property
    def passed(self) -> bool:
        return self.factorization is not False and self.nonvanishing

    def to_dict(self) -> Dict:
        return dict(asdict(self), passed=self.passed)


def psi_nonvanish_check(field: FiniteField, s: int, d: int) -> PsiReport:
    """
    (i) d 为素数时 Ψ_d 等于全部 d 次首一不可约多项式之积
    (ii) H_{s,d} mod Ψ_d ≠ 0
    (iii) deg_θ H_{s,d} = μq^{d−m} + m − 1 < q^d − q
    """
    q = field.q
    m, mu = h_params(q, s)
    psi = psi_poly(field, d)
    factorization = None
    if isprime(d):
        product = PolyA.one(field)
        for P in enumerate_irreducibles(field, d):
            product = product * P
        factorization = product == psi
    row = h_row(field, s, d)
    nonvanishing = any(c % psi for c in row.table.values())
    expected = mu * q ** (d - m) + m - 1
    report = PsiReport(
        s=s, d=d, factorization=factorization, nonvanishing=nonvanishing,
        theta_degree=row.theta_degree, expected_degree=expected,
        degree_ok=row.theta_degree == expected and 0 <= expected < q ** d - q,
    )
    logger.debug(f"Ψ_{d} 检查 s={s}: {report}")
    return report


# ============== Bernoulli–Goss 同余 ==============

def prop1_check(ctx: QuotCtx, n: int, s: int) -> bool:
    """
    ℓ_q(n) > s 时 F_d(n;s) ≡ BG(q^d − 1 − n; s) (mod P)，n ≡ s (mod q−1) 时两边为零

    例外：s = 0 且 n = q^d − 1 时 BG(0;0) = 1，只检查同余。

    Raises:
        PreconditionUnmet: ℓ_q(n) ≤ s 或 q^d ≤ n
    """
    q, d = ctx.field.q, ctx.d
    if n < 0 or ell_q(n, q) <= s:
        raise PreconditionUnmet(f"需要 ℓ_q({n}) > s = {s}")
    if q ** d <= n:
        raise PreconditionUnmet(f"需要 q^deg(P) = {q ** d} > n = {n}")
    lhs = zeta_component(ctx, n, s).value
    rhs = bernoulli_goss_mod(q ** d - 1 - n, s, ctx).extend(lhs.vars)
    ok = lhs == rhs
    if (n - s) % (q - 1) == 0 and not is_bg_exception(q, d, n, s):
        ok = ok and lhs.is_zero()
    return ok


def is_bg_exception(q: int, d: int, n: int, s: int) -> bool:
    """N = q^d − 1 − n = 0 且 s = 0：BG(0;0) = 1，消失性不成立"""
    return s == 0 and n == q ** d - 1


# ============== Bernoulli–Carlitz 单位 ==============

def bc_unit_check(ctx: QuotCtx, s: int) -> bool:
    """BC_{q^d − s} mod P ≠ 0"""
    q, d = ctx.field.q, ctx.d
    h_params(q, s)
    if s <= 1:
        raise DomainError(f"s = {s} 必须大于 1")
    j = q ** d - s
    if j < 0:
        raise DomainError(f"q^deg(P) − s = {j} 为负")
    if j == 0:
        return True
    return bool(bc_number_mod(j, ctx))


# ============== 扫描 ==============

class Clause(Enum):
    """扫描单元检验的陈述"""
    NONCONGRUENT = "noncongruent"          # n ≢ s：应为非零
    VANISH = "vanish"                      # n ≡ s 且 ℓ_q(n) > s 且 q^d > n：应为零
    VANISH_UNBOUNDED = "vanish-unbounded"  # n ≡ s 且 ℓ_q(n) > s 但 q^d ≤ n：不作要求
    VANISH_EXCEPTION = "vanish-exception"  # s = 0 且 n = q^d − 1：应与 BG(0;0) = 1 同余
    NONVANISH = "nonvanish"                # n ≡ s 且 ℓ_q(n) ≤ s：猜想为非零


class Status(Enum):
    OK = "ok"
    HARD = "hard"
    SOFT = "soft"


def classify(q: int, d: int, n: int, s: int) -> Clause:
    if (n - s) % (q - 1):
        return Clause.NONCONGRUENT
    if ell_q(n, q) > s:
        if q ** d <= n:
            return Clause.VANISH_UNBOUNDED
        return Clause.VANISH_EXCEPTION if is_bg_exception(q, d, n, s) else Clause.VANISH
    return Clause.NONVANISH


def judge(clause: Clause, zero: bool, n: int, s: int) -> Status:
    """
    已证明区域的反例为 HARD，猜想区域的零为 SOFT

    n ≢ s 且 n, s > 0 时非零性是定理；s = 0 的同一区域只作为证据。
    """
    if clause is Clause.NONCONGRUENT and zero:
        return Status.HARD if n > 0 and s > 0 else Status.SOFT
    if clause is Clause.VANISH and not zero:
        return Status.HARD
    if clause is Clause.NONVANISH and zero:
        return Status.SOFT
    return Status.OK


@dataclass
class ScanCell:
    """一个 (P, n, s) 单元；字段顺序即序列化顺序"""
    q: int
    f: str
    P: str
    n: int
    s: int
    verdict: str
    clause: str
    value_hash: str
    status: str = Status.OK.value
    value: str = ""

    def sort_key(self):
        return (len(self.P), self.P, self.s, self.n, self.clause)

    def to_dict(self) -> Dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict) -> "ScanCell":
        return cls(**data)


@dataclass
class ScanReport:
    kind: str
    grid: Dict = dc_field(default_factory=dict)
    cells: List[ScanCell] = dc_field(default_factory=list)

    @property
    def hard(self) -> List[ScanCell]:
        return [c for c in self.cells if c.status == Status.HARD.value]

    @property
    def findings(self) -> List[ScanCell]:
        return [c for c in self.cells if c.status == Status.SOFT.value]

    def summary(self) -> Dict:
        counts: Dict[str, Dict[str, int]] = {}
        for cell in self.cells:
            per = counts.setdefault(cell.clause, {})
            per[cell.verdict] = per.get(cell.verdict, 0) + 1
        return {
            "cells": len(self.cells),
            "primes": len({c.P for c in self.cells}),
            "hard": len(self.hard),
            "findings": len(self.findings),
            "by_clause": {k: counts[k] for k in sorted(counts)},
        }

    def to_dict(self) -> Dict:
        return {
            "kind": self.kind,
            "grid": self.grid,
            "summary": self.summary(),
            "cells": [c.to_dict() for c in self.cells],
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "ScanReport":
        return cls(kind=data["kind"], grid=dict(data.get("grid", {})),
                   cells=[ScanCell.from_dict(c) for c in data.get("cells", [])])


Mapper = Callable[[Callable, Iterable], Iterable]


def _ctx_from_key(field_key: Tuple, P_coeffs: Tuple[int, ...]) -> QuotCtx:
    p, e, modulus = field_key
    field = get_field(p, e, modulus)
    return QuotCtx(PolyA(field, P_coeffs))


def _field_label(field: FiniteField) -> str:
    return field.label


def scan_cell(item: Tuple) -> ScanCell:
    """单个猜想单元；参数只含可序列化的整数，便于进程池分发"""
    field_key, P_coeffs, n, s = item
    ctx = _ctx_from_key(field_key, P_coeffs)
    field, q = ctx.field, ctx.field.q
    comp = zeta_component(ctx, n, s)
    clause = classify(q, ctx.d, n, s)
    if clause is Clause.VANISH_EXCEPTION:
        congruent = comp.value == bernoulli_goss_mod(0, 0, ctx).extend(comp.value.vars)
        status = Status.OK if congruent else Status.HARD
    else:
        status = judge(clause, comp.is_zero, n, s)
    return ScanCell(
        q=q, f=_field_label(field), P=ctx.label, n=n, s=s,
        verdict="zero" if comp.is_zero else "nonzero",
        clause=clause.value, value_hash=comp.value_hash, status=status.value,
        value=comp.value.to_text() if status is not Status.OK else "",
    )


def _primes(field: FiniteField, maxdeg: int) -> List[PolyA]:
    return primes_up_to(field, maxdeg)


def _collect(kind: str, grid: Dict, cells: Iterable[ScanCell]) -> ScanReport:
    report = ScanReport(kind=kind, grid=grid, cells=sorted(cells, key=ScanCell.sort_key))
    if report.hard:
        logger.warning(f"{kind}: {len(report.hard)} 个已证明陈述的反例")
    if report.findings:
        logger.warning(f"{kind}: {len(report.findings)} 个猜想区域的异常，需要人工复核")
    return report


def conjecture_scan(field: FiniteField, maxdeg: int, n_max: int, s_max: int,
                    mapper: Mapper = map) -> ScanReport:
    """1 ≤ n ≤ n_max，0 ≤ s ≤ s_max，deg P ≤ maxdeg 的全部单元"""
    items = [(field.key, P.coeffs, n, s)
             for P in _primes(field, maxdeg)
             for s in range(s_max + 1)
             for n in range(1, n_max + 1)]
    grid = {"q": field.q, "maxdeg": maxdeg, "n_max": n_max, "s_max": s_max}
    return _collect("conjecture", grid, mapper(scan_cell, items))


def _check_cell(ctx: QuotCtx, n: int, s: int, ok: bool, clause: str,
                value: Optional[MPoly] = None) -> ScanCell:
    text = value.to_text() if value is not None else ""
    return ScanCell(
        q=ctx.field.q, f=_field_label(ctx.field), P=ctx.label, n=n, s=s,
        verdict="pass" if ok else "fail", clause=clause,
        value_hash=hashlib.sha256(text.encode("utf-8")).hexdigest()[:16],
        status=Status.OK.value if ok else Status.HARD.value,
        value="" if ok else text,
    )


def theorem1_cell(item: Tuple) -> ScanCell:
    field_key, P_coeffs, s, H = item
    ctx = _ctx_from_key(field_key, P_coeffs)
    ok = theorem1_check(ctx, s, H)
    value = None if ok else zeta_component(ctx, 1, s).value
    return _check_cell(ctx, 1, s, ok, "nonvanishing-n1", value)


def theorem1_scan(field: FiniteField, s: int, maxdeg: int, H: Optional[HPolynomial] = None,
                  mapper: Mapper = map) -> ScanReport:
    if s != 1 and H is None:
        H = h_interpolate(field, s)
    items = [(field.key, P.coeffs, s, H) for P in _primes(field, maxdeg)]
    grid = {"q": field.q, "s": s, "maxdeg": maxdeg}
    return _collect("theorem1", grid, mapper(theorem1_cell, items))


def prop1_cell(item: Tuple) -> ScanCell:
    field_key, P_coeffs, n, s = item
    ctx = _ctx_from_key(field_key, P_coeffs)
    return _check_cell(ctx, n, s, prop1_check(ctx, n, s), "bg-congruence")


def prop1_scan(field: FiniteField, maxdeg: int, s_max: int, n_max: Optional[int] = None,
               mapper: Mapper = map) -> ScanReport:
    """满足 ℓ_q(n) > s 且 n < q^deg P 的全部 (P, n, s)"""
    q = field.q
    items = []
    for P in _primes(field, maxdeg):
        top = q ** P.degree - 1 if n_max is None else min(n_max, q ** P.degree - 1)
        for s in range(s_max + 1):
            items.extend((field.key, P.coeffs, n, s)
                         for n in range(top + 1) if ell_q(n, q) > s)
    grid = {"q": q, "maxdeg": maxdeg, "s_max": s_max, "n_max": n_max}
    return _collect("prop1", grid, mapper(prop1_cell, items))


def bc_unit_cell(item: Tuple) -> ScanCell:
    field_key, P_coeffs, s = item
    ctx = _ctx_from_key(field_key, P_coeffs)
    return _check_cell(ctx, ctx.field.q ** ctx.d - s, s, bc_unit_check(ctx, s), "bc-unit")


def bc_unit_scan(field: FiniteField, s: int, maxdeg: int, mapper: Mapper = map) -> ScanReport:
    """q^deg P ≥ s 的全部素元"""
    items = [(field.key, P.coeffs, s) for P in _primes(field, maxdeg)
             if field.q ** P.degree >= s]
    grid = {"q": field.q, "s": s, "maxdeg": maxdeg}
    return _collect("bc-units", grid, mapper(bc_unit_cell, items))
