"""
扭幂和与调和和的直接枚举

S_d(n;s) = Σ_{a∈A^+(d)} a(t_1)···a(t_s)/a^n，F_d(n;s) = Σ_{i<d} S_i(n;s)，
Simon 和、Bernoulli–Goss 多项式，以及模 P 的快速路径。

所有结果都是关于 t_1..t_s 对称的多项式，因此只在非降指数向量上累加，
最后再展开到全部排列。
"""

import itertools
import logging
from collections import Counter
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence

from algebra import FiniteField, PolyA, PolyAccumulator, QuotCtx, iter_all, iter_monic
from carlitz import b_coeffs, ell_q, l_seq, linearized_eval, subspace_poly
from errors import DomainError, NotAUnit, RouteMismatch
from mpoly import Exps, MPoly, MPolyK, expand_symmetric, substitute, sym_keys, t_vars

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SumSpec:
    """一次扭幂和计算的参数"""
    field: FiniteField
    n: int
    s: int
    d: int

    def __post_init__(self):
        if self.s < 0 or self.d < 0:
            raise DomainError(f"s = {self.s}, d = {self.d} 必须非负")


@dataclass(frozen=True)
class TailSpec:
    """尾和 Σ_{i=d}^{D} S_i(n;s) 的参数"""
    field: FiniteField
    d: int
    D: int
    s: int
    n: int = 1

    def __post_init__(self):
        if self.d > self.D:
            raise DomainError(f"尾和要求 d ≤ D（d = {self.d}, D = {self.D}）")


def monic_enum(field: FiniteField, d: int) -> Iterator[PolyA]:
    """A^+(d)：常数项变化最快的字典序"""
    return iter_monic(field, d)


# ============== 对称系数累加 ==============

def _key_scalar(field: FiniteField, a: PolyA, key: Exps) -> int:
    """∏_j a_{e_j} ∈ F_q"""
    mul = field.mul
    c = 1
    for e in key:
        c = mul[c][a.coeff(e)]
        if not c:
            return 0
    return c


def _direct_coeffs(field: FiniteField, s: int, degrees: Iterable[int],
                   weight: Callable[[PolyA], PolyA], maxdeg: int,
                   reduce: Optional[Callable[[PolyA], PolyA]] = None) -> Dict[Exps, PolyA]:
    """对每个首一 a 逐个累加 weight(a)·∏ a(t_i) 在非降指数上的系数"""
    keys = sym_keys(s, maxdeg)
    accs = {key: PolyAccumulator(field) for key in keys}
    for i in degrees:
        live = [key for key in keys if not key or key[-1] <= i]
        for a in iter_monic(field, i):
            packed = None
            for key in live:
                c = _key_scalar(field, a, key)
                if c:
                    if packed is None:
                        packed = accs[key].pack(weight(a))
                    accs[key].add(packed, c)
    out = {}
    for key, acc in accs.items():
        v = acc.value()
        if reduce is not None:
            v = reduce(v)
        if v:
            out[key] = v
    return out


def grouped_scaled_coeffs(field: FiniteField, s: int, degrees: Sequence[int], L: PolyA,
                          keys: Optional[Sequence[Exps]] = None) -> Dict[Exps, PolyA]:
    """
    L·Σ_{i∈degrees} S_i(1;s) 在给定非降指数向量上的系数

    对指数向量 e，令 J 为其分量集合。次数为 i 的首一 a 按 J 中（低于 i 的）系数分组，
    组内其余系数跑遍子空间 V，于是 Σ_{v∈V} 1/(c+v) = P_V'/P_V(c)，每组只需一次精确除法。
    L 必须被所有参与求和的 a 整除。
    """
    q = field.q
    maxdeg = max(degrees)
    if keys is None:
        keys = sym_keys(s, maxdeg)
    memo: Dict[tuple, object] = {}
    packer = PolyAccumulator(field)
    out: Dict[Exps, PolyA] = {}
    for key in keys:
        mult = Counter(key)
        acc = PolyAccumulator(field)
        for i in degrees:
            if key and key[-1] > i:
                continue
            low = tuple(u for u in sorted(mult) if u < i)
            free = tuple(u for u in range(i) if u not in mult)
            for values in itertools.product(range(1, q), repeat=len(low)):
                memo_key = (i, low, values)
                packed = memo.get(memo_key)
                if packed is None:
                    lin = subspace_poly(field, free)
                    c = PolyA.monomial(field, i)
                    for u, v in zip(low, values):
                        c = c + PolyA.monomial(field, u, v)
                    w = (L * lin[0]).exact_quotient(linearized_eval(lin, c))
                    packed = memo[memo_key] = packer.pack(w)
                scalar = 1
                for u, v in zip(low, values):
                    scalar = field.mul[scalar][field.power(v, mult[u])]
                acc.add(packed, scalar)
        value = acc.value()
        if value:
            out[key] = value
    return out


def scaled_harmonic_coeffs(field: FiniteField, s: int, d: int,
                           keys: Optional[Sequence[Exps]] = None) -> Dict[Exps, PolyA]:
    """l_{d−1}·F_d(1;s) 在非降指数向量上的系数"""
    return grouped_scaled_coeffs(field, s, range(d), l_seq(field, d - 1), keys)


# ============== 扭幂和 ==============

def power_sum(spec: SumSpec) -> MPolyK:
    """S_d(n;s)；n ≤ 0 时分母为 1"""
    field, n, s, d = spec.field, spec.n, spec.s, spec.d
    if n == 1:
        L = l_seq(field, d)
        return MPolyK(expand_symmetric(field, grouped_scaled_coeffs(field, s, [d], L), s), L)
    if n <= 0:
        table = _direct_coeffs(field, s, [d], lambda a: a ** (-n), d)
        return MPolyK(expand_symmetric(field, table, s))
    L = l_seq(field, d)
    table = _direct_coeffs(field, s, [d], lambda a: (L // a) ** n, d)
    return MPolyK(expand_symmetric(field, table, s), L ** n)


def harmonic_sum(spec: SumSpec) -> MPolyK:
    """F_d(n;s) = Σ_{i<d} S_i(n;s)，公分母 l_{d−1}^n"""
    field, n, s, d = spec.field, spec.n, spec.s, spec.d
    if d < 1:
        raise DomainError("调和和要求 d ≥ 1")
    if n == 1:
        return MPolyK(expand_symmetric(field, scaled_harmonic_coeffs(field, s, d), s),
                      l_seq(field, d - 1))
    if n <= 0:
        table = _direct_coeffs(field, s, range(d), lambda a: a ** (-n), d - 1)
        return MPolyK(expand_symmetric(field, table, s))
    L = l_seq(field, d - 1)
    table = _direct_coeffs(field, s, range(d), lambda a: (L // a) ** n, d - 1)
    return MPolyK(expand_symmetric(field, table, s), L ** n)


def tail_sum(spec: TailSpec) -> MPolyK:
    """Σ_{i=d}^{D} S_i(n;s)"""
    field, s, n = spec.field, spec.s, spec.n
    degrees = range(spec.d, spec.D + 1)
    L = l_seq(field, spec.D)
    if n == 1:
        table = grouped_scaled_coeffs(field, s, degrees, L)
        return MPolyK(expand_symmetric(field, table, s), L)
    if n <= 0:
        return MPolyK(expand_symmetric(
            field, _direct_coeffs(field, s, degrees, lambda a: a ** (-n), spec.D), s))
    table = _direct_coeffs(field, s, degrees, lambda a: (L // a) ** n, spec.D)
    return MPolyK(expand_symmetric(field, table, s), L ** n)


def harmonic_sum_mod(spec: SumSpec, ctx: QuotCtx) -> MPoly:
    """
    F_d(n;s) 在 (A/P)[t] 中的像，d = deg P

    每个 a 只求一次模逆，然后取幂；整个计算不离开 A/P。
    """
    field, n, s, d = spec.field, spec.n, spec.s, spec.d
    if d != ctx.d:
        raise DomainError(f"分量只在 d = deg P = {ctx.d} 处定义（给定 d = {d}）")

    def weight(a: PolyA) -> PolyA:
        if n <= 0:
            return a.pow_mod(-n, ctx.P)
        try:
            return ctx.inv(a).pow_mod(n, ctx.P)
        except NotAUnit:
            raise AssertionError(f"次数低于 deg P 的 {a} 不应被 P 整除") from None

    table = _direct_coeffs(field, s, range(d), weight, d - 1, reduce=lambda v: v % ctx.P)
    return expand_symmetric(field, table, s)


# ============== Simon 和与 Bernoulli–Goss 多项式 ==============

def _power_sum_fq(field: FiniteField, k: int) -> int:
    """Σ_{x∈F_q} x^k：k ≥ 1 且 (q−1) | k 时为 −1，否则为 0"""
    if k >= 1 and k % (field.q - 1) == 0:
        return field.neg[1]
    return 0


def simon_sum(field: FiniteField, j: int, s: int) -> MPoly:
    """
    S_{j,s} = Σ_{a∈A^+(j)} a(t_1)···a(t_s) ∈ F_q[t_1..t_s]

    a 的低位系数相互独立，所以每个单项式的系数是逐位 F_q 幂和的乘积。
    """
    if j < 0 or s < 0:
        raise DomainError("j, s 必须非负")
    table = {}
    one = PolyA.one(field)
    for key in sym_keys(s, j):
        mult = Counter(key)
        c = 1
        for u in range(j):
            c = field.mul[c][_power_sum_fq(field, mult[u])]
            if not c:
                break
        if c:
            table[key] = one.scale(c)
    return expand_symmetric(field, table, s)


def bg_cutoff(q: int, N: int, s: int) -> int:
    """BG(N;s) 中可能非零的最高次数 j"""
    return (s + ell_q(N, q)) // (q - 1)


def bg_term(field: FiniteField, N: int, s: int, j: int,
            reduce: Optional[Callable[[PolyA], PolyA]] = None,
            power: Optional[Callable[[PolyA], PolyA]] = None) -> MPoly:
    """Σ_{a∈A^+(j)} a^N·a(t_1)···a(t_s)"""
    power = power or (lambda a: a ** N)
    table = _direct_coeffs(field, s, [j], power, j, reduce=reduce)
    return expand_symmetric(field, table, s)


def bernoulli_goss(field: FiniteField, N: int, s: int, verify: bool = True) -> MPoly:
    """
    BG(N;s) = Σ_j Σ_{a∈A^+(j)} a^N a(t_1)···a(t_s)

    求和在 j ≤ ⌊(s+ℓ_q(N))/(q−1)⌋ 处截断；verify 时确认第一个被舍去的项为零。
    """
    if N < 0:
        raise DomainError(f"N = {N} 必须非负")
    cutoff = bg_cutoff(field.q, N, s)
    total = MPoly.zero(field, t_vars(s))
    for j in range(cutoff + 1):
        total = total + bg_term(field, N, s, j)
    if verify:
        omitted = bg_term(field, N, s, cutoff + 1)
        if omitted:
            raise RouteMismatch(f"BG({N};{s}) 在 j = {cutoff + 1} 处的项不为零")
    return total


def bernoulli_goss_mod(N: int, s: int, ctx: QuotCtx) -> MPoly:
    """BG(N;s) mod P（a^N 先在 A/P 中约化）"""
    field = ctx.field
    cutoff = bg_cutoff(field.q, N, s)
    total = MPoly.zero(field, t_vars(s))
    for j in range(cutoff + 1):
        total = total + bg_term(field, N, s, j, reduce=lambda v: v % ctx.P,
                                power=lambda a: a.pow_mod(N, ctx.P))
    return total


# ============== 补充的恒等式 ==============

def closed_form_check(field: FiniteField, d: int) -> bool:
    """F_d(1;1) = b_d(t)/((t−θ)·l_{d−1})"""
    numerator = MPoly.univariate("t1", _divide_linear(b_coeffs(field, d)))
    expected = MPolyK(numerator, l_seq(field, d - 1))
    return harmonic_sum(SumSpec(field, 1, 1, d)) == expected


def _divide_linear(coeffs: Sequence[PolyA]) -> List[PolyA]:
    """b_d(t)/(t−θ) 的系数（综合除法）"""
    field = coeffs[0].field
    theta = PolyA.theta(field)
    out = [PolyA.zero(field)] * (len(coeffs) - 1)
    carry = PolyA.zero(field)
    for k in range(len(coeffs) - 1, 0, -1):
        carry = coeffs[k] + carry * theta
        out[k - 1] = carry
    return out


def psi_expansion(field: FiniteField, s: int, d: int, order: int) -> List[MPoly]:
    """
    ψ_{s,d}(z) = Σ_{a∈A(d)} a(t_1)···a(t_s)/(z−a) 按 1/z 展开

    返回 z^{−1}, …, z^{−order} 的系数 Σ_{a∈A(d)} a^i ∏ a(t_j)（i = 0..order−1）。
    """
    out = []
    keys = sym_keys(s, max(d - 1, 0))
    for i in range(order):
        accs = {key: PolyAccumulator(field) for key in keys}
        for a in iter_all(field, d):
            w = a ** i
            for key in keys:
                c = _key_scalar(field, a, key)
                if c:
                    accs[key].add(accs[key].pack(w), c)
        table = {key: acc.value() for key, acc in accs.items()}
        out.append(expand_symmetric(field, {k: v for k, v in table.items() if v}, s))
    return out


def specialize_frobenius(f, s: int, k: int) -> MPolyK:
    """ev：所有 t_i ↦ θ^{q^k}"""
    field = f.field
    value = PolyA.monomial(field, field.q ** k)
    return substitute(f, {name: value for name in t_vars(s)})
