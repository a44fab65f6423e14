"""
Carlitz 模相关的序列与多项式

[n] = θ^{q^n} − θ，l_n，D_n，b_n(Y)，Carlitz 阶乘 Π_n，F_q-线性多项式 E_i，
基 G_n，初等对称多项式，q 进制数位工具，以及 Bernoulli–Carlitz 数。
"""

import itertools
import logging
import threading
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

import config
from algebra import FiniteField, FracK, PolyA, QuotCtx
from errors import DomainError, IndexOutOfRange, PrecisionExceeded
from mpoly import MPoly, MPolyK, t_vars, var_key

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DigitProfile:
    """n 的 q 进制展开（低位在前）与数位和 ℓ_q(n)"""
    n: int
    q: int
    digits: Tuple[int, ...] = field(default_factory=tuple)

    @property
    def ell(self) -> int:
        return sum(self.digits)


def digit_profile(n: int, q: int) -> DigitProfile:
    if n < 0:
        raise DomainError(f"n = {n} 必须非负")
    digits = []
    k = n
    while k:
        k, r = divmod(k, q)
        digits.append(r)
    return DigitProfile(n=n, q=q, digits=tuple(digits))


def ell_q(n: int, q: int) -> int:
    return digit_profile(n, q).ell


class CarlitzCache:
    """
    每个域一份的只追加记忆表

    所有表项一旦写入不再改变；并发写入同一键时保留先写入的值。
    """

    def __init__(self, field: FiniteField):
        self.field = field
        self._lock = threading.RLock()
        self._tables: Dict[str, Dict] = {}

    def get(self, table: str, key, compute):
        entries = self._tables.get(table)
        if entries is not None and key in entries:
            return entries[key]
        value = compute()
        with self._lock:
            return self._tables.setdefault(table, {}).setdefault(key, value)


_caches: Dict[FiniteField, CarlitzCache] = {}
_caches_lock = threading.Lock()


def get_cache(field: FiniteField) -> CarlitzCache:
    cache = _caches.get(field)
    if cache is None:
        with _caches_lock:
            cache = _caches.setdefault(field, CarlitzCache(field))
    return cache


# ============== 基本序列 ==============

def bracket(field: FiniteField, n: int) -> PolyA:
    """[n] = θ^{q^n} − θ"""
    if n < 0:
        raise DomainError(f"n = {n} 必须非负")
    return PolyA.monomial(field, field.q ** n) - PolyA.theta(field)


def l_seq(field: FiniteField, n: int) -> PolyA:
    """l_0 = 1，l_n = −[n]·l_{n−1}"""
    if n < 0:
        raise DomainError(f"n = {n} 必须非负")

    def compute():
        if n == 0:
            return PolyA.one(field)
        return -(bracket(field, n) * l_seq(field, n - 1))

    return get_cache(field).get("l", n, compute)


def d_seq(field: FiniteField, n: int) -> PolyA:
    """D_0 = 1，D_n = [n]·D_{n−1}^q"""
    if n < 0:
        raise DomainError(f"n = {n} 必须非负")

    def compute():
        if n == 0:
            return PolyA.one(field)
        return bracket(field, n) * d_seq(field, n - 1) ** field.q

    return get_cache(field).get("D", n, compute)


def b_coeffs(field: FiniteField, n: int) -> Tuple[PolyA, ...]:
    """b_n(Y) = (Y−θ)(Y−θ^q)···(Y−θ^{q^{n−1}}) 的 Y-系数（常数项在前）"""
    if n < 0:
        raise DomainError(f"n = {n} 必须非负")

    def compute():
        if n == 0:
            return (PolyA.one(field),)
        prev = b_coeffs(field, n - 1)
        root = -PolyA.monomial(field, field.q ** (n - 1))
        out = [PolyA.zero(field)] * (len(prev) + 1)
        for k, c in enumerate(prev):
            out[k + 1] = out[k + 1] + c
            out[k] = out[k] + c * root
        return tuple(out)

    return get_cache(field).get("b", n, compute)


def b_poly(field: FiniteField, n: int, var: str = "Y") -> MPoly:
    var_key(var)
    return MPoly.univariate(var, b_coeffs(field, n))


def b_eval(field: FiniteField, n: int, x: PolyA) -> PolyA:
    """b_n(x)，x ∈ A"""
    result = PolyA.one(field)
    for i in range(n):
        result = result * (x - PolyA.monomial(field, field.q ** i))
    return result


def carlitz_factorial(field: FiniteField, n: int) -> PolyA:
    """Π_n = ∏ D_i^{n_i}，n_i 为 n 的 q 进制数位"""
    result = PolyA.one(field)
    for i, digit in enumerate(digit_profile(n, field.q).digits):
        if digit:
            result = result * d_seq(field, i) ** digit
    return result


# ============== E_i 与 G_n ==============

def e_coeffs(field: FiniteField, i: int) -> Tuple[PolyA, ...]:
    """D_i·E_i(z) 中 z^{q^j} 的系数 D_i / (D_j·l_{i−j}^{q^j})，j = 0..i"""
    if i < 0:
        raise DomainError(f"i = {i} 必须非负")

    def compute():
        Di = d_seq(field, i)
        return tuple(
            Di.exact_quotient(d_seq(field, j) * l_seq(field, i - j).frobenius(j))
            for j in range(i + 1))

    return get_cache(field).get("E", i, compute)


def e_poly(field: FiniteField, i: int) -> MPolyK:
    """E_i(z) = Σ_j z^{q^j} / (D_j l_{i−j}^{q^j})"""
    q = field.q
    terms = {(q ** j,): c for j, c in enumerate(e_coeffs(field, i))}
    return MPolyK(MPoly(field, ("z",), terms), d_seq(field, i))


def e_product_eval(field: FiniteField, i: int, c: PolyA) -> PolyA:
    """D_i·E_i(c) ∈ A"""
    result = PolyA.zero(field)
    for j, coeff in enumerate(e_coeffs(field, i)):
        result = result + coeff * c.frobenius(j)
    return result


def e_eval(field: FiniteField, i: int, c: PolyA) -> FracK:
    return FracK(e_product_eval(field, i, c), d_seq(field, i))


def g_poly(field: FiniteField, n: int) -> MPolyK:
    """G_n = E_0^{n_0}···E_r^{n_r}"""
    result = MPolyK(MPoly.one(field, ("z",)))
    for i, digit in enumerate(digit_profile(n, field.q).digits):
        if digit:
            result = result * e_poly(field, i) ** digit
    return result


def elem_sym(field: FiniteField, j: int, vars: Sequence[str]) -> MPoly:
    """初等对称多项式 e_j(vars)"""
    vars = tuple(vars)
    if j < 0 or j > len(vars):
        raise IndexOutOfRange(f"e_{j} 需要 0 ≤ j ≤ {len(vars)}")
    terms = {}
    for chosen in itertools.combinations(range(len(vars)), j):
        exps = [0] * len(vars)
        for k in chosen:
            exps[k] = 1
        terms[tuple(exps)] = PolyA.one(field)
    return MPoly(field, vars, terms)


def elem_sym_t(field: FiniteField, j: int, s: int) -> MPoly:
    return elem_sym(field, j, t_vars(s))


# ============== Bernoulli–Carlitz 数 ==============

def _reciprocal_coeffs(field: FiniteField, precision: int) -> List[FracK]:
    """(Σ_i z^{q^i−1}/D_i)^{-1} 的前 precision+1 个系数（长除法）"""
    cache = get_cache(field)
    series = cache.get("bc_series", "g", lambda: [FracK(PolyA.one(field))])
    q = field.q
    with cache._lock:
        while len(series) <= precision:
            n = len(series)
            acc = FracK(PolyA.zero(field))
            i = 1
            while q ** i - 1 <= n:
                acc = acc + series[n - q ** i + 1] / d_seq(field, i)
                i += 1
            series.append(-acc)
        return series[:precision + 1]


def bc_number(field: FiniteField, j: int, precision: int) -> FracK:
    """
    BC_j = Π_j · [z^j] (Σ_i z^{q^i−1}/D_i)^{-1}

    Args:
        j: 下标
        precision: 反演级数的阶数，须 ≥ j

    Raises:
        PrecisionExceeded: j 超出反演阶数或超出 BC_SERIES_BUDGET
    """
    if j > precision:
        raise PrecisionExceeded(f"j = {j} 超过级数阶数 {precision}")
    if precision > config.BC_SERIES_BUDGET:
        raise PrecisionExceeded(f"级数阶数 {precision} 超过上限 {config.BC_SERIES_BUDGET}")
    return _reciprocal_coeffs(field, precision)[j] * carlitz_factorial(field, j)


def bc_number_mod(j: int, ctx: QuotCtx) -> PolyA:
    """BC_j mod P，要求 j < q^{deg P} − 1，使所用 D_i 都与 P 互素"""
    field, q, d = ctx.field, ctx.field.q, ctx.d
    if j >= q ** d - 1:
        raise DomainError(f"j = {j} 必须小于 q^deg(P) − 1 = {q ** d - 1}")
    if j > config.BC_SERIES_BUDGET:
        raise PrecisionExceeded(f"j = {j} 超过上限 {config.BC_SERIES_BUDGET}")
    inv_d = [ctx.inv(d_seq(field, i)) for i in range(d)]
    series = [PolyA.one(field)]
    for n in range(1, j + 1):
        acc = PolyA.zero(field)
        i = 1
        while q ** i - 1 <= n:
            acc = acc + series[n - q ** i + 1] * inv_d[i]
            i += 1
        series.append(-(acc % ctx.P))
    return ctx.mul(series[j], ctx.reduce(carlitz_factorial(field, j)))


# ============== 子空间的线性化多项式 ==============

def subspace_poly(field: FiniteField, basis: Sequence[int]) -> Tuple[PolyA, ...]:
    """
    P_V(x) = ∏_{v∈V} (x − v) 的线性化系数，V = span{θ^u : u ∈ basis}

    返回 (L_0, L_1, …)，P_V(x) = Σ_j L_j x^{q^j}；L_0 = P_V'(x) 为常数。
    V = A(k) 时 P_V = D_k·E_k。
    """
    basis = tuple(sorted(basis))

    def compute():
        if not basis:
            return (PolyA.one(field),)
        prev = subspace_poly(field, basis[:-1])
        w = PolyA.monomial(field, basis[-1])
        pw = linearized_eval(prev, w)
        factor = pw ** (field.q - 1)
        out = [-(factor * prev[0])]
        for j in range(1, len(prev) + 1):
            term = prev[j - 1].frobenius(1)
            if j < len(prev):
                term = term - factor * prev[j]
            out.append(term)
        return tuple(out)

    return get_cache(field).get("subspace", basis, compute)


def linearized_eval(coeffs: Sequence[PolyA], x: PolyA) -> PolyA:
    """Σ_j L_j·x^{q^j}"""
    result = PolyA.zero(x.field)
    for j, c in enumerate(coeffs):
        if c:
            result = result + c * x.frobenius(j)
    return result
