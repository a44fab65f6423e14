"""
插值多项式 ℍ_s

对 s ≡ 1 (mod q−1)、s ≥ q，令 m = (s−1)/(q−1)、μ = (q^m−1)/(q−1) − m。
ℍ_s ∈ A[Y, t_1..t_s] 由恒等式
    l_{d−1}·F_d(1;s) = H_{s,d}·∏ b_{d−m}(t_i)，H_{s,d} = ℍ_s|_{Y=θ^{q^{d−m}}}（d ≥ m）
唯一确定。这里给出两条独立的构造路线：

  * 插值路线：取 d = m..m+μ 的 H_{s,d}，在结点 θ^{q^j} 上做 Lagrange 插值，
    再用额外的 d 值核对；
  * 万有关系路线：由 E 乘积在 G 基下的展开系数 c_{j,i}(Y) 直接拼出 ℍ_s。

两条路线必须给出同一个多项式。ℍ_s 关于 t 对称，内部只按非降指数向量存储。
"""

import itertools
import logging
import math
from dataclasses import dataclass, field as dc_field
from enum import Enum
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import config
from algebra import FiniteField, FracK, PolyA, QuotCtx, iter_all
from carlitz import b_coeffs, b_poly, d_seq, e_coeffs, e_poly, elem_sym_t, g_poly, get_cache, l_seq
from errors import (
    DomainError, IndexOutOfRange, NonExactDivision, NonIntegralResult, RouteMismatch,
)
from mpoly import (
    Exps, MPoly, MPolyK, exact_div, expand_symmetric, product_of_univariates,
    substitute, sym_keys, t_vars,
)
from sums import SumSpec, harmonic_sum, scaled_harmonic_coeffs

logger = logging.getLogger(__name__)

YCoeffs = Tuple[PolyA, ...]


class HRoute(Enum):
    """ℍ_s 的构造路线"""
    VANDERMONDE = "vandermonde"
    UNIVERSAL = "universal"
    SPECIAL = "special"


def h_params(q: int, s: int) -> Tuple[int, int]:
    """返回 (m, μ)"""
    if s < 1 or (s - 1) % (q - 1):
        raise DomainError(f"s = {s} 必须满足 s ≥ 1 且 s ≡ 1 (mod {q - 1})")
    m = (s - 1) // (q - 1)
    mu = (q ** m - 1) // (q - 1) - m
    return m, mu


def _require_polynomial_case(q: int, s: int) -> Tuple[int, int]:
    m, mu = h_params(q, s)
    if s < q:
        raise DomainError(f"s = {s} < q = {q}：ℍ_s 只在 s ≥ q 时是多项式")
    return m, mu


def _floor_log(q: int, s: int) -> int:
    k = 0
    while q ** (k + 1) <= s:
        k += 1
    return k


def _y_var(field: FiniteField, power: int = 1) -> MPoly:
    return MPoly.var(field, "Y", power)


def _strip(coeffs: Sequence[PolyA]) -> YCoeffs:
    c = list(coeffs)
    while c and not c[-1]:
        c.pop()
    return tuple(c)


def _eval_y(coeffs: Sequence[PolyA], y: PolyA) -> PolyA:
    """Horner：Σ c_k y^k"""
    result = PolyA.zero(y.field)
    for c in reversed(coeffs):
        result = result * y + c
    return result


# ============== 数据类型 ==============

@dataclass
class HPolynomial:
    """
    ℍ_s 的对称存储

    Attributes:
        table: 非降 t-指数向量 -> Y 的系数元组（常数项在前）
        route: 构造路线；s = 1 时为 SPECIAL，表为空，ℍ_1 = 1/(t_1 − θ)
    """
    field: FiniteField
    s: int
    m: int
    mu: int
    table: Dict[Exps, YCoeffs] = dc_field(default_factory=dict)
    route: HRoute = HRoute.VANDERMONDE

    def __post_init__(self):
        clean = {}
        for key, coeffs in self.table.items():
            coeffs = _strip(coeffs)
            if coeffs:
                clean[tuple(key)] = coeffs
        self.table = clean

    @property
    def is_special(self) -> bool:
        return self.s == 1

    def _require_polynomial(self):
        if self.is_special:
            raise DomainError("ℍ_1 = 1/(t_1 − θ) 不是多项式")

    def __eq__(self, other):
        if not isinstance(other, HPolynomial):
            return NotImplemented
        return (self.field == other.field and self.s == other.s
                and self.table == other.table)

    @property
    def y_degree(self) -> int:
        self._require_polynomial()
        return max((len(c) - 1 for c in self.table.values()), default=-1)

    @property
    def t_degree(self) -> int:
        self._require_polynomial()
        return max((key[-1] for key in self.table if key), default=0)

    @property
    def theta_degree(self) -> int:
        self._require_polynomial()
        return max((c.degree for coeffs in self.table.values() for c in coeffs if c), default=-1)

    def corner(self) -> YCoeffs:
        """t_1^{m−1}···t_s^{m−1} 的系数（应为常数 1）"""
        self._require_polynomial()
        return self.table.get((self.m - 1,) * self.s, ())

    def y_slice_table(self, r: int) -> Dict[Exps, PolyA]:
        return {key: coeffs[r] for key, coeffs in self.table.items()
                if r < len(coeffs) and coeffs[r]}

    def y_coefficient(self, r: int) -> MPoly:
        """Y^r 的系数 𝔻_r ∈ A[t]"""
        self._require_polynomial()
        return expand_symmetric(self.field, self.y_slice_table(r), self.s)

    def evaluate_table(self, y: PolyA) -> Dict[Exps, PolyA]:
        self._require_polynomial()
        out = {}
        for key, coeffs in self.table.items():
            v = _eval_y(coeffs, y)
            if v:
                out[key] = v
        return out

    def evaluate_y(self, y: PolyA) -> MPoly:
        """ℍ_s|_{Y=y} ∈ A[t]"""
        return expand_symmetric(self.field, self.evaluate_table(y), self.s)

    def evaluate_y_mod(self, ctx: QuotCtx, y: PolyA) -> MPoly:
        """ℍ_s|_{Y=y} 在 (A/P)[t] 中的像"""
        self._require_polynomial()
        y = ctx.reduce(y)
        out = {}
        for key, coeffs in self.table.items():
            v = PolyA.zero(self.field)
            for c in reversed(coeffs):
                v = (v * y + c) % ctx.P
            if v:
                out[key] = v
        return expand_symmetric(self.field, out, self.s)

    def poly(self) -> MPoly:
        """ℍ_s ∈ A[t_1..t_s, Y]"""
        self._require_polynomial()
        result = MPoly.zero(self.field, t_vars(self.s) + ("Y",))
        for r in range(self.y_degree + 1):
            sl = self.y_coefficient(r)
            if sl:
                result = result + sl * _y_var(self.field, r)
        return result

    def degree_summary(self) -> Dict[str, int]:
        return {
            "s": self.s,
            "m": self.m,
            "mu": self.mu,
            "y_degree": self.y_degree,
            "t_degree": self.t_degree,
            "theta_degree": self.theta_degree,
            "terms": sum(len(c) for c in self.table.values()),
        }


@dataclass
class HTableRow:
    """H_{s,d} = l_{d−1}F_d(1;s)/∏b_{d−m}(t_i) 的对称表"""
    d: int
    s: int
    table: Dict[Exps, PolyA]
    theta_degree: int
    verified: str = "full"

    def poly(self, field: FiniteField) -> MPoly:
        return expand_symmetric(field, self.table, self.s)


def special_h(field: FiniteField) -> HPolynomial:
    return HPolynomial(field, 1, 0, 0, {}, HRoute.SPECIAL)


# ============== 万有关系 ==============

def _first_run(j: Exps, q: int) -> Optional[int]:
    """第一个长度为 q 的相等段的起点"""
    for k in range(len(j) - q + 1):
        if j[k] == j[k + q - 1]:
            return k
    return None


def univ_coeffs(field: FiniteField, j: Sequence[int]) -> Dict[int, MPoly]:
    """
    c_{j,i}(Y)：E_{n+j_1}···E_{n+j_r} = Σ_i c_{j,i}(θ^{q^n})·G_{i q^n}

    在排序后的 j 中从左到右找第一个 q 连段 (v,…,v)，利用 E_v^q = E_v + [v+1]E_{v+1}
    把它拆成 j_1（保留一个 v）和 j_2（换成 v+1）。
    """
    j = tuple(sorted(j))
    q = field.q

    def compute():
        k = _first_run(j, q)
        if k is None:
            return {sum(q ** x for x in j): MPoly.one(field, ("Y",))}
        v = j[k]
        j1 = j[:k] + (v,) + j[k + q:]
        j2 = tuple(sorted(j[:k] + (v + 1,) + j[k + q:]))
        factor = _y_var(field, q ** (v + 1)) - PolyA.theta(field)
        out = dict(univ_coeffs(field, j1))
        for n, c in univ_coeffs(field, j2).items():
            term = factor * c
            out[n] = out[n] + term if n in out else term
        return {n: c for n, c in out.items() if c}

    return get_cache(field).get("univ", j, compute)


def univ_identity_check(field: FiniteField, j: Sequence[int], n: int) -> bool:
    """按 z 的多项式展开两边，核对 E 乘积的 G 展开"""
    q = field.q
    lhs = MPolyK(MPoly.one(field, ("z",)))
    for x in j:
        lhs = lhs * e_poly(field, n + x)
    y = PolyA.monomial(field, q ** n)
    rhs = MPolyK(MPoly.zero(field, ("z",)))
    for i, c in univ_coeffs(field, j).items():
        rhs = rhs + substitute(c, {"Y": y}) * g_poly(field, i * q ** n)
    return lhs == rhs


# ============== H_{s,d} ==============

def pi_factor(field: FiniteField, s: int, d: int) -> MPolyK:
    """Π_{s,d} = ∏ b_{d−m}(t_i) / l_{d−1}"""
    m, _ = h_params(field.q, s)
    if d < max(1, m):
        raise DomainError(f"Π_{{s,d}} 要求 d ≥ max(1, m)（d = {d}, m = {m}）")
    num = product_of_univariates(b_poly(field, d - m, name) for name in t_vars(s))
    return MPolyK(num, l_seq(field, d - 1))


def _expand_key(field: FiniteField, table: Dict[Exps, PolyA], f: Exps,
                beta: Sequence[PolyA], m: int) -> PolyA:
    """H·∏ b_K(t_i) 在有序指数 f 处的系数"""
    K = len(beta) - 1
    ranges = [range(max(0, fi - K), min(fi, m - 1) + 1) for fi in f]
    total = PolyA.zero(field)
    for g in itertools.product(*ranges):
        h = table.get(tuple(sorted(g)))
        if h is None:
            continue
        term = h
        for fi, gi in zip(f, g):
            term = term * beta[fi - gi]
        total = total + term
    return total


def check_row_degree(q: int, s: int, d: int, theta_degree: int):
    """deg_θ H_{s,d} 必须等于 δ_{s,d} = m − 1 + μq^{d−m}"""
    m, mu = h_params(q, s)
    expected = m - 1 + mu * q ** (d - m)
    if theta_degree != expected:
        raise NonExactDivision(f"H_{{{s},{d}}} 的 θ-次数为 {theta_degree}，预期 {expected}")


def h_row(field: FiniteField, s: int, d: int, verify: bool = True) -> HTableRow:
    """
    H_{s,d}：l_{d−1}·F_d(1;s) 被 ∏ b_{d−m}(t_i) 精确除

    先由 t-指数在 [d−m, d−1] 内的系数解出单位上三角方程组得到 H，再把 H·∏b
    与其余系数逐一比较（规模允许时比较全部，否则只比较下方一条带）。

    Raises:
        NonExactDivision: 乘回去与 l_{d−1}F_d 不符，或 θ-次数不等于 δ_{s,d}
    """
    m, mu = _require_polynomial_case(field.q, s)
    if d < m:
        raise DomainError(f"h_row 要求 d ≥ m = {m}（d = {d}）")
    K = d - m
    beta = b_coeffs(field, K)
    box = sym_keys(s, m - 1)
    needed = [tuple(K + g for g in key) for key in box]

    full = math.comb(d + s - 1, s) * m ** s <= config.HROW_FULL_VERIFY_LIMIT
    if not verify:
        check_keys: List[Exps] = []
    elif full:
        check_keys = sym_keys(s, d - 1)
    else:
        check_keys = list(itertools.combinations_with_replacement(range(max(K - 1, 0), d), s))
    keys = sorted(set(needed) | set(check_keys))
    known = scaled_harmonic_coeffs(field, s, d, keys)

    zero = PolyA.zero(field)
    table: Dict[Exps, PolyA] = {}
    for key in sorted(box, key=sum, reverse=True):
        value = known.get(tuple(K + g for g in key), zero)
        for f in itertools.product(*(range(g, m) for g in key)):
            if f == key:
                continue
            hf = table.get(tuple(sorted(f)))
            if hf is None or any(fi - gi > K for fi, gi in zip(f, key)):
                continue
            term = hf
            for fi, gi in zip(f, key):
                term = term * beta[K + gi - fi]
            value = value - term
        if value:
            table[key] = value

    for f in check_keys:
        if _expand_key(field, table, f, beta, m) != known.get(f, zero):
            raise NonExactDivision(
                f"l_{d - 1}·F_{d}(1;{s}) 在指数 {f} 处不被 ∏b_{K}(t_i) 整除")

    theta_degree = max((c.degree for c in table.values()), default=-1)
    check_row_degree(field.q, s, d, theta_degree)
    logger.debug(f"h_row(s={s}, d={d}): {len(table)} 个对称项，θ-次数 {theta_degree}")
    return HTableRow(d=d, s=s, table=table, theta_degree=theta_degree,
                     verified="full" if full else ("band" if verify else "none"))


# ============== 插值路线 ==============

def interpolation_degrees(q: int, s: int) -> Tuple[List[int], List[int]]:
    """(结点 d = m..m+μ, 留出核对的 d)"""
    m, mu = _require_polynomial_case(q, s)
    nodes = list(range(m, m + mu + 1))
    holdouts = list(range(m + mu + 1, m + mu + 1 + config.HOLDOUT_ROWS))
    return nodes, holdouts


def _lagrange_basis(ys: Sequence[PolyA]) -> List[List[FracK]]:
    """basis[j][k]：第 j 个 Lagrange 基多项式的 Y^k 系数"""
    field = ys[0].field
    out = []
    for j, yj in enumerate(ys):
        num = [PolyA.one(field)]
        den = PolyA.one(field)
        for k, yk in enumerate(ys):
            if k == j:
                continue
            nxt = [PolyA.zero(field)] * (len(num) + 1)
            for i, c in enumerate(num):
                nxt[i + 1] = nxt[i + 1] + c
                nxt[i] = nxt[i] - c * yk
            num = nxt
            den = den * (yj - yk)
        out.append([FracK(c, den) for c in num])
    return out


def _check_shape(H: HPolynomial):
    if H.corner() != (PolyA.one(H.field),):
        raise RouteMismatch(f"ℍ_{H.s} 的角系数为 {H.corner()}，不是 1")
    if H.y_degree != H.mu:
        raise RouteMismatch(f"ℍ_{H.s} 的 Y-次数为 {H.y_degree}，预期 μ = {H.mu}")
    if H.t_degree != H.m - 1:
        raise RouteMismatch(f"ℍ_{H.s} 的 t-次数为 {H.t_degree}，预期 m−1 = {H.m - 1}")


def h_interpolate(field: FiniteField, s: int,
                  rows: Optional[Dict[int, HTableRow]] = None) -> HPolynomial:
    """
    在结点 (θ^{q^j}, H_{s,m+j})，j = 0..μ 上插值得到 ℍ_s

    Args:
        rows: 预先算好的 H_{s,d}（例如由进程池并行计算），缺少的行在这里补算

    Raises:
        NonIntegralResult: 插值系数不在 A 中
        RouteMismatch: 留出的行与插值结果不符
    """
    if s == 1:
        return special_h(field)
    q = field.q
    m, mu = _require_polynomial_case(q, s)
    nodes, holdouts = interpolation_degrees(q, s)
    rows = dict(rows or {})
    for d in nodes + holdouts:
        if d not in rows:
            rows[d] = h_row(field, s, d)

    ys = [PolyA.monomial(field, q ** j) for j in range(mu + 1)]
    basis = _lagrange_basis(ys)
    keys = set()
    for d in nodes:
        keys.update(rows[d].table)

    zero = FracK(PolyA.zero(field))
    table: Dict[Exps, YCoeffs] = {}
    for key in sorted(keys):
        coeffs = [zero] * (mu + 1)
        for j, d in enumerate(nodes):
            v = rows[d].table.get(key)
            if v is None:
                continue
            for k in range(mu + 1):
                coeffs[k] = coeffs[k] + basis[j][k] * v
        for c in coeffs:
            if not c.is_integral():
                raise NonIntegralResult(f"ℍ_{s} 在指数 {key} 处的插值系数 {c} 不在 A 中")
        table[key] = tuple(c.num for c in coeffs)

    H = HPolynomial(field, s, m, mu, table, HRoute.VANDERMONDE)
    for d in holdouts:
        y = PolyA.monomial(field, q ** (d - m))
        if H.evaluate_table(y) != rows[d].table:
            raise RouteMismatch(f"ℍ_{s} 在 d = {d} 处与 H_{{s,d}} 不符")
    _check_shape(H)
    logger.info(f"插值得到 ℍ_{s}（q = {q}）：{len(H.table)} 个对称项，留出行 {holdouts} 均一致")
    return H


# ============== 万有关系路线 ==============

def _p_coeffs(field: FiniteField, j: int) -> List[MPoly]:
    """P_j(t) = ∏_{u<j} (t − Y^{q^u}) 关于 t 的系数（Y 的多项式）"""
    out = [MPoly.one(field, ("Y",))]
    for u in range(j):
        root = _y_var(field, field.q ** u)
        nxt = [MPoly.zero(field, ("Y",))] * (len(out) + 1)
        for k, c in enumerate(out):
            nxt[k + 1] = nxt[k + 1] + c
            nxt[k] = nxt[k] - c * root
        out = nxt
    return out


def _ordered_sums(field: FiniteField, key: Exps, m: int,
                  pcoef: List[List[MPoly]]) -> Dict[Exps, MPoly]:
    """
    对非降 t-指数 key，按 j 的多重集 σ 汇总 Σ_{有序 j, sort(j)=σ} ∏_i [t^{key_i}]P_{j_i}

    状态是 j 取值的计数向量。
    """
    one = MPoly.one(field, ("Y",))
    states: Dict[Exps, MPoly] = {(0,) * m: one}
    for e in key:
        nxt: Dict[Exps, MPoly] = {}
        for counts, val in states.items():
            for j in range(e, m):
                p = pcoef[j][e]
                if not p:
                    continue
                new = counts[:j] + (counts[j] + 1,) + counts[j + 1:]
                term = val * p
                nxt[new] = nxt[new] + term if new in nxt else term
        states = nxt
    out = {}
    for counts, val in states.items():
        sigma = tuple(v for v, c in enumerate(counts) for _ in range(c))
        out[sigma] = val
    return out


def h_universal(field: FiniteField, s: int, check: bool = True) -> HPolynomial:
    """
    ℍ_s = −Σ_{h=0}^{κ} Σ_{j∈[0,m−1]^s} c_{j,q^{h+m}}(Y)·∏P_{j_i}(t_i) / ∏_{k≤h}(θ − Y^{q^{m+k}})

    κ = ⌊log_q s⌋ − 1。通分到 ∏_{k≤κ}(θ − Y^{q^{m+k}}) 后做精确除法；
    check 时与插值路线比较。

    Raises:
        NonExactDivision: 公分母不能消去
        RouteMismatch: 与 h_interpolate 不一致
    """
    if s == 1:
        return special_h(field)
    q = field.q
    m, mu = _require_polynomial_case(q, s)
    kappa = _floor_log(q, s) - 1
    theta = MPoly.constant(field, PolyA.theta(field), ("Y",))
    factors = [theta - _y_var(field, q ** (m + k)) for k in range(kappa + 1)]
    den = MPoly.one(field, ("Y",))
    for f in factors:
        den = den * f
    # 第 h 项乘以 ∏_{k>h}(θ − Y^{q^{m+k}}) 后落在公分母上
    cofactors = []
    for h in range(kappa + 1):
        c = MPoly.one(field, ("Y",))
        for f in factors[h + 1:]:
            c = c * f
        cofactors.append(c)

    pcoef = [_p_coeffs(field, j) for j in range(m)]
    table: Dict[Exps, YCoeffs] = {}
    for key in sym_keys(s, m - 1):
        sums = _ordered_sums(field, key, m, pcoef)
        U = MPoly.zero(field, ("Y",))
        for h in range(kappa + 1):
            n = q ** (h + m)
            part = MPoly.zero(field, ("Y",))
            for sigma, val in sums.items():
                c = univ_coeffs(field, sigma).get(n)
                if c is not None:
                    part = part + c * val
            if part:
                U = U + part * cofactors[h]
        if not U:
            continue
        value = -exact_div(U, den)
        coeffs = [PolyA.zero(field)] * (value.degree("Y") + 1)
        for (k,), c in value.extend(("Y",)).terms.items():
            coeffs[k] = c
        table[key] = tuple(coeffs)

    H = HPolynomial(field, s, m, mu, table, HRoute.UNIVERSAL)
    _check_shape(H)
    if check:
        other = h_interpolate(field, s)
        if other != H:
            raise RouteMismatch(f"ℍ_{s}：万有关系路线与插值路线不一致")
        logger.info(f"ℍ_{s}（q = {q}）两条路线一致")
    return H


# ============== 幂和提取 ==============

def h_restrict(H: HPolynomial, s_prime: int) -> MPoly:
    """ℍ_{s,s′}：ℍ_s 中 t_{s′+1}^{m−1}···t_s^{m−1} 的系数，变量为 t_1..t_{s′}, Y"""
    H._require_polynomial()
    if not 0 <= s_prime < H.s:
        raise IndexOutOfRange(f"s′ = {s_prime} 必须在 [0, {H.s}) 内")
    tail = (H.m - 1,) * (H.s - s_prime)
    terms = {}
    for head in itertools.product(range(H.m), repeat=s_prime):
        coeffs = H.table.get(tuple(sorted(head + tail)))
        if coeffs:
            for k, c in enumerate(coeffs):
                if c:
                    terms[head + (k,)] = c
    return MPoly(H.field, t_vars(s_prime) + ("Y",), terms)


def power_sum_via_h(H: HPolynomial, s_prime: int, d: int) -> MPolyK:
    """S_d(1;s′) = l_d^{-1}·∏_{i≤s′} b_{d+1−m}(t_i)·ℍ_{s,s′}|_{Y=θ^{q^{d+1−m}}}"""
    field, m = H.field, H.m
    if d < m - 1:
        raise DomainError(f"要求 d ≥ m − 1 = {m - 1}（d = {d}）")
    restricted = h_restrict(H, s_prime)
    y = PolyA.monomial(field, field.q ** (d + 1 - m))
    value = substitute(restricted, {"Y": y}).to_mpoly()
    prod = MPoly.one(field, t_vars(s_prime))
    for name in t_vars(s_prime):
        prod = prod * b_poly(field, d + 1 - m, name)
    return MPolyK(value * prod, l_seq(field, d))


# ============== E_d 插值核对 ==============

@dataclass
class CrosscheckReport:
    s: int
    d: int
    interpolates: bool
    divisible: bool
    extraction: Optional[bool]
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.interpolates and self.divisible and self.extraction is not False


def _n1_poly(field: FiniteField, d: int, name: str = "t1") -> MPolyK:
    """N_{1,d} = Σ_{j<d} E_j(z)·b_j(t)"""
    total = MPolyK(MPoly.zero(field, (name, "z")))
    for j in range(d):
        total = total + e_poly(field, j) * b_poly(field, j, name)
    return total


def _a_of_t(a: PolyA, name: str) -> MPoly:
    field = a.field
    coeffs = [PolyA.constant(field, c) for c in a.coeffs] or [PolyA.zero(field)]
    return MPoly(field, (name,), {(k,): c for k, c in enumerate(coeffs) if c})


def _e_over_linear(field: FiniteField, d: int, a: PolyA) -> List[PolyA]:
    """D_d·E_d(z)/(z − a) 的 z-系数（综合除法；a ∈ A(d) 是 E_d 的根）"""
    q = field.q
    coeffs = _e_full(field, d)
    out = [PolyA.zero(field)] * q ** d
    carry = PolyA.zero(field)
    for k in range(q ** d, 0, -1):
        carry = coeffs[k] + carry * a
        out[k - 1] = carry
    if coeffs[0] + carry * a:
        raise NonExactDivision(f"{a} 不是 E_{d} 的根")
    return out


def interp_crosscheck(field: FiniteField, s: int, d: int) -> CrosscheckReport:
    """
    (i) N_{1,d} 在 A(d) 上插值 a ↦ a(t)；
    (ii) E_d 整除 M_{s,d} − N_{s,d}，其中 M_{s,d} = ∏ N_{1,d}(t_i)，
         N_{s,d} = l_d·E_d·Σ_{a∈A(d)} ∏a(t_i)/(z − a)；
    (iii) ((M−N)/(l_d E_d))|_{z=0} = −F_d(1;s)（s = 1 时 M = N，不适用）。
    """
    if d < 1 or s < 1:
        raise DomainError("要求 d ≥ 1, s ≥ 1")
    n1 = _n1_poly(field, d)
    interpolates = True
    for a in iter_all(field, d):
        value = substitute(n1, {"z": a})
        if value != MPolyK(_a_of_t(a, "t1")):
            interpolates = False
            break

    names = t_vars(s)
    M = MPolyK(MPoly.one(field, names + ("z",)))
    for name in names:
        M = M * _n1_poly(field, d, name)

    N_num = MPoly.zero(field, names + ("z",))
    for a in iter_all(field, d):
        if a.is_zero():
            continue
        prod = MPoly.one(field, names)
        for name in names:
            prod = prod * _a_of_t(a, name)
        N_num = N_num + prod * MPoly.univariate("z", _e_over_linear(field, d, a))
    Dd = d_seq(field, d)
    N = MPolyK(N_num, Dd) * l_seq(field, d)

    diff = M - N
    e_d = MPoly.univariate("z", _e_full(field, d))
    try:
        quotient = exact_div(diff.num, e_d)
        divisible = True
    except NonExactDivision:
        return CrosscheckReport(s, d, interpolates, False, None, "M − N 不被 E_d 整除")

    if s == 1:
        return CrosscheckReport(s, d, interpolates, divisible, None, "s = 1 时 M = N，z=0 提取不适用")
    at_zero = MPolyK(quotient.coefficient({"z": 0}), diff.den) * MPolyK.coerce(Dd) / l_seq(field, d)
    target = -harmonic_sum(SumSpec(field, 1, s, d))
    return CrosscheckReport(s, d, interpolates, divisible, at_zero == target)


def _e_full(field: FiniteField, d: int) -> List[PolyA]:
    """D_d·E_d(z) 的全部 z-系数"""
    q = field.q
    coeffs = [PolyA.zero(field)] * (q ** d + 1)
    for j, c in enumerate(e_coeffs(field, d)):
        coeffs[q ** j] = c
    return coeffs


# ============== s = 2q−1 的闭式与符号 ==============

def eq10_candidate(field: FiniteField) -> MPoly:
    """s = 2q−1：∏(t_i − Y) + (Y^q − θ)·e_{q−1}(t_1 − Y, …, t_s − Y)"""
    q = field.q
    s = 2 * q - 1
    names = t_vars(s)
    Y = _y_var(field)
    shifted = [MPoly.var(field, name) - Y for name in names]
    prod = MPoly.one(field, names + ("Y",))
    for x in shifted:
        prod = prod * x
    esym = MPoly.zero(field, names + ("Y",))
    for chosen in itertools.combinations(shifted, q - 1):
        term = MPoly.one(field, names + ("Y",))
        for x in chosen:
            term = term * x
        esym = esym + term
    return prod + (_y_var(field, q) - PolyA.theta(field)) * esym


@dataclass
class Eq10Report:
    sign: Optional[int]
    top_coefficient_ok: bool

    @property
    def passed(self) -> bool:
        return self.sign is not None and self.top_coefficient_ok


def _sign_of(field: FiniteField, f: MPoly, g: MPoly) -> Optional[int]:
    if f == g:
        return 1
    if f == -g:
        return -1
    return None


def eq10_check(H: HPolynomial) -> Eq10Report:
    """ℍ_{2q−1} 与闭式比较（允许整体符号），并核对 Y^μ 系数 ±(θ − e_q)"""
    field = H.field
    q = field.q
    if H.s != 2 * q - 1 or q == 2:
        raise DomainError("s = 2q − 1 的闭式只适用于 q > 2")
    sign = _sign_of(field, H.poly(), eq10_candidate(field))
    top = H.y_coefficient(H.mu)
    expected = elem_sym_t(field, q, H.s) - PolyA.theta(field)
    return Eq10Report(sign=sign, top_coefficient_ok=_sign_of(field, top, expected) is not None)


@dataclass
class SignReport:
    h_q: int
    lambda_sign: int
    bs_factor: int


def _unit_sign(field: FiniteField, code: int) -> int:
    if code == 1:
        return 1
    if code == field.neg[1]:
        return -1
    return 0


def resolve_sign(H: HPolynomial) -> SignReport:
    """
    ℍ_q 的值（在 l_{d−1}F_d = H·∏b 的归一化下为 +1）、λ = −𝔻_μ 关于 θ 的首项符号，
    以及 B_s = (−1)^m λ 中的因子 (−1)^m
    """
    field = H.field
    hq = h_interpolate(field, field.q)
    h_q = _unit_sign(field, hq.corner()[0].coeffs[0]) if hq.corner() else 0
    if h_q != 1:
        logger.warning(f"ℍ_q = {hq.corner()}，与归一化下的 +1 不符")
    lam = -H.y_coefficient(H.mu)
    top = lam.theta_degree
    leading = [(exps, c) for exps, c in lam.terms.items() if c.degree == top]
    lambda_sign = 0
    if len(leading) == 1 and not any(leading[0][0]):
        lambda_sign = _unit_sign(field, leading[0][1].leading)
    return SignReport(h_q=h_q, lambda_sign=lambda_sign, bs_factor=(-1) ** H.m)


# ============== Frobenius 因子 ==============

def frobenius_factor(U: MPoly, M: int) -> MPoly:
    """U/(Y^{q^M} − θ)；不整除时抛出 NonExactDivision"""
    field = U.field
    divisor = _y_var(field, field.q ** M) - PolyA.theta(field)
    return exact_div(U, divisor)


def frobenius_evaluations_integral(U: MPoly, M: int, ds: Iterable[int]) -> bool:
    """对每个 d：U(θ^{q^d})/(θ^{q^{d+M}} − θ) 的系数都在 A 中"""
    field = U.field
    q = field.q
    for d in ds:
        value = substitute(U, {"Y": PolyA.monomial(field, q ** d)}).to_mpoly()
        bracket = PolyA.monomial(field, q ** (d + M)) - PolyA.theta(field)
        if any(c % bracket for c in value.terms.values()):
            return False
    return True
