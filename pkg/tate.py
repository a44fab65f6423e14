"""
无穷处的截断 Laurent 级数

1/θ 的级数，系数在 F_q[t_1..t_s] 中。用来数值地验证几条极限陈述：
有限周期恒等式、λ_{1,s} 的极限、Γ_{s,r} 多项式、低阶系数 𝔻_r 以及 ν_{1,s}。

约定：
- 每个 t 单项式对应一段 (low, c)，表示 Σ_k c_k θ^{low+k}
- floor 以下的指数未知；精确多项式的 floor 为 MINUS_INFINITY
- 只保存各分量指数不超过 box 的 t 单项式
"""

import logging
from dataclasses import dataclass, field as dc_field
from typing import Dict, Iterable, List, Optional, Tuple

from sympy.utilities.iterables import multiset_permutations

import config
from algebra import MINUS_INFINITY, FiniteField, PolyA
from carlitz import b_poly, digit_profile, l_seq
from errors import DomainError, NotStabilized, PrecisionExceeded
from hpoly import HPolynomial, h_params
from mpoly import Exps, MPoly, MPolyK, expand_symmetric, product_of_univariates, sym_keys, t_vars
from sums import grouped_scaled_coeffs, scaled_harmonic_coeffs

logger = logging.getLogger(__name__)

Laurent = Tuple[int, PolyA]


# ============== 单段 Laurent 多项式 ==============

def _is_finite(x) -> bool:
    return x is not MINUS_INFINITY


def _fmax(*values):
    finite = [v for v in values if _is_finite(v)]
    return max(finite) if finite else MINUS_INFINITY


def _cut(term: Laurent, floor) -> Optional[Laurent]:
    """去掉 floor 以下的指数，并把最低位规范为非零"""
    low, c = term
    if _is_finite(floor) and floor > low:
        c = PolyA(c.field, c.coeffs[floor - low:])
        low = floor
    coeffs = c.coeffs
    k = 0
    while k < len(coeffs) and coeffs[k] == 0:
        k += 1
    if k == len(coeffs):
        return None
    if k:
        c = PolyA(c.field, coeffs[k:])
    return low + k, c


def _top(term: Laurent) -> int:
    return term[0] + term[1].degree


def _add_terms(a: Laurent, b: Laurent) -> Laurent:
    low = min(a[0], b[0])
    return low, a[1].shift(a[0] - low) + b[1].shift(b[0] - low)


def laurent_quotient(c: PolyA, den: PolyA, floor: int) -> Optional[Laurent]:
    """
    c/den 在 floor 之上的展开

    c·θ^N = Q·den + R 且 deg R < deg den，故 c/den − Q·θ^{−N} 的最高指数 < −N。
    """
    N = max(0, -floor)
    quot = c.shift(N) // den
    return _cut((-N, quot), floor)


# ============== x = 1/θ 上的无穷乘积 ==============

def _x_trunc(p: PolyA, N: int) -> PolyA:
    return PolyA(p.field, p.coeffs[:N + 1])


def _from_x(p: PolyA, e0: int) -> Optional[Laurent]:
    """Σ_k p_k θ^{e0−k}"""
    if not p:
        return None
    n = len(p.coeffs)
    return _cut((e0 - (n - 1), PolyA(p.field, p.coeffs[::-1])), MINUS_INFINITY)


def _one_minus_product(field: FiniteField, start: int, N: int) -> PolyA:
    """∏_{i≥start}(1 − x^{q^i−1}) mod x^{N+1}，start ≥ 1"""
    q = field.q
    p = PolyA.one(field)
    i = start
    while q ** i - 1 <= N:
        p = _x_trunc(p - p.shift(q ** i - 1), N)
        i += 1
    return p


def _geometric_coeffs(field: FiniteField, start: int, T: int, N: int) -> List[PolyA]:
    """∏_{i≥start} 1/(1 − t·x^{q^i}) 中 t^0..t^T 的系数，mod x^{N+1}"""
    q = field.q
    w = [PolyA.one(field)] + [PolyA.zero(field)] * T
    i = start
    while q ** i <= N:
        step = q ** i
        for k in range(1, T + 1):
            w[k] = _x_trunc(w[k] + w[k - 1].shift(step), N)
        i += 1
    return w


# ============== TruncLaurent ==============

class TruncLaurent:
    """
    截断 Laurent 级数

    Attributes:
        field: 系数域
        s: t 变量个数
        box: 每个 t 变量保留的最高次数
        terms: 指数向量 -> (low, c)
        floor: 低于 floor 的 θ 指数未知
    """

    __slots__ = ("field", "s", "box", "terms", "floor")

    def __init__(self, field: FiniteField, s: int, box: int,
                 terms: Optional[Dict[Exps, Laurent]] = None, floor=MINUS_INFINITY):
        clean = {}
        for exps, term in (terms or {}).items():
            if len(exps) != s:
                raise DomainError(f"指数向量 {exps} 的长度不是 {s}")
            if term is None or max(exps, default=0) > box:
                continue
            term = _cut(term, floor)
            if term is not None:
                clean[exps] = term
        self.field = field
        self.s = s
        self.box = box
        self.terms = clean
        self.floor = floor

    # ---- 构造 ----

    @classmethod
    def from_mpoly(cls, f: MPoly, s: int, box: int) -> "TruncLaurent":
        """A[t] 中的精确多项式"""
        f = f.extend(t_vars(s))
        return cls(f.field, s, box, {e: (0, c) for e, c in f.terms.items()})

    @classmethod
    def from_fraction(cls, f: MPolyK, s: int, box: int, floor: int) -> "TruncLaurent":
        num = f.num.extend(t_vars(s))
        terms = {e: laurent_quotient(c, f.den, floor) for e, c in num.terms.items()
                 if max(e, default=0) <= box}
        return cls(f.field, s, box, terms, floor)

    @classmethod
    def from_symmetric(cls, field: FiniteField, s: int, box: int, table: Dict[Exps, PolyA],
                       den: PolyA, floor: int) -> "TruncLaurent":
        """按非降指数向量给出的对称多项式除以 den"""
        terms = {}
        for key, c in table.items():
            if not c or max(key, default=0) > box:
                continue
            term = laurent_quotient(c, den, floor)
            if term is None:
                continue
            for perm in multiset_permutations(list(key)):
                terms[tuple(perm)] = term
        return cls(field, s, box, terms, floor)

    @classmethod
    def scalar(cls, field: FiniteField, s: int, box: int, term: Optional[Laurent],
               floor) -> "TruncLaurent":
        return cls(field, s, box, {(0,) * s: term} if term else {}, floor)

    # ---- 属性 ----

    def top(self):
        return max((_top(t) for t in self.terms.values()), default=MINUS_INFINITY)

    def top_bound(self):
        """最高已知指数；floor 之上为零时返回 floor − 1，精确零返回 MINUS_INFINITY"""
        if self.terms:
            return self.top()
        return self.floor - 1 if _is_finite(self.floor) else MINUS_INFINITY

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other: "TruncLaurent"):
        if self.field != other.field or self.s != other.s:
            raise DomainError("两个级数的系数环不同")

    # ---- 算术 ----

    def __add__(self, other: "TruncLaurent") -> "TruncLaurent":
        self._check(other)
        terms = dict(self.terms)
        for e, term in other.terms.items():
            terms[e] = _add_terms(terms[e], term) if e in terms else term
        return TruncLaurent(self.field, self.s, min(self.box, other.box), terms,
                            _fmax(self.floor, other.floor))

    def __neg__(self) -> "TruncLaurent":
        return TruncLaurent(self.field, self.s, self.box,
                            {e: (low, -c) for e, (low, c) in self.terms.items()}, self.floor)

    def __sub__(self, other: "TruncLaurent") -> "TruncLaurent":
        return self + (-other)

    def __mul__(self, other: "TruncLaurent") -> "TruncLaurent":
        self._check(other)
        ta, tb = self.top(), other.top()
        fa, fb = self.floor, other.floor
        candidates = []
        if _is_finite(fa) and _is_finite(tb):
            candidates.append(fa + tb)
        if _is_finite(fb) and _is_finite(ta):
            candidates.append(fb + ta)
        if _is_finite(fa) and _is_finite(fb):
            candidates.append(fa + fb)
        floor = max(candidates) if candidates else MINUS_INFINITY
        box = min(self.box, other.box)

        acc: Dict[Exps, Laurent] = {}
        for ea, (la, ca) in self.terms.items():
            for eb, (lb, cb) in other.terms.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                if max(e, default=0) > box:
                    continue
                low = la + lb
                prod = ca * cb
                if _is_finite(floor) and floor > low:
                    cut = _cut((low, prod), floor)
                    if cut is None:
                        continue
                    low, prod = cut
                acc[e] = _add_terms(acc[e], (low, prod)) if e in acc else (low, prod)
        return TruncLaurent(self.field, self.s, box, acc, floor)

    def shift(self, k: int) -> "TruncLaurent":
        """乘以 θ^k"""
        floor = self.floor + k if _is_finite(self.floor) else MINUS_INFINITY
        return TruncLaurent(self.field, self.s, self.box,
                            {e: (low + k, c) for e, (low, c) in self.terms.items()}, floor)

    # ---- 取出部分 ----

    def nonneg_part(self) -> MPoly:
        """θ 指数 ≥ 0 的部分，作为 A[t] 中的多项式"""
        if _is_finite(self.floor) and self.floor > 0:
            raise PrecisionExceeded(f"精度下界 {self.floor} 高于 0，无法取出多项式部分")
        terms = {}
        for e, (low, c) in self.terms.items():
            part = c.shift(low) if low >= 0 else PolyA(self.field, c.coeffs[-low:])
            if part:
                terms[e] = part
        return MPoly(self.field, t_vars(self.s), terms, trusted=True)

    def __repr__(self):
        return f"TruncLaurent(s={self.s}, box={self.box}, terms={len(self.terms)}, floor={self.floor})"


# ============== 周期比值的模型 ==============

def _product_model(field: FiniteField, s: int, box: int, scalar_start: int,
                   w_start: int, floor: int) -> TruncLaurent:
    """∏_{i≥scalar_start}(1 − θ^{1−q^i}) · ∏_j ∏_{i≥w_start} 1/(1 − t_jθ^{−q^i})"""
    N = max(0, -floor)
    scalar = _from_x(_one_minus_product(field, scalar_start, N), 0)
    result = TruncLaurent.scalar(field, s, box, scalar, -N)
    ws = _geometric_coeffs(field, w_start, box, N)
    for j in range(s):
        terms = {}
        for k, w in enumerate(ws):
            exps = [0] * s
            exps[j] = k
            terms[tuple(exps)] = _from_x(w, 0)
        result = result * TruncLaurent(field, s, box, terms, -N)
    return result


def omega_ratio(field: FiniteField, s: int, box: int, floor: int) -> TruncLaurent:
    """
    ω(t_1)···ω(t_s)/π̃ = (−1)^m θ^{m−1}·∏_{i≥1}(1 − θ^{1−q^i}) / ∏_j∏_{i≥0}(1 − t_jθ^{−q^i})

    (−θ)^{1/(q−1)} 的分数幂在比值中相消，只剩整数次幂。
    """
    m, _ = h_params(field.q, s)
    model = _product_model(field, s, box, 1, 0, floor - (m - 1)).shift(m - 1)
    return -model if m % 2 else model


def gamma_tail(field: FiniteField, s: int, d: int, floor: int,
               box: Optional[int] = None) -> TruncLaurent:
    """Γ_d = ∏_{i≥d}(1 − θ^{1−q^i}) / ∏_{i≥d−m}∏_j(1 − t_jθ^{−q^i})"""
    m, mu = _gamma_params(field.q, s)
    if d < max(m, 1):
        raise DomainError(f"Γ_d 需要 d ≥ max(m, 1)（d = {d}, m = {m}）")
    return _product_model(field, s, mu if box is None else box, d, d - m, floor)


def harmonic_laurent(field: FiniteField, s: int, d: int, box: int, floor: int) -> TruncLaurent:
    """F_d(1;s) 在 box 内的展开"""
    table = scaled_harmonic_coeffs(field, s, d, sym_keys(s, box))
    return TruncLaurent.from_symmetric(field, s, box, table, l_seq(field, d - 1), floor)


def tail_laurent(field: FiniteField, s: int, d: int, D: int, box: int, floor: int) -> TruncLaurent:
    """Σ_{i=d}^{D} S_i(1;s) 在 box 内的展开"""
    table = grouped_scaled_coeffs(field, s, range(d, D + 1), l_seq(field, D), sym_keys(s, box))
    return TruncLaurent.from_symmetric(field, s, box, table, l_seq(field, D), floor)


# ============== 有限周期恒等式 ==============

def lemma_ident_check(field: FiniteField, s: int, d: int) -> bool:
    """
    π̃_d / (ω_{d−m}(t_1)···ω_{d−m}(t_s)) = −(−θ)^{δ−m+1}·∏ b_{d−m}(t_i) / l_{d−1}

    其中 δ = m − 1 + μq^{d−m}。左边按定义逐项展开为 K[t] 中的分式：
    θ·(−θ)^{−m}·∏_{i=1}^{d−1} θ^{q^i}/(θ^{q^i} − θ)·∏_j∏_{i<d−m}(θ^{q^i} − t_j)/θ^{q^i}
    """
    q = field.q
    m, mu = h_params(q, s)
    if d < m:
        raise DomainError(f"需要 d ≥ m（d = {d}, m = {m}）")
    K = d - m
    vars = t_vars(s)
    b_prod = product_of_univariates(b_poly(field, K, v) for v in vars).extend(vars)

    theta_num = sum(q ** i for i in range(1, d)) + max(0, 1 - m)
    theta_den = max(0, m - 1) + s * sum(q ** i for i in range(K))
    sign = field.from_int((-1) ** ((m + K * s) % 2))
    den = PolyA.monomial(field, theta_den)
    for i in range(1, d):
        den = den * (PolyA.monomial(field, q ** i) - PolyA.theta(field))
    lhs = MPolyK(b_prod * PolyA.monomial(field, theta_num, sign), den)

    e = mu * q ** K
    rhs_sign = field.from_int(-((-1) ** (e % 2)))
    rhs = MPolyK(b_prod * PolyA.monomial(field, e, rhs_sign), l_seq(field, d - 1))
    ok = lhs == rhs
    logger.debug(f"有限周期恒等式 q={q} s={s} d={d}: {ok}")
    return ok


# ============== 极限报告 ==============

@dataclass
class LimitRow:
    """一个 d 上的残差：top 为最高 θ 指数（None 表示精确为零）"""
    d: int
    top: Optional[int]
    floor: Optional[int] = None
    stable: Optional[bool] = None

    @property
    def valuation(self) -> Optional[int]:
        return None if self.top is None else -self.top

    def to_dict(self) -> Dict:
        return {"d": self.d, "top": self.top, "floor": self.floor, "stable": self.stable}


@dataclass
class LimitReport:
    label: str
    rows: List[LimitRow] = dc_field(default_factory=list)
    tail_stable: Optional[bool] = None  # 只有 ν 设置：尾和上界加一后非负部分不变

    @property
    def strictly_decreasing(self) -> bool:
        return _strictly_decreasing([row.top for row in self.rows])

    @property
    def stabilized(self) -> bool:
        return bool(self.rows) and self.rows[-1].stable is not False

    @property
    def passed(self) -> bool:
        return self.strictly_decreasing and self.stabilized and self.tail_stable is not False

    def to_dict(self) -> Dict:
        return {
            "label": self.label,
            "rows": [row.to_dict() for row in self.rows],
            "strictly_decreasing": self.strictly_decreasing,
            "stabilized": self.stabilized,
            "tail_stable": self.tail_stable,
            "passed": self.passed,
        }


def _strictly_decreasing(tops: List[Optional[int]]) -> bool:
    for a, b in zip(tops, tops[1:]):
        if a is None:
            if b is not None:
                return False
        elif b is not None and b >= a:
            return False
    return True


def _as_top(value) -> Optional[int]:
    return None if value is MINUS_INFINITY else value


def _as_floor(value) -> Optional[int]:
    return None if value is MINUS_INFINITY else value


def _window(d_lo: Optional[int], d_hi: Optional[int], start: int) -> List[int]:
    d_lo = start if d_lo is None else d_lo
    d_hi = d_lo + config.TATE_MIN_WINDOW - 1 if d_hi is None else d_hi
    if d_hi - d_lo + 1 < config.TATE_MIN_WINDOW:
        raise DomainError(f"窗口 [{d_lo}, {d_hi}] 少于 {config.TATE_MIN_WINDOW} 个 d")
    return list(range(d_lo, d_hi + 1))


def _require_h(H: HPolynomial):
    if H.is_special or H.s < H.field.q:
        raise DomainError(f"s = {H.s} 时 ℍ_s 不是多项式")


# ============== λ_{1,s} ==============

def lambda_limit_report(H: HPolynomial, d_lo: Optional[int] = None,
                        d_hi: Optional[int] = None) -> Tuple[MPoly, LimitReport]:
    """
    R_d = −θ^{−μq^{d−m}}·ℍ_s(θ^{q^{d−m}})，逐 d 精确计算

    非负指数部分在窗口末尾连续 TATE_MIN_WINDOW 个 d 上必须相同；
    负指数部分（残差）的最高指数必须严格下降。

    Raises:
        NotStabilized: 没有稳定部分或残差不下降
    """
    _require_h(H)
    field, q, m, mu = H.field, H.field.q, H.m, H.mu
    ds = _window(d_lo, d_hi, m + 1)
    if ds[0] < m:
        raise DomainError(f"需要 d ≥ m = {m}")
    report = LimitReport(label=f"lambda s={H.s}")
    parts = []
    for d in ds:
        shift = mu * q ** (d - m)
        stable: Dict[Exps, PolyA] = {}
        top = MINUS_INFINITY
        for key, value in H.evaluate_table(PolyA.monomial(field, q ** (d - m))).items():
            coeffs = (-value).coeffs
            high = PolyA(field, coeffs[shift:])
            if high:
                stable[key] = high
            low = PolyA(field, coeffs[:shift])
            if low:
                top = _fmax(top, low.degree - shift)
        parts.append(stable)
        report.rows.append(LimitRow(d=d, top=_as_top(top)))

    window = parts[-config.TATE_MIN_WINDOW:]
    for row, part in zip(report.rows[-config.TATE_MIN_WINDOW:], window):
        row.stable = part == window[-1]
    if not all(row.stable for row in report.rows[-config.TATE_MIN_WINDOW:]):
        raise NotStabilized(f"s = {H.s}：窗口 {ds} 内非负部分不一致")
    if not report.strictly_decreasing:
        raise NotStabilized(f"s = {H.s}：残差最高指数不严格下降 {[r.top for r in report.rows]}")
    lam = expand_symmetric(field, window[-1], H.s)
    logger.info(f"λ_{{1,{H.s}}} 在 d ∈ [{ds[0]}, {ds[-1]}] 上稳定，θ 次数 {lam.theta_degree}")
    return lam, report


def lambda_limit(H: HPolynomial, d_lo: Optional[int] = None, d_hi: Optional[int] = None) -> MPoly:
    return lambda_limit_report(H, d_lo, d_hi)[0]


def lambda_analytic(field: FiniteField, s: int, d: int, box: Optional[int] = None) -> MPoly:
    """(∏ω/π̃)·F_d(1;s) 的非负指数部分，d 足够大时等于 λ_{1,s} 在 box 内的部分"""
    m, _ = _gamma_params(field.q, s)
    box = m - 1 if box is None else box
    floor = -1 - config.TATE_MARGIN
    X = omega_ratio(field, s, box, floor) * harmonic_laurent(field, s, d, box, floor - (m - 1))
    return X.nonneg_part()


# ============== Γ_{s,r} ==============

def _gamma_params(q: int, s: int) -> Tuple[int, int]:
    m, mu = h_params(q, s)
    if m < 1:
        raise DomainError(f"s = {s} 需要 s ≥ q")
    return m, mu


def _binary_digits(n: int, q: int) -> bool:
    return all(digit <= 1 for digit in digit_profile(n, q).digits)


@dataclass
class GammaSeries:
    """h = g·f^{−1}（inverse 时为 f·g^{−1}）的前若干项系数 h_0, h_1, …"""
    field: FiniteField
    s: int
    m: int
    h_coeffs: List[MPoly] = dc_field(default_factory=list)
    inverse: bool = False

    @property
    def upto(self) -> int:
        return len(self.h_coeffs) - 1

    def evaluate(self, r: int, mu: int, y: PolyA) -> MPoly:
        """Γ_{s,r}(y) = Σ_{n=0}^{μ−r} h_n·y^{μ−r−n}"""
        result = MPoly.zero(self.field, t_vars(self.s))
        for n in range(mu - r + 1):
            result = result + self.h_coeffs[n] * y ** (mu - r - n)
        return result


def _f_coeffs(field: FiniteField, s: int, upto: int) -> List[MPoly]:
    """f = ∏_j Σ'_n (−t_j)^{ℓ_q(n)} Y^n，n 只含数位 0、1"""
    q = field.q
    vars = t_vars(s)
    zero = MPoly.zero(field, vars)
    binary = [(n, digit_profile(n, q).ell) for n in range(upto + 1) if _binary_digits(n, q)]
    f = [MPoly.one(field, vars)] + [zero] * upto
    for v in vars:
        minus_t = -MPoly.var(field, v).extend(vars)
        powers = {}
        new = [zero] * (upto + 1)
        for n, ell in binary:
            if ell not in powers:
                powers[ell] = minus_t ** ell
            for k in range(upto + 1 - n):
                if f[k]:
                    new[k + n] = new[k + n] + f[k] * powers[ell]
        f = new
    return f


def _series_div(num: List[MPoly], den: List[MPoly], upto: int) -> List[MPoly]:
    """num/den 的前 upto + 1 项，den 的常数项为 1"""
    out: List[MPoly] = []
    for n in range(upto + 1):
        acc = num[n]
        for i in range(1, n + 1):
            if den[i]:
                acc = acc - den[i] * out[n - i]
        out.append(acc)
    return out


def gamma_series(field: FiniteField, s: int, upto: int, inverse: bool = False) -> GammaSeries:
    """
    h_0..h_upto，h = g/f，h(θ^{−q^{d−m}}) = Γ_d：

    f = ∏_j Σ'_n (−t_j)^{ℓ_q(n)} Y^n，g = Σ'_n (−θ)^{ℓ_q(n)} Y^{q^m n}，
    Σ' 只取 q 进制数位全为 0 或 1 的 n。

    inverse=True 时展开 f/g = Γ_d^{−1}。𝔻_r 的极限需要的是这一个：
    ∏ω_{d−m}(t_j)/π̃_d = (∏ω(t_j)/π̃)·Γ_d^{−1}。两者的一次项相差符号，q = 2 时 μ = 1，两者给出同一个 Γ_{s,0}。
    """
    if upto < 1:
        raise DomainError(f"upto = {upto} 必须 ≥ 1")
    q = field.q
    m, _ = _gamma_params(q, s)
    vars = t_vars(s)
    f = _f_coeffs(field, s, upto)
    g = [MPoly.zero(field, vars)] * (upto + 1)
    minus_theta = -PolyA.theta(field)
    k = 0
    while q ** m * k <= upto:
        if _binary_digits(k, q):
            g[q ** m * k] = MPoly.constant(field, minus_theta ** digit_profile(k, q).ell, vars)
        k += 1
    h = _series_div(f, g, upto) if inverse else _series_div(g, f, upto)
    return GammaSeries(field=field, s=s, m=m, h_coeffs=h, inverse=inverse)


def gamma_poly(field: FiniteField, s: int, r: int, inverse: bool = False) -> MPoly:
    """Γ_{s,r}(Y) = Σ_{n=0}^{μ−r} h_n·Y^{μ−r−n}，关于 Y 首一，次数 μ − r"""
    m, mu = _gamma_params(field.q, s)
    if not 0 <= r <= mu:
        raise DomainError(f"r = {r} 必须在 [0, {mu}] 内")
    if r == mu - 1 and r != 1:
        logger.debug(f"Γ_{{{s},{r}}} = Y ± Σt_i（下标按 μ − 1 计，而非 1）")
    vars = t_vars(s) + ("Y",)
    result = MPoly.zero(field, vars)
    if r == mu:
        return MPoly.one(field, vars)
    series = gamma_series(field, s, mu - r, inverse)
    for n in range(mu - r + 1):
        if series.h_coeffs[n]:
            y = MPoly.var(field, "Y", mu - r - n).extend(vars)
            result = result + series.h_coeffs[n].extend(vars) * y
    return result


def gamma_property_check(field: FiniteField, s: int, r: int, ds: Iterable[int],
                         box: Optional[int] = None) -> LimitReport:
    """θ^{(μ−r)q^{d−m}}·Γ_d − Γ_{s,r}(θ^{q^{d−m}}) 的最高指数随 d 严格下降"""
    q = field.q
    m, mu = _gamma_params(q, s)
    if not 0 <= r <= mu:
        raise DomainError(f"r = {r} 必须在 [0, {mu}] 内")
    box = max(1, mu - r) if box is None else box
    series = gamma_series(field, s, max(1, mu - r))
    report = LimitReport(label=f"gamma s={s} r={r}")
    for d in ds:
        qk = q ** (d - m)
        e = (mu - r) * qk
        target = -2 * qk - config.TATE_MARGIN
        shifted = gamma_tail(field, s, d, target - e, box).shift(e)
        exact = TruncLaurent.from_mpoly(series.evaluate(r, mu, PolyA.monomial(field, qk)), s, box)
        residual = shifted - exact
        report.rows.append(LimitRow(d=d, top=_as_top(residual.top_bound()),
                                    floor=_as_floor(residual.floor)))
    return report


# ============== 低阶系数 𝔻_r ==============

def lower_coeff_verify(H: HPolynomial, r: int, d_lo: Optional[int] = None,
                       d_hi: Optional[int] = None, box: Optional[int] = None) -> LimitReport:
    """
    X_d = (∏ω/π̃)·Γ*_{s,r}(θ^{q^{d−m}})·F_d(1;s) + Σ_{i=1}^{μ−r} 𝔻_{i+r}·θ^{iq^{d−m}}

    Γ*_{s,r} 取自 Γ_d^{−1} 的展开（gamma_series(..., inverse=True)）。
    报告 X_d + 𝔻_r 的最高 θ 指数；X_d 的非负部分应等于 −𝔻_r。

    Raises:
        DomainError: r 不在 [0, μ−1] 内
        PrecisionExceeded: 精度下界高于比较窗口
    """
    _require_h(H)
    field, q, s, m, mu = H.field, H.field.q, H.s, H.m, H.mu
    if not 0 <= r <= mu - 1:
        raise DomainError(f"r = {r} 必须在 [0, {mu - 1}] 内")
    box = m - 1 if box is None else box
    ds = _window(d_lo, d_hi, m)
    series = gamma_series(field, s, max(1, mu - r), inverse=True)
    coeffs = {i: H.y_coefficient(i) for i in range(r, mu + 1)}
    target_D = TruncLaurent.from_mpoly(coeffs[r], s, box)
    report = LimitReport(label=f"lower s={s} r={r}")

    for d in ds:
        qk = q ** (d - m)
        gamma_value = series.evaluate(r, mu, PolyA.monomial(field, qk))
        wanted = -2 * qk - config.TATE_MARGIN
        phi = wanted - max(0, gamma_value.theta_degree)
        omega = omega_ratio(field, s, box, phi)
        F = harmonic_laurent(field, s, d, box, phi - (m - 1))
        known = MPoly.zero(field, t_vars(s))
        for i in range(1, mu - r + 1):
            known = known + coeffs[i + r] * PolyA.monomial(field, i * qk)
        X = (omega * F) * TruncLaurent.from_mpoly(gamma_value, s, box) \
            + TruncLaurent.from_mpoly(known, s, box)
        if _is_finite(X.floor) and X.floor > wanted:
            raise PrecisionExceeded(f"d = {d}：精度下界 {X.floor} 高于 {wanted}")
        residual = X + target_D
        top = residual.top_bound()
        stable = _is_finite(top) and top < 0 or not _is_finite(top)
        report.rows.append(LimitRow(d=d, top=_as_top(top), floor=_as_floor(X.floor),
                                    stable=stable and X.nonneg_part() == (-target_D).nonneg_part()))
        logger.debug(f"𝔻_{r}（s={s}）d={d}: 残差最高指数 {top}")
    return report


# ============== ν_{1,s} ==============

def _nu_tail(field: FiniteField, s: int, m: int, d: int, D: int, box: int) -> TruncLaurent:
    """θ^{q^{d−m}}·(∏ω/π̃)·Σ_{i=d}^{D} S_i(1;s)"""
    qk = field.q ** (d - m)
    phi = -1 - config.TATE_MARGIN - qk
    omega = omega_ratio(field, s, box, phi)
    tail = tail_laurent(field, s, d, D, box, phi - (m - 1))
    return (omega * tail).shift(qk)


def nu_value_report(H: HPolynomial, d_lo: Optional[int] = None, d_hi: Optional[int] = None,
                    D: Optional[int] = None) -> Tuple[MPoly, LimitReport]:
    """
    ν_{1,s} 的两种算法：
    (a) θ^{q^{d−m}}·(∏ω/π̃)·Σ_{i=d}^{D} S_i(1;s) 的非负部分
    (b) 𝔻_{μ−1} − (t_1+…+t_s)·λ_{1,s}，λ_{1,s} = −𝔻_μ

    D 缺省时每个 d 取 d + NU_TAIL_EXTRA。最后一个 d 上再用 D + 1 重算一次，
    非负部分不变才算尾和稳定。

    Raises:
        DomainError: D < d_hi
        NotStabilized: (a) 在窗口末尾不稳定、随 D 改变，或与 (b) 不一致
    """
    _require_h(H)
    field, q, s, m, mu = H.field, H.field.q, H.s, H.m, H.mu
    if mu < 1:
        raise DomainError(f"s = {s}：ν_{{1,s}} 需要 μ ≥ 1（s ≥ 2q − 1）")
    box = m
    ds = _window(d_lo, d_hi, m + 2)
    if D is not None and D < ds[-1]:
        raise DomainError(f"尾和上界 D = {D} 小于 d_hi = {ds[-1]}")

    def upper(d: int) -> int:
        return d + config.NU_TAIL_EXTRA if D is None else D

    vars = t_vars(s)
    e1 = MPoly.zero(field, vars)
    for v in vars:
        e1 = e1 + MPoly.var(field, v).extend(vars)
    lam = -H.y_coefficient(mu)
    nu = H.y_coefficient(mu - 1) - e1 * lam
    nu_box = TruncLaurent.from_mpoly(nu, s, box)

    report = LimitReport(label=f"nu s={s}")
    V = None
    for d in ds:
        V = _nu_tail(field, s, m, d, upper(d), box)
        residual = V - nu_box
        top = residual.top_bound()
        report.rows.append(LimitRow(d=d, top=_as_top(top), floor=_as_floor(V.floor),
                                    stable=V.nonneg_part() == nu_box.nonneg_part()))
        logger.debug(f"ν（s={s}）d={d}, D={upper(d)}: 残差最高指数 {top}")

    last = ds[-1]
    grown = _nu_tail(field, s, m, last, upper(last) + 1, box)
    report.tail_stable = grown.nonneg_part() == V.nonneg_part()

    tail_rows = report.rows[-config.TATE_MIN_WINDOW:]
    if not all(row.stable for row in tail_rows):
        raise NotStabilized(f"s = {s}：两种 ν 算法在窗口 {ds} 末尾不一致")
    if not report.tail_stable:
        raise NotStabilized(f"s = {s}：d = {last} 时尾和上界从 {upper(last)} 增到 {upper(last) + 1}，ν 改变")
    if not report.strictly_decreasing:
        raise NotStabilized(f"s = {s}：ν 残差最高指数不严格下降 {[r.top for r in report.rows]}")
    return nu, report


def nu_value(H: HPolynomial, d_lo: Optional[int] = None, d_hi: Optional[int] = None,
             D: Optional[int] = None) -> MPoly:
    return nu_value_report(H, d_lo, d_hi, D)[0]
