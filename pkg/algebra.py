"""
基础算术 - 有限域 F_q、多项式环 A = F_q[θ]、分式域 K 与商环 A/P

元素一律不可变；模 P 的上下文在构造时一次性预计算，可在线程/进程间共享。
"""

import itertools
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, List, Optional, Sequence, Tuple, Union

from sympy import divisors, isprime, mobius

import config
from errors import ConfigError, DomainError, NonExactDivision, NotAUnit

logger = logging.getLogger(__name__)


class _MinusInfinity:
    """零多项式的次数：只支持比较，不支持算术"""

    __slots__ = ()

    def __repr__(self):
        return "-inf"

    def __lt__(self, other):
        return other is not self

    def __le__(self, other):
        return True

    def __gt__(self, other):
        return False

    def __ge__(self, other):
        return other is self

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("minus-infinity")

    def __reduce__(self):
        return (_minus_infinity, ())


MINUS_INFINITY = _MinusInfinity()


def _minus_infinity():
    return MINUS_INFINITY


Degree = Union[int, _MinusInfinity]


# ============== 有限域 ==============

class FiniteField:
    """
    有限域 F_q = F_p[x]/(f)

    元素编码为 0..q-1 的整数：编码的 p 进制各位即 f 的幂基坐标（低位在前）。
    加法、乘法、取负、求逆全部预先制表。
    """

    def __init__(self, p: int, e: int = 1, modulus: Optional[Sequence[int]] = None):
        if not isprime(p):
            raise ConfigError(f"特征 {p} 不是素数")
        if e < 1:
            raise ConfigError(f"扩张次数 {e} 必须为正")
        q = p ** e
        if q > config.MAX_FIELD_SIZE:
            raise ConfigError(f"q = {q} 超过上限 {config.MAX_FIELD_SIZE}")
        if e == 1:
            modulus = (0, 1)
        else:
            modulus = modulus if modulus is not None else config.FIELD_MODULI.get(q)
            if modulus is None:
                raise ConfigError(f"q = {q} 未配置模多项式")
            modulus = tuple(int(c) % p for c in modulus)
            if len(modulus) != e + 1 or modulus[-1] != 1:
                raise ConfigError(f"模多项式 {modulus} 必须首一且次数为 {e}")
        self.p = p
        self.e = e
        self.q = q
        self.modulus = tuple(modulus)
        self._build_tables()

    def _coords(self, code: int) -> Tuple[int, ...]:
        out = []
        for _ in range(self.e):
            code, r = divmod(code, self.p)
            out.append(r)
        return tuple(out)

    def _code(self, coords: Sequence[int]) -> int:
        code = 0
        for c in reversed(coords):
            code = code * self.p + c
        return code

    def _mul_coords(self, a, b):
        p, e = self.p, self.e
        prod = [0] * (2 * e - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        # 用首一模多项式约化高次项
        for k in range(len(prod) - 1, e - 1, -1):
            c = prod[k] % p
            if c:
                for j in range(e):
                    prod[k - e + j] -= c * self.modulus[j]
            prod[k] = 0
        return [c % p for c in prod[:e]]

    def _build_tables(self):
        q, p = self.q, self.p
        if self.e == 1:
            self.add = [[(a + b) % p for b in range(q)] for a in range(q)]
            self.mul = [[(a * b) % p for b in range(q)] for a in range(q)]
        else:
            coords = [self._coords(c) for c in range(q)]
            self.add = [[self._code([(x + y) % p for x, y in zip(coords[a], coords[b])])
                         for b in range(q)] for a in range(q)]
            self.mul = [[self._code(self._mul_coords(coords[a], coords[b]))
                         for b in range(q)] for a in range(q)]
        self.neg = [row.index(0) for row in self.add]
        self.sub = [[self.add[a][self.neg[b]] for b in range(q)] for a in range(q)]
        self.inv = [0] * q
        for a in range(1, q):
            try:
                self.inv[a] = self.mul[a].index(1)
            except ValueError:
                raise ConfigError(f"模多项式 {self.modulus} 在 F_{p} 上可约") from None

    @property
    def is_prime(self) -> bool:
        return self.e == 1

    @property
    def key(self) -> Tuple[int, int, Tuple[int, ...]]:
        return (self.p, self.e, self.modulus)

    def from_int(self, n: int) -> int:
        """整数 n 在素子域中的像"""
        return n % self.p

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv[a], -k
        result = 1
        while k:
            if k & 1:
                result = self.mul[result][a]
            a = self.mul[a][a]
            k >>= 1
        return result

    def element(self, code: int) -> "FqElem":
        return FqElem(self, code)

    def code_text(self, code: int) -> str:
        """p 进制数字串（高位在前）"""
        digits = [str(c) for c in reversed(self._coords(code))]
        return ("" if self.p <= 10 else ".").join(digits)

    def parse_code(self, text: str) -> int:
        text = text.strip()
        digits = list(text) if self.p <= 10 else text.split(".")
        if self.e == 1:
            return int(text) % self.p
        if len(digits) != self.e:
            raise ValueError(f"域元素 {text!r} 需要 {self.e} 位")
        return self._code([int(c) for c in reversed(digits)])

    @property
    def label(self) -> str:
        if self.e == 1:
            return f"F{self.p}"
        return f"F{self.q}[" + ",".join(str(c) for c in self.modulus) + "]"

    def __eq__(self, other):
        return isinstance(other, FiniteField) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __reduce__(self):
        # 跨进程传递时回到共享的域对象
        return (get_field, self.key)

    def __repr__(self):
        return f"FiniteField({self.label})"


@lru_cache(maxsize=None)
def _field_cached(p: int, e: int, modulus: Optional[Tuple[int, ...]]) -> FiniteField:
    return FiniteField(p, e, modulus)


def get_field(p: int, e: int = 1, modulus: Optional[Sequence[int]] = None) -> FiniteField:
    """按 (p, e, f) 共享域对象"""
    return _field_cached(p, e, tuple(modulus) if modulus is not None else None)


def field_for_q(q: int) -> FiniteField:
    """按 q 取默认的域（非素数 q 使用 config.FIELD_MODULI 中登记的模多项式）"""
    for p in range(2, q + 1):
        if q % p == 0:
            break
    e = 1
    while p ** e < q:
        e += 1
    if p ** e != q:
        raise ConfigError(f"q = {q} 不是素数幂")
    return get_field(p, e, config.FIELD_MODULI.get(q) if e > 1 else None)


@dataclass(frozen=True)
class FqElem:
    """F_q 中的元素"""
    field: FiniteField
    code: int

    @property
    def coords(self) -> Tuple[int, ...]:
        return self.field._coords(self.code)

    def __add__(self, other):
        return FqElem(self.field, self.field.add[self.code][other.code])

    def __sub__(self, other):
        return FqElem(self.field, self.field.sub[self.code][other.code])

    def __neg__(self):
        return FqElem(self.field, self.field.neg[self.code])

    def __mul__(self, other):
        return FqElem(self.field, self.field.mul[self.code][other.code])

    def inverse(self) -> "FqElem":
        if self.code == 0:
            raise ZeroDivisionError("F_q 中的零元不可逆")
        return FqElem(self.field, self.field.inv[self.code])

    def __truediv__(self, other):
        return self * other.inverse()

    def __pow__(self, k: int):
        return FqElem(self.field, self.field.power(self.code, k))

    def to_text(self) -> str:
        return self.field.code_text(self.code)

    @classmethod
    def from_text(cls, field: FiniteField, text: str) -> "FqElem":
        return cls(field, field.parse_code(text))


# ============== 系数向量运算 ==============

def _pack(coeffs: Sequence[int], nbytes: int) -> int:
    return int.from_bytes(b"".join(c.to_bytes(nbytes, "little") for c in coeffs), "little")


def _unpack(value: int, nbytes: int, length: int, p: int) -> List[int]:
    raw = value.to_bytes(length * nbytes, "little")
    return [int.from_bytes(raw[i * nbytes:(i + 1) * nbytes], "little") % p for i in range(length)]


def _kronecker_mul(a: Sequence[int], b: Sequence[int], p: int) -> List[int]:
    """素数域上的 Kronecker 代换乘法：打包成大整数后相乘"""
    bound = min(len(a), len(b)) * (p - 1) ** 2
    nbytes = bound.bit_length() // 8 + 1
    return _unpack(_pack(a, nbytes) * _pack(b, nbytes), nbytes, len(a) + len(b) - 1, p)


def _mul_coeffs(field: FiniteField, a: Sequence[int], b: Sequence[int]) -> List[int]:
    if not a or not b:
        return []
    if field.is_prime:
        p = field.p
        if min(len(a), len(b)) > config.KRONECKER_THRESHOLD:
            return _kronecker_mul(a, b, p)
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return [c % p for c in out]
    add, mul = field.add, field.mul
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            row = mul[x]
            for j, y in enumerate(b):
                if y:
                    out[i + j] = add[out[i + j]][row[y]]
    return out


def _series_inverse(f: Sequence[int], n: int, p: int) -> List[int]:
    """f·g ≡ 1 mod x^n（牛顿迭代，f[0] ≠ 0）"""
    g = [pow(f[0], p - 2, p)]
    k = 1
    while k < n:
        k = min(2 * k, n)
        fg = _mul_coeffs_prime(f[:k], g, p)[:k]
        err = [(-c) % p for c in fg] + [0] * (k - len(fg))
        err[0] = (err[0] + 2) % p
        g = _mul_coeffs_prime(g, err, p)[:k]
    return g


def _mul_coeffs_prime(a, b, p):
    if not a or not b:
        return []
    if min(len(a), len(b)) > config.KRONECKER_THRESHOLD:
        return _kronecker_mul(a, b, p)
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return [c % p for c in out]


def _divmod_coeffs(field: FiniteField, a: Sequence[int], b: Sequence[int]):
    lb = len(b)
    if len(a) < lb:
        return [], list(a)
    qlen = len(a) - lb + 1
    if field.is_prime:
        p = field.p
        if lb > config.NEWTON_THRESHOLD and qlen > config.NEWTON_THRESHOLD:
            inv = _series_inverse(b[::-1], qlen, p)
            rq = _mul_coeffs_prime(list(a[::-1][:qlen]), inv, p)[:qlen]
            quot = (rq + [0] * (qlen - len(rq)))[::-1]
            prod = _mul_coeffs_prime(b, quot, p)
            rem = [(x - y) % p for x, y in zip(a[:lb - 1], prod[:lb - 1])]
            return quot, rem
        inv_lc = pow(b[-1], p - 2, p)
        r = list(a)
        quot = [0] * qlen
        for i in range(qlen - 1, -1, -1):
            c = r[i + lb - 1] % p
            if not c:
                continue
            c = c * inv_lc % p
            quot[i] = c
            for j in range(lb - 1):
                if b[j]:
                    r[i + j] -= c * b[j]
        return quot, [x % p for x in r[:lb - 1]]
    sub, mul = field.sub, field.mul
    inv_lc = field.inv[b[-1]]
    r = list(a)
    quot = [0] * qlen
    for i in range(qlen - 1, -1, -1):
        c = r[i + lb - 1]
        if not c:
            continue
        c = mul[c][inv_lc]
        quot[i] = c
        row = mul[c]
        for j in range(lb - 1):
            if b[j]:
                r[i + j] = sub[r[i + j]][row[b[j]]]
    return quot, r[:lb - 1]


# ============== 多项式环 A = F_q[θ] ==============

class PolyA:
    """A = F_q[θ] 中的稠密多项式，系数为域编码，常数项在前，无尾零"""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FiniteField, coeffs: Sequence[int] = ()):
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        self.field = field
        self.coeffs = tuple(c)

    @classmethod
    def zero(cls, field: FiniteField) -> "PolyA":
        return cls(field, ())

    @classmethod
    def one(cls, field: FiniteField) -> "PolyA":
        return cls(field, (1,))

    @classmethod
    def constant(cls, field: FiniteField, code: int) -> "PolyA":
        return cls(field, (code,))

    @classmethod
    def theta(cls, field: FiniteField) -> "PolyA":
        return cls(field, (0, 1))

    @classmethod
    def monomial(cls, field: FiniteField, k: int, code: int = 1) -> "PolyA":
        return cls(field, [0] * k + [code])

    @classmethod
    def from_ints(cls, field: FiniteField, values: Sequence[int]) -> "PolyA":
        """整数系数取素子域中的像"""
        return cls(field, [field.from_int(v) for v in values])

    # ---- 基本属性 ----

    @property
    def degree(self) -> Degree:
        return len(self.coeffs) - 1 if self.coeffs else MINUS_INFINITY

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def coeff(self, k: int) -> int:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return self.coeffs == (1,)

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def is_monic(self) -> bool:
        return self.leading == 1

    def __bool__(self):
        return bool(self.coeffs)

    def monic(self) -> Tuple[int, "PolyA"]:
        """返回 (首项系数, 首一化后的多项式)"""
        lc = self.leading
        if lc in (0, 1):
            return lc, self
        return lc, self.scale(self.field.inv[lc])

    # ---- 算术 ----

    def _coerce(self, other) -> "PolyA":
        if isinstance(other, PolyA):
            if other.field is not self.field and other.field != self.field:
                raise DomainError("多项式属于不同的域")
            return other
        if isinstance(other, int):
            return PolyA(self.field, (self.field.from_int(other),))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        add = self.field.add
        out = list(a)
        for i, c in enumerate(b):
            if c:
                out[i] = add[out[i]][c]
        return PolyA(self.field, out)

    __radd__ = __add__

    def __neg__(self):
        neg = self.field.neg
        return PolyA(self.field, [neg[c] for c in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return PolyA(self.field, _mul_coeffs(self.field, self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def scale(self, code: int) -> "PolyA":
        if code == 0:
            return PolyA(self.field)
        if code == 1:
            return self
        row = self.field.mul[code]
        return PolyA(self.field, [row[c] for c in self.coeffs])

    def shift(self, k: int) -> "PolyA":
        """乘以 θ^k（k ≥ 0）"""
        if not self.coeffs or k == 0:
            return self
        return PolyA(self.field, (0,) * k + self.coeffs)

    def __pow__(self, k: int) -> "PolyA":
        if k < 0:
            raise DomainError("A 中多项式不能取负幂")
        result = PolyA.one(self.field)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __divmod__(self, other):
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("除以零多项式")
        quot, rem = _divmod_coeffs(self.field, self.coeffs, other.coeffs)
        return PolyA(self.field, quot), PolyA(self.field, rem)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_quotient(self, other: "PolyA") -> "PolyA":
        quot, rem = divmod(self, other)
        if rem:
            raise NonExactDivision(f"{other} 不整除 {self}")
        return quot

    def divides(self, other: "PolyA") -> bool:
        return not (other % self)

    def derivative(self) -> "PolyA":
        f = self.field
        return PolyA(f, [f.mul[f.from_int(i)][c] for i, c in enumerate(self.coeffs)][1:])

    def __call__(self, x: "PolyA") -> "PolyA":
        """代入 θ ↦ x（Horner）"""
        result = PolyA(self.field)
        for c in reversed(self.coeffs):
            result = result * x + PolyA(self.field, (c,))
        return result

    def evaluate(self, x: int) -> int:
        """在 F_q 的点 x 上取值"""
        add, mul = self.field.add, self.field.mul
        result = 0
        for c in reversed(self.coeffs):
            result = add[mul[result][x]][c]
        return result

    def frobenius(self, k: int) -> "PolyA":
        """a^{q^k} = Σ c_u θ^{u q^k}（系数在 F_q 中被 q 次幂固定）"""
        if k == 0 or len(self.coeffs) <= 1:
            return self
        step = self.field.q ** k
        out = [0] * ((len(self.coeffs) - 1) * step + 1)
        for u, c in enumerate(self.coeffs):
            out[u * step] = c
        return PolyA(self.field, out)

    def pow_mod(self, k: int, modulus: "PolyA") -> "PolyA":
        result = PolyA.one(self.field) % modulus
        base = self % modulus
        while k:
            if k & 1:
                result = (result * base) % modulus
            k >>= 1
            if k:
                base = (base * base) % modulus
        return result

    # ---- 比较与序列化 ----

    def __eq__(self, other):
        if isinstance(other, int):
            other = PolyA(self.field, (self.field.from_int(other),))
        if not isinstance(other, PolyA):
            return NotImplemented
        return self.coeffs == other.coeffs and self.field == other.field

    def __hash__(self):
        return hash(self.coeffs)

    def to_text(self) -> str:
        if not self.coeffs:
            return "0"
        return ",".join(self.field.code_text(c) for c in self.coeffs)

    @classmethod
    def from_text(cls, field: FiniteField, text: str) -> "PolyA":
        text = text.strip()
        if text in ("", "0"):
            return cls(field)
        return cls(field, [field.parse_code(part) for part in text.split(",")])

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            cs = self.field.code_text(c)
            if k == 0:
                terms.append(cs)
            else:
                mono = "θ" if k == 1 else f"θ^{k}"
                terms.append(mono if c == 1 else f"{cs}{mono}")
        return "+".join(terms)

    def __repr__(self):
        return f"PolyA({self})"


def theta_power(field: FiniteField, k: int) -> PolyA:
    return PolyA.monomial(field, k)


def poly_gcd(a: PolyA, b: PolyA) -> PolyA:
    """首一最大公因式（两者皆零时返回零）"""
    while b:
        a, b = b, a % b
    return a.monic()[1]


def poly_xgcd(a: PolyA, b: PolyA) -> Tuple[PolyA, PolyA, PolyA]:
    """返回 (g, u, v)，u·a + v·b = g，g 首一"""
    field = a.field
    r0, r1 = a, b
    s0, s1 = PolyA.one(field), PolyA.zero(field)
    t0, t1 = PolyA.zero(field), PolyA.one(field)
    while r1:
        quot, rem = divmod(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, s0 - quot * s1
        t0, t1 = t1, t0 - quot * t1
    lc = r0.leading
    if lc in (0, 1):
        return r0, s0, t0
    inv = field.inv[lc]
    return r0.scale(inv), s0.scale(inv), t0.scale(inv)


def poly_lcm(a: PolyA, b: PolyA) -> PolyA:
    if a.is_zero() or b.is_zero():
        return PolyA.zero(a.field)
    return (a // poly_gcd(a, b) * b).monic()[1]


# ============== 分式域 K ==============

class FracK:
    """K = F_q(θ) 中的元素：分母首一、分子分母互素"""

    __slots__ = ("num", "den")

    def __init__(self, num: PolyA, den: Optional[PolyA] = None):
        field = num.field
        if den is None:
            den = PolyA.one(field)
        if den.is_zero():
            raise ZeroDivisionError("分母为零")
        if num.is_zero():
            den = PolyA.one(field)
        elif not den.is_one():
            g = poly_gcd(num, den)
            if not g.is_one():
                num, den = num // g, den // g
            lc = den.leading
            if lc != 1:
                inv = field.inv[lc]
                num, den = num.scale(inv), den.scale(inv)
        self.num = num
        self.den = den

    @property
    def field(self) -> FiniteField:
        return self.num.field

    @classmethod
    def coerce(cls, x) -> "FracK":
        if isinstance(x, FracK):
            return x
        if isinstance(x, PolyA):
            return cls(x)
        raise TypeError(f"无法转换为 K 中元素: {x!r}")

    def _other(self, other):
        if isinstance(other, int):
            return FracK(PolyA(self.field, (self.field.from_int(other),)))
        if isinstance(other, (PolyA, FracK)):
            return FracK.coerce(other)
        return NotImplemented

    def __add__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return FracK(self.num + other.num, self.den)
        g = poly_gcd(self.den, other.den)
        a, b = self.den // g, other.den // g
        return FracK(self.num * b + other.num * a, self.den * b)

    __radd__ = __add__

    def __neg__(self):
        return FracK(-self.num, self.den)

    def __sub__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return FracK(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "FracK":
        if self.num.is_zero():
            raise ZeroDivisionError("零元不可逆")
        return FracK(self.den, self.num)

    def __truediv__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return FracK(self.num ** k, self.den ** k)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_integral(self) -> bool:
        return self.den.is_one()

    @property
    def degree(self) -> Degree:
        if self.num.is_zero():
            return MINUS_INFINITY
        return self.num.degree - self.den.degree

    def reduce_mod(self, ctx: "QuotCtx") -> PolyA:
        return ctx.reduce(self)

    def __eq__(self, other):
        if isinstance(other, (PolyA, int)):
            other = self._other(other)
        if not isinstance(other, FracK):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def to_text(self) -> str:
        return f"{self.num.to_text()}/{self.den.to_text()}"

    @classmethod
    def from_text(cls, field: FiniteField, text: str) -> "FracK":
        num, _, den = text.partition("/")
        return cls(PolyA.from_text(field, num), PolyA.from_text(field, den or "1"))

    def __repr__(self):
        return f"FracK(({self.num})/({self.den}))"


# ============== 首一多项式枚举与不可约性 ==============

def iter_monic(field: FiniteField, d: int) -> Iterator[PolyA]:
    """A^+(d)：次数恰为 d 的首一多项式，常数项变化最快"""
    for digits in itertools.product(range(field.q), repeat=d):
        yield PolyA(field, digits[::-1] + (1,))


def iter_all(field: FiniteField, d: int) -> Iterator[PolyA]:
    """A(d)：次数 < d 的全部多项式（含零）"""
    for digits in itertools.product(range(field.q), repeat=d):
        yield PolyA(field, digits[::-1])


def is_irreducible(P: PolyA) -> bool:
    """按次数分解：对 j ≤ d/2 检查 gcd(θ^{q^j} − θ mod P, P) = 1"""
    d = P.degree
    if d == MINUS_INFINITY or d < 1:
        return False
    if d == 1:
        return True
    P = P.monic()[1]
    field = P.field
    theta = PolyA.theta(field)
    h = theta % P
    for _ in range(d // 2):
        h = h.pow_mod(field.q, P)
        if not poly_gcd(h - theta, P).is_one():
            return False
    return True


def enumerate_irreducibles(field: FiniteField, d: int) -> List[PolyA]:
    """次数为 d 的全部首一不可约多项式（按 iter_monic 的顺序）"""
    if d < 1:
        raise DomainError("不可约多项式的次数必须 ≥ 1")
    return [P for P in iter_monic(field, d) if is_irreducible(P)]


def irreducible_count(q: int, d: int) -> int:
    """项链计数 (1/d) Σ_{k|d} μ(k) q^{d/k}"""
    return sum(int(mobius(k)) * q ** (d // k) for k in divisors(d)) // d


def primes_up_to(field: FiniteField, maxdeg: int) -> List[PolyA]:
    out: List[PolyA] = []
    for d in range(1, maxdeg + 1):
        out.extend(enumerate_irreducibles(field, d))
    return out


# ============== 商环 A/P ==============

class QuotCtx:
    """
    商环 A/P 的上下文

    构造时验证 P 首一不可约，并预计算 Frobenius 表 θ^{q^j} mod P（j = 0..d）。
    """

    def __init__(self, P: PolyA):
        if not P.is_monic():
            raise DomainError(f"素元 {P} 必须首一")
        if not is_irreducible(P):
            raise DomainError(f"{P} 不是不可约多项式")
        self.P = P
        self.field = P.field
        self.d = P.degree
        table = [PolyA.theta(self.field) % P]
        for _ in range(self.d):
            table.append(table[-1].pow_mod(self.field.q, P))
        self.frobenius_table = tuple(table)

    def reduce(self, x) -> PolyA:
        if isinstance(x, int):
            return PolyA(self.field, (self.field.from_int(x),))
        if isinstance(x, FracK):
            return (x.num % self.P) * self.inv(x.den) % self.P
        return x % self.P

    def mul(self, a: PolyA, b: PolyA) -> PolyA:
        return (a * b) % self.P

    def inv(self, a: PolyA) -> PolyA:
        g, u, _ = poly_xgcd(a % self.P, self.P)
        if not g.is_one():
            raise NotAUnit(f"{a} 模 {self.P} 不可逆")
        return u % self.P

    def pow(self, a: PolyA, k: int) -> PolyA:
        if k < 0:
            return self.inv(a).pow_mod(-k, self.P)
        return a.pow_mod(k, self.P)

    def frobenius(self, j: int) -> PolyA:
        """θ^{q^j} mod P"""
        return self.frobenius_table[j % self.d]

    def frobenius_inverse(self, j: int) -> PolyA:
        """θ^{q^{-j}} 的实现：θ^{q^{d-j}} mod P"""
        return self.frobenius_table[(-j) % self.d]

    @property
    def label(self) -> str:
        return self.P.to_text()

    def __eq__(self, other):
        return isinstance(other, QuotCtx) and self.P == other.P

    def __hash__(self):
        return hash(self.P)

    def __repr__(self):
        return f"QuotCtx({self.P})"


def invert_mod(a, ctx: QuotCtx):
    """
    模 P 求逆

    Args:
        a: PolyA / FracK，或只含常数项的 MPoly（(A/P)[t] 中的单位）
        ctx: 商环上下文

    Returns:
        与输入同类的逆元
    """
    if isinstance(a, (PolyA, FracK)):
        return ctx.inv(ctx.reduce(a))
    from mpoly import MPoly
    if isinstance(a, MPoly):
        if not a.is_constant():
            raise NotAUnit("只支持对 t 无关的元素求逆")
        return MPoly.constant(a.field, ctx.inv(ctx.reduce(a.constant_value())), a.vars)
    raise TypeError(f"无法求逆: {a!r}")


# ============== 累加器 ==============

class PolyAccumulator:
    """
    累加 Σ c_i·w_i（c_i ∈ F_q, w_i ∈ A）

    素数域上把 w_i 打包成大整数（每槽 8 字节），乘加都在整数上完成。
    """

    SLOT_BYTES = 8

    def __init__(self, field: FiniteField):
        self.field = field
        self._total = 0
        self._length = 0
        self._coeffs: List[int] = []

    def pack(self, w: PolyA):
        if self.field.is_prime:
            return (_pack(w.coeffs, self.SLOT_BYTES), len(w.coeffs))
        return w.coeffs

    def add(self, packed, scalar: int):
        if not scalar:
            return
        if self.field.is_prime:
            value, length = packed
            self._total += scalar * value
            if length > self._length:
                self._length = length
            return
        coeffs = packed
        if len(coeffs) > len(self._coeffs):
            self._coeffs.extend([0] * (len(coeffs) - len(self._coeffs)))
        add, row = self.field.add, self.field.mul[scalar]
        for i, c in enumerate(coeffs):
            if c:
                self._coeffs[i] = add[self._coeffs[i]][row[c]]

    def value(self) -> PolyA:
        if self.field.is_prime:
            if not self._length:
                return PolyA(self.field)
            return PolyA(self.field, _unpack(self._total, self.SLOT_BYTES, self._length, self.field.p))
        return PolyA(self.field, self._coeffs)
