"""
多元多项式 - A[t_1..t_s, Y, z] 与其分式版本 K[t_1..t_s, Y, z]

θ 不作为显式变量出现：每个单项式的系数是一个 PolyA（θ 的多项式），
这与把 θ 列为变量的稀疏表示同构，但乘法与整除可以直接复用 A 的算术。
"""

import itertools
import logging
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from sympy.utilities.iterables import multiset_permutations

from algebra import (
    MINUS_INFINITY, FiniteField, FracK, PolyA, QuotCtx, poly_gcd,
)
from errors import ArityMismatch, DomainError, NonExactDivision

logger = logging.getLogger(__name__)

Exps = Tuple[int, ...]

THETA = "theta"


def var_key(name: str) -> Tuple[int, int]:
    """变量序：t_1 < t_2 < … < Y < z（θ 隐含在系数中，排在最前）"""
    if name == "Y":
        return (1, 0)
    if name == "z":
        return (2, 0)
    if name.startswith("t") and name[1:].isdigit() and int(name[1:]) >= 1:
        return (0, int(name[1:]))
    raise ArityMismatch(f"未知变量名 {name!r}")


def t_vars(s: int) -> Tuple[str, ...]:
    return tuple(f"t{i}" for i in range(1, s + 1))


def grlex_key(exps: Exps):
    """分次字典序：先比总次数，再从最大的变量开始比较"""
    return (sum(exps), exps[::-1])


class MPoly:
    """
    稀疏多元多项式

    Attributes:
        field: 系数域 F_q
        vars: 按 var_key 排序的变量名
        terms: 指数向量 -> 非零 PolyA 系数
    """

    __slots__ = ("field", "vars", "terms")

    def __init__(self, field: FiniteField, vars: Sequence[str] = (),
                 terms: Optional[Dict[Exps, PolyA]] = None, *, trusted: bool = False):
        terms = terms or {}
        if trusted:
            self.field = field
            self.vars = tuple(vars)
            self.terms = terms
            return
        vars = tuple(vars)
        if len(set(vars)) != len(vars):
            raise ArityMismatch(f"变量重复: {vars}")
        order = sorted(range(len(vars)), key=lambda i: var_key(vars[i]))
        clean = {}
        for exps, c in terms.items():
            if len(exps) != len(vars):
                raise ArityMismatch(f"指数向量 {exps} 与变量 {vars} 长度不符")
            if isinstance(c, int):
                c = PolyA(field, (field.from_int(c),))
            if c:
                key = tuple(exps[i] for i in order)
                clean[key] = clean[key] + c if key in clean else c
                if not clean[key]:
                    del clean[key]
        self.field = field
        self.vars = tuple(vars[i] for i in order)
        self.terms = clean

    # ---- 构造 ----

    @classmethod
    def zero(cls, field: FiniteField, vars: Sequence[str] = ()) -> "MPoly":
        return cls(field, vars)

    @classmethod
    def constant(cls, field: FiniteField, c, vars: Sequence[str] = ()) -> "MPoly":
        if isinstance(c, int):
            c = PolyA(field, (field.from_int(c),))
        vars = tuple(sorted(vars, key=var_key))
        if not c:
            return cls(field, vars, {}, trusted=True)
        return cls(field, vars, {(0,) * len(vars): c}, trusted=True)

    @classmethod
    def one(cls, field: FiniteField, vars: Sequence[str] = ()) -> "MPoly":
        return cls.constant(field, PolyA.one(field), vars)

    @classmethod
    def var(cls, field: FiniteField, name: str, power: int = 1) -> "MPoly":
        var_key(name)
        return cls(field, (name,), {(power,): PolyA.one(field)}, trusted=True)

    @classmethod
    def univariate(cls, name: str, coeffs: Sequence[PolyA]) -> "MPoly":
        """Σ coeffs[k]·name^k"""
        field = coeffs[0].field
        var_key(name)
        return cls(field, (name,), {(k,): c for k, c in enumerate(coeffs) if c}, trusted=True)

    # ---- 变量集合 ----

    def extend(self, vars: Sequence[str]) -> "MPoly":
        """在更大的变量集合上重新表示"""
        vars = tuple(vars)
        if vars == self.vars:
            return self
        index = {v: i for i, v in enumerate(vars)}
        missing = [v for v in self.vars if v not in index]
        if missing:
            raise ArityMismatch(f"变量 {missing} 不在 {vars} 中")
        pos = [index[v] for v in self.vars]
        terms = {}
        for exps, c in self.terms.items():
            new = [0] * len(vars)
            for p, e in zip(pos, exps):
                new[p] = e
            terms[tuple(new)] = c
        return MPoly(self.field, vars, terms, trusted=True)

    def compact(self) -> "MPoly":
        """去掉所有未出现的变量"""
        used = [i for i in range(len(self.vars)) if any(exps[i] for exps in self.terms)]
        if len(used) == len(self.vars):
            return self
        terms = {tuple(exps[i] for i in used): c for exps, c in self.terms.items()}
        return MPoly(self.field, tuple(self.vars[i] for i in used), terms, trusted=True)

    def _unify(self, other: "MPoly"):
        if self.vars == other.vars:
            return self, other
        vars = tuple(sorted(set(self.vars) | set(other.vars), key=var_key))
        return self.extend(vars), other.extend(vars)

    def _coerce(self, other):
        if isinstance(other, MPoly):
            return other
        if isinstance(other, (PolyA, int)):
            return MPoly.constant(self.field, other, self.vars)
        return NotImplemented

    # ---- 算术 ----

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._unify(other)
        terms = dict(a.terms)
        for exps, c in b.terms.items():
            if exps in terms:
                v = terms[exps] + c
                if v:
                    terms[exps] = v
                else:
                    del terms[exps]
            else:
                terms[exps] = c
        return MPoly(self.field, a.vars, terms, trusted=True)

    __radd__ = __add__

    def __neg__(self):
        return MPoly(self.field, self.vars, {e: -c for e, c in self.terms.items()}, trusted=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            other = PolyA(self.field, (self.field.from_int(other),))
        if isinstance(other, PolyA):
            if not other:
                return MPoly(self.field, self.vars, {}, trusted=True)
            return MPoly(self.field, self.vars,
                         {e: c * other for e, c in self.terms.items()}, trusted=True)
        if not isinstance(other, MPoly):
            return NotImplemented
        a, b = self._unify(other)
        terms: Dict[Exps, PolyA] = {}
        for ea, ca in a.terms.items():
            for eb, cb in b.terms.items():
                key = tuple(x + y for x, y in zip(ea, eb))
                prod = ca * cb
                if key in terms:
                    terms[key] = terms[key] + prod
                else:
                    terms[key] = prod
        terms = {e: c for e, c in terms.items() if c}
        return MPoly(self.field, a.vars, terms, trusted=True)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "MPoly":
        if k < 0:
            raise DomainError("多项式不能取负幂")
        result = MPoly.one(self.field, self.vars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def map_coeffs(self, fn: Callable[[PolyA], PolyA]) -> "MPoly":
        terms = {}
        for e, c in self.terms.items():
            v = fn(c)
            if v:
                terms[e] = v
        return MPoly(self.field, self.vars, terms, trusted=True)

    def reduce_mod(self, ctx: QuotCtx) -> "MPoly":
        """系数约化到 A/P"""
        return self.map_coeffs(ctx.reduce)

    # ---- 查询 ----

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> PolyA:
        return self.terms.get((0,) * len(self.vars), PolyA.zero(self.field))

    def degree(self, name: str):
        if name not in self.vars:
            return 0 if self.terms else MINUS_INFINITY
        i = self.vars.index(name)
        return max((e[i] for e in self.terms), default=MINUS_INFINITY)

    @property
    def total_degree(self):
        return max((sum(e) for e in self.terms), default=MINUS_INFINITY)

    @property
    def theta_degree(self):
        return max((c.degree for c in self.terms.values()), default=MINUS_INFINITY)

    def leading_term(self) -> Tuple[Exps, PolyA]:
        exps = max(self.terms, key=grlex_key)
        return exps, self.terms[exps]

    def coefficient(self, fixed: Dict[str, int]) -> "MPoly":
        """固定部分变量的指数，返回其余变量上的系数多项式"""
        for name in fixed:
            var_key(name)
        idx = {name: self.vars.index(name) for name in fixed if name in self.vars}
        if any(fixed[name] for name in fixed if name not in idx):
            return MPoly(self.field, [v for v in self.vars if v not in fixed], {}, trusted=True)
        keep = [i for i, v in enumerate(self.vars) if v not in fixed]
        terms = {}
        for exps, c in self.terms.items():
            if all(exps[i] == fixed[name] for name, i in idx.items()):
                terms[tuple(exps[i] for i in keep)] = c
        return MPoly(self.field, tuple(self.vars[i] for i in keep), terms, trusted=True)

    def slices(self, name: str) -> Dict[int, "MPoly"]:
        """按变量 name 的次数切片"""
        if name not in self.vars:
            return {0: self} if self.terms else {}
        i = self.vars.index(name)
        rest = self.vars[:i] + self.vars[i + 1:]
        out: Dict[int, Dict[Exps, PolyA]] = {}
        for exps, c in self.terms.items():
            out.setdefault(exps[i], {})[exps[:i] + exps[i + 1:]] = c
        return {k: MPoly(self.field, rest, t, trusted=True) for k, t in sorted(out.items())}

    def coeff_of(self, mono: Dict[str, int]) -> PolyA:
        """单项式 mono 的 θ-系数"""
        exps = tuple(mono.get(v, 0) for v in self.vars)
        if any(v not in self.vars and e for v, e in mono.items()):
            return PolyA.zero(self.field)
        return self.terms.get(exps, PolyA.zero(self.field))

    def is_symmetric(self, names: Sequence[str]) -> bool:
        idx = [self.vars.index(v) for v in names if v in self.vars]
        if len(idx) < len(names):
            return all(e[i] == 0 for e in self.terms for i in idx)
        for exps, c in self.terms.items():
            for perm in itertools.permutations(idx):
                new = list(exps)
                for src, dst in zip(idx, perm):
                    new[dst] = exps[src]
                if self.terms.get(tuple(new)) != c:
                    return False
        return True

    # ---- 比较与序列化 ----

    def __eq__(self, other):
        if isinstance(other, (PolyA, int)):
            other = MPoly.constant(self.field, other, self.vars)
        if not isinstance(other, MPoly):
            return NotImplemented
        a, b = self._unify(other)
        return a.terms == b.terms

    def __hash__(self):
        return hash(frozenset(
            (tuple((v, e) for v, e in zip(self.vars, exps) if e), c)
            for exps, c in self.terms.items()))

    def sorted_terms(self) -> List[Tuple[Exps, PolyA]]:
        return sorted(self.terms.items(), key=lambda kv: grlex_key(kv[0]), reverse=True)

    def to_text(self) -> str:
        lines = ["vars:" + ",".join(self.vars)]
        for exps, c in self.sorted_terms():
            lines.append(",".join(str(e) for e in exps) + ":" + c.to_text())
        return "\n".join(lines)

    @classmethod
    def from_text(cls, field: FiniteField, text: str) -> "MPoly":
        lines = [line for line in text.strip().splitlines() if line.strip()]
        if not lines or not lines[0].startswith("vars:"):
            raise ValueError("缺少变量声明行")
        header = lines[0][len("vars:"):].strip()
        vars = tuple(v for v in header.split(",") if v)
        terms = {}
        for line in lines[1:]:
            exps_text, _, coeff_text = line.partition(":")
            exps = tuple(int(e) for e in exps_text.split(",") if e != "")
            terms[exps] = PolyA.from_text(field, coeff_text)
        return cls(field, vars, terms)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for exps, c in self.sorted_terms():
            mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in zip(self.vars, exps) if e)
            cs = str(c)
            if not mono:
                parts.append(cs)
            elif c.is_one():
                parts.append(mono)
            else:
                parts.append(f"({cs})*{mono}")
        return " + ".join(parts)

    def __repr__(self):
        return f"MPoly({self})"


class MPolyK:
    """K 系数多项式：num / den，den ∈ A 首一，且与 num 的全部系数互素"""

    __slots__ = ("num", "den")

    def __init__(self, num: MPoly, den: Optional[PolyA] = None):
        field = num.field
        if den is None:
            den = PolyA.one(field)
        if den.is_zero():
            raise ZeroDivisionError("分母为零")
        if num.is_zero():
            den = PolyA.one(field)
        elif not den.is_one():
            g = den
            for c in num.terms.values():
                g = poly_gcd(g, c)
                if g.is_one():
                    break
            if not g.is_one():
                num = num.map_coeffs(lambda c: c // g)
                den = den // g
            lc = den.leading
            if lc != 1:
                inv = field.inv[lc]
                num, den = num * PolyA.constant(field, inv), den.scale(inv)
        self.num = num
        self.den = den

    @property
    def field(self) -> FiniteField:
        return self.num.field

    @property
    def vars(self) -> Tuple[str, ...]:
        return self.num.vars

    @classmethod
    def coerce(cls, x, field: Optional[FiniteField] = None) -> "MPolyK":
        if isinstance(x, MPolyK):
            return x
        if isinstance(x, MPoly):
            return cls(x)
        if isinstance(x, PolyA):
            return cls(MPoly.constant(x.field, x))
        if isinstance(x, FracK):
            return cls(MPoly.constant(x.field, x.num), x.den)
        if isinstance(x, int) and field is not None:
            return cls(MPoly.constant(field, x))
        raise TypeError(f"无法转换为 MPolyK: {x!r}")

    def _other(self, other):
        try:
            return MPolyK.coerce(other, self.field)
        except TypeError:
            return NotImplemented

    def __add__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return MPolyK(self.num + other.num, self.den)
        g = poly_gcd(self.den, other.den)
        a, b = self.den // g, other.den // g
        return MPolyK(self.num * b + other.num * a, self.den * b)

    __radd__ = __add__

    def __neg__(self):
        return MPolyK(-self.num, self.den)

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
        return MPolyK(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        """只允许除以与 t/Y/z 无关的元素"""
        if isinstance(other, (MPoly, MPolyK)):
            other = MPolyK.coerce(other)
            if not other.num.is_constant():
                raise DomainError("分母中不允许出现 t、Y 或 z")
            other = FracK(other.num.constant_value(), other.den)
        elif isinstance(other, PolyA):
            other = FracK(other)
        elif isinstance(other, int):
            other = FracK(PolyA(self.field, (self.field.from_int(other),)))
        inv = other.inverse()
        return MPolyK(self.num * inv.num, self.den * inv.den)

    def __pow__(self, k: int) -> "MPolyK":
        if k < 0:
            return MPolyK.coerce(1, self.field) / (self ** (-k))
        return MPolyK(self.num ** k, self.den ** k)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_one()

    def to_mpoly(self) -> MPoly:
        if not self.den.is_one():
            raise NonExactDivision(f"分母 {self.den} 未消去")
        return self.num

    def reduce_mod(self, ctx: QuotCtx) -> MPoly:
        """在 (A/P)[t..] 中的像（分母须与 P 互素）"""
        inv = ctx.inv(self.den)
        return self.num.map_coeffs(lambda c: ctx.mul(c, inv))

    def degree(self, name: str):
        return self.num.degree(name)

    def __eq__(self, other):
        if isinstance(other, (MPoly, PolyA, FracK, int)):
            other = MPolyK.coerce(other, self.field)
        if not isinstance(other, MPolyK):
            return NotImplemented
        return self.den == other.den and self.num == other.num

    def __hash__(self):
        return hash((self.num, self.den))

    def to_text(self) -> str:
        return "den:" + self.den.to_text() + "\n" + self.num.to_text()

    @classmethod
    def from_text(cls, field: FiniteField, text: str) -> "MPolyK":
        first, _, rest = text.strip().partition("\n")
        if not first.startswith("den:"):
            raise ValueError("缺少分母行")
        return cls(MPoly.from_text(field, rest), PolyA.from_text(field, first[len("den:"):]))

    def __repr__(self):
        if self.den.is_one():
            return f"MPolyK({self.num})"
        return f"MPolyK(({self.num}) / ({self.den}))"


# ============== 整除与代入 ==============

def exact_div(f: MPoly, g: MPoly) -> MPoly:
    """
    多项式环 A[vars] 中的精确除法（首项消去法）

    Raises:
        NonExactDivision: 出现非零余项
    """
    if isinstance(f, MPolyK):
        f = f.to_mpoly()
    if isinstance(g, MPolyK):
        g = g.to_mpoly()
    if g.is_zero():
        raise ZeroDivisionError("除以零多项式")
    f, g = f._unify(g)
    if f.is_zero():
        return MPoly(f.field, f.vars, {}, trusted=True)
    g_exps, g_lc = g.leading_term()
    g_terms = list(g.terms.items())
    rem = dict(f.terms)
    quot: Dict[Exps, PolyA] = {}
    while rem:
        exps = max(rem, key=grlex_key)
        diff = tuple(a - b for a, b in zip(exps, g_exps))
        if any(x < 0 for x in diff):
            raise NonExactDivision(f"首项 {exps} 不能被 {g_exps} 整除")
        c = rem[exps].exact_quotient(g_lc)
        quot[diff] = c
        for ge, gc in g_terms:
            key = tuple(a + b for a, b in zip(ge, diff))
            v = rem.get(key, PolyA.zero(f.field)) - gc * c
            if v:
                rem[key] = v
            else:
                rem.pop(key, None)
    return MPoly(f.field, f.vars, quot, trusted=True)


def _substitute_theta(f: MPoly, value: PolyA) -> MPoly:
    return f.map_coeffs(lambda c: c(value))


def substitute(f, bindings: Dict[str, object]) -> MPolyK:
    """
    代入同态：把 bindings 中的变量替换为给定的 K 系数多项式

    未绑定的变量保持不动；绑定了 f 中未出现的合法变量名不产生影响。
    θ 可以用名字 "theta" 绑定到 A 中的元素。

    Raises:
        ArityMismatch: 变量名未知
    """
    if isinstance(f, MPolyK):
        num, den = f.num, f.den
    elif isinstance(f, MPoly):
        num, den = f, PolyA.one(f.field)
    else:
        raise TypeError(f"无法代入: {f!r}")
    field = num.field
    bindings = dict(bindings)
    theta_value = bindings.pop(THETA, None)
    for name in bindings:
        var_key(name)
    if theta_value is not None:
        if isinstance(theta_value, MPolyK) and theta_value.num.is_constant() and theta_value.is_polynomial():
            theta_value = theta_value.num.constant_value()
        if not isinstance(theta_value, PolyA):
            raise DomainError("θ 只能代入 A 中的元素")
        num = _substitute_theta(num, theta_value)
        den = den(theta_value)
        if den.is_zero():
            raise ZeroDivisionError("代入后分母为零")

    bound = [i for i, v in enumerate(num.vars) if v in bindings]
    if not bound:
        return MPolyK(num, den)
    keep = [i for i, v in enumerate(num.vars) if v not in bindings]
    keep_vars = tuple(num.vars[i] for i in keep)
    values = {num.vars[i]: MPolyK.coerce(bindings[num.vars[i]], field) for i in bound}

    groups: Dict[Exps, Dict[Exps, PolyA]] = {}
    for exps, c in num.terms.items():
        groups.setdefault(tuple(exps[i] for i in bound), {})[tuple(exps[i] for i in keep)] = c

    powers: Dict[Tuple[str, int], MPolyK] = {}

    def power(name: str, e: int) -> MPolyK:
        if (name, e) not in powers:
            powers[(name, e)] = values[name] ** e
        return powers[(name, e)]

    result = MPolyK(MPoly(field, keep_vars, {}, trusted=True))
    for bexps, part in sorted(groups.items()):
        term = MPolyK(MPoly(field, keep_vars, part, trusted=True))
        for i, e in zip(bound, bexps):
            if e:
                term = term * power(num.vars[i], e)
        result = result + term
    return result / den if not den.is_one() else result


# ============== 对称多项式表 ==============

def sym_keys(s: int, maxdeg: int) -> List[Exps]:
    """各分量在 [0, maxdeg] 内的非降指数向量"""
    return list(itertools.combinations_with_replacement(range(maxdeg + 1), s))


def expand_symmetric(field: FiniteField, table: Dict[Exps, PolyA], s: int) -> MPoly:
    """把按排序指数记录的对称多项式展开到全部排列"""
    vars = t_vars(s)
    terms: Dict[Exps, PolyA] = {}
    for key, c in table.items():
        if not c:
            continue
        if s == 0:
            terms[()] = c
            continue
        for perm in multiset_permutations(list(key)):
            terms[tuple(perm)] = c
    return MPoly(field, vars, terms, trusted=True)


def symmetric_table(f: MPoly, s: int) -> Dict[Exps, PolyA]:
    """对称多项式在非降指数向量上的系数"""
    f = f.extend(tuple(sorted(set(f.vars) | set(t_vars(s)), key=var_key)))
    idx = [f.vars.index(v) for v in t_vars(s)]
    out = {}
    for exps, c in f.terms.items():
        key = tuple(exps[i] for i in idx)
        if list(key) == sorted(key):
            out[key] = c
    return out


def product_of_univariates(factors: Iterable[MPoly]) -> MPoly:
    result = None
    for f in factors:
        result = f if result is None else result * f
    return result
