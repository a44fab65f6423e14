"""
命令实现 - compute-h / verify / scan

每个命令把工作项分发给进程池（threads = 1 时在本进程内执行），按输入顺序
收集结果，组装成 ResultBundle 并写出 CSV 表格与 JSON 报告。
"""

import json
import logging
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from tqdm import tqdm

import config
import hcache
from algebra import FiniteField, get_field, irreducible_count
from errors import (BudgetExceeded, ConfigError, DomainError, HARD_FAILURES,
                    PrecisionExceeded, RouteMismatch)
from finzeta import (ScanReport, Status, bc_unit_scan, conjecture_scan, prop1_scan,
                     psi_nonvanish_check, theorem1_scan)
from hpoly import (HPolynomial, h_interpolate, h_row, h_universal, interp_crosscheck,
                   interpolation_degrees, power_sum_via_h, resolve_sign, special_h,
                   eq10_check, h_params)
from reports import ResultBundle, RunConfig, save_bundle, write_report, write_table
from sums import SumSpec, closed_form_check, power_sum, simon_sum
from tate import (gamma_property_check, lambda_analytic, lambda_limit_report, lemma_ident_check,
                  lower_coeff_verify, nu_value_report)

logger = logging.getLogger(__name__)


VERIFY_COMMANDS = (
    "theorem2-grid", "theorem5", "lemma6", "lambda-limit", "lower-coeffs", "nu",
    "interp-crosscheck", "closed-form", "simon", "eq10", "gamma", "psi",
)
SCAN_COMMANDS = ("conjecture", "prop1", "theorem1", "bc-units")


# ============== 工具 ==============

def make_field(cfg: RunConfig) -> FiniteField:
    return get_field(cfg.p, cfg.e, cfg.modulus or None)


def estimate_cost(q: int, degrees: Iterable[int], weight: int = 1) -> int:
    """工作量估计：Σ q^d（乘以每个 d 上的重复次数）"""
    return weight * sum(q ** d for d in degrees)


def check_budget(cfg: RunConfig, cost: int, what: str):
    if cost > config.COST_GUARD and not cfg.force:
        raise BudgetExceeded(
            f"{what}: 估计工作量 {cost:.3g} 超过上限 {config.COST_GUARD:.3g}（用 --force 强制执行）")
    logger.debug(f"{what}: 估计工作量 {cost}")


def pool_map(func: Callable, items: Iterable, threads: int = 1,
             desc: str = "", quiet: bool = False) -> List:
    """按输入顺序返回结果；线程数不影响结果"""
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [func(item) for item in tqdm(items, desc=desc, disable=quiet, leave=False)]
    chunksize = max(1, len(items) // (threads * 4))
    with ProcessPoolExecutor(max_workers=threads) as pool:
        results = pool.map(func, items, chunksize=chunksize)
        return list(tqdm(results, total=len(items), desc=desc, disable=quiet, leave=False))


def _row_task(item: Tuple):
    field_key, s, d = item
    return h_row(get_field(*field_key), s, d)


def _stem(cfg: RunConfig, field: FiniteField) -> str:
    name = cfg.command if not cfg.subcommand else f"{cfg.command}_{cfg.subcommand}"
    label = field.label.replace("[", "_").replace("]", "").replace(",", "")
    return f"{name}_{label}"


def _window(lo: Optional[int], hi: Optional[int], start: int, length: int) -> List[int]:
    lo = start if lo is None else lo
    hi = lo + length - 1 if hi is None else hi
    return list(range(lo, hi + 1))


# ============== 命令执行器 ==============

class Runner:
    """一次命令的上下文：配置、域、进程池参数与结果包"""

    def __init__(self, cfg: RunConfig, quiet: bool = False):
        self.cfg = cfg
        self.field = make_field(cfg)
        self.q = self.field.q
        self.quiet = quiet
        label = cfg.command if not cfg.subcommand else f"{cfg.command} {cfg.subcommand}"
        self.bundle = ResultBundle(command=label, config_hash=cfg.content_hash())
        self._h: Dict[int, HPolynomial] = {}

    # ---------- 公共部分 ----------

    def mapper(self, desc: str) -> Callable:
        return partial(pool_map, threads=self.cfg.threads, desc=desc, quiet=self.quiet)

    def s_values(self, default: Sequence[int]) -> List[int]:
        return list(self.cfg.s) if self.cfg.s else list(default)

    def grid_s(self) -> List[int]:
        values = self.s_values(config.DEFAULT_S_GRID.get(self.q, (self.q,)))
        for s in values:
            try:
                h_params(self.q, s)
            except DomainError as exc:
                raise ConfigError(f"--s: {exc}") from None
        return values

    def check(self, name: str, coords: Dict, fn: Callable[[], Tuple[bool, str]],
              finding: bool = False) -> Optional[bool]:
        """
        执行一项检查并记录；违反恒等式的错误记为失败，精度或预算不足记为未完成
        """
        try:
            passed, detail = fn()
        except HARD_FAILURES as exc:
            passed, detail = False, f"{type(exc).__name__}: {exc}"
        except (PrecisionExceeded, BudgetExceeded) as exc:
            self.bundle.mark_incomplete(f"{name} {coords}: {exc}")
            logger.warning(f"{name} {coords} 未完成: {exc}")
            return None
        except DomainError as exc:
            raise ConfigError(f"{name} {coords}: {exc}") from None
        self.bundle.add(name, passed, coords, detail, finding=finding)
        if not passed:
            level = logging.INFO if finding else logging.WARNING
            logger.log(level, f"{name} {coords}: {detail}")
        return passed

    def get_h(self, s: int) -> HPolynomial:
        """ℍ_s：先读缓存（--force 时跳过），否则并行计算 H_{s,d} 后插值并写入缓存"""
        if s in self._h:
            return self._h[s]
        if s == 1:
            return special_h(self.field)
        H = None if self.cfg.force else hcache.load(self.field, s, self.cfg.cache_dir)
        if H is None:
            nodes, holdouts = interpolation_degrees(self.q, s)
            degrees = nodes + holdouts
            check_budget(self.cfg, estimate_cost(self.q, degrees), f"ℍ_{s}")
            items = [(self.field.key, s, d) for d in degrees]
            rows = dict(zip(degrees, pool_map(_row_task, items, self.cfg.threads,
                                               desc=f"H_{{{s},d}}", quiet=self.quiet)))
            H = h_interpolate(self.field, s, rows)
            hcache.store(H, resolve_sign(H).h_q, self.cfg.cache_dir)
        self._h[s] = H
        return H

    def finish(self) -> ResultBundle:
        path = save_bundle(self.bundle, self.cfg.out_dir)
        logger.info(f"结果包已写入 {path}")
        return self.bundle

    # ---------- compute-h ----------

    def compute_h(self) -> ResultBundle:
        rows = []
        for s in self.grid_s():
            coords = {"q": self.q, "s": s}
            try:
                h_params(self.q, s)
                if s < self.q:
                    raise DomainError(f"s = {s} < q = {self.q}")
                nodes, holdouts = interpolation_degrees(self.q, s)
                check_budget(self.cfg, estimate_cost(self.q, nodes + holdouts), f"ℍ_{s}")
            except DomainError as exc:
                raise ConfigError(f"compute-h: {exc}") from None
            except BudgetExceeded as exc:
                self.bundle.mark_incomplete(str(exc))
                logger.warning(str(exc))
                continue

            state = {}

            def build():
                cached = None if self.cfg.force else hcache.load(self.field, s, self.cfg.cache_dir)
                if cached is not None:
                    self._h[s] = cached
                H = self.get_h(s)
                other = h_universal(self.field, s, check=False)
                if other != H:
                    raise RouteMismatch(f"ℍ_{s}：万有关系路线与插值路线不一致")
                sign = resolve_sign(H)
                state.update(H=H, sign=sign, path=hcache.store(H, sign.h_q, self.cfg.cache_dir))
                note = "缓存已存在，校验一致" if cached is not None else "已写入缓存"
                return True, f"{note}; ℍ_q = {sign.h_q:+d}, λ 首项符号 {sign.lambda_sign:+d}"

            if not self.check("compute-h", coords, build):
                continue
            H, sign = state["H"], state["sign"]
            summary = H.degree_summary()
            degrees_ok = summary["y_degree"] == H.mu and summary["t_degree"] == H.m - 1
            self.bundle.add("degree-claims", degrees_ok, coords,
                            f"deg_Y = {summary['y_degree']}, deg_t = {summary['t_degree']}")
            rows.append([self.q, self.field.label, s, H.m, H.mu, summary["y_degree"],
                         summary["t_degree"], summary["theta_degree"], summary["terms"],
                         sign.h_q, sign.lambda_sign, sign.bs_factor, state["path"]])

        write_table(self.bundle, self.cfg.out_dir, _stem(self.cfg, self.field),
                    ["q", "f", "s", "m", "mu", "deg_Y", "deg_t", "deg_theta", "terms",
                     "h_q", "lambda_sign", "bs_factor", "cache"], rows)
        return self.finish()

    # ---------- verify ----------

    def verify(self) -> ResultBundle:
        handler = {
            "theorem2-grid": self._verify_theorem2,
            "theorem5": self._verify_theorem5,
            "lemma6": self._verify_lemma6,
            "lambda-limit": self._verify_lambda,
            "lower-coeffs": self._verify_lower,
            "nu": self._verify_nu,
            "interp-crosscheck": self._verify_interp,
            "closed-form": self._verify_closed_form,
            "simon": self._verify_simon,
            "eq10": self._verify_eq10,
            "gamma": self._verify_gamma,
            "psi": self._verify_psi,
        }.get(self.cfg.subcommand)
        if handler is None:
            raise ConfigError(f"未知的 verify 子命令 {self.cfg.subcommand!r}")
        rows = handler()
        if rows:
            write_table(self.bundle, self.cfg.out_dir, _stem(self.cfg, self.field),
                        ["name", "coords", "outcome", "detail"], rows)
        return self.finish()

    def _rows(self) -> List[List[str]]:
        return [[c.name, json.dumps(c.coords, sort_keys=True), c.outcome, c.detail]
                for c in self.bundle.checks]

    def _h_or_incomplete(self, s: int) -> Optional[HPolynomial]:
        try:
            return self.get_h(s)
        except BudgetExceeded as exc:
            self.bundle.mark_incomplete(str(exc))
            logger.warning(str(exc))
            return None
        except HARD_FAILURES as exc:
            self.bundle.add("compute-h", False, {"q": self.q, "s": s}, f"{type(exc).__name__}: {exc}")
            return None

    def _verify_theorem2(self):
        for s in self.grid_s():
            H = self._h_or_incomplete(s)
            if H is None:
                continue
            coords = {"q": self.q, "s": s}

            def routes():
                other = h_universal(self.field, s, check=False)
                return other == H, "两条路线一致" if other == H else "两条路线不一致"

            def degrees():
                ok = H.y_degree == H.mu and H.t_degree == H.m - 1
                return ok, f"deg_Y = {H.y_degree} (μ = {H.mu}), deg_t = {H.t_degree} (m−1 = {H.m - 1})"

            def leading():
                lam, report = lambda_limit_report(H, self.cfg.d_lo, self.cfg.d_hi)
                top = H.y_coefficient(H.mu)
                if lam == -top:
                    return True, "λ = −(Y^μ 系数)"
                if lam == top:
                    return True, "λ = +(Y^μ 系数)，符号与约定相反"
                return False, f"λ = {lam.to_text()} 与 Y^μ 系数 {top.to_text()} 不符"

            self.check("routes", coords, routes)
            self.check("degrees", coords, degrees)
            self.check("leading-coefficient", coords, leading)
        return self._rows()

    def _verify_theorem5(self):
        for s in self.grid_s():
            H = self._h_or_incomplete(s)
            if H is None:
                continue
            ds = _window(self.cfg.d_lo, self.cfg.d_hi, H.m - 1, 4)
            try:
                check_budget(self.cfg, estimate_cost(self.q, ds, s), f"theorem5 s={s}")
            except BudgetExceeded as exc:
                self.bundle.mark_incomplete(str(exc))
                continue
            for s_prime in range(s):
                for d in ds:
                    def extract(s_prime=s_prime, d=d):
                        ok = power_sum_via_h(H, s_prime, d) == power_sum(SumSpec(self.field, 1, s_prime, d))
                        return ok, "" if ok else "与直接求和不符"
                    self.check("power-sum", {"q": self.q, "s": s, "s_prime": s_prime, "d": d}, extract)
        return self._rows()

    def _verify_lemma6(self):
        for s in self.grid_s():
            m, _ = h_params(self.q, s)
            for d in _window(self.cfg.d_lo, self.cfg.d_hi, max(m, 1), 4):
                self.check("finite-period-identity", {"q": self.q, "s": s, "d": d},
                           lambda s=s, d=d: (lemma_ident_check(self.field, s, d), ""))
        return self._rows()

    def _verify_lambda(self):
        for s in self.grid_s():
            H = self._h_or_incomplete(s)
            if H is None:
                continue
            coords = {"q": self.q, "s": s}
            state = {}

            def limit():
                lam, report = lambda_limit_report(H, self.cfg.d_lo, self.cfg.d_hi)
                sign = resolve_sign(H)
                state["lam"] = lam
                tops = [row.top for row in report.rows]
                return report.passed, (f"λ = {lam.to_text()}; 首项符号 {sign.lambda_sign:+d}; "
                                       f"(−1)^m = {sign.bs_factor:+d}; 残差最高指数 {tops}")

            if not self.check("lambda-limit", coords, limit):
                continue
            d = (self.cfg.d_hi if self.cfg.d_hi is not None else H.m + 3)

            def analytic():
                ok = lambda_analytic(self.field, s, d) == state["lam"]
                return ok, "" if ok else "解析路线给出的非负部分不同"

            self.check("lambda-analytic", dict(coords, d=d), analytic, finding=True)
        return self._rows()

    def _verify_lower(self):
        for s in self.grid_s():
            H = self._h_or_incomplete(s)
            if H is None:
                continue
            for r in range(H.mu):
                def lower(r=r):
                    report = lower_coeff_verify(H, r, self.cfg.d_lo, self.cfg.d_hi)
                    stable = "稳定" if report.stabilized else "未稳定"
                    return report.strictly_decreasing, f"{stable}; 残差最高指数 {[row.top for row in report.rows]}"
                self.check("lower-coefficient", {"q": self.q, "s": s, "r": r}, lower)
        return self._rows()

    def _verify_nu(self):
        for s in self.grid_s():
            H = self._h_or_incomplete(s)
            if H is None or H.mu < 1:
                continue

            def nu():
                value, report = nu_value_report(H, self.cfg.d_lo, self.cfg.d_hi)
                return report.passed, f"ν = {value.to_text()}；尾和稳定 {report.tail_stable}"

            self.check("nu", {"q": self.q, "s": s}, nu)
        return self._rows()

    def _verify_interp(self):
        ds = _window(self.cfg.d_lo, self.cfg.d_hi, 1, 3)
        for s in self.s_values(range(1, self.cfg.s_max + 1)):
            for d in ds:
                def crosscheck(s=s, d=d):
                    report = interp_crosscheck(self.field, s, d)
                    return report.passed, report.note
                self.check("interp-crosscheck", {"q": self.q, "s": s, "d": d}, crosscheck)
        return self._rows()

    def _verify_closed_form(self):
        for d in _window(self.cfg.d_lo, self.cfg.d_hi, 1, 8):
            self.check("closed-form", {"q": self.q, "d": d},
                       lambda d=d: (closed_form_check(self.field, d), ""))
        return self._rows()

    def _verify_simon(self):
        for s in self.s_values(range(2 * self.cfg.s_max + 1)):
            for j in _window(self.cfg.d_lo, self.cfg.d_hi, 0, 6):
                def vanishing(j=j, s=s):
                    zero = simon_sum(self.field, j, s).is_zero()
                    expected = j * (self.q - 1) > s
                    return zero == expected, f"{'零' if zero else '非零'}，预期{'零' if expected else '非零'}"
                self.check("simon", {"q": self.q, "s": s, "j": j}, vanishing)
        return self._rows()

    def _verify_eq10(self):
        if self.q == 2:
            raise ConfigError("eq10 只适用于 q > 2")
        s = 2 * self.q - 1
        H = self._h_or_incomplete(s)
        if H is not None:
            def closed():
                report = eq10_check(H)
                return report.passed, f"整体符号 {report.sign}; Y^μ 系数 {'一致' if report.top_coefficient_ok else '不符'}"
            self.check("eq10", {"q": self.q, "s": s}, closed)
        return self._rows()

    def _verify_gamma(self):
        for s in self.grid_s():
            m, mu = h_params(self.q, s)
            if m < 1:
                continue
            ds = _window(self.cfg.d_lo, self.cfg.d_hi, m, 3)
            for r in range(mu + 1):
                def gamma(r=r):
                    report = gamma_property_check(self.field, s, r, ds)
                    return report.strictly_decreasing, f"残差最高指数 {[row.top for row in report.rows]}"
                self.check("gamma", {"q": self.q, "s": s, "r": r}, gamma)
        return self._rows()

    def _verify_psi(self):
        for s in self.grid_s():
            m, _ = h_params(self.q, s)
            for d in _window(self.cfg.d_lo, self.cfg.d_hi, max(m, 2), 3):
                coords = {"q": self.q, "s": s, "d": d}
                try:
                    report = psi_nonvanish_check(self.field, s, d)
                except HARD_FAILURES as exc:
                    self.bundle.add("psi", False, coords, f"{type(exc).__name__}: {exc}")
                    continue
                if report.factorization is not None:
                    self.bundle.add("psi-factorization", report.factorization, coords)
                self.bundle.add("psi-nonvanishing", report.nonvanishing, coords, finding=True)
                self.bundle.add("psi-degree", report.degree_ok, coords,
                                f"deg_θ = {report.theta_degree}，预期 {report.expected_degree}",
                                finding=True)
        return self._rows()

    # ---------- scan ----------

    def scan(self) -> ResultBundle:
        cfg, q = self.cfg, self.q
        maxdeg = cfg.resolved_maxdeg()
        primes = sum(irreducible_count(q, d) for d in range(1, maxdeg + 1))
        reports: List[ScanReport] = []

        if cfg.subcommand == "conjecture":
            check_budget(cfg, estimate_cost(q, [maxdeg], primes * cfg.n_max * (cfg.s_max + 1)),
                         "conjecture")
            reports.append(conjecture_scan(self.field, maxdeg, cfg.n_max, cfg.s_max,
                                           mapper=self.mapper("conjecture")))
        elif cfg.subcommand == "prop1":
            check_budget(cfg, estimate_cost(q, [maxdeg], primes * cfg.n_max * (cfg.s_max + 1)), "prop1")
            reports.append(prop1_scan(self.field, maxdeg, cfg.s_max, cfg.n_max,
                                      mapper=self.mapper("prop1")))
        elif cfg.subcommand == "theorem1":
            check_budget(cfg, estimate_cost(q, [maxdeg], primes), "theorem1")
            for s in self.s_values(sorted({1, q, 2 * q - 1})):
                H = None if s == 1 else self._h_or_incomplete(s)
                if s != 1 and H is None:
                    continue
                reports.append(theorem1_scan(self.field, s, maxdeg, H,
                                             mapper=self.mapper(f"theorem1 s={s}")))
        elif cfg.subcommand == "bc-units":
            check_budget(cfg, estimate_cost(q, [maxdeg], primes), "bc-units")
            for s in self.s_values((2 * q - 1,)):
                reports.append(bc_unit_scan(self.field, s, maxdeg, mapper=self.mapper(f"bc s={s}")))
        else:
            raise ConfigError(f"未知的 scan 子命令 {cfg.subcommand!r}")

        stem = _stem(cfg, self.field)
        cells = []
        for report in reports:
            self.bundle.add(report.kind, not report.hard, report.grid,
                            json.dumps(report.summary(), ensure_ascii=False, sort_keys=True))
            for cell in report.cells:
                if cell.status == Status.OK.value:
                    continue
                coords = {"P": cell.P, "n": cell.n, "s": cell.s, "clause": cell.clause}
                self.bundle.add(report.kind, False, coords, cell.value,
                                finding=cell.status == Status.SOFT.value)
            cells.extend(report.cells)
        data = {"reports": [r.to_dict() for r in reports]}
        write_report(self.bundle, cfg.out_dir, stem, data)
        write_table(self.bundle, cfg.out_dir, stem,
                    ["q", "f", "P", "n", "s", "verdict", "clause", "status", "value_hash"],
                    [[c.q, c.f, c.P, c.n, c.s, c.verdict, c.clause, c.status, c.value_hash]
                     for c in cells])
        return self.finish()


# ============== 命令入口 ==============

def cmd_compute_h(cfg: RunConfig, quiet: bool = False) -> ResultBundle:
    return Runner(cfg, quiet).compute_h()


def cmd_verify(cfg: RunConfig, quiet: bool = False) -> ResultBundle:
    return Runner(cfg, quiet).verify()


def cmd_scan(cfg: RunConfig, quiet: bool = False) -> ResultBundle:
    return Runner(cfg, quiet).scan()


COMMANDS = {
    "compute-h": cmd_compute_h,
    "verify": cmd_verify,
    "scan": cmd_scan,
}


def run(cfg: RunConfig, quiet: bool = False) -> ResultBundle:
    command = COMMANDS.get(cfg.command)
    if command is None:
        raise ConfigError(f"未知命令 {cfg.command!r}")
    return command(cfg, quiet)
