"""
异常定义 - 所有模块共享的错误类型

硬失败（违反恒等式）与软发现（猜想证据异常）在 CLI 中映射到不同的退出码。
"""


class HarmonicError(Exception):
    """所有计算错误的基类"""


class NonExactDivision(HarmonicError):
    """整除时出现非零余项"""


class NotAUnit(HarmonicError):
    """模 P 不可逆"""


class ArityMismatch(HarmonicError):
    """变量名未知或变量集合不兼容"""


class IndexOutOfRange(HarmonicError):
    """下标越界（如初等对称多项式 e_j 中 j > 变量个数）"""


class PrecisionExceeded(HarmonicError):
    """截断精度或级数阶数不足"""


class DomainError(HarmonicError):
    """参数不在定义域内（如 s 不满足 s ≡ 1 mod (q-1)）"""


class NonIntegralResult(HarmonicError):
    """插值结果的系数无法化到 A 中"""


class RouteMismatch(HarmonicError):
    """两条构造路线给出不同的 ℍ_s"""


class NotStabilized(HarmonicError):
    """截断序列没有出现稳定部分"""


class PreconditionUnmet(HarmonicError):
    """调用前提不满足（调用方应改走其它路径）"""


class ConfigError(HarmonicError):
    """配置文件或参数错误"""


class BudgetExceeded(HarmonicError):
    """估计工作量超过成本上限"""


class CacheConflict(HarmonicError):
    """缓存中已有不同的结果（缓存只写一次）"""


class CacheCorrupted(HarmonicError):
    """缓存文件哈希或校验行不匹配"""


# 违反已证明恒等式的错误：CLI 退出码 1
HARD_FAILURES = (NonExactDivision, NonIntegralResult, RouteMismatch, NotStabilized)
