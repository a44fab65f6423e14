"""
调和和实验配置文件
"""

import os

# 项目信息
PROJECT_TITLE = "调和插值实验台"
PROJECT_VERSION = "1.0.0"

# 缓存格式版本（写入 ℍ_s 缓存文件头）
CACHE_VERSION = "1"

# 有限域设置
# 默认素数域 F_p；非素数域需在此登记不可约模多项式（系数按常数项在前）
DEFAULT_P = int(os.getenv("HARMONIC_P", "2"))
DEFAULT_E = int(os.getenv("HARMONIC_E", "1"))
FIELD_MODULI = {
    4: (1, 1, 1),        # F_4 = F_2[x]/(x^2+x+1)
    8: (1, 1, 0, 1),     # F_8 = F_2[x]/(x^3+x+1)
    9: (1, 0, 1),        # F_9 = F_3[x]/(x^2+1)
}
MAX_FIELD_SIZE = 64  # 加法/乘法表按 q^2 预计算

# 多项式乘法：两因子长度都超过该阈值且为素数域时使用 Kronecker 打包
KRONECKER_THRESHOLD = int(os.getenv("HARMONIC_KRONECKER_THRESHOLD", "32"))
# 长除法：除式与商的长度都超过该阈值时使用牛顿迭代求逆
NEWTON_THRESHOLD = int(os.getenv("HARMONIC_NEWTON_THRESHOLD", "256"))

# 成本控制（工作量单位约为 Σ q^d）
COST_GUARD = int(float(os.getenv("HARMONIC_COST_GUARD", "1e8")))

# h_row 校验：对称指标个数乘以 m^s 不超过该值时做完整整除校验，否则只校验边带
HROW_FULL_VERIFY_LIMIT = int(os.getenv("HARMONIC_HROW_FULL_VERIFY_LIMIT", "200000"))
# 插值路线之外额外核对的 d 值个数
HOLDOUT_ROWS = int(os.getenv("HARMONIC_HOLDOUT_ROWS", "2"))

# 截断 Laurent 级数
TATE_MARGIN = int(os.getenv("HARMONIC_TATE_MARGIN", "8"))  # 比较窗口下方额外保留的精度
TATE_MIN_WINDOW = 3  # “极限”至少需要连续 3 个 d 的证据
NU_TAIL_EXTRA = int(os.getenv("HARMONIC_NU_TAIL_EXTRA", "2"))  # tail_sum 的上界 D = d + NU_TAIL_EXTRA

# Bernoulli–Carlitz 级数阶数上限
BC_SERIES_BUDGET = int(os.getenv("HARMONIC_BC_BUDGET", "100000"))

# 扫描默认范围
DEFAULT_MAXDEG = {2: 5, 3: 5, 4: 3, 5: 3}
DEFAULT_N_MAX = 30
DEFAULT_S_MAX = 5

# 未指定 --s 时各 q 的 ℍ_s 网格
DEFAULT_S_GRID = {2: (2, 3, 4), 3: (3, 5), 4: (4,), 5: (5, 9)}

# 并行
DEFAULT_THREADS = int(os.getenv("HARMONIC_THREADS", "1"))

# 保存文件路径
CACHE_DIRECTORY = os.getenv("HARMONIC_CACHE_DIR", "cache")
OUTPUT_DIRECTORY = os.getenv("HARMONIC_OUT_DIR", "results")
