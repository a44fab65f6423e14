"""
ℍ_s 缓存 - 只写一次的 JSON 文件

文件名形如 H_F3_s5.json。文件头记录格式版本、域、(s, m, μ)、构造路线、
ℍ_q 的符号以及表内容的 SHA-256；读取时校验哈希，并重新计算一个留出行。
"""

import hashlib
import json
import logging
import os
import tempfile
from typing import Dict, List, Optional

import config
from algebra import FiniteField, PolyA
from errors import CacheConflict, CacheCorrupted
from hpoly import HPolynomial, HRoute, h_row, interpolation_degrees

logger = logging.getLogger(__name__)


def cache_path(field: FiniteField, s: int, directory: Optional[str] = None) -> str:
    directory = directory or config.CACHE_DIRECTORY
    label = field.label.replace("[", "_").replace("]", "").replace(",", "")
    return os.path.join(directory, f"H_{label}_s{s}.json")


def _table_rows(H: HPolynomial) -> List[List[str]]:
    """[指数, Y^0 系数, Y^1 系数, …]，按指数排序"""
    return [[",".join(map(str, key))] + [c.to_text() for c in coeffs]
            for key, coeffs in sorted(H.table.items())]


def content_hash(H: HPolynomial) -> str:
    text = "\n".join(";".join(row) for row in _table_rows(H))
    header = f"{H.field.label}|{H.s}|{H.m}|{H.mu}\n"
    return hashlib.sha256((header + text).encode("utf-8")).hexdigest()


def to_dict(H: HPolynomial, sign: int = 1) -> Dict:
    p, e, modulus = H.field.key
    return {
        "version": config.CACHE_VERSION,
        "field": {"p": p, "e": e, "modulus": list(modulus)},
        "s": H.s,
        "m": H.m,
        "mu": H.mu,
        "route": H.route.value,
        "sign": sign,
        "sha256": content_hash(H),
        "table": _table_rows(H),
    }


def from_dict(field: FiniteField, data: Dict) -> HPolynomial:
    table = {}
    for row in data["table"]:
        key = tuple(int(x) for x in row[0].split(",")) if row[0] else ()
        table[key] = tuple(PolyA.from_text(field, c) for c in row[1:])
    return HPolynomial(field, data["s"], data["m"], data["mu"], table, HRoute(data["route"]))


def _verify_holdout(H: HPolynomial):
    _, holdouts = interpolation_degrees(H.field.q, H.s)
    d = holdouts[0]
    y = PolyA.monomial(H.field, H.field.q ** (d - H.m))
    if H.evaluate_table(y) != h_row(H.field, H.s, d).table:
        raise CacheCorrupted(f"缓存的 ℍ_{H.s} 与重新计算的 H_{{{H.s},{d}}} 不符")


def load(field: FiniteField, s: int, directory: Optional[str] = None,
         verify_row: bool = True) -> Optional[HPolynomial]:
    """
    读取缓存；文件不存在时返回 None

    Raises:
        CacheCorrupted: 版本、域、哈希或留出行不符
    """
    path = cache_path(field, s, directory)
    if not os.path.exists(path):
        return None
    with open(path, 'r', encoding='utf-8') as f:
        data = json.load(f)
    if data.get("version") != config.CACHE_VERSION:
        raise CacheCorrupted(f"{path}: 版本 {data.get('version')} 与 {config.CACHE_VERSION} 不符")
    stored = data.get("field", {})
    if (stored.get("p"), stored.get("e"), tuple(stored.get("modulus", ()))) != field.key:
        raise CacheCorrupted(f"{path}: 域不符")
    H = from_dict(field, data)
    if content_hash(H) != data.get("sha256"):
        raise CacheCorrupted(f"{path}: 内容哈希不符")
    if verify_row:
        _verify_holdout(H)
    logger.info(f"从缓存读取 ℍ_{s}: {path}")
    return H


def store(H: HPolynomial, sign: int = 1, directory: Optional[str] = None) -> str:
    """
    写入缓存；已有相同内容时不改动文件

    Raises:
        CacheConflict: 已有文件且内容不同
    """
    path = cache_path(H.field, H.s, directory)
    data = to_dict(H, sign)
    if os.path.exists(path):
        with open(path, 'r', encoding='utf-8') as f:
            existing = json.load(f)
        if existing.get("sha256") != data["sha256"]:
            raise CacheConflict(f"{path} 已存在且内容不同")
        logger.info(f"缓存 {path} 已存在且一致，不覆盖")
        return path

    directory = os.path.dirname(path)
    if directory and not os.path.exists(directory):
        os.makedirs(directory)
    # 先写临时文件再改名，中断时不留下半个缓存文件
    fd, tmp = tempfile.mkstemp(prefix=os.path.basename(path) + ".", suffix=".tmp",
                               dir=directory or ".")
    try:
        with os.fdopen(fd, 'w', encoding='utf-8') as f:
            json.dump(data, f, ensure_ascii=False, indent=2)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise
    return path
