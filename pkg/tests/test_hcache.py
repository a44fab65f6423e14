import json
import os

import pytest

import hcache
from algebra import PolyA, field_for_q
from errors import CacheConflict, CacheCorrupted
from hpoly import HPolynomial, h_interpolate


@pytest.fixture(scope="module")
def h23():
    return h_interpolate(field_for_q(2), 3)


def _rewrite(path, mutate):
    with open(path, 'r', encoding='utf-8') as f:
        data = json.load(f)
    mutate(data)
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(data, f)


def _altered(H):
    table = dict(H.table)
    key = min(table)
    table[key] = (table[key][0] + PolyA.one(H.field),) + table[key][1:]
    return HPolynomial(H.field, H.s, H.m, H.mu, table, H.route)


def test_store_then_load(tmp_path, h23):
    directory = str(tmp_path / "cache")
    assert hcache.load(h23.field, 3, directory) is None
    path = hcache.store(h23, directory=directory)
    assert os.path.basename(path) == "H_F2_s3.json"
    mtime = os.path.getmtime(path)
    assert hcache.store(h23, directory=directory) == path
    assert os.path.getmtime(path) == mtime
    assert hcache.load(h23.field, 3, directory) == h23


def test_extension_field_file_name(tmp_path):
    assert os.path.basename(hcache.cache_path(field_for_q(4), 7, str(tmp_path))) == "H_F4_111_s7.json"


def test_conflicting_store(tmp_path, h23):
    directory = str(tmp_path)
    hcache.store(h23, directory=directory)
    with pytest.raises(CacheConflict):
        hcache.store(_altered(h23), directory=directory)


def test_tampered_hash(tmp_path, h23):
    directory = str(tmp_path)
    path = hcache.store(h23, directory=directory)
    _rewrite(path, lambda data: data.update(sha256="0" * 64))
    with pytest.raises(CacheCorrupted):
        hcache.load(h23.field, 3, directory)


def test_consistent_but_wrong_table(tmp_path, h23):
    directory = str(tmp_path)
    path = hcache.store(_altered(h23), directory=directory)
    # 哈希自洽，只有重新计算的留出行能发现
    assert hcache.load(h23.field, 3, directory, verify_row=False) is not None
    with pytest.raises(CacheCorrupted):
        hcache.load(h23.field, 3, directory)
    assert os.path.exists(path)


def test_version_and_field_mismatch(tmp_path, h23):
    directory = str(tmp_path)
    path = hcache.store(h23, directory=directory)
    _rewrite(path, lambda data: data.update(version="0"))
    with pytest.raises(CacheCorrupted):
        hcache.load(h23.field, 3, directory)
    _rewrite(path, lambda data: data.update(version=hcache.config.CACHE_VERSION,
                                            field={"p": 3, "e": 1, "modulus": []}))
    with pytest.raises(CacheCorrupted):
        hcache.load(h23.field, 3, directory)


def test_interrupted_store_leaves_nothing(tmp_path, h23, monkeypatch):
    directory = str(tmp_path)

    def broken_dump(data, f, **kwargs):
        f.write('{"version": ')
        raise OSError("磁盘已满")

    monkeypatch.setattr(hcache.json, "dump", broken_dump)
    with pytest.raises(OSError):
        hcache.store(h23, directory=directory)
    monkeypatch.undo()

    assert os.listdir(directory) == []
    assert hcache.load(h23.field, 3, directory) is None
    hcache.store(h23, directory=directory)
    assert hcache.load(h23.field, 3, directory) == h23
