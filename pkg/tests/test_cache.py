from __future__ import annotations

import json
import logging
from dataclasses import replace

from syzlab.cache import Cache, CacheKey, CacheRecord
from syzlab.koszul import betti_table, clear_rank_cache
from syzlab.linalg import GF32003
from syzlab.monomials import RingContext


def test_cold_get_is_a_miss(tmp_path):
    cache = Cache(tmp_path)
    assert cache.get(CacheKey(1, 0, 3, 1, 1, "GF(32003)")) is None
    assert cache.misses == 1


def test_put_then_get(tmp_path):
    cache = Cache(tmp_path)
    key = CacheKey(2, 0, 3, 7, 2, "GF(32003)")
    rec = CacheRecord(key, 1, {"in": 0, "out": 0}, 0.01, 1.0)
    cache.put(rec)
    assert cache.get(key) == rec
    assert list(tmp_path.glob("*.json")) == [cache.path(key)]
    assert not list(tmp_path.glob(".tmp-*"))


def test_records_are_immutable(tmp_path):
    cache = Cache(tmp_path)
    key = CacheKey(2, 0, 3, 7, 2, "GF(32003)")
    cache.put(CacheRecord(key, 1, {}, 0.0, 1.0))
    cache.put(CacheRecord(key, 99, {}, 0.0, 2.0))
    assert cache.get(key).kpq == 1


def test_version_bump_misses(tmp_path):
    cache = Cache(tmp_path)
    key = CacheKey(2, 0, 3, 7, 2, "GF(32003)")
    cache.put(CacheRecord(key, 1, {}, 0.0, 1.0))
    assert cache.get(replace(key, engine_version="999")) is None
    assert cache.get(replace(key, field_tag="Q")) is None


def test_corrupt_record_is_ignored(tmp_path, caplog):
    cache = Cache(tmp_path)
    key = CacheKey(1, 0, 3, 1, 1, "GF(32003)")
    cache.path(key).write_text("{ not json")
    with caplog.at_level(logging.WARNING):
        assert cache.get(key) is None
    assert "corrupt" in caplog.text
    other = CacheKey(1, 0, 3, 2, 1, "GF(32003)")
    cache.path(key).write_text(CacheRecord(other, 2, {}, 0.0, 0.0).to_json())
    assert cache.get(key) is None


def test_table_resumes_from_cache(tmp_path):
    ctx = RingContext(2, 3)
    cache = Cache(tmp_path)
    first = betti_table(ctx, GF32003, cache=cache)
    n_files = len(list(tmp_path.glob("*.json")))
    assert n_files == len(first.p_range()) * (ctx.n + 2)
    clear_rank_cache()
    again = Cache(tmp_path)
    assert betti_table(ctx, GF32003, cache=again) == first
    assert again.misses == 0 and again.hits == n_files
    rec = json.loads(next(tmp_path.glob("*.json")).read_text())
    assert rec["key"]["engine_version"]
