"""On-disk cache of computed Koszul cells, one JSON file per record.

The file name is the sha256 of the record key, and the key contains the
engine version, so a version bump makes every old record unreachable.
Writes go to a temporary file in the same directory followed by an atomic
rename; a record that fails to parse is treated as a miss.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

from syzlab import ENGINE_VERSION

log = logging.getLogger(__name__)

ENV_VAR = "SYZLAB_CACHE"


@dataclass(frozen=True)
class CacheKey:
    n: int
    b: int
    d: int
    p: int
    q: int
    field_tag: str
    engine_version: str = ENGINE_VERSION

    def digest(self) -> str:
        text = json.dumps(asdict(self), sort_keys=True)
        return hashlib.sha256(text.encode()).hexdigest()


@dataclass(frozen=True)
class CacheRecord:
    key: CacheKey
    kpq: int
    ranks: dict = field(default_factory=dict)
    wall_time: float = 0.0
    created: float = 0.0

    def to_json(self) -> str:
        payload = asdict(self)
        return json.dumps(payload, sort_keys=True, indent=1) + "\n"

    @classmethod
    def from_json(cls, text: str) -> CacheRecord:
        data = json.loads(text)
        key = CacheKey(**data["key"])
        return cls(key, int(data["kpq"]), dict(data["ranks"]), float(data["wall_time"]), float(data["created"]))


def default_dir() -> Path | None:
    env = os.environ.get(ENV_VAR)
    return Path(env) if env else None


class Cache:
    def __init__(self, root):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self.hits = 0
        self.misses = 0

    def path(self, key: CacheKey) -> Path:
        return self.root / f"{key.digest()}.json"

    def get(self, key: CacheKey) -> CacheRecord | None:
        path = self.path(key)
        try:
            text = path.read_text()
        except FileNotFoundError:
            self.misses += 1
            return None
        try:
            rec = CacheRecord.from_json(text)
            if rec.key != key:
                raise ValueError("key mismatch")
        except (ValueError, KeyError, TypeError) as exc:
            log.warning("ignoring corrupt cache record %s: %s", path, exc)
            self.misses += 1
            return None
        self.hits += 1
        return rec

    def put(self, record: CacheRecord) -> Path:
        path = self.path(record.key)
        if path.exists() and self.get(record.key) is not None:
            # records are immutable once written
            return path
        fd, tmp = tempfile.mkstemp(dir=self.root, prefix=".tmp-", suffix=".json")
        try:
            with os.fdopen(fd, "w") as fh:
                fh.write(record.to_json())
            os.replace(tmp, path)
        except BaseException:
            Path(tmp).unlink(missing_ok=True)
            raise
        return path

    # adapters used by the engine's table loop

    def get_cell(self, ctx, p, q, f) -> CacheRecord | None:
        return self.get(CacheKey(ctx.n, ctx.b, ctx.d, p, q, f.tag))

    def put_cell(self, ctx, p, q, f, kpq, ranks, wall) -> Path:
        key = CacheKey(ctx.n, ctx.b, ctx.d, p, q, f.tag)
        return self.put(CacheRecord(key, int(kpq), dict(ranks), float(wall), time.time()))
