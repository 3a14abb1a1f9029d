"""Betti tables: storage, diagram rendering, CSV and JSON export."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction

METHODS = ("engine", "formula", "synthesized")


def _num(v):
    if isinstance(v, Fraction):
        return int(v) if v.denominator == 1 else v
    return v


def _fmt(v) -> str:
    v = _num(v)
    return str(v)


@dataclass
class BettiTable:
    """Map (p, q) -> dimension; absent cells are zero.

    ``n, b, d`` are None for tables that do not come from a Veronese ring
    (pure and synthesized tables).  ``missing`` lists cells that were not
    computed (budget refusals), so a partial table never masquerades as a
    complete one.
    """

    entries: dict = field(default_factory=dict)
    n: int | None = None
    b: int | None = None
    d: int | None = None
    field_tag: str = "GF(32003)"
    method_tag: str = "engine"
    p_max: int | None = None
    q_max: int | None = None
    missing: set = field(default_factory=set)

    def __post_init__(self):
        if self.method_tag not in METHODS:
            raise ValueError(f"unknown method tag {self.method_tag!r}")
        clean = {}
        for (p, q), v in self.entries.items():
            if v < 0:
                raise ValueError(f"negative entry at {(p, q)}")
            if v != 0:
                clean[(int(p), int(q))] = _num(v)
        self.entries = clean

    def __getitem__(self, key) -> int:
        return self.entries.get(tuple(key), 0)

    def get(self, p: int, q: int):
        return self.entries.get((p, q), 0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BettiTable):
            return NotImplemented
        return self.entries == other.entries

    @property
    def complete(self) -> bool:
        return not self.missing

    def nonzero_cells(self) -> list:
        return sorted(self.entries)

    def p_range(self) -> range:
        top = self.p_max
        if top is None:
            top = max((p for p, _ in self.entries), default=0)
        return range(0, top + 1)

    def row(self, q: int) -> list:
        return [self.get(p, q) for p in self.p_range()]

    def render(self, annotate=None) -> str:
        """Diagram with rows q and columns p; a dash marks a zero entry.

        ``annotate`` optionally maps (p, q) to a short string appended to
        the cell (used for support predictions).
        """
        cells = set(self.entries) | set(self.missing) | set(annotate or {})
        ps = list(range(0, max((p for p, _ in cells), default=0) + 1))
        qs = [q for _, q in cells]
        q_lo = min(qs, default=0)
        q_hi = max(qs, default=0)
        q_lo = min(q_lo, 0)

        def text(p, q):
            if (p, q) in self.missing:
                s = "?"
            else:
                v = self.get(p, q)
                s = "-" if v == 0 else _fmt(v)
            if annotate and (p, q) in annotate:
                s = f"{s}{annotate[(p, q)]}"
            return s

        grid = [[text(p, q) for p in ps] for q in range(q_lo, q_hi + 1)]
        width = max([len(str(p)) for p in ps] + [len(s) for row in grid for s in row])
        label_w = max(len(str(q)) for q in range(q_lo, q_hi + 1))
        header = " " * label_w + " | " + " ".join(str(p).rjust(width) for p in ps)
        lines = [header, "-" * len(header)]
        for q, row in zip(range(q_lo, q_hi + 1), grid):
            lines.append(str(q).rjust(label_w) + " | " + " ".join(s.rjust(width) for s in row))
        return "\n".join(lines)

    def to_csv(self) -> str:
        """CSV with columns ``p,q,value,field,method``; nonzero cells only."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["p", "q", "value", "field", "method"])
        for p, q in sorted(self.entries, key=lambda c: (c[1], c[0])):
            w.writerow([p, q, _fmt(self.entries[(p, q)]), self.field_tag, self.method_tag])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> BettiTable:
        rows = list(csv.DictReader(io.StringIO(text)))
        entries = {}
        field_tag, method = "GF(32003)", "engine"
        for r in rows:
            entries[(int(r["p"]), int(r["q"]))] = Fraction(r["value"])
            field_tag = r.get("field") or field_tag
            method = r.get("method") or method
        return cls(entries, field_tag=field_tag, method_tag=method)

    def to_json(self) -> str:
        payload = {
            "n": self.n,
            "b": self.b,
            "d": self.d,
            "field": self.field_tag,
            "method": self.method_tag,
            "entries": [
                {"p": p, "q": q, "value": _fmt(self.entries[(p, q)])}
                for p, q in sorted(self.entries, key=lambda c: (c[1], c[0]))
            ],
            "missing": [list(c) for c in sorted(self.missing)],
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> BettiTable:
        data = json.loads(text)
        entries = {(e["p"], e["q"]): Fraction(e["value"]) for e in data["entries"]}
        return cls(
            entries,
            n=data.get("n"),
            b=data.get("b"),
            d=data.get("d"),
            field_tag=data.get("field", "GF(32003)"),
            method_tag=data.get("method", "engine"),
            missing={tuple(c) for c in data.get("missing", [])},
        )
