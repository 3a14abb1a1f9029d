"""Exact sparse linear algebra over GF(p) and over the rationals.

Vectors are ``dict`` objects mapping an index to a nonzero field element.
Prime-field elements are ints in ``[0, p)``; rational elements are
:class:`fractions.Fraction`.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

log = logging.getLogger(__name__)

DEFAULT_PRIME = 32003
DEFAULT_PRIMES = (32003, 32009, 32027)
RATIONAL_NNZ_LIMIT = 2_000_000
RATIONAL_BIT_LIMIT = 4096


class ResourceLimitError(RuntimeError):
    """An exact computation would exceed its configured budget."""


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class FieldChoice:
    """A prime field GF(p) (odd p < 2^31) or the rationals (``modulus=None``)."""

    modulus: int | None = DEFAULT_PRIME

    def __post_init__(self):
        p = self.modulus
        if p is not None and (p % 2 == 0 or p >= 2**31 or not _is_prime(p)):
            raise ValueError(f"field modulus must be an odd prime < 2^31, got {p}")

    @classmethod
    def gf(cls, p: int = DEFAULT_PRIME) -> FieldChoice:
        return cls(p)

    @classmethod
    def rationals(cls) -> FieldChoice:
        return cls(None)

    @classmethod
    def parse(cls, text: str) -> FieldChoice:
        text = text.strip()
        if text.upper() in ("Q", "QQ", "RATIONAL", "RATIONALS"):
            return cls.rationals()
        if text.upper().startswith("GF(") and text.endswith(")"):
            text = text[3:-1]
        return cls(int(text))

    @property
    def is_rational(self) -> bool:
        return self.modulus is None

    @property
    def tag(self) -> str:
        return "Q" if self.modulus is None else f"GF({self.modulus})"

    def __str__(self) -> str:
        return self.tag

    def coerce(self, value):
        if self.modulus is None:
            return Fraction(value)
        if isinstance(value, Fraction):
            return value.numerator * pow(value.denominator, -1, self.modulus) % self.modulus
        return int(value) % self.modulus


GF32003 = FieldChoice(DEFAULT_PRIME)
QQ = FieldChoice(None)


@dataclass
class SparseMatrix:
    """Triplet-style sparse matrix; ``entries`` maps (row, col) to a nonzero value.

    Coefficients are stored as plain integers or Fractions; they are coerced
    into the working field when an algorithm runs, so one matrix can be
    ranked over several fields.
    """

    n_rows: int
    n_cols: int
    entries: dict = field(default_factory=dict)
    field_tag: str = "Z"

    @classmethod
    def from_triplets(cls, n_rows, n_cols, triplets, field_tag="Z") -> SparseMatrix:
        entries = {}
        for r, c, v in triplets:
            if not (0 <= r < n_rows and 0 <= c < n_cols):
                raise IndexError(f"entry ({r}, {c}) outside {n_rows}x{n_cols}")
            if (r, c) in entries:
                raise ValueError(f"duplicate entry at ({r}, {c})")
            if v != 0:
                entries[(r, c)] = v
        return cls(n_rows, n_cols, entries, field_tag)

    @classmethod
    def zero(cls, n_rows: int, n_cols: int) -> SparseMatrix:
        return cls(n_rows, n_cols, {})

    @classmethod
    def from_dense(cls, rows) -> SparseMatrix:
        rows = [list(r) for r in rows]
        n_cols = len(rows[0]) if rows else 0
        trip = [(i, j, v) for i, r in enumerate(rows) for j, v in enumerate(r) if v != 0]
        return cls.from_triplets(len(rows), n_cols, trip)

    @property
    def nnz(self) -> int:
        return len(self.entries)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n_rows, self.n_cols)

    def rows(self) -> list[dict]:
        out = [dict() for _ in range(self.n_rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def columns(self) -> list[dict]:
        out = [dict() for _ in range(self.n_cols)]
        for (r, c), v in self.entries.items():
            out[c][r] = v
        return out

    def transpose(self) -> SparseMatrix:
        return SparseMatrix(
            self.n_cols, self.n_rows, {(c, r): v for (r, c), v in self.entries.items()}, self.field_tag
        )

    def permuted(self, row_perm, col_perm) -> SparseMatrix:
        """Row i moves to row_perm[i], column j to col_perm[j]."""
        return SparseMatrix(
            self.n_rows,
            self.n_cols,
            {(row_perm[r], col_perm[c]): v for (r, c), v in self.entries.items()},
            self.field_tag,
        )

    def to_dense(self) -> list[list]:
        out = [[0] * self.n_cols for _ in range(self.n_rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def matmul(self, other: SparseMatrix) -> SparseMatrix:
        if self.n_cols != other.n_rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        other_rows = other.rows()
        acc: dict = {}
        for (r, k), v in self.entries.items():
            for c, w in other_rows[k].items():
                acc[(r, c)] = acc.get((r, c), 0) + v * w
        return SparseMatrix(
            self.n_rows, other.n_cols, {k: v for k, v in acc.items() if v != 0}, self.field_tag
        )

    def apply(self, x) -> list:
        y = [0] * self.n_rows
        for (r, c), v in self.entries.items():
            y[r] += v * x[c]
        return y

    def dumps(self) -> str:
        """Triplet dump: header ``rows cols nnz`` then ``r c value`` lines."""
        lines = [f"{self.n_rows} {self.n_cols} {self.nnz}"]
        for (r, c) in sorted(self.entries):
            lines.append(f"{r} {c} {self.entries[(r, c)]}")
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> SparseMatrix:
        lines = [ln for ln in text.splitlines() if ln.strip()]
        n_rows, n_cols, nnz = (int(t) for t in lines[0].split())
        trip = []
        for ln in lines[1:]:
            r, c, v = ln.split()
            trip.append((int(r), int(c), Fraction(v) if "/" in v else int(v)))
        if len(trip) != nnz:
            raise ValueError(f"header announces {nnz} entries, found {len(trip)}")
        return cls.from_triplets(n_rows, n_cols, trip)


class Echelon:
    """Incremental row echelon form over one field.

    Rows are inserted one at a time and reduced against the pivots already
    present, always clearing the oldest pivot first; this terminates because
    a pivot row never contains the pivot column of an older pivot.  The new
    pivot column is chosen with a Markowitz-style rule: fewest occurrences
    in ``col_counts``, ties broken by lowest column index.
    """

    def __init__(self, f: FieldChoice, col_counts: dict | None = None, bit_limit=RATIONAL_BIT_LIMIT):
        self.field = f
        self.p = f.modulus
        self.col_counts = col_counts or {}
        self.bit_limit = bit_limit
        self.pivots: dict = {}  # col -> (order, row)
        self.rank = 0

    def _choose_pivot(self, row: dict):
        counts = self.col_counts
        return min(row, key=lambda c: (counts.get(c, 0), c))

    def reduce(self, row: dict) -> dict:
        """Return ``row`` reduced against the current pivots (input not mutated)."""
        row = dict(row)
        pivots = self.pivots
        p = self.p
        while True:
            best = None
            for c in row:
                hit = pivots.get(c)
                if hit is not None and (best is None or hit[0] < best[1][0]):
                    best = (c, hit)
            if best is None:
                return row
            c, (_, prow) = best
            factor = row[c]
            if p is None:
                for k, v in prow.items():
                    nv = row.get(k, 0) - factor * v
                    if nv:
                        row[k] = nv
                    else:
                        row.pop(k, None)
                self._check_size(row)
            else:
                for k, v in prow.items():
                    nv = (row.get(k, 0) - factor * v) % p
                    if nv:
                        row[k] = nv
                    else:
                        row.pop(k, None)

    def _check_size(self, row: dict):
        limit = self.bit_limit
        for v in row.values():
            if v.numerator.bit_length() > limit or v.denominator.bit_length() > limit:
                raise ResourceLimitError(
                    f"rational entry exceeds {limit} bits; retry over a prime field"
                )

    def add(self, row: dict) -> bool:
        """Insert a row; True when it was independent of the previous ones."""
        row = self.reduce(self._coerce(row))
        if not row:
            return False
        c = self._choose_pivot(row)
        lead = row[c]
        if self.p is None:
            row = {k: v / lead for k, v in row.items()}
        else:
            inv = pow(lead, -1, self.p)
            row = {k: v * inv % self.p for k, v in row.items()}
        self.pivots[c] = (self.rank, row)
        self.rank += 1
        return True

    def _coerce(self, row: dict) -> dict:
        if self.p is None:
            return {k: Fraction(v) for k, v in row.items() if v != 0}
        p = self.p
        out = {}
        for k, v in row.items():
            if isinstance(v, Fraction):
                v = v.numerator * pow(v.denominator, -1, p)
            v %= p
            if v:
                out[k] = v
        return out


def rank_of_vectors(vectors: Iterable[dict], f: FieldChoice = GF32003) -> int:
    """Rank of a family of sparse vectors.

    Sparsest vectors are inserted first; ties keep the input order.
    """
    vectors = list(vectors)
    if f.is_rational and sum(len(v) for v in vectors) > RATIONAL_NNZ_LIMIT:
        raise ResourceLimitError(
            f"more than {RATIONAL_NNZ_LIMIT} nonzeros for rational elimination"
        )
    counts: dict = {}
    for v in vectors:
        for c in v:
            counts[c] = counts.get(c, 0) + 1
    ech = Echelon(f, counts)
    order = sorted(range(len(vectors)), key=lambda i: (len(vectors[i]), i))
    for i in order:
        if vectors[i]:
            ech.add(vectors[i])
    return ech.rank


def rank(M: SparseMatrix, f: FieldChoice = GF32003) -> int:
    """Exact rank of ``M`` over ``f``."""
    if M.nnz == 0:
        return 0
    # eliminate along the shorter side
    vecs = M.rows() if M.n_rows <= M.n_cols else M.columns()
    return rank_of_vectors(vecs, f)


@dataclass
class MultiPrimeRank:
    ranks: dict
    rank: int
    agree: bool


def multi_prime_rank(M: SparseMatrix, primes=DEFAULT_PRIMES) -> MultiPrimeRank:
    """Rank at several primes; the maximum estimates the rational rank."""
    ranks = {p: rank(M, FieldChoice(p)) for p in primes}
    values = set(ranks.values())
    if len(values) > 1:
        log.warning("rank disagreement across primes: %s", ranks)
    return MultiPrimeRank(ranks, max(values), len(values) == 1)


def in_image(M: SparseMatrix, v, f: FieldChoice = GF32003):
    """Decide whether ``M x = v`` is solvable; return ``(found, witness)``.

    ``v`` may be a list of length ``n_rows`` or a sparse dict.  The witness
    is a list of length ``n_cols`` over the field, or None.
    """
    if isinstance(v, dict):
        target = dict(v)
    else:
        if len(v) != M.n_rows:
            raise ValueError(f"vector of length {len(v)} for {M.n_rows} rows")
        target = {i: x for i, x in enumerate(v) if x != 0}
    if f.is_rational and M.nnz > RATIONAL_NNZ_LIMIT:
        raise ResourceLimitError(f"more than {RATIONAL_NNZ_LIMIT} nonzeros for rational elimination")
    p = f.modulus
    zero_witness = [f.coerce(0)] * M.n_cols
    target = {k: f.coerce(x) for k, x in target.items()}
    target = {k: x for k, x in target.items() if x != 0}
    if not target:
        return True, zero_witness

    # column echelon with transformation tracking: pivot vector = sum T[j] * col_j
    # the combination is stored under negative keys so one dict carries both
    ech = Echelon(f)
    for j, col in enumerate(M.columns()):
        if not col:
            continue
        vec = {k: f.coerce(x) for k, x in col.items()}
        vec = {k: x for k, x in vec.items() if x != 0}
        vec[-1 - j] = f.coerce(1)
        reduced = ech.reduce(vec)
        if any(k >= 0 for k in reduced):
            _insert_tracked(ech, reduced)
    reduced = ech.reduce(target)
    if any(k >= 0 for k in reduced):
        return False, None
    # target - sum(lambda_k P_k) has only tracking keys left: it equals -(combination)
    witness = list(zero_witness)
    for k, x in reduced.items():
        j = -1 - k
        witness[j] = -x if p is None else (-x) % p
    return True, witness


def _insert_tracked(ech: Echelon, row: dict):
    c = min(k for k in row if k >= 0)
    lead = row[c]
    if ech.p is None:
        row = {k: x / lead for k, x in row.items()}
    else:
        inv = pow(lead, -1, ech.p)
        row = {k: x * inv % ech.p for k, x in row.items()}
    ech.pivots[c] = (ech.rank, row)
    ech.rank += 1
