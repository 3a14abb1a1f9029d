"""Koszul strands of the truncated Veronese ring and their cohomology.

K_{p,q}(n, b; d) is the middle cohomology of

    L^{p+1} S_d (x) S_{(q-1)d+b} -> L^p S_d (x) S_{qd+b} -> L^{p-1} S_d (x) S_{(q+1)d+b}

where S is the truncated ring S/(z_0^d, ..., z_n^d) and L^k is the k-th
exterior power.  The differential sends (s_1 ^ ... ^ s_p) (x) t to
sum_i (-1)^i (s_1 ^ ... ^ s_p without s_i) (x) s_i t, with i counted from
0 along the sorted wedge.

Every differential preserves the Z^{n+1} weight (sum of all exponent
vectors), so ranks are computed block by block.  Permuting the variables
is an automorphism of the complex, hence blocks whose weights differ by a
permutation have equal rank; by default only sorted weights are eliminated
and the result is multiplied by the orbit size.
"""

from __future__ import annotations

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from functools import lru_cache
from math import comb, factorial
from collections import Counter

import numpy as np

from syzlab.linalg import GF32003, FieldChoice, SparseMatrix, rank_of_vectors
from syzlab.monomials import RingContext, basis_index, reduced_basis, reduced_dim
from syzlab.tables import BettiTable

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 50_000_000


class BudgetExceeded(RuntimeError):
    """Refusal to build a term whose estimated size exceeds the budget."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


def wedge_dim(m: int, k: int) -> int:
    if k < 0 or k > m:
        return 0
    return comb(m, k)


def term_dim(ctx: RingContext, p: int, q: int) -> int:
    """dim of L^p S_d (x) S_{qd+b}."""
    return wedge_dim(reduced_dim(ctx, ctx.d), p) * reduced_dim(ctx, q * ctx.d + ctx.b)


def colex_combinations(m: int, k: int) -> list[tuple]:
    """k-subsets of range(m) in colexicographic order."""
    if k < 0 or k > m:
        return []
    return sorted(combinations(range(m), k), key=lambda c: c[::-1])


class _Tables:
    """Basis data of the truncated ring for one (n, d), built on demand."""

    _cache: dict = {}

    def __init__(self, n: int, d: int):
        self.ctx = RingContext(n, d)
        self.gens = reduced_basis(self.ctx, d)
        self.gen_exps = np.array(self.gens, dtype=np.int64).reshape(len(self.gens), n + 1)
        self._mul: dict = {}

    @classmethod
    def get(cls, n: int, d: int) -> _Tables:
        key = (n, d)
        if key not in cls._cache:
            cls._cache[key] = cls(n, d)
        return cls._cache[key]

    def mul_table(self, e: int) -> list[list[int]]:
        """mul[s][t] = index in degree e+d of gen_s * basis_e[t], or -1."""
        if e not in self._mul:
            n, d = self.ctx.n, self.ctx.d
            src = reduced_basis(self.ctx, e)
            dst = basis_index(n + 1, d - 1, e + d)
            table = []
            for s in self.gens:
                row = []
                for t in src:
                    prod = tuple(a + c for a, c in zip(s, t))
                    row.append(dst[prod] if max(prod) < d else -1)
                table.append(row)
            self._mul[e] = table
        return self._mul[e]


def _check_budget(ctx, p, q, budget):
    est = term_dim(ctx, p, q) * (p + 1)
    if est > budget:
        raise BudgetExceeded(
            f"term L^{p} (x) S_{q * ctx.d + ctx.b} for (n,b,d)=({ctx.n},{ctx.b},{ctx.d}) "
            f"has ~{est} estimated nonzeros, budget {budget}"
        )


def _image_vector(wedge, ti, mul, neg_one):
    """Image of wedge (x) t under the differential, keyed by (wedge', t')."""
    vec = {}
    for i, s in enumerate(wedge):
        prod = mul[s][ti]
        if prod >= 0:
            vec[(wedge[:i] + wedge[i + 1:], prod)] = 1 if i % 2 == 0 else neg_one
    return vec


def _orbit_size(weight) -> int:
    size = factorial(len(weight))
    for mult in Counter(weight).values():
        size //= factorial(mult)
    return size


def weight_blocks(ctx: RingContext, p: int, e: int, canonical_only: bool = False):
    """Group the basis of L^p S_d (x) S_e by Z^{n+1} weight.

    Returns a dict weight -> list of (wedge, t_index).  With
    ``canonical_only`` only non-decreasing weights are kept.
    """
    tabs = _Tables.get(ctx.n, ctx.d)
    m = len(tabs.gens)
    basis_e = reduced_basis(ctx, e)
    if p < 0 or p > m or not basis_e:
        return {}
    nv = ctx.n + 1
    if p == 0:
        combos = np.zeros((1, 0), dtype=np.int64)
        wsum = np.zeros((1, nv), dtype=np.int64)
    else:
        combos = np.array(list(combinations(range(m), p)), dtype=np.int64)
        wsum = tabs.gen_exps[combos].sum(axis=1)
    t_exps = np.array(basis_e, dtype=np.int64).reshape(len(basis_e), nv)
    # weight of (wedge, t) for every pair: shape (n_wedges, n_t, nv)
    full = wsum[:, None, :] + t_exps[None, :, :]
    flat = full.reshape(-1, nv)
    if canonical_only and nv > 1:
        keep = np.all(np.diff(flat, axis=1) >= 0, axis=1)
    else:
        keep = np.ones(len(flat), dtype=bool)
    idx = np.nonzero(keep)[0]
    if len(idx) == 0:
        return {}
    base = int(flat.max()) + 1
    codes = np.zeros(len(idx), dtype=np.int64)
    for j in range(nv):
        codes = codes * base + flat[idx, j]
    order = np.argsort(codes, kind="stable")
    sorted_codes = codes[order]
    bounds = np.nonzero(np.diff(sorted_codes))[0] + 1
    n_t = len(basis_e)
    blocks = {}
    for chunk in np.split(order, bounds):
        pairs = idx[chunk]
        weight = tuple(int(x) for x in flat[pairs[0]])
        blocks[weight] = [(tuple(int(x) for x in combos[k // n_t]), int(k % n_t)) for k in pairs]
    return blocks


_RANKS: dict = {}


def differential_rank(
    ctx: RingContext,
    p: int,
    q: int,
    f: FieldChoice = GF32003,
    *,
    symmetry: bool = True,
    budget: int = DEFAULT_BUDGET,
) -> int:
    """Rank of L^p S_d (x) S_{qd+b} -> L^{p-1} S_d (x) S_{(q+1)d+b}."""
    key = (ctx.n, ctx.b, ctx.d, p, q, f.modulus, symmetry)
    if key in _RANKS:
        return _RANKS[key]
    e = q * ctx.d + ctx.b
    m = reduced_dim(ctx, ctx.d)
    if p <= 0 or p > m or reduced_dim(ctx, e) == 0 or reduced_dim(ctx, e + ctx.d) == 0:
        _RANKS[key] = 0
        return 0
    _check_budget(ctx, p, q, budget)
    mul = _Tables.get(ctx.n, ctx.d).mul_table(e)
    neg_one = -1 if f.modulus is None else f.modulus - 1
    total = 0
    for weight, elems in weight_blocks(ctx, p, e, canonical_only=symmetry).items():
        vectors = [_image_vector(w, ti, mul, neg_one) for w, ti in elems]
        r = rank_of_vectors(vectors, f)
        total += r * (_orbit_size(weight) if symmetry else 1)
    _RANKS[key] = total
    return total


def clear_rank_cache():
    _RANKS.clear()


def kpq_dim(
    ctx: RingContext,
    p: int,
    q: int,
    f: FieldChoice = GF32003,
    *,
    symmetry: bool = True,
    budget: int = DEFAULT_BUDGET,
) -> int:
    """dim K_{p,q}(n, b; d) = dim(middle) - rank(d_out) - rank(d_in)."""
    if p < 0:
        return 0
    mid = term_dim(ctx, p, q)
    if mid == 0:
        return 0
    _check_budget(ctx, p, q, budget)
    r_out = differential_rank(ctx, p, q, f, symmetry=symmetry, budget=budget)
    r_in = differential_rank(ctx, p + 1, q - 1, f, symmetry=symmetry, budget=budget)
    value = mid - r_out - r_in
    if value < 0:
        raise ArithmeticError(f"negative cohomology dimension at {(p, q)}: {value}")
    return value


@dataclass
class MultiPrimeKpq:
    values: dict
    value: int
    agree: bool


def kpq_multi_prime(ctx: RingContext, p: int, q: int, primes, **kw) -> MultiPrimeKpq:
    """k_{p,q} at several primes.

    Ranks mod p can only drop, so the smallest dimension is the best
    estimate of the characteristic-zero value.
    """
    values = {pr: kpq_dim(ctx, p, q, FieldChoice(pr), **kw) for pr in primes}
    distinct = set(values.values())
    if len(distinct) > 1:
        log.warning("k_{%d,%d}(%d,%d;%d) differs across primes: %s", p, q, ctx.n, ctx.b, ctx.d, values)
    return MultiPrimeKpq(values, min(distinct), len(distinct) == 1)


@dataclass
class KoszulStrand:
    """Explicit three-term complex computing one K_{p,q}.

    ``d_in`` has shape (middle, left) and ``d_out`` has shape (right, middle):
    matrices act on column vectors.
    """

    ctx: RingContext
    p: int
    q: int
    left_basis: list = field(repr=False)
    middle_basis: list = field(repr=False)
    right_basis: list = field(repr=False)
    d_in: SparseMatrix = field(repr=False)
    d_out: SparseMatrix = field(repr=False)

    @property
    def dims(self) -> tuple[int, int, int]:
        return (len(self.left_basis), len(self.middle_basis), len(self.right_basis))

    def cohomology(self, f: FieldChoice = GF32003) -> int:
        from syzlab.linalg import rank

        return self.dims[1] - rank(self.d_out, f) - rank(self.d_in, f)

    def middle_index(self) -> dict:
        return {b: i for i, b in enumerate(self.middle_basis)}


def _term_basis(ctx: RingContext, p: int, q: int) -> list:
    m = reduced_dim(ctx, ctx.d)
    n_t = reduced_dim(ctx, q * ctx.d + ctx.b)
    return [(w, t) for w in colex_combinations(m, p) for t in range(n_t)]


def _differential_matrix(ctx, p, q, src, dst) -> SparseMatrix:
    if not src or not dst:
        return SparseMatrix.zero(len(dst), len(src))
    mul = _Tables.get(ctx.n, ctx.d).mul_table(q * ctx.d + ctx.b)
    index = {b: i for i, b in enumerate(dst)}
    entries = {}
    for j, (w, ti) in enumerate(src):
        for key, v in _image_vector(w, ti, mul, -1).items():
            entries[(index[key], j)] = v
    return SparseMatrix(len(dst), len(src), entries)


def build_strand(
    ctx: RingContext, p: int, q: int, f: FieldChoice = GF32003, *, budget: int = DEFAULT_BUDGET
) -> KoszulStrand:
    """Materialize the strand for K_{p,q} with explicit sparse differentials.

    Wedges are listed in colex order of index tuples, each followed by the
    basis of the tensor factor.  Entries are +-1 integers; the field is only
    used when ranks are taken.
    """
    if p < 0:
        raise ValueError("p must be >= 0")
    _check_budget(ctx, p, q, budget)
    left = _term_basis(ctx, p + 1, q - 1)
    middle = _term_basis(ctx, p, q)
    right = _term_basis(ctx, p - 1, q + 1) if p >= 1 else []
    d_in = _differential_matrix(ctx, p + 1, q - 1, left, middle)
    d_out = _differential_matrix(ctx, p, q, middle, right)
    return KoszulStrand(ctx, p, q, left, middle, right, d_in, d_out)


class _WeightedWedges:
    """p-subsets of the degree-d generators with a prescribed total weight.

    ``count`` is memoized on (start, k, remainder), which makes both the
    size estimate and the enumeration output-sensitive.
    """

    def __init__(self, gens, cap_each):
        self.gens = tuple(gens)
        self.cap = cap_each
        self.count = lru_cache(maxsize=None)(self._count)

    def _count(self, start, k, rem):
        if k == 0:
            return 1 if max(rem) <= self.cap else 0
        if max(rem) > self.cap * (k + 1):
            return 0
        gens = self.gens
        total = 0
        for i in range(start, len(gens) - k + 1):
            rest = tuple(r - a for r, a in zip(rem, gens[i]))
            if min(rest) >= 0:
                total += self.count(i + 1, k - 1, rest)
        return total

    def walk(self, start, k, rem):
        if k == 0:
            yield (), rem
            return
        gens = self.gens
        for i in range(start, len(gens) - k + 1):
            rest = tuple(r - a for r, a in zip(rem, gens[i]))
            if min(rest) >= 0 and self.count(i + 1, k - 1, rest):
                for tail, left in self.walk(i + 1, k - 1, rest):
                    yield (i,) + tail, left


def term_block_size(ctx: RingContext, p: int, q: int, weight) -> int:
    e = q * ctx.d + ctx.b
    if e < 0 or p < 0 or sum(weight) != p * ctx.d + e:
        return 0
    ww = _WeightedWedges(reduced_basis(ctx, ctx.d), ctx.d - 1)
    return ww.count(0, p, tuple(weight))


def term_block(ctx: RingContext, p: int, q: int, weight, limit: int | None = None) -> list:
    """Basis elements (wedge, t_index) of L^p S_d (x) S_{qd+b} of a given weight."""
    e = q * ctx.d + ctx.b
    if e < 0 or p < 0 or sum(weight) != p * ctx.d + e:
        return []
    ww = _WeightedWedges(reduced_basis(ctx, ctx.d), ctx.d - 1)
    weight = tuple(weight)
    size = ww.count(0, p, weight)
    if limit is not None and size > limit:
        raise BudgetExceeded(f"weight block of L^{p} (x) S_{e} has {size} > {limit} elements")
    index = basis_index(ctx.n + 1, ctx.d - 1, e)
    return [(wedge, index[t]) for wedge, t in ww.walk(0, p, weight)]


def strand_block(ctx: RingContext, p: int, q: int, weight, limit: int | None = None) -> KoszulStrand:
    """The strand restricted to a single Z^{n+1} weight."""
    left = term_block(ctx, p + 1, q - 1, weight, limit)
    middle = term_block(ctx, p, q, weight, limit)
    right = term_block(ctx, p - 1, q + 1, weight, limit) if p >= 1 else []
    d_in = _differential_matrix(ctx, p + 1, q - 1, left, middle)
    d_out = _differential_matrix(ctx, p, q, middle, right)
    return KoszulStrand(ctx, p, q, left, middle, right, d_in, d_out)


def _rank_job(args):
    n, b, d, p, q, modulus, symmetry, budget = args
    ctx = RingContext(n, d, b)
    t0 = time.perf_counter()
    try:
        r = differential_rank(ctx, p, q, FieldChoice(modulus), symmetry=symmetry, budget=budget)
    except BudgetExceeded:
        r = None
    return (p, q), r, time.perf_counter() - t0


def table_cells(ctx: RingContext) -> list[tuple[int, int]]:
    m = reduced_dim(ctx, ctx.d)
    return [(p, q) for q in range(0, ctx.n + 2) for p in range(0, m + 1)]


def betti_table(
    ctx: RingContext,
    f: FieldChoice = GF32003,
    *,
    jobs: int = 1,
    budget: int = DEFAULT_BUDGET,
    cache=None,
    symmetry: bool = True,
) -> BettiTable:
    """All k_{p,q} with 0 <= p <= dim S_d and 0 <= q <= n+1.

    ``cache`` (optional) needs ``get_cell(ctx, p, q, f)`` returning a record
    with ``kpq`` or None, and ``put_cell(ctx, p, q, f, kpq, ranks, wall)``.
    Cells refused by the budget are listed in ``missing`` and reported
    through :class:`BudgetExceeded` carrying the partial table.
    """
    m = reduced_dim(ctx, ctx.d)
    entries, missing = {}, set()
    todo = []
    for p, q in table_cells(ctx):
        hit = cache.get_cell(ctx, p, q, f) if cache is not None else None
        if hit is not None:
            entries[(p, q)] = hit.kpq
        else:
            todo.append((p, q))

    if jobs > 1 and todo:
        needed = sorted({(p, q) for p, q in todo} | {(p + 1, q - 1) for p, q in todo})
        args = [(ctx.n, ctx.b, ctx.d, p, q, f.modulus, symmetry, budget) for p, q in needed]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for (p, q), r, _ in pool.map(_rank_job, args):
                if r is not None:
                    _RANKS[(ctx.n, ctx.b, ctx.d, p, q, f.modulus, symmetry)] = r

    for p, q in todo:
        t0 = time.perf_counter()
        try:
            value = kpq_dim(ctx, p, q, f, symmetry=symmetry, budget=budget)
        except BudgetExceeded:
            missing.add((p, q))
            continue
        entries[(p, q)] = value
        if cache is not None:
            ranks = {
                "out": differential_rank(ctx, p, q, f, symmetry=symmetry, budget=budget)
                if term_dim(ctx, p, q)
                else 0,
                "in": differential_rank(ctx, p + 1, q - 1, f, symmetry=symmetry, budget=budget)
                if term_dim(ctx, p, q)
                else 0,
            }
            cache.put_cell(ctx, p, q, f, value, ranks, time.perf_counter() - t0)

    table = BettiTable(
        entries,
        n=ctx.n,
        b=ctx.b,
        d=ctx.d,
        field_tag=f.tag,
        method_tag="engine",
        p_max=m,
        q_max=ctx.n + 1,
        missing=missing,
    )
    if missing:
        raise BudgetExceeded(f"{len(missing)} cells exceeded the budget", partial=table)
    return table


def _poly_mul(a, b, trunc):
    out = [0] * (trunc + 1)
    for i, x in enumerate(a):
        if x == 0 or i > trunc:
            continue
        for j, y in enumerate(b):
            if i + j > trunc:
                break
            out[i + j] += x * y
    return out


@dataclass
class HilbertReport:
    passed: bool
    lhs: list
    rhs: list
    mismatches: list

    def __bool__(self):
        return self.passed


def hilbert_numerator(t: BettiTable, trunc: int) -> list:
    """Coefficients of sum (-1)^p k_{p,q} t^{p+q} up to degree ``trunc``."""
    lhs = [0] * (trunc + 1)
    for (p, q), v in t.entries.items():
        if 0 <= p + q <= trunc:
            lhs[p + q] += (-1) ** p * v
    return lhs


def hilbert_check(t: BettiTable) -> HilbertReport:
    """Euler-characteristic identity for the table's resolution.

    For a Veronese table: sum (-1)^p k_{p,q} t^{p+q} equals
    (1-t)^{h0(d)} * sum_m h0(b+md) t^m, h0(e) = C(e+n, n), compared up to
    the largest possible p+q.  A table without ring data (pure or
    synthesized, two rows, columns 0..r) must have a numerator divisible by
    (1-t)^r, which is the Herzog-Kuhl condition.
    """
    if t.n is None:
        r = max((p for p, _ in t.entries), default=0)
        top = max((p + q for p, q in t.entries), default=0)
        lhs = hilbert_numerator(t, top)
        quotient = list(lhs)
        # synthetic division by (1 - t), r times
        ok = True
        for _ in range(r):
            if sum(quotient) != 0:
                ok = False
                break
            acc, nxt = 0, []
            for c in quotient[:-1]:
                acc += c
                nxt.append(acc)
            quotient = nxt
        mism = [] if ok else [("divisibility", r)]
        return HilbertReport(ok, lhs, quotient, mism)

    n, b, d = t.n, t.b, t.d
    ctx = RingContext(n, d, b)
    m = reduced_dim(ctx, d)
    trunc = (t.p_max if t.p_max is not None else m) + (t.q_max if t.q_max is not None else n + 1)
    lhs = hilbert_numerator(t, trunc)
    h0_d = comb(d + n, n)
    one_minus_t = [1]
    for _ in range(h0_d):
        one_minus_t = _poly_mul(one_minus_t, [1, -1], trunc)
    series = [comb(b + k * d + n, n) if b + k * d >= 0 else 0 for k in range(trunc + 1)]
    rhs = _poly_mul(one_minus_t, series, trunc)
    mism = [(k, lhs[k], rhs[k]) for k in range(trunc + 1) if lhs[k] != rhs[k]]
    return HilbertReport(not mism, lhs, rhs, mism)


def reindex_check(ctx: RingContext, p: int, q: int, f: FieldChoice = GF32003, **kw) -> bool:
    """k_{p,q}(n,b;d) == k_{p,q+1}(n,b-d;d)."""
    a = kpq_dim(ctx, p, q, f, **kw)
    other = RingContext(ctx.n, ctx.d, ctx.b - ctx.d)
    return a == kpq_dim(other, p, q + 1, f, **kw)


def np_property(t: BettiTable, k: int) -> bool:
    """Property (N_k) read off an engine table of the untwisted ring."""
    for (p, q), v in t.entries.items():
        if v == 0:
            continue
        if p == 0 and q != 0:
            return False
        if 1 <= p <= k and q != 1:
            return False
    return True
