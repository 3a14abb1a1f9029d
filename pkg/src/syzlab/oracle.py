"""Independent dense-rational oracle for tiny Koszul strands.

Nothing here is shared with the sparse engine: monomials are enumerated
with ``itertools.product``, wedges in plain lexicographic order, matrices
are dense lists of Fractions, and rank comes from textbook row reduction.
``mode="full"`` works over the polynomial ring itself instead of its
Artinian reduction, which checks the reduction as well.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, product

MAX_MIDDLE = 5000


class OracleSizeError(ValueError):
    pass


def _monomials(nvars: int, e: int, cap: int | None) -> list[tuple]:
    if e < 0:
        return []
    top = e if cap is None else min(e, cap)
    return [m for m in product(range(top + 1), repeat=nvars) if sum(m) == e]


def _term(nvars, d, p, e, cap):
    gens = _monomials(nvars, d, cap)
    ts = _monomials(nvars, e, cap)
    if p < 0 or p > len(gens):
        return gens, []
    return gens, [(w, t) for w in combinations(range(len(gens)), p) for t in ts]


def _matrix(gens, src, dst, cap):
    """Dense matrix of the Koszul differential, rows indexed by ``dst``."""
    index = {b: i for i, b in enumerate(dst)}
    mat = [[Fraction(0)] * len(src) for _ in range(len(dst))]
    for j, (w, t) in enumerate(src):
        for i, s in enumerate(w):
            prod_ = tuple(a + c for a, c in zip(gens[s], t))
            if cap is not None and max(prod_) > cap:
                continue
            row = index[(w[:i] + w[i + 1:], prod_)]
            mat[row][j] += 1 if i % 2 == 0 else -1
    return mat


def dense_rank(mat) -> int:
    """Rank by Gauss-Jordan elimination over Q on a dense list of rows."""
    rows = [list(r) for r in mat if any(r)]
    if not rows:
        return 0
    n_cols = len(rows[0])
    r = 0
    for c in range(n_cols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        lead = rows[r][c]
        rows[r] = [x / lead for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                fac = rows[i][c]
                rows[i] = [x - fac * y for x, y in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return r


def brute_kpq(ctx, p: int, q: int, mode: str = "reduced", max_middle: int = MAX_MIDDLE) -> int:
    """dim K_{p,q}(n, b; d) over Q by dense elimination."""
    if mode not in ("reduced", "full"):
        raise ValueError(f"mode must be 'reduced' or 'full', got {mode!r}")
    if p < 0:
        return 0
    nvars, d, b = ctx.n + 1, ctx.d, ctx.b
    cap = d - 1 if mode == "reduced" else None
    gens, middle = _term(nvars, d, p, q * d + b, cap)
    if len(middle) > max_middle:
        raise OracleSizeError(f"middle term has {len(middle)} > {max_middle} basis elements")
    if not middle:
        return 0
    _, left = _term(nvars, d, p + 1, (q - 1) * d + b, cap)
    _, right = _term(nvars, d, p - 1, (q + 1) * d + b, cap)
    r_in = dense_rank(_matrix(gens, left, middle, cap)) if left else 0
    r_out = dense_rank(_matrix(gens, middle, right, cap)) if right else 0
    return len(middle) - r_in - r_out
