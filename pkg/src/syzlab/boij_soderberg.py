"""Two-row Boij-Soderberg tables: pure tables, synthesis, decomposition, sampling.

A pure table Pi_i of length r has degree sequence a_p = p+1 for p < i and
a_p = p+2 for p >= i (p = 0..r), so it sits in row q = 1 for p < i and row
q = 2 for p >= i.  Its entries come from the Herzog-Kuhl equations,
beta_p proportional to prod_{j != p} 1/|a_j - a_p|, scaled so beta_0 = 1.
Indices i = 0 (all of row 2) and i = r+1 (all of row 1) are the two
boundary tables; they are needed to decompose arbitrary two-row tables.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

import numpy as np

from syzlab.tables import BettiTable

DISTRIBUTIONS = ("uniform", "exponential", "beta")
DEFAULT_GRID = (0.0, 0.5, 1.0, 1.5, 2.0)


class NotInPureCone(ValueError):
    pass


@dataclass(frozen=True)
class PureTable:
    i: int
    r: int
    betti: tuple

    @property
    def degrees(self) -> tuple:
        return tuple(p + self.row(p) for p in range(self.r + 1))

    def row(self, p: int) -> int:
        return 1 if p < self.i else 2

    def cells(self) -> dict:
        return {(p, self.row(p)): v for p, v in enumerate(self.betti)}

    def to_table(self) -> BettiTable:
        return BettiTable(self.cells(), field_tag="Q", method_tag="synthesized", p_max=self.r, q_max=2)


def degree_sequence(i: int, r: int) -> list:
    return [p + 1 if p < i else p + 2 for p in range(r + 1)]


def pure_table(i: int, r: int) -> PureTable:
    if r < 1:
        raise ValueError(f"need r >= 1, got {r}")
    if not 0 <= i <= r + 1:
        raise ValueError(f"need 0 <= i <= r+1, got i={i}, r={r}")
    a = degree_sequence(i, r)
    raw = []
    for p in range(r + 1):
        den = 1
        for j in range(r + 1):
            if j != p:
                den *= abs(a[j] - a[p])
        raw.append(Fraction(1, den))
    scale = raw[0]
    return PureTable(i, r, tuple(v / scale for v in raw))


def row1_entry(i: int, r: int, p: int) -> Fraction:
    """beta_p(Pi_i) for p < i <= r: C(r+1, p) (i - p) / i."""
    return Fraction(comb(r + 1, p) * (i - p), i)


def _as_coefficients(x, r: int) -> dict:
    """Coefficient vector -> {i: Fraction}.

    A sequence of length r means x_1..x_r; length r+2 means x_0..x_{r+1}.
    """
    if isinstance(x, dict):
        coeffs = {int(i): Fraction(v) for i, v in x.items()}
    else:
        x = list(x)
        if len(x) == r:
            coeffs = {i + 1: Fraction(v) for i, v in enumerate(x)}
        elif len(x) == r + 2:
            coeffs = {i: Fraction(v) for i, v in enumerate(x)}
        else:
            raise ValueError(f"expected {r} or {r + 2} coefficients, got {len(x)}")
    for i, v in coeffs.items():
        if not 0 <= i <= r + 1:
            raise ValueError(f"pure table index {i} outside 0..{r + 1}")
        if v < 0:
            raise ValueError(f"negative coefficient x_{i} = {v}")
    return coeffs


def synthesize(x, r: int) -> BettiTable:
    """sum_i x_i Pi_i as an exact table tagged ``synthesized``."""
    coeffs = _as_coefficients(x, r)
    acc: dict = {}
    for i, c in coeffs.items():
        if c == 0:
            continue
        for cell, v in pure_table(i, r).cells().items():
            acc[cell] = acc.get(cell, 0) + c * v
    return BettiTable(acc, field_tag="Q", method_tag="synthesized", p_max=r, q_max=2)


@dataclass
class BSDecomposition:
    r: int
    coefficients: dict = field(default_factory=dict)
    table: BettiTable | None = None

    def vector(self, with_boundary: bool = False) -> list:
        idx = range(0, self.r + 2) if with_boundary else range(1, self.r + 1)
        return [self.coefficients.get(i, Fraction(0)) for i in idx]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["i", "x"])
        for i in range(0, self.r + 2):
            v = self.coefficients.get(i, Fraction(0))
            if v:
                w.writerow([i, str(v)])
        return buf.getvalue()


def _length(t: BettiTable) -> int:
    if t.p_max is not None:
        return t.p_max
    return max((p for p, _ in t.entries), default=0)


def decompose(t: BettiTable, r: int | None = None, order: str = "row2", rng=None) -> BSDecomposition:
    """Peel pure tables off a two-row table until nothing is left.

    ``order="row2"`` peels Pi_b at the smallest column b with a row-2
    entry, ``"row1"`` peels Pi_a at the first column a without a row-1
    entry, and ``"shuffled"`` picks between the two at random (``rng``).
    Each step removes the largest multiple keeping all entries nonnegative;
    in the two-row case every order yields the same coefficients.
    """
    if order not in ("row2", "row1", "shuffled"):
        raise ValueError(f"unknown peeling order {order!r}")
    if any(q not in (1, 2) for _, q in t.entries):
        raise NotInPureCone("table has entries outside rows 1 and 2")
    if r is None:
        r = _length(t)
    if any(p > r for p, _ in t.entries):
        raise NotInPureCone(f"entries beyond column r={r}")
    rest = {c: Fraction(v) for c, v in t.entries.items() if v}
    coeffs: dict = {}
    for _ in range(r + 3):
        if not rest:
            return BSDecomposition(r, coeffs, t)
        mode = order
        if order == "shuffled":
            mode = "row2" if (rng.random() if rng is not None else 0.5) < 0.5 else "row1"
        row2 = [p for p, q in rest if q == 2]
        if mode == "row2":
            i = min(row2) if row2 else r + 1
        else:
            row1 = {p for p, q in rest if q == 1}
            i = next(p for p in range(r + 2) if p not in row1)
        pure = pure_table(i, r).cells()
        mult = min(rest.get(c, Fraction(0)) / v for c, v in pure.items())
        if mult <= 0:
            raise NotInPureCone(f"stalled at Pi_{i}: remainder {_show(rest)}")
        coeffs[i] = coeffs.get(i, Fraction(0)) + mult
        for c, v in pure.items():
            left = rest.get(c, Fraction(0)) - mult * v
            if left:
                rest[c] = left
            else:
                rest.pop(c, None)
    raise NotInPureCone(f"no termination after {r + 3} steps: remainder {_show(rest)}")


def _show(rest: dict) -> str:
    return ", ".join(f"({p},{q})={v}" for (p, q), v in sorted(rest.items()))


def herzog_kuhl_residuals(pt: PureTable) -> list:
    """sum_p (-1)^p beta_p a_p^k for k = 0..r-1; all zero for a pure table."""
    a = pt.degrees
    return [sum((-1) ** p * b * a[p] ** k for p, b in enumerate(pt.betti)) for k in range(pt.r)]


def is_staircase(t: BettiTable, r: int | None = None) -> bool:
    """Row 1 supported on an initial segment, row 2 on a final segment."""
    if r is None:
        r = _length(t)
    row1 = sorted(p for p, q in t.entries if q == 1)
    row2 = sorted(p for p, q in t.entries if q == 2)
    if any(q not in (1, 2) for _, q in t.entries):
        return False
    ok1 = row1 == list(range(len(row1)))
    ok2 = row2 == list(range(r + 1 - len(row2), r + 1))
    return ok1 and ok2


# sampling


def profile_index(r: int, a: float) -> int:
    return math.floor(r / 2 + a * math.sqrt(r) / 2 + 0.5)


def _log_row1(r: int) -> np.ndarray:
    """log beta_p(Pi_i) for the row-1 part, as an (r+1) x (r+1) array [p, i]; -inf off support."""
    p = np.arange(r + 1)[:, None]
    i = np.arange(r + 1)[None, :]
    log_binom = (
        math.lgamma(r + 2)
        - np.vectorize(math.lgamma)(np.arange(r + 1) + 1.0)[:, None]
        - np.vectorize(math.lgamma)(r + 2.0 - np.arange(r + 1))[:, None]
    )
    with np.errstate(divide="ignore", invalid="ignore"):
        out = log_binom + np.log(np.where(i > p, i - p, 0).astype(float)) - np.log(np.maximum(i, 1))
    out[:, 0] = -np.inf
    return out


def _draw(rng, r: int, distribution: str) -> np.ndarray:
    if distribution == "uniform":
        return rng.random(r)
    if distribution == "exponential":
        return rng.exponential(1.0, r)
    if distribution == "beta":
        return rng.beta(2.0, 2.0, r)
    raise ValueError(f"unknown distribution {distribution!r}; choose from {DISTRIBUTIONS}")


def profile_ratios(x: np.ndarray, r: int, grid, log_table: np.ndarray | None = None) -> np.ndarray:
    """rho(a) = k_{p(a),1}(x) / k_{p(0),1}(x) for each a in ``grid`` (x = x_1..x_r)."""
    if log_table is None:
        log_table = _log_row1(r)
    with np.errstate(divide="ignore"):
        log_x = np.concatenate([[-np.inf], np.log(np.asarray(x, dtype=float))])
    rows = [profile_index(r, a) for a in grid]
    p0 = profile_index(r, 0.0)

    def log_k(p):
        terms = log_table[p] + log_x
        m = terms.max()
        if not np.isfinite(m):
            return -np.inf
        return m + math.log(np.exp(terms - m).sum())

    base = log_k(p0)
    if not np.isfinite(base):
        return np.full(len(grid), np.nan)
    return np.array([math.exp(log_k(p) - base) for p in rows])


@dataclass
class ProfileStats:
    r: int
    n_samples: int
    seed: int
    distribution: str
    grid: tuple
    rho: np.ndarray  # shape (N, len(grid))

    def summary(self) -> list:
        out = []
        for j, a in enumerate(self.grid):
            col = self.rho[:, j]
            col = col[np.isfinite(col)]
            ref = math.exp(-a * a / 2)
            out.append(
                {
                    "a": a,
                    "median_rho": float(np.median(col)),
                    "p10": float(np.percentile(col, 10)),
                    "p90": float(np.percentile(col, 90)),
                    "gauss_ref": ref,
                    "abs_err_median": float(np.median(np.abs(col - ref))),
                }
            )
        return out

    def row_for(self, a: float) -> dict:
        for row in self.summary():
            if row["a"] == a:
                return row
        raise KeyError(a)

    def to_csv(self) -> str:
        buf = io.StringIO()
        cols = ["a", "median_rho", "p10", "p90", "gauss_ref", "abs_err_median"]
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for row in self.summary():
            w.writerow([f"{row[c]:.10g}" for c in cols])
        return buf.getvalue()


def sample_profiles(r: int, N: int, seed: int, distribution: str = "uniform", grid=DEFAULT_GRID) -> ProfileStats:
    """Self-normalized K_{p,1} profiles of random combinations of pure tables.

    Sample i draws x_1..x_r from its own generator seeded with (seed, i),
    so the result does not depend on evaluation order.
    """
    if seed is None:
        raise ValueError("a seed is required")
    if r < 4:
        raise ValueError(f"need r >= 4, got {r}")
    if N < 1:
        raise ValueError(f"need N >= 1, got {N}")
    if distribution not in DISTRIBUTIONS:
        raise ValueError(f"unknown distribution {distribution!r}; choose from {DISTRIBUTIONS}")
    grid = tuple(float(a) for a in grid)
    for a in grid:
        if not 0 <= profile_index(r, a) <= r - 1:
            raise ValueError(f"a={a} puts p outside 0..{r - 1}")
    table = _log_row1(r)
    rho = np.empty((N, len(grid)))
    for s in range(N):
        rng = np.random.default_rng([seed, s])
        rho[s] = profile_ratios(_draw(rng, r, distribution), r, grid, table)
    return ProfileStats(r, N, seed, distribution, grid, rho)
