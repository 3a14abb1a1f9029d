"""Closed-form syzygy predictors: ranges, thresholds and curve formulas.

All arithmetic is exact (ints and Fractions) except the Gaussian
normalization, which reports a float.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import comb


class PredictionError(ValueError):
    pass


class Verdict(str, Enum):
    NONZERO = "NONZERO"
    ZERO = "ZERO"
    UNKNOWN = "UNKNOWN"


# citation tags attached to every verdict
EASY_Q0 = "easy-q0"  # K_{p,0} != 0 iff p <= r(B), d >> 0
EASY_TOP = "easy-top"  # K_{p,n+1} range via r(K - B), d >> 0
REGULARITY = "regularity"  # K_{p,q} = 0 for q >= n+2
VERONESE_RANGE = "veronese-nonvanishing"
VERONESE_CONJ = "veronese-conjecture"  # conjectural vanishing outside the range
EXTREMAL = "extremal-weights"  # range is sharp for q = 0 and q = n, d >> 0
GONALITY = "gonality"
CURVE_WINDOW = "curve-window"  # K_{p,1} != 0 between the easy rows
DUALITY = "duality"
SILENT = "none"


@dataclass(frozen=True)
class Cell:
    verdict: Verdict
    citation: str
    conjectural: bool = False
    note: str = ""

    @property
    def label(self) -> str:
        if self.verdict is Verdict.NONZERO:
            return "+"
        if self.verdict is Verdict.ZERO:
            return "0"
        return "0?" if self.conjectural else "?"


@dataclass
class SupportPrediction:
    """Per-(p, q) verdicts with the result that drives each one."""

    cells: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def set(self, p, q, cell: Cell, override: bool = False):
        """Record a verdict; theorem verdicts are never replaced by weaker ones."""
        old = self.cells.get((p, q))
        if old is None or override or _strength(cell) > _strength(old):
            self.cells[(p, q)] = cell

    def verdict(self, p, q) -> Verdict:
        cell = self.cells.get((p, q))
        return cell.verdict if cell else Verdict.UNKNOWN

    def row(self, q) -> dict:
        return {p: c for (p, qq), c in self.cells.items() if qq == q}

    def nonzero(self, q) -> list:
        return sorted(p for (p, qq), c in self.cells.items() if qq == q and c.verdict is Verdict.NONZERO)

    def render(self) -> str:
        ps = [p for p, _ in self.cells] or [0]
        qs = [q for _, q in self.cells] or [0]
        width = max(3, max(len(str(p)) for p in ps))
        lines = []
        header = "  | " + " ".join(str(p).rjust(width) for p in range(0, max(ps) + 1))
        lines.append(header)
        lines.append("-" * len(header))
        for q in range(min(0, min(qs)), max(qs) + 1):
            row = []
            for p in range(0, max(ps) + 1):
                cell = self.cells.get((p, q))
                row.append((cell.label if cell else ".").rjust(width))
            lines.append(f"{q} | " + " ".join(row))
        lines.append("")
        lines.append("legend: + nonzero, 0 zero, 0? conjecturally zero, ? unknown")
        cites = {}
        for (p, q), c in sorted(self.cells.items(), key=lambda kv: (kv[0][1], kv[0][0])):
            cites.setdefault((q, c.citation, c.verdict.value, c.conjectural), []).append(p)
        for (q, cit, verdict, conj), ps_ in cites.items():
            tag = f"{verdict}{' (conjectural)' if conj else ''}"
            lines.append(f"q={q} p={_ranges(ps_)}: {tag} [{cit}]")
        lines.extend(self.notes)
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "cells": [
                {
                    "p": p,
                    "q": q,
                    "verdict": c.verdict.value,
                    "citation": c.citation,
                    "conjectural": c.conjectural,
                }
                for (p, q), c in sorted(self.cells.items(), key=lambda kv: (kv[0][1], kv[0][0]))
            ],
            "notes": list(self.notes),
        }


def _strength(c: Cell) -> int:
    if c.verdict is Verdict.UNKNOWN:
        return 1 if c.conjectural else 0
    return 3 if not c.conjectural else 2


def _ranges(ps) -> str:
    ps = sorted(ps)
    out, start, prev = [], ps[0], ps[0]
    for p in ps[1:]:
        if p == prev + 1:
            prev = p
            continue
        out.append(f"{start}" if start == prev else f"{start}..{prev}")
        start = prev = p
    out.append(f"{start}" if start == prev else f"{start}..{prev}")
    return ",".join(out)


def easy_support(n: int, r_B: int, r_KminusB: int, r_d: int, p_max: int | None = None) -> SupportPrediction:
    """Rows q = 0 and q = n+1 (and vanishing for q = n+2) for d >> 0.

    ``r(.)`` is h^0 - 1, so -1 stands for a bundle without sections.
    Columns run over 0..p_max (default r_d).
    """
    top = r_d if p_max is None else p_max
    pred = SupportPrediction()
    for p in range(0, top + 1):
        v0 = Verdict.NONZERO if p <= r_B else Verdict.ZERO
        pred.set(p, 0, Cell(v0, EASY_Q0))
        lo, hi = r_d - n - r_KminusB, r_d - n
        vt = Verdict.NONZERO if lo <= p <= hi else Verdict.ZERO
        pred.set(p, n + 1, Cell(vt, EASY_TOP))
        pred.set(p, n + 2, Cell(Verdict.ZERO, REGULARITY))
    return pred


def _h0_pn(n: int, m: int) -> int:
    return comb(m + n, n) if m >= 0 else 0


def veronese_range(n: int, b: int, d: int, q: int) -> tuple[int, int]:
    """p-range on which K_{p,q}(n, b; d) is known to be nonzero."""
    if not 0 <= q <= n:
        raise PredictionError(f"need 0 <= q <= n, got q={q}")
    if b < 0:
        raise PredictionError(f"need b >= 0, got b={b}")
    if d < b + q + 1:
        raise PredictionError(f"need d >= b + q + 1, got d={d}")
    lo = comb(q + d, q) - comb(d - b - 1, q) - q
    hi = comb(n + d, n) - comb(d + n - q, n - q) + comb(n + b, q + b) - q - 1
    return lo, hi


def cm_range(degX: int, n: int, c: int, b: int, d: int, q: int, r_d: int) -> tuple[int, int]:
    """Non-vanishing range for a projectively Cohen-Macaulay X.

    ``r_d`` is h^0(O_X(d)) and ``c`` the regularity of O_X.
    """
    if not 1 <= q <= n - 1:
        raise PredictionError(f"need 1 <= q <= n-1, got q={q}, n={n}")
    if d < b + q + c + 1:
        raise PredictionError(f"need d >= b + q + c + 1, got d={d}")
    r_prime = r_d - degX * (n + 1)
    lo = degX * (q + b + 1) * comb(d + q - 1, q - 1)
    hi = r_prime - degX * (d - q - b) * comb(d + n - q - 1, n - q - 1)
    return lo, hi


class NpStatus(str, Enum):
    HOLDS = "holds"
    FAILS = "fails"
    UNKNOWN = "unknown"


def np_thresholds(family: str, params: dict, k: int) -> NpStatus:
    """Property (N_k) from the known linear thresholds.

    families: ``curve`` (g, d), ``veronese`` (n, d), ``adjoint`` (n, d) for
    K_X + dB + P with B very ample and P nef, ``abelian`` (n, d) for d*Theta.
    """
    d = params["d"]
    if family == "curve":
        return NpStatus.HOLDS if d >= 2 * params["g"] + 1 + k else NpStatus.UNKNOWN
    if family == "veronese":
        if d >= 3 and k >= 3 * d - 2:
            return NpStatus.FAILS
        if d >= k:
            return NpStatus.HOLDS
        if params["n"] == 2:
            # settled on the plane: (N_k) holds exactly for k < 3d - 2 when
            # d >= 3, and the quadratic Veronese surface has a linear resolution
            return NpStatus.HOLDS
        return NpStatus.UNKNOWN
    if family == "adjoint":
        return NpStatus.HOLDS if d >= params["n"] + 1 + k else NpStatus.UNKNOWN
    if family == "abelian":
        return NpStatus.HOLDS if d >= k + 3 else NpStatus.UNKNOWN
    raise PredictionError(f"unknown family {family!r}")


def curve_kp1(g: int, d: int, p: int) -> int:
    """k_{p,1} of a degree-d embedding of a genus-g curve, 1 <= p <= d - 2g."""
    if d < 2 * g + 1:
        raise PredictionError(f"need d >= 2g + 1, got d={d}, g={g}")
    if not 1 <= p <= d - 2 * g:
        raise PredictionError(f"need 1 <= p <= d - 2g = {d - 2 * g}, got p={p}")
    r = d - g
    value = comb(r, p) * (Fraction(-p * d, r) + (r + 1) - Fraction(d + 1 - g, p + 1))
    if value.denominator != 1:
        raise ArithmeticError(f"non-integral k_{{p,1}} for g={g}, d={d}, p={p}: {value}")
    return int(value)


def gaussian_index(r: int, a: float) -> int:
    """round(r/2 + a*sqrt(r)/2), halves rounded up."""
    return math.floor(r / 2 + a * math.sqrt(r) / 2 + 0.5)


def curve_gaussian_normalized(g: int, d: int, a: float) -> float:
    """2^{-r} sqrt(2 pi / r) k_{p,1} at p = round(r/2 + a sqrt(r)/2).

    Tends to exp(-a^2/2) as d grows.
    """
    r = d - g
    p = gaussian_index(r, a)
    if not 1 <= p <= d - 2 * g:
        raise PredictionError(f"p={p} outside 1..{d - 2 * g}")
    k = curve_kp1(g, d, p)
    return float(Fraction(k, 2**r)) * math.sqrt(2 * math.pi / r)


def _max_gonality(g: int) -> int:
    return (g + 3) // 2


def curve_support(g: int, gon: int, d: int, b_mode: str = "O") -> SupportPrediction:
    """Support of the Betti table of a curve of genus g and gonality gon.

    ``b_mode`` is ``"O"`` (the curve itself) or ``"K"`` (twist by K_C).
    The K_{p,1} row is certified when d >= 4g - 3; below that only the
    window forced by the easy rows is claimed.
    """
    if g < 0:
        raise PredictionError("genus must be >= 0")
    if g == 0 and gon != 1:
        raise PredictionError("rational curves have gonality 1")
    if g >= 1 and not 2 <= gon <= _max_gonality(g):
        raise PredictionError(f"gonality {gon} impossible for genus {g}")
    if d < 2 * g + 1:
        raise PredictionError(f"need d >= 2g + 1, got {d}")
    if b_mode not in ("O", "K"):
        raise PredictionError(f"b_mode must be 'O' or 'K', got {b_mode!r}")
    if b_mode == "K" and g == 0:
        raise PredictionError("K_C has no sections on a rational curve")
    r_d = d - g
    r_K = g - 1
    if b_mode == "O":
        r_B, r_KB = 0, r_K
    else:
        r_B, r_KB = r_K, 0
    pred = easy_support(1, r_B, r_KB, r_d, p_max=r_d)
    certified = d >= 4 * g - 3
    for p in range(0, r_d + 1):
        if b_mode == "O":
            nonzero = 1 <= p <= r_d - gon
        else:
            nonzero = gon - 1 <= p <= r_d - 2
        if certified:
            pred.set(p, 1, Cell(Verdict.NONZERO if nonzero else Verdict.ZERO, GONALITY), override=True)
        elif r_B + 1 <= p <= r_d - 2 - r_KB:
            pred.set(p, 1, Cell(Verdict.NONZERO, CURVE_WINDOW), override=True)
        else:
            pred.set(p, 1, Cell(Verdict.UNKNOWN, SILENT), override=True)
    if not certified:
        pred.notes.append(f"d={d} < 4g-3={4 * g - 3}: the K_(p,1) row is not certified")
    pred.notes.append("rows q=0 and q=2 assume d >> 0")
    return pred


def hyperelliptic_k11_nonzero(gon: int) -> bool:
    """K_{1,1}(C, K_C; L_d) != 0 exactly for hyperelliptic curves."""
    return gon == 2


def curve_duality_pair(g: int, b: int, d: int, p: int) -> tuple[int, int]:
    """(p', b') with k_{p,1}(C, B) = k_{p',1}(C, K - B); deg B = b."""
    r_d = d - g
    return r_d - 1 - p, 2 * g - 2 - b


@dataclass(frozen=True)
class Window:
    lo: float
    hi: float

    @property
    def empty(self) -> bool:
        return self.lo > self.hi

    def __iter__(self):
        return iter((self.lo, self.hi))


def asymptotic_window(n: int, q: int, r_d: int, d: int, C1, C2) -> Window:
    """[C1 d^{q-1}, r_d - C2 d^{n-1}] for user-supplied constants."""
    return Window(C1 * d ** (q - 1), r_d - C2 * d ** (n - 1))


def veronese_support(n: int, b: int, d: int) -> SupportPrediction:
    """Combined prediction for the Veronese table of (n, b, d).

    Theorem verdicts beat conjectural ones.  Rows 0 and n+1 use the easy
    description, trusted from d >= b + n + 2 on; rows 1..n use the
    non-vanishing range, sharp for q = 0 and q = n, conjecturally sharp in
    between.
    """
    r_d = comb(n + d, n) - 1
    p_max = r_d - n
    pred = SupportPrediction()
    large = d >= b + n + 2
    r_B = _h0_pn(n, b) - 1
    r_KB = _h0_pn(n, -n - 1 - b) - 1
    if large:
        easy = easy_support(n, r_B, r_KB, r_d, p_max=p_max)
        for key, cell in easy.cells.items():
            if key[1] <= n + 1:
                pred.set(*key, cell)
    else:
        pred.notes.append(f"d={d} < b+n+2={b + n + 2}: easy rows not asserted")
    for p in range(0, p_max + 1):
        pred.set(p, n + 1, Cell(Verdict.ZERO, REGULARITY)) if b >= 0 else None
    for q in range(0, n + 1):
        if b < 0 or d < b + q + 1:
            continue
        lo, hi = veronese_range(n, b, d, q)
        for p in range(0, p_max + 1):
            if lo <= p <= hi:
                pred.set(p, q, Cell(Verdict.NONZERO, VERONESE_RANGE))
            elif q in (0, n) and large:
                pred.set(p, q, Cell(Verdict.ZERO, EXTREMAL))
            else:
                pred.set(p, q, Cell(Verdict.UNKNOWN, VERONESE_CONJ, conjectural=True))
    return pred


@dataclass
class WatchReport:
    """Comparison of an engine table with the Veronese prediction."""

    confirmed: list = field(default_factory=list)  # predicted nonzero, engine nonzero
    violations: list = field(default_factory=list)  # theorem verdict contradicted
    counterexample_candidates: list = field(default_factory=list)  # nonzero where conjecture says 0

    @property
    def clean(self) -> bool:
        return not self.violations and not self.counterexample_candidates

    def render(self) -> str:
        lines = [f"confirmed nonzero cells: {len(self.confirmed)}"]
        for p, q, v, cite in self.violations:
            lines.append(f"THEOREM VIOLATION at (p={p}, q={q}): engine {v} contradicts [{cite}]")
        for p, q, v in self.counterexample_candidates:
            lines.append(
                f"!!! COUNTEREXAMPLE CANDIDATE at (p={p}, q={q}): engine value {v} "
                f"outside the conjectured range [{VERONESE_CONJ}]"
            )
        if self.clean:
            lines.append("no violations, no counterexample candidates")
        return "\n".join(lines)


def conjecture_watch(table, pred: SupportPrediction | None = None) -> WatchReport:
    """Flag every engine cell that disagrees with the Veronese prediction.

    Nonzero values where only the conjecture predicts zero are reported as
    counterexample candidates; never silently accepted.
    """
    if pred is None:
        pred = veronese_support(table.n, table.b, table.d)
    rep = WatchReport()
    cells = set(pred.cells) | set(table.entries)
    for p, q in sorted(cells, key=lambda c: (c[1], c[0])):
        if (p, q) in table.missing:
            continue
        v = table.get(p, q)
        cell = pred.cells.get((p, q))
        if cell is None:
            continue
        if cell.verdict is Verdict.NONZERO:
            if v:
                rep.confirmed.append((p, q))
            else:
                rep.violations.append((p, q, v, cell.citation))
        elif cell.verdict is Verdict.ZERO and v:
            rep.violations.append((p, q, v, cell.citation))
        elif cell.conjectural and v:
            rep.counterexample_candidates.append((p, q, v))
    return rep
