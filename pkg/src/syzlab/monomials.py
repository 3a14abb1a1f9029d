"""Bounded-exponent monomials and the truncated ring S/(z_0^d, ..., z_n^d)."""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from math import comb


class Monomial(tuple):
    """Exponent vector of a monomial in ``z_0, ..., z_n``.

    A plain tuple subclass so it hashes and compares like the exponent
    vector itself.  The all-zero vector is the unit monomial; the zero
    element of the ring is never a Monomial (see :func:`mul_reduced`).
    """

    __slots__ = ()

    def __new__(cls, exponents):
        exps = tuple(int(e) for e in exponents)
        if any(e < 0 for e in exps):
            raise ValueError(f"negative exponent in {exps}")
        return super().__new__(cls, exps)

    @property
    def degree(self) -> int:
        return sum(self)

    def is_reduced(self, d: int) -> bool:
        return all(e <= d - 1 for e in self)

    def divides(self, other) -> bool:
        return all(a <= b for a, b in zip(self, other))

    def __str__(self) -> str:
        return format_monomial(self)

    def __repr__(self) -> str:
        return f"Monomial({tuple(self)})"


_FACTOR = re.compile(r"^x(\d+)(?:\^(\d+))?$")


def format_monomial(m) -> str:
    """Text form ``x0^a0*x1^a1*...``; zero exponents omitted, ``1`` for the unit."""
    parts = []
    for i, e in enumerate(m):
        if e == 1:
            parts.append(f"x{i}")
        elif e > 1:
            parts.append(f"x{i}^{e}")
    return "*".join(parts) if parts else "1"


def parse_monomial(text: str, n: int) -> Monomial:
    """Parse the text form produced by :func:`format_monomial` (n+1 variables)."""
    exps = [0] * (n + 1)
    text = text.strip().replace(" ", "")
    if text in ("", "1"):
        return Monomial(exps)
    for factor in text.split("*"):
        match = _FACTOR.match(factor)
        if match is None:
            raise ValueError(f"cannot parse monomial factor {factor!r}")
        var = int(match.group(1))
        if var > n:
            raise ValueError(f"variable x{var} outside x0..x{n}")
        exps[var] += int(match.group(2) or 1)
    return Monomial(exps)


@dataclass(frozen=True)
class RingContext:
    """Parameters (n, b, d): P^n, twist O(b), embedding by O(d).

    ``d`` doubles as the truncation exponent of the Artinian reduction.
    """

    n: int
    d: int
    b: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.d < 2:
            raise ValueError(f"d must be >= 2, got {self.d}")

    @property
    def nvars(self) -> int:
        return self.n + 1

    @property
    def top_degree(self) -> int:
        return (self.n + 1) * (self.d - 1)

    def twisted(self, b: int) -> RingContext:
        return RingContext(self.n, self.d, b)


def mul_reduced(m1, m2, ctx: RingContext) -> Monomial | None:
    """Product in the truncated ring; ``None`` when some exponent reaches d."""
    d = ctx.d
    out = []
    for a, b in zip(m1, m2):
        s = a + b
        if s >= d:
            return None
        out.append(s)
    return Monomial(out)


@lru_cache(maxsize=None)
def _basis(nvars: int, cap: int, e: int) -> tuple[Monomial, ...]:
    # lexicographic on exponent vectors; recursion fixes z_0 first
    if e < 0:
        return ()
    if nvars == 1:
        return (Monomial((e,)),) if e <= cap else ()
    out = []
    for first in range(min(cap, e) + 1):
        for rest in _basis(nvars - 1, cap, e - first):
            out.append(Monomial((first,) + tuple(rest)))
    return tuple(out)


def reduced_basis(ctx: RingContext, e: int) -> list[Monomial]:
    """Degree-e monomials with every exponent <= d-1, in lexicographic order."""
    return list(_basis(ctx.nvars, ctx.d - 1, e))


def reduced_dim(ctx: RingContext, e: int) -> int:
    """dim of the degree-e piece of the truncated ring, by inclusion-exclusion."""
    if e < 0:
        return 0
    n, d = ctx.n, ctx.d
    total = 0
    j = 0
    while j <= n + 1 and e - j * d >= 0:
        total += (-1) ** j * comb(n + 1, j) * comb(e - j * d + n, n)
        j += 1
    return total


@lru_cache(maxsize=None)
def basis_index(nvars: int, cap: int, e: int) -> dict:
    return {m: i for i, m in enumerate(_basis(nvars, cap, e))}


def divisors_reduced(target, e: int, ctx: RingContext) -> list[Monomial]:
    """Reduced degree-e monomials dividing ``target``."""
    return [m for m in reduced_basis(ctx, e) if all(a <= t for a, t in zip(m, target))]


def annihilators_reduced(target, e: int, ctx: RingContext) -> list[Monomial]:
    """Reduced degree-e monomials m with m * target = 0 in the truncated ring."""
    d = ctx.d
    return [m for m in reduced_basis(ctx, e) if any(a + t >= d for a, t in zip(m, target))]
