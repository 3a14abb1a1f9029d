"""Explicit monomial cocycles certifying K_{p,q}(n, b; d) != 0.

A certificate is a wedge of reduced degree-d monomials tensored with a
target monomial T of degree qd+b.  If every wedge member kills T the
element is a cycle.  If moreover the wedge contains every reduced degree-d
divisor of T, no basis element of the previous term can hit it: a term
n_0 ^ ... (x) g mapping onto it needs n_0 g = T, so n_0 is a divisor of T
already present in the wedge and the term vanishes.  That argument is
field-independent, so the combinatorial verdict is authoritative; the
optional linear-algebra check only confirms it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import comb

from syzlab.linalg import QQ, FieldChoice, in_image
from syzlab.monomials import (
    Monomial,
    RingContext,
    annihilators_reduced,
    divisors_reduced,
    format_monomial,
    mul_reduced,
    parse_monomial,
)

CROSS_CHECK_LIMIT = 5000


class CertificateError(ValueError):
    pass


def default_target(n: int, b: int, d: int, q: int) -> Monomial:
    """z_1^{d-1} ... z_q^{d-1} * z_0^{b+q}."""
    if not 0 <= q <= n:
        raise CertificateError(f"need 0 <= q <= n, got q={q}, n={n}")
    if b < 0:
        raise CertificateError(f"need b >= 0, got {b}")
    if d < b + q + 1:
        raise CertificateError(f"need d >= b + q + 1, got d={d}, b={b}, q={q}")
    exps = [0] * (n + 1)
    exps[0] = b + q
    for i in range(1, q + 1):
        exps[i] = d - 1
    return Monomial(exps)


@dataclass
class Certificate:
    ctx: RingContext
    q: int
    target: Monomial
    wedge: list
    is_cycle: bool | None = None
    is_combinatorially_nonbounding: bool | None = None
    linear_algebra: dict | None = field(default=None)

    @property
    def p(self) -> int:
        return len(self.wedge)

    @property
    def valid(self) -> bool:
        return bool(self.is_cycle and self.is_combinatorially_nonbounding)

    def to_dict(self) -> dict:
        return {
            "n": self.ctx.n,
            "b": self.ctx.b,
            "d": self.ctx.d,
            "q": self.q,
            "p": self.p,
            "target": format_monomial(self.target),
            "wedge": [format_monomial(m) for m in self.wedge],
            "is_cycle": self.is_cycle,
            "is_combinatorially_nonbounding": self.is_combinatorially_nonbounding,
            "linear_algebra": self.linear_algebra,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> Certificate:
        ctx = RingContext(data["n"], data["d"], data["b"])
        cert = cls(
            ctx,
            data["q"],
            parse_monomial(data["target"], ctx.n),
            [parse_monomial(m, ctx.n) for m in data["wedge"]],
        )
        if cert.p != data.get("p", cert.p):
            raise CertificateError("p does not match the wedge length")
        return cert

    @classmethod
    def from_json(cls, text: str) -> Certificate:
        return cls.from_dict(json.loads(text))


def build_certificate(target, extra: int, ctx: RingContext, q: int) -> Certificate:
    """Wedge = all reduced degree-d divisors of ``target`` plus ``extra``
    further annihilators, taken in basis order."""
    if extra < 0:
        raise CertificateError("extra must be >= 0")
    target = Monomial(target)
    if target.degree != q * ctx.d + ctx.b:
        raise CertificateError(
            f"target degree {target.degree} != q*d + b = {q * ctx.d + ctx.b}"
        )
    if not target.is_reduced(ctx.d):
        raise CertificateError(f"target {target} is not reduced for d={ctx.d}")
    divs = divisors_reduced(target, ctx.d, ctx)
    div_set = set(divs)
    others = [m for m in annihilators_reduced(target, ctx.d, ctx) if m not in div_set]
    if extra > len(others):
        raise CertificateError(
            f"not enough annihilators: {extra} requested, {len(others)} available"
        )
    return Certificate(ctx, q, target, divs + others[:extra])


def _cocycle_key(cert: Certificate):
    """(sorted wedge indices, target index) in the engine's basis numbering."""
    from syzlab.monomials import basis_index

    ctx = cert.ctx
    gens = basis_index(ctx.n + 1, ctx.d - 1, ctx.d)
    idx = sorted(gens[tuple(m)] for m in cert.wedge)
    t_index = basis_index(ctx.n + 1, ctx.d - 1, cert.q * ctx.d + ctx.b)[tuple(cert.target)]
    sign = 1
    # sign of the sorting permutation
    raw = [gens[tuple(m)] for m in cert.wedge]
    for i in range(len(raw)):
        for j in range(i + 1, len(raw)):
            if raw[i] > raw[j]:
                sign = -sign
    return tuple(idx), t_index, sign


def linear_algebra_check(cert: Certificate, f: FieldChoice = QQ, limit: int = CROSS_CHECK_LIMIT) -> dict:
    """Confirm by exact linear algebra that the cocycle is closed and not a boundary.

    Only the Z^{n+1}-weight block of the cocycle is built.
    """
    from syzlab.koszul import BudgetExceeded, strand_block

    ctx = cert.ctx
    weight = [sum(col) for col in zip(*(list(cert.wedge) + [cert.target]))]
    try:
        strand = strand_block(ctx, cert.p, cert.q, weight, limit)
    except BudgetExceeded as exc:
        return {"ran": False, "reason": str(exc)}
    left, mid, right = strand.dims
    wedge, t_index, sign = _cocycle_key(cert)
    row = strand.middle_index()[(wedge, t_index)]
    vec = {row: sign}
    image = strand.d_out.apply([vec.get(i, 0) for i in range(mid)])
    closed = all(f.coerce(x) == 0 for x in image)
    boundary, _ = in_image(strand.d_in, vec, f)
    return {
        "ran": True,
        "field": f.tag,
        "block_dims": [left, mid, right],
        "closed": closed,
        "in_image": boundary,
    }


def verify_certificate(cert: Certificate, cross_check: bool = False, f: FieldChoice | None = None) -> Certificate:
    """Set the two combinatorial flags; optionally attach a linear-algebra check.

    The combinatorial checks never look at a field.
    """
    ctx = cert.ctx
    wedge = [Monomial(m) for m in cert.wedge]
    well_formed = (
        len(set(wedge)) == len(wedge)
        and all(m.degree == ctx.d and m.is_reduced(ctx.d) for m in wedge)
        and cert.target.degree == cert.q * ctx.d + ctx.b
        and cert.target.is_reduced(ctx.d)
    )
    kills = all(mul_reduced(m, cert.target, ctx) is None for m in wedge)
    divs = set(divisors_reduced(cert.target, ctx.d, ctx))
    cert.is_cycle = well_formed and kills
    cert.is_combinatorially_nonbounding = well_formed and kills and divs <= set(wedge)
    if cross_check:
        field_ = f
        if field_ is None:
            field_ = QQ
        cert.linear_algebra = linear_algebra_check(cert, field_)
    return cert


def family_lower_bound(target, p: int, ctx: RingContext, q: int) -> int:
    """C(A - D, p - D): independent classes from choosing the extra annihilators."""
    D = len(divisors_reduced(target, ctx.d, ctx))
    A = len(annihilators_reduced(target, ctx.d, ctx))
    if p < D or p > A:
        return 0
    return comb(A - D, p - D)


def certified_range(n: int, b: int, d: int, q: int) -> tuple[int, int]:
    """(|divisors|, |annihilators|) of the default target: the p's it certifies."""
    ctx = RingContext(n, d, b)
    t = default_target(n, b, d, q)
    return len(divisors_reduced(t, d, ctx)), len(annihilators_reduced(t, d, ctx))


def certify(n: int, b: int, d: int, q: int, extra: int = 0, cross_check: bool = False) -> Certificate:
    ctx = RingContext(n, d, b)
    cert = build_certificate(default_target(n, b, d, q), extra, ctx, q)
    return verify_certificate(cert, cross_check=cross_check)

