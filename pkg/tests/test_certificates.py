from __future__ import annotations

import pytest

from syzlab.certificates import (
    Certificate,
    CertificateError,
    build_certificate,
    certified_range,
    certify,
    default_target,
    family_lower_bound,
    linear_algebra_check,
    verify_certificate,
)
from syzlab.koszul import kpq_dim
from syzlab.linalg import QQ
from syzlab.monomials import (
    Monomial,
    RingContext,
    annihilators_reduced,
    divisors_reduced,
    mul_reduced,
    reduced_basis,
)
from syzlab.predictors import veronese_range


def test_default_target_examples():
    assert default_target(2, 0, 3, 2) == Monomial((2, 2, 2))
    for d in range(3, 7):
        t = default_target(2, 0, d, 2)
        assert sorted(t) == sorted((d - 1, d - 1, 2))
    assert default_target(3, 0, 5, 0) == Monomial((0, 0, 0, 0))
    with pytest.raises(CertificateError):
        default_target(2, 1, 3, 2)
    with pytest.raises(CertificateError):
        default_target(2, 0, 3, 3)


def test_build_examples():
    ctx = RingContext(2, 3)
    cert = build_certificate(Monomial((2, 2, 2)), 0, ctx, 2)
    assert cert.p == 7
    cert = certify(2, 0, 4, 2)
    assert cert.p == 10 and cert.valid
    with pytest.raises(CertificateError):
        build_certificate(Monomial((2, 2, 2)), 1, ctx, 2)


def test_plane_cubic_certificate_is_confirmed():
    cert = certify(2, 0, 3, 2, cross_check=True)
    assert cert.is_cycle and cert.is_combinatorially_nonbounding
    la = cert.linear_algebra
    assert la["ran"] and la["closed"] and not la["in_image"]
    assert la["block_dims"] == [0, 1, 0]
    assert kpq_dim(RingContext(2, 3), 7, 2) >= 1


def test_removing_a_divisor_breaks_nonbounding():
    cert = certify(2, 0, 4, 2)
    broken = Certificate(cert.ctx, cert.q, cert.target, cert.wedge[1:])
    verify_certificate(broken)
    assert broken.is_cycle
    assert not broken.is_combinatorially_nonbounding
    assert not broken.valid


def test_non_annihilator_is_not_a_cycle():
    ctx = RingContext(2, 4)
    t = default_target(2, 0, 4, 1)
    cert = build_certificate(t, 0, ctx, 1)
    # a degree-d monomial that does not kill the target
    free = next(m for m in reduced_basis(ctx, 4) if mul_reduced(m, t, ctx) is not None)
    bad = Certificate(ctx, 1, t, list(cert.wedge) + [free])
    verify_certificate(bad)
    assert not bad.is_cycle and not bad.valid


def test_cross_check_with_extra_annihilators():
    cert = certify(3, 1, 4, 1, extra=2, cross_check=True)
    la = cert.linear_algebra
    assert cert.valid
    assert la["ran"] and la["closed"] and not la["in_image"]
    assert la["block_dims"][1] > 1


def test_cross_check_refuses_large_blocks():
    cert = certify(3, 1, 4, 1, extra=2)
    la = linear_algebra_check(cert, QQ, limit=10)
    assert not la["ran"]
    assert "elements" in la["reason"]
    assert cert.valid


def test_json_round_trip():
    cert = certify(2, 1, 5, 1, extra=3)
    back = Certificate.from_json(cert.to_json())
    assert back.wedge == cert.wedge and back.target == cert.target and back.p == cert.p
    verify_certificate(back)
    assert back.valid
    data = cert.to_dict()
    assert {"n", "b", "d", "q", "p", "target", "wedge", "is_cycle", "is_combinatorially_nonbounding"} <= set(data)


def test_family_lower_bound():
    ctx = RingContext(2, 3)
    t = Monomial((2, 2, 2))
    assert family_lower_bound(t, 7, ctx, 2) == 1
    assert family_lower_bound(t, 8, ctx, 2) == 0
    ctx4 = RingContext(2, 4)
    t4 = default_target(2, 0, 4, 2)
    assert family_lower_bound(t4, 10, ctx4, 2) == 1
    assert kpq_dim(ctx4, 10, 2) >= 1


@pytest.mark.parametrize("nbd", [(2, 0, 3), (2, 0, 4), (1, 0, 4), (2, 1, 4), (3, 0, 2)])
def test_engine_respects_family_lower_bound(nbd):
    n, b, d = nbd
    ctx = RingContext(n, d, b)
    for q in range(0, n + 1):
        if d < b + q + 1:
            continue
        t = default_target(n, b, d, q)
        lo, hi = certified_range(n, b, d, q)
        for p in range(lo, hi + 1):
            bound = family_lower_bound(t, p, ctx, q)
            if bound and bound < 10**6:
                assert kpq_dim(ctx, p, q) >= bound, (q, p)


def test_endpoint_counts_match_range():
    for n in range(1, 5):
        for q in range(0, n + 1):
            for b in range(0, 4):
                for d in range(b + q + 1, 9):
                    if d < 2:
                        continue
                    assert certified_range(n, b, d, q) == veronese_range(n, b, d, q)


def test_divisors_annihilate_default_targets():
    for n in range(1, 4):
        for q in range(0, n + 1):
            for b in range(0, 3):
                for d in range(max(2, b + q + 1), 7):
                    ctx = RingContext(n, d, b)
                    t = default_target(n, b, d, q)
                    assert set(divisors_reduced(t, d, ctx)) <= set(annihilators_reduced(t, d, ctx))


def test_verification_ignores_the_field():
    a = certify(2, 0, 4, 2)
    b = verify_certificate(Certificate(a.ctx, a.q, a.target, list(a.wedge)), f=QQ)
    assert (a.is_cycle, a.is_combinatorially_nonbounding) == (b.is_cycle, b.is_combinatorially_nonbounding)
