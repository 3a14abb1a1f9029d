from __future__ import annotations

import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from syzlab.boij_soderberg import (
    NotInPureCone,
    decompose,
    herzog_kuhl_residuals,
    is_staircase,
    profile_index,
    profile_ratios,
    pure_table,
    row1_entry,
    sample_profiles,
    synthesize,
)
from syzlab.koszul import betti_table, hilbert_check
from syzlab.monomials import RingContext
from syzlab.tables import BettiTable

coeffs = st.lists(
    st.fractions(min_value=0, max_value=40, max_denominator=30),
    min_size=1,
    max_size=20,
)


def test_pure_table_examples():
    pt = pure_table(1, 2)
    assert pt.degrees == (1, 3, 4)
    assert pt.betti == (1, 3, 2)
    for r in range(1, 10):
        top = pure_table(r + 1, r)
        assert top.degrees == tuple(range(1, r + 2))
        assert top.betti == tuple(math.comb(r, p) for p in range(r + 1))
    with pytest.raises(ValueError):
        pure_table(-1, 3)
    with pytest.raises(ValueError):
        pure_table(5, 3)


def test_pure_table_at_i_equals_r():
    # the jump sits in the last column: degrees 1..r, then r+2
    pt = pure_table(4, 4)
    assert pt.degrees == (1, 2, 3, 4, 6)
    assert [pt.row(p) for p in range(5)] == [1, 1, 1, 1, 2]


@pytest.mark.parametrize("r", [1, 2, 5, 12])
def test_herzog_kuhl_identities(r):
    for i in range(0, r + 2):
        pt = pure_table(i, r)
        assert all(v == 0 for v in herzog_kuhl_residuals(pt))
        assert all(b > 0 for b in pt.betti)
        assert hilbert_check(pt.to_table()).passed
        for p in range(min(i, r + 1)):
            assert pt.betti[p] == row1_entry(i, r, p)


def test_synthesize_examples():
    r = 6
    for i in range(1, r + 1):
        e = [0] * r
        e[i - 1] = 1
        assert synthesize(e, r) == pure_table(i, r).to_table()
    assert synthesize([0] * r, r).entries == {}
    x = [2] + [0] * (r - 2) + [3]
    want = {}
    for c, pt in ((2, pure_table(1, r)), (3, pure_table(r, r))):
        for cell, v in pt.cells().items():
            want[cell] = want.get(cell, 0) + c * v
    assert synthesize(x, r).entries == {k: v for k, v in want.items() if v}
    with pytest.raises(ValueError):
        synthesize([1, -1], 2)
    assert synthesize([1, 2], 2).method_tag == "synthesized"


@settings(max_examples=80, deadline=None)
@given(coeffs)
def test_round_trip(x):
    r = len(x)
    t = synthesize(x, r)
    assert is_staircase(t, r)
    assert decompose(t, r).vector() == [Fraction(v) for v in x]


def test_round_trip_r12_and_orders():
    rng = random.Random(11)
    for _ in range(100):
        x = [Fraction(rng.randint(0, 30), rng.randint(1, 12)) for _ in range(12)]
        t = synthesize(x, 12)
        want = decompose(t, 12).coefficients
        assert decompose(t, 12, order="row1").coefficients == want
        assert decompose(t, 12, order="shuffled", rng=rng).coefficients == want
        assert decompose(t, 12).vector() == x


def test_decompose_pure_is_unit():
    for i in range(1, 8):
        dec = decompose(pure_table(i, 7).to_table(), 7)
        assert dec.coefficients == {i: 1}


def test_decompose_boundary_tables():
    x = [Fraction(1, 2)] + [0] * 4 + [3]
    dec = decompose(synthesize(x, 4), 4)
    assert dec.vector(with_boundary=True) == x


def test_decompose_engine_table():
    t = betti_table(RingContext(1, 6, -1))
    two_rows = BettiTable({c: v for c, v in t.entries.items() if c[1] in (1, 2)}, p_max=t.p_max)
    dec = decompose(two_rows, t.p_max)
    assert all(v >= 0 for v in dec.coefficients.values())
    assert synthesize(dec.coefficients, dec.r) == two_rows


def test_decompose_rejects_non_module_tables():
    bad = BettiTable({(0, 1): 1, (1, 2): 1}, p_max=2)
    with pytest.raises(NotInPureCone):
        decompose(bad, 2)
    with pytest.raises(NotInPureCone):
        decompose(BettiTable({(0, 0): 1}), 2)


def test_profile_definition():
    r = 40
    x = np.zeros(r)
    x[r // 2 + 5] = 1.0
    rho = profile_ratios(x, r, (0.0, 0.5, 1.0))
    assert rho[0] == 1.0
    for a, v in zip((0.5, 1.0), rho[1:]):
        p, p0 = profile_index(r, a), profile_index(r, 0)
        i = r // 2 + 6
        want = float(row1_entry(i, r, p) / row1_entry(i, r, p0))
        assert v == pytest.approx(want, rel=1e-9)


def test_profile_matches_exact_arithmetic():
    r = 30
    rng = np.random.default_rng(5)
    x = rng.random(r)
    t = synthesize([Fraction(float(v)) for v in x], r)
    grid = (0.0, 1.0, 2.0)
    exact = [t.get(profile_index(r, a), 1) / t.get(profile_index(r, 0), 1) for a in grid]
    assert profile_ratios(x, r, grid) == pytest.approx([float(v) for v in exact], rel=1e-9)


def test_sampling_is_seeded_and_reproducible():
    a = sample_profiles(60, 20, 3, "uniform")
    b = sample_profiles(60, 20, 3, "uniform")
    assert a.to_csv() == b.to_csv()
    assert np.all(a.rho[:, 0] == 1.0)
    c = sample_profiles(60, 20, 4, "uniform")
    assert a.to_csv() != c.to_csv()
    assert a.to_csv().splitlines()[0] == "a,median_rho,p10,p90,gauss_ref,abs_err_median"
    with pytest.raises(ValueError):
        sample_profiles(60, 20, None)
    with pytest.raises(ValueError):
        sample_profiles(3, 20, 1)
    with pytest.raises(ValueError):
        sample_profiles(60, 20, 1, "cauchy")


def test_calibrated_profile_statistics():
    st_ = sample_profiles(400, 500, 12345, "uniform", grid=(0.0, 0.5, 1.0))
    assert st_.row_for(1.0)["abs_err_median"] < 0.1
    assert st_.row_for(0.5)["abs_err_median"] < 0.1


def test_distributions_agree():
    meds = [
        sample_profiles(400, 500, 12345, dist, grid=(0.0, 1.0)).row_for(1.0)["median_rho"]
        for dist in ("uniform", "exponential", "beta")
    ]
    assert max(meds) - min(meds) < 0.05
