from __future__ import annotations

from fractions import Fraction

import pytest

from syzlab.tables import BettiTable


def sample():
    return BettiTable({(0, 0): 2, (1, 0): 3, (2, 1): 1}, n=1, b=1, d=3, p_max=2, q_max=2)


def test_render_uses_dashes():
    assert sample().render().splitlines() == ["  | 0 1 2", "---------", "0 | 2 3 -", "1 | - - 1"]


def test_render_marks_missing_cells():
    t = BettiTable({(0, 0): 1}, missing={(1, 1)})
    assert "?" in t.render()
    assert not t.complete


def test_csv_round_trip():
    t = sample()
    text = t.to_csv()
    assert text.splitlines()[0] == "p,q,value,field,method"
    assert BettiTable.from_csv(text) == t
    frac = BettiTable({(0, 1): Fraction(3, 2)}, field_tag="Q", method_tag="synthesized")
    back = BettiTable.from_csv(frac.to_csv())
    assert back.get(0, 1) == Fraction(3, 2) and back.method_tag == "synthesized"


def test_json_round_trip_is_stable():
    t = sample()
    text = t.to_json()
    back = BettiTable.from_json(text)
    assert back == t and back.to_json() == text


def test_validation():
    with pytest.raises(ValueError):
        BettiTable({(0, 0): -1})
    with pytest.raises(ValueError):
        BettiTable({}, method_tag="guess")
    assert BettiTable({(0, 0): 0}).entries == {}
