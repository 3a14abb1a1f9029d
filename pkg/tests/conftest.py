from __future__ import annotations

import pytest

from syzlab.monomials import RingContext


@pytest.fixture
def ctx():
    def make(n, b, d):
        return RingContext(n, d, b)

    return make
