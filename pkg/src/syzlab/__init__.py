"""Exact Koszul cohomology of Veronese embeddings.

The package computes the groups K_{p,q}(n, b; d) of
``O_{P^n}(b)`` with respect to ``O_{P^n}(d)`` through the Artinian
reduction ``S/(z_0^d, ..., z_n^d)``, builds explicit monomial cocycles that
certify non-vanishing, evaluates closed-form syzygy predictors and provides
two-row Boij-Soderberg tools.
"""

ENGINE_VERSION = "1"

from syzlab.monomials import Monomial, RingContext  # noqa: E402
from syzlab.linalg import FieldChoice, SparseMatrix  # noqa: E402

__all__ = ["ENGINE_VERSION", "FieldChoice", "Monomial", "RingContext", "SparseMatrix"]
