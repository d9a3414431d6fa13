"""Link-concordance invariants from bifiltered chain complexes over F[U, U^-1]."""

from __future__ import annotations

__version__ = "0.1.0"
