"""Kernel backend selection for the constellation search.

Two interchangeable implementations of eval_block exist: a Cython
extension and a NumPy fallback.  They evaluate the identical operation
sequence and return bit-identical arrays; the compiled one is simply
faster and releases the GIL.  Import failure of the extension (missing
compiler at build time) silently selects the fallback.
"""

from __future__ import annotations

from . import search_numpy

try:
    from . import _search_cy
except ImportError:
    _search_cy = None

BACKENDS = ("compiled", "numpy") if _search_cy is not None else ("numpy",)


def default_backend() -> str:
    return BACKENDS[0]


def get_eval_block(backend: str | None = None):
    """Resolve a backend name ('auto', 'compiled', 'numpy', or None) to a kernel."""
    name = backend if backend not in (None, "auto") else default_backend()
    if name == "numpy":
        return search_numpy.eval_block
    if name == "compiled":
        if _search_cy is None:
            raise ValueError("compiled backend requested but the extension is not built")
        return _search_cy.eval_block
    raise ValueError(f"unknown backend {backend!r}; expected auto, compiled, or numpy")
