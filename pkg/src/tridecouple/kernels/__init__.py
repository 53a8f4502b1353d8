"""Float64 hot loops with a numba path and a pure-numpy fallback.

The jitted implementations are used when numba imports cleanly and the
environment variable ``TRIDECOUPLE_DISABLE_NUMBA`` is unset or ``0``.
Both backends stay importable so they can be compared directly
(see ``benchmarks/bench_kernels.py``).
"""
import os

from . import _np as numpy_backend

try:
    from . import _nb as numba_backend
except ImportError:  # numba missing or broken
    numba_backend = None

_disabled = os.environ.get("TRIDECOUPLE_DISABLE_NUMBA", "0") not in ("", "0")

if numba_backend is not None and not _disabled:
    backend = numba_backend
    BACKEND = "numba"
else:
    backend = numpy_backend
    BACKEND = "numpy"

act_dense = backend.act_dense
act_batch = backend.act_batch
givens_batch = backend.givens_batch
pattern_residuals = backend.pattern_residuals
rep_matrices = backend.rep_matrices
charpoly_reciprocal = backend.charpoly_reciprocal
molien_average = backend.molien_average
plane_pairs = numpy_backend.plane_pairs

__all__ = [
    "BACKEND",
    "act_batch",
    "act_dense",
    "charpoly_reciprocal",
    "givens_batch",
    "molien_average",
    "numba_backend",
    "numpy_backend",
    "pattern_residuals",
    "plane_pairs",
    "rep_matrices",
]
