"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the pure-Python
versions take over.  Both expose ``lap_log_sequence``, ``ditinerary_codes``
and ``compare_codes`` with identical semantics.
"""
from isentropes import _pykernels

try:
    from isentropes import _ckernels as _impl

    BACKEND = "cython"
except ImportError:  # extension not built
    _impl = _pykernels
    BACKEND = "python"

CONVERGED = _pykernels.CONVERGED
EXHAUSTED = _pykernels.EXHAUSTED
INCONSISTENT = _pykernels.INCONSISTENT
TENT = _pykernels.TENT
LOGISTIC = _pykernels.LOGISTIC

lap_log_sequence = _impl.lap_log_sequence
ditinerary_codes = _impl.ditinerary_codes
compare_codes = _impl.compare_codes


def backends():
    """Available backend modules keyed by name, for tests and benchmarks."""
    found = {"python": _pykernels}
    if BACKEND == "cython":
        found["cython"] = _impl
    return found
