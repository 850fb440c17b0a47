"""Backend selection for the hot state-vector kernel.

The compiled extension is preferred when the build produced it; otherwise the
numpy implementation is used. ENTSCALE_KERNEL=numpy|compiled forces the choice
(compiled raises ImportError when the extension is absent). Both backends share
one contract: apply_bond_accumulate(gate, vec, out, left_dim, right_dim)
accumulates a 4x4 gate acting on the middle slot of a contiguous complex128
vector of length left_dim*4*right_dim.
"""
import os

from . import numpy_backend


def _compiled():
    from . import _apply
    return _apply


def available_backends():
    """Importable backends by name; 'compiled' is absent if the build skipped it."""
    found = {"numpy": numpy_backend}
    try:
        found["compiled"] = _compiled()
    except ImportError:
        pass
    return found


_forced = os.environ.get("ENTSCALE_KERNEL")
if _forced == "numpy":
    _backend = numpy_backend
elif _forced == "compiled":
    _backend = _compiled()
elif _forced:
    raise ImportError(f"ENTSCALE_KERNEL={_forced!r}: expected 'numpy' or 'compiled'")
else:
    try:
        _backend = _compiled()
    except ImportError:
        _backend = numpy_backend

backend_name = _backend.name
apply_bond_accumulate = _backend.apply_bond_accumulate
