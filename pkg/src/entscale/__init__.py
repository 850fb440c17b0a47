"""entscale: entanglement scaling diagnostics for quenched spin chains and
quasi-free fermion symbols.

Submodules are imported lazily by callers; keeping this file free of numpy
imports lets the CLI pin thread counts before any BLAS library loads.
"""

__version__ = "0.1.0"
