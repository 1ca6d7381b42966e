"""Hybrid benchmarking of classical simplex iterations against quantum
gate-count lower bounds.

The toolkit runs an instrumented revised primal simplex solver on linear
programs, logs per-iteration quantities, evaluates closed-form lower bounds
on the expected gate count of quantum simplex subroutines, and reports the
gate time a quantum device would need to match each classical iteration.
"""

from qlpbench.lp import LinearProgram, SparseMatrix, StandardFormLP, standardize

__all__ = [
    "LinearProgram",
    "SparseMatrix",
    "StandardFormLP",
    "standardize",
]

__version__ = "0.1.0"
