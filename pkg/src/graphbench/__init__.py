"""graphbench: phase-separated benchmarking of parallel graph kernels."""

from .datagen import KroneckerSpec, RootSet, assign_weights, generate_kronecker, select_roots
from .graph import CsrGraph, EdgeList, attach_in_csr, build_csr, degree

__version__ = "0.1.0"

__all__ = [
    "CsrGraph",
    "EdgeList",
    "KroneckerSpec",
    "RootSet",
    "assign_weights",
    "attach_in_csr",
    "build_csr",
    "degree",
    "generate_kronecker",
    "select_roots",
]
