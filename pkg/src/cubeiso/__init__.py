"""Edge isoperimetry in powers of the hypercube.

Vertices of {0,1}^n are bit patterns (coordinate i at bit i - 1); Q_n^r joins
two vertices when they differ in between 1 and r coordinates.  The package
counts induced edges and boundaries, compresses families, builds extremal
examples, evaluates upper bounds on D(m, n, r) (the most edges m vertices can
induce) and computes D exactly for small n.
"""
from __future__ import annotations

from cubeiso.core import (
    EdgeDecomposition,
    PairClass,
    Vertex,
    VertexFamily,
    degree,
    edge_boundary,
    edge_decomposition,
    edges_within,
    hamming_distance,
)
from cubeiso.errors import BackendDisagreement, CubeisoError, InvalidInput, OutOfHypothesis, ResourceLimit
from cubeiso.solver import SolveResult, solve, solve_compressed, solve_exhaustive

__version__ = "0.1.0"

__all__ = [
    "BackendDisagreement",
    "CubeisoError",
    "EdgeDecomposition",
    "InvalidInput",
    "OutOfHypothesis",
    "PairClass",
    "ResourceLimit",
    "SolveResult",
    "Vertex",
    "VertexFamily",
    "degree",
    "edge_boundary",
    "edge_decomposition",
    "edges_within",
    "hamming_distance",
    "solve",
    "solve_compressed",
    "solve_exhaustive",
]
