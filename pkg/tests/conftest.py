"""Independent reference computations shared by the tests.

Nothing here calls the determinant, coupling or enumeration code of the
package; these are the slow, obvious versions the package is checked against.
"""

from __future__ import annotations

import itertools
import math
import warnings
from fractions import Fraction

import numpy as np
import pytest

from dimerstats.geometry import TorusParityWarning


def ryser_permanent(A) -> int:
    """Permanent of a square integer matrix (Ryser's inclusion-exclusion)."""
    n = len(A)
    if n == 0:
        return 1
    total = 0
    for mask in range(1, 1 << n):
        cols = [j for j in range(n) if mask >> j & 1]
        prod = 1
        for row in A:
            prod *= sum(row[j] for j in cols)
            if not prod:
                break
        total += (-1) ** len(cols) * prod
    return (-1) ** n * total


def biadjacency(graph, forced=()) -> list:
    """0/1 black x white adjacency with the vertices of ``forced`` edges removed."""
    gone = {v for e in forced for v in e}
    blacks = [b for b in graph.blacks if b not in gone]
    whites = [w for w in graph.whites if w not in gone]
    edges = set(graph.edges)
    from dimerstats.geometry import LatticeEdge
    return [[1 if LatticeEdge(b, w) in edges else 0 for w in whites] for b in blacks]


def permanent_count(graph, forced=()) -> int:
    """Perfect matchings of a bipartite graph (optionally containing ``forced``)."""
    A = biadjacency(graph, forced)
    if any(len(r) != len(A) for r in A):
        return 0
    return ryser_permanent(A)


def permanent_probability(graph, forced) -> Fraction:
    return Fraction(permanent_count(graph, forced), permanent_count(graph))


def leibniz_det(M, zero):
    """Determinant by summing over all permutations."""
    n = len(M)
    total = zero
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = None
        for i, j in enumerate(perm):
            term = M[i][j] if term is None else term * M[i][j]
        if term is None:
            term = zero + 1
        total = total + term if inv % 2 == 0 else total - term
    return total


def numpy_inverse_entry(km, white, black) -> complex:
    """(B^{-1})[white, black] from a dense floating point inverse."""
    inv = np.linalg.inv(km.to_numpy())
    return complex(inv[km.cols.index(white)][km.rows.index(black)])


TAU = math.sqrt(3) / (2 * math.pi)


@pytest.fixture(autouse=True)
def _quiet_torus_parity():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TorusParityWarning)
        yield
