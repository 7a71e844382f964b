"""Kasteleyn matrices, exact matching counts and torus determinant products."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exactfield import GaussianRational, I, det_field, det_int
from .geometry import Model, RegionGraph

# signs of det B_1..B_4 in the torus count (m, n both even)
TORUS_SIGNS = (-1, 1, 1, 1)
_VARIANT_FLIPS = {1: (False, False), 2: (True, False), 3: (False, True), 4: (True, True)}


@dataclass(frozen=True)
class KasteleynMatrix:
    """Signed/weighted black x white adjacency matrix.

    Entries are ints for lozenges and GaussianRationals (0, +-1, +-i) for
    dominoes.  ``variant`` is 1..4 for tori (which seams are negated) and
    None for regions.
    """

    B: tuple
    rows: tuple
    cols: tuple
    model: Model
    variant: int | None = None

    @property
    def shape(self) -> tuple:
        return (len(self.rows), len(self.cols))

    @property
    def square(self) -> bool:
        return len(self.rows) == len(self.cols)

    def entry(self, black, white):
        return self.B[self.rows.index(black)][self.cols.index(white)]

    def as_lists(self) -> list:
        return [list(r) for r in self.B]

    def to_numpy(self) -> np.ndarray:
        dtype = complex if self.model is Model.DOMINO else float
        return np.array([[complex(a) if self.model is Model.DOMINO else float(a) for a in row]
                         for row in self.B], dtype=dtype)

    def det(self):
        if not self.square:
            return 0
        if self.model is Model.LOZENGE:
            return det_int(self.as_lists())
        return det_field(self.as_lists())


def edge_weight(model, edge):
    """Kasteleyn weight of a plane edge: 1, or i on vertical domino edges."""
    if Model.parse(model) is Model.DOMINO and edge.black[0] == edge.white[0]:
        return I
    return 1


def kasteleyn_matrix(region: RegionGraph, variant: int | None = None) -> KasteleynMatrix:
    if region.is_torus:
        variant = 1 if variant is None else variant
        if variant not in _VARIANT_FLIPS:
            raise ValueError(f"torus variant must be 1..4, got {variant}")
    elif variant not in (None, 1):
        raise ValueError("seam variants only exist for tori")
    flip_x, flip_y = _VARIANT_FLIPS.get(variant, (False, False))
    bi, wi = region.black_index, region.white_index
    zero = GaussianRational(0) if region.model is Model.DOMINO else 0
    B = [[zero] * len(region.whites) for _ in region.blacks]
    for e in region.edges:
        wt = edge_weight(region.model, e)
        if region.is_torus and e in region.seams:
            sx, sy = region.seams[e]
            if (sx and flip_x) != (sy and flip_y):
                wt = -wt
        B[bi[e.black]][wi[e.white]] = B[bi[e.black]][wi[e.white]] + wt
    return KasteleynMatrix(tuple(tuple(r) for r in B), region.blacks, region.whites,
                           region.model, variant if region.is_torus else None)


def _modulus_as_int(z) -> int:
    if isinstance(z, GaussianRational):
        n = z.norm()
        if n.denominator != 1:
            raise ArithmeticError(f"determinant {z!r} is not a Gaussian integer")
        r = math.isqrt(n.numerator)
        if r * r != n.numerator:
            raise ArithmeticError(f"|{z!r}| is not an integer")
        return r
    return abs(int(z))


def count_region(region: RegionGraph) -> int:
    """Number of perfect matchings of a simply connected region, |det B|."""
    if region.is_torus:
        raise ValueError("use count_torus for toroidal graphs")
    if not region.balanced:
        return 0
    if not region.blacks:
        return 1
    return _modulus_as_int(kasteleyn_matrix(region).det())


def torus_supported(model, m: int, n: int) -> bool:
    """Whether the four-determinant formula is asserted for this torus."""
    return m >= 2 and n >= 2 and m % 2 == 0 and n % 2 == 0


def torus_determinants(torus: RegionGraph) -> tuple:
    return tuple(kasteleyn_matrix(torus, j).det() for j in (1, 2, 3, 4))


def signed_torus_sum(values) -> object:
    total = 0
    for s, v in zip(TORUS_SIGNS, values):
        total = total + v if s > 0 else total - v
    return total


def count_torus(model, m: int, n: int) -> int:
    """Exact number of perfect matchings of the (m, n) torus.

    Uses ``(-det B1 + det B2 + det B3 + det B4) / 2`` for m, n even; other
    parities fall back to exhaustive enumeration.
    """
    from .geometry import build_torus

    model = Model.parse(model)
    torus = build_torus(model, m, n)
    if not torus_supported(model, m, n):
        from .oracle import enumerate_matchings
        return len(enumerate_matchings(torus).matchings)
    total = signed_torus_sum(torus_determinants(torus))
    twice = _modulus_as_int(total)
    if twice % 2:
        raise ArithmeticError("signed determinant sum is odd")
    return twice // 2


def torus_det_product(model, m: int, n: int, variant: int) -> float:
    """det(A_j) of the lozenge torus from its eigenvalue product."""
    model = Model.parse(model)
    if model is not Model.LOZENGE:
        raise ValueError("the eigenvalue products are stated for the lozenge torus")
    if m % 3 == 0 or n % 3 == 0:
        raise ValueError("m and n must be nonzero modulo 3")
    sx, sy = _VARIANT_FLIPS[variant]
    z = np.exp(1j * np.pi * (2 * np.arange(m) + sx) / m)
    w = np.exp(1j * np.pi * (2 * np.arange(n) + sy) / n)
    factors = (1 + z[:, None] + w[None, :]) ** 2
    # product of many factors: accumulate log-modulus and phase separately
    logmod = np.sum(np.log(np.abs(factors)))
    phase = np.sum(np.angle(factors))
    value = np.exp(logmod) * np.exp(1j * phase)
    return float(value.real)


def entropy_per_site(model, m: int, n: int) -> float:
    """log(Z_{m,n}) / (number of vertices)."""
    model = Model.parse(model)
    z = count_torus(model, m, n)
    sites = 2 * m * n if model is Model.LOZENGE else 4 * m * n
    return math.log(z) / sites


def entropy_limit(model, grid: int = 2000) -> float:
    """Large-torus entropy per vertex from the eigenvalue product (midpoint grid)."""
    model = Model.parse(model)
    th = 2 * np.pi * (np.arange(grid) + 0.5) / grid
    if model is Model.LOZENGE:
        sym = 1 + np.exp(1j * th)[:, None] + np.exp(1j * th)[None, :]
    else:
        sym = 2 * np.cos(th)[:, None] + 2j * np.cos(th)[None, :]
    return float(np.mean(np.log(np.abs(sym))) / 2)
