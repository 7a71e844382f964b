"""Lozenge height functions and the law of the edge count along a column.

Walk from face to face along the column of horizontal edges at (-j, j, .),
j = 0..n-1.  If r_n of those n edges are in the matching, the height
changes by h_n = n - 3 r_n.  The edges form a determinantal family with
kernel M_n[k, j] = P(-|k-j|, |k-j|, 1) = 1/3 on the diagonal and
c_d t / d at distance d, so the law of r_n comes from the characteristic
polynomial of M_n and its variance from traces.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .coupling import c_sign
from .exactfield import SymbolicValue, charpoly_int
from .geometry import Model, RegionGraph, faces_and_adjacency

# edge_count_distribution is exact and roughly quartic in n; keep it small
DISTRIBUTION_CAP = 100
LOZ = Model.LOZENGE


# height functions ----------------------------------------------------------------

class HeightError(ValueError):
    pass


@dataclass(frozen=True)
class HeightField:
    heights: dict
    anchor: tuple

    def __getitem__(self, face) -> int:
        return self.heights[face]

    def shifted(self, face) -> "HeightField":
        """Same field re-anchored so that ``face`` has height 0."""
        h0 = self.heights[face]
        return HeightField({f: h - h0 for f, h in self.heights.items()}, face)


def _step(matched: bool, sign: int) -> int:
    return sign * (-2 if matched else 1)


def height_field(region: RegionGraph, matching, anchor=None, order: str = "bfs") -> HeightField:
    """Heights on every face touching the region, 0 at ``anchor``.

    Crossing an edge in a positive direction adds 1 if the edge is unmatched
    and subtracts 2 if it is matched; the reverse step negates this.  All
    three steps around a black vertex are positive, so the total around any
    vertex of a perfect matching is 1 + 1 - 2 = 0.  ``order`` picks the
    spanning tree ("bfs" or "dfs"); the result must not depend on it.
    """
    if region.model is not LOZ:
        raise ValueError("height functions are implemented for lozenge tilings")
    matching = frozenset(region.find_edge(e[0], e[1]) for e in matching)
    covered = [v for e in matching for v in e]
    if len(covered) != len(set(covered)) or set(covered) != set(region.vertices):
        raise HeightError("not a perfect matching of the region")
    adj = faces_and_adjacency(region)
    links = {}
    for e, (f, g, sign) in adj.crossings.items():
        s = _step(e in matching, sign)
        links.setdefault(f, []).append((g, s))
        links.setdefault(g, []).append((f, -s))
    if anchor is None:
        anchor = adj.interior[0] if adj.interior else min(links)
    heights = {anchor: 0}
    frontier = deque([anchor])
    while frontier:
        f = frontier.popleft() if order == "bfs" else frontier.pop()
        for g, s in links.get(f, ()):
            if g not in heights:
                heights[g] = heights[f] + s
                frontier.append(g)
    for e, (f, g, sign) in adj.crossings.items():
        if heights[g] - heights[f] != _step(e in matching, sign):
            raise HeightError(f"height is not well defined across {e}")
    return HeightField(heights, anchor)


# moment matrix ----------------------------------------------------------------------

def column_coupling(d: int) -> Fraction:
    """Coefficient of t in P(-d, d, 1) for d != 0, namely c_d / d."""
    d = abs(d)
    return Fraction(c_sign(d), d)


@dataclass(frozen=True)
class HeightMomentMatrix:
    n: int
    M: tuple

    def __getitem__(self, key):
        k, j = key
        return self.M[k][j]

    def toeplitz_part(self) -> list:
        """T with M = I/3 + t T, rational."""
        return [[Fraction(0) if k == j else column_coupling(k - j) for j in range(self.n)]
                for k in range(self.n)]


def moment_matrix(n: int) -> HeightMomentMatrix:
    if n < 1:
        raise ValueError("n must be at least 1")
    third = SymbolicValue.const(LOZ, Fraction(1, 3))
    rows = tuple(tuple(third if k == j else SymbolicValue(LOZ, {1: column_coupling(k - j)})
                       for j in range(n)) for k in range(n))
    return HeightMomentMatrix(n, rows)


def _toeplitz_symmetric_functions(n: int) -> list:
    """e_0..e_n of the eigenvalues of T, exactly."""
    T = moment_matrix(n).toeplitz_part()
    # scale to an integer matrix: e_k(T) = e_k(L T) / L^k
    L = math.lcm(*range(1, n)) if n > 1 else 1
    cp = charpoly_int([[int(a * L) for a in row] for row in T])
    return [Fraction((-1) ** k * cp[k], L ** k) for k in range(n + 1)]


def principal_minor_sums(n: int) -> list:
    """alpha_0..alpha_n: sums of the j x j principal minors of M_n.

    With M = I/3 + t T and e_k the elementary symmetric functions of the
    eigenvalues of T (read off its characteristic polynomial),
    alpha_j = sum_k t^k e_k C(n-k, j-k) 3^(k-j).
    """
    e = _toeplitz_symmetric_functions(n)
    alphas = []
    for j in range(n + 1):
        terms = {}
        for k in range(j + 1):
            if e[k]:
                terms[k] = e[k] * comb(n - k, j - k) * Fraction(1, 3) ** (j - k)
        alphas.append(SymbolicValue(LOZ, terms))
    return alphas


def jordan_transform(alphas: list) -> list:
    """beta_k = sum_j (-1)^(j-k) C(j, k) alpha_j: exactly-k from at-least-k sums."""
    n = len(alphas) - 1
    betas = []
    for k in range(n + 1):
        b = SymbolicValue.zero(LOZ)
        for j in range(k, n + 1):
            b = b + alphas[j] * ((-1) ** (j - k) * comb(j, k))
        betas.append(b)
    return betas


def _distribution_weights(n: int, k: int, m: int) -> Fraction:
    # coefficient of t^m e_m in beta_k
    total = 0
    for j in range(max(k, m), n + 1):
        total += (-1) ** (j - k) * comb(j, k) * comb(n - m, j - m) * 3 ** (n - j)
    return Fraction(total, 3 ** (n - m))


def edge_count_distribution(n: int) -> list:
    """beta_0..beta_n, the exact law of the number of matched column edges."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if n > DISTRIBUTION_CAP:
        raise ValueError(f"n = {n} exceeds the distribution cap {DISTRIBUTION_CAP}; "
                         "use height_variance for large n")
    # the Jordan transform of the alpha_j, regrouped by powers of t so
    # that the big rationals e_m are only multiplied, never summed
    e = _toeplitz_symmetric_functions(n)
    return [SymbolicValue(LOZ, {m: e[m] * _distribution_weights(n, k, m)
                                for m in range(n + 1) if e[m]})
            for k in range(n + 1)]


# variance -------------------------------------------------------------------------

@dataclass(frozen=True)
class HeightVariance:
    n: int
    variance_r: float
    variance_h: float
    exact_r: SymbolicValue | None
    exact_h: SymbolicValue | None
    reference: float

    @property
    def expected_cycles(self) -> float:
        return 2 * self.variance_h / 9


def _column_sum_exact(n: int) -> Fraction:
    # sum_{d=1}^{n-1} (n - d) c_d^2 / d^2
    s = Fraction(0)
    for d in range(1, n):
        if d % 3:
            s += Fraction(n - d, d * d)
    return s


def _column_sum_float(n: int) -> float:
    return math.fsum((n - d) / (d * d) for d in range(1, n) if d % 3)


def trace_square(n: int) -> SymbolicValue:
    """tr(M_n^2) exactly."""
    return SymbolicValue(LOZ, {0: Fraction(n, 9), 2: 2 * _column_sum_exact(n)})


def height_variance(n: int, exact: bool | None = None) -> HeightVariance:
    """Variance of r_n and of h_n = n - 3 r_n from traces.

    sigma^2(r_n) = q'(1) + q''(1) - (n/3)^2 = n/3 - tr(M_n^2)
                 = 2n/9 - 2 t^2 sum_{d<n} (n-d) c_d^2 / d^2.
    The exact form is built when ``exact`` is true (default for n <= 2000).
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if exact is None:
        exact = n <= 2000
    tau2 = 3 / (4 * math.pi ** 2)
    var_r = 2 * n / 9 - 2 * tau2 * _column_sum_float(n)
    exact_r = exact_h = None
    if exact:
        exact_r = SymbolicValue.const(LOZ, Fraction(n, 3)) - trace_square(n)
        exact_h = exact_r * 9
        var_r = float(exact_r)
    reference = 9 * math.log(n) / math.pi ** 2
    return HeightVariance(n, var_r, 9 * var_r, exact_r, exact_h, reference)


def variance_from_distribution(betas: list) -> SymbolicValue:
    mean = SymbolicValue.zero(LOZ)
    second = SymbolicValue.zero(LOZ)
    for k, b in enumerate(betas):
        mean = mean + b * k
        second = second + b * (k * k)
    return second - mean * mean


def expected_cycles(n: int) -> float:
    """Expected number of contour loops separating two faces n steps apart."""
    return height_variance(n).expected_cycles


def expected_cycles_exact(n: int) -> SymbolicValue:
    return height_variance(n, exact=True).exact_h * Fraction(2, 9)
