"""The coupling function P (inverse Kasteleyn operator) for lozenges and dominoes.

Exact values come from a boundary line plus the kernel recursion
(``K P = delta``) and the lattice symmetries.  Numeric values come from the
Fourier double integrals and serve as an independent check.  Finite-torus
sums ``P^(j)`` show how the torus inverses approach the plane values.

Conventions.  Lozenge: ``P(x, y)`` is the entry for the white vertex
``(x, y, 1)`` against the black origin, so the kernel at a black vertex
``(a, b, 0)`` reads ``P(a, b) + P(a-1, b) + P(a, b-1) = delta``.  Domino:
``P(x, y)`` is the entry for the displacement (white - black) with
weight ``i`` on vertical edges, so the kernel at an even site ``d`` reads
``P(d+e1) + P(d-e1) + i P(d+e2) + i P(d-e2) = delta``.
"""

from __future__ import annotations

import math
import warnings
from fractions import Fraction

import numpy as np
from scipy.integrate import IntegrationWarning, quad

from .exactfield import I, SymbolicValue
from .geometry import Model

THIRD = Fraction(1, 3)


class ConvergenceError(ArithmeticError):
    def __init__(self, message, achieved):
        super().__init__(f"{message} (achieved error bound {achieved:.3g})")
        self.achieved = achieved


# lozenge ------------------------------------------------------------------------

def c_sign(y: int) -> int:
    """0, 1, -1 for y = 0, -1, 1 (mod 3)."""
    return (0, -1, 1)[y % 3]


def lozenge_boundary(y: int) -> SymbolicValue:
    """P(-1, y) = c_y * t / y for y != 0."""
    if y == 0:
        raise ValueError("y = 0 is the base value P(-1, 0) = 1/3, not part of this formula")
    return SymbolicValue(Model.LOZENGE, {1: Fraction(c_sign(y), y)})


def lozenge_orbit(x: int, y: int) -> tuple:
    """The six images of (x, y) under the dihedral symmetries of H."""
    s = -x - y - 1
    return ((x, y), (s, x), (y, s), (y, x), (s, y), (x, s))


class _LozengeHalfPlane:
    """Exact P on x <= -1, filled from the line x = -1 by the kernel recursion."""

    def __init__(self):
        self.values = {}

    def boundary(self, y):
        if y == 0:
            return SymbolicValue.const(Model.LOZENGE, THIRD)
        return lozenge_boundary(y)

    def get(self, x: int, y: int) -> SymbolicValue:
        if x > -1:
            raise ValueError("half-plane table only covers x <= -1")
        if x == -1:
            return self.boundary(y)
        key = (x, y)
        if key in self.values:
            return self.values[key]
        stack = [key]
        while stack:
            a, b = stack[-1]
            if (a, b) in self.values:
                stack.pop()
                continue
            # kernel at black (a+1, b, 0), never the origin since a+1 <= -1
            deps = [(a + 1, b), (a + 1, b - 1)]
            missing = [d for d in deps if d[0] < -1 and d not in self.values]
            if missing:
                stack.extend(missing)
                continue
            p1 = self.boundary(b) if a + 1 == -1 else self.values[(a + 1, b)]
            p2 = self.boundary(b - 1) if a + 1 == -1 else self.values[(a + 1, b - 1)]
            self.values[(a, b)] = -(p1 + p2)
            stack.pop()
        return self.values[key]


_LOZ = _LozengeHalfPlane()


def lozenge_coupling(x: int, y: int) -> SymbolicValue:
    """Exact P(x, y, 1); every orbit meets the half-plane x <= -1."""
    candidates = [p for p in lozenge_orbit(x, y) if p[0] <= -1]
    a, b = max(candidates)
    return _LOZ.get(a, b)


# domino -------------------------------------------------------------------------

def domino_diagonal(x: int) -> SymbolicValue:
    """P(2x+1, 2x) = (-1)^x [1/4 - (1/pi)(1 - 1/3 + ... +- 1/(2x-1))] for x >= 1.

    The series has x terms.  P(1, 0) = 1/4 is the base value and is what
    the same expression gives with an empty sum.
    """
    if x < 1:
        raise ValueError("x must be at least 1; P(1, 0) = 1/4 is a base value")
    return _diagonal(x)


def _diagonal(x):
    series = sum((Fraction((-1) ** (j + 1), 2 * j - 1) for j in range(1, x + 1)), Fraction(0))
    sign = (-1) ** x
    return SymbolicValue(Model.DOMINO, {0: sign * Fraction(1, 4), 1: -sign * series})


class _DominoQuadrant:
    """Exact P(x, y) for x > y >= 0, built column by column."""

    def __init__(self):
        self.cols = {}

    def _diag(self, k):
        # the line (k+1, k)
        if k % 2 == 0:
            return _diagonal(k // 2)
        # kernel at (k+1, k+1) together with the swap symmetry gives
        # P(2x, 2x-1) = i P(2x+1, 2x)
        return _diagonal((k + 1) // 2) * I

    def column(self, a: int) -> dict:
        if a in self.cols:
            return self.cols[a]
        for c in range(1, a + 1):
            if c in self.cols:
                continue
            col = {c - 1: self._diag(c - 1)}
            if c >= 3:
                # kernel at the even site (c-1, b): solve for P(c, b)
                prev, cur = self.cols[c - 2], self.cols[c - 1]
                for b in range(c - 3, -1, -2):
                    up = cur[b + 1]
                    down = cur[abs(b - 1)]
                    col[b] = -(prev[b] + (up + down) * I)
            self.cols[c] = col
        return self.cols[a]

    def get(self, x: int, y: int) -> SymbolicValue:
        return self.column(x)[y]


_DOM = _DominoQuadrant()


def domino_coupling(x: int, y: int) -> SymbolicValue:
    """Exact P(x, y) for dominoes; zero when x + y is even."""
    ax, ay = abs(x), abs(y)
    if (ax + ay) % 2 == 0:
        return SymbolicValue.zero(Model.DOMINO)
    if ax > ay:
        return _DOM.get(ax, ay)
    # swap symmetry: P(x, y) = -i (-1)^x P(y, x)
    return _DOM.get(ay, ax) * I * (-(-1) ** ax)


def coupling(model, x: int, y: int) -> SymbolicValue:
    model = Model.parse(model)
    if model is Model.LOZENGE:
        return lozenge_coupling(x, y)
    return domino_coupling(x, y)


class CouplingTable:
    """Exact coupling values on the window |x|, |y| <= radius."""

    def __init__(self, model, radius: int):
        self.model = Model.parse(model)
        self.radius = radius
        self.values = {(x, y): coupling(self.model, x, y)
                       for x in range(-radius, radius + 1)
                       for y in range(-radius, radius + 1)}

    def __getitem__(self, key) -> SymbolicValue:
        return self.values[key]

    def __contains__(self, key):
        return key in self.values

    def kernel_sum(self, a: int, b: int) -> SymbolicValue:
        """Weighted sum of P over the neighbours of the black site (a, b)."""
        if self.model is Model.LOZENGE:
            return self[(a, b)] + self[(a - 1, b)] + self[(a, b - 1)]
        return (self[(a + 1, b)] + self[(a - 1, b)]
                + (self[(a, b + 1)] + self[(a, b - 1)]) * I)

    def kernel_violations(self) -> list:
        """Black sites in the window interior where K P != delta."""
        r = self.radius - 1
        bad = []
        for a in range(-r, r + 1):
            for b in range(-r, r + 1):
                if self.model is Model.DOMINO and (a + b) % 2:
                    continue
                target = 1 if (a, b) == (0, 0) else 0
                if self.kernel_sum(a, b) != target:
                    bad.append((a, b))
        return bad

    def symmetry_violations(self) -> list:
        bad = []
        for (x, y), v in self.values.items():
            if self.model is Model.LOZENGE:
                images = [p for p in lozenge_orbit(x, y) if p in self.values]
                if any(self.values[p] != v for p in images):
                    bad.append((x, y))
            else:
                if (x + y) % 2 == 0:
                    if v:
                        bad.append((x, y))
                    continue
                mirrored = [self.values[(sx * x, sy * y)] for sx in (1, -1) for sy in (1, -1)]
                swapped = self.values.get((y, x))
                if any(m != v for m in mirrored) or (
                        swapped is not None and v != swapped * I * (-(-1) ** abs(x))):
                    bad.append((x, y))
        return bad

    def rows(self):
        for (x, y) in sorted(self.values):
            v = self.values[(x, y)]
            yield x, y, v, v.evaluate()


# numeric integrals ---------------------------------------------------------------

def _lozenge_inner(x: int, phi: float) -> complex:
    # (1/2pi) int e^{ix theta} / (1 + e^{-i theta} + e^{-i phi}) d theta, by residues
    a = 1 + np.exp(-1j * phi)
    if abs(a) > 1:
        return (-1) ** x * a ** (-x - 1) if x >= 0 else 0j
    return (-a) ** (-x - 1) if x <= -1 else 0j


def _domino_inner(x: int, phi: float) -> complex:
    # (1/2pi) int e^{ix theta} / (2 cos theta + 2i cos phi) d theta, by residues
    c = math.cos(phi)
    if c == 0:
        return 0j
    s = math.sqrt(1 + c * c)
    sg = 1.0 if c > 0 else -1.0
    root_in = 1j * sg * (s - abs(c))
    return root_in ** abs(x) / (2j * sg * s)


_SINGULAR_PHI = {
    Model.LOZENGE: (2 * math.pi / 3, 4 * math.pi / 3),
    Model.DOMINO: (math.pi / 2, 3 * math.pi / 2),
}


def _iterated(model, x, y, tol):
    inner = _lozenge_inner if model is Model.LOZENGE else _domino_inner
    breaks = (0.0,) + _SINGULAR_PHI[model] + (2 * math.pi,)
    total, err = 0j, 0.0
    for lo, hi in zip(breaks, breaks[1:]):
        for part in (np.real, np.imag):
            with warnings.catch_warnings():
                # a missed tolerance surfaces as ConvergenceError instead
                warnings.simplefilter("ignore", IntegrationWarning)
                val, e = quad(lambda p: part(np.exp(1j * y * p) * inner(x, p)), lo, hi,
                              epsabs=tol * math.pi / 4, epsrel=0, limit=500)
            total += val if part is np.real else 1j * val
            err += e
    return total / (2 * math.pi), err / (2 * math.pi)


def _poles(model):
    if model is Model.LOZENGE:
        a, b = _SINGULAR_PHI[model]
        return [(a, b), (b, a)]
    s = _SINGULAR_PHI[model]
    return [(p, q) for p in s for q in s]


def _graded_breaks(singular, delta, ratio=0.35):
    base = sorted({0.0, 2 * math.pi, *singular})
    pts = set(base)
    for lo, hi in zip(base, base[1:]):
        half = (hi - lo) / 2
        for end, direction in ((lo, 1), (hi, -1)):
            if end not in singular:
                continue
            d = delta
            while d < half:
                pts.add(end + direction * d)
                d /= ratio
    return np.array(sorted(pts))


def _gauss_grid(breaks, order):
    nodes, weights = np.polynomial.legendre.leggauss(order)
    lo, hi = breaks[:-1], breaks[1:]
    mid, half = (lo + hi) / 2, (hi - lo) / 2
    pts = (mid[:, None] + half[:, None] * nodes[None, :])
    wts = half[:, None] * weights[None, :]
    return pts, wts


def _excised(model, x, y, delta, order):
    if model is Model.LOZENGE:
        def f(t, p):
            return np.exp(1j * (x * t + y * p)) / (1 + np.exp(-1j * t) + np.exp(-1j * p))
    else:
        def f(t, p):
            return np.exp(1j * (x * t + y * p)) / (2 * np.cos(t) + 2j * np.cos(p))
    singular = set(_SINGULAR_PHI[model])
    br = _graded_breaks(singular, delta)
    pts, wts = _gauss_grid(br, order)
    ncell = len(br) - 1
    keep = np.ones((ncell, ncell), dtype=bool)
    for t0, p0 in _poles(model):
        ti = [k for k in range(ncell) if abs(br[k] - t0) < 1e-12 or abs(br[k + 1] - t0) < 1e-12]
        pi_ = [k for k in range(ncell) if abs(br[k] - p0) < 1e-12 or abs(br[k + 1] - p0) < 1e-12]
        for a in ti:
            for b in pi_:
                keep[a, b] = False
    T = pts.reshape(-1)
    WT = wts.reshape(-1)
    P = pts.reshape(-1)
    WP = wts.reshape(-1)
    mask = np.repeat(np.repeat(keep, order, axis=0), order, axis=1)
    vals = f(T[:, None], P[None, :])
    vals = np.where(mask, vals, 0)
    return complex(WT @ vals @ WP) / (4 * math.pi ** 2)


def coupling_numeric(model, x: int, y: int, tol: float = 1e-8, method: str = "iterated") -> complex:
    """P(x, y) from its Fourier double integral over [0, 2pi]^2.

    ``iterated`` integrates theta in closed form by residues and phi by
    adaptive quadrature split at the singular angles.  ``excised`` is a
    genuine 2-D rule: a graded tensor Gauss-Legendre grid with a small
    square removed around each pole (the leading singular term is odd, so
    the removed mass is O(delta^2)).
    """
    model = Model.parse(model)
    if tol <= 0:
        raise ValueError("tol must be positive")
    if method == "iterated":
        val, err = _iterated(model, x, y, tol)
        if err > tol:
            raise ConvergenceError("adaptive quadrature did not converge", err)
        return val
    if method == "excised":
        delta = min(0.05, math.sqrt(tol) / 4)
        val = _excised(model, x, y, delta, 16)
        check = _excised(model, x, y, delta / 4, 22)
        err = abs(val - check)
        if err > tol:
            raise ConvergenceError("excised quadrature did not converge", err)
        return check
    raise ValueError(f"unknown method {method!r}")


# finite tori -----------------------------------------------------------------------

_SHIFTS = {1: (0, 0), 2: (1, 0), 3: (0, 1), 4: (1, 1)}


def torus_coupling(model, m: int, n: int, variant: int, x: int, y: int) -> complex:
    """Inverse of the j-th torus Kasteleyn matrix, as a finite Fourier sum.

    Lozenge: entry for white (x, y, 1) against black (0, 0, 0) of H_{m,n}.
    Domino: entry for displacement (x, y) on the 2m x 2n torus.
    """
    model = Model.parse(model)
    sx, sy = _SHIFTS[variant]
    if model is Model.LOZENGE:
        th = np.pi * (2 * np.arange(m) + sx) / m
        ph = np.pi * (2 * np.arange(n) + sy) / n
        denom = 1 + np.exp(-1j * th)[:, None] + np.exp(-1j * ph)[None, :]
    else:
        th = np.pi * (2 * np.arange(2 * m) + sx) / (2 * m)
        ph = np.pi * (2 * np.arange(2 * n) + sy) / (2 * n)
        denom = 2 * np.cos(th)[:, None] + 2j * np.cos(ph)[None, :]
    if np.min(np.abs(denom)) < 1e-9:
        raise ValueError(f"torus ({m}, {n}) variant {variant} has a singular Kasteleyn matrix")
    num = np.exp(1j * x * th)[:, None] * np.exp(1j * y * ph)[None, :]
    return complex(np.mean(num / denom))
