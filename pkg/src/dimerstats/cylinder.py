"""Probabilities of cylinder events: a fixed finite set of edges is in the matching.

Three exact routes are available.  In the plane the probability is a small
determinant of coupling values.  In a finite simply connected region it is
a cofactor of the inverse Kasteleyn matrix, computed over the rationals
(Gaussian rationals for dominoes).  On an even torus it is the signed
four-matrix combination of the same cofactors, divided by the torus count.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass
from fractions import Fraction

from .coupling import coupling
from .exactfield import GaussianRational, I, SymbolicValue, det_field, det_int, inverse_field, sym_det
from .geometry import (LatticeEdge, Model, RegionGraph, build_torus, embed, is_black, make_edge,
                       neighbors, translate)
from .kasteleyn import (TORUS_SIGNS, _modulus_as_int, count_torus, edge_weight, kasteleyn_matrix,
                        torus_supported)
from .oracle import NoMatchingsError, oracle_probability

# slack allowed above 1 when checking a floating point probability
EVAL_EPS = 1e-9


class Method(str, enum.Enum):
    PLANE = "PlaneCoupling"
    REGION = "RegionCofactor"
    TORUS = "TorusWeighted"
    ORACLE = "Oracle"


class OracleFallbackWarning(UserWarning):
    pass


@dataclass(frozen=True)
class CylinderEvent:
    """A finite set of pairwise disjoint lattice edges."""

    model: Model
    edges: tuple

    def __post_init__(self):
        model = Model.parse(self.model)
        object.__setattr__(self, "model", model)
        edges = tuple(make_edge(tuple(e[0]), tuple(e[1])) for e in self.edges)
        dim = 3 if model is Model.LOZENGE else 2
        if any(len(e.black) != dim for e in edges):
            raise ValueError(f"edges do not belong to the {model.value} lattice")
        seen = set()
        for e in edges:
            if e.black in seen or e.white in seen:
                raise ValueError("event edges must be pairwise disjoint")
            seen.update(e)
        object.__setattr__(self, "edges", edges)

    def __len__(self):
        return len(self.edges)

    @property
    def vertices(self) -> tuple:
        return tuple(v for e in self.edges for v in e)

    def translate(self, shift) -> "CylinderEvent":
        if self.model is Model.DOMINO and (shift[0] + shift[1]) % 2:
            raise ValueError("an odd domino shift swaps colours and is not a lattice symmetry")
        return CylinderEvent(self.model, tuple(
            LatticeEdge(translate(e.black, shift), translate(e.white, shift)) for e in self.edges))

    def union(self, other: "CylinderEvent") -> "CylinderEvent":
        if other.model is not self.model:
            raise ValueError("cannot combine events from different lattices")
        return CylinderEvent(self.model, self.edges + other.edges)


@dataclass(frozen=True)
class ProbabilityResult:
    exact: object
    numeric: float
    method: Method

    def __post_init__(self):
        if not -EVAL_EPS <= self.numeric <= 1 + EVAL_EPS:
            raise ArithmeticError(f"probability {self.numeric} is outside [0, 1]")

    def exact_str(self) -> str:
        return str(self.exact)


def _edge_product(model, edges):
    a = 1
    for e in edges:
        a = a * edge_weight(model, e)
    return a


def _displacement(e_white, e_black):
    return (e_white[0] - e_black[0], e_white[1] - e_black[1])


def coupling_matrix(event: CylinderEvent) -> list:
    """m_ij = P(w_i - b_j) over the event's edges."""
    return [[coupling(event.model, *_displacement(wi.white, bj.black)) for bj in event.edges]
            for wi in event.edges]


def plane_probability(event: CylinderEvent) -> ProbabilityResult:
    """a_E det[P(w_i - b_j)], exact and real for both lattices."""
    model = event.model
    if not event.edges:
        return ProbabilityResult(SymbolicValue.one(model), 1.0, Method.PLANE)
    value = sym_det(coupling_matrix(event)) * _edge_product(model, event.edges)
    if not value.is_real():
        raise ArithmeticError(f"plane probability {value} is not real")
    return ProbabilityResult(value, float(value), Method.PLANE)


# finite regions ------------------------------------------------------------------

def _field_matrix(km):
    if km.model is Model.DOMINO:
        return km.as_lists()
    return [[Fraction(a) for a in row] for row in km.as_lists()]


def _exact_modulus(z) -> Fraction:
    """|z| for a rational or a Gaussian rational lying on an axis."""
    if isinstance(z, GaussianRational):
        if z.re and z.im:
            raise ArithmeticError(f"{z!r} is not a unit multiple of a rational")
        return abs(z.re) if z.re else abs(z.im)
    return abs(Fraction(z))


def _event_indices(km, edges):
    p = [km.rows.index(e.black) for e in edges]
    q = [km.cols.index(e.white) for e in edges]
    return p, q


def _minor(B, p, q):
    rows = set(p)
    cols = set(q)
    return [[a for j, a in enumerate(row) if j not in cols] for i, row in enumerate(B) if i not in rows]


def _perm_sign(seq) -> int:
    seq = list(seq)
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


def cofactor_sign(p, q) -> int:
    """Sign linking the complementary minor to the k-th mixed derivative of det B.

    The sum of the terms of det B containing all entries B[p_k, q_k] equals
    ``cofactor_sign(p, q) * prod B[p_k, q_k] * det(B with rows p, cols q removed)``.
    """
    order = sorted(range(len(p)), key=lambda k: p[k])
    return (-1) ** (sum(p) + sum(q)) * _perm_sign([q[k] for k in order])


def _det(M):
    return det_field(M) if M else Fraction(1)


def _region_edges(region, event):
    return [region.find_edge(e.black, e.white) for e in event.edges]


_UNITS = (1, I, -1, -I)


class RegionSystem:
    """Cached exact data for one region: B = U^{-1} R V^{-1}.

    R is an integer matrix and U, V are diagonal powers of i (trivial for
    lozenges).  For dominoes U = diag(i^{-y_b}) and V = diag(i^{y_w}) turn
    the weight i on vertical edges into a real sign, so eliminations run
    over plain integers and fractions.
    """

    def __init__(self, region: RegionGraph):
        if region.is_torus:
            raise ValueError("phase reduction needs a planar region")
        self.region = region
        self.km = kasteleyn_matrix(region)
        if region.model is Model.DOMINO:
            self.u = [(-b[1]) % 4 for b in self.km.rows]
            self.v = [w[1] % 4 for w in self.km.cols]
        else:
            self.u = [0] * len(self.km.rows)
            self.v = [0] * len(self.km.cols)
        self.R = [[self._real(_UNITS[self.u[i]] * a * _UNITS[self.v[j]])
                   for j, a in enumerate(row)] for i, row in enumerate(self.km.B)]
        self.det_R = det_int(self.R) if self.R else 1
        self._inv = None

    @staticmethod
    def _real(z) -> int:
        if isinstance(z, GaussianRational):
            if z.im:
                raise ArithmeticError("phase reduction left an imaginary entry")
            return int(z.re)
        return int(z)

    @property
    def count(self) -> int:
        return abs(self.det_R)

    def indices(self, edges):
        return _event_indices(self.km, edges)

    def inverse_entry(self, w_idx, b_idx):
        """B^{-1}[w, b] = v_w R^{-1}[w, b] u_b."""
        if self._inv is None:
            self._inv = inverse_field([[Fraction(a) for a in row] for row in self.R])
        val = self._inv[w_idx][b_idx]
        k = (self.u[b_idx] + self.v[w_idx]) % 4
        return val if k == 0 else _UNITS[k] * val

    def minor_count(self, p, q) -> int:
        """|det B_E|, the number of matchings containing the edges."""
        M = _minor(self.R, p, q)
        return abs(det_int(M)) if M else 1


_SYSTEMS = {}


def region_system(region: RegionGraph) -> RegionSystem:
    key = (region.model, region.edges)
    sys_ = _SYSTEMS.get(key)
    if sys_ is None:
        if len(_SYSTEMS) > 64:
            _SYSTEMS.clear()
        sys_ = _SYSTEMS[key] = RegionSystem(region)
    return sys_


def region_probability(region: RegionGraph, event: CylinderEvent, path: str = "both") -> ProbabilityResult:
    """Exact probability that a uniform matching of ``region`` contains ``event``.

    ``path`` is ``"inverse"`` (k x k cofactor of B^{-1}), ``"minor"``
    (|det B_E| / |det B|) or ``"both"`` (compute both and require agreement).
    """
    if region.is_torus:
        raise ValueError("use torus_probability for toroidal graphs")
    if path not in ("inverse", "minor", "both"):
        raise ValueError(f"unknown path {path!r}")
    if not region.balanced:
        raise NoMatchingsError("region is unbalanced and has no perfect matchings")
    edges = _region_edges(region, event)
    if not edges:
        return ProbabilityResult(Fraction(1), 1.0, Method.REGION)
    system = region_system(region)
    if not system.count:
        raise NoMatchingsError("region has no perfect matchings")
    p, q = system.indices(edges)
    results = []
    if path in ("inverse", "both"):
        sub = [[system.inverse_entry(qi, pj) for pj in p] for qi in q]
        results.append(_exact_modulus(_det(sub)))
    if path in ("minor", "both"):
        results.append(Fraction(system.minor_count(p, q), system.count))
    if len(set(results)) != 1:
        raise ArithmeticError(f"cofactor paths disagree: {results}")
    prob = results[0]
    return ProbabilityResult(prob, float(prob), Method.REGION)


def _signed_pieces(region, event):
    km = kasteleyn_matrix(region)
    edges = _region_edges(region, event)
    p, q = _event_indices(km, edges)
    B = _field_matrix(km)
    a_e = 1
    for pi, qi in zip(p, q):
        a_e = a_e * B[pi][qi]
    return B, p, q, a_e


def signed_inverse_cofactor(region: RegionGraph, event: CylinderEvent, paired: bool = False):
    """Signed k x k cofactor of B^{-1} attached to an event.

    With ``paired=False`` this is (-1)^(sum p_j + q_j) a_E det((B^{-1})_{E*})
    with the row and column sets sorted.  With ``paired=True`` it is
    a_E det(B^{-1}[q_k, p_l]) with rows and columns in edge order, which
    equals the probability itself.
    """
    B, p, q, a_e = _signed_pieces(region, event)
    inv = inverse_field(B)
    if paired:
        return a_e * _det([[inv[qi][pj] for pj in p] for qi in q])
    sub = [[inv[qi][pj] for pj in sorted(p)] for qi in sorted(q)]
    return (-1) ** (sum(p) + sum(q)) * a_e * _det(sub)


def signed_minor_count(region: RegionGraph, event: CylinderEvent):
    """(-1)^(sum p_j + q_j) a_E det(B_E) sign(det B), rows and columns sorted."""
    B, p, q, a_e = _signed_pieces(region, event)
    det_b = _det(B)
    phase = det_b / _modulus_as_int(det_b)
    return (-1) ** (sum(p) + sum(q)) * a_e * _det(_minor(B, p, q)) * phase


def lift_edge(torus: RegionGraph, edge) -> LatticeEdge:
    """A plane edge whose endpoints reduce to the given torus edge."""
    black, white = torus.normalize(tuple(edge[0])), torus.normalize(tuple(edge[1]))
    if not is_black(black):
        black, white = white, black
    for w in neighbors(torus.model, black):
        if torus.normalize(w) == white:
            return LatticeEdge(black, w)
    raise ValueError(f"{edge!r} is not an edge of the torus")


# tori ---------------------------------------------------------------------------------

class TorusSystem:
    """Cached exact data for one even torus: the four matrices B_j and their inverses."""

    def __init__(self, model, m: int, n: int):
        self.model = Model.parse(model)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            self.torus = build_torus(self.model, m, n)
        self.count = count_torus(self.model, m, n)
        self.kms = [kasteleyn_matrix(self.torus, j) for j in (1, 2, 3, 4)]
        self.B = [_field_matrix(km) for km in self.kms]
        self.dets = [_det(B) for B in self.B]
        self._inv = [None] * 4

    def inverse(self, j):
        if self._inv[j] is None:
            self._inv[j] = inverse_field(self.B[j])
        return self._inv[j]

    def term(self, j, edges, path):
        """Contribution of B_{j+1} to twice the event count."""
        B = self.B[j]
        p, q = _event_indices(self.kms[j], edges)
        a_e = 1
        for pi, qi in zip(p, q):
            a_e = a_e * B[pi][qi]
        if path == "inverse" or (path == "auto" and self.dets[j]):
            inv = self.inverse(j)
            sub = [[inv[qi][pj] for pj in p] for qi in q]
            return a_e * self.dets[j] * _det(sub)
        return a_e * cofactor_sign(p, q) * _det(_minor(B, p, q))

    def event_count(self, edges, path):
        """Twice the number of matchings containing ``edges``, as a signed sum."""
        if path == "inverse" and not all(self.dets):
            raise ZeroDivisionError("some B_j is singular; use the minor path")
        total = 0
        for j, s in enumerate(TORUS_SIGNS):
            t = self.term(j, edges, path)
            total = total + t if s > 0 else total - t
        return total


_TORI = {}


def torus_system(model, m: int, n: int) -> TorusSystem:
    key = (Model.parse(model), m, n)
    sys_ = _TORI.get(key)
    if sys_ is None:
        if len(_TORI) > 16:
            _TORI.clear()
        sys_ = _TORI[key] = TorusSystem(*key)
    return sys_


def torus_probability(model, m: int, n: int, event: CylinderEvent,
                      path: str = "auto") -> ProbabilityResult:
    """Exact probability on the (m, n) torus from the four weighted cofactors.

    ``path`` is ``"inverse"`` (needs every B_j invertible), ``"minor"`` or
    ``"auto"`` (inverse for each invertible B_j, minors for singular ones).
    Tori outside the even-even case are handled by enumeration with a warning.
    """
    model = Model.parse(model)
    if path not in ("inverse", "minor", "auto"):
        raise ValueError(f"unknown path {path!r}")
    if not torus_supported(model, m, n):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            torus = build_torus(model, m, n)
        edges = [torus.find_edge(e.black, e.white) for e in event.edges]
        if len({v for e in edges for v in e}) != 2 * len(edges):
            raise ValueError("event edges overlap on the torus")
        warnings.warn(f"torus ({m}, {n}) is outside the four-determinant case; "
                      "falling back to enumeration", OracleFallbackWarning, stacklevel=2)
        prob = oracle_probability(torus, edges, cap=None)
        return ProbabilityResult(prob, float(prob), Method.ORACLE)
    system = torus_system(model, m, n)
    edges = [system.torus.find_edge(e.black, e.white) for e in event.edges]
    if len({v for e in edges for v in e}) != 2 * len(edges):
        raise ValueError("event edges overlap on the torus")
    if system.count == 0:
        raise NoMatchingsError("torus has no perfect matchings")
    twice = _exact_modulus(system.event_count(edges, path))
    prob = twice / (2 * system.count)
    return ProbabilityResult(prob, float(prob), Method.TORUS)


def oracle_result(graph: RegionGraph, event: CylinderEvent, cap=None) -> ProbabilityResult:
    prob = oracle_probability(graph, event, cap=cap)
    return ProbabilityResult(prob, float(prob), Method.ORACLE)


# correlations ---------------------------------------------------------------------

@dataclass(frozen=True)
class Correlation:
    joint: SymbolicValue
    product: SymbolicValue
    difference: SymbolicValue
    distance: float


def event_distance(e1: CylinderEvent, e2: CylinderEvent) -> float:
    """Minimum Euclidean distance between the embedded vertices of two events."""
    return min(abs(embed(u) - embed(v)) for u in e1.vertices for v in e2.vertices)


def correlation(e1: CylinderEvent, e2: CylinderEvent, shift) -> Correlation:
    """joint - product for e1 and e2 translated by ``shift``, exactly."""
    moved = e2.translate(shift)
    if set(moved.vertices) & set(e1.vertices):
        raise ValueError("translated event overlaps the first event")
    joint = plane_probability(e1.union(moved)).exact
    product = plane_probability(e1).exact * plane_probability(e2).exact
    return Correlation(joint, product, joint - product, event_distance(e1, moved))


def horizontal_pair_difference(n: int) -> SymbolicValue:
    """joint - product for the lozenge edge at the origin and its (-n, n) translate."""
    base = CylinderEvent(Model.LOZENGE, (((0, 0, 0), (0, 0, 1)),))
    return correlation(base, base, (-n, n)).difference


def monotone_check(event: CylinderEvent) -> bool:
    """Dropping any edge never lowers the plane probability."""
    full = plane_probability(event).numeric
    for k in range(len(event.edges)):
        sub = CylinderEvent(event.model, event.edges[:k] + event.edges[k + 1:])
        if plane_probability(sub).numeric < full - EVAL_EPS:
            return False
    return True


__all__ = [
    "CylinderEvent", "ProbabilityResult", "Method", "Correlation", "OracleFallbackWarning",
    "plane_probability", "region_probability", "region_system", "RegionSystem", "torus_probability", "oracle_result",
    "correlation", "event_distance", "horizontal_pair_difference", "coupling_matrix",
    "cofactor_sign", "signed_inverse_cofactor", "signed_minor_count", "lift_edge",
    "monotone_check",
]
