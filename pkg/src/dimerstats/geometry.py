"""Square and honeycomb lattices: coordinates, colouring, faces, regions and tori.

Lozenge (honeycomb) vertices are triples ``(a, b, t)`` standing for the
complex point ``a*X + b*Y + t`` with ``X = 3/2 - i*sqrt(3)/2`` and
``Y = 3/2 + i*sqrt(3)/2``; ``t = 0`` is black, ``t = 1`` is white.
Domino (square lattice) vertices are pairs ``(x, y)``, black when
``x + y`` is even.

Faces are labelled by pairs of integers.  A lozenge face ``(a, b)`` is the
hexagon centred at ``a*X + b*Y - 1``; its vertices are the blacks
``(a, b, 0), (a-1, b, 0), (a, b-1, 0)`` and the whites
``(a-1, b-1, 1), (a, b-1, 1), (a-1, b, 1)``.  A domino face ``(x, y)`` is
the unit square with lower-left corner ``(x, y)``.  The face "above and
right" of the vertex ``(0, 0, 0)`` is ``ORIGIN_FACE = (0, 1)``.
"""

from __future__ import annotations

import cmath
import enum
import math
import warnings
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

SQRT3 = math.sqrt(3.0)
X_HAT = complex(1.5, -SQRT3 / 2)
Y_HAT = complex(1.5, SQRT3 / 2)
OMEGA = cmath.exp(2j * math.pi / 3)

ORIGIN_FACE = (0, 1)


class Model(str, enum.Enum):
    DOMINO = "domino"
    LOZENGE = "lozenge"

    @classmethod
    def parse(cls, value) -> "Model":
        if isinstance(value, Model):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"unknown lattice model {value!r}") from None


class TorusParityWarning(UserWarning):
    """The torus size is outside the regime where the four-determinant count is asserted."""


class RegionError(ValueError):
    """A face set that is empty of structure, disconnected or has holes."""


class LatticeEdge(NamedTuple):
    black: tuple
    white: tuple

    @property
    def orientation(self) -> str:
        """'horizontal'/'vertical' for dominoes; for lozenges the edge class 0, 1 or 2."""
        if len(self.black) == 2:
            return "horizontal" if self.black[1] == self.white[1] else "vertical"
        a, b, _ = self.black
        c, d, _ = self.white
        return {(0, 0): "0", (-1, 0): "1", (0, -1): "2"}.get((c - a, d - b), "?")


def _model_of(v) -> Model:
    return Model.LOZENGE if len(v) == 3 else Model.DOMINO


def vertex_color(model, v) -> str:
    model = Model.parse(model)
    if model is Model.LOZENGE:
        if len(v) != 3 or v[2] not in (0, 1):
            raise ValueError(f"not a honeycomb vertex: {v!r}")
        return "black" if v[2] == 0 else "white"
    if len(v) != 2:
        raise ValueError(f"not a square-lattice vertex: {v!r}")
    return "black" if (v[0] + v[1]) % 2 == 0 else "white"


def is_black(v) -> bool:
    return vertex_color(_model_of(v), v) == "black"


def embed(v) -> complex:
    """Position of a vertex in the complex plane."""
    if len(v) == 3:
        return v[0] * X_HAT + v[1] * Y_HAT + v[2]
    return complex(v[0], v[1])


def neighbors(model, v) -> tuple:
    model = Model.parse(model)
    vertex_color(model, v)
    if model is Model.LOZENGE:
        a, b, t = v
        if t == 0:
            return ((a, b, 1), (a - 1, b, 1), (a, b - 1, 1))
        return ((a, b, 0), (a + 1, b, 0), (a, b + 1, 0))
    x, y = v
    return ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1))


def make_edge(u, v) -> LatticeEdge:
    """Order an adjacent pair as (black, white); raises if they are not adjacent."""
    model = _model_of(u)
    if v not in neighbors(model, u):
        raise ValueError(f"{u!r} and {v!r} are not adjacent")
    return LatticeEdge(u, v) if is_black(u) else LatticeEdge(v, u)


def translate(v, shift):
    if len(v) == 3:
        return (v[0] + shift[0], v[1] + shift[1], v[2])
    return (v[0] + shift[0], v[1] + shift[1])


# faces ---------------------------------------------------------------------

def face_vertices(model, face) -> tuple:
    model = Model.parse(model)
    a, b = face
    if model is Model.LOZENGE:
        return ((a, b, 0), (a - 1, b, 0), (a, b - 1, 0),
                (a - 1, b - 1, 1), (a, b - 1, 1), (a - 1, b, 1))
    return ((a, b), (a + 1, b), (a + 1, b + 1), (a, b + 1))


def face_edges(model, face) -> tuple:
    model = Model.parse(model)
    verts = face_vertices(model, face)
    blacks = [v for v in verts if is_black(v)]
    whites = {v for v in verts if not is_black(v)}
    return tuple(sorted(LatticeEdge(bl, w) for bl in blacks
                        for w in neighbors(model, bl) if w in whites))


def faces_of_edge(model, edge: LatticeEdge) -> tuple:
    """The two basic faces containing an edge."""
    model = Model.parse(model)
    if model is Model.LOZENGE:
        a, b, _ = edge.black
        c, d, _ = edge.white
        around_black = {(a, b), (a + 1, b), (a, b + 1)}
        around_white = {(c + 1, d + 1), (c, d + 1), (c + 1, d)}
        return tuple(sorted(around_black & around_white))
    (x0, y0), (x1, y1) = sorted((edge.black, edge.white))
    if y0 == y1:
        return ((x0, y0 - 1), (x0, y0))
    return ((x0 - 1, y0), (x0, y0))


def face_center(model, face) -> complex:
    model = Model.parse(model)
    if model is Model.LOZENGE:
        return face[0] * X_HAT + face[1] * Y_HAT - 1
    return complex(face[0] + 0.5, face[1] + 0.5)


def _face_step_sign(model, f, g) -> int:
    # +1 when g - f points along i, i*w or i*w^2 (w = e^{2 pi i/3})
    d = (face_center(model, g) - face_center(model, f)) / (1j * SQRT3)
    for k in range(3):
        if abs(d - OMEGA ** k) < 1e-9:
            return 1
        if abs(d + OMEGA ** k) < 1e-9:
            return -1
    raise ValueError(f"faces {f} and {g} are not adjacent")


# graphs --------------------------------------------------------------------

@dataclass(frozen=True)
class RegionGraph:
    """Finite bipartite piece of Z^2 or H, either a simply connected region or a torus.

    ``blacks`` and ``whites`` are sorted lexicographically; row/column
    indices of Kasteleyn matrices follow this order.  For tori ``seams``
    maps every edge that wraps around to a pair ``(wraps_x, wraps_y)``.
    """

    model: Model
    kind: str
    blacks: tuple
    whites: tuple
    edges: tuple
    faces: tuple = ()
    m: int | None = None
    n: int | None = None
    seams: dict = field(default_factory=dict, compare=False, hash=False)

    @property
    def vertices(self) -> tuple:
        return self.blacks + self.whites

    @property
    def balanced(self) -> bool:
        return len(self.blacks) == len(self.whites)

    @property
    def is_torus(self) -> bool:
        return self.kind == "torus"

    @property
    def black_index(self) -> dict:
        return {v: i for i, v in enumerate(self.blacks)}

    @property
    def white_index(self) -> dict:
        return {v: i for i, v in enumerate(self.whites)}

    @property
    def edge_set(self) -> frozenset:
        return frozenset(self.edges)

    def adjacency(self) -> dict:
        adj = {v: [] for v in self.vertices}
        for e in self.edges:
            adj[e.black].append(e.white)
            adj[e.white].append(e.black)
        return adj

    def degree(self, v) -> int:
        return sum(1 for e in self.edges if v in e)

    def normalize(self, v):
        """Reduce a vertex to the fundamental domain (identity for regions)."""
        if not self.is_torus:
            return v
        if self.model is Model.LOZENGE:
            return (v[0] % self.m, v[1] % self.n, v[2])
        return (v[0] % (2 * self.m), v[1] % (2 * self.n))

    def find_edge(self, u, v) -> LatticeEdge:
        u, v = self.normalize(tuple(u)), self.normalize(tuple(v))
        e = LatticeEdge(u, v) if is_black(u) else LatticeEdge(v, u)
        if e not in self.edge_set:
            raise ValueError(f"({u}, {v}) is not an edge of this graph")
        return e


def _torus_checks(model, m, n):
    if m < 2 or n < 2:
        raise ValueError(f"torus dimensions must be at least 2, got ({m}, {n})")
    if m % 2 or n % 2:
        warnings.warn(f"{model.value} torus ({m}, {n}): the four-determinant sign pattern "
                      "is only established for m, n both even", TorusParityWarning, stacklevel=3)
    elif model is Model.LOZENGE and (m % 3 == 0 or n % 3 == 0):
        warnings.warn(f"lozenge torus ({m}, {n}): a side divisible by 3 makes some "
                      "Kasteleyn determinants vanish", TorusParityWarning, stacklevel=3)


def build_torus(model, m: int, n: int) -> RegionGraph:
    """H_{m,n} (2mn vertices) or the 2m x 2n square torus (4mn vertices)."""
    model = Model.parse(model)
    _torus_checks(model, m, n)
    seams = {}
    edges = []
    if model is Model.LOZENGE:
        blacks = tuple((a, b, 0) for a in range(m) for b in range(n))
        whites = tuple((a, b, 1) for a in range(m) for b in range(n))
        for (a, b, _) in blacks:
            for (c, d, _) in neighbors(model, (a, b, 0)):
                w = (c % m, d % n, 1)
                e = LatticeEdge((a, b, 0), w)
                edges.append(e)
                if c != w[0] or d != w[1]:
                    seams[e] = (c != w[0], d != w[1])
    else:
        W, H = 2 * m, 2 * n
        cells = [(x, y) for x in range(W) for y in range(H)]
        blacks = tuple(v for v in cells if (v[0] + v[1]) % 2 == 0)
        whites = tuple(v for v in cells if (v[0] + v[1]) % 2 == 1)
        for (x, y) in blacks:
            for (c, d) in neighbors(model, (x, y)):
                w = (c % W, d % H)
                e = LatticeEdge((x, y), w)
                edges.append(e)
                if (c, d) != w:
                    seams[e] = (c != w[0], d != w[1])
    return RegionGraph(model, "torus", blacks, whites, tuple(sorted(edges)),
                       m=m, n=n, seams=seams)


def _face_neighbors(model, face) -> list:
    out = []
    for e in face_edges(model, face):
        out.extend(f for f in faces_of_edge(model, e) if f != face)
    return out


def euler_characteristic(model, faces) -> int:
    faces = set(faces)
    verts, edges = set(), set()
    for f in faces:
        verts.update(face_vertices(model, f))
        edges.update(face_edges(model, f))
    return len(verts) - len(edges) + len(faces)


def _check_simply_connected(model, faces):
    start = next(iter(faces))
    seen = {start}
    queue = deque([start])
    while queue:
        f = queue.popleft()
        for g in _face_neighbors(model, f):
            if g in faces and g not in seen:
                seen.add(g)
                queue.append(g)
    if len(seen) != len(faces):
        raise RegionError("face set is not connected through shared edges")
    chi = euler_characteristic(model, faces)
    if chi != 1:
        raise RegionError(f"face set has holes (Euler characteristic {chi})")


def build_region(model, faces: Iterable) -> RegionGraph:
    """1-skeleton of a simply connected union of basic faces."""
    model = Model.parse(model)
    faces = {tuple(f) for f in faces}
    if not faces:
        return RegionGraph(model, "region", (), (), ())
    _check_simply_connected(model, faces)
    edges = set()
    for f in faces:
        edges.update(face_edges(model, f))
    verts = {v for e in edges for v in e}
    blacks = tuple(sorted(v for v in verts if is_black(v)))
    whites = tuple(sorted(v for v in verts if not is_black(v)))
    return RegionGraph(model, "region", blacks, whites, tuple(sorted(edges)),
                       faces=tuple(sorted(faces)))


def rectangle_faces(width: int, height: int, origin=(0, 0)) -> list:
    """Unit squares of a width x height block (domino model)."""
    x0, y0 = origin
    return [(x0 + i, y0 + j) for i in range(width) for j in range(height)]


@dataclass(frozen=True)
class FaceAdjacency:
    """Interior and boundary faces of a region plus the edges separating them.

    ``crossings`` maps each region edge to ``(f, g, sign)``; for lozenges
    ``sign = +1`` means the step f -> g goes in a positive height direction.
    """

    interior: tuple
    boundary: tuple
    crossings: dict

    @property
    def faces(self) -> tuple:
        return self.interior + self.boundary

    def neighbors(self, face) -> list:
        out = []
        for e, (f, g, _) in self.crossings.items():
            if f == face:
                out.append((g, e))
            elif g == face:
                out.append((f, e))
        return out


def faces_and_adjacency(region: RegionGraph) -> FaceAdjacency:
    if region.is_torus:
        raise ValueError("face adjacency is only defined for simply connected regions")
    model = region.model
    crossings = {}
    touched = set()
    for e in region.edges:
        f, g = faces_of_edge(model, e)
        touched.update((f, g))
        if model is Model.LOZENGE:
            if _face_step_sign(model, f, g) < 0:
                f, g = g, f
            crossings[e] = (f, g, 1)
        else:
            crossings[e] = (f, g, 0)
    interior = tuple(sorted(region.faces))
    boundary = tuple(sorted(touched - set(interior)))
    return FaceAdjacency(interior, boundary, crossings)


def random_region(model, n_faces: int, rng, max_vertices: int | None = None,
                  balanced: bool = True, attempts: int = 1000) -> RegionGraph:
    """Grow a random simply connected region by face accretion.

    ``rng`` is a ``random.Random``.  Candidate faces that would close a hole
    are skipped.  With ``balanced`` the result has equal colour classes.
    """
    model = Model.parse(model)
    for _ in range(attempts):
        faces = {ORIGIN_FACE if model is Model.LOZENGE else (0, 0)}
        while len(faces) < n_faces:
            frontier = sorted({g for f in faces for g in _face_neighbors(model, f)} - faces)
            rng.shuffle(frontier)
            for g in frontier:
                if euler_characteristic(model, faces | {g}) == 1:
                    faces.add(g)
                    break
            else:
                break
        region = build_region(model, faces)
        if max_vertices is not None and len(region.vertices) > max_vertices:
            continue
        if balanced and not region.balanced:
            continue
        return region
    raise RegionError("could not grow a region with the requested properties")
