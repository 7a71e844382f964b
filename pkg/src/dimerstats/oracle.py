"""Brute-force perfect matching enumeration, the ground truth for everything else."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .geometry import RegionGraph

DEFAULT_CAP = 36


class EnumerationCapError(ValueError):
    pass


class NoMatchingsError(ValueError):
    """The graph has no perfect matching, so probabilities are undefined."""


@dataclass(frozen=True)
class MatchingSet:
    graph: RegionGraph
    matchings: tuple

    def __len__(self):
        return len(self.matchings)

    def containing(self, edges) -> int:
        edges = frozenset(edges)
        return sum(1 for mt in self.matchings if edges <= mt)


def enumerate_matchings(graph: RegionGraph, cap: int | None = DEFAULT_CAP) -> MatchingSet:
    """All perfect matchings, branching on the lowest-indexed uncovered vertex."""
    verts = graph.vertices
    if cap is not None and len(verts) > cap:
        raise EnumerationCapError(
            f"graph has {len(verts)} vertices, above the enumeration cap of {cap}")
    if not graph.balanced:
        return MatchingSet(graph, ())
    order = {v: i for i, v in enumerate(verts)}
    incident = {v: [] for v in verts}
    for e in graph.edges:
        incident[e.black].append(e)
        incident[e.white].append(e)
    for v in verts:
        incident[v].sort(key=lambda e: (order[e.black], order[e.white]))

    found = []
    covered = set()
    chosen = []

    def extend(start):
        i = start
        while i < len(verts) and verts[i] in covered:
            i += 1
        if i == len(verts):
            found.append(frozenset(chosen))
            return
        v = verts[i]
        for e in incident[v]:
            u = e.white if e.black == v else e.black
            if u in covered:
                continue
            covered.update((v, u))
            chosen.append(e)
            extend(i + 1)
            chosen.pop()
            covered.difference_update((v, u))

    if verts:
        extend(0)
    else:
        found.append(frozenset())
    return MatchingSet(graph, tuple(found))


def oracle_probability(graph: RegionGraph, event, cap: int | None = DEFAULT_CAP,
                       matchings: MatchingSet | None = None) -> Fraction:
    """Fraction of perfect matchings containing every edge of the event."""
    edges = getattr(event, "edges", event)
    edges = [graph.find_edge(e.black, e.white) for e in edges]
    if len({v for e in edges for v in e}) != 2 * len(edges):
        raise ValueError("event edges are not pairwise disjoint")
    ms = matchings if matchings is not None else enumerate_matchings(graph, cap)
    if not ms.matchings:
        raise NoMatchingsError("graph has no perfect matchings")
    return Fraction(ms.containing(edges), len(ms.matchings))
