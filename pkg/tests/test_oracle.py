import random
from fractions import Fraction

import pytest

from conftest import permanent_count, permanent_probability
from dimerstats.cylinder import CylinderEvent, torus_probability
from dimerstats.geometry import (ORIGIN_FACE, Model, build_region, build_torus, random_region,
                                 rectangle_faces)
from dimerstats.kasteleyn import count_torus
from dimerstats.oracle import (DEFAULT_CAP, EnumerationCapError, NoMatchingsError,
                               enumerate_matchings, oracle_probability)

LOZ, DOM = Model.LOZENGE, Model.DOMINO


def _is_perfect(graph, matching):
    covered = [v for e in matching for v in e]
    return sorted(covered) == sorted(graph.vertices) and all(e in graph.edge_set for e in matching)


def test_hexagon():
    R = build_region(LOZ, [ORIGIN_FACE])
    ms = enumerate_matchings(R)
    assert len(ms) == 2
    e = R.edges[0]
    assert oracle_probability(R, [e]) == Fraction(1, 2)


def test_unbalanced_region_has_no_matchings():
    R = build_region(DOM, rectangle_faces(2, 2))
    assert len(enumerate_matchings(R)) == 0
    with pytest.raises(NoMatchingsError):
        oracle_probability(R, [])


def test_small_torus_matches_count():
    Tg = build_torus(LOZ, 2, 2)
    assert len(enumerate_matchings(Tg)) == count_torus(LOZ, 2, 2)


def test_torus_4_2_single_edge():
    Tg = build_torus(LOZ, 4, 2)
    e = Tg.find_edge((0, 0, 0), (0, 0, 1))
    want = oracle_probability(Tg, [e])
    assert torus_probability(LOZ, 4, 2, CylinderEvent(LOZ, (e,))).exact == want


def test_cap():
    Tg = build_torus(LOZ, 4, 6)
    assert len(Tg.vertices) > DEFAULT_CAP
    with pytest.raises(EnumerationCapError):
        enumerate_matchings(Tg)
    small = build_torus(LOZ, 2, 2)
    with pytest.raises(EnumerationCapError):
        enumerate_matchings(small, cap=4)


def test_empty_graph():
    R = build_region(LOZ, [])
    assert len(enumerate_matchings(R)) == 1


@pytest.mark.parametrize("seed", range(8))
def test_matchings_are_perfect_distinct_and_complete(seed):
    rng = random.Random(seed)
    model = (LOZ, DOM)[seed % 2]
    R = random_region(model, rng.randint(1, 7), rng, max_vertices=24)
    ms = enumerate_matchings(R)
    assert len(set(ms.matchings)) == len(ms)
    assert all(_is_perfect(R, m) for m in ms.matchings)
    assert len(ms) == permanent_count(R)
    e = R.edges[rng.randrange(len(R.edges))]
    assert oracle_probability(R, [e], matchings=ms) == permanent_probability(R, [e])


def test_accepts_events():
    R = build_region(LOZ, [ORIGIN_FACE])
    e = R.edges[0]
    assert oracle_probability(R, CylinderEvent(LOZ, (e,))) == Fraction(1, 2)


def test_adjacent_edges_rejected():
    R = build_region(LOZ, [ORIGIN_FACE])
    b = R.blacks[0]
    a, c = [e for e in R.edges if e.black == b]
    with pytest.raises(ValueError):
        oracle_probability(R, [a, c])
    with pytest.raises(ValueError):
        CylinderEvent(LOZ, (a, c))
