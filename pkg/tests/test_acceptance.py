"""Acceptance suite: one test per criterion, each reporting a PASS/FAIL line."""

import itertools
import math
import random
import time
from fractions import Fraction

import pytest

from dimerstats.coupling import CouplingTable, coupling, coupling_numeric, torus_coupling
from dimerstats.cylinder import (CylinderEvent, horizontal_pair_difference, lift_edge,
                                 plane_probability, region_probability, torus_probability)
from dimerstats.exactfield import SymbolicValue
from dimerstats.geometry import Model, build_torus, random_region
from dimerstats.heightstats import edge_count_distribution, height_variance, variance_from_distribution
from dimerstats.kasteleyn import count_region, count_torus, entropy_limit, entropy_per_site
from dimerstats.oracle import enumerate_matchings, oracle_probability

LOZ, DOM = Model.LOZENGE, Model.DOMINO
T = SymbolicValue.tau()
IP = SymbolicValue.inv_pi()

_LINES = []


@pytest.fixture(scope="module", autouse=True)
def report(request):
    yield
    tr = request.config.pluginmanager.get_plugin("terminalreporter")
    if tr is not None:
        tr.write_line("")
    for line in sorted(_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
        if tr is not None:
            tr.write_line(line)


def verdict(n, ok, detail):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} ({detail})"
    _LINES.append(line)
    print(line)
    assert ok, line


def const(model, q):
    return SymbolicValue.const(model, Fraction(q))


def loz_edge(a, b):
    return ((a, b, 0), (a, b, 1))


def test_criterion_1_single_edge():
    t0 = time.perf_counter()
    res = plane_probability(CylinderEvent(LOZ, (loz_edge(0, 0),)))
    dt = time.perf_counter() - t0
    verdict(1, res.exact == const(LOZ, Fraction(1, 3)) and dt < 1,
            f"exact {res.exact}, {dt:.3f}s")


def test_criterion_2_two_parallel_edges():
    res = plane_probability(CylinderEvent(LOZ, (loz_edge(0, 0), loz_edge(0, 1))))
    want = const(LOZ, Fraction(2, 9)) - T * Fraction(1, 3)
    verdict(2, res.exact == want and abs(res.numeric - 0.13029) <= 1e-4,
            f"exact {res.exact}, numeric {res.numeric:.6f}")


def test_criterion_3_hexagon():
    hexagon = (loz_edge(0, 0), ((0, 1, 0), (-1, 1, 1)), ((-1, 1, 0), (-1, 0, 1)))
    res = plane_probability(CylinderEvent(LOZ, hexagon))
    want = SymbolicValue(LOZ, {0: Fraction(2, 27), 1: Fraction(1, 3), 3: -1})
    closed = 2 / 27 + math.sqrt(3) / (6 * math.pi) - 3 * math.sqrt(3) / (8 * math.pi ** 3)
    ok = res.exact == want and abs(res.numeric - closed) < 1e-14 and abs(res.numeric - 0.1449) <= 1e-3
    verdict(3, ok, f"exact {res.exact}, numeric {res.numeric:.6f}")


def test_criterion_4_domino_pairs():
    stacked = plane_probability(CylinderEvent(DOM, (((0, 0), (1, 0)), ((0, 1), (1, 1)))))
    perp = plane_probability(CylinderEvent(DOM, (((0, 0), (1, 0)), ((0, 1), (0, 2)))))
    ok = stacked.exact == const(DOM, Fraction(1, 8)) and perp.exact == IP * Fraction(1, 4)
    verdict(4, ok, f"stacked {stacked.exact}, perpendicular {perp.exact}")


def test_criterion_5_independent_column():
    got = []
    for k in range(1, 7):
        edges = tuple(loz_edge(-3 * j, 3 * j) for j in range(k))
        got.append(plane_probability(CylinderEvent(LOZ, edges)).exact == const(LOZ, Fraction(1, 3 ** k)))
    verdict(5, all(got), f"k = 1..6 equal (1/3)^k: {got}")


def _region_checks(region, ms):
    bad = 0
    edges = list(region.edges)
    events = [(e,) for e in edges]
    events += [(a, b) for a, b in itertools.combinations(edges, 2) if not set(a) & set(b)]
    for ev in events:
        want = oracle_probability(region, ev, matchings=ms)
        if region_probability(region, CylinderEvent(region.model, ev)).exact != want:
            bad += 1
    return bad, len(events)


def _torus_checks(model, m, n, ms, Tg):
    bad = 0
    edges = list(Tg.edges)
    events = [(e,) for e in edges]
    events += [(a, b) for a, b in itertools.combinations(edges, 2) if not set(a) & set(b)]
    for ev in events:
        want = oracle_probability(Tg, ev, matchings=ms)
        lifted = CylinderEvent(model, tuple(lift_edge(Tg, e) for e in ev))
        if torus_probability(model, m, n, lifted).exact != want:
            bad += 1
    return bad, len(events)


def test_criterion_6_oracle_equivalence():
    t0 = time.perf_counter()
    rng = random.Random(2024)
    bad_counts = bad_events = n_events = regions = 0
    while regions < 24:
        model = (LOZ, DOM)[regions % 2]
        R = random_region(model, rng.randint(2, 6 if model is LOZ else 9), rng, max_vertices=24)
        ms = enumerate_matchings(R, cap=None)
        if count_region(R) != len(ms):
            bad_counts += 1
        regions += 1
        if len(ms) == 0:
            continue
        b, k = _region_checks(R, ms)
        bad_events += b
        n_events += k
    tori = [(LOZ, 2, 2), (LOZ, 2, 4), (LOZ, 4, 4), (DOM, 2, 2)]
    for model, m, n in tori:
        Tg = build_torus(model, m, n)
        ms = enumerate_matchings(Tg, cap=None)
        if count_torus(model, m, n) != len(ms):
            bad_counts += 1
        b, k = _torus_checks(model, m, n, ms, Tg)
        bad_events += b
        n_events += k
    dt = time.perf_counter() - t0
    ok = bad_counts == 0 and bad_events == 0 and dt < 60
    verdict(6, ok, f"{regions} regions + {len(tori)} tori, {n_events} events, "
                   f"{bad_counts} count and {bad_events} event mismatches, {dt:.1f}s")


def test_criterion_7_coupling_consistency():
    worst = 0.0
    for model in (LOZ, DOM):
        for x in range(-6, 7):
            for y in range(-6, 7):
                exact = complex(coupling(model, x, y))
                worst = max(worst, abs(coupling_numeric(model, x, y, tol=1e-6) - exact))
    tab = CouplingTable(LOZ, 20)
    sym = tab.symmetry_violations()
    ker = tab.kernel_violations()
    ok = worst <= 1e-5 and not sym and not ker and tab.kernel_sum(0, 0) == 1
    verdict(7, ok, f"max |exact - numeric| {worst:.2e}, 41x41 window: "
                   f"{len(sym)} symmetry and {len(ker)} kernel violations")


def test_criterion_8_torus_convergence():
    vals = [torus_coupling(LOZ, 64, 64, j, 0, 0) for j in (1, 2, 3, 4)]
    err = max(abs(v - 1 / 3) for v in vals)
    spread = max(abs(a - b) for a in vals for b in vals)
    verdict(8, err <= 1e-2 and spread <= 2e-2,
            f"max |P^(j) - 1/3| {err:.5f}, spread {spread:.5f}")


def test_criterion_9_correlation_decay():
    bad = []
    worst = 0.0
    for n in range(1, 101):
        d = horizontal_pair_difference(n)
        p = coupling(LOZ, -n, n)
        want = SymbolicValue.zero(LOZ) if n % 3 == 0 else T * T * Fraction(-1, n * n)
        if d != -(p * p) or d != want:
            bad.append(n)
        if n % 3 and abs(float(d) + 3 / (4 * math.pi ** 2 * n * n)) > 1e-15:
            bad.append(n)
        worst = max(worst, n * n * abs(float(d)))
    verdict(9, not bad and worst <= 0.08, f"max n^2 |difference| {worst:.6f}, mismatches {bad}")


def test_criterion_10_height_variance():
    v1 = height_variance(1)
    agree = all(variance_from_distribution(edge_count_distribution(n)) == height_variance(n).exact_r
                for n in range(1, 13))
    t0 = time.perf_counter()
    excess = {}
    for n in (10 ** 2, 10 ** 3, 10 ** 4):
        excess[n] = height_variance(n).variance_h - 9 * math.log(n) / math.pi ** 2
    dt = time.perf_counter() - t0
    width = max(excess.values()) - min(excess.values())
    ok = v1.exact_h == const(LOZ, 2) and agree and width <= 2 and dt < 120
    verdict(10, ok, f"var h_1 = {v1.exact_h}, exact agreement n<=12 {agree}, "
                    f"excess {[round(e, 4) for e in excess.values()]}, {dt:.1f}s")


def test_criterion_11_entropy():
    sizes = (4, 8, 16)
    ent = [entropy_per_site(LOZ, s, s) for s in sizes]
    limit = entropy_limit(LOZ)
    increasing = all(b > a for a, b in zip(ent, ent[1:]))
    gap = abs(ent[-1] - limit)
    verdict(11, increasing and gap < 5e-2,
            f"entropies {[round(e, 5) for e in ent]}, limit {limit:.5f}, final gap {gap:.5f}")
