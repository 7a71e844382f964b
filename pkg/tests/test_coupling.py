import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import TAU, numpy_inverse_entry
from dimerstats.coupling import (_LOZ, ConvergenceError, CouplingTable, c_sign, coupling_numeric,
                                 domino_coupling, domino_diagonal, lozenge_boundary,
                                 lozenge_coupling, lozenge_orbit, torus_coupling)
from dimerstats.exactfield import I, SymbolicValue
from dimerstats.geometry import Model, build_torus
from dimerstats.kasteleyn import kasteleyn_matrix

LOZ, DOM = Model.LOZENGE, Model.DOMINO
T = SymbolicValue.tau()
IP = SymbolicValue.inv_pi()


def loz(c0=0, c1=0):
    return SymbolicValue(LOZ, {0: Fraction(c0), 1: Fraction(c1)})


def dom(c0=0, c1=0):
    return SymbolicValue(DOM, {0: c0, 1: c1})


# lozenge ---------------------------------------------------------------------------

def test_boundary_values():
    assert lozenge_boundary(1) == -T
    assert lozenge_boundary(2) == T * Fraction(1, 2)
    assert lozenge_boundary(3).is_zero()
    assert lozenge_boundary(4) == T * Fraction(-1, 4)
    assert [c_sign(y) for y in (0, -1, 1, 2, 3)] == [0, 1, -1, 1, 0]
    with pytest.raises(ValueError):
        lozenge_boundary(0)


def test_lozenge_examples():
    assert lozenge_coupling(0, 0) == loz(Fraction(1, 3))
    assert lozenge_coupling(-1, 1) == -T
    assert lozenge_coupling(0, 1) == loz(Fraction(-1, 3), 1)
    assert lozenge_coupling(0, -1) == loz(Fraction(1, 3))
    assert lozenge_coupling(-3, 3).is_zero()
    for k in range(1, 8):
        assert lozenge_coupling(-3 * k, 3 * k).is_zero()
        assert lozenge_coupling(-1, -3 * k).is_zero()


@given(st.integers(-15, 15))
def test_boundary_line_is_the_formula(y):
    if y:
        assert lozenge_coupling(-1, y) == lozenge_boundary(y)
    else:
        assert lozenge_coupling(-1, 0) == loz(Fraction(1, 3))


def test_half_plane_values_respect_symmetry():
    # the stored half-plane is filled by recursion alone; orbit images that
    # land in it must carry equal values
    for x in range(-12, 0):
        for y in range(-12, 13):
            v = _LOZ.get(x, y)
            for a, b in lozenge_orbit(x, y):
                if a <= -1:
                    assert _LOZ.get(a, b) == v, (x, y, a, b)


def test_lozenge_window_symmetry_and_kernel():
    tab = CouplingTable(LOZ, 20)
    assert tab.symmetry_violations() == []
    assert tab.kernel_violations() == []
    assert tab.kernel_sum(0, 0) == 1


def test_decay_bound():
    tab = CouplingTable(LOZ, 30)
    ratios = [abs(float(v)) * (abs(x) + abs(y)) for (x, y), v in tab.values.items()
              if (x, y) != (0, 0)]
    assert max(ratios) < 1.0


def test_lozenge_values_are_degree_at_most_one_in_tau():
    tab = CouplingTable(LOZ, 10)
    assert all(v.degree <= 1 for v in tab.values.values())


# domino ----------------------------------------------------------------------------

def test_domino_diagonal():
    assert domino_diagonal(1) == dom(Fraction(-1, 4), 1)
    assert domino_diagonal(2) == dom(Fraction(1, 4), Fraction(-2, 3))
    assert domino_diagonal(3) == dom(Fraction(-1, 4), Fraction(13, 15))
    with pytest.raises(ValueError):
        domino_diagonal(0)


def test_domino_examples():
    assert domino_coupling(1, 0) == dom(Fraction(1, 4))
    assert domino_coupling(0, 1) == dom(GaussianI(Fraction(-1, 4)))
    assert domino_coupling(1, 2) == dom(Fraction(1, 4), -1)
    assert domino_coupling(2, 1) == dom(GaussianI(Fraction(-1, 4)), GaussianI(1))
    assert domino_coupling(3, 2) == domino_diagonal(1)
    assert domino_coupling(2, 2).is_zero()


def GaussianI(c):
    return I * c


def test_odd_diagonal_relation():
    for x in range(1, 8):
        assert domino_coupling(2 * x, 2 * x - 1) == domino_coupling(2 * x + 1, 2 * x) * I


def test_domino_window_symmetry_and_kernel():
    tab = CouplingTable(DOM, 16)
    assert tab.symmetry_violations() == []
    assert tab.kernel_violations() == []
    assert tab.kernel_sum(0, 0) == 1


# numeric cross-checks ---------------------------------------------------------------

@pytest.mark.parametrize("model,x,y,expected", [
    (LOZ, 0, 0, 1 / 3),
    (LOZ, -1, 1, -TAU),
    (DOM, 1, 0, 0.25),
])
def test_numeric_examples(model, x, y, expected):
    assert abs(coupling_numeric(model, x, y, 1e-6) - expected) < 1e-6


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([LOZ, DOM]), st.integers(-5, 5), st.integers(-5, 5))
def test_numeric_matches_exact(model, x, y):
    exact = complex(lozenge_coupling(x, y) if model is LOZ else domino_coupling(x, y))
    assert abs(coupling_numeric(model, x, y, 1e-8) - exact) < 1e-7


@pytest.mark.parametrize("model,x,y", [(LOZ, 0, 1), (LOZ, 2, -3), (DOM, 2, 1), (DOM, 0, 3)])
def test_excised_rule_matches_exact(model, x, y):
    exact = complex(lozenge_coupling(x, y) if model is LOZ else domino_coupling(x, y))
    assert abs(coupling_numeric(model, x, y, 1e-5, method="excised") - exact) < 1e-5


def test_numeric_errors(monkeypatch):
    with pytest.raises(ValueError):
        coupling_numeric(LOZ, 0, 0, 0)
    with pytest.raises(ValueError):
        coupling_numeric(LOZ, 0, 0, 1e-6, method="montecarlo")
    import dimerstats.coupling as cp
    monkeypatch.setattr(cp, "_iterated", lambda model, x, y, tol: (0.3, 2e-3))
    with pytest.raises(ConvergenceError) as info:
        coupling_numeric(LOZ, 0, 0, 1e-6)
    assert info.value.achieved == 2e-3
    assert "2e-03" in str(info.value) or "0.002" in str(info.value)


# finite tori -------------------------------------------------------------------------

@pytest.mark.parametrize("model,m,n", [(LOZ, 2, 2), (LOZ, 4, 4), (LOZ, 4, 2), (DOM, 2, 2)])
def test_torus_sums_match_dense_inverse(model, m, n):
    Tg = build_torus(model, m, n)
    origin = (0, 0, 0) if model is LOZ else (0, 0)
    for j in (1, 2, 3, 4):
        km = kasteleyn_matrix(Tg, j)
        if abs(np.linalg.det(km.to_numpy())) < 1e-9:
            with pytest.raises(ValueError):
                torus_coupling(model, m, n, j, 1, 0)
            continue
        for w in km.cols:
            got = torus_coupling(model, m, n, j, w[0], w[1])
            assert abs(got - numpy_inverse_entry(km, w, origin)) < 1e-12


def test_small_torus_sum_by_hand():
    # four angle pairs: theta, phi in {0, pi}
    total = sum(1 / (1 + np.exp(-1j * a) + np.exp(-1j * b)) for a in (0, np.pi) for b in (0, np.pi))
    assert abs(torus_coupling(LOZ, 2, 2, 1, 0, 0) - total / 4) < 1e-15


def test_torus_sums_approach_plane():
    sizes = (4, 8, 16, 32, 64, 128)
    errs = []
    for size in sizes:
        vals = [torus_coupling(LOZ, size, size, j, 0, 0) for j in (1, 2, 3, 4)]
        errs.append(max(abs(v - 1 / 3) for v in vals))
    # the worst variant is off by about 0.78 / n
    assert all(b < a for a, b in zip(errs[1:], errs[2:]))
    assert all(e * n < 1.0 for e, n in zip(errs, sizes))
    assert errs[-1] < 1e-2
    vals = [torus_coupling(LOZ, 32, 32, j, 0, 0) for j in (1, 2, 3, 4)]
    assert max(abs(a - b) for a in vals for b in vals) < 0.05
    assert abs(torus_coupling(LOZ, 32, 32, 1, 0, 0) - 1 / 3) < 0.02


def test_domino_torus_sums_approach_plane():
    for x, y in [(1, 0), (0, 1), (2, 1)]:
        target = complex(domino_coupling(x, y))
        vals = [torus_coupling(DOM, 32, 32, j, x, y) for j in (2, 3, 4)]
        assert max(abs(v - target) for v in vals) < 1e-2
