"""Exact probabilities of small tile patterns in the infinite plane.

Each event is a set of edges; its probability is a small determinant of
coupling values, returned as an exact expression in tau = sqrt(3)/(2 pi)
(lozenges) or 1/pi (dominoes).
"""

from dimerstats.cylinder import CylinderEvent, correlation, plane_probability
from dimerstats.geometry import Model

LOZ, DOM = Model.LOZENGE, Model.DOMINO


def loz(a, b):
    return ((a, b, 0), (a, b, 1))


def show(label, event):
    res = plane_probability(event)
    print(f"{label:<32} {str(res.exact):<26} {res.numeric:.6f}")


print("lozenges")
show("one edge", CylinderEvent(LOZ, (loz(0, 0),)))
show("two parallel edges", CylinderEvent(LOZ, (loz(0, 0), loz(0, 1))))
show("three edges around a hexagon",
     CylinderEvent(LOZ, (loz(0, 0), ((0, 1, 0), (-1, 1, 1)), ((-1, 1, 0), (-1, 0, 1)))))
show("column of 4 at spacing (-3, 3)", CylinderEvent(LOZ, tuple(loz(-3 * j, 3 * j) for j in range(4))))

print("\ndominoes")
show("one horizontal edge", CylinderEvent(DOM, (((0, 0), (1, 0)),)))
show("stacked pair", CylinderEvent(DOM, (((0, 0), (1, 0)), ((0, 1), (1, 1)))))
show("perpendicular pair", CylinderEvent(DOM, (((0, 0), (1, 0)), ((0, 1), (0, 2)))))

print("\ncorrelation of two lozenge edges at offset (-n, n)")
base = CylinderEvent(LOZ, (loz(0, 0),))
for n in range(1, 8):
    c = correlation(base, base, (-n, n))
    print(f"n={n}  joint-product = {str(c.difference):<14} n^2*diff = {n * n * float(c.difference):+.5f}")
