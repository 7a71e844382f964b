"""Height fluctuations along a lozenge column.

The number r_n of vertical lozenges crossed by a column of length n is a
sum of dependent Bernoulli variables with determinantal law; the height
change is n - 3 r_n.
"""

import math

from dimerstats.heightstats import edge_count_distribution, height_variance

print("law of r_n for n = 4")
for k, b in enumerate(edge_count_distribution(4)):
    print(f"  P(r_4 = {k}) = {str(b):<40} {float(b):.6f}")

print("\nvariance of the height change")
for n in (1, 2, 5, 10, 100, 1000, 10000):
    hv = height_variance(n)
    excess = hv.variance_h - 9 * math.log(n) / math.pi ** 2
    print(f"  n={n:>5}: var = {hv.variance_h:9.5f}   var - 9 ln(n)/pi^2 = {excess:+.5f}")
