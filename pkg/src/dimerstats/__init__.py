"""Exact statistics of random lozenge and domino tilings.

Counting by Kasteleyn determinants, the coupling function of the infinite
lattices, probabilities of finite edge events in the plane, in regions and
on tori, and the height variance of lozenge tilings.
"""

from .coupling import (ConvergenceError, CouplingTable, coupling_numeric, domino_coupling,
                       domino_diagonal, lozenge_boundary, lozenge_coupling, torus_coupling)
from .cylinder import (CylinderEvent, Method, ProbabilityResult, correlation, event_distance,
                       plane_probability, region_probability, torus_probability)
from .exactfield import GaussianRational, SymbolicValue, format_symbolic, parse_symbolic, sym_eval
from .geometry import (LatticeEdge, Model, RegionError, RegionGraph, build_region, build_torus,
                       random_region, rectangle_faces)
from .heightstats import (edge_count_distribution, expected_cycles, height_field, height_variance,
                          moment_matrix, variance_from_distribution)
from .kasteleyn import (count_region, count_torus, entropy_limit, entropy_per_site,
                        kasteleyn_matrix)
from .oracle import EnumerationCapError, NoMatchingsError, enumerate_matchings, oracle_probability

__version__ = "0.1.0"
