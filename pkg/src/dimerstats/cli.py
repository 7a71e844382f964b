"""Command line entry point: ``dimerstats <command> [options]``.

Exit codes: 0 success, 1 usage error, 2 computation error, 3 oracle mismatch.
"""

from __future__ import annotations

import argparse
import random
import sys
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

from .coupling import CouplingTable, coupling_numeric
from .cylinder import (CylinderEvent, ProbabilityResult, correlation, oracle_result,
                       plane_probability, region_probability, torus_probability)
from .formats import InputError, Table, error_record, load_event, load_region
from .geometry import (ORIGIN_FACE, Model, TorusParityWarning, build_region, build_torus,
                       random_region, rectangle_faces)
from .heightstats import edge_count_distribution, height_variance
from .kasteleyn import count_region, count_torus, entropy_limit, entropy_per_site
from .oracle import DEFAULT_CAP, enumerate_matchings

EXIT_OK, EXIT_USAGE, EXIT_COMPUTE, EXIT_MISMATCH = 0, 1, 2, 3
DEFAULT_SEED = 20240101


class UsageError(Exception):
    pass


class OracleMismatch(Exception):
    def __init__(self, table):
        super().__init__("oracle and formula disagree")
        self.table = table


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class RunConfig:
    command: str
    model: Model | None = None
    fmt: str = "human"
    tol: float = 1e-8
    seed: int = DEFAULT_SEED
    verify_oracle: bool = False
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.tol > 0:
            raise UsageError("--tol must be positive")


# geometry selection --------------------------------------------------------------------

def _add_geometry(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--torus", nargs=2, type=int, metavar=("M", "N"))
    g.add_argument("--faces", metavar="FILE", help="JSON list of faces (or {'faces': [...]})")
    g.add_argument("--rect", nargs=2, type=int, metavar=("W", "H"), help="domino W x H block of squares")
    g.add_argument("--hexagon", action="store_true", help="a single lozenge hexagon")


def _geometry(cfg):
    o = cfg.options
    model = cfg.model
    if o.get("torus"):
        if model is None:
            raise UsageError("--torus needs --model")
        return "torus", tuple(o["torus"])
    if o.get("faces"):
        return "region", load_region(o["faces"], model)
    if o.get("rect"):
        if model is not Model.DOMINO:
            raise UsageError("--rect is a domino geometry")
        w, h = o["rect"]
        return "region", build_region(model, rectangle_faces(w, h))
    if o.get("hexagon"):
        if model is not Model.LOZENGE:
            raise UsageError("--hexagon is a lozenge geometry")
        return "region", build_region(model, [ORIGIN_FACE])
    return None, None


def _describe(kind, geo):
    if kind == "torus":
        return f"torus {geo[0]}x{geo[1]}"
    return f"region ({len(geo.faces)} faces)"


# commands ---------------------------------------------------------------------------------

def cmd_count(cfg):
    kind, geo = _geometry(cfg)
    if kind is None:
        raise UsageError("count needs --torus, --faces, --rect or --hexagon")
    t = Table("count", ["model", "geometry", "vertices", "count", "method"])
    if kind == "torus":
        m, n = geo
        graph = build_torus(cfg.model, m, n)
        t.add(model=cfg.model, geometry=_describe(kind, geo), vertices=len(graph.vertices),
              count=str(count_torus(cfg.model, m, n)), method="kasteleyn")
    else:
        t.add(model=geo.model, geometry=_describe(kind, geo), vertices=len(geo.vertices),
              count=str(count_region(geo)), method="kasteleyn")
    return t


def cmd_entropy(cfg):
    model = cfg.model or Model.LOZENGE
    sizes = cfg.options["sizes"]
    limit = entropy_limit(model)
    t = Table("entropy", ["m", "n", "count", "entropy_per_site", "limit", "gap"])
    for s in sizes:
        m, n = (s, s)
        h = entropy_per_site(model, m, n)
        t.add(m=m, n=n, count=str(count_torus(model, m, n)), entropy_per_site=h,
              limit=limit, gap=h - limit)
    t.meta["model"] = model
    return t


def cmd_couple(cfg):
    model = cfg.model or Model.LOZENGE
    r = cfg.options["window"]
    cols = ["x", "y", "exact", "numeric"]
    if cfg.options["quadrature"]:
        cols += ["quadrature", "abs_diff"]
    t = Table("couple", cols)
    table = CouplingTable(model, r)
    for x, y, v, z in table.rows():
        row = dict(x=x, y=y, exact=v, numeric=_real_or_complex(z))
        if cfg.options["quadrature"]:
            q = coupling_numeric(model, x, y, tol=cfg.tol)
            row.update(quadrature=_real_or_complex(q), abs_diff=abs(q - z))
        t.add(**row)
    t.meta["model"] = model
    return t


def _real_or_complex(z):
    z = complex(z)
    return z.real if z.imag == 0 else z


def _probability(loaded, cfg):
    if loaded.torus is not None:
        m, n = loaded.torus
        return torus_probability(loaded.event.model, m, n, loaded.event)
    if loaded.region is not None:
        return region_probability(loaded.region, loaded.event)
    return plane_probability(loaded.event)


def _event_spec(cfg):
    path = cfg.options.get("edges")
    if not path:
        raise UsageError("--edges FILE is required")
    loaded = load_event(path, cfg.model)
    kind, geo = _geometry(_with_model(cfg, loaded.event.model))
    if kind == "torus":
        loaded = type(loaded)(loaded.event, None, geo)
    elif kind == "region":
        loaded = type(loaded)(loaded.event, geo, None)
    return loaded


def _with_model(cfg, model):
    if cfg.model is None:
        cfg.model = model
    return cfg


def _oracle_for(loaded, cfg) -> ProbabilityResult:
    if loaded.torus is not None:
        graph = build_torus(loaded.event.model, *loaded.torus)
        edges = [graph.find_edge(e.black, e.white) for e in loaded.event.edges]
        return oracle_result(graph, edges, cap=cfg.options.get("cap", DEFAULT_CAP))
    if loaded.region is not None:
        return oracle_result(loaded.region, loaded.event, cap=cfg.options.get("cap", DEFAULT_CAP))
    raise UsageError("--verify-oracle needs a finite region or torus")


def cmd_prob(cfg):
    loaded = _event_spec(cfg)
    cols = ["model", "edges", "exact", "numeric", "method"]
    if cfg.verify_oracle:
        cols += ["oracle", "match"]
    t = Table("prob", cols)
    res = _probability(loaded, cfg)
    row = dict(model=loaded.event.model, edges=len(loaded.event), exact=res.exact,
               numeric=res.numeric, method=res.method.value)
    if cfg.verify_oracle:
        orc = _oracle_for(loaded, cfg)
        ok = res.exact == orc.exact
        row.update(oracle=orc.exact, match=ok)
        t.add(**row)
        if not ok:
            raise OracleMismatch(t)
        return t
    t.add(**row)
    return t


def cmd_correlate(cfg):
    loaded = _event_spec(cfg)
    e1 = loaded.event
    e2 = load_event(cfg.options["edges2"], e1.model).event if cfg.options.get("edges2") else e1
    dx, dy = cfg.options["shift"] or ((-1, 1) if e1.model is Model.LOZENGE else (2, 0))
    t = Table("correlate", ["n", "shift_x", "shift_y", "distance", "joint", "product", "difference",
                            "difference_numeric", "scaled"])
    for n in range(cfg.options["n_min"], cfg.options["n_max"] + 1):
        c = correlation(e1, e2, (n * dx, n * dy))
        d = float(c.difference)
        t.add(n=n, shift_x=n * dx, shift_y=n * dy, distance=c.distance, joint=c.joint,
              product=c.product, difference=c.difference, difference_numeric=d,
              scaled=n * n * abs(d))
    return t


def _n_values(o):
    if o.get("n") is not None:
        return [o["n"]]
    if o.get("n_list"):
        return o["n_list"]
    return list(range(o["n_min"], o["n_max"] + 1, o["step"]))


def cmd_variance(cfg):
    o = cfg.options
    if o["distribution"]:
        if o.get("n") is None:
            raise UsageError("--distribution needs a single --n")
        t = Table("variance", ["k", "beta_exact", "beta"])
        for k, b in enumerate(edge_count_distribution(o["n"])):
            t.add(k=k, beta_exact=b, beta=float(b))
        t.meta["n"] = o["n"]
        return t
    t = Table("variance", ["n", "var_r", "var_h", "var_h_exact", "expected_cycles", "reference",
                           "excess"])
    for n in _n_values(o):
        hv = height_variance(n)
        t.add(n=n, var_r=hv.variance_r, var_h=hv.variance_h, var_h_exact=hv.exact_h,
              expected_cycles=hv.expected_cycles, reference=hv.reference,
              excess=hv.variance_h - hv.reference)
    return t


def cmd_oracle(cfg):
    o = cfg.options
    cap = o.get("cap", DEFAULT_CAP)
    t = Table("oracle", ["case", "quantity", "formula", "oracle", "match"])
    if o.get("random"):
        model = cfg.model or Model.LOZENGE
        rng = random.Random(cfg.seed)
        for i in range(o["random"]):
            region = random_region(model, rng.randint(2, 7), rng, max_vertices=24)
            _oracle_region(t, f"random {i}", region, cap)
    elif o.get("edges"):
        loaded = _event_spec(cfg)
        res = _probability(loaded, cfg)
        orc = _oracle_for(loaded, cfg)
        t.add(case=o["edges"], quantity="probability", formula=res.exact, oracle=orc.exact,
              match=Fraction(res.exact) == orc.exact)
    else:
        kind, geo = _geometry(cfg)
        if kind is None:
            raise UsageError("oracle needs a geometry, --edges or --random")
        if kind == "torus":
            graph = build_torus(cfg.model, *geo)
            f = count_torus(cfg.model, *geo)
            n = len(enumerate_matchings(graph, cap))
            t.add(case=_describe(kind, geo), quantity="count", formula=f, oracle=n, match=f == n)
        else:
            _oracle_region(t, _describe(kind, geo), geo, cap)
    if not all(r["match"] for r in t.rows):
        raise OracleMismatch(t)
    return t


def _oracle_region(t, case, region, cap):
    ms = enumerate_matchings(region, cap)
    f = count_region(region)
    t.add(case=case, quantity="count", formula=f, oracle=len(ms), match=f == len(ms))
    if not ms.matchings:
        return
    for e in region.edges:
        ev = CylinderEvent(region.model, (e,))
        p = region_probability(region, ev).exact
        q = Fraction(ms.containing([e]), len(ms))
        t.add(case=case, quantity=f"P{tuple(e.black)}{tuple(e.white)}", formula=p, oracle=q,
              match=p == q)


COMMANDS = {
    "count": cmd_count, "entropy": cmd_entropy, "couple": cmd_couple, "prob": cmd_prob,
    "correlate": cmd_correlate, "variance": cmd_variance, "oracle": cmd_oracle,
}


# parsing -----------------------------------------------------------------------------------

def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--model", choices=[m.value for m in Model])
    common.add_argument("--format", dest="fmt", choices=["human", "json", "csv"], default="human")
    common.add_argument("--tol", type=float, default=1e-8)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)

    p = _Parser(prog="dimerstats", description="Exact dimer statistics on the honeycomb and square lattices.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("count", parents=[common], help="number of perfect matchings")
    _add_geometry(s)

    s = sub.add_parser("entropy", parents=[common], help="per-site entropy of square tori")
    s.add_argument("--sizes", nargs="+", type=int, default=[4, 8, 16])

    s = sub.add_parser("couple", parents=[common], help="coupling values on a window")
    s.add_argument("--window", type=int, default=5)
    s.add_argument("--quadrature", action="store_true", help="also evaluate the integral")

    s = sub.add_parser("prob", parents=[common], help="probability of a cylinder event")
    s.add_argument("--edges", required=True, metavar="FILE")
    s.add_argument("--verify-oracle", action="store_true")
    s.add_argument("--cap", type=int, default=DEFAULT_CAP)
    _add_geometry(s)

    s = sub.add_parser("correlate", parents=[common], help="joint minus product along a shift")
    s.add_argument("--edges", required=True, metavar="FILE")
    s.add_argument("--edges2", metavar="FILE")
    s.add_argument("--shift", nargs=2, type=int, metavar=("DX", "DY"))
    s.add_argument("--n-min", type=int, default=1)
    s.add_argument("--n-max", type=int, default=20)

    s = sub.add_parser("variance", parents=[common], help="height variance along a column")
    s.add_argument("--n", type=int)
    s.add_argument("--n-list", nargs="+", type=int)
    s.add_argument("--n-min", type=int, default=1)
    s.add_argument("--n-max", type=int, default=20)
    s.add_argument("--step", type=int, default=1)
    s.add_argument("--distribution", action="store_true", help="print the exact law of r_n")

    s = sub.add_parser("oracle", parents=[common], help="compare formulas with enumeration")
    s.add_argument("--edges", metavar="FILE")
    s.add_argument("--random", type=int, metavar="K", help="check K random regions")
    s.add_argument("--cap", type=int, default=DEFAULT_CAP)
    _add_geometry(s)
    return p


def parse_config(argv) -> RunConfig:
    ns = vars(build_parser().parse_args(argv))
    command = ns.pop("command")
    model = Model.parse(ns.pop("model")) if ns.get("model") else None
    ns.pop("model", None)
    return RunConfig(command=command, model=model, fmt=ns.pop("fmt"), tol=ns.pop("tol"),
                     seed=ns.pop("seed"), verify_oracle=ns.pop("verify_oracle", False), options=ns)


def run(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", TorusParityWarning)
            table = COMMANDS[cfg.command](cfg)
    except OracleMismatch as exc:
        out.write(exc.table.render(cfg.fmt))
        sys.stderr.write(error_record("oracle-mismatch", exc) + "\n")
        return EXIT_MISMATCH
    except (UsageError, InputError) as exc:
        sys.stderr.write(error_record("usage", exc) + "\n")
        return EXIT_USAGE
    except Exception as exc:  # any module failure is a computation error
        sys.stderr.write(error_record("computation", exc) + "\n")
        return EXIT_COMPUTE
    out.write(table.render(cfg.fmt))
    return EXIT_OK


def main(argv=None) -> int:
    try:
        cfg = parse_config(sys.argv[1:] if argv is None else argv)
    except UsageError as exc:
        sys.stderr.write(error_record("usage", exc) + "\n")
        return EXIT_USAGE
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
