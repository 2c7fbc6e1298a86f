"""Command-line front end: ``regtrace {generate,census,verify,density}``.

Exit status: 0 on success, 1 when a verification stage fails, 2 on usage,
input or I/O errors.
"""

from __future__ import annotations

import argparse
import io
import json
import logging
import math
import os
import sys
import tempfile
import time
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Callable

from . import __version__
from .census import (
    CONTRACTIBLE,
    OracleBudget,
    census_table,
    count_geodesic_paths,
    geodesic_path_counts_by_enumeration,
    homotopy_census,
    homotopy_table,
    master_identity_terms,
)
from .errors import RegTraceError
from .graph import DEFAULT_REJECTION_BUDGET, Graph, generate, is_bipartite, load_graph
from .series import tree_walk_counts
from .spectral import (
    EIGEN_TOL,
    QUAD_MAX_LEVEL,
    TestSequence,
    ahumada_contour_numeric,
    ahumada_identity_term,
    contractible_term,
    density_table,
    gp_from_spectrum,
    polygon_truncation,
    spectrum,
    verify_ahumada,
    verify_polygon_identity,
    verify_trace_formula,
)

SCHEMA_VERSION = 1
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

log = logging.getLogger("regtrace")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    graph: str | None = None
    kind: str | None = None
    n: int | None = None
    degree: int | None = None
    seed: int = 0
    offsets: list[int] = field(default_factory=list)
    l_max: int = 12
    l_trunc: int = 24
    t_values: list[float] = field(default_factory=lambda: [0.25, 0.5, 1.0])
    grid: int = 201
    out: str | None = None
    format: str | None = None
    tolerance: float = 1e-8
    eigen_tol: float = EIGEN_TOL
    budget_vertices: int = 16
    budget_length: int = 12
    budget_classes: int = 1_000_000
    budget_paths: int = 200_000
    budget_quadrature: int = QUAD_MAX_LEVEL
    budget_rejection: int = DEFAULT_REJECTION_BUDGET

    def validate(self) -> None:
        if (self.graph is None) == (self.kind is None):
            raise UsageError("give exactly one graph source: --graph FILE or --kind")
        for name in ("budget_vertices", "budget_length", "budget_classes", "budget_paths",
                     "budget_quadrature", "budget_rejection"):
            if getattr(self, name) <= 0:
                raise UsageError(f"--{name.replace('_', '-')} must be positive")
        if not all(math.isfinite(t) for t in self.t_values):
            raise UsageError("t values must be finite reals")
        if self.l_max < 0:
            raise UsageError("--l-max must be nonnegative")
        if self.l_trunc < 3:
            raise UsageError("--l-trunc must be at least 3")
        if not (self.eigen_tol > 0 and self.tolerance >= 0):
            raise UsageError("tolerances must be positive")

    @property
    def oracle_budget(self) -> OracleBudget:
        return OracleBudget(self.budget_vertices, self.budget_length, self.budget_classes)

    def load_graph(self) -> Graph:
        if self.graph is not None:
            return load_graph(self.graph)
        return generate(self.kind, n=self.n, degree=self.degree, seed=self.seed,
                        offsets=self.offsets, budget=self.budget_rejection)


def write_atomic(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=target.parent, prefix=f".{target.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _graph_summary(g: Graph) -> dict[str, Any]:
    return {
        "name": g.name,
        "vertex_count": g.vertex_count,
        "edge_count": g.edge_count,
        "q": g.q,
        "bipartite": is_bipartite(g),
    }


def _envelope(cfg: RunConfig, g: Graph) -> dict[str, Any]:
    return {
        "schema_version": SCHEMA_VERSION,
        "tool": "regtrace",
        "version": __version__,
        "config": asdict(cfg),
        "graph": _graph_summary(g),
    }


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_generate(cfg: RunConfig) -> int:
    g = cfg.load_graph()
    write_atomic(cfg.out, g.to_document().dumps())
    return EXIT_OK


def cmd_census(cfg: RunConfig) -> int:
    g = cfg.load_graph()
    table = census_table(g, cfg.l_max)
    if (cfg.format or "csv") == "csv":
        buf = io.StringIO()
        table.write_csv(buf)
        text = buf.getvalue()
    else:
        doc = _envelope(cfg, g)
        doc["census"] = [{"l": l, "p_l": p, "gp_l": gp} for l, p, gp in table.rows()]
        text = json.dumps(doc, indent=2) + "\n"
    write_atomic(cfg.out, text)
    return EXIT_OK


def cmd_density(cfg: RunConfig) -> int:
    if cfg.grid < 2:
        raise UsageError("--grid must be at least 2")
    g = cfg.load_graph()
    table = density_table(g, cfg.l_trunc, cfg.grid)
    if (cfg.format or "csv") == "csv":
        buf = io.StringIO()
        table.write_csv(buf)
        text = buf.getvalue()
    else:
        doc = _envelope(cfg, g)
        doc["density"] = {
            "note": "rho_total is a truncation of a distributional series",
            "truncation_length": table.truncation_length,
            "s": list(table.grid),
            "rho_con": list(table.rho_con),
            "rho_total": list(table.rho_total),
        }
        text = json.dumps(doc, indent=2) + "\n"
    write_atomic(cfg.out, text)
    return EXIT_OK


def _stage(name: str, fn: Callable[[], tuple[bool, dict]]) -> dict[str, Any]:
    start = time.perf_counter()
    try:
        passed, details = fn()
        error = None
    except (RegTraceError, ArithmeticError, ValueError) as exc:
        passed, details, error = False, {}, f"{type(exc).__name__}: {exc}"
    elapsed = time.perf_counter() - start
    log.info("stage %s: %s (%.2fs)", name, "pass" if passed else "FAIL", elapsed)
    return {"name": name, "passed": passed, "seconds": round(elapsed, 4), "error": error,
            "details": details}


def run_verification(cfg: RunConfig, g: Graph) -> dict[str, Any]:
    """Run every verification stage on g and assemble the report."""
    q, n = g.q, g.vertex_count
    budget = cfg.oracle_budget
    l_top = max(cfg.l_max, cfg.l_trunc, 3)
    gp = count_geodesic_paths(g, l_top)
    stages = []

    def master():
        rows = master_identity_terms(g, cfg.l_max)
        bad = [l for l, (p, con, geo) in enumerate(rows) if p != con + geo]
        return not bad, {
            "l_max": cfg.l_max,
            "p_l": [r[0] for r in rows],
            "contractible": [r[1] for r in rows],
            "geodesic": [r[2] for r in rows],
            "failing_l": bad,
        }

    def census():
        tree = tree_walk_counts(q, cfg.l_max).p_tree
        h = homotopy_table(q, max(cfg.l_max, 3))
        p = [r[0] for r in master_identity_terms(g, cfg.l_max)]
        checked, skipped, bad = [], [], []
        for l in range(cfg.l_max + 1):
            if n > budget.max_vertices or l > budget.max_length or p[l] > cfg.budget_paths:
                skipped.append(l)
                continue
            buckets = homotopy_census(g, l, budget)
            ok = sum(buckets.values()) == p[l]
            ok &= buckets.get(CONTRACTIBLE, 0) == n * tree[l]
            for cls, count in buckets.items():
                if cls is not CONTRACTIBLE:
                    ok &= count == cls.lam * h[cls.length][l]
            (checked if ok else bad).append(l)
        return not bad, {"checked_l": checked, "skipped_l": skipped, "failing_l": bad}

    sp_holder: dict[str, Any] = {}

    def spectrum_stage():
        sp = spectrum(g, tol=cfg.eigen_tol)
        sp_holder["sp"] = sp
        s = sp.sanity(g.edge_count)
        ok = abs(s["sum"]) <= 1e-9 and abs(s["sum_sq_minus_2E"]) <= 1e-8 and abs(s["max_minus_degree"]) <= 1e-9
        ok &= sp.contains(-(q + 1)) == is_bipartite(g)
        return ok, {"eigenvalues": list(sp.eigenvalues), **s}

    def inversion():
        sp = sp_holder["sp"]
        l_hi = cfg.l_max
        inverted = [gp_from_spectrum(sp, l) for l in range(1, l_hi + 1)]
        transfer = gp[1 : l_hi + 1]
        details = {"l_range": [1, l_hi], "from_spectrum": inverted, "transfer_operator": transfer}
        ok = inverted == transfer
        if n <= budget.max_vertices and l_hi >= 3:
            brute = geodesic_path_counts_by_enumeration(g, l_hi, budget)[1:]
            details["enumeration"] = brute
            ok &= brute == transfer
        return ok, details

    def trace():
        sp = sp_holder["sp"]
        reports = [verify_trace_formula(g, t, cfg.l_trunc, sp=sp, gp=gp, tolerance=cfg.tolerance,
                                       quad_max_level=cfg.budget_quadrature)
                   for t in cfg.t_values]
        return all(r.passed for r in reports), {"reports": [r.to_dict() for r in reports]}

    def ahumada():
        sp = sp_holder["sp"]
        l_hi = max(1, min(cfg.l_max, cfg.l_trunc))
        residuals = [verify_ahumada(g, TestSequence.indicator(l), l_hi, sp=sp, gp=gp)
                     for l in range(1, l_hi + 1)]
        details: dict[str, Any] = {"indicator_residuals": residuals}
        ok = all(r <= cfg.tolerance for r in residuals)
        if q > 1:
            example = TestSequence({0: 1.0, 2: 0.5, 3: -0.25, 6: 0.125})
            laurent = ahumada_identity_term(example, q, n)
            contour = ahumada_contour_numeric(example, q, n)
            details["contour_check"] = {"sequence": {str(k): v for k, v in example.values.items()},
                                        "laurent": laurent, "contour": contour}
            ok &= abs(laurent - contour) <= cfg.tolerance
        return ok, details

    def polygon():
        rows = []
        for t in cfg.t_values:
            r_trunc = polygon_truncation(n, t)
            rows.append({"t": t, "r_trunc": r_trunc, "residual": verify_polygon_identity(n, t, r_trunc)})
        return all(r["residual"] < 1e-10 * max(1.0, math.exp(2 * abs(t))) for r, t in
                   zip(rows, cfg.t_values)), {"L": n, "rows": rows}

    stages.append(_stage("master_identity", master))
    stages.append(_stage("homotopy_census", census))
    stages.append(_stage("spectrum", spectrum_stage))
    if "sp" in sp_holder:
        stages.append(_stage("gp_inversion", inversion))
        stages.append(_stage("trace_formula", trace))
        stages.append(_stage("ahumada", ahumada))
    if q == 1:
        stages.append(_stage("polygon_identity", polygon))
    doc = {"stages": stages, "passed": all(s["passed"] for s in stages)}
    return doc


def cmd_verify(cfg: RunConfig) -> int:
    g = cfg.load_graph()
    doc = _envelope(cfg, g)
    doc.update(run_verification(cfg, g))
    write_atomic(cfg.out, json.dumps(doc, indent=2) + "\n")
    return EXIT_OK if doc["passed"] else EXIT_FAIL


COMMANDS = {"generate": cmd_generate, "census": cmd_census, "verify": cmd_verify, "density": cmd_density}


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}") from exc


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of integers: {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_argument_group("graph source")
    src.add_argument("--graph", metavar="FILE", help="graph document (JSON)")
    src.add_argument("--kind", help="generator: cycle, complete, petersen, hypercube, circulant, random-regular")
    src.add_argument("--n", type=int, help="vertex count (dimension for hypercube)")
    src.add_argument("--degree", type=int)
    src.add_argument("--seed", type=int)
    src.add_argument("--offsets", type=_int_list, help="circulant offsets, comma separated")
    common.add_argument("--config", metavar="FILE", help="JSON file of option defaults; flags override")
    common.add_argument("--out", metavar="PATH", help="output file (default: stdout)")
    common.add_argument("--format", choices=("json", "csv"))
    common.add_argument("--l-max", type=int)
    common.add_argument("--l-trunc", type=int)
    common.add_argument("--t", dest="t_values", type=_float_list, metavar="LIST")
    common.add_argument("--grid", type=int)
    common.add_argument("--tolerance", type=float)
    common.add_argument("--eigen-tol", type=float, help="Jacobi off-diagonal stopping threshold")
    for name in ("vertices", "length", "classes", "paths", "quadrature", "rejection"):
        common.add_argument(f"--budget-{name}", type=int)
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="regtrace", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("generate", parents=[common], help="write a graph document")
    sub.add_parser("census", parents=[common], help="CSV of l, p_l, gp_l")
    sub.add_parser("verify", parents=[common], help="run all verification stages, JSON report")
    sub.add_parser("density", parents=[common], help="CSV of s, rho_con, rho_total")
    return parser


_CONFIG_FIELDS = {f.name for f in fields(RunConfig)} - {"command"}


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    values: dict[str, Any] = {}
    if ns.config:
        try:
            data = json.loads(Path(ns.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {ns.config}: {exc}") from exc
        unknown = set(data) - _CONFIG_FIELDS
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        values.update(data)
    for name in _CONFIG_FIELDS:
        v = getattr(ns, name, None)
        if v is not None:
            values[name] = v
    cfg = RunConfig(command=ns.command, **values)
    if cfg.format is None and cfg.command == "verify":
        cfg.format = "json"
    if cfg.command == "verify" and cfg.format != "json":
        raise UsageError("verify only emits JSON reports")
    cfg.validate()
    return cfg


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    try:
        cfg = config_from_args(ns)
        return COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        print(f"regtrace: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (RegTraceError, OSError) as exc:
        print(f"regtrace: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
