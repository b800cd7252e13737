"""Command-line front end.

    plumbd <command> [input.json] [--format json|csv|dot] [--t-max N]
                     [--parallel] [--seed N] [--oracle-radius N]

Exit status is 0 on success, 1 when ``verify`` finds a mismatch and 2 for
any input problem (unreadable file, invalid graph, singular or
non-negative-definite plumbing, unsupported format).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

from .charlattice import enumerate_spinc
from .corpus import random_negative_definite_trees
from .grading import graded_root
from .optimizer import d_invariants_all
from .plumbing import (GraphValidationError, NotNegativeDefinite, PlumbingGraph, PlumbingMatrix,
                       SingularMatrix, accept, build_matrix, graph_from_dict, plumbing_rows,
                       topology_invariants, validate_graph)
from .report import SPINC_COLUMNS, UnsupportedFormat, dinv_document, manifold_dict, write_report
from .verify import verify_manifold

COMMANDS = ("validate", "spinc", "dinv", "root", "verify")
EXIT_OK, EXIT_MISMATCH, EXIT_INPUT = 0, 1, 2


class ParseError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    input_path: Optional[str] = None
    output_format: str = "json"
    t_max: Optional[int] = None
    parallel: bool = False
    oracle_radius: Optional[int] = None
    seed: int = 0
    count: int = 100

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if self.output_format == "dot" and self.command != "root":
            raise UnsupportedFormat("dot output is only available for the root command")
        if self.command != "verify" and self.input_path is None:
            raise ValueError(f"{self.command} needs an input file")


def load_graph(path: str) -> PlumbingGraph:
    """Read and validate a plumbing graph file.

    Raises :class:`ParseError` for unreadable or malformed files and
    :class:`GraphValidationError` (listing every violation) for graphs that
    are not connected weighted trees.
    """
    try:
        with open(path) as fh:
            data = json.load(fh)
        g = graph_from_dict(data)
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        raise ParseError(f"{path}: {exc}") from exc
    report = validate_graph(g)
    if not report.ok:
        raise GraphValidationError(report)
    return g


def _emit(data: bytes, out) -> None:
    out.write(data.decode())


def _validate(cfg: RunConfig, g: PlumbingGraph, out) -> int:
    if cfg.output_format != "json":
        raise UnsupportedFormat("validate only supports json output")
    try:
        m = build_matrix(g)
    except SingularMatrix:
        rows = plumbing_rows(g)
        doc = {"matrix": rows, "det": 0, "ldl_pivots": [], "negative_definite": False,
               "verdict": "singular: not a rational homology sphere"}
        _emit(write_report(doc, "json"), out)
        return EXIT_INPUT
    doc = {
        "manifold": manifold_dict(g, m),
        "matrix": [list(r) for r in m.M],
        "det": m.det,
        "ldl_pivots": list(m.ldl_pivots),
        "negative_definite": m.negative_definite,
        "verdict": "accepted" if m.negative_definite else "not negative definite",
    }
    if m.negative_definite:
        inv = topology_invariants(m)
        doc["invariants"] = {"s": inv.s, "h1_order": inv.h1_order, "chi_W": inv.chi_w,
                             "sigma_W": inv.sigma_w}
    _emit(write_report(doc, "json"), out)
    return EXIT_OK if m.negative_definite else EXIT_INPUT


def _roots(m: PlumbingMatrix, t_max: Optional[int], parallel: bool):
    # rooted at each class's maximiser, where chi attains its minimum 0 at x = 0
    reports = d_invariants_all(m, parallel=parallel)
    jobs = [(r.maximizer, m, t_max, r.class_index) for r in reports]
    if parallel and len(jobs) > 1:
        with ProcessPoolExecutor() as pool:
            return list(pool.map(_root_job, jobs))
    return [_root_job(j) for j in jobs]


def _root_job(job):
    K, m, t_max, index = job
    return graded_root(K, m, t_max, index)


def _verify(cfg: RunConfig, out) -> int:
    if cfg.input_path is not None:
        g = load_graph(cfg.input_path)
        cases = [("input", accept(g))]
    else:
        cases = [(f"random[{k}]", m) for k, (_, m) in
                 enumerate(random_negative_definite_trees(cfg.count, cfg.seed))]
    failures = 0
    for name, m in cases:
        fails = verify_manifold(m, seed=cfg.seed, oracle_radius=cfg.oracle_radius)
        status = "ok" if not fails else "FAIL"
        out.write(f"{status} {name} s={m.s} det={m.det} classes={abs(m.det)}\n")
        for f in fails:
            out.write(f"    {f}\n")
        failures += bool(fails)
    out.write(f"{len(cases) - failures}/{len(cases)} manifolds passed\n")
    return EXIT_MISMATCH if failures else EXIT_OK


def run(cfg: RunConfig, out=None) -> int:
    out = out if out is not None else sys.stdout
    if cfg.command == "verify":
        return _verify(cfg, out)
    g = load_graph(cfg.input_path)
    if cfg.command == "validate":
        return _validate(cfg, g, out)
    m = accept(g)
    if cfg.command == "spinc":
        classes = enumerate_spinc(m)
        doc = {"manifold": manifold_dict(g, m),
               "classes": [{"index": c.index, "rep": list(c.rep), "coords": list(c.coords)} for c in classes],
               "columns": SPINC_COLUMNS}
        _emit(write_report(doc, cfg.output_format), out)
    elif cfg.command == "dinv":
        reports = d_invariants_all(m, parallel=cfg.parallel)
        _emit(write_report(dinv_document(g, m, reports), cfg.output_format), out)
    elif cfg.command == "root":
        if cfg.output_format == "csv":
            raise UnsupportedFormat("root supports json and dot output")
        roots = _roots(m, cfg.t_max, cfg.parallel)
        doc = {"manifold": manifold_dict(g, m), "roots": roots}
        _emit(write_report(doc, cfg.output_format), out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plumbd",
        description="d-invariants and graded roots of negative-definite plumbed 3-manifolds.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("input", nargs="?", help="plumbing graph JSON (optional for verify)")
    parser.add_argument("--format", dest="output_format", choices=("json", "csv", "dot"), default=None)
    parser.add_argument("--t-max", type=int, default=None,
                        help="root: highest sublevel to include (default 8; the lowest is 0)")
    parser.add_argument("--parallel", action="store_true", help="evaluate spin^c classes in parallel")
    parser.add_argument("--seed", type=int, default=None, help="corpus seed (env PLUMBD_SEED)")
    parser.add_argument("--count", type=int, default=100, help="verify: number of random trees")
    parser.add_argument("--oracle-radius", type=int, default=None,
                        help="verify: fixed brute-force box radius")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    seed = args.seed
    if seed is None:
        seed = int(os.environ.get("PLUMBD_SEED", "0"))
    fmt = args.output_format or ("dot" if args.command == "root" else "json")
    try:
        cfg = RunConfig(args.command, args.input, fmt, args.t_max, args.parallel,
                        args.oracle_radius, seed, args.count)
        return run(cfg)
    except GraphValidationError as exc:
        for issue in exc.report.issues:
            print(f"error: {issue}", file=sys.stderr)
        return EXIT_INPUT
    except (ParseError, SingularMatrix, NotNegativeDefinite, UnsupportedFormat, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
