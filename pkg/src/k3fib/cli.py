"""Command line interface: ``k3fib <subcommand> ...``.

Exit codes: 0 ok, 1 inconclusive verdict under --strict (or a failed replay),
2 input or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .catalog import (
    Options,
    load_catalog,
    load_graph,
    load_report,
    replay_report,
    run_catalog,
)
from .criteria import DEFAULT_SEARCH_BOUND
from .dynkin import count_fibrations, find_extended_diagrams
from .errors import CatalogError, LatticeError
from .genus import DEFAULT_CLASS_CAP, unique_in_genus
from .lattice import Lattice, require_nondegenerate
from .quadform import DEFAULT_GROUP_BOUND, discriminant_form, even_overlattices
from .shortvec import root_sublattice

EXIT_OK, EXIT_STRICT, EXIT_INPUT = 0, 1, 2


def _load_lattices(path: str, definite: bool = False) -> list[Lattice]:
    out = []
    with open(path) as fh:
        for i, raw in enumerate(fh, 1):
            if not raw.strip():
                continue
            try:
                obj = json.loads(raw)
                label = obj.get("label") or f"line{i}"
                L = Lattice(obj["gram"], label=label)
                require_nondegenerate(L)
                if definite and L.rank and not L.is_definite():
                    raise LatticeError("lattice is not definite")
            except json.JSONDecodeError as exc:
                raise CatalogError(f"line {i}: invalid JSON ({exc.msg})") from None
            except (KeyError, TypeError, AttributeError):
                raise CatalogError(f"line {i}: expected an object with 'gram'") from None
            except LatticeError as exc:
                raise CatalogError(f"line {i} ({obj.get('label', '?')}): {exc}") from None
            out.append(L)
    return out


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True) + "\n")


def cmd_classify(args) -> int:
    entries = load_catalog(args.catalog)
    opts = Options(effort=args.genus_effort, search_bound=args.search_bound)
    report = run_catalog(entries, args.graphs, opts, workers=args.workers)
    if args.json:
        sys.stdout.write(report.jsonl())
    else:
        sys.stdout.write(report.table())
    if args.report:
        from .plotting import criterion_usage, status_by_rank
        d = Path(args.report)
        d.mkdir(parents=True, exist_ok=True)
        (d / "report.jsonl").write_text(report.jsonl())
        (d / "report.txt").write_text(report.table())
        (d / "summary.json").write_text(json.dumps(report.summary(), indent=2, sort_keys=True) + "\n")
        status_by_rank(report, d / "status_by_rank.png")
        criterion_usage(report, d / "criteria.png")
    if args.strict and any(r.status == "Inconclusive" for r in report.rows):
        return EXIT_STRICT
    return EXIT_OK


def cmd_genus(args) -> int:
    for L in _load_lattices(args.file, definite=True):
        v = unique_in_genus(L, effort=args.genus_effort)
        _emit({"label": L.label, "rank": L.rank, **v.to_json()})
    return EXIT_OK


def cmd_roots(args) -> int:
    for L in _load_lattices(args.file, definite=True):
        sub, dec = root_sublattice(L)
        _emit({"label": L.label, "rank": L.rank, "root_type": dec.name(),
               "root_rank": dec.total_rank, "simple_roots": [list(v) for v in dec.simple_roots],
               "root_overlattice": dec.total_rank == L.rank})
    return EXIT_OK


def cmd_overlattices(args) -> int:
    for L in _load_lattices(args.file):
        Q = discriminant_form(L)
        certs = even_overlattices(L, bound=args.bound)
        _emit({"label": L.label, "disc": L.disc, "group": list(Q.orders),
               "overlattices": [c.to_json() for c in certs]})
    return EXIT_OK


def cmd_graph_fibrations(args) -> int:
    for path in args.graphs:
        G = load_graph(path)
        try:
            diagrams = find_extended_diagrams(G)
            count, groups = count_fibrations(G)
        except LatticeError as exc:
            _emit({"graph": G.label or path, "error": f"{type(exc).__name__}: {exc}"})
            continue
        _emit({"graph": G.label or path, "diagrams": [D.to_json(G) for D in diagrams],
               "groups": groups, "count": count})
    return EXIT_OK


def cmd_replay(args) -> int:
    rows = load_report(args.report)
    bad = 0
    for label, problems in replay_report(rows):
        ok = not problems
        bad += not ok
        sys.stdout.write(f"{'ok  ' if ok else 'FAIL'} {label}\n")
        for p in problems:
            sys.stdout.write(f"     {p}\n")
    sys.stdout.write(f"{len(rows) - bad}/{len(rows)} certificates reproduced\n")
    return EXIT_OK if bad == 0 else EXIT_STRICT


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="k3fib", description="Elliptic fibration classifier "
                                "for K3 Picard lattices, with lattice utilities.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", help="classify every lattice in a JSONL catalog")
    c.add_argument("catalog")
    c.add_argument("--graphs", metavar="DIR", help="directory holding dual-graph JSON files")
    c.add_argument("--genus-effort", type=int, default=DEFAULT_CLASS_CAP, metavar="N",
                   help="cap on classes explored by the genus engine (default %(default)s)")
    c.add_argument("--search-bound", type=int, default=DEFAULT_SEARCH_BOUND, metavar="N",
                   help="height bound for isotropic vector searches (default %(default)s)")
    c.add_argument("--strict", action="store_true", help="exit 1 if any verdict is Inconclusive")
    fmt = c.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="JSON-lines output")
    fmt.add_argument("--table", action="store_true", help="table output (default)")
    c.add_argument("--report", metavar="DIR", help="also write report.jsonl, report.txt, "
                   "summary.json and PNG figures into DIR")
    c.add_argument("--workers", type=int, default=1, help="parallel worker processes")
    c.set_defaults(func=cmd_classify)

    g = sub.add_parser("genus", help="single-class test for definite lattices (JSONL)")
    g.add_argument("file")
    g.add_argument("--genus-effort", type=int, default=DEFAULT_CLASS_CAP, metavar="N")
    g.set_defaults(func=cmd_genus)

    r = sub.add_parser("roots", help="root sublattice and ADE type of definite lattices")
    r.add_argument("file")
    r.set_defaults(func=cmd_roots)

    o = sub.add_parser("overlattices", help="even overlattices via isotropic subgroups")
    o.add_argument("file")
    o.add_argument("--bound", type=int, default=DEFAULT_GROUP_BOUND,
                   help="largest discriminant group to enumerate (default %(default)s)")
    o.set_defaults(func=cmd_overlattices)

    f = sub.add_parser("graph-fibrations", help="count fibrations on dual graphs of (-2)-curves")
    f.add_argument("graphs", nargs="+")
    f.set_defaults(func=cmd_graph_fibrations)

    rp = sub.add_parser("certificate-replay", help="re-run every certificate in a report")
    rp.add_argument("report")
    rp.set_defaults(func=cmd_replay)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CatalogError, LatticeError, OSError) as exc:
        sys.stderr.write(f"k3fib: error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
