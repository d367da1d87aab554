"""Catalog ingestion, the classification pipeline, and reports."""

from __future__ import annotations

import json
import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .criteria import (
    DEFAULT_SEARCH_BOUND,
    Step,
    Verdict,
    check,
    derived_status,
    isotropic_with_divisibility,
    prop43_decide,
    reduce_by_divisibility,
    require_hyperbolic,
    run_step,
    u_w_split,
)
from .dynkin import DualGraph, count_fibrations, find_extended_diagrams, graph_from_json
from .errors import CatalogError, GraphTooLarge, InconsistentGrouping, LatticeError
from .genus import DEFAULT_CLASS_CAP
from .lattice import Lattice, require_nondegenerate

FLAG_VALUES = ("yes", "no", "unknown")
SPLIT_RANK = 13


@dataclass
class CatalogEntry:
    label: str
    gram: list[list[int]]
    infinite_aut: str = "unknown"
    zero_entropy: str = "unknown"
    graph: str | None = None
    line: int = 0

    @property
    def lattice(self) -> Lattice:
        return Lattice(self.gram, label=self.label)

    def to_json(self) -> dict:
        d = {"label": self.label, "gram": self.gram, "infinite_aut": self.infinite_aut,
             "zero_entropy": self.zero_entropy}
        if self.graph:
            d["graph"] = self.graph
        return d


def entry_from_json(obj: dict, line: int = 0) -> CatalogEntry:
    where = f"line {line}" if line else "entry"
    label = obj.get("label") if isinstance(obj, dict) else None
    name = f"{where} ({label})" if label else where
    if not isinstance(obj, dict):
        raise CatalogError(f"{where}: expected a JSON object")
    if not isinstance(label, str) or not label:
        raise CatalogError(f"{where}: missing string field 'label'")
    gram = obj.get("gram")
    if not isinstance(gram, list) or not all(isinstance(r, list) for r in gram) or \
            not all(isinstance(x, int) and not isinstance(x, bool) for r in gram for x in r):
        raise CatalogError(f"{name}: 'gram' must be a list of integer rows")
    flags = {}
    for key in ("infinite_aut", "zero_entropy"):
        val = obj.get(key, "unknown")
        if val not in FLAG_VALUES:
            raise CatalogError(f"{name}: {key} must be one of {FLAG_VALUES}, got {val!r}")
        flags[key] = val
    graph = obj.get("graph")
    if graph is not None and not isinstance(graph, str):
        raise CatalogError(f"{name}: 'graph' must be a file reference")
    try:
        L = Lattice(gram, label=label)
        if L.rank == 0:
            raise LatticeError("empty Gram matrix")
        require_nondegenerate(L)
        require_hyperbolic(L)
    except LatticeError as exc:
        raise CatalogError(f"{name}: {type(exc).__name__}: {exc}") from None
    return CatalogEntry(label, [list(r) for r in L.gram], graph=graph, line=line, **flags)


def load_catalog(path: str | os.PathLike) -> list[CatalogEntry]:
    entries = []
    labels = {}
    with open(path) as fh:
        for i, raw in enumerate(fh, 1):
            if not raw.strip():
                continue
            try:
                obj = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise CatalogError(f"line {i}: invalid JSON ({exc.msg})") from None
            e = entry_from_json(obj, i)
            if e.label in labels:
                raise CatalogError(f"line {i} ({e.label}): duplicate label, first on line "
                                   f"{labels[e.label]}")
            labels[e.label] = i
            entries.append(e)
    return entries


def load_graph(path: str | os.PathLike) -> DualGraph:
    try:
        with open(path) as fh:
            obj = json.load(fh)
        return graph_from_json(obj)
    except json.JSONDecodeError as exc:
        raise CatalogError(f"{path}: line {exc.lineno}: invalid JSON ({exc.msg})") from None
    except (KeyError, TypeError) as exc:
        raise CatalogError(f"{path}: malformed graph ({exc})") from None
    except LatticeError as exc:
        raise CatalogError(f"{path}: {exc}") from None


def resolve_graph(entry: CatalogEntry, graph_dir: str | None) -> DualGraph | None:
    if not entry.graph:
        return None
    if graph_dir is None:
        raise CatalogError(f"line {entry.line} ({entry.label}): references graph "
                           f"{entry.graph!r} but no --graphs directory was given")
    p = Path(graph_dir) / entry.graph
    if not p.suffix:
        p = p.with_suffix(".json")
    if not p.exists():
        raise CatalogError(f"line {entry.line} ({entry.label}): graph file {p} not found")
    return load_graph(p)


# ---------------------------------------------------------------------------
# the pipeline

@check("graph")
def _check_graph(inp: dict) -> dict:
    G = graph_from_json(inp["graph"])
    try:
        diagrams = find_extended_diagrams(G)
        count, groups = count_fibrations(G)
    except (GraphTooLarge, InconsistentGrouping) as exc:
        return {"error": f"{type(exc).__name__}: {exc}", "status": "NoDecision"}
    status = "Unique" if count == 1 else "Multiple" if count > 1 else "NoDecision"
    return {"diagrams": [D.to_json(G) for D in diagrams], "groups": groups, "count": count,
            "status": status}


@dataclass(frozen=True)
class Options:
    effort: int = DEFAULT_CLASS_CAP
    search_bound: int = DEFAULT_SEARCH_BOUND


def classify(entry: CatalogEntry, graph: DualGraph | None = None,
             options: Options = Options()) -> Verdict:
    return classify_lattice(entry.lattice, entry.infinite_aut, entry.zero_entropy, graph, options)


def classify_lattice(L: Lattice, infinite_aut: str = "unknown", zero_entropy: str = "unknown",
                     graph: DualGraph | None = None, options: Options = Options()) -> Verdict:
    """Run the decision pipeline; every decision is backed by a replayable step."""
    require_nondegenerate(L)
    require_hyperbolic(L)
    steps: list[Step] = []
    gram = L.matrix()
    r = L.rank
    bound = options.search_bound

    def add(step: Step) -> bool:
        steps.append(step)
        return step.status is not None

    def done() -> Verdict:
        return Verdict(derived_status(steps), steps)

    if r == 1:
        add(run_step("rank1", gram=gram))
        return done()
    if r == 2:
        add(run_step("rank2", gram=gram))
        return done()
    split = u_w_split(L, bound)
    if r >= SPLIT_RANK and split is not None:
        v = prop43_decide(L, split, infinite_aut, zero_entropy, options.effort)
        steps.extend(v.certificate)
        if v.status != "Inconclusive":
            return done()
    if r >= 5:
        add(run_step("meyer", gram=gram))
    else:
        st = run_step("isotropic", gram=gram, bound=bound)
        add(st)
        if st.outcome["vector"] is None:
            return done()
    if split is not None and r < SPLIT_RANK:
        v = prop43_decide(L, split, infinite_aut, zero_entropy, options.effort)
        steps.extend(v.certificate)
        if v.status != "Inconclusive":
            return done()
    if infinite_aut == "yes" and zero_entropy == "yes":
        if add(run_step("prop44", gram=gram, infinite_aut=infinite_aut,
                        zero_entropy=zero_entropy)):
            return done()
    if split is None:
        F = isotropic_with_divisibility(L, bound)
        if F is not None:
            step = run_step("prop41", gram=gram, F=list(F))
            R = reduce_by_divisibility(L, F)
            step.nested = classify_lattice(R, options=options)
            if add(step):
                return done()
    if graph is not None and infinite_aut != "yes":
        if add(run_step("graph", graph=graph.to_json())):
            return done()
    return done()


def decided_by(v: Verdict) -> str:
    for s in v.certificate:
        if s.status is not None:
            return s.criterion
    return "-"


# ---------------------------------------------------------------------------
# reports

@dataclass
class ReportRow:
    label: str
    rank: int
    status: str
    criterion: str
    verdict: Verdict
    flags: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"label": self.label, "rank": self.rank, "status": self.status,
                "decided_by": self.criterion, "flags": self.flags,
                "verdict": self.verdict.to_json()}


@dataclass
class Report:
    rows: list[ReportRow]

    def summary(self) -> dict:
        by_status = Counter(r.status for r in self.rows)
        by_rank: dict[int, Counter] = {}
        for r in self.rows:
            by_rank.setdefault(r.rank, Counter())[r.status] += 1
        return {"total": len(self.rows),
                "by_status": {s: by_status[s] for s in sorted(by_status)},
                "by_rank": {str(k): dict(sorted(by_rank[k].items())) for k in sorted(by_rank)}}

    def jsonl(self) -> str:
        return "".join(json.dumps(r.to_json(), sort_keys=True) + "\n" for r in self.rows)

    def table(self) -> str:
        w = max([len("label")] + [len(r.label) for r in self.rows])
        lines = [f"{'label':<{w}}  rank  {'status':<12}  decided_by",
                 f"{'-' * w}  ----  {'-' * 12}  ----------"]
        for r in self.rows:
            lines.append(f"{r.label:<{w}}  {r.rank:>4}  {r.status:<12}  {r.criterion}")
        s = self.summary()
        lines.append("")
        lines.append(f"total {s['total']}: " +
                     ", ".join(f"{k} {v}" for k, v in s["by_status"].items()))
        for rank, counts in s["by_rank"].items():
            lines.append(f"  rank {rank}: " + ", ".join(f"{k} {v}" for k, v in counts.items()))
        return "\n".join(lines) + "\n"


def _classify_job(args) -> dict:
    entry, graph, options = args
    v = classify(entry, graph, options)
    return v.to_json()


def run_catalog(entries: list[CatalogEntry], graph_dir: str | None = None,
                options: Options = Options(), workers: int = 1) -> Report:
    """Classify every entry; rows are ordered by label regardless of scheduling."""
    jobs = [(e, resolve_graph(e, graph_dir), options) for e in entries]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_classify_job, jobs))
    else:
        results = [_classify_job(j) for j in jobs]
    rows = []
    for (e, _, _), res in zip(jobs, results):
        v = Verdict.from_json(res)
        rows.append(ReportRow(e.label, len(e.gram), v.status, decided_by(v), v,
                              {"infinite_aut": e.infinite_aut, "zero_entropy": e.zero_entropy}))
    rows.sort(key=lambda r: r.label)
    return Report(rows)


def load_report(path: str | os.PathLike) -> list[dict]:
    rows = []
    with open(path) as fh:
        for i, raw in enumerate(fh, 1):
            if not raw.strip():
                continue
            try:
                obj = json.loads(raw)
                obj["verdict"]["status"]
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise CatalogError(f"line {i}: not a report row ({exc})") from None
            rows.append(obj)
    return rows


def replay_report(rows: list[dict]) -> list[tuple[str, list[str]]]:
    """Replay every verdict of a report; returns (label, problems) per row."""
    from .criteria import replay
    return [(r.get("label", "?"), replay(Verdict.from_json(r["verdict"]))) for r in rows]
