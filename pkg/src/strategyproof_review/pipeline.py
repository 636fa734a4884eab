"""End-to-end runs and human-readable reports."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from . import io
from .aggregate import divide_and_rank_aggregate
from .assign import divide_and_rank_assign
from .components import ComponentStats, PruneTrace, connected_components
from .errors import ContractViolation, ReviewError
from .model import AssignmentParams, ConflictGraph
from .properties import check_gu, check_sp_randomized


class StageError(ReviewError):
    """A pipeline stage failed; keeps the stage name and the original error code."""

    def __init__(self, stage, error):
        super().__init__(f"{stage}: {error}")
        self.stage = stage
        self.error = error
        self.exit_code = getattr(error, "exit_code", 1)
        self.code = getattr(error, "code", "error")

    def to_dict(self):
        return {"stage": self.stage, "code": self.code, "exit_code": self.exit_code, "message": str(self.error)}


def read_conflicts(path, format=None) -> ConflictGraph:
    path = Path(path)
    if format is None:
        format = "pairs-csv" if path.suffix.lower() == ".csv" else "graph-json"
    return io.parse_conflicts(path.read_text(encoding="utf-8"), format)


# -- tables ------------------------------------------------------------------

def stats_rows(graph: ConflictGraph, stats: ComponentStats | None = None):
    stats = stats or connected_components(graph).stats
    per_author = [graph.degree(i) for i in range(graph.num_reviewers)]
    avg = len(graph.conflicts) / graph.num_reviewers if graph.num_reviewers else 0.0
    first, second = stats.largest, stats.second_largest
    return [
        ("Number of submitted papers", str(graph.num_papers)),
        ("Number of distinct authors", str(graph.num_reviewers)),
        ("Average # papers written per author", f"{avg:.2f}"),
        ("Maximum # papers written by an author", str(max(per_author, default=0))),
        ("Number of connected components", str(stats.num_components)),
        ("#authors, #papers in largest connected component", f"{first[0]}, {first[1]}"),
        ("#authors, #papers in second largest connected component", f"{second[0]}, {second[1]}"),
    ]


def prune_rows(trace: PruneTrace):
    header = ["#Authors removed"] + [str(k) for k in trace.checkpoints]
    return [
        header,
        ["#Components"] + [str(s.num_components) for s in trace.stats],
        ["1st #Authors"] + [str(s.largest[0]) for s in trace.stats],
        ["1st #Papers"] + [str(s.largest[1]) for s in trace.stats],
    ]


def format_rows(rows, tsv=False) -> str:
    rows = [list(r) for r in rows]
    if tsv:
        return "".join("\t".join(r) + "\n" for r in rows)
    widths = [max(len(r[k]) for r in rows if k < len(r)) for k in range(max(map(len, rows)))]
    lines = []
    for r in rows:
        cells = [r[0].ljust(widths[0])] + [c.rjust(widths[k + 1]) for k, c in enumerate(r[1:])]
        lines.append("  ".join(cells).rstrip())
    return "\n".join(lines) + "\n"


# -- pipeline ----------------------------------------------------------------

@dataclass
class PipelineConfig:
    conflicts: str
    mu: int
    lam: int
    out_dir: str
    profile: str | None = None
    conflicts_format: str | None = None
    assign_strategy: str = "rr"
    aggregate_strategy: str = "borda"
    seed: int | None = None
    sp_trials: int = 1000


def run_pipeline(config: PipelineConfig) -> dict:
    """Partition, assign and, when a profile is given, aggregate and audit.

    Writes ``stats.json``, ``partition.json``, ``assignment.json`` and, with a
    profile, ``ranking.json``, ``gu_report.json`` and ``sp_report.json`` into
    ``config.out_dir``. Returns the written paths keyed by artifact name.
    Any failure is raised as :class:`StageError`.
    """
    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = {}

    def stage(name, fn):
        try:
            return fn()
        except ReviewError as exc:
            raise StageError(name, exc) from exc

    def write(name, text):
        path = out / name
        path.write_text(text, encoding="utf-8", newline="\n")
        written[name] = str(path)

    graph = stage("ingest", lambda: read_conflicts(config.conflicts, config.conflicts_format))
    params = stage("config", lambda: AssignmentParams(config.mu, config.lam))
    stats = connected_components(graph).stats
    write("stats.json", io.dumps({"num_components": stats.num_components, "sizes": [list(s) for s in stats.sizes]}))
    rg, parts = stage("partition", lambda: divide_and_rank_assign(graph, params, config.assign_strategy))
    write("partition.json", io.serialize(parts, graph))
    write("assignment.json", io.serialize(rg, graph))
    if config.profile is None:
        return written

    def load_profile():
        profile = io.parse_profile(Path(config.profile).read_text(encoding="utf-8"), graph)
        profile.check_aligned(rg)
        return profile

    profile = stage("profile", load_profile)
    ranking = stage("aggregate", lambda: divide_and_rank_aggregate(profile, parts, config.aggregate_strategy))
    write("ranking.json", io.serialize(ranking, graph))
    write("gu_report.json", check_gu(rg, profile, ranking).to_json())
    if config.sp_trials:
        if config.seed is None:
            raise StageError("check", ContractViolation("--seed is required for the sampled SP check"))
        agg = lambda prof: divide_and_rank_aggregate(prof, parts, config.aggregate_strategy)
        sp = check_sp_randomized(rg, graph, agg, config.sp_trials, config.seed)
        write("sp_report.json", sp.to_json())
    return written


def report(paths) -> str:
    """Summarize pipeline artifacts (a directory or explicit files) as text."""
    files = []
    for p in map(Path, paths):
        if p.is_dir():
            files.extend(sorted(p.glob("*.json")))
        elif p.exists():
            files.append(p)
        else:
            raise FileNotFoundError(str(p))
    if not files:
        raise FileNotFoundError("no artifacts found")
    chunks = []
    for f in files:
        data = json.loads(f.read_text(encoding="utf-8"))
        name = f.name
        if name == "stats.json":
            sizes = data["sizes"]
            first = sizes[0] if sizes else [0, 0]
            second = sizes[1] if len(sizes) > 1 else [0, 0]
            rows = [
                ("Number of connected components", str(data["num_components"])),
                ("#authors, #papers in largest connected component", f"{first[0]}, {first[1]}"),
                ("#authors, #papers in second largest connected component", f"{second[0]}, {second[1]}"),
            ]
            chunks.append("Conflict components\n" + format_rows(rows))
        elif name == "prune.json":
            rows = [data["header"]] + data["rows"]
            chunks.append("Pruning trace\n" + format_rows(rows))
        elif name == "partition.json":
            rows = [
                ("Side C reviewers / papers", f"{len(data['C']['reviewers'])} / {len(data['C']['papers'])}"),
                ("Side Cbar reviewers / papers", f"{len(data['Cbar']['reviewers'])} / {len(data['Cbar']['papers'])}"),
            ]
            chunks.append("Partition\n" + format_rows(rows))
        elif name == "assignment.json":
            loads = [len(v) for v in data["review_sets"].values()]
            p = data.get("params") or {}
            rows = [
                ("mu / lambda", f"{p.get('mu')} / {p.get('lambda')}"),
                ("Reviewer load min / max", f"{min(loads, default=0)} / {max(loads, default=0)}"),
                ("Total reviews", str(sum(loads))),
            ]
            chunks.append("Assignment\n" + format_rows(rows))
        elif name == "ranking.json":
            chunks.append("Ranking (best first)\n" + " ".join(map(str, data)) + "\n")
        elif "property" in data and "verdict" in data:
            verdict = "pass" if data["verdict"] else "FAIL"
            line = f"{data['property']}: {verdict}"
            if data.get("notes"):
                line += f" ({data['notes']})"
            if data.get("witness"):
                line += f"\n  witness: {json.dumps(data['witness'], sort_keys=True)}"
            chunks.append("Property " + line + "\n")
    return "\n".join(chunks)
