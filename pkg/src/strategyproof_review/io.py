"""Readers and writers for the on-disk formats.

Formats
-------
pairs-csv
    UTF-8 text with header ``author_id,paper_id``; one conflict per row.
graph-json
    ``{"reviewers": [ids], "papers": [ids], "conflicts": [[r_id, p_id], ...]}``
assignment-json
    ``{"params": {"mu": M, "lambda": L}, "review_sets": {r_id: [p_ids]}}``
profile-json
    ``{r_id: [p_ids best first]}``
ranking-json
    ``[p_ids best first]``
partition-json
    ``{"C": {"reviewers": [...], "papers": [...]}, "Cbar": {...}}``

All writers emit canonical text (sorted keys, two-space indent, LF newlines,
trailing newline), so equal entities serialize to identical bytes. Ids are
written as strings. Readers accept a :class:`ConflictGraph` to resolve ids;
without one, ids must be decimal indices.
"""

from __future__ import annotations

import csv
import io as _io
import json
import warnings

from .errors import ParseError
from .model import AssignmentParams, ConflictGraph, Profile, ReviewGraph
from .partition import PartitionResult


def _text(source):
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    return source


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _loads(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno) from exc


# -- conflicts ---------------------------------------------------------------

def parse_conflicts(source, format: str = "pairs-csv") -> ConflictGraph:
    """Read a conflict graph from a CSV of ``author_id,paper_id`` pairs or graph-json.

    Indices are assigned in order of first appearance. Duplicate CSV pairs
    raise a warning and are dropped.
    """
    text = _text(source)
    if format == "graph-json":
        return parse_graph_json(text)
    if format != "pairs-csv":
        raise ValueError(f"unknown conflict format {format!r}")

    reviewers, papers, conflicts = {}, {}, []
    seen = set()
    reader = csv.reader(_io.StringIO(text))
    header_seen = False
    for row in reader:
        line = reader.line_num
        if not row or all(not c.strip() for c in row):
            continue
        cells = [c.strip() for c in row]
        if not header_seen:
            header_seen = True
            if cells == ["author_id", "paper_id"]:
                continue
            raise ParseError(f"expected header 'author_id,paper_id', got {','.join(row)!r}", line)
        if len(cells) != 2 or not cells[0] or not cells[1]:
            raise ParseError(f"malformed row {','.join(row)!r}", line)
        a, p = cells
        r_idx = reviewers.setdefault(a, len(reviewers))
        p_idx = papers.setdefault(p, len(papers))
        if (r_idx, p_idx) in seen:
            warnings.warn(f"line {line}: duplicate conflict ({a}, {p}) ignored", stacklevel=2)
            continue
        seen.add((r_idx, p_idx))
        conflicts.append((r_idx, p_idx))
    return ConflictGraph(len(reviewers), len(papers), frozenset(conflicts), tuple(reviewers), tuple(papers))


def parse_graph_json(text) -> ConflictGraph:
    data = _loads(_text(text))
    if not isinstance(data, dict) or not {"reviewers", "papers", "conflicts"} <= set(data):
        raise ParseError("graph-json needs 'reviewers', 'papers' and 'conflicts'")
    r_ids = [str(x) for x in data["reviewers"]]
    p_ids = [str(x) for x in data["papers"]]
    r_index = {x: i for i, x in enumerate(r_ids)}
    p_index = {x: i for i, x in enumerate(p_ids)}
    if len(r_index) != len(r_ids) or len(p_index) != len(p_ids):
        raise ParseError("duplicate reviewer or paper id")
    conflicts = set()
    for pair in data["conflicts"]:
        if not isinstance(pair, list) or len(pair) != 2:
            raise ParseError(f"conflict entry {pair!r} is not a [reviewer, paper] pair")
        r, p = str(pair[0]), str(pair[1])
        if r not in r_index or p not in p_index:
            raise ParseError(f"conflict {pair!r} references an unknown id")
        key = (r_index[r], p_index[p])
        if key in conflicts:
            warnings.warn(f"duplicate conflict {pair!r} ignored", stacklevel=2)
        conflicts.add(key)
    return ConflictGraph(len(r_ids), len(p_ids), frozenset(conflicts), tuple(r_ids), tuple(p_ids))


# -- id tables ---------------------------------------------------------------

class _Ids:
    """Bidirectional id <-> index lookup, falling back to decimal indices."""

    def __init__(self, ids):
        self.ids = ids
        self.index = None if ids is None else {x: i for i, x in enumerate(ids)}

    def name(self, i):
        return str(i) if self.ids is None else self.ids[i]

    def lookup(self, x, kind):
        x = str(x)
        if self.index is None:
            if not x.isdigit():
                raise ParseError(f"{kind} id {x!r} is not an index and no graph was supplied")
            return int(x)
        if x not in self.index:
            raise ParseError(f"unknown {kind} id {x!r}")
        return self.index[x]


def _tables(graph):
    if graph is None:
        return _Ids(None), _Ids(None)
    return _Ids(graph.reviewer_ids), _Ids(graph.paper_ids)


# -- serialize ---------------------------------------------------------------

def serialize(entity, graph: ConflictGraph | None = None) -> str:
    """Canonical text for any domain entity; ``graph`` supplies the id tables."""
    R, P = _tables(graph)
    if isinstance(entity, ConflictGraph):
        obj = {
            "reviewers": list(entity.reviewer_ids),
            "papers": list(entity.paper_ids),
            "conflicts": [
                [entity.reviewer_ids[r], entity.paper_ids[p]] for r, p in sorted(entity.conflicts)
            ],
        }
    elif isinstance(entity, ReviewGraph):
        obj = {"review_sets": {R.name(i): [P.name(p) for p in s] for i, s in enumerate(entity.review_sets)}}
        if entity.params is not None:
            obj["params"] = {"mu": entity.params.mu, "lambda": entity.params.lam}
        else:
            obj["params"] = None
    elif isinstance(entity, Profile):
        obj = {R.name(i): [P.name(p) for p in r] for i, r in enumerate(entity.rankings)}
    elif isinstance(entity, PartitionResult):
        obj = {
            "C": {"reviewers": [R.name(i) for i in entity.reviewers_C], "papers": [P.name(p) for p in entity.papers_C]},
            "Cbar": {
                "reviewers": [R.name(i) for i in entity.reviewers_Cbar],
                "papers": [P.name(p) for p in entity.papers_Cbar],
            },
        }
    elif isinstance(entity, (tuple, list)):
        obj = [P.name(p) for p in entity]
    else:
        raise TypeError(f"cannot serialize {type(entity).__name__}")
    return dumps(obj)


# -- parse -------------------------------------------------------------------

def parse_assignment(text, graph: ConflictGraph | None = None) -> ReviewGraph:
    data = _loads(_text(text))
    if not isinstance(data, dict) or "review_sets" not in data:
        raise ParseError("assignment-json needs 'review_sets'")
    R, P = _tables(graph)
    raw = {R.lookup(k, "reviewer"): [P.lookup(x, "paper") for x in v] for k, v in data["review_sets"].items()}
    if graph is not None:
        m, n = graph.num_reviewers, graph.num_papers
    else:
        m = max(raw, default=-1) + 1
        n = max((p for v in raw.values() for p in v), default=-1) + 1
    params = data.get("params")
    if params is not None:
        try:
            params = AssignmentParams(int(params["mu"]), int(params["lambda"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad params block: {exc}") from exc
    sets = tuple(tuple(raw.get(i, ())) for i in range(m))
    return ReviewGraph(n, sets, params)


def parse_profile(text, graph: ConflictGraph | None = None, num_reviewers: int | None = None) -> Profile:
    data = _loads(_text(text))
    if not isinstance(data, dict):
        raise ParseError("profile-json must be an object keyed by reviewer id")
    R, P = _tables(graph)
    raw = {}
    for k, v in data.items():
        ranking = [P.lookup(x, "paper") for x in v]
        if len(set(ranking)) != len(ranking):
            raise ParseError(f"ranking of reviewer {k!r} contains a tie or repeat")
        raw[R.lookup(k, "reviewer")] = tuple(ranking)
    if num_reviewers is None:
        num_reviewers = graph.num_reviewers if graph is not None else max(raw, default=-1) + 1
    return Profile(tuple(raw.get(i, ()) for i in range(num_reviewers)))


def parse_ranking(text, graph: ConflictGraph | None = None) -> tuple:
    data = _loads(_text(text))
    if not isinstance(data, list):
        raise ParseError("ranking-json must be a list")
    _, P = _tables(graph)
    ranking = tuple(P.lookup(x, "paper") for x in data)
    if len(set(ranking)) != len(ranking):
        raise ParseError("ranking contains a tie or repeat")
    return ranking


def parse_partition(text, graph: ConflictGraph | None = None) -> PartitionResult:
    data = _loads(_text(text))
    try:
        R, P = _tables(graph)
        sides = []
        for key in ("C", "Cbar"):
            side = data[key]
            sides.append(
                (
                    tuple(R.lookup(x, "reviewer") for x in side["reviewers"]),
                    tuple(P.lookup(x, "paper") for x in side["papers"]),
                )
            )
    except (KeyError, TypeError) as exc:
        raise ParseError(f"partition-json malformed: {exc}") from exc
    (rc, pc), (rb, pb) = sides
    return PartitionResult(rc, pc, rb, pb)
