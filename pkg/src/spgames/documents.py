"""JSON game documents, run records and DOT export.

A game document looks like::

    {
      "schema_version": "1",
      "n": 2,
      "s": 0,
      "t": 2,
      "vertices": [{"id": 0, "owner": 1}, {"id": 1, "owner": 2},
                   {"id": 2, "owner": "terminal"}],
      "edges": [{"id": 0, "tail": 0, "head": 1, "costs": ["1", "3/2"]}, ...]
    }

Costs are canonical rational strings so documents round-trip exactly.
"""

from __future__ import annotations

import json
from pathlib import Path as FsPath
from typing import Any

from .exact import format_cost, format_rational, rational
from .game import SPGame, StrategyProfile
from .graph import Digraph, Edge, to_dot

SCHEMA_VERSION = "1"


class DocumentError(ValueError):
    pass


def game_to_document(game: SPGame) -> dict[str, Any]:
    g = game.graph
    return {
        "schema_version": SCHEMA_VERSION,
        "n": game.n,
        "s": g.s,
        "t": g.t,
        "vertices": [
            {"id": v, "owner": "terminal" if v == g.t else game.owner[v]}
            for v in range(g.vertex_count)
        ],
        "edges": [
            {
                "id": e.id,
                "tail": e.tail,
                "head": e.head,
                "costs": [format_rational(c) for c in game.costs[e.id]],
            }
            for e in g.edges
        ],
    }


def _int(doc: dict, key: str) -> int:
    value = doc.get(key)
    if not isinstance(value, int) or isinstance(value, bool):
        raise DocumentError(f"{key!r} must be an integer, got {value!r}")
    return value


def game_from_document(doc: Any) -> SPGame:
    if not isinstance(doc, dict):
        raise DocumentError("a game document is a JSON object")
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise DocumentError(f"unsupported schema_version {doc.get('schema_version')!r}")
    n, s, t = _int(doc, "n"), _int(doc, "s"), _int(doc, "t")
    vertices = doc.get("vertices")
    edges = doc.get("edges")
    if not isinstance(vertices, list) or not isinstance(edges, list):
        raise DocumentError("'vertices' and 'edges' must be lists")
    owner: list[int | None] = []
    for k, item in enumerate(vertices):
        if not isinstance(item, dict) or _int(item, "id") != k:
            raise DocumentError(f"vertex entry {k} must have id {k}")
        o = item.get("owner")
        if o == "terminal":
            owner.append(None)
        elif isinstance(o, int) and not isinstance(o, bool):
            owner.append(o)
        else:
            raise DocumentError(f"vertex {k} has invalid owner {o!r}")
    if not 0 <= t < len(owner) or owner[t] is not None:
        raise DocumentError("t must be the vertex marked 'terminal'")
    if owner.count(None) != 1:
        raise DocumentError("exactly one vertex must be 'terminal'")
    parsed: list[Edge] = []
    costs = []
    for k, item in enumerate(edges):
        if not isinstance(item, dict) or _int(item, "id") != k:
            raise DocumentError(f"edge entry {k} must have id {k}")
        tail, head = _int(item, "tail"), _int(item, "head")
        raw = item.get("costs")
        if not isinstance(raw, list) or len(raw) != n:
            raise DocumentError(f"edge {k} needs a list of {n} costs")
        try:
            vec = tuple(rational(str(c)) if isinstance(c, str) else rational(c) for c in raw)
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise DocumentError(f"edge {k}: {exc}") from None
        parsed.append(Edge(k, tail, head))
        costs.append(vec)
    try:
        graph = Digraph(len(owner), tuple(parsed), s, t)
        return SPGame(graph, n, tuple(owner), tuple(costs))
    except Exception as exc:  # graph/game constructors validate structure
        raise DocumentError(str(exc)) from None


def dumps_game(game: SPGame) -> str:
    return json.dumps(game_to_document(game), indent=2) + "\n"


def loads_game(text: str) -> SPGame:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON: {exc}") from None
    return game_from_document(doc)


def read_game(path: str | FsPath) -> SPGame:
    return loads_game(FsPath(path).read_text())


def write_game(path: str | FsPath, game: SPGame) -> None:
    FsPath(path).write_text(dumps_game(game))


def profile_to_list(profile: StrategyProfile) -> list[int | None]:
    return list(profile.choice)


def profile_from_list(items: list[int | None]) -> StrategyProfile:
    return StrategyProfile(tuple(items))


def game_to_dot(game: SPGame) -> str:
    """DOT with vertices labelled ``v{id}:P{owner}`` and cost-vector edge labels."""
    g = game.graph
    vlabels = ["t" if v == g.t else f"v{v}:P{game.owner[v]}" for v in range(g.vertex_count)]
    elabels = ["(" + ",".join(format_cost(c) for c in game.costs[e.id]) + ")" for e in g.edges]
    return to_dot(g, vlabels, elabels)


def record_line(record: dict[str, Any]) -> str:
    """One run record as a single JSON line with stable key order."""
    return json.dumps(record, sort_keys=True, separators=(",", ":"))
