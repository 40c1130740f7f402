"""Directed multigraphs with a source ``s`` and a terminal ``t``.

Vertices and edges are dense integer ids. Edge ids are insertion order and
double as the global tie-break order: whenever several answers are equally
good, the one whose edge-id sequence is lexicographically smallest wins.

Paths are plain tuples of edge ids. Lengths and weights are sequences indexed
by edge id holding exact rationals (see :mod:`spgames.exact`).
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Collection, Iterable, Sequence

from .exact import Weight

Path = tuple[int, ...]


class GraphError(Exception):
    pass


class NoPathError(GraphError):
    """The digraph has no directed (s, t)-path, even after repairs."""


class NonPositiveLengthError(GraphError, ValueError):
    pass


class PathExplosionError(GraphError):
    """More paths exist than the caller's cap allows."""


class NegativeCycleError(GraphError):
    pass


@dataclass(frozen=True)
class Edge:
    id: int
    tail: int
    head: int


@dataclass(frozen=True)
class Digraph:
    vertex_count: int
    edges: tuple[Edge, ...]
    s: int
    t: int
    out: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)
    into: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        n = self.vertex_count
        if not (0 <= self.s < n and 0 <= self.t < n) or self.s == self.t:
            raise GraphError(f"s={self.s}, t={self.t} must be distinct vertices of 0..{n - 1}")
        out: list[list[int]] = [[] for _ in range(n)]
        into: list[list[int]] = [[] for _ in range(n)]
        for k, e in enumerate(self.edges):
            if e.id != k:
                raise GraphError(f"edge ids must be dense and ordered, got {e.id} at {k}")
            if not (0 <= e.tail < n and 0 <= e.head < n):
                raise GraphError(f"edge {e.id} has an endpoint outside 0..{n - 1}")
            out[e.tail].append(k)
            into[e.head].append(k)
        object.__setattr__(self, "out", tuple(map(tuple, out)))
        object.__setattr__(self, "into", tuple(map(tuple, into)))

    @classmethod
    def from_pairs(cls, vertex_count: int, pairs: Iterable[tuple[int, int]], s: int, t: int) -> Digraph:
        edges = tuple(Edge(k, u, w) for k, (u, w) in enumerate(pairs))
        return cls(vertex_count, edges, s, t)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def tail(self, e: int) -> int:
        return self.edges[e].tail

    def head(self, e: int) -> int:
        return self.edges[e].head

    def pairs(self) -> list[tuple[int, int]]:
        return [(e.tail, e.head) for e in self.edges]


def path_vertices(g: Digraph, path: Sequence[int], origin: int | None = None) -> list[int]:
    """Vertex sequence visited by ``path``; ``origin`` is only needed for empty paths."""
    if not path:
        return [] if origin is None else [origin]
    verts = [g.edges[path[0]].tail]
    for e in path:
        edge = g.edges[e]
        if edge.tail != verts[-1]:
            raise GraphError(f"edge {e} does not continue the path at vertex {verts[-1]}")
        verts.append(edge.head)
    return verts


def path_weight(path: Iterable[int], weight: Sequence[Weight]) -> Weight:
    return sum((weight[e] for e in path), 0)


# -- normalization -----------------------------------------------------------


@dataclass(frozen=True)
class NormalizationReport:
    """What :func:`normalize` changed.

    ``vertex_map`` and ``edge_map`` send old ids to new ids (``None`` when the
    item is gone); merged vertices map to the new terminal.
    """

    merged: tuple[int, ...]
    removed_vertices: tuple[int, ...]
    deleted_edges: tuple[int, ...]
    vertex_map: tuple[int | None, ...]
    edge_map: tuple[int | None, ...]

    @property
    def changed(self) -> bool:
        return bool(self.merged or self.removed_vertices or self.deleted_edges)


def _reach(n: int, adj: dict[int, list[int]], start: Iterable[int]) -> list[bool]:
    seen = [False] * n
    stack = list(start)
    for v in stack:
        seen[v] = True
    while stack:
        v = stack.pop()
        for w in adj.get(v, ()):
            if not seen[w]:
                seen[w] = True
                stack.append(w)
    return seen


def normalize(g: Digraph, *, rooted: bool = True) -> tuple[Digraph, NormalizationReport]:
    """Repair ``g`` until every non-terminal vertex has a move, ``t`` has none,
    an (s, t)-path exists and every edge lies on some (s, t)-walk.

    Dead-end vertices are merged into ``t``; self-loops and edges whose tail is
    unreachable from ``s`` or whose head cannot reach ``t`` are deleted;
    vertices left without edges are dropped. The steps repeat to a fixpoint.

    With ``rooted=False`` the reachability-from-``s`` requirement is dropped
    (used for subgames where every position may be initial) and ``s`` is only
    nominal: if it disappears, the smallest surviving non-terminal vertex
    takes its place.
    """
    n, t = g.vertex_count, g.t
    head = [e.head for e in g.edges]
    tail = [e.tail for e in g.edges]
    alive_e = [True] * len(g.edges)
    alive_v = [True] * n
    merged: list[int] = []
    removed: list[int] = []

    # outgoing edges of t are never legal moves
    for k in g.out[t]:
        alive_e[k] = False

    changed = True
    while changed:
        changed = False
        outdeg = [0] * n
        indeg = [0] * n
        for k, ok in enumerate(alive_e):
            if ok:
                outdeg[tail[k]] += 1
                indeg[head[k]] += 1
        for v in range(n):
            if v == t or not alive_v[v] or outdeg[v]:
                continue
            if rooted and v == g.s:
                raise NoPathError("s has no outgoing move left")
            alive_v[v] = False
            changed = True
            if indeg[v]:
                merged.append(v)
                for k, ok in enumerate(alive_e):
                    if ok and head[k] == v:
                        head[k] = t
            else:
                removed.append(v)

        fwd: dict[int, list[int]] = {}
        bwd: dict[int, list[int]] = {}
        for k, ok in enumerate(alive_e):
            if ok:
                fwd.setdefault(tail[k], []).append(head[k])
                bwd.setdefault(head[k], []).append(tail[k])
        from_s = _reach(n, fwd, [g.s]) if rooted else [True] * n
        to_t = _reach(n, bwd, [t])
        for k, ok in enumerate(alive_e):
            if ok and (tail[k] == head[k] or not from_s[tail[k]] or not to_t[head[k]]):
                alive_e[k] = False
                changed = True

        touched = [False] * n
        for k, ok in enumerate(alive_e):
            if ok:
                touched[tail[k]] = touched[head[k]] = True
        for v in range(n):
            if alive_v[v] and not touched[v] and v != t and not (rooted and v == g.s):
                alive_v[v] = False
                removed.append(v)
                changed = True

    vertex_map: list[int | None] = [None] * n
    next_id = 0
    for v in range(n):
        if alive_v[v]:
            vertex_map[v] = next_id
            next_id += 1
    for v in merged:
        vertex_map[v] = vertex_map[t]

    s = g.s
    if not alive_v[s]:
        if rooted:
            raise NoPathError("s was merged into t")
        candidates = [v for v in range(n) if alive_v[v] and v != t]
        if not candidates:
            raise NoPathError("no non-terminal vertex survives")
        s = candidates[0]

    edge_map: list[int | None] = [None] * len(g.edges)
    new_edges: list[Edge] = []
    for k, ok in enumerate(alive_e):
        if ok:
            edge_map[k] = len(new_edges)
            new_edges.append(Edge(len(new_edges), vertex_map[tail[k]], vertex_map[head[k]]))

    out = Digraph(next_id, tuple(new_edges), vertex_map[s], vertex_map[t])
    if not out.out[out.s]:
        raise NoPathError("no (s, t)-path")
    report = NormalizationReport(
        merged=tuple(merged),
        removed_vertices=tuple(sorted(removed)),
        deleted_edges=tuple(k for k, ok in enumerate(alive_e) if not ok),
        vertex_map=tuple(vertex_map),
        edge_map=tuple(edge_map),
    )
    return out, report


def is_bidirected(g: Digraph) -> bool:
    """Every move between two non-terminal vertices has its reverse present."""
    present = {(e.tail, e.head) for e in g.edges}
    return all(
        (e.head, e.tail) in present
        for e in g.edges
        if e.tail != g.t and e.head != g.t
    )


# -- shortest paths ----------------------------------------------------------


def _check_lengths(length: Sequence[Weight], edges: Iterable[int]) -> None:
    for k in edges:
        if not length[k] > 0:
            raise NonPositiveLengthError(f"edge {k} has non-positive length {length[k]}")


def distances_to(
    g: Digraph,
    length: Sequence[Weight],
    target: int,
    active: Collection[int] | None = None,
) -> list[Weight | None]:
    """Exact shortest distance from every vertex to ``target`` (``None`` if
    unreachable), using only edges in ``active`` (default: all)."""
    edges = range(g.edge_count) if active is None else active
    _check_lengths(length, edges)
    allowed = None if active is None else set(active)
    dist: list[Weight | None] = [None] * g.vertex_count
    dist[target] = 0
    heap: list[tuple[Weight, int]] = [(0, target)]
    done = [False] * g.vertex_count
    while heap:
        d, v = heapq.heappop(heap)
        if done[v]:
            continue
        done[v] = True
        for k in g.into[v]:
            if allowed is not None and k not in allowed:
                continue
            u = g.edges[k].tail
            nd = d + length[k]
            if dist[u] is None or nd < dist[u]:
                dist[u] = nd
                heapq.heappush(heap, (nd, u))
    return dist


def tight_successor(
    g: Digraph,
    length: Sequence[Weight],
    dist: Sequence[Weight | None],
    v: int,
    active: Collection[int] | None = None,
) -> int | None:
    """Smallest-id edge out of ``v`` that starts a shortest path to the target."""
    if dist[v] is None:
        return None
    for k in g.out[v]:
        if active is not None and k not in active:
            continue
        w = g.edges[k].head
        if dist[w] is not None and length[k] + dist[w] == dist[v]:
            return k
    return None


def dijkstra(
    g: Digraph,
    length: Sequence[Weight],
    source: int,
    target: int,
    active: Collection[int] | None = None,
) -> tuple[Path, Weight] | None:
    """Shortest ``source``-``target`` path and its exact length, or ``None``.

    Lengths must be strictly positive. Among equally short paths the one with
    the lexicographically smallest edge-id sequence is returned: distances to
    the target are computed first, then the path greedily follows the
    smallest tight edge.
    """
    if active is not None and not isinstance(active, (set, frozenset)):
        active = set(active)
    dist = distances_to(g, length, target, active)
    if dist[source] is None:
        return None
    path: list[int] = []
    v = source
    while v != target:
        k = tight_successor(g, length, dist, v, active)
        assert k is not None
        path.append(k)
        v = g.edges[k].head
    return tuple(path), dist[source]


def shortest_paths(
    g: Digraph,
    length: Sequence[Weight],
    source: int,
    target: int,
    active: Collection[int] | None = None,
    cap: int = 10**6,
) -> list[Path]:
    """Every minimum-length ``source``-``target`` path, in lexicographic order."""
    if active is not None and not isinstance(active, (set, frozenset)):
        active = set(active)
    dist = distances_to(g, length, target, active)
    if dist[source] is None:
        return []
    found: list[Path] = []
    stack: list[int] = []

    def walk(v: int) -> None:
        if v == target:
            if len(found) >= cap:
                raise PathExplosionError(f"more than {cap} shortest paths")
            found.append(tuple(stack))
            return
        for k in g.out[v]:
            if active is not None and k not in active:
                continue
            w = g.edges[k].head
            if dist[w] is not None and length[k] + dist[w] == dist[v]:
                stack.append(k)
                walk(w)
                stack.pop()

    walk(source)
    return found


def enumerate_st_paths(
    g: Digraph,
    cap: int = 10**6,
    *,
    source: int | None = None,
    target: int | None = None,
    active: Collection[int] | None = None,
) -> list[Path]:
    """All simple directed paths from ``source`` (default s) to ``target``
    (default t) in lexicographic edge-id order.

    Raises PathExplosionError once more than ``cap`` paths have been found.
    """
    if cap <= 0:
        raise ValueError("cap must be positive")
    source = g.s if source is None else source
    target = g.t if target is None else target
    if active is not None and not isinstance(active, (set, frozenset)):
        active = set(active)
    found: list[Path] = []
    on_path = [False] * g.vertex_count
    stack: list[int] = []

    def walk(v: int) -> None:
        if v == target:
            if len(found) >= cap:
                raise PathExplosionError(f"more than {cap} simple paths")
            found.append(tuple(stack))
            return
        on_path[v] = True
        for k in g.out[v]:
            if active is not None and k not in active:
                continue
            w = g.edges[k].head
            if not on_path[w]:
                stack.append(k)
                walk(w)
                stack.pop()
        on_path[v] = False

    walk(source)
    return found


def enumerate_cycles(g: Digraph, cap: int = 10**6) -> list[Path]:
    """All simple directed cycles, each rotated to start at its smallest vertex.

    Brute force; meant for small graphs and as a test oracle.
    """
    found: list[Path] = []
    for root in range(g.vertex_count):
        on_path = [False] * g.vertex_count
        stack: list[int] = []

        def walk(v: int) -> None:
            on_path[v] = True
            for k in g.out[v]:
                w = g.edges[k].head
                if w == root:
                    if len(found) >= cap:
                        raise PathExplosionError(f"more than {cap} cycles")
                    found.append(tuple(stack) + (k,))
                elif w > root and not on_path[w]:
                    stack.append(k)
                    walk(w)
                    stack.pop()
            on_path[v] = False

        walk(root)
    return found


def bellman_ford_to(g: Digraph, weight: Sequence[Weight], target: int) -> list[Weight | None]:
    """Shortest distance from every vertex to ``target`` with arbitrary-sign
    weights. Raises NegativeCycleError if a negative cycle can reach ``target``."""
    dist: list[Weight | None] = [None] * g.vertex_count
    dist[target] = 0
    for _ in range(g.vertex_count):
        updated = False
        for e in g.edges:
            dh = dist[e.head]
            if dh is None:
                continue
            nd = weight[e.id] + dh
            if dist[e.tail] is None or nd < dist[e.tail]:
                dist[e.tail] = nd
                updated = True
        if not updated:
            return dist
    raise NegativeCycleError("negative cycle reaches the target")


# -- cycles ------------------------------------------------------------------


def min_mean_cycle(g: Digraph, weight: Sequence[Weight]) -> tuple[Weight, Path] | None:
    """Minimum cycle mean over all directed cycles, with a witness cycle.

    Karp's recurrence from a virtual source joined to every vertex gives the
    exact mean. The witness is a cycle among the edges that are tight for the
    potential of the weights shifted by that mean; every such cycle has
    exactly the minimum mean. Returns ``None`` for acyclic graphs.
    """
    n = g.vertex_count
    if n == 0 or not g.edges:
        return None
    # table[k][v]: minimum weight of a walk with exactly k edges ending at v
    table: list[list[Weight | None]] = [[0] * n]
    for _ in range(n):
        prev = table[-1]
        row: list[Weight | None] = [None] * n
        for e in g.edges:
            pu = prev[e.tail]
            if pu is None:
                continue
            cand = pu + weight[e.id]
            if row[e.head] is None or cand < row[e.head]:
                row[e.head] = cand
        table.append(row)

    best: Weight | None = None
    for v in range(n):
        dn = table[n][v]
        if dn is None:
            continue
        worst: Weight | None = None
        for k in range(n):
            dk = table[k][v]
            if dk is None:
                continue
            ratio = Fraction(dn - dk, n - k)
            if worst is None or ratio > worst:
                worst = ratio
        if worst is not None and (best is None or worst < best):
            best = worst
    if best is None:
        return None
    mean = best.numerator if best.denominator == 1 else best

    # shifted weights have no negative cycle; potentials from a virtual source
    shifted = [weight[e.id] - mean for e in g.edges]
    pot: list[Weight] = [0] * n
    for _ in range(n):
        updated = False
        for e in g.edges:
            cand = pot[e.tail] + shifted[e.id]
            if cand < pot[e.head]:
                pot[e.head] = cand
                updated = True
        if not updated:
            break
    tight = [
        [e.id for e in g.edges if e.tail == v and pot[v] + shifted[e.id] == pot[e.head]]
        for v in range(n)
    ]
    cycle = _first_cycle(g, tight)
    assert cycle is not None, "tight subgraph must contain a minimum-mean cycle"
    return mean, cycle


def _first_cycle(g: Digraph, adj: Sequence[Sequence[int]]) -> Path | None:
    """Some cycle in the edge subgraph ``adj``, rotated to its smallest edge id."""
    state = [0] * g.vertex_count  # 0 new, 1 on stack, 2 done
    stack: list[int] = []
    pos: dict[int, int] = {}

    def walk(v: int) -> Path | None:
        state[v] = 1
        pos[v] = len(stack)
        for k in adj[v]:
            w = g.edges[k].head
            if state[w] == 1:
                cyc = stack[pos[w]:] + [k]
                i = cyc.index(min(cyc))
                return tuple(cyc[i:] + cyc[:i])
            if state[w] == 0:
                stack.append(k)
                found = walk(w)
                if found is not None:
                    return found
                stack.pop()
        state[v] = 2
        return None

    for v in range(g.vertex_count):
        if state[v] == 0:
            found = walk(v)
            if found is not None:
                return found
    return None


# -- export ------------------------------------------------------------------


def to_dot(
    g: Digraph,
    vertex_labels: Sequence[str] | None = None,
    edge_labels: Sequence[str] | None = None,
    name: str = "G",
) -> str:
    """Graphviz DOT text, ordered by vertex and edge ids."""
    lines = [f"digraph {name} {{"]
    for v in range(g.vertex_count):
        label = vertex_labels[v] if vertex_labels else ("t" if v == g.t else f"v{v}")
        shape = ", shape=doublecircle" if v == g.t else ""
        lines.append(f'  {v} [label="{label}"{shape}];')
    for e in g.edges:
        label = f' [label="{edge_labels[e.id]}"]' if edge_labels else ""
        lines.append(f"  {e.tail} -> {e.head}{label};")
    lines.append("}")
    return "\n".join(lines) + "\n"

