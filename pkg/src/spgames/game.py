"""Finite n-person shortest-path games.

Players ``1..n`` own the non-terminal vertices. A stationary strategy profile
picks one outgoing edge at every non-terminal vertex; from an initial vertex
the profile induces a play that either reaches ``t`` (every player pays the
sum of their local costs along it) or falls into a lasso (everyone pays
``INF``). All players minimize.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Literal, Sequence

from .exact import INF, Cost, Weight, rational
from .graph import (
    Digraph,
    Edge,
    NoPathError,
    NormalizationReport,
    distances_to,
    normalize,
    tight_successor,
)

DEFAULT_PROFILE_BUDGET = 2**20


class GameError(Exception):
    pass


class BudgetExceededError(GameError):
    """A brute-force enumeration would exceed its configured budget."""


@dataclass(frozen=True)
class SPGame:
    """Digraph, ownership and local costs.

    ``owner[v]`` is the player (1-based) moving at ``v`` and ``None`` for
    ``t``. ``costs[e]`` is the n-tuple of local costs of edge ``e``; nothing
    here forces them positive, :func:`validate` reports that.
    """

    graph: Digraph
    n: int
    owner: tuple[int | None, ...]
    costs: tuple[tuple[Weight, ...], ...]
    _lengths: tuple[tuple[Weight, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if len(self.owner) != self.graph.vertex_count:
            raise GameError("owner must list one entry per vertex")
        if len(self.costs) != self.graph.edge_count:
            raise GameError("costs must list one vector per edge")
        costs = tuple(tuple(rational(c) for c in vec) for vec in self.costs)
        object.__setattr__(self, "costs", costs)
        lengths = tuple(
            tuple(vec[i] if i < len(vec) else 0 for vec in costs) for i in range(self.n)
        )
        object.__setattr__(self, "_lengths", lengths)

    @classmethod
    def build(
        cls,
        n: int,
        owner: Sequence[int | None],
        edges: Iterable[tuple[int, int, Sequence[Weight | str]]],
        s: int = 0,
        t: int | None = None,
    ) -> SPGame:
        """Convenience constructor from ``(tail, head, costs)`` triples.

        ``t`` defaults to the single vertex whose owner is ``None``.
        """
        edges = list(edges)
        if t is None:
            terminals = [v for v, o in enumerate(owner) if o is None]
            if len(terminals) != 1:
                raise GameError("pass t explicitly or give exactly one unowned vertex")
            t = terminals[0]
        graph = Digraph.from_pairs(len(owner), [(u, w) for u, w, _ in edges], s, t)
        return cls(graph, n, tuple(owner), tuple(tuple(c) for _, _, c in edges))

    def lengths(self, i: int) -> tuple[Weight, ...]:
        """Local costs of player ``i`` indexed by edge id."""
        return self._lengths[i - 1]

    @property
    def players(self) -> range:
        return range(1, self.n + 1)

    def positions(self, i: int) -> list[int]:
        return [v for v, o in enumerate(self.owner) if o == i]

    def with_costs(self, costs: Sequence[Sequence[Weight]]) -> SPGame:
        return SPGame(self.graph, self.n, self.owner, tuple(tuple(c) for c in costs))


@dataclass(frozen=True)
class Strategy:
    """One player's choices as sorted ``(vertex, edge)`` pairs."""

    player: int
    choice: tuple[tuple[int, int], ...]

    def as_dict(self) -> dict[int, int]:
        return dict(self.choice)


@dataclass(frozen=True)
class StrategyProfile:
    """Chosen edge per vertex, indexed by vertex id (``None`` at ``t``)."""

    choice: tuple[int | None, ...]

    @classmethod
    def from_edges(cls, game: SPGame, edges: Iterable[int]) -> StrategyProfile:
        """Profile from one chosen edge per non-terminal vertex, any order."""
        choice: list[int | None] = [None] * game.graph.vertex_count
        for e in edges:
            choice[game.graph.edges[e].tail] = e
        return cls(tuple(choice))

    def strategy(self, game: SPGame, i: int) -> Strategy:
        return Strategy(i, tuple((v, self.choice[v]) for v in game.positions(i)))

    def replace(self, strategy: Strategy) -> StrategyProfile:
        choice = list(self.choice)
        for v, e in strategy.choice:
            choice[v] = e
        return StrategyProfile(tuple(choice))

    def edges(self) -> tuple[int, ...]:
        return tuple(e for e in self.choice if e is not None)


@dataclass(frozen=True)
class Play:
    """A play from ``origin``.

    Terminal plays end at ``t``. For cyclic plays ``steps`` runs up to and
    including the move that first revisits a position and ``cycle_start``
    is the index of the step leaving that position: steps before it form the
    lasso's handle, steps from it on form the cycle.
    """

    kind: Literal["terminal", "cyclic"]
    steps: tuple[int, ...]
    origin: int
    cycle_start: int | None = None

    @property
    def is_terminal(self) -> bool:
        return self.kind == "terminal"

    @property
    def prefix(self) -> tuple[int, ...]:
        return self.steps if self.cycle_start is None else self.steps[: self.cycle_start]

    @property
    def cycle(self) -> tuple[int, ...]:
        return () if self.cycle_start is None else self.steps[self.cycle_start :]


# -- validation --------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str
    edge: int | None = None
    player: int | None = None
    vertex: int | None = None


def validate(game: SPGame, *, positive: bool = True) -> list[Violation]:
    """All broken model invariants, as data. Empty list means valid.

    Checks ownership (a player in ``1..n`` on every non-terminal vertex, none
    on ``t``), that every player owns something, cost arity, strict
    positivity of local costs (skipped with ``positive=False``) and that the
    digraph is already normalized.
    """
    g = game.graph
    out: list[Violation] = []
    if game.n < 2:
        out.append(Violation("PlayerCountViolation", f"n={game.n} < 2"))
    for v, o in enumerate(game.owner):
        if v == g.t:
            if o is not None:
                out.append(Violation("OwnershipViolation", "t must be unowned", vertex=v))
        elif o is None or not 1 <= o <= game.n:
            out.append(Violation("OwnershipViolation", f"vertex {v} has owner {o!r}", vertex=v))
    owned = set(game.owner)
    for i in game.players:
        if i not in owned:
            out.append(Violation("EmptyPartViolation", f"player {i} owns no position", player=i))
    for e, vec in enumerate(game.costs):
        if len(vec) != game.n:
            out.append(Violation("CostArityViolation", f"edge {e} has {len(vec)} costs", edge=e))
            continue
        if positive:
            for i, c in enumerate(vec, start=1):
                if not c > 0:
                    out.append(
                        Violation("PositivityViolation", f"r_{i}(e{e}) = {c} is not positive", edge=e, player=i)
                    )
    try:
        _, report = normalize(g)
    except NoPathError as exc:
        out.append(Violation("NormalizationViolation", f"no (s, t)-path: {exc}"))
    else:
        if report.changed:
            out.append(
                Violation(
                    "NormalizationViolation",
                    f"not normalized: merge {list(report.merged)}, "
                    f"drop vertices {list(report.removed_vertices)}, "
                    f"delete edges {list(report.deleted_edges)}",
                )
            )
    return out


def normalize_game(game: SPGame, *, rooted: bool = True) -> tuple[SPGame, NormalizationReport]:
    """Normalize the digraph and carry ownership and costs along."""
    g, report = normalize(game.graph, rooted=rooted)
    owner: list[int | None] = [None] * g.vertex_count
    for v, new in enumerate(report.vertex_map):
        if new is not None and new != g.t:
            owner[new] = game.owner[v]
    costs: list[tuple[Weight, ...]] = [()] * g.edge_count
    for e, new in enumerate(report.edge_map):
        if new is not None:
            costs[new] = game.costs[e]
    return SPGame(g, game.n, tuple(owner), tuple(costs)), report


# -- plays and costs ---------------------------------------------------------


def play(game: SPGame, profile: StrategyProfile, v0: int) -> Play:
    """Follow ``profile`` from ``v0`` until ``t`` or a repeated position."""
    g = game.graph
    if v0 == g.t:
        raise GameError("a play starts at a non-terminal position")
    seen = {v0: 0}
    steps: list[int] = []
    v = v0
    while True:
        e = profile.choice[v]
        if e is None:
            raise GameError(f"profile has no move at vertex {v}")
        steps.append(e)
        v = g.edges[e].head
        if v == g.t:
            return Play("terminal", tuple(steps), v0)
        if v in seen:
            return Play("cyclic", tuple(steps), v0, seen[v])
        seen[v] = len(steps)


def effective_cost(game: SPGame, p: Play) -> tuple[Cost, ...]:
    if not p.is_terminal:
        return (INF,) * game.n
    return tuple(sum((game.costs[e][i] for e in p.steps), 0) for i in range(game.n))


def profile_cost(game: SPGame, profile: StrategyProfile, v0: int) -> tuple[Cost, ...]:
    return effective_cost(game, play(game, profile, v0))


# -- equilibria --------------------------------------------------------------


def induced_edges(game: SPGame, profile: StrategyProfile, i: int) -> set[int]:
    """Edges available when everyone except player ``i`` is frozen."""
    g = game.graph
    active: set[int] = set()
    for v, o in enumerate(game.owner):
        if v == g.t:
            continue
        if o == i:
            active.update(g.out[v])
        else:
            active.add(profile.choice[v])
    return active


def best_response_value(
    game: SPGame, profile: StrategyProfile, i: int, v0: int
) -> tuple[Cost, Strategy]:
    """Player ``i``'s cheapest outcome from ``v0`` against the others' fixed
    choices, and a strategy attaining it.

    Runs Dijkstra on the graph where every vertex not owned by ``i`` keeps
    only its chosen edge, with ``i``'s local costs as lengths. Each of ``i``'s
    positions takes its smallest-id edge on a shortest route to ``t`` (or its
    smallest-id edge when ``t`` is out of reach), so the returned strategy is
    total and deterministic.
    """
    g = game.graph
    length = game.lengths(i)
    active = induced_edges(game, profile, i)
    dist = distances_to(g, length, g.t, active)
    choice = []
    for v in game.positions(i):
        k = tight_successor(g, length, dist, v, active)
        choice.append((v, g.out[v][0] if k is None else k))
    value = INF if dist[v0] is None else dist[v0]
    return value, Strategy(i, tuple(choice))


@dataclass(frozen=True)
class NECheck:
    """Outcome of an NE test; truthy iff the profile is an equilibrium.

    On failure ``player`` can switch to ``deviation`` and pay ``improved``
    instead of ``current``.
    """

    holds: bool
    player: int | None = None
    deviation: Strategy | None = None
    current: Cost | None = None
    improved: Cost | None = None

    def __bool__(self) -> bool:
        return self.holds


def is_ne(game: SPGame, profile: StrategyProfile, v0: int | None = None) -> NECheck:
    """Nash test from ``v0`` (default ``s``) via one best-response Dijkstra per player."""
    v0 = game.graph.s if v0 is None else v0
    cost = profile_cost(game, profile, v0)
    for i in game.players:
        value, strategy = best_response_value(game, profile, i, v0)
        if value < cost[i - 1]:
            return NECheck(False, i, strategy, cost[i - 1], value)
    return NECheck(True)


def strategies(game: SPGame, i: int) -> Iterator[Strategy]:
    """Every pure stationary strategy of player ``i`` in lexicographic order."""
    g = game.graph
    verts = game.positions(i)
    for picks in itertools.product(*(g.out[v] for v in verts)):
        yield Strategy(i, tuple(zip(verts, picks)))


def is_ne_exhaustive(game: SPGame, profile: StrategyProfile, v0: int | None = None) -> NECheck:
    """Nash test by trying every alternative strategy of every player.

    Exponential; the reference the Dijkstra test is checked against.
    """
    v0 = game.graph.s if v0 is None else v0
    cost = profile_cost(game, profile, v0)
    for i in game.players:
        for strategy in strategies(game, i):
            alt = profile_cost(game, profile.replace(strategy), v0)
            if alt[i - 1] < cost[i - 1]:
                return NECheck(False, i, strategy, cost[i - 1], alt[i - 1])
    return NECheck(True)


def is_une(game: SPGame, profile: StrategyProfile) -> bool:
    """Uniform (subgame perfect) NE: an NE from every non-terminal position."""
    g = game.graph
    return all(is_ne(game, profile, v) for v in range(g.vertex_count) if v != g.t)


def profile_count(game: SPGame) -> int:
    g = game.graph
    return math.prod(len(g.out[v]) for v in range(g.vertex_count) if v != g.t)


def profiles(game: SPGame, budget: int = DEFAULT_PROFILE_BUDGET) -> Iterator[StrategyProfile]:
    """All profiles, lexicographic over per-vertex choices in vertex-id order."""
    total = profile_count(game)
    if total > budget:
        raise BudgetExceededError(f"{total} profiles exceed the budget of {budget}")
    g = game.graph
    slots = [g.out[v] if v != g.t else (None,) for v in range(g.vertex_count)]
    for choice in itertools.product(*slots):
        yield StrategyProfile(choice)


def _cost_table(game: SPGame, v0: int, budget: int) -> tuple[list[StrategyProfile], list[tuple[Cost, ...]]]:
    plist = list(profiles(game, budget))
    return plist, [profile_cost(game, p, v0) for p in plist]


def ne_flags_exhaustive(
    game: SPGame, v0: int | None = None, budget: int = DEFAULT_PROFILE_BUDGET
) -> tuple[list[StrategyProfile], list[bool]]:
    """NE flag of every profile from the full cost table.

    For each player the profiles are grouped by everyone else's choices; a
    profile is an NE iff each player's cost equals the minimum over their
    group, which is exactly "no unilateral deviation helps". Uses no
    shortest-path machinery, so it also works with non-positive costs.
    """
    g = game.graph
    v0 = g.s if v0 is None else v0
    plist, table = _cost_table(game, v0, budget)
    flags = [True] * len(plist)
    for i in game.players:
        keep = [v for v in range(g.vertex_count) if v != g.t and game.owner[v] != i]
        best: dict[tuple, Cost] = {}
        keys = []
        for p, c in zip(plist, table):
            key = tuple(p.choice[v] for v in keep)
            keys.append(key)
            if key not in best or c[i - 1] < best[key]:
                best[key] = c[i - 1]
        for k, (key, c) in enumerate(zip(keys, table)):
            if c[i - 1] > best[key]:
                flags[k] = False
    return plist, flags


def enumerate_ne(
    game: SPGame,
    v0: int | None = None,
    mode: Literal["all", "first"] = "all",
    budget: int = DEFAULT_PROFILE_BUDGET,
    method: Literal["dijkstra", "exhaustive"] = "dijkstra",
) -> list[StrategyProfile]:
    """Nash equilibria from ``v0`` by brute force over all profiles.

    ``method="dijkstra"`` tests each profile with :func:`is_ne` and needs
    positive costs; ``method="exhaustive"`` uses the full cost table.
    """
    v0 = game.graph.s if v0 is None else v0
    if method == "exhaustive":
        plist, flags = ne_flags_exhaustive(game, v0, budget)
        found = [p for p, ok in zip(plist, flags) if ok]
        return found[:1] if mode == "first" else found
    if method != "dijkstra":
        raise ValueError(f"unknown method {method!r}")
    found = []
    for p in profiles(game, budget):
        if is_ne(game, p, v0):
            found.append(p)
            if mode == "first":
                break
    return found


def split_by_play(game: SPGame, found: Iterable[StrategyProfile], v0: int | None = None):
    """Partition profiles into (terminal-play, cyclic-play) lists."""
    v0 = game.graph.s if v0 is None else v0
    terminal, cyclic = [], []
    for p in found:
        (terminal if play(game, p, v0).is_terminal else cyclic).append(p)
    return terminal, cyclic


# -- bipartite subdivision ---------------------------------------------------


def bipartite_subdivision(game: SPGame) -> tuple[SPGame, list[tuple[int, ...]]]:
    """Subdivision plus, per original edge, the ids of the edges replacing it."""
    if game.n != 2:
        raise GameError("bipartite subdivision is defined for two players")
    g = game.graph
    owner = list(game.owner)
    pairs: list[tuple[int, int]] = []
    costs: list[tuple[Weight, ...]] = []
    edge_map: list[tuple[int, ...]] = []
    for e in g.edges:
        i = owner[e.tail]
        if e.head != g.t and owner[e.head] == i:
            v = len(owner)
            owner.append(3 - i)
            half = tuple(rational(Fraction(c) / 2) for c in game.costs[e.id])
            edge_map.append((len(pairs), len(pairs) + 1))
            pairs += [(e.tail, v), (v, e.head)]
            costs += [half, half]
        else:
            edge_map.append((len(pairs),))
            pairs.append((e.tail, e.head))
            costs.append(game.costs[e.id])
    graph = Digraph(
        len(owner), tuple(Edge(k, u, w) for k, (u, w) in enumerate(pairs)), g.s, g.t
    )
    return SPGame(graph, 2, tuple(owner), tuple(costs)), edge_map


def subdivide_to_bipartite(game: SPGame) -> SPGame:
    """Split every same-owner move between non-terminal positions by a fresh
    position of the other player, halving each local cost on both halves."""
    return bipartite_subdivision(game)[0]


def lift_profile(
    game: SPGame, sub: SPGame, edge_map: Sequence[tuple[int, ...]], profile: StrategyProfile
) -> StrategyProfile:
    """The profile of the subdivided game that plays like ``profile``."""
    choice: list[int | None] = [None] * sub.graph.vertex_count
    for v, e in enumerate(profile.choice):
        if e is None:
            continue
        parts = edge_map[e]
        choice[v] = parts[0]
    for parts in edge_map:
        if len(parts) == 2:
            middle = sub.graph.edges[parts[1]].tail
            choice[middle] = parts[1]
    return StrategyProfile(tuple(choice))

