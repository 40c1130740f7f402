"""Bi-shortest-path sets of two-person games.

For player ``i`` and each of their strategies, delete the unchosen moves at
``i``'s positions and collect the (s, t)-paths that are shortest under the
*opponent's* local costs. A strategy that cuts ``s`` off from ``t``
contributes the symbolic path ``C`` instead. The two players' sets either
share a real path (strong intersection), share only ``C`` (weak), or are
disjoint.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Literal

from .game import (
    DEFAULT_PROFILE_BUDGET,
    BudgetExceededError,
    GameError,
    SPGame,
    Strategy,
    StrategyProfile,
    enumerate_ne,
    play,
    split_by_play,
    strategies,
)
from .graph import Path, dijkstra, enumerate_st_paths, path_weight, shortest_paths

TieMode = Literal["all_min", "lex_unique"]


class _SymbolicPath:
    def __repr__(self) -> str:
        return "C"

    def __reduce__(self):
        return "SYMBOLIC_C"


SYMBOLIC_C = _SymbolicPath()


@dataclass(frozen=True)
class SPSet:
    player: int
    paths: frozenset[Path]
    contains_symbolic_c: bool
    tie_mode: str = "all_min"

    def members(self) -> frozenset:
        """Real paths plus ``SYMBOLIC_C`` when present."""
        return self.paths | {SYMBOLIC_C} if self.contains_symbolic_c else self.paths


class Verdict(str, enum.Enum):
    STRONG = "StrongIntersect"
    WEAK_ONLY = "WeakOnly"
    EMPTY = "Empty"


@dataclass(frozen=True)
class BiSPVerdict:
    kind: Verdict
    witness: Path | None
    sets: tuple[SPSet, SPSet] = field(repr=False)


def _active_edges(game: SPGame, strategy: Strategy) -> set[int]:
    g = game.graph
    active: set[int] = set()
    chosen = strategy.as_dict()
    for v in range(g.vertex_count):
        if v == g.t:
            continue
        if v in chosen:
            active.add(chosen[v])
        else:
            active.update(g.out[v])
    return active


def _check_two_person(game: SPGame, i: int, budget: int) -> None:
    if game.n != 2:
        raise GameError("Bi-SP sets are defined for two-person games")
    if i not in (1, 2):
        raise GameError(f"player must be 1 or 2, got {i}")
    g = game.graph
    count = math.prod(len(g.out[v]) for v in game.positions(i))
    if count > budget:
        raise BudgetExceededError(f"player {i} has {count} strategies, budget {budget}")


def sp_set(
    game: SPGame,
    i: int,
    tie_mode: TieMode = "all_min",
    budget: int = DEFAULT_PROFILE_BUDGET,
    path_cap: int = 10**6,
) -> SPSet:
    """Shortest (s, t)-paths under the opponent's costs, over all strategies of ``i``.

    ``lex_unique`` keeps only the tie-broken Dijkstra path per strategy;
    ``all_min`` keeps every minimum-length path.
    """
    _check_two_person(game, i, budget)
    g = game.graph
    length = game.lengths(3 - i)
    found: set[Path] = set()
    stranded = False
    for strategy in strategies(game, i):
        active = _active_edges(game, strategy)
        if tie_mode == "lex_unique":
            best = dijkstra(g, length, g.s, g.t, active)
            paths = [] if best is None else [best[0]]
        elif tie_mode == "all_min":
            paths = shortest_paths(g, length, g.s, g.t, active, cap=path_cap)
        else:
            raise ValueError(f"unknown tie mode {tie_mode!r}")
        if paths:
            found.update(paths)
        else:
            stranded = True
    return SPSet(i, frozenset(found), stranded, tie_mode)


def sp_set_bruteforce(
    game: SPGame, i: int, budget: int = DEFAULT_PROFILE_BUDGET, path_cap: int = 10**6
) -> SPSet:
    """``all_min`` SP set from plain path enumeration; independent of Dijkstra."""
    _check_two_person(game, i, budget)
    g = game.graph
    length = game.lengths(3 - i)
    found: set[Path] = set()
    stranded = False
    for strategy in strategies(game, i):
        paths = enumerate_st_paths(g, path_cap, active=_active_edges(game, strategy))
        if not paths:
            stranded = True
            continue
        sums = [path_weight(p, length) for p in paths]
        low = min(sums)
        found.update(p for p, w in zip(paths, sums) if w == low)
    return SPSet(i, frozenset(found), stranded, "all_min")


def verdict_from_sets(first: SPSet, second: SPSet) -> BiSPVerdict:
    common = first.paths & second.paths
    if common:
        return BiSPVerdict(Verdict.STRONG, min(common), (first, second))
    if first.contains_symbolic_c and second.contains_symbolic_c:
        return BiSPVerdict(Verdict.WEAK_ONLY, None, (first, second))
    return BiSPVerdict(Verdict.EMPTY, None, (first, second))


def bisp_check(
    game: SPGame,
    tie_mode: TieMode = "all_min",
    budget: int = DEFAULT_PROFILE_BUDGET,
    path_cap: int = 10**6,
) -> BiSPVerdict:
    """Do the two players' SP sets intersect?

    The witness of a strong intersection is the lexicographically smallest
    common path. ``EMPTY`` refutes both the strong and the weak statement for
    this game; ``WEAK_ONLY`` refutes only the strong one.
    """
    return verdict_from_sets(
        sp_set(game, 1, tie_mode, budget, path_cap),
        sp_set(game, 2, tie_mode, budget, path_cap),
    )


@dataclass(frozen=True)
class EquivalenceReport:
    """Terminal-NE existence against the ``all_min`` Bi-SP verdict.

    ``missing`` lists terminal equilibria whose play is absent from some SP
    set, as ``(profile, play steps, players whose set lacks it)``.
    """

    terminal_ne: tuple[StrategyProfile, ...]
    cyclic_ne: tuple[StrategyProfile, ...]
    verdict: BiSPVerdict
    missing: tuple[tuple[StrategyProfile, Path, tuple[int, ...]], ...]

    @property
    def agree(self) -> bool:
        has_ne = bool(self.terminal_ne)
        return has_ne == (self.verdict.kind is Verdict.STRONG) and not self.missing


def ne_bisp_equivalence(
    game: SPGame, budget: int = DEFAULT_PROFILE_BUDGET, path_cap: int = 10**6
) -> EquivalenceReport:
    """Cross-check: a terminal NE exists iff the SP sets share a real path,
    and every terminal NE's play lies in both sets."""
    found = enumerate_ne(game, game.graph.s, "all", budget)
    terminal, cyclic = split_by_play(game, found)
    verdict = bisp_check(game, "all_min", budget, path_cap)
    missing = []
    for p in terminal:
        steps = play(game, p, game.graph.s).steps
        absent = tuple(k + 1 for k, sp in enumerate(verdict.sets) if steps not in sp.paths)
        if absent:
            missing.append((p, steps, absent))
    return EquivalenceReport(tuple(terminal), tuple(cyclic), verdict, tuple(missing))
