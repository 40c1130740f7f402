"""Cost positivity conditions and Gallai's potential transformation.

Condition (i) asks every local cost to be positive, condition (ii) only every
directed cycle's total, per player. Reweighting ``r'(u, v) = r(u, v) + x(u) -
x(v)`` leaves cycle totals alone and shifts every (s, t)-path total by the
same constant ``x(s) - x(t)``, so it changes nothing strategic; a suitable
``x`` turns (ii) into (i).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exact import Weight, rational
from .game import SPGame
from .graph import Path, bellman_ford_to, min_mean_cycle, path_weight


class ConditionIIViolatedError(ValueError):
    """Some directed cycle has a non-positive total for the player."""


@dataclass(frozen=True)
class Potential:
    player: int
    x: tuple[Weight, ...]


def check_condition_i(game: SPGame) -> tuple[bool, list[tuple[int, int]]]:
    """Strict positivity of all local costs; violations as ``(edge, player)``."""
    bad = [
        (e, i)
        for e, vec in enumerate(game.costs)
        for i, c in enumerate(vec, start=1)
        if not c > 0
    ]
    return not bad, bad


def check_condition_ii(game: SPGame, i: int) -> tuple[bool, Path | None]:
    """Every directed cycle has positive ``r_i`` total.

    Decided through the minimum cycle mean; the witness on failure is a
    cycle whose total is at most zero.
    """
    found = min_mean_cycle(game.graph, game.lengths(i))
    if found is None or found[0] > 0:
        return True, None
    return False, found[1]


def gallai_potential(game: SPGame, i: int) -> Potential:
    """A potential making every reweighted ``r_i`` cost positive.

    With ``mu`` the minimum cycle mean (``eps = mu / 2``, or ``1`` when the
    graph is acyclic), shift all costs down by ``eps``; cycles stay positive,
    so Bellman-Ford gives finite distances ``d`` to ``t``. Taking ``x = -d``
    yields reweighted costs of at least ``eps`` by the triangle inequality.
    """
    g = game.graph
    found = min_mean_cycle(g, game.lengths(i))
    if found is not None and not found[0] > 0:
        raise ConditionIIViolatedError(f"player {i}: cycle {found[1]} has mean {found[0]}")
    eps = 1 if found is None else rational(Fraction(found[0]) / 2)
    reduced = [c - eps for c in game.lengths(i)]
    dist = bellman_ford_to(g, reduced, g.t)
    if any(d is None for d in dist):
        raise ValueError("every vertex must reach t")
    return Potential(i, tuple(rational(-d) for d in dist))


def potential_epsilon(game: SPGame, i: int) -> Weight:
    """The margin ``eps`` that :func:`gallai_potential` guarantees for player ``i``."""
    found = min_mean_cycle(game.graph, game.lengths(i))
    return 1 if found is None else rational(Fraction(found[0]) / 2)


def apply_potentials(game: SPGame, potentials: Sequence[Potential]) -> SPGame:
    """Reweight each player's costs with that player's potential."""
    by_player = {p.player: p.x for p in potentials}
    g = game.graph
    costs = []
    for e in g.edges:
        vec = list(game.costs[e.id])
        for i, x in by_player.items():
            vec[i - 1] = rational(vec[i - 1] + x[e.tail] - x[e.head])
        costs.append(tuple(vec))
    return game.with_costs(costs)


def zero_potentials(game: SPGame) -> list[Potential]:
    return [Potential(i, (0,) * game.graph.vertex_count) for i in game.players]


def restore_positivity(game: SPGame) -> tuple[SPGame, list[Potential]]:
    """Gallai potentials for every player and the reweighted game."""
    pots = [gallai_potential(game, i) for i in game.players]
    return apply_potentials(game, pots), pots


def path_shift(potential: Potential, s: int, t: int) -> Weight:
    """How much every (s, t)-path total moves under ``potential``."""
    return potential.x[s] - potential.x[t]


def cycle_total(game: SPGame, cycle: Path, i: int) -> Weight:
    return path_weight(cycle, game.lengths(i))
