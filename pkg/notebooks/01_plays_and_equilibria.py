"""
Plays, costs and Nash equilibria
================================

A two-player game on three positions. Player 1 moves at s, player 2 at a,
and t ends the play. Every move charges each player its own local cost.
"""

# %%
from spgames.game import SPGame, StrategyProfile, effective_cost, enumerate_ne, is_ne, is_une, play

S, A, T = 0, 1, 2
game = SPGame.build(
    2,
    [1, 2, None],
    [
        (S, A, (1, 1)),    # e0
        (A, T, (2, 3)),    # e1
        (S, T, (10, 10)),  # e2
        (A, S, (1, 1)),    # e3
    ],
)

# %%
# A profile picks one move per non-terminal position. Going s -> a -> t
# costs player 1 three and player 2 four.
direct = StrategyProfile.from_edges(game, [0, 1])
p = play(game, direct, S)
print(p.kind, p.steps, effective_cost(game, p))

# If player 2 bounces back the token cycles forever, which costs both
# players infinity.
bounce = StrategyProfile.from_edges(game, [0, 3])
p = play(game, bounce, S)
print(p.kind, "cycle", p.cycle, effective_cost(game, p))

# %%
# Equilibrium checks compute one best response per player with Dijkstra.
print(bool(is_ne(game, direct)))
check = is_ne(game, StrategyProfile.from_edges(game, [2, 1]))
print(check.player, check.deviation.as_dict(), check.current, "->", check.improved)

# %%
# All equilibria from s. The second one relies on the threat to bounce,
# so it is not an equilibrium from a and fails the uniform test.
for profile in enumerate_ne(game):
    print(profile.edges(), "uniform" if is_une(game, profile) else "from s only")
