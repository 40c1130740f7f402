"""
Potential transformations
=========================

Shifting a player's costs by x(u) - x(v) on every move u -> v keeps cycle
sums and shifts every s-t path by the same amount, so equilibria do not
move. A potential built from Bellman-Ford distances makes every cost
positive again whenever every cycle is positive.
"""

# %%
from spgames.game import SPGame, enumerate_ne
from spgames.potential import (
    Potential,
    apply_potentials,
    check_condition_i,
    check_condition_ii,
    gallai_potential,
    potential_epsilon,
)

game = SPGame.build(
    2,
    [1, 2, None],
    [(0, 1, (3, 1)), (1, 2, (1, 3)), (0, 2, (1, 10)), (1, 0, (-2, 1))],
)
print(check_condition_i(game))
print(check_condition_ii(game, 1))

# %%
x = gallai_potential(game, 1)
print("x =", [str(v) for v in x.x], "eps =", potential_epsilon(game, 1))
fixed = apply_potentials(game, [x])
print([str(c) for c in fixed.lengths(1)])
print(check_condition_i(fixed))

# %%
# Equilibria are the same before and after, checked by brute force.
print(enumerate_ne(game, method="exhaustive") == enumerate_ne(fixed, method="exhaustive"))

# %%
# A random integer shift breaks positivity but not the cycle condition.
shifted = apply_potentials(fixed, [Potential(2, (4, -3, 0))])
print(check_condition_i(shifted)[1], check_condition_ii(shifted, 2))
