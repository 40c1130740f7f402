"""
Removing and adding an initial position
=======================================

An equilibrium that works from every position extends by one step of
backward induction when a new initial position is put in front. The other
direction strips the initial position and asks whether the rest still has
a uniform equilibrium.
"""

# %%
from spgames.game import SPGame, is_ne, is_une
from spgames.search import check_ne_free_implies_une_free, extend_with_initial, find_une, strip_initial

# a (player 1) -> t costs player 1 ten; b (player 2) -> t costs player 1 two
sub = SPGame.build(2, [1, 2, None], [(0, 2, (10, 1)), (1, 2, (2, 1))])
une = find_une(sub)
print(une.choice, is_une(sub, une))

# %%
# The new owner compares 1 + 10 against 5 + 2 and takes the second move.
game, profile = extend_with_initial(sub, une, [((1, 1), 0), ((5, 1), 1)], owner_of_v0=1)
first = game.graph.edges[profile.choice[game.graph.s]]
print("chosen move costs", game.costs[first.id], "NE:", bool(is_ne(game, profile)))

# %%
chain = SPGame.build(2, [1, 2, 1, None], [(0, 1, (1, 2)), (1, 2, (3, 4)), (2, 3, (5, 6))])
rest = strip_initial(chain)
print(rest.graph.pairs(), rest.owner)

# %%
# The implication is only tested on games without equilibria; others are skipped.
print(check_ne_free_implies_une_free(chain).kind)
