"""
Shortest-path sets of two opponents
===================================

For each strategy of one player, the other player answers with a shortest
path under their own costs. Collecting those paths gives one set per player.
The two sets share a path exactly when a terminal equilibrium exists.
"""

# %%
from spgames.bisp import bisp_check, ne_bisp_equivalence, sp_set
from spgames.game import SPGame, play

game = SPGame.build(
    2,
    [1, 2, None],
    [(0, 1, (1, 1)), (1, 2, (2, 3)), (0, 2, (10, 10)), (1, 0, (1, 1))],
)

for i in (1, 2):
    sp = sp_set(game, i)
    print(f"player {i}:", sorted(sp.paths), "plus c" if sp.contains_symbolic_c else "")

verdict = bisp_check(game)
print(verdict.kind.value, "witness", verdict.witness)

# %%
# When a strategy leaves the opponent no way to t, the set gains the
# symbolic path c instead.
loop = SPGame.build(2, [1, 2, None], [(0, 1, (1, 1)), (1, 0, (1, 1)), (1, 2, (1, 1))])
sp = sp_set(loop, 2)
print(sorted(sp.paths), sp.contains_symbolic_c)

# %%
# Ties matter. lex_unique keeps one tie-broken path per strategy,
# all_min keeps every minimum.
tied = SPGame.build(2, [1, 2, None], [(0, 1, (1, 1)), (1, 2, (5, 1)), (1, 2, (7, 1)), (0, 2, (9, 9))])
print(sorted(sp_set(tied, 1, "lex_unique").paths), sorted(sp_set(tied, 1, "all_min").paths))

# %%
# The equivalence report lists terminal equilibria and checks each play
# lies in both sets.
report = ne_bisp_equivalence(game)
print(report.agree, [play(game, p, 0).steps for p in report.terminal_ne])
