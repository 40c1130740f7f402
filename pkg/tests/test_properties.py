"""Randomized invariants over generated games and digraphs."""

from fractions import Fraction

from hypothesis import given, settings, strategies as st

from spgames.bisp import sp_set, sp_set_bruteforce
from spgames.documents import dumps_game, loads_game
from spgames.game import (
    bipartite_subdivision,
    effective_cost,
    enumerate_ne,
    is_ne,
    is_ne_exhaustive,
    lift_profile,
    normalize_game,
    play,
    profiles,
)
from spgames.graph import (
    Digraph,
    NoPathError,
    dijkstra,
    enumerate_cycles,
    enumerate_st_paths,
    min_mean_cycle,
    normalize,
    path_weight,
)
from spgames.potential import Potential, apply_potentials, gallai_potential
from spgames.search import GenParams, gen_random_game

seeds = st.integers(0, 2**32)
SMALL = dict(vertex_count=(3, 5), out_degree=(1, 3))


@st.composite
def digraphs(draw, max_vertices=6):
    n = draw(st.integers(2, max_vertices))
    pairs = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=3 * n))
    return Digraph.from_pairs(n, pairs, 0, n - 1)


@st.composite
def weighted(draw, low=1):
    g = draw(digraphs())
    w = draw(st.lists(st.fractions(low, 9, max_denominator=4), min_size=g.edge_count, max_size=g.edge_count))
    return g, [x.numerator if x.denominator == 1 else x for x in w]


@given(seeds)
def test_document_roundtrip(seed):
    g = gen_random_game(GenParams(n=3, seed=seed))
    assert loads_game(dumps_game(g)) == g


@given(digraphs())
def test_normalize_is_idempotent(g):
    try:
        once, _ = normalize(g)
    except NoPathError:
        return
    twice, report = normalize(once)
    assert twice == once and not report.changed
    # every vertex of the result lies on some s-t walk
    reach = {once.s}
    stack = [once.s]
    while stack:
        for e in once.out[stack.pop()]:
            if once.edges[e].head not in reach:
                reach.add(once.edges[e].head)
                stack.append(once.edges[e].head)
    assert reach == set(range(once.vertex_count))


@given(weighted())
def test_dijkstra_matches_enumeration(data):
    g, w = data
    best = dijkstra(g, w, g.s, g.t)
    paths = enumerate_st_paths(g)
    if not paths:
        assert best is None
        return
    sums = [path_weight(p, w) for p in paths]
    assert best[1] == min(sums)
    assert best[0] == min(p for p, x in zip(paths, sums) if x == best[1])


@given(weighted(low=-9))
def test_min_mean_cycle_matches_enumeration(data):
    g, w = data
    cycles = enumerate_cycles(g)
    found = min_mean_cycle(g, w)
    if not cycles:
        assert found is None
        return
    mean, cycle = found
    assert mean == min(Fraction(path_weight(c, w)) / len(c) for c in cycles)
    assert Fraction(path_weight(cycle, w)) / len(cycle) == mean


@settings(max_examples=60)
@given(seeds, st.integers(2, 3))
def test_best_response_matches_exhaustive(seed, n):
    g = gen_random_game(GenParams(n=n, seed=seed, **SMALL))
    for p in profiles(g):
        assert bool(is_ne(g, p)) == bool(is_ne_exhaustive(g, p))


@settings(max_examples=60)
@given(seeds)
def test_sp_sets(seed):
    g = gen_random_game(GenParams(seed=seed, **SMALL))
    for i in (1, 2):
        full = sp_set(g, i)
        assert sp_set(g, i, "lex_unique").paths <= full.paths
        brute = sp_set_bruteforce(g, i)
        assert (full.paths, full.contains_symbolic_c) == (brute.paths, brute.contains_symbolic_c)


@settings(max_examples=40)
@given(seeds, st.data())
def test_potentials_keep_equilibria(seed, data):
    g = gen_random_game(GenParams(seed=seed, vertex_count=(3, 4)))
    size = g.graph.vertex_count
    pots = [Potential(i, tuple(data.draw(st.lists(st.integers(-5, 5), min_size=size, max_size=size))))
            for i in g.players]
    moved = apply_potentials(g, pots)
    assert enumerate_ne(moved, method="exhaustive") == enumerate_ne(g, method="exhaustive")
    for i in g.players:
        x = gallai_potential(moved, i)
        assert all(c > 0 for c in apply_potentials(moved, [x]).lengths(i))


@settings(max_examples=40)
@given(seeds)
def test_subdivision_preserves_costs(seed):
    g = gen_random_game(GenParams(seed=seed, vertex_count=(3, 4)))
    sub, edge_map = bipartite_subdivision(g)
    for p in profiles(g):
        q = lift_profile(g, sub, edge_map, p)
        assert effective_cost(g, play(g, p, g.graph.s)) == effective_cost(sub, play(sub, q, sub.graph.s))


@given(seeds)
def test_generated_games_are_normalized(seed):
    g = gen_random_game(GenParams(n=3, seed=seed))
    again, report = normalize_game(g)
    assert again == g and not report.changed
