import itertools
from fractions import Fraction

import pytest

from spgames.graph import (
    Digraph,
    NoPathError,
    NonPositiveLengthError,
    PathExplosionError,
    bellman_ford_to,
    dijkstra,
    enumerate_cycles,
    enumerate_st_paths,
    is_bidirected,
    min_mean_cycle,
    normalize,
    path_vertices,
    shortest_paths,
    to_dot,
)

S, A, T = 0, 1, 2


def g_(pairs, n=3, s=S, t=T):
    return Digraph.from_pairs(n, pairs, s, t)


class TestNormalize:
    def test_already_normalized(self):
        g = g_([(0, 1)], n=2, t=1)
        out, report = normalize(g)
        assert out == g
        assert not report.changed

    def test_dead_end_merged_into_t(self):
        # s->t, s->d with d a dead end: d merges into t, two parallel moves remain
        g = g_([(0, 2), (0, 1)], n=3, t=2)
        out, report = normalize(g)
        assert report.merged == (1,)
        assert out.vertex_count == 2
        assert out.pairs() == [(0, 1), (0, 1)]

    def test_mutual_pair_kept_under_walk_semantics(self):
        # s->a, a->s, s->t: a is reachable and reaches t through s
        g = g_([(S, A), (A, S), (S, T)])
        out, report = normalize(g)
        assert out == g and not report.changed

    def test_unreachable_part_removed(self):
        # a only points into s; nothing reaches a
        g = g_([(S, T), (A, S)])
        out, report = normalize(g)
        assert report.deleted_edges == (1,)
        assert report.removed_vertices == (A,)
        assert out.pairs() == [(0, 1)]
        assert report.vertex_map == (0, None, 1)

    def test_sink_cycle_is_cut(self):
        # s->x, x->c1, c1->c2, c2->c1, s->t: nothing after s->x reaches t
        g = Digraph.from_pairs(5, [(0, 1), (1, 2), (2, 3), (3, 2), (0, 4)], 0, 4)
        out, report = normalize(g)
        assert report.deleted_edges == (0, 1, 2, 3)
        assert report.removed_vertices == (1, 2, 3)
        assert out.pairs() == [(0, 1)]

    def test_merge_then_delete_reaches_fixpoint(self):
        # s->a, a->d (d dead end), a->c, c->c2, c2->c, s->t:
        # d merges into t, then the sink cycle and a->c are cut
        g = Digraph.from_pairs(6, [(0, 1), (1, 2), (1, 3), (3, 4), (4, 3), (0, 5)], 0, 5)
        out, report = normalize(g)
        assert report.merged == (2,)
        assert set(report.removed_vertices) == {3, 4}
        assert out.pairs() == [(0, 1), (1, 2), (0, 2)]

    def test_self_loops_removed(self):
        g = g_([(S, S), (S, T)])
        out, report = normalize(g)
        assert out.pairs() == [(0, 1)]
        assert 0 in report.deleted_edges

    def test_no_path(self):
        with pytest.raises(NoPathError):
            normalize(g_([(S, A), (A, S)]))

    def test_terminal_out_edges_dropped(self):
        out, report = normalize(g_([(0, 1), (1, 0)], n=2, t=1))
        assert out.pairs() == [(0, 1)]
        assert report.deleted_edges == (1,)

    def test_idempotent_on_examples(self):
        for pairs in ([(0, 2), (0, 1)], [(S, A), (A, S), (S, T)], [(S, T), (A, S)]):
            once, _ = normalize(g_(pairs))
            twice, report = normalize(once)
            assert twice == once and not report.changed


class TestBidirected:
    @pytest.mark.parametrize(
        "pairs, n, expected",
        [
            ([(0, 1)], 2, True),
            ([(S, A), (A, S), (A, T)], 3, True),
            ([(S, A), (A, T)], 3, False),
        ],
    )
    def test_examples(self, pairs, n, expected):
        assert is_bidirected(Digraph.from_pairs(n, pairs, 0, n - 1)) is expected


class TestDijkstra:
    def test_single_edge(self):
        assert dijkstra(g_([(0, 1)], n=2, t=1), [5], 0, 1) == ((0,), 5)

    def test_two_routes(self):
        g = g_([(S, A), (A, T), (S, T)])
        assert dijkstra(g, [1, 3, 10], S, T) == ((0, 1), 4)

    def test_unreachable(self):
        g = g_([(S, A), (A, S)])
        assert dijkstra(g, [1, 1], S, T) is None

    def test_rational_lengths(self):
        g = g_([(S, A), (A, T), (S, T)])
        assert dijkstra(g, [Fraction(1, 3), Fraction(1, 3), Fraction(2, 3)], S, T) == ((0, 1), Fraction(2, 3))

    def test_tie_break_is_lexicographic(self):
        # both routes cost 2; [e0, e1] < [e2]
        g = g_([(S, A), (A, T), (S, T)])
        assert dijkstra(g, [1, 1, 2], S, T) == ((0, 1), 2)
        # parallel edges: smaller id wins
        g2 = g_([(S, T), (S, T)])
        assert dijkstra(g2, [3, 3], S, T) == ((0,), 3)

    def test_rejects_non_positive(self):
        with pytest.raises(NonPositiveLengthError):
            dijkstra(g_([(S, T)]), [0], S, T)

    def test_active_subset(self):
        g = g_([(S, A), (A, T), (S, T)])
        assert dijkstra(g, [1, 3, 10], S, T, active={2}) == ((2,), 10)

    def test_all_shortest_paths(self):
        g = g_([(S, A), (A, T), (S, T), (S, A)])
        assert shortest_paths(g, [1, 1, 2, 1], S, T) == [(0, 1), (2,), (3, 1)]


class TestEnumeratePaths:
    def test_single(self):
        assert enumerate_st_paths(g_([(0, 1)], n=2, t=1)) == [(0,)]

    def test_order(self):
        assert enumerate_st_paths(g_([(S, A), (A, T), (S, T)])) == [(0, 1), (2,)]

    def test_explosion(self):
        k = 12
        pairs = [(u, w) for u in range(k) for w in range(k) if u != w and u != k - 1]
        g = Digraph.from_pairs(k, pairs, 0, k - 1)
        with pytest.raises(PathExplosionError):
            enumerate_st_paths(g, cap=10)

    def test_paths_are_simple(self):
        g = g_([(S, A), (A, S), (A, T), (S, T)])
        for p in enumerate_st_paths(g):
            verts = path_vertices(g, p)
            assert len(set(verts)) == len(verts)


class TestMinMeanCycle:
    def test_acyclic(self):
        assert min_mean_cycle(g_([(0, 1)], n=2, t=1), [1]) is None

    def test_unit_cycle(self):
        g = g_([(S, A), (A, S), (A, T)])
        assert min_mean_cycle(g, [1, 1, 1]) == (1, (0, 1))

    def test_signed_weights(self):
        g = g_([(S, A), (A, S), (A, T)])
        assert min_mean_cycle(g, [3, -1, 1]) == (1, (0, 1))

    def test_picks_smaller_of_two_cycles(self):
        # cycle 0-1 mean 2, cycle 1-2 mean 1/2 (edges 2,3), t=3
        g = Digraph.from_pairs(4, [(0, 1), (1, 0), (1, 2), (2, 1), (2, 3)], 0, 3)
        mean, cyc = min_mean_cycle(g, [2, 2, 1, 0, 1])
        assert mean == Fraction(1, 2)
        assert sorted(cyc) == [2, 3]

    def test_self_loop(self):
        g = g_([(S, S), (S, T)])
        assert min_mean_cycle(g, [-4, 1]) == (-4, (0,))


def test_enumerate_cycles_small():
    g = Digraph.from_pairs(4, [(0, 1), (1, 0), (1, 2), (2, 1), (2, 0), (2, 3)], 0, 3)
    cycles = enumerate_cycles(g)
    as_sets = sorted(sorted(c) for c in cycles)
    # 0-1-0, 1-2-1, 0-1-2-0
    assert as_sets == [[0, 1], [0, 2, 4], [2, 3]]


def test_bellman_ford_negative_edges():
    g = g_([(S, A), (A, T), (S, T)])
    assert bellman_ford_to(g, [-2, 1, 0], T) == [-1, 1, 0]


def test_bellman_ford_matches_brute_force():
    g = Digraph.from_pairs(4, [(0, 1), (1, 2), (2, 1), (1, 3), (2, 3), (0, 3)], 0, 3)
    w = [2, -1, 3, 4, 1, 5]
    dist = bellman_ford_to(g, w, 3)
    for v in range(3):
        best = min(sum(w[e] for e in p) for p in enumerate_st_paths(g, source=v))
        assert dist[v] == best


def test_dot_is_ordered():
    text = to_dot(g_([(S, A), (A, T)]), ["v0:P1", "v1:P2", "t"], ["(1,2)", "(3,4)"])
    lines = text.splitlines()
    assert lines[1].startswith('  0 [label="v0:P1"]')
    assert lines[-3] == '  0 -> 1 [label="(1,2)"];'
    assert not any(line.strip().startswith("2 ->") for line in lines)


def test_path_count_of_complete_bidirected_graph():
    # simple s-t paths in K_k with t absorbing: sum over j of (k-2)!/(k-2-j)!
    k = 6
    pairs = [(u, w) for u in range(k) for w in range(k) if u != w and u != k - 1]
    g = Digraph.from_pairs(k, pairs, 0, k - 1)
    expected = sum(
        len(list(itertools.permutations(range(k - 2), j))) for j in range(k - 1)
    )
    assert len(enumerate_st_paths(g)) == expected
