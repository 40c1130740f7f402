"""Acceptance criteria 1-8 at full scale.

Each test appends one PASS/FAIL line that the terminal summary prints.
Criteria 2, 3 and 6 reuse the campaign of criterion 1's corpus, so the
corpora are built once per session.
"""

import dataclasses
import json
import random
from fractions import Fraction

import pytest

from helpers import ACCEPTANCE_LINES
from spgames.cli import main
from spgames.documents import game_from_document
from spgames.game import (
    SPGame,
    is_ne,
    is_ne_exhaustive,
    ne_flags_exhaustive,
    normalize_game,
)
from spgames.graph import (
    Digraph,
    NoPathError,
    dijkstra,
    enumerate_cycles,
    enumerate_st_paths,
    normalize,
    path_weight,
)
from spgames.potential import (
    Potential,
    apply_potentials,
    check_condition_i,
    gallai_potential,
    path_shift,
    potential_epsilon,
)
from spgames.search import (
    CampaignConfig,
    FamilySpec,
    GenParams,
    check_ne_free_implies_une_free,
    extend_with_initial,
    find_une,
    gen_random_game,
    instance_seed,
    replay,
    run_campaign,
)

pytestmark = pytest.mark.acceptance

CORPUS = 10_000
CORPUS_SEED = 0
PARAMS = GenParams(n=2, vertex_count=(3, 7), out_degree=(1, 3), cost=(1, 9))
FAMILY = FamilySpec(k=2, d=2, costs=(1, 2), n=2)
GALLAI_COUNT = 1_000
DIJKSTRA_COUNT = 1_000
EXTEND_COUNT = 1_000
HUNT_COUNT = 100_000
HUNT_SEED = 2026

# NE-free games met by any campaign in this session; criterion 6 checks them
NE_FREE: list[SPGame] = []


def record(number, ok, detail):
    ACCEPTANCE_LINES.append(f"criterion {number}: {'PASS' if ok else 'FAIL'} {detail}")
    ACCEPTANCE_LINES.sort(key=lambda line: int(line.split()[1].rstrip(":")))


def corpus_game(index):
    return gen_random_game(dataclasses.replace(PARAMS, seed=instance_seed(CORPUS_SEED, index)))


@pytest.fixture(scope="module")
def equiv_reports():
    random_run = run_campaign(CampaignConfig("ne_bisp_equiv", PARAMS, count=CORPUS, seed=CORPUS_SEED))
    family_run = run_campaign(CampaignConfig("ne_bisp_equiv", PARAMS, family=FAMILY, seed=CORPUS_SEED))
    return random_run, family_run


def test_criterion_1_best_response_oracle():
    profiles_checked, disagreements = 0, []
    for index in range(CORPUS):
        g = corpus_game(index)
        plist, flags = ne_flags_exhaustive(g)
        profiles_checked += len(plist)
        for p, flag in zip(plist, flags):
            if bool(is_ne(g, p)) != flag:
                disagreements.append((index, p.edges()))
    ok = not disagreements
    record(1, ok, f"{CORPUS} games, {profiles_checked} profiles, {len(disagreements)} disagreements")
    assert ok, disagreements[:5]


def test_criterion_2_bisp_equivalence(equiv_reports):
    random_run, family_run = equiv_reports
    bad = []
    for run in (random_run, family_run):
        for r in run.records:
            if r["verdict"] != "Agree":
                bad.append(r)
    total = random_run.instances_run + family_run.instances_run
    ok = not bad
    record(2, ok, f"{random_run.instances_run} random + {family_run.instances_run} family games, "
                  f"{len(bad)} disagreements")
    assert ok, json.dumps(bad[:1])
    assert total == CORPUS + 928


def test_criterion_3_bisp_conjecture(equiv_reports, tmp_path):
    empty, ne_free = 0, 0
    for run in equiv_reports:
        for r in run.records:
            w = r["witness"]
            empty += w["bisp"] == "Empty"
            if w["terminal_ne"] + w["cyclic_ne"] == 0:
                ne_free += 1
                index = r["instance_index"]
                NE_FREE.append(corpus_game(index))
    # the campaign front end over the same corpora must exit 0
    codes = [
        main(["campaign", "--check", "bisp_weak", "--count", str(CORPUS), "--seed", str(CORPUS_SEED),
              "--out-dir", str(tmp_path / "random")]),
        main(["campaign", "--check", "bisp_weak", "--family", "2,2,1/2,2",
              "--out-dir", str(tmp_path / "family")]),
    ]
    ok = empty == 0 and ne_free == 0 and codes == [0, 0]
    record(3, ok, f"{empty} Empty verdicts, {ne_free} NE-free 2-person games, exit codes {codes}")
    assert ok


def test_criterion_4_gallai():
    rng = random.Random(4)
    failures = []
    for index in range(GALLAI_COUNT):
        g = gen_random_game(GenParams(n=2, vertex_count=(3, 5), seed=rng.randrange(2**32)))
        size = g.graph.vertex_count
        pots = [Potential(i, tuple(rng.randint(-5, 5) for _ in range(size))) for i in g.players]
        moved = apply_potentials(g, pots)
        restored = apply_potentials(moved, [gallai_potential(moved, i) for i in g.players])
        eps = [potential_epsilon(moved, i) for i in g.players]
        graph = g.graph
        ok = check_condition_i(restored)[0] and all(
            min(restored.lengths(i)) >= eps[i - 1] for i in g.players
        )
        for i in g.players:
            for c in enumerate_cycles(graph):
                ok &= path_weight(c, moved.lengths(i)) == path_weight(c, g.lengths(i))
                ok &= path_weight(c, restored.lengths(i)) == path_weight(c, g.lengths(i))
            shift = path_shift(pots[i - 1], graph.s, graph.t)
            for p in enumerate_st_paths(graph):
                ok &= path_weight(p, moved.lengths(i)) - path_weight(p, g.lengths(i)) == shift
        before = ne_flags_exhaustive(g)[1]
        ok &= ne_flags_exhaustive(moved)[1] == before == ne_flags_exhaustive(restored)[1]
        if not ok:
            failures.append(index)
    passed = not failures
    record(4, passed, f"{GALLAI_COUNT} transformed games, {len(failures)} failures")
    assert passed, failures[:5]


def random_digraph(rng):
    n = rng.randint(2, 8)
    pairs = [(rng.randrange(n), rng.randrange(n)) for _ in range(rng.randint(1, 3 * n))]
    return Digraph.from_pairs(n, pairs, 0, n - 1)


def test_criterion_5_dijkstra_oracle():
    rng = random.Random(5)
    runs, failures = 0, []
    while runs < DIJKSTRA_COUNT:
        try:
            g, _ = normalize(random_digraph(rng))
        except NoPathError:
            continue
        length = [Fraction(rng.randint(1, 40), rng.randint(1, 4)) for _ in range(g.edge_count)]
        found = dijkstra(g, length, g.s, g.t)
        best = min(path_weight(p, length) for p in enumerate_st_paths(g))
        if found is None or found[1] != best or path_weight(found[0], length) != best:
            failures.append(runs)
        runs += 1
    ok = not failures
    record(5, ok, f"{runs} digraphs, {len(failures)} mismatches")
    assert ok


def test_criterion_6_backward_induction():
    rng = random.Random(6)
    extended, failures, tried = 0, [], 0
    while extended < EXTEND_COUNT:
        tried += 1
        sub = gen_random_game(GenParams(n=rng.choice((2, 3)), vertex_count=(3, 6), seed=rng.randrange(2**32)))
        une = find_une(sub)
        if une is None:
            continue
        size = sub.graph.vertex_count
        moves = [
            (tuple(rng.randint(1, 9) for _ in range(sub.n)), rng.randrange(size))
            for _ in range(rng.randint(1, 3))
        ]
        game, profile = extend_with_initial(sub, une, moves, rng.randint(1, sub.n))
        if not (is_ne(game, profile) and is_ne_exhaustive(game, profile)):
            failures.append(tried)
        extended += 1
    verdicts = [check_ne_free_implies_une_free(g).kind for g in NE_FREE]
    ok = not failures and all(v == "Holds" for v in verdicts)
    record(6, ok, f"{extended} extensions ({tried} subgames drawn), {len(failures)} failures; "
                  f"{len(NE_FREE)} NE-free games checked for a UNE-free subgame")
    assert ok


def test_criterion_7_three_person_hunt():
    params = GenParams(n=3, vertex_count=(3, 7), out_degree=(1, 3), cost=(1, 9))
    config = CampaignConfig("ns_nperson", params, count=HUNT_COUNT, seed=HUNT_SEED)
    report = run_campaign(config)
    false_reports = list(report.mismatches)
    for r in report.counterexamples:
        game = game_from_document(r["game"])
        NE_FREE.append(game)
        _, flags = ne_flags_exhaustive(game)
        again = replay(r, config)
        if any(flags) or again != {k: r[k] for k in again}:
            false_reports.append(r)
    budget_errors = report.counts.get("BudgetExceeded", 0)
    ok = report.instances_run == HUNT_COUNT and not false_reports and budget_errors == 0
    record(7, ok, f"{report.instances_run} 3-person games in {report.elapsed:.0f}s, "
                  f"{len(report.counterexamples)} NE-free candidates, {len(false_reports)} false reports")
    assert ok
    for game in NE_FREE:
        assert check_ne_free_implies_une_free(game).kind == "Holds"


def test_criterion_8_determinism(tmp_path):
    runs = {
        "bisp_strong": CampaignConfig("bisp_strong", PARAMS, count=300, seed=7),
        "ne_bisp_equiv": CampaignConfig("ne_bisp_equiv", PARAMS, count=300, seed=7),
        "ns_nperson": CampaignConfig("ns_nperson", dataclasses.replace(PARAMS, n=3), count=300, seed=7),
        "ns_bidirected": CampaignConfig(
            "ns_bidirected", dataclasses.replace(PARAMS, n=3, bidirected=True), count=300, seed=7
        ),
        "ne_free_une_free": CampaignConfig("ne_free_une_free", PARAMS, count=300, seed=7),
    }
    diverged = []
    for name, config in runs.items():
        base = run_campaign(config).stream()
        for workers in (1, 2, 4):
            if run_campaign(dataclasses.replace(config, workers=workers)).stream() != base:
                diverged.append((name, workers))
    # record files written by the front end, compared line by line without timings
    files = []
    for workers in (1, 3):
        out = tmp_path / f"w{workers}"
        main(["campaign", "--check", "bisp_strong", "--count", "100", "--seed", "7",
              "--workers", str(workers), "--out-dir", str(out)])
        lines = (out / "records.jsonl").read_text().splitlines()
        files.append([json.dumps({k: v for k, v in json.loads(x).items() if k != "timings"}, sort_keys=True)
                      for x in lines])
    ok = not diverged and files[0] == files[1]
    record(8, ok, f"{len(runs)} checks x workers 1/2/4 plus CLI workers 1/3, {len(diverged)} divergent streams")
    assert ok, diverged


def test_normalized_corpus():
    # every corpus game is already in normal form, so the instances are what the checks saw
    for index in range(0, CORPUS, 97):
        g = corpus_game(index)
        assert normalize_game(g)[0] == g
