"""Instance generation and conjecture campaigns.

Campaigns run one named check over a stream of games (seeded random or an
exhaustive small family), collect one record per instance and re-verify every
conjecture-refuting candidate with the brute-force oracles before it is
reported. Records depend only on the configuration, never on the number of
worker processes.
"""

from __future__ import annotations

import dataclasses
import hashlib
import itertools
import random
import time
from dataclasses import dataclass, field
from multiprocessing import Pool
from typing import Any, Iterator, Sequence

from .bisp import (
    Verdict,
    bisp_check,
    ne_bisp_equivalence,
    sp_set_bruteforce,
    verdict_from_sets,
)
from .documents import game_from_document, game_to_document, profile_to_list
from .exact import Weight, rational
from .game import (
    DEFAULT_PROFILE_BUDGET,
    BudgetExceededError,
    GameError,
    SPGame,
    StrategyProfile,
    effective_cost,
    enumerate_ne,
    is_ne_exhaustive,
    is_une,
    ne_flags_exhaustive,
    normalize_game,
    play,
    profiles,
    split_by_play,
    validate,
)
from .graph import Digraph, Edge, NoPathError, PathExplosionError, is_bidirected, normalize


class GenerationExhaustedError(RuntimeError):
    pass


class EmptyGameError(GameError):
    """Removing the initial position leaves no usable subgame."""


class NotAUNEError(GameError):
    pass


# -- generation --------------------------------------------------------------


@dataclass(frozen=True)
class GenParams:
    """Random game model. ``vertex_count`` includes ``t``; ranges are inclusive."""

    n: int = 2
    vertex_count: tuple[int, int] = (3, 7)
    out_degree: tuple[int, int] = (1, 3)
    cost: tuple[int, int] = (1, 9)
    bidirected: bool = False
    bipartite: bool = False
    seed: int = 0
    max_retries: int = 1000

    def __post_init__(self) -> None:
        lo, hi = self.vertex_count
        if self.n < 2 or hi < self.n + 1 or lo > hi:
            raise ValueError(f"need n >= 2 and room for {self.n} owned positions plus t")
        if not 1 <= self.out_degree[0] <= self.out_degree[1]:
            raise ValueError("out_degree range must start at 1 or more")
        if not 1 <= self.cost[0] <= self.cost[1]:
            raise ValueError("costs must be positive integers")
        if self.bipartite and self.n != 2:
            raise ValueError("bipartite generation is for two players")


def gen_random_game(params: GenParams) -> SPGame:
    """A normalized, valid game drawn deterministically from ``params.seed``.

    Out-degrees are uniform in range, targets uniform among the other
    vertices (only opposite-owner vertices and ``t`` when bipartite), costs
    uniform integers. Bidirected instances get every missing reverse move.
    Draws that normalize badly are rejected and redrawn from the same stream.
    """
    rng = random.Random(params.seed)
    n = params.n
    for _ in range(params.max_retries):
        size = rng.randint(max(params.vertex_count[0], n + 1), params.vertex_count[1])
        t = size - 1
        owner: list[int | None] = [rng.randint(1, n) for _ in range(t)] + [None]
        if len(set(owner[:t])) < n:
            continue
        pairs: set[tuple[int, int]] = set()
        for v in range(t):
            cands = [
                w
                for w in range(size)
                if w != v and (not params.bipartite or w == t or owner[w] != owner[v])
            ]
            k = min(rng.randint(*params.out_degree), len(cands))
            pairs.update((v, w) for w in rng.sample(cands, k))
        if params.bidirected:
            pairs |= {(w, u) for u, w in pairs if w != t}
        ordered = sorted(pairs)
        costs = [tuple(rng.randint(*params.cost) for _ in range(n)) for _ in ordered]
        raw = SPGame(Digraph.from_pairs(size, ordered, 0, t), n, tuple(owner), tuple(costs))
        try:
            game, _ = normalize_game(raw)
        except NoPathError:
            continue
        if validate(game):
            continue
        if params.bidirected and not is_bidirected(game.graph):
            continue
        if params.bipartite and not _is_bipartite(game):
            continue
        return game
    raise GenerationExhaustedError(f"no valid game after {params.max_retries} draws")


def _is_bipartite(game: SPGame) -> bool:
    g = game.graph
    return all(e.head == g.t or game.owner[e.tail] != game.owner[e.head] for e in g.edges)


def instance_seed(seed: int, index: int) -> int:
    """64-bit seed of instance ``index`` in a campaign seeded with ``seed``."""
    digest = hashlib.blake2b(f"{seed}:{index}".encode(), digest_size=8).digest()
    return int.from_bytes(digest, "big")


@dataclass(frozen=True)
class FamilySpec:
    """All games on ``k`` non-terminal positions (``s`` = 0, ``t`` = k) with
    at most ``d`` distinct moves per position, no self-loops or parallel
    moves, already normalized; every ownership partition onto ``n``
    non-empty parts; every assignment of local costs from ``costs``."""

    k: int = 2
    d: int = 2
    costs: tuple[int, ...] = (1, 2)
    n: int = 2


def _family_structures(spec: FamilySpec) -> list[list[tuple[int, int]]]:
    k = spec.k
    choices = []
    for v in range(k):
        others = [w for w in range(k + 1) if w != v]
        sets = [c for r in range(1, spec.d + 1) for c in itertools.combinations(others, r)]
        choices.append(sets)
    valid = []
    for combo in itertools.product(*choices):
        pairs = [(v, w) for v, heads in enumerate(combo) for w in heads]
        g = Digraph.from_pairs(k + 1, pairs, 0, k)
        try:
            _, report = normalize(g)
        except NoPathError:
            continue
        if not report.changed:
            valid.append(pairs)
    return valid


def _surjections(k: int, n: int) -> list[tuple[int, ...]]:
    return [o for o in itertools.product(range(1, n + 1), repeat=k) if len(set(o)) == n]


def family_size(spec: FamilySpec) -> int:
    owners = len(_surjections(spec.k, spec.n))
    c = len(spec.costs)
    return sum(owners * c ** (spec.n * len(p)) for p in _family_structures(spec))


def enumerate_games(spec: FamilySpec, budget: int = 10**6) -> Iterator[SPGame]:
    """Every game of the family exactly once, in a fixed canonical order."""
    size = family_size(spec)
    if size > budget:
        raise BudgetExceededError(f"family has {size} games, budget {budget}")
    k, n = spec.k, spec.n
    for pairs in _family_structures(spec):
        graph = Digraph.from_pairs(k + 1, pairs, 0, k)
        vectors = list(itertools.product(spec.costs, repeat=n))
        for owner in _surjections(k, n):
            for costs in itertools.product(vectors, repeat=len(pairs)):
                yield SPGame(graph, n, owner + (None,), costs)


# -- removing and adding an initial position ---------------------------------


def strip_initial(game: SPGame, allow_empty_parts: bool = False) -> SPGame:
    """The subgame without the initial position ``s``.

    Moves into and out of ``s`` disappear, then the rest is re-normalized
    without a root, since uniform equilibria look at every position anyway.
    The nominal new ``s`` is the first surviving successor of the old one.
    """
    g = game.graph
    v0 = g.s
    keep = [v for v in range(g.vertex_count) if v != v0]
    index = {v: k for k, v in enumerate(keep)}
    successors = [index[e.head] for e in g.edges if e.tail == v0 and e.head not in (v0, g.t)]
    if not successors:
        raise EmptyGameError("the initial position has no non-terminal successor")
    kept_edges = [e for e in g.edges if v0 not in (e.tail, e.head)]
    graph = Digraph(
        len(keep),
        tuple(Edge(k, index[e.tail], index[e.head]) for k, e in enumerate(kept_edges)),
        successors[0],
        index[g.t],
    )
    raw = SPGame(
        graph,
        game.n,
        tuple(game.owner[v] for v in keep),
        tuple(game.costs[e.id] for e in kept_edges),
    )
    try:
        sub, report = normalize_game(raw, rooted=False)
    except NoPathError as exc:
        raise EmptyGameError(f"subgame degenerates: {exc}") from None
    alive = [report.vertex_map[v] for v in successors if report.vertex_map[v] not in (None, sub.graph.t)]
    if alive and sub.graph.s != alive[0]:
        sub = SPGame(
            Digraph(sub.graph.vertex_count, sub.graph.edges, alive[0], sub.graph.t),
            sub.n,
            sub.owner,
            sub.costs,
        )
    if not allow_empty_parts:
        owned = set(sub.owner)
        empty = [i for i in sub.players if i not in owned]
        if empty:
            raise EmptyGameError(f"players {empty} own no position in the subgame")
    return sub


def add_initial_vertex(
    sub: SPGame, moves: Sequence[tuple[Sequence[Weight], int]], owner: int
) -> SPGame:
    """``sub`` plus a fresh initial position (id ``|V|``) with the given moves,
    appended after the existing edges so old edge ids stay valid."""
    if not moves:
        raise ValueError("the new initial position needs at least one move")
    g = sub.graph
    v0 = g.vertex_count
    edges = list(g.edges)
    costs = list(sub.costs)
    for vec, target in moves:
        vec = tuple(rational(c) for c in vec)
        if len(vec) != sub.n or not all(c > 0 for c in vec):
            raise ValueError(f"move costs must be {sub.n} positive numbers, got {vec}")
        if not 0 <= target < v0:
            raise ValueError(f"target {target} is not a vertex of the subgame")
        edges.append(Edge(len(edges), v0, target))
        costs.append(vec)
    graph = Digraph(v0 + 1, tuple(edges), v0, g.t)
    return SPGame(graph, sub.n, sub.owner + (owner,), tuple(costs))


def extend_with_initial(
    sub: SPGame,
    une: StrategyProfile,
    new_moves: Sequence[tuple[Sequence[Weight], int]],
    owner_of_v0: int,
) -> tuple[SPGame, StrategyProfile]:
    """Backward induction one step up.

    The owner of the fresh initial position picks the move minimizing its
    local cost plus their cost of the ``une`` play from the move's target
    (first such move on ties). Returns the extended game, restricted to what
    the new root reaches, and the extended profile.
    """
    if not is_une(sub, une):
        raise NotAUNEError("the supplied profile is not a uniform NE of the subgame")
    game = add_initial_vertex(sub, new_moves, owner_of_v0)
    g = game.graph
    first_new = sub.graph.edge_count
    best_edge, best_cost = None, None
    for k in range(first_new, g.edge_count):
        target = g.edges[k].head
        cost = game.costs[k][owner_of_v0 - 1]
        if target != g.t:
            cost = cost + effective_cost(sub, play(sub, une, target))[owner_of_v0 - 1]
        if best_cost is None or cost < best_cost:
            best_edge, best_cost = k, cost
    profile = StrategyProfile(une.choice + (best_edge,))
    norm, report = normalize_game(game)
    choice: list[int | None] = [None] * norm.graph.vertex_count
    for v, e in enumerate(profile.choice):
        nv = report.vertex_map[v]
        if e is not None and nv is not None and nv != norm.graph.t:
            choice[nv] = report.edge_map[e]
    return norm, StrategyProfile(tuple(choice))


@dataclass(frozen=True)
class PropertyVerdict:
    kind: str  # "Holds" | "Violated" | "NotApplicable"
    witness: StrategyProfile | None = None
    subgame: SPGame | None = None
    detail: str = ""


def check_ne_free_implies_une_free(
    game: SPGame, budget: int = DEFAULT_PROFILE_BUDGET
) -> PropertyVerdict:
    """If ``game`` has no NE from ``s``, its subgame without ``s`` must have no
    uniform NE. Both sides by brute force over all profiles."""
    if enumerate_ne(game, game.graph.s, "first", budget):
        return PropertyVerdict("NotApplicable", detail="the game has an NE")
    try:
        sub = strip_initial(game, allow_empty_parts=True)
    except EmptyGameError as exc:
        return PropertyVerdict("Holds", detail=f"vacuous: {exc}")
    for p in profiles(sub, budget):
        if is_une(sub, p):
            return PropertyVerdict("Violated", p, sub, "subgame has a uniform NE")
    return PropertyVerdict("Holds", subgame=sub)


def find_une(game: SPGame, budget: int = DEFAULT_PROFILE_BUDGET) -> StrategyProfile | None:
    for p in profiles(game, budget):
        if is_une(game, p):
            return p
    return None


def prefix_extensions(
    sub: SPGame,
    owner: int,
    cost_values: Sequence[int] = (1, 2, 3),
    max_moves: int = 2,
) -> Iterator[SPGame]:
    """Games obtained by putting a fresh initial position in front of ``sub``
    with every set of up to ``max_moves`` moves into it and every choice of
    local costs from ``cost_values``. Repeating this builds acyclic prefixes."""
    g = sub.graph
    targets = range(g.vertex_count)
    vectors = list(itertools.product(cost_values, repeat=sub.n))
    for r in range(1, max_moves + 1):
        for heads in itertools.combinations(targets, r):
            for vecs in itertools.product(vectors, repeat=r):
                yield add_initial_vertex(sub, list(zip(vecs, heads)), owner)


def prefix_hunt(sub: SPGame, budget: int = DEFAULT_PROFILE_BUDGET, **kwargs) -> Iterator[SPGame]:
    """NE-free games among :func:`prefix_extensions` of ``sub``, each confirmed
    by the exhaustive oracle. Only a UNE-free ``sub`` can produce any."""
    for owner in sub.players:
        for game in prefix_extensions(sub, owner, **kwargs):
            try:
                game, _ = normalize_game(game)
            except NoPathError:
                continue
            if enumerate_ne(game, game.graph.s, "first", budget):
                continue
            _, flags = ne_flags_exhaustive(game, game.graph.s, budget)
            if not any(flags):
                yield game


# -- campaigns ---------------------------------------------------------------

CHECKS = ("bisp_strong", "bisp_weak", "ne_bisp_equiv", "ns_nperson", "ns_bidirected", "ne_free_une_free")


@dataclass(frozen=True)
class CampaignConfig:
    check: str
    params: GenParams = field(default_factory=GenParams)
    count: int = 100
    family: FamilySpec | None = None
    seed: int = 0
    workers: int = 1
    tie_mode: str = "all_min"
    profile_budget: int = DEFAULT_PROFILE_BUDGET
    path_budget: int = 10**6
    family_budget: int = 10**6

    def __post_init__(self) -> None:
        if self.check not in CHECKS:
            raise ValueError(f"unknown check {self.check!r}; choose from {', '.join(CHECKS)}")
        if self.check == "ns_bidirected" and self.family is None and not self.params.bidirected:
            raise ValueError("ns_bidirected needs bidirected generator params")
        if self.check in ("bisp_strong", "bisp_weak", "ne_bisp_equiv"):
            n = self.family.n if self.family is not None else self.params.n
            if n != 2:
                raise ValueError(f"{self.check} is a two-person check")
        if self.workers < 1 or self.count < 0:
            raise ValueError("workers must be >= 1 and count >= 0")

    def to_dict(self) -> dict[str, Any]:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> CampaignConfig:
        data = dict(data)
        params = dict(data.pop("params", {}) or {})
        for key in ("vertex_count", "out_degree", "cost"):
            if key in params:
                params[key] = tuple(params[key])
        family = data.pop("family", None)
        if family is not None:
            family = FamilySpec(**{**family, "costs": tuple(family.get("costs", (1, 2)))})
        return cls(params=GenParams(**params), family=family, **data)


@dataclass
class CampaignReport:
    config: CampaignConfig
    records: list[dict[str, Any]]
    elapsed: float

    @property
    def instances_run(self) -> int:
        return len(self.records)

    @property
    def counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for r in self.records:
            out[r["verdict"]] = out.get(r["verdict"], 0) + 1
        return dict(sorted(out.items()))

    @property
    def counterexamples(self) -> list[dict[str, Any]]:
        return [r for r in self.records if r["counterexample"]]

    @property
    def mismatches(self) -> list[dict[str, Any]]:
        """Candidates the independent oracles refused to confirm (engine bugs)."""
        return [r for r in self.records if r["verdict"] == "OracleMismatch"]

    def stream(self) -> list[dict[str, Any]]:
        """Records without timing fields, the part that must be reproducible."""
        return [{k: v for k, v in r.items() if k != "timings"} for r in self.records]


def _ne_kinds(game: SPGame, found: Sequence[StrategyProfile]) -> dict[str, int]:
    terminal, cyclic = split_by_play(game, found)
    return {"terminal": len(terminal), "cyclic": len(cyclic)}


def _bisp_confirm(game: SPGame, config: CampaignConfig, kind: Verdict) -> bool:
    sets = [sp_set_bruteforce(game, i, config.profile_budget, config.path_budget) for i in (1, 2)]
    plist, flags = ne_flags_exhaustive(game, game.graph.s, config.profile_budget)
    terminal = [p for p, ok in zip(plist, flags) if ok and play(game, p, game.graph.s).is_terminal]
    return verdict_from_sets(*sets).kind is kind and not terminal


def _confirm_ne_free(game: SPGame, config: CampaignConfig) -> bool:
    _, flags = ne_flags_exhaustive(game, game.graph.s, config.profile_budget)
    return not any(flags)


def run_check(check: str, game: SPGame, config: CampaignConfig) -> dict[str, Any]:
    """Run one named check; returns verdict, counterexample flag and witness.

    Any conjecture-refuting outcome is recomputed with the exhaustive oracles.
    If they disagree the verdict becomes ``OracleMismatch``, which is an
    engine bug, never a counterexample.
    """
    s = game.graph.s
    budget = config.profile_budget
    if check in ("bisp_strong", "bisp_weak"):
        v = bisp_check(game, config.tie_mode, budget, config.path_budget)
        refuted = v.kind is not Verdict.STRONG if check == "bisp_strong" else v.kind is Verdict.EMPTY
        out: dict[str, Any] = {"verdict": v.kind.value, "counterexample": False}
        if v.witness is not None:
            out["witness"] = {"path": list(v.witness)}
        if refuted:
            # lex_unique verdicts can hinge on tie-breaking; confirm in all_min terms
            confirmed = _bisp_confirm(game, config, v.kind) if config.tie_mode == "all_min" else (
                bisp_check(game, "all_min", budget, config.path_budget).kind is v.kind
            )
            out["counterexample"] = confirmed
            if not confirmed:
                out["verdict"] = "OracleMismatch"
        return out
    if check == "ne_bisp_equiv":
        rep = ne_bisp_equivalence(game, budget, config.path_budget)
        out = {
            "verdict": "Agree" if rep.agree else "Disagree",
            "counterexample": False,
            "witness": {
                "bisp": rep.verdict.kind.value,
                "terminal_ne": len(rep.terminal_ne),
                "cyclic_ne": len(rep.cyclic_ne),
            },
        }
        if not rep.agree:
            out["witness"]["missing"] = [
                {"profile": profile_to_list(p), "play": list(steps), "absent_from": list(who)}
                for p, steps, who in rep.missing
            ]
            sets = [sp_set_bruteforce(game, i, budget, config.path_budget) for i in (1, 2)]
            plist, flags = ne_flags_exhaustive(game, s, budget)
            terminal = [p for p, ok in zip(plist, flags) if ok and play(game, p, s).is_terminal]
            oracle_agree = bool(terminal) == (verdict_from_sets(*sets).kind is Verdict.STRONG) and all(
                play(game, p, s).steps in sets[0].paths and play(game, p, s).steps in sets[1].paths
                for p in terminal
            )
            out["counterexample"] = not oracle_agree
            if oracle_agree:
                out["verdict"] = "OracleMismatch"
        return out
    if check in ("ns_nperson", "ns_bidirected"):
        found = enumerate_ne(game, s, "first", budget)
        if found:
            kind = "terminal" if play(game, found[0], s).is_terminal else "cyclic"
            return {"verdict": "NS", "counterexample": False, "witness": {"profile": profile_to_list(found[0]), "play": kind}}
        if not _confirm_ne_free(game, config):
            return {"verdict": "OracleMismatch", "counterexample": False}
        prop = check_ne_free_implies_une_free(game, budget)
        return {"verdict": "NE-free", "counterexample": True, "witness": {"une_free_subgame": prop.kind}}
    if check == "ne_free_une_free":
        prop = check_ne_free_implies_une_free(game, budget)
        out = {"verdict": prop.kind, "counterexample": False}
        if prop.kind == "Violated":
            sub = prop.subgame
            exhaustive_une = all(
                is_ne_exhaustive(sub, prop.witness, v)
                for v in range(sub.graph.vertex_count)
                if v != sub.graph.t
            ) and _confirm_ne_free(game, config)
            out["counterexample"] = exhaustive_une
            out["witness"] = {"une": profile_to_list(prop.witness), "subgame": game_to_document(sub)}
            if not exhaustive_une:
                out["verdict"] = "OracleMismatch"
        return out
    raise ValueError(f"unknown check {check!r}")


def _instance(config: CampaignConfig, index: int, game: SPGame | None) -> SPGame:
    if game is not None:
        return game
    return gen_random_game(dataclasses.replace(config.params, seed=instance_seed(config.seed, index)))


def _run_one(task: tuple[CampaignConfig, int, SPGame | None]) -> dict[str, Any]:
    config, index, game = task
    start = time.perf_counter()
    record: dict[str, Any] = {"seed": config.seed, "instance_index": index, "check": config.check}
    try:
        game = _instance(config, index, game)
        record.update(run_check(config.check, game, config))
    except (BudgetExceededError, PathExplosionError) as exc:
        record.update({"verdict": "BudgetExceeded", "counterexample": False, "error": str(exc)})
    except GenerationExhaustedError as exc:
        record.update({"verdict": "GenerationFailed", "counterexample": False, "error": str(exc)})
    if record["counterexample"]:
        record["game"] = game_to_document(game)
    record["timings"] = {"check_ms": round(1000 * (time.perf_counter() - start), 3)}
    return record


def _tasks(config: CampaignConfig) -> Iterator[tuple[CampaignConfig, int, SPGame | None]]:
    if config.family is not None:
        for index, game in enumerate(enumerate_games(config.family, config.family_budget)):
            yield config, index, game
    else:
        for index in range(config.count):
            yield config, index, None


def run_campaign(config: CampaignConfig) -> CampaignReport:
    """Run ``config.check`` on every instance, in parallel when ``workers > 1``.

    With ``family`` set the instances are the exhaustive family and ``count``
    is ignored; otherwise ``count`` random games.
    """
    start = time.perf_counter()
    if config.workers == 1:
        records = [_run_one(task) for task in _tasks(config)]
    else:
        with Pool(config.workers) as pool:
            records = list(pool.imap(_run_one, _tasks(config), chunksize=16))
    return CampaignReport(config, records, time.perf_counter() - start)


def replay(record: dict[str, Any], config: CampaignConfig) -> dict[str, Any]:
    """Re-run the recorded check on the record's serialized game."""
    game = game_from_document(record["game"])
    return run_check(record["check"], game, config)

