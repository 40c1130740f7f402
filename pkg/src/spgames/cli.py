"""Command-line front end.

Exit codes: 0 when the check holds (or nothing was found), 2 when a
violation or counterexample was found, 1 on usage or data errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Sequence

from . import bisp, game as gm, potential, search
from .documents import (
    DocumentError,
    dumps_game,
    game_to_dot,
    game_to_document,
    profile_to_list,
    read_game,
    record_line,
)
from .exact import format_cost, format_rational
from .graph import GraphError, NoPathError, is_bidirected

EXIT_OK, EXIT_ERROR, EXIT_FOUND = 0, 1, 2

CHECK_NAMES = ("validate", "normalize", "ne", "une", "bisp", "equiv", "gallai", "bidirected")
TIE_MODES = {"all-min": "all_min", "lex": "lex_unique"}


class UsageError(Exception):
    pass


def _emit(report: dict[str, Any], as_json: bool) -> None:
    if as_json:
        print(json.dumps(report, indent=2))
        return
    print(f"{report['check']}: {report['verdict']}")
    for key, value in report.items():
        if key not in ("check", "verdict"):
            print(f"  {key}: {json.dumps(value)}")


def run_check_command(game: gm.SPGame, name: str, tie_mode: str, budget: int, path_cap: int) -> tuple[int, dict]:
    """Evaluate one named check; returns (exit code, structured report)."""
    s = game.graph.s
    report: dict[str, Any] = {"check": name}
    if name == "validate":
        bad = gm.validate(game)
        report["verdict"] = "valid" if not bad else "invalid"
        report["violations"] = [
            {k: v for k, v in vars(x).items() if v is not None} for x in bad
        ]
        return (EXIT_FOUND if bad else EXIT_OK), report
    if name == "normalize":
        try:
            norm, rep = gm.normalize_game(game)
        except NoPathError as exc:
            report.update(verdict="unrepairable", error=str(exc))
            return EXIT_FOUND, report
        report["verdict"] = "normalized" if not rep.changed else "repaired"
        report["merged"] = list(rep.merged)
        report["removed_vertices"] = list(rep.removed_vertices)
        report["deleted_edges"] = list(rep.deleted_edges)
        if rep.changed:
            report["game"] = game_to_document(norm)
        return (EXIT_FOUND if rep.changed else EXIT_OK), report
    if name == "bidirected":
        ok = is_bidirected(game.graph)
        report["verdict"] = "bidirected" if ok else "not bidirected"
        if not ok:
            present = {(e.tail, e.head) for e in game.graph.edges}
            report["missing_reverse"] = [
                [e.head, e.tail]
                for e in game.graph.edges
                if e.tail != game.graph.t and e.head != game.graph.t and (e.head, e.tail) not in present
            ]
        return (EXIT_OK if ok else EXIT_FOUND), report

    positive, _ = potential.check_condition_i(game)
    method = "dijkstra" if positive else "exhaustive"
    if name == "ne":
        found = gm.enumerate_ne(game, s, "all", budget, method)
        terminal, cyclic = gm.split_by_play(game, found)
        report["verdict"] = "NS" if found else "NE-free"
        report["terminal_ne"] = [profile_to_list(p) for p in terminal]
        report["cyclic_ne"] = [profile_to_list(p) for p in cyclic]
        for p in found[:1]:
            pl = gm.play(game, p, s)
            report["first_play"] = list(pl.steps)
            report["first_costs"] = [format_cost(c) for c in gm.effective_cost(game, pl)]
        return (EXIT_OK if found else EXIT_FOUND), report
    if name == "une":
        if not positive:
            raise UsageError("the une check needs positive local costs")
        found = search.find_une(game, budget)
        report["verdict"] = "UNE found" if found else "UNE-free"
        if found:
            report["une"] = profile_to_list(found)
        return (EXIT_OK if found else EXIT_FOUND), report
    if name == "bisp":
        v = bisp.bisp_check(game, tie_mode, budget, path_cap)
        report["verdict"] = v.kind.value
        report["tie_mode"] = tie_mode
        if v.witness is not None:
            report["witness"] = list(v.witness)
        for sp in v.sets:
            report[f"set_{sp.player}"] = sorted(list(p) for p in sp.paths) + (["C"] if sp.contains_symbolic_c else [])
        return (EXIT_OK if v.kind is bisp.Verdict.STRONG else EXIT_FOUND), report
    if name == "equiv":
        rep = bisp.ne_bisp_equivalence(game, budget, path_cap)
        report["verdict"] = "agree" if rep.agree else "disagree"
        report["bisp"] = rep.verdict.kind.value
        report["terminal_ne"] = [profile_to_list(p) for p in rep.terminal_ne]
        report["cyclic_ne"] = [profile_to_list(p) for p in rep.cyclic_ne]
        report["missing"] = [
            {"profile": profile_to_list(p), "play": list(steps), "absent_from": list(who)}
            for p, steps, who in rep.missing
        ]
        return (EXIT_OK if rep.agree else EXIT_FOUND), report
    if name == "gallai":
        for i in game.players:
            ok, cycle = potential.check_condition_ii(game, i)
            if not ok:
                report.update(verdict="condition (ii) fails", player=i, cycle=list(cycle))
                return EXIT_FOUND, report
        transformed, pots = potential.restore_positivity(game)
        ok, bad = potential.check_condition_i(transformed)
        report["verdict"] = "restored" if ok else "not restored"
        report["potentials"] = {str(p.player): [format_rational(x) for x in p.x] for p in pots}
        report["game"] = game_to_document(transformed)
        if bad:
            report["violations"] = [list(b) for b in bad]
        return (EXIT_OK if ok else EXIT_FOUND), report
    raise UsageError(f"unknown check {name!r}")


def _pair(text: str) -> tuple[int, int]:
    parts = text.replace(",", " ").split()
    if len(parts) == 1:
        parts = parts * 2
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected LO,HI or a single value, got {text!r}")
    return int(parts[0]), int(parts[1])


def _family(text: str) -> search.FamilySpec:
    """``K,D,C1/C2/...[,N]``, e.g. ``2,2,1/2``."""
    parts = text.split(",")
    if len(parts) not in (3, 4):
        raise argparse.ArgumentTypeError("family is K,D,COSTS[,N] with COSTS like 1/2")
    k, d = int(parts[0]), int(parts[1])
    costs = tuple(int(c) for c in parts[2].split("/"))
    n = int(parts[3]) if len(parts) == 4 else 2
    return search.FamilySpec(k, d, costs, n)


def _gen_params(args: argparse.Namespace) -> search.GenParams:
    return search.GenParams(
        n=args.n,
        vertex_count=args.vertices,
        out_degree=args.out_degree,
        cost=args.costs,
        bidirected=args.bidirected,
        bipartite=args.bipartite,
        seed=args.seed,
    )


def _add_gen_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int, default=2, help="number of players")
    p.add_argument("--vertices", type=_pair, default=(3, 7), metavar="LO,HI", help="vertex count incl. t")
    p.add_argument("--out-degree", type=_pair, default=(1, 3), metavar="LO,HI")
    p.add_argument("--costs", type=_pair, default=(1, 9), metavar="LO,HI", help="integer local cost range")
    p.add_argument("--bidirected", action="store_true")
    p.add_argument("--bipartite", action="store_true")
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spgames", description="Shortest-path game checks and campaigns.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="run one check on a game document")
    p.add_argument("--game", required=True)
    p.add_argument("--check", required=True, choices=CHECK_NAMES)
    p.add_argument("--tie-mode", choices=sorted(TIE_MODES), default="all-min")
    p.add_argument("--budget-profiles", type=int, default=gm.DEFAULT_PROFILE_BUDGET)
    p.add_argument("--budget-paths", type=int, default=10**6)
    p.add_argument("--json", action="store_true", help="structured output")

    p = sub.add_parser("campaign", help="run a seeded or exhaustive campaign")
    p.add_argument("--config", help="JSON campaign config; flags are ignored when given")
    p.add_argument("--check", choices=search.CHECKS)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--family", type=_family, help="exhaustive family K,D,COSTS[,N] instead of random games")
    p.add_argument("--tie-mode", choices=sorted(TIE_MODES), default="all-min")
    p.add_argument("--budget-profiles", type=int, default=gm.DEFAULT_PROFILE_BUDGET)
    p.add_argument("--budget-paths", type=int, default=10**6)
    _add_gen_flags(p)

    p = sub.add_parser("export-dot", help="print a game as Graphviz DOT")
    p.add_argument("--game", required=True)

    p = sub.add_parser("generate", help="print one random game document")
    _add_gen_flags(p)
    p.add_argument("--out", help="write to this file instead of stdout")

    p = sub.add_parser("normalize", help="print the normalized game document")
    p.add_argument("--game", required=True)
    p.add_argument("--out")
    return parser


def _write_campaign(report: search.CampaignReport, out_dir: Path) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / "records.jsonl", "w") as fh:
        for record in report.records:
            fh.write(record_line(record) + "\n")
    cx_dir = out_dir / "counterexamples"
    for record in report.counterexamples:
        cx_dir.mkdir(exist_ok=True)
        name = f"instance_{record['instance_index']:07d}.json"
        (cx_dir / name).write_text(json.dumps(record["game"], indent=2) + "\n")
    summary = {
        "config": report.config.to_dict(),
        "instances_run": report.instances_run,
        "counts": report.counts,
        "counterexamples": [r["instance_index"] for r in report.counterexamples],
        "oracle_mismatches": [r["instance_index"] for r in report.mismatches],
        "elapsed_s": round(report.elapsed, 3),
    }
    (out_dir / "summary.json").write_text(json.dumps(summary, indent=2) + "\n")


def _campaign_config(args: argparse.Namespace) -> search.CampaignConfig:
    if args.config:
        try:
            data = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config: {exc}") from None
        return search.CampaignConfig.from_dict(data)
    if not args.check:
        raise UsageError("--check or --config is required")
    return search.CampaignConfig(
        check=args.check,
        params=_gen_params(args),
        count=args.count,
        family=args.family,
        seed=args.seed,
        workers=args.workers,
        tie_mode=TIE_MODES[args.tie_mode],
        profile_budget=args.budget_profiles,
        path_budget=args.budget_paths,
    )


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_OK
    try:
        if args.command == "check":
            g = read_game(args.game)
            code, report = run_check_command(
                g, args.check, TIE_MODES[args.tie_mode], args.budget_profiles, args.budget_paths
            )
            _emit(report, args.json)
            return code
        if args.command == "campaign":
            config = _campaign_config(args)
            report = search.run_campaign(config)
            _write_campaign(report, Path(args.out_dir))
            print(f"{config.check}: {report.instances_run} instances, {report.counts}")
            if report.counterexamples:
                print(f"counterexamples: {[r['instance_index'] for r in report.counterexamples]}")
            return EXIT_FOUND if report.counterexamples else EXIT_OK
        if args.command == "export-dot":
            sys.stdout.write(game_to_dot(read_game(args.game)))
            return EXIT_OK
        if args.command == "generate":
            text = dumps_game(search.gen_random_game(_gen_params(args)))
            if args.out:
                Path(args.out).write_text(text)
            else:
                sys.stdout.write(text)
            return EXIT_OK
        if args.command == "normalize":
            norm, _ = gm.normalize_game(read_game(args.game))
            text = dumps_game(norm)
            if args.out:
                Path(args.out).write_text(text)
            else:
                sys.stdout.write(text)
            return EXIT_OK
    except (OSError, DocumentError, UsageError, GraphError, gm.GameError, ValueError, search.GenerationExhaustedError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
