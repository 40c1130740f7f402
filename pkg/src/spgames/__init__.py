"""Exact-arithmetic engine for n-person shortest-path games on digraphs."""

from .bisp import BiSPVerdict, SPSet, Verdict, bisp_check, ne_bisp_equivalence, sp_set
from .exact import INF, rational
from .game import (
    Play,
    SPGame,
    Strategy,
    StrategyProfile,
    best_response_value,
    effective_cost,
    enumerate_ne,
    is_ne,
    is_une,
    play,
    subdivide_to_bipartite,
    validate,
)
from .graph import Digraph, dijkstra, enumerate_st_paths, min_mean_cycle, normalize
from .potential import apply_potentials, check_condition_i, check_condition_ii, gallai_potential
from .search import CampaignConfig, GenParams, gen_random_game, run_campaign

__version__ = "0.1.0"
