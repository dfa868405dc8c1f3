"""Bribery followed by opinion diffusion in society graphs.

Voters are grouped into types (a preference order plus optional
attributes) that form the vertices of a society graph.  A briber shifts a
preferred candidate up in some voters' orders, opinions then spread by
majority diffusion, and finally a voting rule picks the winners.  The
package offers exact solvers (an integer program with a built-in
branch-and-bound and an LP-file bridge), heuristics, a brute-force oracle
and an experiment harness.
"""

from .bribery import BriberyPlan, BsgInstance, CostModel, ShiftMatrix, apply_plan, shift_cost_matrix
from .diffusion import (
    DiffusionTrace,
    InfluenceParams,
    ProcessSpec,
    async_step,
    detect_cycle,
    explore_async,
    generalized_step,
    influence_coefficient,
    run_async,
    run_generalized,
    run_sync,
    sync_step,
)
from .election import (
    BORDA,
    PLURALITY,
    STV,
    Society,
    SocietyGraph,
    VoterType,
    VotingRule,
    build_society_graph,
    canonical_graph,
    enumerate_orders,
    kemeny_ranking,
    margin_of_victory,
    scores,
    stv_winner,
    swap_distance,
    winners,
)
from .generators import impartial_culture, vc_gadget
from .heuristics import SaParams, budget_search, evaluate_plan, greedy_decision, sa_decision
from .oracle import OracleLimits, async_decide, brute_force_optimal

__version__ = "0.1.0"

__all__ = [
    "BORDA",
    "PLURALITY",
    "STV",
    "BriberyPlan",
    "BsgInstance",
    "CostModel",
    "DiffusionTrace",
    "InfluenceParams",
    "OracleLimits",
    "ProcessSpec",
    "SaParams",
    "ShiftMatrix",
    "Society",
    "SocietyGraph",
    "VoterType",
    "VotingRule",
    "apply_plan",
    "async_decide",
    "async_step",
    "brute_force_optimal",
    "budget_search",
    "build_society_graph",
    "canonical_graph",
    "detect_cycle",
    "enumerate_orders",
    "evaluate_plan",
    "explore_async",
    "generalized_step",
    "greedy_decision",
    "impartial_culture",
    "influence_coefficient",
    "kemeny_ranking",
    "margin_of_victory",
    "run_async",
    "run_generalized",
    "run_sync",
    "sa_decision",
    "scores",
    "shift_cost_matrix",
    "stv_winner",
    "swap_distance",
    "sync_step",
    "vc_gadget",
    "winners",
]
