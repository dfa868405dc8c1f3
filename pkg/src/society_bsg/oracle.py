"""Brute-force ground truth for bribery with diffusion.

Nothing here is clever on purpose: plans are enumerated cost level by cost
level and every candidate society is simulated with the diffusion module.
This module only relies on the election, diffusion and bribery primitives.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .bribery import BsgInstance, ShiftMatrix
from .diffusion import explore_async_detailed, sync_final
from .election import Society, score_matrix, winners
from .errors import OracleLimitError, PartialResultError


@dataclass(frozen=True)
class OracleLimits:
    """Resource limits.

    Attributes:
        max_cost: highest cost level to enumerate (default: the cost of
            shifting every voter's ``p`` to the top).
        max_plans: maximum number of plans to simulate.
        max_states: state budget for asynchronous exploration, per plan.
        time_budget: wall-clock limit in seconds.
    """

    max_cost: int | None = None
    max_plans: int | None = None
    max_states: int = 1_000_000
    time_budget: float | None = None


@dataclass
class OracleResult:
    """``status`` is ``"optimal"`` or ``"infeasible"`` (no plan works at any cost)."""

    status: str
    cost: int | None
    plan: ShiftMatrix | None
    plans_checked: int


def _row_options(graph, targets, i, budget):
    """Ways ``(levels_vector, cost)`` to bribe type ``i`` at cost <= budget, with the levels used."""
    w = graph.weights[i]
    if not w:
        return [((), 0)], ()
    levels = [j for j in range(1, graph.m) if targets[i][j] is not None]
    out = []

    def rec(k, left, cost, acc):
        if k == len(levels):
            out.append((tuple(acc), cost))
            return
        j = levels[k]
        for v in range(left + 1):
            if cost + v * j > budget:
                break
            acc.append(v)
            rec(k + 1, left - v, cost + v * j, acc)
            acc.pop()

    rec(0, w, 0, [])
    return out, tuple(levels)


def plans_at_cost(graph, p: int, cost: int):
    """Shift plans of total cost exactly ``cost``.

    Yields ``(bribed_weights, rows)`` where ``rows[i]`` lists the number of
    type-``i`` voters shifted by each available level ``1, 2, ...``.
    Plans come in lexicographic order of ``rows``.
    """
    tau = graph.tau
    targets = ShiftMatrix(graph, p).targets
    options, levels = [], []
    for i in range(tau):
        opts, lv = _row_options(graph, targets, i, cost)
        options.append(opts)
        levels.append(lv)
    # reach[i]: costs achievable by rows i..tau-1
    reach = [None] * (tau + 1)
    reach[tau] = {0}
    for i in range(tau - 1, -1, -1):
        costs = {c for _, c in options[i]}
        reach[i] = {a + b for a in costs for b in reach[i + 1] if a + b <= cost}
    if cost not in reach[0]:
        return
    weights = list(graph.weights)
    rows = [()] * tau

    def rec(i, left):
        if i == tau:
            if left == 0:
                yield tuple(weights), tuple(rows)
            return
        for vec, c in options[i]:
            if left - c not in reach[i + 1]:
                continue
            for v, j in zip(vec, levels[i]):
                if v:
                    weights[i] -= v
                    weights[targets[i][j]] += v
            rows[i] = vec
            yield from rec(i + 1, left - c)
            for v, j in zip(vec, levels[i]):
                if v:
                    weights[i] += v
                    weights[targets[i][j]] -= v
        rows[i] = ()

    yield from rec(0, cost)


def _to_matrix(graph, p, rows) -> ShiftMatrix:
    sm = ShiftMatrix(graph, p)
    for i, vec in enumerate(rows):
        levels = [j for j in range(1, graph.m) if sm.targets[i][j] is not None]
        for v, j in zip(vec, levels):
            sm.a[i][j] += v
            sm.a[i][0] -= v
    sm.validate()
    return sm


def max_shift_cost(graph, p) -> int:
    sm = ShiftMatrix.full(graph, p)
    return sm.cost


def _p_wins_sync(inst: BsgInstance, weights, cache) -> bool:
    hit = cache.get(weights)
    if hit is None:
        final = sync_final(inst.graph.with_weights(weights))
        hit = inst.p in winners(inst.rule, Society(inst.graph.orders, final))
        cache[weights] = hit
    return hit


def brute_force_optimal(inst: BsgInstance, limits: OracleLimits = OracleLimits()) -> OracleResult:
    """Cheapest shift plan after which ``p`` wins under synchronous diffusion.

    Plans are tried in increasing cost, so the first success is optimal.

    Raises:
        OracleLimitError: a limit was hit; ``frontier`` is the highest cost
            level that was fully examined (``-1`` if none).
    """
    if inst.mode != "sync":
        raise ValueError("brute_force_optimal handles synchronous diffusion; use async_decide")
    start = time.perf_counter()
    top = max_shift_cost(inst.graph, inst.p)
    last = top if limits.max_cost is None else min(top, limits.max_cost)
    if inst.budget is not None:
        last = min(last, inst.budget)
    cache = {}
    checked = 0
    for cost in range(last + 1):
        for weights, rows in plans_at_cost(inst.graph, inst.p, cost):
            checked += 1
            if limits.max_plans is not None and checked > limits.max_plans:
                raise OracleLimitError(f"more than {limits.max_plans} plans", frontier=cost - 1)
            if limits.time_budget is not None and checked % 512 == 0 and time.perf_counter() - start > limits.time_budget:
                raise OracleLimitError("time budget exhausted", frontier=cost - 1)
            if _p_wins_sync(inst, weights, cache):
                return OracleResult("optimal", cost, _to_matrix(inst.graph, inst.p, rows), checked)
    if last < top and inst.budget is None:
        raise OracleLimitError(f"no success up to cost {last}", frontier=last)
    return OracleResult("infeasible", None, None, checked)


def _score_projection(rule, orders):
    """Linear map from a weight vector to the score vector of a scoring rule."""
    S = score_matrix(rule, tuple(orders))
    rows = [[(j, s) for j, s in enumerate(row) if s] for row in S]

    def project(w):
        return tuple(sum(s * w[j] for j, s in row) for row in rows)

    return project


def async_outcomes(inst: BsgInstance, weights, limits: OracleLimits):
    """``(some_order_wins, every_order_wins)`` for one bribed society.

    For scoring rules only the score vectors of the reachable stable
    societies are kept, which is all the winner test needs.
    """
    g = inst.graph.with_weights(weights)
    scoring = inst.rule.is_scoring
    project = _score_projection(inst.rule, g.orders) if scoring else None
    try:
        finals = explore_async_detailed(g, limits.max_states, project).finals
    except PartialResultError as exc:
        raise OracleLimitError(f"asynchronous exploration exceeded {limits.max_states} states",
                               frontier=exc.states_explored) from exc
    wins = []
    for f in sorted(finals):
        if scoring:
            wins.append(f[inst.p] == max(f))
        else:
            wins.append(inst.p in winners(inst.rule, Society(g.orders, f)))
    return any(wins), all(wins)


def async_decide(inst: BsgInstance, mode: str = "optimistic", limits: OracleLimits = OracleLimits()) -> bool:
    """Decide the asynchronous problem by exhaustive search.

    With ``inst.budget`` unset (or 0) only the unbribed society is examined.
    Otherwise every shift plan of cost at most the budget is tried.

    Args:
        mode: ``"optimistic"`` (``p`` wins for some update order) or
            ``"pessimistic"`` (``p`` wins for every order).

    Raises:
        OracleLimitError: the exploration budget was exceeded.
    """
    if mode not in ("optimistic", "pessimistic"):
        raise ValueError(f"unknown mode {mode!r}")
    budget = inst.budget or 0
    for cost in range(budget + 1):
        for weights, _ in plans_at_cost(inst.graph, inst.p, cost):
            some, every = async_outcomes(inst, weights, limits)
            if (some if mode == "optimistic" else every):
                return True
    return False
