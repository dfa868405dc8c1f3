"""Greedy and simulated-annealing bribery heuristics with budget search.

Both heuristics work on a :class:`~society_bsg.bribery.ShiftMatrix` and
judge a plan by the margin of victory of ``p`` after applying the shifts
and running synchronous diffusion to convergence.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass

from .bribery import BsgInstance, ShiftMatrix
from .diffusion import sync_final
from .election import margin_of_victory, Society
from .errors import PlanError, SearchFailureError, UnsupportedRuleError


def _check_instance(inst: BsgInstance) -> None:
    if not inst.rule.is_scoring:
        raise UnsupportedRuleError("the heuristics need a scoring rule (margin of victory)")
    if inst.mode != "sync":
        raise UnsupportedRuleError("the heuristics evaluate plans under synchronous diffusion")


class PlanEvaluator:
    """Margin of victory after shifts and diffusion, cached by bribed society."""

    def __init__(self, inst: BsgInstance):
        _check_instance(inst)
        self.inst = inst
        self.cache = {}
        self.calls = 0

    def weights_margin(self, weights) -> int:
        hit = self.cache.get(weights)
        if hit is None:
            self.calls += 1
            g = self.inst.graph
            final = sync_final(g.with_weights(weights))
            hit = margin_of_victory(self.inst.rule, Society(g.orders, final), self.inst.p)
            self.cache[weights] = hit
        return hit

    def __call__(self, plan: ShiftMatrix) -> int:
        return self.weights_margin(plan.bribed_weights())


def evaluate_plan(inst: BsgInstance, plan: ShiftMatrix) -> int:
    """Margin of victory of ``p`` once ``plan`` is applied and diffusion has converged.

    Raises:
        PlanError: the matrix breaks its row or level invariants.
    """
    _check_instance(inst)
    if plan.graph.weights != inst.graph.weights or plan.p != inst.p:
        raise PlanError("plan was built for a different society or candidate")
    plan.validate()
    return PlanEvaluator(inst)(plan)


def greedy_decision(inst: BsgInstance, b: int, evaluator: PlanEvaluator | None = None):
    """Greedy unit-shift heuristic.

    Starting from the empty plan, each iteration tries every way of shifting
    one more voter's ``p`` up by one position and keeps the move with the
    best resulting margin (lowest ``(type, level)`` among ties).  Stops
    once ``p`` wins or after ``b`` iterations.

    Returns:
        ``(plan, success)``.
    """
    ev = evaluator or PlanEvaluator(inst)
    plan = ShiftMatrix(inst.graph, inst.p)
    margin = ev(plan)
    m = inst.m
    for _ in range(b):
        if margin >= 0:
            break
        best = None
        weights = list(plan.bribed_weights())
        for i, row in enumerate(plan.a):
            for s in range(m - 1):
                if row[s] and plan.allowed(i, s + 1):
                    src, dst = plan.targets[i][s], plan.targets[i][s + 1]
                    weights[src] -= 1
                    weights[dst] += 1
                    val = ev.weights_margin(tuple(weights))
                    weights[src] += 1
                    weights[dst] -= 1
                    if best is None or val > best[0]:
                        best = (val, i, s)
        if best is None:
            break
        margin, i, s = best
        plan.a[i][s] -= 1
        plan.a[i][s + 1] += 1
    return plan, margin >= 0


@dataclass(frozen=True)
class SaParams:
    """Simulated annealing settings.

    Attributes:
        iterations: number of local-move iterations ``T``.
        p0: initial acceptance probability; it decreases by ``p0 / T`` per
            iteration.
        seed: seed of the Mersenne Twister generator (``random.Random``).
    """

    iterations: int = 10000
    p0: float = 0.2
    seed: int = 0

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError("iterations must be at least 1")
        if not 0 <= self.p0 <= 1:
            raise ValueError("p0 must lie in [0, 1]")


def _random_fill(plan: ShiftMatrix, b: int, rng: random.Random) -> None:
    """Random initial plan of cost at most ``b``.

    Repeatedly picks a cell ``(i, j)``; an empty bribed cell receives a
    uniform number of the type's still-unbribed voters if the budget allows.
    Stops at cost ``b`` or after ``tau * m`` consecutive fills that changed
    nothing.
    """
    tau, m = plan.graph.tau, plan.graph.m
    cost = plan.cost
    misses = 0
    while cost < b and misses < tau * m:
        i = rng.randrange(tau)
        j = rng.randrange(m)
        if j == 0 or not plan.allowed(i, j) or plan.a[i][j]:
            misses += 1
            continue
        v = rng.randint(0, plan.a[i][0])
        if v == 0 or cost + v * j > b:
            misses += 1
            continue
        plan.a[i][j] = v
        plan.a[i][0] -= v
        cost += v * j
        misses = 0


def sa_decision(inst: BsgInstance, b: int, params: SaParams = SaParams(), evaluator: PlanEvaluator | None = None):
    """Simulated annealing over cost-neutral shift exchanges.

    A move takes one voter of type ``k`` from shift level ``j1`` down to
    ``j1 - 1`` and one voter of another type ``i`` from level ``j2 - 1`` up
    to ``j2``, so the cost is unchanged.  Improvements are accepted with
    probability ``1 - p1``, other moves (including equal margins) with
    probability ``p1``; ``p1`` starts at ``p0`` and drops by ``p0 / T``
    each iteration.  The best plan seen is returned.

    Returns:
        ``(plan, success)``.
    """
    ev = evaluator or PlanEvaluator(inst)
    empty = ShiftMatrix(inst.graph, inst.p)
    if ev(empty) >= 0:
        return empty, True
    if b <= 0:
        return empty, False
    rng = random.Random(params.seed)
    cur = empty.copy()
    _random_fill(cur, b, rng)
    cur_val = ev(cur)
    best, best_val = cur.copy(), cur_val
    populated = [i for i, w in enumerate(inst.graph.weights) if w]
    m = inst.m
    p1 = params.p0
    step = params.p0 / params.iterations
    for _ in range(params.iterations):
        if len(populated) >= 2:
            k, i = rng.sample(populated, 2)
            down = [j for j in range(1, m) if cur.a[k][j]]
            up = [j for j in range(1, m) if cur.a[i][j - 1] and cur.allowed(i, j)]
            if down and up:
                j1 = rng.choice(down)
                j2 = rng.choice(up)
                cand = cur.copy()
                cand.a[k][j1] -= 1
                cand.a[k][j1 - 1] += 1
                cand.a[i][j2 - 1] -= 1
                cand.a[i][j2] += 1
                val = ev(cand)
                accept_p = 1 - p1 if val > cur_val else p1
                if rng.random() < accept_p:
                    cur, cur_val = cand, val
                    if val > best_val:
                        best, best_val = cand.copy(), val
        p1 -= step
    return best, best_val >= 0


def derive_seed(inst: BsgInstance, b: int, seed: int) -> int:
    """Deterministic per-probe seed from the instance content, budget and base seed."""
    h = hashlib.sha256(f"{inst.digest()}:{b}:{seed}".encode()).digest()
    return int.from_bytes(h[:8], "big")


def greedy_decider(inst: BsgInstance):
    ev = PlanEvaluator(inst)
    return lambda inst_, b: greedy_decision(inst_, b, ev)


def sa_decider(inst: BsgInstance, params: SaParams = SaParams()):
    ev = PlanEvaluator(inst)

    def decide(inst_, b):
        p = SaParams(params.iterations, params.p0, derive_seed(inst_, b, params.seed))
        return sa_decision(inst_, b, p, ev)

    return decide


def budget_search(decider, inst: BsgInstance, cap: int | None = None):
    """Smallest budget (on the doubling/bisection lattice) at which ``decider`` succeeds.

    Tries ``b = 0`` first, then ``1, 2, 4, ...`` until success, then bisects
    between the last failing and the first succeeding budget.

    Args:
        decider: callable ``(inst, b) -> (plan, success)``.
        inst: the instance.
        cap: largest budget to try; defaults to ``2 * n * (m - 1)``.

    Returns:
        ``(b_star, plan)``.

    Raises:
        SearchFailureError: no success up to ``cap``.
    """
    if cap is None:
        cap = 2 * inst.n * (inst.m - 1)
    plan, ok = decider(inst, 0)
    if ok:
        return 0, plan
    lo, b = 0, 1
    found = None
    while True:
        b = min(b, cap)
        plan, ok = decider(inst, b)
        if ok:
            found = (b, plan)
            break
        if b >= cap:
            raise SearchFailureError(f"no success with any budget up to {cap}")
        lo, b = b, 2 * b
    hi, hi_plan = found
    while hi - lo > 1:
        mid = (lo + hi) // 2
        plan, ok = decider(inst, mid)
        if ok:
            hi, hi_plan = mid, plan
        else:
            lo = mid
    return hi, hi_plan
