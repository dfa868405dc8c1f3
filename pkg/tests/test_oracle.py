import itertools
import random

import pytest

from society_bsg.bribery import BsgInstance, ShiftMatrix, shift_up
from society_bsg.diffusion import sync_final
from society_bsg.election import BORDA, PLURALITY, STV, Society, canonical_graph, order_id, winners
from society_bsg.errors import OracleLimitError
from society_bsg.heuristics import evaluate_plan
from society_bsg.oracle import (
    OracleLimits,
    async_decide,
    async_outcomes,
    brute_force_optimal,
    max_shift_cost,
    plans_at_cost,
)


def naive_optimum(inst):
    """Minimum cost over every shift matrix, by plain product enumeration."""
    g, p = inst.graph, inst.p
    per_type = []
    for i, (o, w) in enumerate(zip(g.orders, g.weights)):
        depth = o.index(p)
        rows = [r for r in itertools.product(range(w + 1), repeat=depth) if sum(r) <= w]
        per_type.append([(i, r) for r in rows])
    best = None
    for choice in itertools.product(*per_type):
        weights = list(g.weights)
        cost = 0
        for i, r in choice:
            for level, v in enumerate(r, start=1):
                weights[i] -= v
                weights[order_id(shift_up(g.orders[i], p, level))] += v
                cost += v * level
        final = sync_final(g.with_weights(weights))
        if p in winners(inst.rule, Society(g.orders, final)) and (best is None or cost < best):
            best = cost
    return best


class TestBruteForce:
    def test_already_winning(self, example_graph):
        res = brute_force_optimal(BsgInstance(example_graph, BORDA, 0))
        assert res.cost == 0 and res.plan.cost == 0

    def test_two_voters(self):
        res = brute_force_optimal(BsgInstance(canonical_graph(3, [0, 2, 0, 0, 0, 0]), BORDA, 2))
        assert res.status == "optimal" and res.cost == 1

    def test_unanimous_against_p(self):
        # 3 voters all rank p last: each needs two shifts under Plurality
        g = canonical_graph(3, [3, 0, 0, 0, 0, 0])
        inst = BsgInstance(g, PLURALITY, 2)
        assert brute_force_optimal(inst).cost == naive_optimum(inst)
        # Plurality tie among a, p after shifting two of three voters
        assert brute_force_optimal(inst).cost == 4

    @pytest.mark.parametrize("seed", range(20))
    def test_matches_naive_enumeration(self, seed):
        rng = random.Random(seed)
        w = [0] * 6
        for _ in range(rng.randint(1, 6)):
            w[rng.randrange(6)] += 1
        inst = BsgInstance(canonical_graph(3, w), rng.choice([BORDA, PLURALITY, STV]), rng.randrange(3))
        res = brute_force_optimal(inst)
        assert res.cost == naive_optimum(inst)
        if inst.rule.is_scoring:
            assert evaluate_plan(inst, res.plan) >= 0

    def test_plans_at_cost(self):
        g = canonical_graph(3, [1, 1, 0, 0, 0, 0])
        assert max_shift_cost(g, 2) == 3
        counts = [len(list(plans_at_cost(g, 2, c))) for c in range(5)]
        # type 0 (abp) can pay 0, 1 or 2; type 1 (apb) 0 or 1
        assert counts == [1, 2, 2, 1, 0]
        for c in range(4):
            for weights, _ in plans_at_cost(g, 2, c):
                assert sum(weights) == 2

    def test_limits(self):
        g = canonical_graph(3, [9, 0, 0, 0, 0, 0])
        inst = BsgInstance(g, BORDA, 2)
        with pytest.raises(OracleLimitError) as info:
            brute_force_optimal(inst, OracleLimits(max_plans=3))
        assert info.value.frontier >= -1
        with pytest.raises(OracleLimitError):
            brute_force_optimal(inst, OracleLimits(max_cost=1))
        assert brute_force_optimal(inst.with_budget(1)).status == "infeasible"
        with pytest.raises(ValueError):
            brute_force_optimal(BsgInstance(g, BORDA, 2, mode="async-optimistic"))


class TestAsync:
    def test_running_example(self, example_graph):
        inst = BsgInstance(example_graph, PLURALITY, 2, mode="async-optimistic")
        assert async_decide(inst, "optimistic") is True
        assert async_decide(inst, "pessimistic") is False

    def test_stable_graph_modes_agree(self):
        g = canonical_graph(3, [5, 5, 5, 5, 5, 4])
        for p in range(3):
            inst = BsgInstance(g, BORDA, p, mode="async-optimistic")
            expected = p in winners(BORDA, Society(g.orders, g.weights))
            assert async_decide(inst, "optimistic") == async_decide(inst, "pessimistic") == expected

    def test_budget_helps(self):
        g = canonical_graph(3, [0, 2, 0, 0, 0, 0])
        inst = BsgInstance(g, BORDA, 2, mode="async-optimistic")
        assert not async_decide(inst)
        assert async_decide(inst.with_budget(1))

    def test_stv_outcomes(self, example_graph):
        inst = BsgInstance(example_graph, STV, 0, mode="async-optimistic")
        some, every = async_outcomes(inst, example_graph.weights, OracleLimits())
        assert some and not every

    def test_limits(self, example_graph):
        inst = BsgInstance(example_graph, PLURALITY, 2, mode="async-optimistic")
        with pytest.raises(OracleLimitError):
            async_decide(inst, limits=OracleLimits(max_states=2))
        with pytest.raises(ValueError):
            async_decide(inst, "neutral")


def test_oracle_plan_is_a_shift_matrix(example_graph):
    res = brute_force_optimal(BsgInstance(example_graph, BORDA, 1))
    assert isinstance(res.plan, ShiftMatrix)
    res.plan.validate()
    assert res.plan.cost == res.cost
