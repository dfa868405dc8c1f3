import pytest
from hypothesis import given
from hypothesis import strategies as st

from society_bsg.bribery import BsgInstance
from society_bsg.diffusion import run_generalized
from society_bsg.election import PLURALITY, swap1_arcs, swap_distance
from society_bsg.generators import (
    gadget_candidates,
    gadget_order,
    gadget_weight_t,
    has_vertex_cover,
    impartial_culture,
    rotating_cohorts,
    vc_gadget,
)
from society_bsg.oracle import async_decide

FIG3_EDGES = [(0, 1), (1, 2)]
TRIANGLE = [(0, 1), (1, 2), (0, 2)]


class TestImpartialCulture:
    def test_single_candidate(self):
        s = impartial_culture(1, 17, 0)
        assert s.weights == (17,)

    @given(st.integers(1, 5), st.integers(0, 300), st.integers(0, 2**32))
    def test_conservation(self, m, n, seed):
        s = impartial_culture(m, n, seed)
        assert sum(s.weights) == n and len(s.weights) == len(s.orders)

    def test_deterministic(self):
        assert impartial_culture(3, 1000, 42).weights == impartial_culture(3, 1000, 42).weights
        assert impartial_culture(3, 1000, 42).weights != impartial_culture(3, 1000, 43).weights

    def test_roughly_uniform(self):
        w = impartial_culture(3, 60000, 1).weights
        assert all(abs(x - 10000) < 500 for x in w)


class TestGadget:
    def test_figure_three_shape(self):
        g, p = vc_gadget(3, FIG3_EDGES, 2)
        assert g.tau == 18 and g.m == 10 and p == 3
        assert len(g.arcs) == 2 * 3 + 2 * 2 + 2 * 2
        assert gadget_weight_t(3, 2) == 3388 ** 2
        T = 3388 ** 2
        assert g.weights[:3] == (T, T - 29 * 2, T - 1100 * 3 - 20)
        assert sum(g.weights[3:]) == 3388

    def test_candidates_and_orders(self):
        names = gadget_candidates(2)
        assert names == {"c": 0, "d": 1, "e": 2, "p": 3, "a0": 4, "b0": 5, "a1": 6, "b1": 7}
        assert gadget_order((2, 1, 3), {1}, 2) == (2, 1, 3, 4, 5, 7, 6, 0)

    @pytest.mark.parametrize("nv, edges", [(3, FIG3_EDGES), (3, TRIANGLE), (4, [(0, 1), (0, 2), (0, 3)])])
    def test_explicit_arcs_join_swap_neighbours(self, nv, edges):
        g, _ = vc_gadget(nv, edges, 1)
        for a, b, _ in g.arcs:
            assert swap_distance(g.orders[a], g.orders[b]) == 1
        # the only swap-1 pair left out joins the c-first and d-first isolated nodes
        explicit = {(a, b) for a, b, _ in g.arcs}
        assert {(a, b) for a, b, _ in swap1_arcs(g.orders)} - explicit == {(0, 2)}

    def test_validation(self):
        with pytest.raises(ValueError):
            vc_gadget(5, [(0, 1), (0, 2), (0, 3), (0, 4)], 1)
        with pytest.raises(ValueError):
            vc_gadget(2, [(0, 1), (1, 0)], 1)
        with pytest.raises(ValueError):
            vc_gadget(2, [(0, 0)], 1)
        with pytest.raises(ValueError):
            vc_gadget(2, [(0, 5)], 1)
        with pytest.raises(ValueError):
            vc_gadget(2, [(0, 1)], -1)

    def test_vertex_cover_check(self):
        assert has_vertex_cover(3, TRIANGLE, 2)
        assert not has_vertex_cover(3, TRIANGLE, 1)
        assert has_vertex_cover(2, [], 0)

    @pytest.mark.parametrize("nv, edges, k", [
        (2, [(0, 1)], 0), (2, [(0, 1)], 1),
        (3, FIG3_EDGES, 0), (3, FIG3_EDGES, 1), (3, FIG3_EDGES, 2),
        (3, TRIANGLE, 0), (3, TRIANGLE, 1), (3, TRIANGLE, 2),
    ])
    def test_decision_matches_vertex_cover(self, nv, edges, k):
        g, p = vc_gadget(nv, edges, k)
        inst = BsgInstance(g, PLURALITY, p, budget=0, mode="async-optimistic")
        assert async_decide(inst, "optimistic") == has_vertex_cover(nv, edges, k)


class TestRotatingCohorts:
    def test_equal_young_weights_stay_put(self):
        g, spec = rotating_cohorts([2, 2, 2], [1, 1, 1], rounds=5)
        trace = run_generalized(g, spec)
        assert trace.cycle == (0, 1) and not trace.converged

    def test_validation(self):
        with pytest.raises(ValueError):
            rotating_cohorts([1, 2], [1, 2, 3])
