from fractions import Fraction

import pytest
from hypothesis import given, settings

from society_bsg.diffusion import (
    InfluenceParams,
    ProcessSpec,
    check_trace,
    detect_cycle,
    generalized_step,
    influence_coefficient,
    run_generalized,
    sync_step,
)
from society_bsg.election import Society, SocietyGraph, Topology, VoterType, canonical_graph, kemeny_ranking
from society_bsg.errors import SpecError
from society_bsg.generators import rotating_cohorts

from conftest import graphs, to_labels


def typ(i, order, age=None, stub=None):
    attrs = {}
    if age:
        attrs["age"] = age
    if stub:
        attrs["stubbornness"] = stub
    return VoterType(i, order, attrs)


class TestInfluence:
    def test_self_influence_is_one(self):
        t = typ(0, (0, 1, 2), "Y", "S")
        assert influence_coefficient(t, t, 3) == 1

    def test_old_never_influences_young(self):
        assert influence_coefficient(typ(0, (0, 1, 2), "O", "P"), typ(1, (2, 1, 0), "Y", "P"), 1) == 0

    def test_formula(self):
        t, t2 = typ(0, (0, 1, 2), "M", "P"), typ(1, (1, 0, 2), "M", "P")
        assert influence_coefficient(t, t2, 2) == Fraction(1, 4)
        stubborn = typ(1, (1, 0, 2), "M", "S")
        assert influence_coefficient(t, stubborn, 2) == Fraction(1, 8)
        young = typ(2, (2, 1, 0), "Y", "P")
        # distance 3, round 1, f(Y, Y) = 6/5
        assert influence_coefficient(typ(3, (0, 1, 2), "Y", "P"), young, 1) == Fraction(6, 5) / 8

    def test_without_round_damping(self):
        params = InfluenceParams(round_damping=False)
        t, t2 = typ(0, (0, 1, 2), "M", "P"), typ(1, (1, 0, 2), "M", "P")
        assert influence_coefficient(t, t2, 5, params) == Fraction(1, 2)

    def test_bad_round(self):
        t = typ(0, (0, 1))
        with pytest.raises(ValueError):
            influence_coefficient(t, t, 0)


class TestProcesses:
    def test_basic_spec_matches_sync_step(self, example_graph):
        g, events = generalized_step(example_graph, ProcessSpec())
        assert to_labels(g.weights) == (10, 0, 0, 10, 63, 63)
        assert (g.weights, events) == (sync_step(example_graph)[0].weights, sync_step(example_graph)[1])

    @settings(max_examples=100)
    @given(graphs(max_weight=100))
    def test_basic_and_weighted_majority_equal_sync(self, g):
        expected = sync_step(g)[0].weights
        assert generalized_step(g, ProcessSpec("basic-majority"))[0].weights == expected
        assert generalized_step(g, ProcessSpec("weighted-majority"))[0].weights == expected

    @settings(max_examples=50)
    @given(graphs(max_weight=100))
    def test_basic_spec_converges_without_cycle(self, g):
        trace = run_generalized(g, ProcessSpec("basic-majority", max_rounds=g.tau + 1))
        assert trace.converged and trace.cycle is None
        check_trace(trace)

    def test_weighted_arcs(self):
        types = [VoterType(0, (0, 1)), VoterType(1, (1, 0))]
        # directed: 1 influences 0 with strength 3; 0 has 5 voters, 1 has 2
        g = SocietyGraph(Topology(2, types, [(1, 0, 3)], directed=True), (5, 2))
        g2, events = generalized_step(g, ProcessSpec("weighted-majority"))
        assert events == [(0, 1, 5)] and g2.weights == (0, 7)
        # plain majority ignores the strength
        assert generalized_step(g, ProcessSpec("basic-majority"))[1] == []

    def test_immobile_types(self, example_graph):
        # type 0 moves under the plain rule; pinning it keeps its voters
        assert any(src == 0 for src, _, _ in sync_step(example_graph)[1])
        g, events = generalized_step(example_graph, ProcessSpec(immobile_types=[0]))
        assert all(src != 0 for src, _, _ in events)
        assert g.weights[0] >= example_graph.weights[0]

    def test_local_election_unanimous_influence(self):
        types = [typ(0, (0, 1, 2), "Y", "P"), typ(1, (2, 1, 0), "Y", "P")]
        g = SocietyGraph(Topology(3, types, [(0, 1)]), (1, 100))
        spec = ProcessSpec("local-election", params=InfluenceParams())
        g2, events = generalized_step(g, spec)
        assert (0, 1, 1) in events
        assert g2.weights == (0, 101)
        assert g2.types[1].attributes == types[0].attributes

    def test_local_election_materialises_new_order(self):
        # the weighted Borda ranking (1, 0, 2) is not present yet
        types = [typ(0, (0, 1, 2), "M", "P"), typ(1, (1, 2, 0), "M", "P")]
        g = SocietyGraph(Topology(3, types, [(0, 1)]), (2, 8))
        g2, events = generalized_step(g, ProcessSpec("local-election", params=InfluenceParams()))
        assert g2.tau == 3 and g2.weights == (0, 8, 2)
        assert g2.types[2].order == (1, 0, 2)
        assert g2.types[2].attributes == (("age", "M"), ("stubbornness", "P"))
        with pytest.raises(SpecError):
            generalized_step(g, ProcessSpec("local-election", params=InfluenceParams(), materialize=False))

    def test_local_election_tie_puts_higher_index_first(self):
        # own tally: candidate 0 gets 2; neighbour (distance 1, factor 1/2) gives candidate 1 also 2
        types = [VoterType(0, (0, 1)), VoterType(1, (1, 0))]
        g = SocietyGraph(Topology(2, types, [(0, 1)]), (2, 4))
        spec = ProcessSpec("local-election", immobile_types=[1], params=InfluenceParams())
        assert generalized_step(g, spec)[1] == [(0, 1, 2)]

    def test_kemeny_neighbourhood(self, example_graph):
        g, events = generalized_step(example_graph, ProcessSpec("kemeny-neighborhood"))
        topo = example_graph.topology
        for v in range(6):
            hood = topo.closed_neighborhood(v)
            target = kemeny_ranking(Society([topo.orders[u] for u in hood], [example_graph.weights[u] for u in hood]))
            moved = [x for src, x, _ in events if src == v]
            if target == topo.orders[v]:
                assert not moved
            else:
                assert g.types[moved[0]].order == target

    def test_rotating_cohorts(self):
        g, spec = rotating_cohorts([1, 2, 3], [5, 5, 5], rounds=9)
        trace = run_generalized(g, spec)
        young = [tuple(s[0::2]) for s in trace.states]
        assert young[:4] == [(1, 2, 3), (3, 1, 2), (2, 3, 1), (1, 2, 3)]
        assert all(s[1::2] == (5, 5, 5) for s in trace.states)
        assert trace.cycle == (0, 3) and not trace.converged
        assert detect_cycle(trace) == (0, 3)

    def test_stable_input(self):
        g = canonical_graph(3, [5] * 6)
        trace = run_generalized(g, ProcessSpec(max_rounds=7))
        assert len(trace.states) == 1 and trace.cycle is None

    def test_spec_validation(self):
        with pytest.raises(SpecError):
            ProcessSpec("bogus")
        with pytest.raises(SpecError):
            ProcessSpec(max_rounds=0)
        g = canonical_graph(2, [1, 1])
        with pytest.raises(SpecError):
            generalized_step(g, ProcessSpec("custom-table", table={0: 9}))
