import io
import json
from fractions import Fraction

import pytest
from hypothesis import given, settings

from society_bsg.bribery import INF, BriberyPlan, BsgInstance, CostModel, ShiftMatrix
from society_bsg.diffusion import InfluenceParams, ProcessSpec, run_generalized, run_sync
from society_bsg.election import BORDA, STV, SocietyGraph, Topology, VoterType, canonical_graph
from society_bsg.errors import SpecError
from society_bsg.generators import rotating_cohorts
from society_bsg.serialize import (
    cost_from_list,
    cost_to_list,
    dump_json,
    graph_from_dict,
    graph_to_dict,
    instance_from_dict,
    instance_to_dict,
    load_json,
    plan_from_list,
    plan_to_list,
    process_from_dict,
    process_to_dict,
    read_trace,
    trace_lines,
    write_trace,
)

from conftest import data_path, graphs, to_labels


class TestGraphs:
    def test_example_file(self):
        doc = load_json(data_path("example1.json"))
        inst = instance_from_dict(doc)
        assert inst.graph.weights == (21, 10, 10, 21, 42, 42)
        assert inst.rule.name == "plurality" and inst.p == 2
        assert len(inst.graph.arcs) == 6

    @settings(max_examples=50)
    @given(graphs(max_weight=100))
    def test_swap1_round_trip(self, g):
        doc = graph_to_dict(g)
        assert doc["policy"] == "swap1"
        back = graph_from_dict(json.loads(json.dumps(doc)))
        assert back.weights == g.weights and back.arcs == g.arcs and back.orders == g.orders

    def test_explicit_weighted_arcs(self):
        types = [VoterType(0, (0, 1), {"age": "Y"}), VoterType(1, (1, 0))]
        g = SocietyGraph(Topology(2, types, [(1, 0, Fraction(3, 2))], directed=True), (4, 5))
        doc = json.loads(json.dumps(graph_to_dict(g)))
        assert doc["arcs"] == [[1, 0, "3/2"]] and doc["directed"] is True
        back = graph_from_dict(doc)
        assert back.arcs == g.arcs and back.directed and back.types[0].attr("age") == "Y"

    @pytest.mark.parametrize("doc", [
        {"m": 2, "weights": [1, 1]},
        {"m": 2, "types": [{"id": 0, "order": [0, 1]}, {"id": 2, "order": [1, 0]}], "weights": [1, 1]},
        {"m": 2, "types": [{"id": 0, "order": [0, 1]}], "weights": ["x"]},
        {"m": 2, "types": [{"id": 0, "order": [0, 1]}], "weights": [1], "policy": "complete"},
    ])
    def test_malformed(self, doc):
        with pytest.raises(SpecError):
            graph_from_dict(doc)


class TestPlansAndCosts:
    def test_plan_round_trip(self, example_graph):
        sm = ShiftMatrix.full(example_graph, 1)
        moves = plan_to_list(sm)
        assert moves == plan_to_list(sm.to_plan())
        back = plan_from_list(example_graph.weights, json.loads(json.dumps(moves)))
        assert back == sm.to_plan()
        assert plan_to_list(BriberyPlan.identity(example_graph.weights)) == []

    def test_cost_round_trip(self):
        cm = CostModel([[0, 2, INF], [INF, 0, 1], [5, INF, 0]])
        entries = cost_to_list(cm)
        assert entries == [[0, 1, 2], [1, 2, 1], [2, 0, 5]]
        assert cost_from_list(3, entries) == cm
        assert cost_from_list(3, entries + [[2, 1, "inf"]]) == cm


class TestInstances:
    def test_defaults_are_omitted(self, example_graph):
        doc = instance_to_dict(BsgInstance(example_graph, BORDA, 1))
        assert "cost" not in doc and "budget" not in doc and doc["mode"] == "sync"

    def test_full_round_trip(self, example_graph):
        cost = CostModel([[0 if i == j else 3 for j in range(6)] for i in range(6)])
        inst = BsgInstance(example_graph, STV, 2, cost=cost, budget=7, mode="async-pessimistic")
        back = instance_from_dict(json.loads(json.dumps(instance_to_dict(inst))))
        assert back.digest() == inst.digest()
        assert (back.budget, back.mode, back.cost) == (7, "async-pessimistic", cost)

    def test_overrides(self):
        inst = instance_from_dict(load_json(data_path("example1.json")), rule="borda", p=0)
        assert inst.rule == BORDA and inst.p == 0

    def test_process_round_trip(self):
        g, spec = rotating_cohorts([1, 2, 3], [5, 5, 5])
        inst = BsgInstance(g, BORDA, 0, mode=spec)
        back = instance_from_dict(json.loads(json.dumps(instance_to_dict(inst))))
        assert back.mode == spec
        assert run_generalized(back.graph, back.mode).cycle == (0, 3)

    def test_influence_params(self):
        params = InfluenceParams(round_damping=False)
        spec = ProcessSpec("local-election", 3, immobile_types=[1], params=params)
        back = process_from_dict(json.loads(json.dumps(process_to_dict(spec))))
        assert back == spec
        with pytest.raises(SpecError):
            process_from_dict({"kind": "local-election", "max_rounds": 0})

    def test_file_helpers(self, tmp_path, example_graph):
        path = tmp_path / "inst.json"
        dump_json(instance_to_dict(BsgInstance(example_graph, BORDA, 1)), path)
        assert instance_from_dict(load_json(path)).graph.weights == example_graph.weights


class TestTraces:
    def test_running_example(self, example_graph):
        trace = run_sync(example_graph)
        lines = list(trace_lines(trace))
        assert len(lines) == 3
        first = json.loads(lines[0])
        assert first == {"step": 0, "weights": list(example_graph.weights), "events": []}
        steps = read_trace(lines)
        assert to_labels(steps[-1][1]) == (0, 0, 0, 0, 73, 73)
        assert sum(w for _, _, w in steps[1][2]) == 62

    def test_stream_and_fractions(self):
        buf = io.StringIO()
        g = canonical_graph(2, [1, 3])
        write_trace(run_sync(g), buf)
        assert read_trace(buf.getvalue().splitlines())[-1][1] == (0, 4)
        assert read_trace(['{"step": 0, "weights": ["1/2", 3], "events": []}'])[0][1] == (Fraction(1, 2), 3)
