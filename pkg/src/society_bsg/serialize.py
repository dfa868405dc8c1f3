"""JSON encodings of instances, plans, cost models and diffusion traces.

Instance documents look like::

    {"m": 3,
     "types": [{"id": 0, "order": [0, 1, 2], "attributes": {}}, ...],
     "weights": [21, 42, ...],
     "policy": "swap1"              # or "arcs": [[from, to, weight], ...]
     "directed": false,             # optional, explicit arcs only
     "rule": "borda", "p": 2,       # optional bribery fields
     "budget": 5, "mode": "sync",
     "cost": [[i, j, c], ...],      # optional, see cost_to_list
     "process": {...}}              # optional generalised process

Types are written in id order.  Arc weights are integers or ``"num/den"``
strings.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .bribery import INF, BriberyPlan, BsgInstance, CostModel, shift_cost_matrix
from .diffusion import DiffusionTrace, InfluenceParams, ProcessSpec
from .election import SocietyGraph, Topology, VoterType, VotingRule, swap1_arcs
from .errors import SpecError


def _num(x):
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _frac(x) -> Fraction:
    return Fraction(x) if not isinstance(x, str) else Fraction(x.strip())


# -- graphs -----------------------------------------------------------------

def graph_to_dict(g: SocietyGraph) -> dict:
    doc = {
        "m": g.m,
        "types": [{"id": t.id, "order": list(t.order), "attributes": dict(t.attributes)} for t in g.types],
        "weights": list(g.weights),
    }
    orders = [t.order for t in g.types]
    if not g.directed and set(g.arcs) == set(swap1_arcs(orders)):
        doc["policy"] = "swap1"
    else:
        doc["arcs"] = [[a, b, _num(w)] for a, b, w in g.arcs]
        doc["directed"] = g.directed
    return doc


def graph_from_dict(doc: dict) -> SocietyGraph:
    """Parse an instance document's society graph.

    Raises:
        SpecError: malformed document.
    """
    try:
        m = int(doc["m"])
        raw = sorted(doc["types"], key=lambda t: int(t["id"]))
        types = [VoterType(int(t["id"]), tuple(int(c) for c in t["order"]), t.get("attributes", {})) for t in raw]
        weights = tuple(int(w) for w in doc["weights"])
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecError(f"malformed instance document: {exc}") from exc
    if [t.id for t in types] != list(range(len(types))):
        raise SpecError("type ids must be 0..tau-1")
    if "arcs" in doc:
        arcs = [(int(a[0]), int(a[1]), _frac(a[2]) if len(a) > 2 else Fraction(1)) for a in doc["arcs"]]
        directed = bool(doc.get("directed", False))
    else:
        policy = doc.get("policy", "swap1")
        if policy != "swap1":
            raise SpecError(f"unknown adjacency policy {policy!r}")
        arcs = swap1_arcs([t.order for t in types])
        directed = False
    return SocietyGraph(Topology(m, types, arcs, directed), weights)


# -- plans and costs --------------------------------------------------------

def plan_to_list(plan) -> list:
    """Sparse ``[[i, j, count], ...]`` of the off-diagonal moves.

    Accepts a :class:`BriberyPlan` or anything with ``to_plan()``.
    """
    if not isinstance(plan, BriberyPlan):
        plan = plan.to_plan()
    return [[i, j, b] for i, j, b in plan.moves()]


def plan_from_list(weights, moves) -> BriberyPlan:
    return BriberyPlan.from_moves(weights, [tuple(int(v) for v in mv) for mv in moves])


def cost_to_list(cost: CostModel) -> list:
    """Sparse ``[[i, j, c], ...]`` of the finite off-diagonal costs.

    Entries not listed are unavailable (``"inf"``); ``"inf"`` may also be
    written explicitly.
    """
    return [[i, j, c] for i, row in enumerate(cost.matrix) for j, c in enumerate(row) if i != j and c != INF]


def cost_from_list(tau: int, entries) -> CostModel:
    matrix = [[0 if i == j else INF for j in range(tau)] for i in range(tau)]
    for i, j, c in entries:
        matrix[int(i)][int(j)] = INF if c == "inf" else int(c)
    return CostModel(matrix)


# -- processes --------------------------------------------------------------

def _table_dict(table) -> list:
    return [[list(k), _num(v)] for k, v in sorted(table.items())]


def process_to_dict(spec: ProcessSpec) -> dict:
    doc = {"kind": spec.kind, "max_rounds": spec.max_rounds, "materialize": spec.materialize}
    if spec.immobile:
        doc["immobile"] = [list(pair) for pair in spec.immobile]
    if spec.immobile_types:
        doc["immobile_types"] = list(spec.immobile_types)
    if spec.table:
        doc["table"] = [list(pair) for pair in spec.table]
    if spec.params is not None:
        p = spec.params
        doc["params"] = {
            "age_table": _table_dict(p.age_table),
            "stubbornness": {k: _num(v) for k, v in sorted(p.stubbornness.items())},
            "distance_base": _num(p.distance_base),
            "round_damping": p.round_damping,
            "age_key": p.age_key,
            "stubbornness_key": p.stubbornness_key,
        }
    return doc


def process_from_dict(doc: dict) -> ProcessSpec:
    params = None
    if "params" in doc:
        p = doc["params"]
        kwargs = {}
        if "age_table" in p:
            kwargs["age_table"] = {tuple(k): _frac(v) for k, v in p["age_table"]}
        if "stubbornness" in p:
            kwargs["stubbornness"] = {k: _frac(v) for k, v in p["stubbornness"].items()}
        if "distance_base" in p:
            kwargs["distance_base"] = _frac(p["distance_base"])
        for key in ("round_damping", "age_key", "stubbornness_key"):
            if key in p:
                kwargs[key] = p[key]
        params = InfluenceParams(**kwargs)
    try:
        return ProcessSpec(
            kind=doc.get("kind", "basic-majority"),
            max_rounds=int(doc.get("max_rounds", 1)),
            immobile=[tuple(pair) for pair in doc.get("immobile", [])],
            immobile_types=doc.get("immobile_types", []),
            table=[tuple(pair) for pair in doc.get("table", [])],
            params=params,
            materialize=bool(doc.get("materialize", True)),
        )
    except (TypeError, ValueError) as exc:
        raise SpecError(f"malformed process: {exc}") from exc


# -- instances --------------------------------------------------------------

def instance_to_dict(inst: BsgInstance) -> dict:
    doc = graph_to_dict(inst.graph)
    doc["rule"] = inst.rule.name
    doc["p"] = inst.p
    if inst.budget is not None:
        doc["budget"] = inst.budget
    if isinstance(inst.mode, ProcessSpec):
        doc["mode"] = "process"
        doc["process"] = process_to_dict(inst.mode)
    else:
        doc["mode"] = inst.mode
    if inst.cost != shift_cost_matrix(inst.graph.topology, inst.p):
        doc["cost"] = cost_to_list(inst.cost)
    return doc


def instance_from_dict(doc: dict, *, rule=None, p=None) -> BsgInstance:
    """Parse a bribery instance; ``rule`` and ``p`` override the document."""
    g = graph_from_dict(doc)
    rule = VotingRule.parse(rule or doc.get("rule", "plurality"))
    p = int(doc.get("p", 0) if p is None else p)
    cost = cost_from_list(g.tau, doc["cost"]) if "cost" in doc else None
    mode = doc.get("mode", "sync")
    if mode == "process" or ("process" in doc and "mode" not in doc):
        mode = process_from_dict(doc["process"])
    return BsgInstance(g, rule, p, cost, doc.get("budget"), mode)


def dump_json(doc, path) -> None:
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def load_json(path):
    with open(path) as fh:
        return json.load(fh)


# -- traces -----------------------------------------------------------------

def trace_lines(trace: DiffusionTrace):
    """JSON lines: ``{"step": s, "weights": [...], "events": [[src, dst, w], ...]}``.

    ``events`` on line ``s`` are the assimilations that produced state ``s``.
    """
    for s, state in enumerate(trace.states):
        events = trace.events[s - 1] if s else []
        yield json.dumps({"step": s, "weights": [_num(w) for w in state],
                          "events": [[a, b, _num(w)] for a, b, w in events]})


def write_trace(trace: DiffusionTrace, stream) -> None:
    for line in trace_lines(trace):
        stream.write(line + "\n")


def read_trace(lines) -> list:
    """Parse trace JSON lines back into ``(step, weights, events)`` triples."""
    out = []
    for line in lines:
        line = line.strip()
        if line:
            d = json.loads(line)
            out.append((d["step"], tuple(_frac(w) if isinstance(w, str) else w for w in d["weights"]),
                        [tuple(e) for e in d["events"]]))
    return out
