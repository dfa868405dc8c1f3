"""Deterministic opinion diffusion over society graphs.

The basic process is majority assimilation: the voters of type ``v`` adopt
the order of a neighbour ``x`` when ``x`` holds a strict majority of the
closed neighbourhood of ``v``.  In integers, ``2 * w[x] > sum(w[u] for u in N[v])``.

Besides synchronous and asynchronous runs of that process this module
implements several generalised processes (arc-weighted majority, local Borda
elections, Kemeny neighbourhoods and explicit transition tables) and an
exhaustive explorer over asynchronous update orders.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .election import (
    SocietyGraph,
    Topology,
    VoterType,
    enumerate_orders,
    swap_distance,
)
from .errors import PartialResultError, SpecError, UnknownReferenceError


@dataclass
class DiffusionTrace:
    """States visited by a diffusion run.

    ``states[0]`` is the initial weight vector; ``events[s]`` lists the
    assimilations ``(source, target, weight)`` that turn ``states[s]`` into
    ``states[s + 1]``.  ``topology`` describes the final type universe; for
    generalised processes that materialise new types, earlier states are
    zero-padded to its length.
    """

    topology: Topology
    states: list
    events: list = field(default_factory=list)
    converged: bool = False
    cycle: tuple | None = None

    @property
    def final(self) -> tuple:
        return self.states[-1]

    @property
    def steps(self) -> int:
        return len(self.states) - 1

    def final_graph(self) -> SocietyGraph:
        return SocietyGraph(self.topology, self.final)


# ---------------------------------------------------------------------------
# basic majority


def majority_target(g: SocietyGraph, v: int, weights=None):
    """The neighbour that ``v`` is assimilated into, or ``None``.

    Arcs are treated as unit strength regardless of their stored weights.
    """
    w = g.weights if weights is None else weights
    if not w[v]:
        return None
    nbrs = g.topology.nbrs[v]
    total = w[v]
    for u in nbrs:
        total += w[u]
    found = None
    for x in nbrs:
        if 2 * w[x] > total:
            assert found is None, "two strict-majority neighbours"
            found = x
    return found


def _sync_moves(topology: Topology, w) -> list:
    nbrs_all = topology.nbrs
    moves = []
    for v, wv in enumerate(w):
        if not wv:
            continue
        nbrs = nbrs_all[v]
        if not nbrs:
            continue
        total = wv
        for u in nbrs:
            total += w[u]
        for x in nbrs:
            if 2 * w[x] > total:
                moves.append((v, x, wv))
                break
    return moves


def _apply_moves(w, moves) -> tuple:
    new = list(w)
    for v, _, wv in moves:
        new[v] -= wv
    for _, x, wv in moves:
        new[x] += wv
    return tuple(new)


def sync_step(g: SocietyGraph):
    """One simultaneous update of every vertex.

    All majority tests read the pre-step weights.  A vertex can lose its own
    voters and receive others' in the same step.

    Returns:
        ``(graph, events)`` with events ``(source, target, weight)``.
    """
    moves = _sync_moves(g.topology, g.weights)
    return g.with_weights(_apply_moves(g.weights, moves)), moves


def run_sync(g: SocietyGraph) -> DiffusionTrace:
    """Iterate :func:`sync_step` until nothing changes.

    On undirected graphs this takes at most ``tau`` steps.  On directed
    graphs a repeated state stops the run and is reported as a cycle.
    """
    topo = g.topology
    w = g.weights
    states = [w]
    events = []
    seen = {w: 0}
    while True:
        moves = _sync_moves(topo, w)
        if not moves:
            return DiffusionTrace(topo, states, events, converged=True)
        w = _apply_moves(w, moves)
        events.append(moves)
        if w in seen:
            start = seen[w]
            states.append(w)
            return DiffusionTrace(topo, states, events, converged=False, cycle=(start, len(states) - 1 - start))
        seen[w] = len(states)
        states.append(w)


def sync_final(g: SocietyGraph) -> tuple:
    """Final weights of :func:`run_sync` without building a trace."""
    topo = g.topology
    w = g.weights
    for _ in range(topo.tau + 1):
        moves = _sync_moves(topo, w)
        if not moves:
            return w
        w = _apply_moves(w, moves)
    return run_sync(g.with_weights(w)).final


def is_stable(g: SocietyGraph, weights=None) -> bool:
    """True when every asynchronous step would be redundant."""
    w = g.weights if weights is None else weights
    return not _sync_moves(g.topology, w)


def async_step(g: SocietyGraph, v: int):
    """Update vertex ``v`` only.

    Returns:
        ``(graph, redundant)``; ``redundant`` is True when nothing changed.
    """
    if not 0 <= v < g.tau:
        raise UnknownReferenceError(f"unknown type id {v}")
    x = majority_target(g, v)
    if x is None:
        return g, True
    w = list(g.weights)
    w[x] += w[v]
    w[v] = 0
    return g.with_weights(w), False


def run_async(g: SocietyGraph, order: Sequence[int]) -> DiffusionTrace:
    """Apply :func:`async_step` along ``order``.

    Every step, redundant or not, contributes a state (with no events when
    redundant).  ``converged`` reports whether the final graph is stable.
    """
    states = [g.weights]
    events = []
    for v in order:
        nxt, redundant = async_step(g, v)
        events.append([] if redundant else [(v, majority_target(g, v), g.weights[v])])
        g = nxt
        states.append(g.weights)
    return DiffusionTrace(g.topology, states, events, converged=is_stable(g))


@dataclass
class AsyncExploration:
    """Outcome of exhaustively exploring asynchronous update orders.

    Attributes:
        finals: every stable weight vector reachable by a maximal
            irredundant sequence.
        max_depth: length of the longest irredundant sequence.
        states: number of distinct states expanded.
    """

    finals: frozenset
    max_depth: int
    states: int


def _components(topo: Topology, w, active):
    """Connected components (over positive-weight vertices) that contain an active vertex."""
    seen = set()
    comps = []
    for s in active:
        if s in seen:
            continue
        comp = []
        stack = [s]
        seen.add(s)
        while stack:
            v = stack.pop()
            comp.append(v)
            for u in topo.nbrs[v]:
                if w[u] and u not in seen:
                    seen.add(u)
                    stack.append(u)
        comps.append(sorted(comp))
    return comps


def explore_async_detailed(g: SocietyGraph, limit: int = 1_000_000, project=None) -> AsyncExploration:
    """Depth-first search over all asynchronous update orders.

    Only non-redundant steps are expanded.  States are memoised, and
    independent regions are explored separately: voters only ever move
    between adjacent positive-weight vertices and a vertex that reaches
    weight zero stays there, so the connected components of the
    positive-weight subgraph never interact again.  The reachable final
    states are then the combinations of per-component finals.

    Args:
        g: the start state (undirected basic-majority graph).
        limit: maximum number of distinct states to expand.
        project: optional linear map applied to final weight vectors (for
            example the score vector of a scoring rule).  Finals are then
            stored and combined in projected form, which keeps the memo
            small when only the projection matters.

    Raises:
        PartialResultError: ``limit`` exceeded.
    """
    topo = g.topology
    proj = project or (lambda w: w)
    tau = topo.tau
    memo = {}
    counter = [0]

    def movers(w):
        return [(v, x) for v, x, _ in _sync_moves(topo, w)]

    def solve(w):
        hit = memo.get(w)
        if hit is not None:
            return hit
        counter[0] += 1
        if counter[0] > limit:
            raise PartialResultError(f"explored more than {limit} states", counter[0])
        mv = movers(w)
        if not mv:
            res = (frozenset([proj(w)]), 0)
        else:
            comps = _components(topo, w, sorted({v for v, _ in mv}))
            if len(comps) > 1:
                inside = set().union(*comps)
                rest = tuple(0 if i in inside else w[i] for i in range(tau))
                partial = {proj(rest)}
                depth = 0
                for comp in comps:
                    cs = set(comp)
                    sub = tuple(w[i] if i in cs else 0 for i in range(tau))
                    fin, d = solve(sub)
                    depth += d
                    partial = {tuple(a + b for a, b in zip(p, f)) for p in partial for f in fin}
                res = (frozenset(partial), depth)
            else:
                finals = set()
                depth = 0
                for v, x in mv:
                    nw = list(w)
                    nw[x] += nw[v]
                    nw[v] = 0
                    fin, d = solve(tuple(nw))
                    finals |= fin
                    depth = max(depth, d + 1)
                res = (frozenset(finals), depth)
        memo[w] = res
        return res

    finals, depth = solve(tuple(g.weights))
    return AsyncExploration(finals, depth, counter[0])


def explore_async(g: SocietyGraph, limit: int = 1_000_000) -> frozenset:
    """All stable weight vectors reachable by some asynchronous order."""
    return explore_async_detailed(g, limit).finals


# ---------------------------------------------------------------------------
# generalised processes

DEFAULT_AGE_TABLE = {
    ("Y", "Y"): Fraction(6, 5),
    ("M", "Y"): Fraction(4, 5),
    ("M", "M"): Fraction(1),
    ("O", "M"): Fraction(1, 2),
    ("M", "O"): Fraction(3, 10),
    ("O", "O"): Fraction(4, 5),
    ("O", "Y"): Fraction(0),
    ("Y", "O"): Fraction(0),
    ("Y", "M"): Fraction(0),
}

DEFAULT_STUBBORNNESS = {"P": Fraction(1), "S": Fraction(1, 2)}


@dataclass(frozen=True)
class InfluenceParams:
    """Parameters of the influence coefficient used by local elections.

    For ``t != t2`` the coefficient of ``t`` on ``t2`` in round ``l`` is
    ``(1/l if round_damping) * base**(-d) * S(t2) * f(G(t), G(t2))`` with
    ``d`` the swap distance of the two orders; it is 1 for ``t == t2``.
    A type lacking the age (stubbornness) attribute contributes a factor 1
    in place of the table lookup.
    """

    age_table: Mapping = field(default_factory=lambda: dict(DEFAULT_AGE_TABLE))
    stubbornness: Mapping = field(default_factory=lambda: dict(DEFAULT_STUBBORNNESS))
    distance_base: Fraction = Fraction(2)
    round_damping: bool = True
    age_key: str = "age"
    stubbornness_key: str = "stubbornness"

    def __hash__(self):
        return hash((tuple(sorted(self.age_table.items())), tuple(sorted(self.stubbornness.items())),
                     self.distance_base, self.round_damping, self.age_key, self.stubbornness_key))


def influence_coefficient(t: VoterType, t2: VoterType, round: int, params: InfluenceParams | None = None) -> Fraction:
    """Exact coefficient of influence of type ``t`` on type ``t2`` in ``round``."""
    if round < 1:
        raise ValueError("rounds are numbered from 1")
    if t.id == t2.id and t.order == t2.order and t.attributes == t2.attributes:
        return Fraction(1)
    params = params or InfluenceParams()
    d = swap_distance(t.order, t2.order)
    c = Fraction(1) / Fraction(params.distance_base) ** d
    if params.round_damping:
        c /= round
    s_level = t2.attr(params.stubbornness_key)
    if s_level is not None:
        if s_level not in params.stubbornness:
            raise SpecError(f"no stubbornness factor for level {s_level!r}")
        c *= Fraction(params.stubbornness[s_level])
    g1, g2 = t.attr(params.age_key), t2.attr(params.age_key)
    if g1 is not None and g2 is not None:
        c *= Fraction(params.age_table.get((g1, g2), 0))
    return c


PROCESS_KINDS = ("basic-majority", "weighted-majority", "local-election", "kemeny-neighborhood", "custom-table")


@dataclass(frozen=True)
class ProcessSpec:
    """Description of a generalised diffusion process.

    Attributes:
        kind: one of ``PROCESS_KINDS``.
        max_rounds: number of synchronous rounds to simulate.
        immobile: ``(attribute, value)`` pairs; a type carrying any of them
            never changes its order (it can still receive voters).
        immobile_types: type ids that never move.
        table: for ``custom-table``, a mapping ``source id -> target id``
            applied to every mobile type each round.
        params: influence parameters for ``local-election``.
        materialize: whether orders missing from the graph may be created
            as new zero-weight types (without arcs).
    """

    kind: str = "basic-majority"
    max_rounds: int = 1
    immobile: tuple = ()
    immobile_types: tuple = ()
    table: tuple = ()
    params: InfluenceParams | None = None
    materialize: bool = True

    def __post_init__(self):
        if self.kind not in PROCESS_KINDS:
            raise SpecError(f"unknown process kind {self.kind!r}")
        if self.max_rounds < 1:
            raise SpecError("max_rounds must be at least 1")
        table = self.table.items() if isinstance(self.table, Mapping) else self.table
        object.__setattr__(self, "table", tuple(sorted((int(a), int(b)) for a, b in table)))
        object.__setattr__(self, "immobile", tuple(sorted((str(a), str(v)) for a, v in self.immobile)))
        object.__setattr__(self, "immobile_types", tuple(sorted(int(i) for i in self.immobile_types)))

    def is_mobile(self, t: VoterType) -> bool:
        if t.id in self.immobile_types:
            return False
        return not any(pair in self.immobile for pair in t.attributes)


def _materialize(topo: Topology, wanted, spec: ProcessSpec):
    """Return a topology containing every ``(order, attributes)`` in ``wanted``."""
    new_types = []
    keys = set()
    for order, attrs in wanted:
        if topo.find_type(order, attrs) is None and (order, attrs) not in keys:
            if not spec.materialize:
                raise SpecError(f"no type with order {order} and attributes {dict(attrs)}")
            keys.add((order, attrs))
            new_types.append(VoterType(topo.tau + len(new_types), order, attrs))
    return topo.extended(new_types) if new_types else topo


def _borda_ranking(scores) -> tuple:
    # equal scores: the higher candidate index is ranked first
    return tuple(sorted(range(len(scores)), key=lambda c: (-scores[c], -c)))


def _kemeny(orders, weights) -> tuple:
    m = len(orders[0])
    prefer = [[0] * m for _ in range(m)]
    for o, w in zip(orders, weights):
        if w:
            for i, a in enumerate(o):
                for b in o[i + 1:]:
                    prefer[a][b] += w
    best, best_cost = None, None
    for r in enumerate_orders(m):
        cost = sum(prefer[b][a] for i, a in enumerate(r) for b in r[i + 1:])
        if best_cost is None or cost < best_cost:
            best, best_cost = r, cost
    return best


def _weighted_majority_moves(topo: Topology, w, spec):
    moves = []
    for v, wv in enumerate(w):
        if not wv or not spec.is_mobile(topo.types[v]):
            continue
        nbrs = topo.in_neighbors[v]
        total = Fraction(wv) + sum(a * w[u] for u, a in nbrs)
        for u, a in nbrs:
            if 2 * a * w[u] > total:
                moves.append((v, u, wv))
                break
    return moves


def generalized_step(g: SocietyGraph, spec: ProcessSpec, round: int = 1):
    """One synchronous round of a generalised process.

    Returns:
        ``(graph, events)``.  The graph may have more types than ``g`` when
        the round produced orders that were not present before.
    """
    topo = g.topology
    w = g.weights
    if spec.kind == "basic-majority":
        moves = [mv for mv in _sync_moves(topo, w) if spec.is_mobile(topo.types[mv[0]])]
        return g.with_weights(_apply_moves(w, moves)), moves
    if spec.kind == "weighted-majority":
        moves = _weighted_majority_moves(topo, w, spec)
        return g.with_weights(_apply_moves(w, moves)), moves

    # the remaining kinds pick a target order per type
    wanted = {}
    if spec.kind == "custom-table":
        table = dict(spec.table)
        for v, wv in enumerate(w):
            if wv and v in table and spec.is_mobile(topo.types[v]):
                if not 0 <= table[v] < topo.tau:
                    raise SpecError(f"table maps type {v} to unknown type {table[v]}")
                wanted[v] = table[v]
        moves = [(v, x, w[v]) for v, x in sorted(wanted.items()) if x != v]
        return g.with_weights(_apply_moves(w, moves)), moves

    m = topo.m
    for v, wv in enumerate(w):
        t2 = topo.types[v]
        if not wv or not spec.is_mobile(t2):
            continue
        if spec.kind == "local-election":
            scores = [Fraction(0)] * m
            for t, wt in zip(topo.types, w):
                if not wt:
                    continue
                c = influence_coefficient(t, t2, round, spec.params)
                if not c:
                    continue
                for pos, cand in enumerate(t.order):
                    scores[cand] += c * (m - 1 - pos) * wt
            order = _borda_ranking(scores)
        else:  # kemeny-neighborhood
            hood = (v,) + tuple(u for u, _ in topo.in_neighbors[v])
            order = _kemeny([topo.types[u].order for u in hood], [w[u] for u in hood])
        wanted[v] = (order, t2.attributes)
    new_topo = _materialize(topo, wanted.values(), spec)
    w = tuple(w) + (0,) * (new_topo.tau - topo.tau)
    moves = []
    for v, (order, attrs) in sorted(wanted.items()):
        x = new_topo.find_type(order, attrs)
        if x != v:
            moves.append((v, x, w[v]))
    return SocietyGraph(new_topo, _apply_moves(w, moves)), moves


def run_generalized(g: SocietyGraph, spec: ProcessSpec) -> DiffusionTrace:
    """Run ``spec.max_rounds`` rounds, stopping early at a fixed point."""
    states = [g.weights]
    events = []
    converged = False
    for rnd in range(1, spec.max_rounds + 1):
        nxt, moves = generalized_step(g, spec, rnd)
        if not moves:
            converged = True
            g = nxt
            break
        g = nxt
        events.append(moves)
        states.append(g.weights)
    tau = g.tau
    states = [tuple(s) + (0,) * (tau - len(s)) for s in states]
    trace = DiffusionTrace(g.topology, states, events, converged=converged)
    trace.cycle = detect_cycle(trace)
    return trace


def detect_cycle(trace: DiffusionTrace):
    """First repeated state of ``trace`` as ``(start, period)``, or ``None``."""
    seen = {}
    for idx, s in enumerate(trace.states):
        s = tuple(s)
        if s in seen:
            return seen[s], idx - seen[s]
        seen[s] = idx
    return None


def check_trace(trace: DiffusionTrace) -> None:
    """Assert that consecutive states differ exactly by the recorded events."""
    n = sum(trace.states[0])
    for s, moves in enumerate(trace.events):
        assert sum(trace.states[s + 1]) == n
        assert _apply_moves(trace.states[s], moves) == tuple(trace.states[s + 1])

