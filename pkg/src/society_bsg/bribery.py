"""Shift bribery: actions, cost models, plans, and the bribery instance."""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from typing import Sequence

from .election import SocietyGraph, Topology, VotingRule
from .errors import (
    ConservationError,
    DimensionError,
    InfeasibleActionError,
    PlanError,
    UnknownReferenceError,
)

INF = math.inf

DIFFUSION_MODES = ("sync", "async-optimistic", "async-pessimistic")


def shift_up(order: Sequence[int], p: int, k: int) -> tuple:
    """Move ``p`` up ``k`` positions, keeping the other candidates in order."""
    order = tuple(order)
    pos = order.index(p)
    if not 0 <= k <= pos:
        raise ValueError(f"cannot shift candidate {p} up {k} positions from rank {pos + 1}")
    rest = order[:pos] + order[pos + 1:]
    return rest[:pos - k] + (p,) + rest[pos - k:]


class CostModel:
    """Per-voter cost ``c[i][j]`` of turning a type-``i`` voter into type ``j``.

    Entries are non-negative integers or ``INF`` (action not available).
    """

    def __init__(self, matrix):
        self.matrix = tuple(tuple(INF if c == INF else int(c) for c in row) for row in matrix)
        tau = len(self.matrix)
        for i, row in enumerate(self.matrix):
            if len(row) != tau:
                raise DimensionError("cost matrix must be square")
            if row[i] != 0:
                raise ValueError(f"c[{i}][{i}] must be 0")
            if any(c != INF and c < 0 for c in row):
                raise ValueError("costs must be non-negative")

    @property
    def tau(self) -> int:
        return len(self.matrix)

    def __getitem__(self, ij):
        i, j = ij
        return self.matrix[i][j]

    def finite_targets(self, i: int) -> list:
        return [j for j, c in enumerate(self.matrix[i]) if c != INF]

    def __eq__(self, other):
        return isinstance(other, CostModel) and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def __repr__(self):
        return f"CostModel({self.matrix!r})"


def shift_cost_matrix(types, p: int) -> CostModel:
    """Unit shift-bribery costs: ``c[i][j] = k`` iff ``j`` is ``i`` with ``p`` shifted up ``k``.

    ``types`` may be a list of :class:`VoterType`, a :class:`Topology` or a
    :class:`SocietyGraph`.  Source and target must carry equal attributes.
    """
    if isinstance(types, SocietyGraph):
        types = types.topology
    if isinstance(types, Topology):
        topo = types
    else:
        types = tuple(types)
        topo = Topology(len(types[0].order), types, ())
    tau = topo.tau
    rows = [[INF] * tau for _ in range(tau)]
    for t in topo.types:
        pos = t.order.index(p)
        for k in range(pos + 1):
            j = topo.find_type(shift_up(t.order, p, k), t.attributes)
            if j is not None:
                rows[t.id][j] = k
    return CostModel(rows)


class BriberyPlan:
    """Transfer matrix ``beta``: ``beta[i][j]`` voters move from type ``i`` to ``j``.

    ``beta[i][i]`` counts the voters of type ``i`` left untouched.
    """

    def __init__(self, beta):
        self.beta = tuple(tuple(int(b) for b in row) for row in beta)
        if any(b < 0 for row in self.beta for b in row):
            raise ValueError("plan entries must be non-negative")

    @classmethod
    def identity(cls, weights) -> "BriberyPlan":
        tau = len(weights)
        return cls([[weights[i] if i == j else 0 for j in range(tau)] for i in range(tau)])

    @classmethod
    def from_moves(cls, weights, moves) -> "BriberyPlan":
        """Build a plan from sparse off-diagonal moves ``(i, j, count)``."""
        tau = len(weights)
        beta = [[0] * tau for _ in range(tau)]
        for i in range(tau):
            beta[i][i] = weights[i]
        for i, j, cnt in moves:
            if not (0 <= i < tau and 0 <= j < tau):
                raise UnknownReferenceError(f"move ({i}, {j}) references an unknown type")
            if i == j:
                continue
            beta[i][j] += cnt
            beta[i][i] -= cnt
        if any(beta[i][i] < 0 for i in range(tau)):
            raise ConservationError("moves take more voters than a type holds")
        return cls(beta)

    @property
    def tau(self) -> int:
        return len(self.beta)

    def moves(self) -> list:
        """Sparse off-diagonal entries ``(i, j, count)``."""
        return [(i, j, b) for i, row in enumerate(self.beta) for j, b in enumerate(row) if b and i != j]

    def is_diagonal(self) -> bool:
        return not self.moves()

    def cost(self, cost: CostModel) -> int:
        total = 0
        for i, j, b in self.moves():
            c = cost[i, j]
            if c == INF:
                raise InfeasibleActionError(f"plan moves voters from type {i} to {j}, which is unreachable")
            total += c * b
        return total

    def __eq__(self, other):
        return isinstance(other, BriberyPlan) and self.beta == other.beta

    def __hash__(self):
        return hash(self.beta)

    def __repr__(self):
        return f"BriberyPlan(moves={self.moves()!r})"


def apply_plan(weights, plan: BriberyPlan, cost: CostModel):
    """Apply ``plan`` to a weight vector.

    Returns:
        ``(new_weights, total_cost)``.

    Raises:
        ConservationError: a row of the plan does not sum to the type's weight.
        InfeasibleActionError: the plan uses an infinite-cost move.
    """
    weights = tuple(getattr(weights, "weights", weights))
    if plan.tau != len(weights) or cost.tau != len(weights):
        raise DimensionError("plan, cost model and society disagree on the number of types")
    for i, row in enumerate(plan.beta):
        if sum(row) != weights[i]:
            raise ConservationError(f"row {i} of the plan sums to {sum(row)}, type holds {weights[i]}")
    total = plan.cost(cost)
    new = [0] * len(weights)
    for row in plan.beta:
        for j, b in enumerate(row):
            new[j] += b
    return tuple(new), total


@dataclass(frozen=True)
class BsgInstance:
    """A bribery-followed-by-diffusion problem.

    Attributes:
        graph: the society graph before bribery.
        rule: the voting rule applied after diffusion.
        p: the preferred candidate.
        cost: per-voter transfer costs; defaults to unit shift costs.
        budget: optional upper bound on the total cost.
        mode: ``"sync"``, ``"async-optimistic"``, ``"async-pessimistic"`` or a
            :class:`~society_bsg.diffusion.ProcessSpec`.
    """

    graph: SocietyGraph
    rule: VotingRule
    p: int
    cost: CostModel = field(default=None)
    budget: int | None = None
    mode: object = "sync"

    def __post_init__(self):
        if not 0 <= self.p < self.graph.m:
            raise UnknownReferenceError(f"candidate {self.p} does not exist (m={self.graph.m})")
        if self.cost is None:
            object.__setattr__(self, "cost", shift_cost_matrix(self.graph.topology, self.p))
        if self.cost.tau != self.graph.tau:
            raise DimensionError("cost matrix size does not match the number of types")
        if isinstance(self.mode, str) and self.mode not in DIFFUSION_MODES:
            raise ValueError(f"unknown diffusion mode {self.mode!r}")
        if self.budget is not None and self.budget < 0:
            raise ValueError("budget must be non-negative")

    @property
    def m(self) -> int:
        return self.graph.m

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def tau(self) -> int:
        return self.graph.tau

    def with_budget(self, budget) -> "BsgInstance":
        return BsgInstance(self.graph, self.rule, self.p, self.cost, budget, self.mode)

    def digest(self) -> str:
        """Stable hex digest of the instance content (independent of budget)."""
        payload = {
            "m": self.m,
            "types": [[list(t.order), list(t.attributes)] for t in self.graph.types],
            "weights": list(self.graph.weights),
            "arcs": [[a, b, str(w)] for a, b, w in self.graph.arcs],
            "directed": self.graph.directed,
            "rule": self.rule.name,
            "p": self.p,
            "cost": [[str(c) for c in row] for row in self.cost.matrix],
            "mode": self.mode if isinstance(self.mode, str) else repr(self.mode),
        }
        blob = json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()
        return hashlib.sha256(blob).hexdigest()


class ShiftMatrix:
    """Shift-bribery plan in compact form, as used by the heuristics.

    ``a[i][j]`` is the number of type-``i`` voters whose preferred candidate
    is shifted up ``j`` positions.  Column 0 holds the unbribed voters, so
    every row sums to the type's weight.  Level ``j`` is only allowed when
    ``j < rank(p, order_i)`` and the shifted order exists as a type with the
    same attributes.
    """

    def __init__(self, graph: SocietyGraph, p: int, rows=None):
        self.graph = graph
        self.p = p
        m = graph.m
        topo = graph.topology
        self.targets = []
        for t in topo.types:
            pos = t.order.index(p)
            row = []
            for j in range(m):
                tgt = topo.find_type(shift_up(t.order, p, j), t.attributes) if j <= pos else None
                row.append(tgt)
            self.targets.append(tuple(row))
        if rows is None:
            rows = [[w] + [0] * (m - 1) for w in graph.weights]
        self.a = [list(r) for r in rows]
        self.validate()

    def validate(self) -> None:
        m = self.graph.m
        if len(self.a) != self.graph.tau:
            raise PlanError(f"{len(self.a)} rows for {self.graph.tau} types")
        for i, row in enumerate(self.a):
            if len(row) != m:
                raise PlanError(f"row {i} has {len(row)} columns, expected {m}")
            if any(v < 0 for v in row):
                raise PlanError(f"row {i} has a negative entry")
            if sum(row) != self.graph.weights[i]:
                raise PlanError(f"row {i} sums to {sum(row)}, type holds {self.graph.weights[i]}")
            for j, v in enumerate(row):
                if v and self.targets[i][j] is None:
                    raise PlanError(f"row {i} uses unavailable shift level {j}")

    def allowed(self, i: int, j: int) -> bool:
        return 0 <= j < self.graph.m and self.targets[i][j] is not None

    @property
    def cost(self) -> int:
        return sum(j * v for row in self.a for j, v in enumerate(row))

    def copy(self) -> "ShiftMatrix":
        new = ShiftMatrix.__new__(ShiftMatrix)
        new.graph, new.p, new.targets = self.graph, self.p, self.targets
        new.a = [list(r) for r in self.a]
        return new

    def key(self) -> tuple:
        return tuple(tuple(r) for r in self.a)

    def bribed_weights(self) -> tuple:
        """The society after applying the shifts."""
        new = [0] * self.graph.tau
        for i, row in enumerate(self.a):
            for j, v in enumerate(row):
                if v:
                    new[self.targets[i][j]] += v
        return tuple(new)

    def to_plan(self) -> BriberyPlan:
        moves = []
        for i, row in enumerate(self.a):
            for j, v in enumerate(row):
                if j and v:
                    moves.append((i, self.targets[i][j], v))
        return BriberyPlan.from_moves(self.graph.weights, moves)

    @classmethod
    def full(cls, graph: SocietyGraph, p: int) -> "ShiftMatrix":
        """Every voter's ``p`` shifted as far up as the type universe allows."""
        sm = cls(graph, p)
        for i in range(graph.tau):
            top = max(j for j in range(graph.m) if sm.targets[i][j] is not None)
            sm.a[i] = [0] * graph.m
            sm.a[i][top] = graph.weights[i]
        return sm

    def digest(self) -> str:
        return hashlib.sha256(json.dumps(self.a).encode()).hexdigest()[:16]

    def __eq__(self, other):
        return isinstance(other, ShiftMatrix) and self.a == other.a and self.p == other.p

    def __repr__(self):
        return f"ShiftMatrix(cost={self.cost}, a={self.a!r})"

