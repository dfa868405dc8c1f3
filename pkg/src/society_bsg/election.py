"""Candidates, preference orders, societies, society graphs and voting rules.

Candidates are the integers ``0..m-1``; index order doubles as the
lexicographic tie-break order.  A preference order is a tuple of candidate
indices, most preferred first.  Canonical voter types are the ``m!`` orders
in lexicographic order of their index sequences, so type id ``i`` always
means ``enumerate_orders(m)[i]``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .errors import (
    DegenerateElectionError,
    DimensionError,
    SizeLimitError,
    UnknownReferenceError,
    UnsupportedRuleError,
)

MAX_ENUMERABLE_M = 8
MAX_KEMENY_M = 6

Order = tuple  # tuple[int, ...], most preferred first


@lru_cache(maxsize=None)
def _orders(m: int) -> tuple[Order, ...]:
    return tuple(itertools.permutations(range(m)))


def enumerate_orders(m: int) -> list[Order]:
    """All ``m!`` preference orders in lexicographic order.

    The position of an order in this list is its canonical type id.
    """
    if not 1 <= m <= MAX_ENUMERABLE_M:
        raise SizeLimitError(f"m must lie in [1, {MAX_ENUMERABLE_M}], got {m}")
    return list(_orders(m))


@lru_cache(maxsize=None)
def _order_index(m: int) -> dict:
    return {o: i for i, o in enumerate(_orders(m))}


def order_id(order: Sequence[int]) -> int:
    """Canonical type id of ``order``."""
    order = tuple(order)
    check_order(order)
    return _order_index(len(order))[order]


def check_order(order: Sequence[int]) -> None:
    if sorted(order) != list(range(len(order))):
        raise ValueError(f"{tuple(order)} is not a permutation of 0..{len(order) - 1}")


def rank(order: Sequence[int], c: int) -> int:
    """1-based position of candidate ``c`` in ``order``."""
    return order.index(c) + 1


def swap_distance(a: Sequence[int], b: Sequence[int]) -> int:
    """Kendall-tau distance: the number of candidate pairs ordered differently."""
    if len(a) != len(b):
        raise DimensionError(f"orders over {len(a)} and {len(b)} candidates")
    pos = {c: i for i, c in enumerate(b)}
    seq = [pos[c] for c in a]
    return sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j])


def candidate_name(c: int) -> str:
    return chr(ord("a") + c) if c < 26 else f"c{c}"


def format_order(order: Sequence[int]) -> str:
    return ">".join(candidate_name(c) for c in order)


@dataclass(frozen=True)
class VoterType:
    """A cluster of identically behaving voters.

    ``attributes`` holds discrete labels (age group, stubbornness, ...) as a
    sorted tuple of ``(name, value)`` pairs so the type stays hashable.
    """

    id: int
    order: Order
    attributes: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "order", tuple(self.order))
        attrs = self.attributes
        if isinstance(attrs, Mapping):
            attrs = attrs.items()
        object.__setattr__(self, "attributes", tuple(sorted((str(k), str(v)) for k, v in attrs)))

    @property
    def attrs(self) -> dict:
        return dict(self.attributes)

    def attr(self, name: str, default=None):
        return self.attrs.get(name, default)


def canonical_types(m: int) -> tuple[VoterType, ...]:
    return tuple(VoterType(i, o) for i, o in enumerate(enumerate_orders(m)))


@dataclass(frozen=True)
class Society:
    """Voter counts per type, together with the orders of those types."""

    orders: tuple
    weights: tuple

    def __post_init__(self):
        object.__setattr__(self, "orders", tuple(tuple(o) for o in self.orders))
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))
        if len(self.orders) != len(self.weights):
            raise DimensionError(f"{len(self.orders)} orders but {len(self.weights)} weights")
        if any(w < 0 for w in self.weights):
            raise ValueError("weights must be non-negative")

    @classmethod
    def canonical(cls, m: int, weights: Sequence[int]) -> "Society":
        orders = enumerate_orders(m)
        if len(weights) != len(orders):
            raise DimensionError(f"expected {len(orders)} weights for m={m}, got {len(weights)}")
        return cls(tuple(orders), tuple(weights))

    @property
    def m(self) -> int:
        return len(self.orders[0]) if self.orders else 0

    @property
    def n(self) -> int:
        return sum(self.weights)


class Topology:
    """Types and arcs of a society graph; immutable and shared between states.

    An arc ``(src, dst, w)`` means voters of type ``src`` influence type
    ``dst`` with strength ``w``.  Undirected graphs list each edge once and
    imply both directions.  Self-arcs are not allowed: the closed
    neighbourhood always contains the vertex itself with strength 1.
    """

    def __init__(self, m: int, types: Sequence[VoterType], arcs: Iterable = (), directed: bool = False):
        self.m = m
        self.types = tuple(types)
        self.directed = bool(directed)
        tau = len(self.types)
        for t_id, t in enumerate(self.types):
            if t.id != t_id:
                raise ValueError(f"type ids must be dense; position {t_id} holds id {t.id}")
            if len(t.order) != m:
                raise DimensionError(f"type {t_id} orders {len(t.order)} candidates, expected {m}")
        norm = []
        seen = set()
        for arc in arcs:
            src, dst = int(arc[0]), int(arc[1])
            w = Fraction(arc[2]) if len(arc) > 2 else Fraction(1)
            for v in (src, dst):
                if not 0 <= v < tau:
                    raise UnknownReferenceError(f"arc ({src}, {dst}) references unknown type {v}")
            if src == dst:
                raise ValueError(f"self-arc on type {src}")
            if w < 0:
                raise ValueError("arc weights must be non-negative")
            key = (src, dst) if self.directed else (min(src, dst), max(src, dst))
            if key in seen:
                raise ValueError(f"duplicate arc {key}")
            seen.add(key)
            norm.append((key[0], key[1], w))
        self.arcs = tuple(sorted(norm))
        in_nbrs = [[] for _ in range(tau)]
        for src, dst, w in self.arcs:
            in_nbrs[dst].append((src, w))
            if not self.directed:
                in_nbrs[src].append((dst, w))
        self.in_neighbors = tuple(tuple(sorted(lst)) for lst in in_nbrs)
        self.unit = all(w == 1 for _, _, w in self.arcs)
        # integer neighbour lists for the unit-weight fast path
        self.nbrs = tuple(tuple(u for u, _ in lst) for lst in self.in_neighbors)
        self.orders = tuple(t.order for t in self.types)
        self._by_key = {(t.order, t.attributes): t.id for t in self.types}

    @property
    def tau(self) -> int:
        return len(self.types)

    def find_type(self, order, attributes=()):
        """Id of the type with this order and attribute tuple, or ``None``."""
        if isinstance(attributes, Mapping):
            attributes = tuple(sorted((str(k), str(v)) for k, v in attributes.items()))
        return self._by_key.get((tuple(order), tuple(attributes)))

    def closed_neighborhood(self, v: int) -> tuple:
        return (v,) + self.nbrs[v]

    def edges(self) -> list:
        """Arcs as ``(src, dst)`` pairs, without weights."""
        return [(a, b) for a, b, _ in self.arcs]

    def extended(self, new_types: Sequence[VoterType]) -> "Topology":
        return Topology(self.m, self.types + tuple(new_types), self.arcs, self.directed)

    def __eq__(self, other):
        return (
            isinstance(other, Topology)
            and self.m == other.m
            and self.types == other.types
            and self.arcs == other.arcs
            and self.directed == other.directed
        )

    def __hash__(self):
        return hash((self.m, self.types, self.arcs, self.directed))


@dataclass(frozen=True)
class SocietyGraph:
    """A vertex-weighted graph over voter types: the state of an election."""

    topology: Topology
    weights: tuple

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(self.weights))
        if len(self.weights) != self.topology.tau:
            raise DimensionError(f"{self.topology.tau} types but {len(self.weights)} weights")
        if any(w < 0 for w in self.weights):
            raise ValueError("weights must be non-negative")

    @property
    def m(self) -> int:
        return self.topology.m

    @property
    def types(self):
        return self.topology.types

    @property
    def orders(self):
        return self.topology.orders

    @property
    def arcs(self):
        return self.topology.arcs

    @property
    def directed(self) -> bool:
        return self.topology.directed

    @property
    def tau(self) -> int:
        return self.topology.tau

    @property
    def n(self):
        return sum(self.weights)

    @property
    def society(self) -> Society:
        return Society(self.orders, self.weights)

    def with_weights(self, weights: Sequence) -> "SocietyGraph":
        return SocietyGraph(self.topology, tuple(weights))

    def neighbors(self, v: int) -> tuple:
        if not 0 <= v < self.tau:
            raise UnknownReferenceError(f"unknown type id {v}")
        return self.topology.nbrs[v]


def swap1_arcs(orders: Sequence[Order]) -> list:
    """Unit undirected arcs between every pair of orders at swap distance 1."""
    index = {tuple(o): i for i, o in enumerate(orders)}
    arcs = set()
    for i, o in enumerate(orders):
        for pos in range(len(o) - 1):
            swapped = list(o)
            swapped[pos], swapped[pos + 1] = swapped[pos + 1], swapped[pos]
            j = index.get(tuple(swapped))
            if j is not None and j != i:
                arcs.add((min(i, j), max(i, j), 1))
    return sorted(arcs)


def build_society_graph(society, policy="swap1", *, types=None, directed=False) -> SocietyGraph:
    """Build a society graph.

    Args:
        society: a ``Society`` (its orders become the voter types) or a plain
            weight vector over the canonical types (``m`` is inferred).
        policy: ``"swap1"`` for unit undirected arcs between orders at swap
            distance one, or an explicit iterable of ``(src, dst[, weight])``.
        types: explicit voter types (needed when types carry attributes).
        directed: whether an explicit arc list is directed.
    """
    if not isinstance(society, Society):
        weights = tuple(society)
        society = Society.canonical(_m_from_tau(len(weights)), weights)
    if types is None:
        types = tuple(VoterType(i, o) for i, o in enumerate(society.orders))
    m = len(types[0].order) if types else 0
    if isinstance(policy, str):
        if policy != "swap1":
            raise ValueError(f"unknown adjacency policy {policy!r}")
        arcs = swap1_arcs([t.order for t in types])
        directed = False
    else:
        arcs = list(policy)
    return SocietyGraph(Topology(m, types, arcs, directed), society.weights)


def _m_from_tau(tau: int) -> int:
    for m in range(1, MAX_ENUMERABLE_M + 1):
        if math.factorial(m) == tau:
            return 2 if tau == 2 else m
    raise DimensionError(f"{tau} weights is not m! for any m <= {MAX_ENUMERABLE_M}")


def canonical_graph(m: int, weights: Sequence[int]) -> SocietyGraph:
    """The basic society graph over all ``m!`` canonical types."""
    return build_society_graph(Society.canonical(m, weights))


@dataclass(frozen=True)
class VotingRule:
    """A voting rule: ``plurality``, ``borda``, ``scoring`` (explicit vector) or ``stv``.

    Scoring vectors are non-increasing; ``vector[i]`` is awarded for
    position ``i+1``.
    """

    kind: str
    vector: tuple = field(default=None)

    def __post_init__(self):
        if self.kind not in ("plurality", "borda", "scoring", "stv"):
            raise UnsupportedRuleError(f"unknown rule {self.kind!r}")
        if self.kind == "scoring":
            if not self.vector:
                raise ValueError("a scoring rule needs a vector")
            vec = tuple(int(s) for s in self.vector)
            if any(a < b for a, b in zip(vec, vec[1:])):
                raise ValueError("scoring vector must be non-increasing")
            object.__setattr__(self, "vector", vec)

    @classmethod
    def parse(cls, text: str) -> "VotingRule":
        text = text.strip().lower()
        if text.startswith("scoring:"):
            return cls("scoring", tuple(int(s) for s in text[8:].split(",")))
        return cls(text)

    @property
    def name(self) -> str:
        if self.kind == "scoring":
            return "scoring:" + ",".join(map(str, self.vector))
        return self.kind

    @property
    def is_scoring(self) -> bool:
        return self.kind != "stv"

    def score_vector(self, m: int) -> tuple:
        if self.kind == "plurality":
            return (1,) + (0,) * (m - 1)
        if self.kind == "borda":
            return tuple(range(m - 1, -1, -1))
        if self.kind == "scoring":
            if len(self.vector) != m:
                raise DimensionError(f"scoring vector has length {len(self.vector)}, m={m}")
            return self.vector
        raise UnsupportedRuleError("STV is not a scoring rule")


PLURALITY = VotingRule("plurality")
BORDA = VotingRule("borda")
STV = VotingRule("stv")


@lru_cache(maxsize=4096)
def score_matrix(rule: VotingRule, orders: tuple) -> tuple:
    """``S[c][j]`` = points candidate ``c`` receives from one voter of type ``j``."""
    m = len(orders[0])
    vec = rule.score_vector(m)
    S = [[0] * len(orders) for _ in range(m)]
    for j, o in enumerate(orders):
        for pos, c in enumerate(o):
            S[c][j] = vec[pos]
    return tuple(tuple(row) for row in S)


def _parts(society):
    return tuple(society.orders), tuple(society.weights)


def scores(rule: VotingRule, society) -> list:
    """Score of every candidate under a scoring rule."""
    if not rule.is_scoring:
        raise UnsupportedRuleError("scores() needs a scoring rule; STV has none")
    orders, weights = _parts(society)
    S = score_matrix(rule, orders)
    return [sum(s * w for s, w in zip(row, weights)) for row in S]


def plurality_tally(orders, weights, removed=frozenset()) -> dict:
    """First-place counts among the candidates not in ``removed``."""
    m = len(orders[0])
    tally = {c: 0 for c in range(m) if c not in removed}
    for o, w in zip(orders, weights):
        if w:
            for c in o:
                if c not in removed:
                    tally[c] += w
                    break
    return tally


def stv_winner(society) -> int:
    """Single-winner STV with lexicographic elimination tie-breaking.

    A candidate ranked first by more than half of the voters wins; otherwise
    the remaining candidate with the lowest first-place count (lowest index
    among ties) is eliminated and the count repeats.
    """
    orders, weights = _parts(society)
    n = sum(weights)
    if n == 0:
        raise DegenerateElectionError("STV on an empty election")
    removed = set()
    while True:
        tally = plurality_tally(orders, weights, removed)
        for c, s in tally.items():
            if 2 * s > n:
                return c
        loser = min(tally, key=lambda c: (tally[c], c))
        removed.add(loser)


def winners(rule: VotingRule, society) -> frozenset:
    """The set of co-winners (a singleton for STV)."""
    orders, weights = _parts(society)
    if sum(weights) == 0:
        raise DegenerateElectionError("winners of an election without voters")
    if rule.kind == "stv":
        return frozenset({stv_winner(society)})
    sc = scores(rule, society)
    best = max(sc)
    return frozenset(c for c, s in enumerate(sc) if s == best)


def is_winner(rule: VotingRule, society, p: int) -> bool:
    return p in winners(rule, society)


def margin_of_victory(rule: VotingRule, society, p: int):
    """``score(p) - max_{c != p} score(c)``; ``math.inf`` when ``p`` is unopposed."""
    sc = scores(rule, society)
    if len(sc) == 1:
        return math.inf
    return sc[p] - max(s for c, s in enumerate(sc) if c != p)


def kemeny_ranking(society) -> Order:
    """Exact Kemeny consensus by enumerating all ``m!`` rankings.

    Ties go to the lexicographically smallest ranking; an empty society
    yields ``(0, 1, ..., m-1)``.
    """
    orders, weights = _parts(society)
    m = len(orders[0])
    if m > MAX_KEMENY_M:
        raise SizeLimitError(f"exact Kemeny is limited to m <= {MAX_KEMENY_M}")
    # prefer[a][b]: voters ranking a above b
    prefer = [[0] * m for _ in range(m)]
    for o, w in zip(orders, weights):
        if not w:
            continue
        for i, a in enumerate(o):
            for b in o[i + 1:]:
                prefer[a][b] += w
    best, best_cost = None, None
    for r in _orders(m):
        cost = 0
        for i, a in enumerate(r):
            for b in r[i + 1:]:
                cost += prefer[b][a]
        if best_cost is None or cost < best_cost:
            best, best_cost = r, cost
    return best
