"""Instance generators: impartial culture and the vertex-cover gadget."""

from __future__ import annotations

import random
from itertools import combinations

from .diffusion import ProcessSpec
from .election import Society, SocietyGraph, Topology, VoterType, enumerate_orders

# weights used by the vertex-cover gadget
GADGET_X = 10
GADGET_Y = 100
GADGET_Z = 1000

C, D, E, P = 0, 1, 2, 3


def impartial_culture(m: int, n: int, seed: int) -> Society:
    """``n`` voters with orders drawn uniformly from all ``m!`` orders.

    Draws use ``random.Random(seed).randrange(m!)`` (Mersenne Twister
    MT19937), one call per voter, so results are reproducible everywhere.
    """
    orders = enumerate_orders(m)
    rng = random.Random(seed)
    weights = [0] * len(orders)
    for _ in range(n):
        weights[rng.randrange(len(orders))] += 1
    return Society(tuple(orders), tuple(weights))


def gadget_candidates(num_vertices: int) -> dict:
    """Candidate indices: ``c, d, e, p`` then ``a_i, b_i`` interleaved."""
    names = {"c": C, "d": D, "e": E, "p": P}
    for i in range(num_vertices):
        names[f"a{i}"] = 4 + 2 * i
        names[f"b{i}"] = 5 + 2 * i
    return names


def gadget_order(xyz, subset, num_vertices: int) -> tuple:
    """``x > y > z > a_1 > b_1 > ... > a_n > b_n > c`` with ``a_i, b_i`` swapped for ``i`` in ``subset``."""
    tail = []
    for i in range(num_vertices):
        a, b = 4 + 2 * i, 5 + 2 * i
        tail.extend((b, a) if i in subset else (a, b))
    return tuple(xyz) + tuple(tail) + (C,)


def vc_gadget(num_vertices: int, edges, k: int):
    """Society graph in which ``p`` can win some asynchronous order iff a size-``k`` vertex cover exists.

    Args:
        num_vertices: vertices are ``0..num_vertices-1``.
        edges: undirected edges ``(i, j)``; every vertex has degree <= 3.
        k: cover size.

    Returns:
        ``(graph, p)``.  Node order: the three isolated nodes (``c``-first,
        ``p``-first, ``d``-first), then ``v1, v2, v3`` per vertex, then
        ``e1, e2, e3`` per edge.
    """
    edges = [tuple(sorted(e)) for e in edges]
    if len(set(edges)) != len(edges) or any(i == j for i, j in edges):
        raise ValueError("edges must be distinct and without loops")
    degree = [0] * num_vertices
    for i, j in edges:
        if not (0 <= i < num_vertices and 0 <= j < num_vertices):
            raise ValueError(f"edge ({i}, {j}) uses an unknown vertex")
        degree[i] += 1
        degree[j] += 1
    if any(d > 3 for d in degree):
        raise ValueError("the gadget needs a graph of maximum degree 3")
    if k < 0:
        raise ValueError("k must be non-negative")
    nv, ne = num_vertices, len(edges)
    X, Y, Z = GADGET_X, GADGET_Y, GADGET_Z
    m = 4 + 2 * nv
    rest = tuple(range(4, m))
    orders, weights, arcs = [], [], []

    T = gadget_weight_t(nv, ne)
    orders += [(C, D, E, P) + rest, (P, C, D, E) + rest, (D, C, E, P) + rest]
    weights += [T, T - (2 * X + 9) * ne, T - (Y + Z) * nv - k * X]

    v1 = {}
    for i in range(nv):
        base = len(orders)
        orders += [gadget_order((E, D, P), {i}, nv), gadget_order((D, E, P), {i}, nv),
                   gadget_order((D, P, E), {i}, nv)]
        weights += [X, Y, Z]
        arcs += [(base, base + 1), (base + 1, base + 2)]
        v1[i] = base
    for i, j in edges:
        base = len(orders)
        orders += [gadget_order((E, D, P), {i, j}, nv), gadget_order((E, P, D), {i, j}, nv),
                   gadget_order((P, E, D), {i, j}, nv)]
        weights += [1, X + 3, X + 5]
        arcs += [(base, base + 1), (base + 1, base + 2), (base, v1[i]), (base, v1[j])]
    types = [VoterType(t, o) for t, o in enumerate(orders)]
    graph = SocietyGraph(Topology(m, types, arcs), tuple(weights))
    return graph, P


def has_vertex_cover(num_vertices: int, edges, k: int) -> bool:
    """Direct check over all vertex subsets of size at most ``k``."""
    for size in range(min(k, num_vertices) + 1):
        for cover in combinations(range(num_vertices), size):
            cs = set(cover)
            if all(i in cs or j in cs for i, j in edges):
                return True
    return False


def gadget_weight_t(num_vertices: int, num_edges: int) -> int:
    """Weight ``T`` of the isolated ``c``-first node: the squared total of the vertex and edge nodes."""
    part2 = num_vertices * (GADGET_X + GADGET_Y + GADGET_Z) + num_edges * (1 + (GADGET_X + 3) + (GADGET_X + 5))
    return part2 * part2


def rotating_cohorts(young, old, rounds: int = 9):
    """Three orders split into young and old voters; the young follow the next order round after round.

    Type ``2i`` holds the young voters of order ``i`` and type ``2i + 1``
    the old ones (orders are the first three canonical orders for
    ``m = 3``).  Old voters never move.  Type ``i + 1 mod 3`` influences
    type ``i`` (directed arcs), and the process moves the young of order
    ``i`` to order ``i + 1 mod 3`` every round, so the young weights rotate
    and the run never settles unless they are all equal.

    Returns:
        ``(graph, spec)`` for :func:`~society_bsg.diffusion.run_generalized`.
    """
    if len(young) != 3 or len(old) != 3:
        raise ValueError("need three young and three old weights")
    orders = enumerate_orders(3)[:3]
    types, weights = [], []
    for i in range(3):
        types += [VoterType(2 * i, orders[i], {"age": "Y"}), VoterType(2 * i + 1, orders[i], {"age": "O"})]
        weights += [young[i], old[i]]
    arcs = []
    for i in range(3):
        nxt = (i + 1) % 3
        arcs += [(2 * nxt, 2 * i), (2 * nxt + 1, 2 * i), (2 * nxt, 2 * i + 1), (2 * nxt + 1, 2 * i + 1)]
    graph = SocietyGraph(Topology(3, types, arcs, directed=True), tuple(weights))
    spec = ProcessSpec("custom-table", rounds, immobile=(("age", "O"),),
                       table={2 * i: 2 * ((i + 1) % 3) for i in range(3)})
    return graph, spec
