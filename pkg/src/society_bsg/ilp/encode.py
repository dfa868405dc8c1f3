"""Integer programs for bribery followed by diffusion.

The synchronous model simulates ``k`` diffusion layers on top of the bribed
society ``x^0``:

* ``b_i_j`` voters bribed from type ``i`` to ``j``; rows sum to ``w_i`` and
  columns to ``x_j^0``.
* ``z_i_j_l`` is 1 iff ``j`` holds a strict majority of ``N[i]`` in layer
  ``l - 1``, written with doubled coefficients as
  ``2 x_j - sum_{a in N[i]} x_a >= 1``; ``z_i_i_l`` takes the remaining
  unit so that exactly one ``z`` per ``(i, l)`` is set.
* ``t_i_j_l = z_i_j_l * x_i^{l-1}`` via the four product inequalities, and
  ``x_j^l = sum_i t_i_j_l``.
* the voting rule constrains the last layer; the objective is the bribery
  cost.

The asynchronous optimistic variant lets exactly one vertex act per layer
and requires the last layer to be stable.
"""

from __future__ import annotations

import itertools
import warnings

from ..bribery import INF, BriberyPlan, BsgInstance
from ..election import VotingRule, score_matrix
from ..errors import BoundednessError, SizeLimitError, UnsupportedRuleError
from .model import IlpModel

MAX_STV_M = 4


# ---------------------------------------------------------------------------
# linearisation helpers


def linearize_indicator(model: IlpModel, coeffs, sense: str, rhs: int, name: str) -> int:
    """Binary ``z`` with ``z = 1`` iff ``expr <sense> rhs`` (``sense`` is ``<`` or ``<=``).

    The constant used for each direction is derived from the bounds of the
    expression, so all involved variables must be bounded.
    """
    if sense not in ("<", "<="):
        raise ValueError("indicator conditions are written as expr < rhs or expr <= rhs")
    for v, _ in _items(coeffs):
        if not 0 <= v < model.num_vars:
            raise BoundednessError(f"variable {v} is not part of the model")
    r = rhs - 1 if sense == "<" else rhs
    lo, hi = model.expr_bounds(coeffs)
    z = model.add_binary(name)
    if hi <= r:
        model.variables[z].lo = 1
    elif lo > r:
        model.variables[z].hi = 0
    else:
        # z = 1  =>  expr <= r
        model.add_constraint(list(_items(coeffs)) + [(z, hi - r)], "<=", hi)
        # z = 0  =>  expr >= r + 1
        model.add_constraint(list(_items(coeffs)) + [(z, r + 1 - lo)], ">=", r + 1)
    return z


def majority_indicator(model: IlpModel, xj: int, hood, n: int, name: str) -> int:
    """Binary ``z = [2 x_j - sum(hood) >= 1]`` using the constant ``M = 2n + 1``."""
    big_m = 2 * n + 1
    z = model.add_binary(name)
    expr = [(xj, 2)] + [(a, -1) for a in hood]
    # 2x_j - sum >= 1 - M(1 - z)
    model.add_constraint(expr + [(z, -big_m)], ">=", 1 - big_m)
    # 2x_j - sum <= M z
    model.add_constraint(expr + [(z, -big_m)], "<=", 0)
    return z


def product(model: IlpModel, z: int, x: int, n: int, name: str) -> int:
    """``t = z * x`` for binary ``z`` and ``0 <= x <= n``."""
    t = model.add_var(name, 0, n)
    model.add_constraint([(t, 1), (z, -n)], "<=", 0)
    model.add_constraint([(t, 1), (x, -1)], "<=", 0)
    model.add_constraint([(t, 1), (x, -1), (z, -n)], ">=", -n)
    return t


def gated_row(model: IlpModel, coeffs, rhs: int, selector: int, name: str | None = None) -> None:
    """Add ``expr <= rhs`` enforced only when ``selector = 1``.

    Written as ``expr + (U - rhs) * selector <= U`` with ``U`` the largest
    value of ``expr``; rows that can never be violated are dropped.
    """
    _, hi = model.expr_bounds(coeffs)
    if hi <= rhs:
        return
    model.add_constraint(list(_items(coeffs)) + [(selector, hi - rhs)], "<=", hi, name)


def _items(coeffs):
    return coeffs.items() if isinstance(coeffs, dict) else coeffs


# ---------------------------------------------------------------------------
# voting rules


def stv_elimination_orders(m: int, p: int) -> list:
    """Every sequence of distinct candidates ending in ``p``.

    All but the last entry are eliminated in that order; the last wins.
    """
    others = [c for c in range(m) if c != p]
    orders = []
    for size in range(len(others) + 1):
        for seq in itertools.permutations(others, size):
            orders.append(seq + (p,))
    return orders


def _first_choice_types(orders, removed, c) -> list:
    out = []
    for j, o in enumerate(orders):
        for cand in o:
            if cand not in removed:
                if cand == c:
                    out.append(j)
                break
    return out


def stv_block(orders, seq, n: int) -> list:
    """Rows ``(coeffs_by_type, rhs)`` meaning ``sum(coeffs * x) <= rhs`` for one elimination order.

    Coefficients are indexed by type; the caller maps them to variables.
    """
    m = len(orders[0])
    rows = []
    removed = set()
    for i, loser in enumerate(seq[:-1]):
        remaining = [c for c in range(m) if c not in removed]
        tally = {c: _first_choice_types(orders, removed, c) for c in remaining}
        for c in remaining:
            # nobody has a majority yet: 2 * score(c) <= n
            rows.append(({j: 2 for j in tally[c]}, n))
            if c == loser:
                continue
            # the loser has the lowest score, lowest index among ties
            coeffs = {}
            for j in tally[loser]:
                coeffs[j] = coeffs.get(j, 0) + 1
            for j in tally[c]:
                coeffs[j] = coeffs.get(j, 0) - 1
            rows.append((coeffs, -1 if c < loser else 0))
        removed.add(loser)
    winner = seq[-1]
    final = _first_choice_types(orders, removed, winner)
    # 2 * score(winner) >= n + 1
    rows.append(({j: -2 for j in final}, -(n + 1)))
    return rows


def rule_constraints(model: IlpModel, rule: VotingRule, xk, p: int, orders, n: int, prefix: str = "") -> list:
    """Constraints on the final layer ``xk`` (variable indices per type) making ``p`` win.

    Scoring rules add one row per opponent.  STV adds a selector binary
    per elimination order ending in ``p`` plus one gated row block each.

    Returns:
        The list of auxiliary variables created (STV selectors).
    """
    orders = tuple(tuple(o) for o in orders)
    m = len(orders[0])
    if rule.is_scoring:
        S = score_matrix(rule, orders)
        for c in range(m):
            if c == p:
                continue
            coeffs = [(xk[j], S[c][j] - S[p][j]) for j in range(len(orders))]
            model.add_constraint(coeffs, "<=", 0, f"{prefix}rule_{c}")
        return []
    if rule.kind != "stv":
        raise UnsupportedRuleError(f"no encoding for rule {rule.name}")
    if m > MAX_STV_M:
        raise SizeLimitError(f"STV encoding enumerates elimination orders; m <= {MAX_STV_M} required")
    selectors = []
    for q, seq in enumerate(stv_elimination_orders(m, p)):
        s = model.add_binary(f"{prefix}s_{q}")
        selectors.append(s)
        for coeffs, rhs in stv_block(orders, seq, n):
            gated_row(model, [(xk[j], a) for j, a in coeffs.items() if a], rhs, s)
    model.add_constraint([(s, 1) for s in selectors], "=", 1, f"{prefix}stv_select")
    model.meta.setdefault("stv_orders", stv_elimination_orders(m, p))
    return selectors


def rule_model(rule: VotingRule, orders, weights, p: int) -> IlpModel:
    """A feasibility model whose only freedom is the rule's auxiliary variables.

    Feasible iff ``p`` wins the election given by ``orders``/``weights``.
    """
    model = IlpModel("rule")
    xs = [model.add_var(f"x_{j}", w, w) for j, w in enumerate(weights)]
    rule_constraints(model, rule, xs, p, orders, sum(weights))
    return model


# ---------------------------------------------------------------------------
# bribery models


def _closed_hoods(graph):
    topo = graph.topology
    return [(i,) + topo.nbrs[i] for i in range(topo.tau)]


def _bribery_part(model: IlpModel, inst: BsgInstance, x0) -> dict:
    g = inst.graph
    tau = g.tau
    w = g.weights
    beta = {}
    for i in range(tau):
        for j in range(tau):
            c = inst.cost[i, j]
            hi = 0 if c == INF else w[i]
            beta[i, j] = model.add_var(f"b_{i}_{j}", 0, hi)
    for i in range(tau):
        model.add_constraint([(beta[i, j], 1) for j in range(tau)], "=", w[i], f"row_{i}")
    for j in range(tau):
        model.add_constraint([(beta[i, j], 1) for i in range(tau)] + [(x0[j], -1)], "=", 0, f"col_{j}")
    objective = [(beta[i, j], inst.cost[i, j]) for i in range(tau) for j in range(tau)
                 if i != j and inst.cost[i, j] != INF and inst.cost[i, j] > 0]
    model.set_objective(objective)
    if inst.budget is not None:
        model.add_constraint(objective, "<=", inst.budget, "budget")
    model.branch_priority.extend(
        beta[i, j] for i in range(tau) for j in range(tau) if i != j and model.variables[beta[i, j]].hi > 0
    )
    return beta


def _resolve_k(k, tau):
    if k is None:
        return tau
    if k < 1:
        raise ValueError("k must be at least 1")
    if k < tau:
        warnings.warn(
            f"k={k} is below the number of types ({tau}); the model may cut diffusion short",
            stacklevel=3,
        )
    return k


def build_sync_bsg_model(inst: BsgInstance, k: int | None = None, layer_skip: bool = False) -> IlpModel:
    """Exact model of synchronous bribery-then-diffusion.

    Args:
        inst: the instance; its graph is used as the type universe (pass a
            graph over all ``m!`` orders to allow every bribery target).
        k: number of diffusion layers; defaults to the number of types,
            which always suffices.  Smaller values trigger a warning.
        layer_skip: drop the ``z``/``t`` variables of types without
            neighbours and copy their weight to the next layer directly.
    """
    if inst.mode != "sync":
        raise ValueError(f"synchronous model requested for mode {inst.mode!r}")
    g = inst.graph
    tau, n = g.tau, g.n
    K = _resolve_k(k, tau)
    model = IlpModel("sync_bsg")
    x = [[model.add_var(f"x_{i}_{l}", 0, n) for i in range(tau)] for l in range(K + 1)]
    beta = _bribery_part(model, inst, x[0])
    hoods = _closed_hoods(g)
    z, t = {}, {}
    for l in range(1, K + 1):
        incoming = [[] for _ in range(tau)]
        for i in range(tau):
            if layer_skip and len(hoods[i]) == 1:
                incoming[i].append(x[l - 1][i])
                continue
            prev_hood = [x[l - 1][a] for a in hoods[i]]
            for j in hoods[i][1:]:
                z[i, j, l] = majority_indicator(model, x[l - 1][j], prev_hood, n, f"z_{i}_{j}_{l}")
            z[i, i, l] = model.add_binary(f"z_{i}_{i}_{l}")
            model.add_constraint([(z[i, j, l], 1) for j in hoods[i]], "=", 1, f"one_{i}_{l}")
            for j in hoods[i]:
                t[i, j, l] = product(model, z[i, j, l], x[l - 1][i], n, f"t_{i}_{j}_{l}")
                incoming[j].append(t[i, j, l])
        for j in range(tau):
            model.add_constraint([(x[l][j], 1)] + [(v, -1) for v in incoming[j]], "=", 0, f"move_{j}_{l}")
        model.branch_priority.extend(z[i, j, lay] for (i, j, lay) in z if lay == l)
    rule_constraints(model, inst.rule, x[K], inst.p, g.orders, n)
    model.meta.update(kind="sync", tau=tau, k=K, n=n, x=x, beta=beta, z=z, t=t)
    return model


def build_async_optimistic_model(inst: BsgInstance, k: int | None = None) -> IlpModel:
    """Exact model of bribery followed by some asynchronous order of length at most ``k``.

    Per layer one vertex is selected (``y_i_l``); its realised move
    ``zh_i_j_l`` may only follow a true majority ``z_i_j_l`` and only carry
    a positive weight.  A layer without a move stays idle; idle layers are
    pushed to the end and select vertex 0, which removes equivalent
    orderings from the search.  The last layer must be stable: for every
    ``i`` with positive weight and ``j`` in ``N(i)``, ``j`` holds no strict
    majority of ``N[i]``.
    """
    if inst.mode not in ("async-optimistic", "sync"):
        raise ValueError(f"optimistic model requested for mode {inst.mode!r}")
    g = inst.graph
    tau, n = g.tau, g.n
    if k is not None and k > tau:
        raise ValueError(f"k={k} exceeds the number of types ({tau})")
    K = _resolve_k(k, tau)
    big_m = 2 * n + 1
    model = IlpModel("async_optimistic_bsg")
    x = [[model.add_var(f"x_{i}_{l}", 0, n) for i in range(tau)] for l in range(K + 1)]
    beta = _bribery_part(model, inst, x[0])
    hoods = _closed_hoods(g)
    moved = []
    y_all, zh_all = {}, {}
    for l in range(1, K + 1):
        prev = x[l - 1]
        y = [model.add_binary(f"y_{i}_{l}") for i in range(tau)]
        model.add_constraint([(v, 1) for v in y], "=", 1, f"select_{l}")
        incoming = [[] for _ in range(tau)]
        layer_moves = []
        zh_layer = []
        for i in range(tau):
            prev_hood = [prev[a] for a in hoods[i]]
            own = []
            for j in hoods[i][1:]:
                zij = majority_indicator(model, prev[j], prev_hood, n, f"z_{i}_{j}_{l}")
                zh = model.add_binary(f"zh_{i}_{j}_{l}")
                model.add_constraint([(zh, 1), (zij, -1)], "<=", 0)
                model.add_constraint([(zh, 1), (y[i], -1)], "<=", 0)
                model.add_constraint([(zh, 1), (prev[i], -1)], "<=", 0)
                own.append((j, zh))
                layer_moves.append(zh)
            zh_ii = model.add_binary(f"zh_{i}_{i}_{l}")
            model.add_constraint([(zh_ii, 1)] + [(v, 1) for _, v in own], "=", 1, f"one_{i}_{l}")
            for j, zh in [(i, zh_ii)] + own:
                th = product(model, zh, prev[i], n, f"th_{i}_{j}_{l}")
                incoming[j].append(th)
                zh_all[i, j, l] = zh
            zh_layer.extend(zh for _, zh in own)
        for j in range(tau):
            model.add_constraint([(x[l][j], 1)] + [(v, -1) for v in incoming[j]], "=", 0, f"move_{j}_{l}")
        mv = model.add_binary(f"moved_{l}")
        model.add_constraint([(mv, 1)] + [(v, -1) for v in layer_moves], "=", 0, f"moved_{l}")
        # an idle layer selects vertex 0
        model.add_constraint([(y[0], 1), (mv, 1)], ">=", 1, f"idle_{l}")
        if moved:
            model.add_constraint([(mv, 1), (moved[-1], -1)], "<=", 0, f"idle_tail_{l}")
        moved.append(mv)
        y_all[l] = y
        model.branch_priority.extend(y)
        model.branch_priority.extend(zh_layer)
    last = x[K]
    for i in range(tau):
        for j in hoods[i][1:]:
            u = model.add_binary(f"u_{i}_{j}")
            # positive weight at i forces u = 1 ...
            model.add_constraint([(last[i], 1), (u, -n)], "<=", 0)
            # ... and then j is not a strict majority of N[i]
            model.add_constraint([(last[j], 2)] + [(last[a], -1) for a in hoods[i]] + [(u, big_m)], "<=", big_m)
    rule_constraints(model, inst.rule, last, inst.p, g.orders, n)
    model.meta.update(kind="async-optimistic", tau=tau, k=K, n=n, x=x, beta=beta, y=y_all, zh=zh_all)
    return model


# ---------------------------------------------------------------------------
# decoding


def decode_plan(model: IlpModel, values) -> BriberyPlan:
    """The bribery matrix of a solved bribery model."""
    beta = model.meta["beta"]
    tau = model.meta["tau"]
    return BriberyPlan([[values[beta[i, j]] for j in range(tau)] for i in range(tau)])


def decode_layers(model: IlpModel, values) -> list:
    """The weight vector of every diffusion layer, ``x^0`` first."""
    return [tuple(values[v] for v in layer) for layer in model.meta["x"]]


def decode_order(model: IlpModel, values) -> list:
    """Vertices that moved in an asynchronous solution, in order."""
    order = []
    for l in range(1, model.meta["k"] + 1):
        if values[model.var(f"moved_{l}")]:
            y = model.meta["y"][l]
            order.append(next(i for i, v in enumerate(y) if values[v]))
    return order
