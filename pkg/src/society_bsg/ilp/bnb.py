"""Depth-first branch and bound over bounded integer variables.

No LP relaxation is used.  Every constraint is rewritten as one or two rows
``sum(a_k x_k) <= b`` and bounds are tightened by activity-based propagation
until a fixed point:

    minact = sum(a_k lo_k for a_k > 0) + sum(a_k hi_k for a_k < 0)
    a_k > 0:  x_k <= lo_k + floor((b - minact) / a_k)
    a_k < 0:  x_k >= hi_k - floor((b - minact) / -a_k)

Branching fixes the first unfixed variable of the model's branch priority
list (then of the remaining variables in model order) to each value of its
domain in ascending order.  The objective enters as an extra row whose
right-hand side drops to ``incumbent - 1`` whenever a better solution is
found, so propagation also prunes by cost.
"""

from __future__ import annotations

import time

from ..errors import VerificationError
from .model import IlpModel, SolveResult


def _rows(model: IlpModel):
    rows = []
    for con in model.constraints:
        vs = tuple(con.coeffs)
        cs = tuple(con.coeffs[v] for v in vs)
        if con.sense in ("<=", "="):
            rows.append([vs, cs, con.rhs])
        if con.sense in (">=", "="):
            rows.append([vs, tuple(-a for a in cs), -con.rhs])
    return rows


def solve_bnb(model: IlpModel, node_limit: int | None = None, time_limit: float | None = None,
              cutoff: int | None = None) -> SolveResult:
    """Minimise ``model.objective`` exactly.

    Args:
        model: the model; all variables must be bounded integers.
        node_limit: maximum number of branching nodes.
        time_limit: wall-clock limit in seconds.
        cutoff: only look for solutions with objective at most this value.

    Returns:
        A :class:`SolveResult` whose status is ``"optimal"``,
        ``"infeasible"`` or ``"search-limit"``.
    """
    start = time.perf_counter()
    nv = model.num_vars
    lo = [v.lo for v in model.variables]
    hi = [v.hi for v in model.variables]
    rows = _rows(model)
    obj_row = None
    if model.objective:
        vs = tuple(model.objective)
        rows.append([vs, tuple(model.objective[v] for v in vs), cutoff if cutoff is not None else _big(model)])
        obj_row = len(rows) - 1
    var_rows = [[] for _ in range(nv)]
    for r, (vs, _, _) in enumerate(rows):
        for v in vs:
            var_rows[v].append(r)

    trail = []
    in_queue = [False] * len(rows)

    def propagate(queue) -> bool:
        for r in queue:
            in_queue[r] = True
        while queue:
            r = queue.pop()
            in_queue[r] = False
            vs, cs, b = rows[r]
            minact = 0
            for v, a in zip(vs, cs):
                minact += a * lo[v] if a > 0 else a * hi[v]
            slack = b - minact
            if slack < 0:
                for q in queue:
                    in_queue[q] = False
                return False
            for v, a in zip(vs, cs):
                if a > 0:
                    if a * (hi[v] - lo[v]) > slack:
                        trail.append((v, lo[v], hi[v]))
                        hi[v] = lo[v] + slack // a
                    else:
                        continue
                else:
                    if -a * (hi[v] - lo[v]) > slack:
                        trail.append((v, lo[v], hi[v]))
                        lo[v] = hi[v] - slack // (-a)
                    else:
                        continue
                for q in var_rows[v]:
                    if q != r and not in_queue[q]:
                        in_queue[q] = True
                        queue.append(q)
        return True

    def undo(mark):
        while len(trail) > mark:
            v, l, h = trail.pop()
            lo[v] = l
            hi[v] = h

    seen = set(model.branch_priority)
    order = list(model.branch_priority) + [v for v in range(nv) if v not in seen]

    def choose(pos):
        for k in range(pos, nv):
            v = order[k]
            if lo[v] < hi[v]:
                return k
        return None

    best = None
    best_obj = None
    nodes = 0
    limited = False

    def record():
        nonlocal best, best_obj
        vals = list(lo)
        obj = model.objective_value(vals)
        best, best_obj = vals, obj
        if obj_row is not None:
            rows[obj_row][2] = obj - 1

    if propagate(list(range(len(rows)))):
        k = choose(0)
        if k is None:
            record()
            stack = []
        else:
            stack = [[order[k], lo[order[k]], len(trail), k]]
        while stack:
            frame = stack[-1]
            var, nxt, mark, pos = frame
            undo(mark)
            if best is not None and obj_row is not None and not propagate([obj_row]):
                stack.pop()
                continue
            val = max(nxt, lo[var])
            if val > hi[var]:
                stack.pop()
                continue
            frame[1] = val + 1
            nodes += 1
            if node_limit is not None and nodes > node_limit:
                limited = True
                break
            if time_limit is not None and nodes % 256 == 0 and time.perf_counter() - start > time_limit:
                limited = True
                break
            trail.append((var, lo[var], hi[var]))
            lo[var] = hi[var] = val
            if not propagate(list(var_rows[var])):
                continue
            k = choose(pos + 1)
            if k is None:
                record()
                continue
            stack.append([order[k], lo[order[k]], len(trail), k])

    stats = {"nodes": nodes, "time_s": time.perf_counter() - start, "backend": "builtin-bnb"}
    if best is not None:
        bad = model.violations(best)
        if bad:
            raise VerificationError(f"solver produced an assignment violating {bad[0]}", constraint=bad[0])
    if limited:
        return SolveResult("search-limit", best_obj, best, stats, model)
    if best is None:
        return SolveResult("infeasible", None, None, stats, model)
    return SolveResult("optimal", best_obj, best, stats, model)


def _big(model: IlpModel) -> int:
    return model.expr_bounds(model.objective)[1]
