"""Integer programming: model container, encodings, solvers and LP files."""

from __future__ import annotations

import os
import tempfile

from .bnb import solve_bnb
from .encode import (
    build_async_optimistic_model,
    build_sync_bsg_model,
    decode_layers,
    decode_order,
    decode_plan,
    gated_row,
    linearize_indicator,
    majority_indicator,
    product,
    rule_constraints,
    rule_model,
    stv_block,
    stv_elimination_orders,
)
from .highs import highs_available, solve_lp_file
from .lpfile import export_lp, import_solution, parse_solution, read_lp, write_lp, write_solution
from .model import Constraint, IlpModel, SolveResult, Variable

BACKENDS = ("builtin-bnb", "lp-file-roundtrip")
AUTO_BUILTIN_SECONDS = 2.0


def solve(model: IlpModel, backend: str = "builtin-bnb", *, node_limit=None, time_limit=None,
          lp_path=None, solution=None, external=None) -> SolveResult:
    """Solve ``model`` with the chosen backend.

    ``builtin-bnb`` runs :func:`solve_bnb`.  ``lp-file-roundtrip`` writes the
    model to ``lp_path`` (a temporary file by default) and then either reads
    ``solution`` (a path, stream or text) or, if ``external`` is given,
    calls ``external(lp_path)`` and reads the solution text it returns.
    Without either, the result has status ``"exported"`` and carries the
    LP path in ``stats``.  Imported assignments are always re-verified.
    """
    if backend == "builtin-bnb":
        return solve_bnb(model, node_limit=node_limit, time_limit=time_limit)
    if backend != "lp-file-roundtrip":
        raise ValueError(f"unknown backend {backend!r}; expected one of {BACKENDS}")
    if lp_path is None:
        fd, lp_path = tempfile.mkstemp(suffix=".lp", prefix="society_bsg_")
        os.close(fd)
    export_lp(model, lp_path)
    if external is not None:
        solution = external(lp_path)
        if solution is None:
            return SolveResult("infeasible", stats={"backend": backend, "lp_path": str(lp_path)}, model=model)
    if solution is None:
        return SolveResult("exported", stats={"backend": backend, "lp_path": str(lp_path)}, model=model)
    result = import_solution(model, solution)
    result.stats["lp_path"] = str(lp_path)
    return result


def solve_instance(inst, backend: str = "auto", *, k=None, node_limit=None, time_limit=None, lp_path=None):
    """Minimum-cost bribery for ``inst`` through its ILP model.

    Args:
        backend: ``"builtin-bnb"``; ``"highs"`` (LP-file round trip through
            HiGHS, re-verified on import); or ``"auto"`` (the built-in
            solver for up to ``AUTO_BUILTIN_SECONDS``, then HiGHS if
            ``highspy`` is installed).

    Returns:
        ``(result, plan)`` where ``plan`` is a ``BriberyPlan`` or ``None``.
    """
    if inst.mode == "sync":
        model = build_sync_bsg_model(inst, k)
    else:
        model = build_async_optimistic_model(inst, k)
    if backend == "auto":
        if not highs_available():
            backend = "builtin-bnb"
        else:
            # the built-in search settles small instances fastest; hand the rest to HiGHS
            first = AUTO_BUILTIN_SECONDS if time_limit is None else min(time_limit, AUTO_BUILTIN_SECONDS)
            result = solve(model, "builtin-bnb", node_limit=node_limit, time_limit=first)
            if result.status != "search-limit":
                plan = decode_plan(model, result.values) if result.status == "optimal" else None
                return result, plan
            backend = "highs"
    if backend == "highs":
        try:
            result = solve(model, "lp-file-roundtrip", lp_path=lp_path,
                           external=lambda path: solve_lp_file(path, time_limit))
        except RuntimeError as exc:
            result = SolveResult("search-limit", stats={"message": str(exc)}, model=model)
        result.stats["backend"] = "highs"
    else:
        result = solve(model, backend, node_limit=node_limit, time_limit=time_limit, lp_path=lp_path)
    plan = decode_plan(model, result.values) if result.status == "optimal" else None
    return result, plan


__all__ = [
    "BACKENDS",
    "Constraint",
    "IlpModel",
    "SolveResult",
    "Variable",
    "build_async_optimistic_model",
    "build_sync_bsg_model",
    "decode_layers",
    "decode_order",
    "decode_plan",
    "export_lp",
    "gated_row",
    "highs_available",
    "import_solution",
    "linearize_indicator",
    "majority_indicator",
    "parse_solution",
    "product",
    "read_lp",
    "rule_constraints",
    "rule_model",
    "solve",
    "solve_bnb",
    "solve_instance",
    "solve_lp_file",
    "stv_block",
    "stv_elimination_orders",
    "write_lp",
    "write_solution",
]
