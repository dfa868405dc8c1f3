"""Optional HiGHS bridge for the LP-file round trip.

``highspy`` is imported lazily so the rest of the package works without it.
"""

from __future__ import annotations


def highs_available() -> bool:
    try:
        import highspy  # noqa: F401
    except ImportError:
        return False
    return True


def solve_lp_file(lp_path, time_limit: float | None = None) -> str | None:
    """Solve an LP file with HiGHS.

    Returns:
        The solution as ``name value`` lines (readable by
        :func:`~society_bsg.ilp.lpfile.parse_solution`), or ``None`` when
        HiGHS proves the model infeasible.

    Raises:
        ImportError: ``highspy`` is not installed.
        RuntimeError: HiGHS stopped without an optimal or infeasible verdict.
    """
    import highspy

    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    if time_limit is not None:
        h.setOptionValue("time_limit", float(time_limit))
    h.readModel(str(lp_path))
    h.run()
    status = h.getModelStatus()
    if status == highspy.HighsModelStatus.kInfeasible:
        return None
    if status != highspy.HighsModelStatus.kOptimal:
        raise RuntimeError(f"HiGHS finished with status {h.modelStatusToString(status)}")
    names = h.getLp().col_names_
    values = h.getSolution().col_value
    return "".join(f"{name} {value!r}\n" for name, value in zip(names, values))
