"""CPLEX LP export and solution import.

Only the subset needed for pure integer models is written: a comment
header, ``Minimize``, ``Subject To``, ``Bounds``, ``Generals``,
``Binaries`` and ``End``.  Solutions are read from plain text with one
``name value`` pair per line; ``#`` starts a comment and variables that are
not mentioned are taken to be 0.
"""

from __future__ import annotations

import io
import os
import re

from ..errors import LpParseError, VerificationError
from .model import IlpModel, SolveResult

INT_TOLERANCE = 1e-6
_SENSE = {"<=": "<=", ">=": ">=", "=": "="}


def _term(coef: int, name: str, first: bool) -> str:
    sign = "-" if coef < 0 else ("" if first else "+")
    mag = abs(coef)
    body = name if mag == 1 else f"{mag} {name}"
    if first:
        return f"{sign}{body}" if sign else body
    return f"{sign} {body}"


def _expr(model: IlpModel, coeffs: dict) -> str:
    if not coeffs:
        return f"0 {model.variables[0].name}" if model.variables else "0"
    parts = []
    for k, (v, a) in enumerate(coeffs.items()):
        parts.append(_term(a, model.variables[v].name, k == 0))
    return " ".join(parts)


def write_lp(model: IlpModel) -> str:
    """The model as LP text (deterministic for a given model)."""
    out = io.StringIO()
    out.write(f"\\ {model.name}: {model.num_vars} variables, {len(model.constraints)} constraints\n")
    out.write("Minimize\n")
    out.write(f" obj: {_expr(model, model.objective)}\n" if model.objective else " obj:\n")
    out.write("Subject To\n")
    for k, con in enumerate(model.constraints):
        out.write(f" c{k}: {_expr(model, con.coeffs)} {_SENSE[con.sense]} {con.rhs}\n")
    out.write("Bounds\n")
    for var in model.variables:
        if var.binary and (var.lo, var.hi) == (0, 1):
            continue
        if var.lo == var.hi:
            out.write(f" {var.name} = {var.lo}\n")
        else:
            out.write(f" {var.lo} <= {var.name} <= {var.hi}\n")
    out.write("Generals\n")
    gens = [v.name for v in model.variables if not v.binary]
    for k in range(0, len(gens), 8):
        out.write(" " + " ".join(gens[k:k + 8]) + "\n")
    out.write("Binaries\n")
    bins = [v.name for v in model.variables if v.binary]
    for k in range(0, len(bins), 8):
        out.write(" " + " ".join(bins[k:k + 8]) + "\n")
    out.write("End\n")
    return out.getvalue()


def export_lp(model: IlpModel, sink) -> None:
    """Write the model to a path or a text stream."""
    text = write_lp(model)
    if isinstance(sink, (str, os.PathLike)):
        with open(sink, "w", encoding="ascii") as fh:
            fh.write(text)
    else:
        sink.write(text)


def parse_solution(model: IlpModel, text: str) -> list:
    """Parse ``name value`` lines into a full value vector."""
    values = [0] * model.num_vars
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise LpParseError(f"expected 'name value', got {raw.strip()!r}", lineno)
        name, val = parts
        if name not in model.index:
            raise LpParseError(f"unknown variable {name!r}", lineno)
        try:
            num = float(val)
        except ValueError:
            raise LpParseError(f"value {val!r} is not a number", lineno) from None
        r = round(num)
        if abs(num - r) > INT_TOLERANCE:
            raise LpParseError(f"value {val} of {name} is not integral", lineno)
        values[model.index[name]] = int(r)
    return values


def import_solution(model: IlpModel, source) -> SolveResult:
    """Read a solution file, verify it against every row and wrap it in a result.

    Raises:
        LpParseError: malformed line (message carries the line number).
        VerificationError: the assignment violates a bound or constraint.
    """
    if isinstance(source, (str, os.PathLike)) and os.path.exists(source):
        with open(source, encoding="utf-8") as fh:
            text = fh.read()
    elif hasattr(source, "read"):
        text = source.read()
    else:
        text = str(source)
    values = parse_solution(model, text)
    bad = model.violations(values)
    if bad:
        raise VerificationError(f"solution violates {bad[0]}", constraint=bad[0])
    return SolveResult("optimal", model.objective_value(values), values,
                       {"backend": "lp-file-roundtrip"}, model)


def write_solution(model: IlpModel, values) -> str:
    """Inverse of :func:`parse_solution` (non-zero entries only)."""
    lines = ["# name value"]
    for var, val in zip(model.variables, values):
        if val:
            lines.append(f"{var.name} {val}")
    return "\n".join(lines) + "\n"


_LP_TERM = re.compile(r"([+-]?)\s*(\d+)?\s*([A-Za-z_][\w.]*)")


def read_lp(text: str) -> IlpModel:
    """Parse the LP subset produced by :func:`write_lp` back into a model."""
    model = IlpModel()
    section = None
    objective = []
    rows = []
    bounds = {}
    kinds = {}
    order = []

    def note(name):
        if name not in kinds:
            kinds[name] = None
            order.append(name)

    def parse_expr(expr, lineno):
        terms = []
        expr = expr.strip()
        if expr in ("", "0"):
            return terms
        pos = 0
        while pos < len(expr):
            m = _LP_TERM.match(expr, pos)
            if not m:
                raise LpParseError(f"cannot parse expression near {expr[pos:]!r}", lineno)
            sign, coef, name = m.groups()
            c = int(coef) if coef else 1
            terms.append((name, -c if sign == "-" else c))
            note(name)
            pos = m.end()
            while pos < len(expr) and expr[pos] == " ":
                pos += 1
        return terms

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("\\"):
            continue
        low = line.lower()
        if low in ("minimize", "subject to", "bounds", "generals", "binaries", "end"):
            section = low
            continue
        if section == "minimize":
            objective = parse_expr(line.split(":", 1)[1], lineno)
        elif section == "subject to":
            name, rest = line.split(":", 1)
            m = re.match(r"(.*?)(<=|>=|=)\s*(-?\d+)\s*$", rest)
            if not m:
                raise LpParseError(f"cannot parse constraint {line!r}", lineno)
            rows.append((name.strip(), parse_expr(m.group(1), lineno), m.group(2), int(m.group(3))))
        elif section == "bounds":
            m = re.match(r"(-?\d+)\s*<=\s*(\S+)\s*<=\s*(-?\d+)$", line)
            if m:
                bounds[m.group(2)] = (int(m.group(1)), int(m.group(3)))
            else:
                m = re.match(r"(\S+)\s*=\s*(-?\d+)$", line)
                if not m:
                    raise LpParseError(f"cannot parse bound {line!r}", lineno)
                bounds[m.group(1)] = (int(m.group(2)), int(m.group(2)))
            note(m.group(2) if m.lastindex == 3 else m.group(1))
        elif section in ("generals", "binaries"):
            for name in line.split():
                note(name)
                kinds[name] = section
        else:
            raise LpParseError(f"text outside any section: {line!r}", lineno)
    for name in order:
        binary = kinds[name] == "binaries"
        lo, hi = bounds.get(name, (0, 1) if binary else (None, None))
        if lo is None:
            raise LpParseError(f"variable {name} has no bounds")
        model.add_var(name, lo, hi, binary)
    model.set_objective([(model.index[n], c) for n, c in objective])
    for name, terms, sense, rhs in rows:
        model.add_constraint([(model.index[n], c) for n, c in terms], sense, rhs, name)
    return model

