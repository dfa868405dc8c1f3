"""A small integer linear program container with exact integer checks."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import BoundednessError, UnknownReferenceError, VerificationError

SENSES = ("<=", ">=", "=")


@dataclass
class Variable:
    name: str
    lo: int
    hi: int
    binary: bool = False


@dataclass
class Constraint:
    """``sum(coeffs[v] * x[v]) <sense> rhs`` with integer coefficients."""

    name: str
    coeffs: dict
    sense: str
    rhs: int

    def activity(self, values) -> int:
        return sum(a * values[v] for v, a in self.coeffs.items())

    def satisfied(self, values) -> bool:
        act = self.activity(values)
        if self.sense == "<=":
            return act <= self.rhs
        if self.sense == ">=":
            return act >= self.rhs
        return act == self.rhs


@dataclass
class IlpModel:
    """Bounded integer variables, linear constraints and a minimisation objective.

    Variables are addressed by index; ``index`` maps names to indices.
    ``branch_priority`` lists variable indices in the order a
    branch-and-bound search should fix them; ``meta`` holds free-form
    information about how the model was built (layer count, type count ...).
    """

    name: str = "model"
    variables: list = field(default_factory=list)
    constraints: list = field(default_factory=list)
    objective: dict = field(default_factory=dict)
    index: dict = field(default_factory=dict)
    branch_priority: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def add_var(self, name: str, lo: int, hi: int, binary: bool = False) -> int:
        if name in self.index:
            raise ValueError(f"duplicate variable {name}")
        if lo is None or hi is None:
            raise BoundednessError(f"variable {name} must be bounded")
        lo, hi = int(lo), int(hi)
        if binary and not (0 <= lo <= hi <= 1):
            raise ValueError(f"binary variable {name} has bounds [{lo}, {hi}]")
        idx = len(self.variables)
        self.variables.append(Variable(name, lo, hi, binary))
        self.index[name] = idx
        return idx

    def add_binary(self, name: str) -> int:
        return self.add_var(name, 0, 1, binary=True)

    def var(self, name: str) -> int:
        try:
            return self.index[name]
        except KeyError:
            raise UnknownReferenceError(f"no variable named {name}") from None

    def add_constraint(self, coeffs, sense: str, rhs: int, name: str | None = None) -> Constraint:
        """Add a constraint; ``coeffs`` is a mapping or an iterable of ``(var, coef)``."""
        if sense not in SENSES:
            raise ValueError(f"unknown sense {sense!r}")
        merged = {}
        items = coeffs.items() if isinstance(coeffs, dict) else coeffs
        for v, a in items:
            if int(a) != a:
                raise ValueError("coefficients must be integers")
            merged[v] = merged.get(v, 0) + int(a)
        merged = {v: a for v, a in merged.items() if a}
        con = Constraint(name or f"c{len(self.constraints)}", merged, sense, int(rhs))
        self.constraints.append(con)
        return con

    def set_objective(self, coeffs) -> None:
        items = coeffs.items() if isinstance(coeffs, dict) else coeffs
        obj = {}
        for v, a in items:
            obj[v] = obj.get(v, 0) + int(a)
        self.objective = {v: a for v, a in obj.items() if a}

    def expr_bounds(self, coeffs) -> tuple:
        """Smallest and largest value of a linear expression over the variable box."""
        lo = hi = 0
        items = coeffs.items() if isinstance(coeffs, dict) else coeffs
        for v, a in items:
            var = self.variables[v]
            if a > 0:
                lo += a * var.lo
                hi += a * var.hi
            else:
                lo += a * var.hi
                hi += a * var.lo
        return lo, hi

    def objective_value(self, values) -> int:
        return sum(a * values[v] for v, a in self.objective.items())

    def violations(self, values) -> list:
        """Names of violated bounds and constraints for a full assignment."""
        bad = []
        for v, var in enumerate(self.variables):
            if not var.lo <= values[v] <= var.hi:
                bad.append(f"bound of {var.name}")
        bad.extend(c.name for c in self.constraints if not c.satisfied(values))
        return bad

    def verify(self, values) -> None:
        """Raise :class:`VerificationError` naming the first violated row."""
        bad = self.violations(values)
        if bad:
            raise VerificationError(f"assignment violates {bad[0]} ({len(bad)} violations)", constraint=bad[0])

    def values_by_name(self, values) -> dict:
        return {var.name: values[i] for i, var in enumerate(self.variables)}

    @property
    def num_vars(self) -> int:
        return len(self.variables)


@dataclass
class SolveResult:
    """Outcome of solving an :class:`IlpModel`.

    ``status`` is ``"optimal"``, ``"infeasible"`` or ``"search-limit"``; in
    the last case ``values`` holds the best incumbent, if any.
    """

    status: str
    objective: int | None = None
    values: list | None = None
    stats: dict = field(default_factory=dict)
    model: IlpModel | None = field(default=None, repr=False)

    @property
    def assignment(self) -> dict:
        if self.values is None or self.model is None:
            return {}
        return self.model.values_by_name(self.values)

    def value(self, name: str) -> int:
        return self.values[self.model.var(name)]

    @property
    def feasible(self) -> bool:
        return self.values is not None
