"""Experiment harness: generate impartial-culture elections and compare solvers.

Every instance is solved by each enabled method (exact ILP, greedy and
simulated annealing wrapped in budget search, brute-force oracle).  One
CSV row is written per (instance, method), in that order, and flushed as
soon as the instance is complete, so an interrupted run keeps all finished
instances and can be resumed.
"""

from __future__ import annotations

import csv
import hashlib
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

from .bribery import BsgInstance
from .election import VotingRule, build_society_graph, scores
from .errors import OracleLimitError, SearchFailureError
from .generators import impartial_culture
from .heuristics import SaParams, budget_search, greedy_decider, sa_decider
from .oracle import OracleLimits, brute_force_optimal
from .serialize import plan_to_list

CSV_HEADER = ("instance", "seed", "method", "cost", "success", "wall_ms", "plan_digest")
METHODS = ("ilp", "greedy", "sa", "oracle")
THREADS_ENV = "SOCIETY_BSG_THREADS"

# markers written to the cost column when a method produced no cost
SKIPPED = "skipped"
LIMIT = "limit"
FAILED = "failed"


@dataclass(frozen=True)
class ExperimentConfig:
    """Settings of one experiment.

    Attributes:
        m, n: candidates and voters per election.
        count: number of elections.
        rule: voting rule name (``borda``, ``plurality``, ``scoring:...``).
        seed: base seed; election ``i`` uses ``seed + i``.
        methods: subset of ``METHODS``, run in the given order.
        p: preferred candidate; ``None`` picks the candidate with the lowest
            score in the undiffused election (lowest index among ties).
        ilp_backend: ``auto``, ``builtin-bnb`` or ``highs``.
        ilp_time_limit: seconds per ILP solve (``None`` for no limit).
        sa_iterations, sa_p0: simulated annealing settings.
        budget_cap: largest budget tried by the budget search.
        oracle_max_n, oracle_max_m: the oracle is skipped above these sizes.
        oracle_time_budget: seconds per oracle run.
        output: CSV path (``None`` keeps records in memory only).
    """

    m: int = 3
    n: int = 1000
    count: int = 5
    rule: str = "borda"
    seed: int = 0
    methods: tuple = ("ilp", "greedy")
    p: int | None = None
    ilp_backend: str = "auto"
    ilp_time_limit: float | None = None
    sa_iterations: int = 10000
    sa_p0: float = 0.2
    budget_cap: int | None = None
    oracle_max_n: int = 50
    oracle_max_m: int = 3
    oracle_time_budget: float | None = 60.0
    output: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "methods", tuple(self.methods))
        bad = [x for x in self.methods if x not in METHODS]
        if bad:
            raise ValueError(f"unknown methods {bad}; expected a subset of {METHODS}")
        if self.m not in (2, 3, 4):
            raise ValueError("experiments support m in {2, 3, 4}")
        if self.n < 1 or self.count < 0:
            raise ValueError("need n >= 1 and count >= 0")
        if self.p is not None and not 0 <= self.p < self.m:
            raise ValueError(f"p must be a candidate index below {self.m}")
        VotingRule.parse(self.rule)

    @classmethod
    def from_dict(cls, doc: dict) -> "ExperimentConfig":
        unknown = sorted(set(doc) - set(cls.__dataclass_fields__))
        if unknown:
            raise ValueError(f"unknown experiment settings {unknown}")
        return cls(**doc)

    def to_dict(self) -> dict:
        doc = asdict(self)
        doc["methods"] = list(self.methods)
        return doc


@dataclass(frozen=True)
class ExperimentRecord:
    """One CSV row.  ``cost`` is an int or one of the markers ``skipped``, ``limit``, ``failed``."""

    instance: int
    seed: int
    method: str
    cost: object
    success: bool
    wall_ms: float
    plan_digest: str

    def row(self) -> list:
        return [self.instance, self.seed, self.method, self.cost, int(self.success),
                f"{self.wall_ms:.3f}", self.plan_digest]

    @classmethod
    def from_row(cls, row: dict) -> "ExperimentRecord":
        cost = row["cost"]
        try:
            cost = int(cost)
        except ValueError:
            pass
        return cls(int(row["instance"]), int(row["seed"]), row["method"], cost,
                   row["success"] in ("1", "True", "true"), float(row["wall_ms"]), row["plan_digest"])


def plan_digest(plan) -> str:
    if plan is None:
        return ""
    text = json.dumps(plan_to_list(plan), separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def make_instance(config: ExperimentConfig, index: int) -> BsgInstance:
    """Election ``index`` of the experiment, over all ``m!`` types with swap-1 arcs."""
    society = impartial_culture(config.m, config.n, config.seed + index)
    rule = VotingRule.parse(config.rule)
    p = config.p
    if p is None:
        sc = scores(rule, society)
        p = min(range(config.m), key=lambda c: (sc[c], c))
    return BsgInstance(build_society_graph(society), rule, p)


def _run_method(config: ExperimentConfig, inst: BsgInstance, method: str):
    """``(cost, success, plan)`` for one method."""
    if method == "ilp":
        from .ilp import solve_instance

        result, plan = solve_instance(inst, config.ilp_backend, time_limit=config.ilp_time_limit)
        if result.status == "optimal":
            return result.objective, True, plan
        return (LIMIT if result.status == "search-limit" else FAILED), False, None
    if method in ("greedy", "sa"):
        if method == "greedy":
            decider = greedy_decider(inst)
        else:
            decider = sa_decider(inst, SaParams(config.sa_iterations, config.sa_p0, config.seed))
        try:
            b, plan = budget_search(decider, inst, config.budget_cap)
        except SearchFailureError:
            return FAILED, False, None
        return b, True, plan
    if method == "oracle":
        if inst.n > config.oracle_max_n or inst.m > config.oracle_max_m:
            return SKIPPED, False, None
        try:
            res = brute_force_optimal(inst, OracleLimits(time_budget=config.oracle_time_budget))
        except OracleLimitError:
            return LIMIT, False, None
        if res.status != "optimal":
            return FAILED, False, None
        return res.cost, True, res.plan
    raise ValueError(f"unknown method {method!r}")


def run_instance(config: ExperimentConfig, index: int) -> list:
    """Records of every enabled method on election ``index``."""
    inst = make_instance(config, index)
    out = []
    for method in config.methods:
        start = time.perf_counter()
        try:
            cost, ok, plan = _run_method(config, inst, method)
        except Exception:  # a failing method must not abort the run
            cost, ok, plan = FAILED, False, None
        ms = (time.perf_counter() - start) * 1000
        out.append(ExperimentRecord(index, config.seed + index, method, cost, ok, ms, plan_digest(plan)))
    return out


def read_records(path) -> list:
    with open(path, newline="") as fh:
        return [ExperimentRecord.from_row(r) for r in csv.DictReader(fh)]


def _open_output(path, config):
    """Existing records per instance (for resuming) and an append handle."""
    done = {}
    if os.path.exists(path) and os.path.getsize(path):
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if tuple(header or ()) != CSV_HEADER:
                raise ValueError(f"{path} does not hold experiment records")
        for rec in read_records(path):
            done.setdefault(rec.instance, []).append(rec)
        done = {i: recs for i, recs in done.items()
                if tuple(r.method for r in recs) == config.methods}
        fh = open(path, "a", newline="")
    else:
        fh = open(path, "w", newline="")
        csv.writer(fh).writerow(CSV_HEADER)
        fh.flush()
    return done, fh


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def run_experiment(config: ExperimentConfig, workers: int | None = None) -> list:
    """Run every enabled method on every election.

    Rows are appended to ``config.output`` (if set) one instance at a time,
    ordered by instance then method regardless of completion order.
    Instances already complete in an existing output file are not rerun.
    The pool size is ``workers`` or the ``SOCIETY_BSG_THREADS`` variable.
    """
    workers = workers or worker_count()
    done, fh = ({}, None) if config.output is None else _open_output(config.output, config)
    records = []
    try:
        todo = [i for i in range(config.count) if i not in done]
        if workers > 1 and len(todo) > 1:
            pool = ProcessPoolExecutor(max_workers=workers)
            futures = {i: pool.submit(run_instance, config, i) for i in todo}
            fetch = lambda i: futures[i].result()  # noqa: E731
        else:
            pool = None
            fetch = lambda i: run_instance(config, i)  # noqa: E731
        try:
            for i in range(config.count):
                if i in done:
                    records.extend(done[i])
                    continue
                recs = fetch(i)
                records.extend(recs)
                if fh is not None:
                    writer = csv.writer(fh)
                    for r in recs:
                        writer.writerow(r.row())
                    fh.flush()
                    os.fsync(fh.fileno())
        finally:
            if pool is not None:
                pool.shutdown(cancel_futures=True)
    finally:
        if fh is not None:
            fh.close()
    return records
