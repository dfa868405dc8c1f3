"""Command-line interface: ``society-bsg <command> ...``.

Exit codes: 0 success, 1 usage or input error, 2 infeasible or failed,
3 resource limit reached.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import serialize
from .bribery import BsgInstance
from .diffusion import ProcessSpec, explore_async_detailed, run_async, run_generalized, run_sync
from .errors import OracleLimitError, PartialResultError, SearchFailureError, SocietyBsgError
from .election import VotingRule, build_society_graph, scores

EXIT_OK, EXIT_USAGE, EXIT_FAIL, EXIT_LIMIT = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _ints(text: str) -> list:
    return [int(t) for t in text.replace(",", " ").split()]


def _edges(text: str) -> list:
    out = []
    for part in text.replace(" ", "").split(","):
        if part:
            a, b = part.split("-")
            out.append((int(a), int(b)))
    return out


def _emit(text: str, path=None) -> None:
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_instance(args) -> BsgInstance:
    doc = serialize.load_json(args.instance)
    return serialize.instance_from_dict(doc, rule=getattr(args, "rule", None), p=getattr(args, "p", None))


# -- commands ---------------------------------------------------------------

def cmd_generate(args) -> int:
    from .generators import impartial_culture, vc_gadget

    if args.kind == "ic":
        society = impartial_culture(args.m, args.n, args.seed)
        rule = VotingRule.parse(args.rule)
        p = args.p
        if p is None:
            sc = scores(rule, society) if rule.is_scoring else [0] * args.m
            p = min(range(args.m), key=lambda c: (sc[c], c))
        inst = BsgInstance(build_society_graph(society), rule, p)
    else:
        if args.vertices is None or args.k is None:
            print("gadget needs --vertices and --k", file=sys.stderr)
            return EXIT_USAGE
        graph, p = vc_gadget(args.vertices, _edges(args.edges or ""), args.k)
        inst = BsgInstance(graph, VotingRule.parse("plurality"), p, mode="async-optimistic")
    _emit(json.dumps(serialize.instance_to_dict(inst), indent=1) + "\n", args.output)
    return EXIT_OK


def cmd_diffuse(args) -> int:
    doc = serialize.load_json(args.instance)
    g = serialize.graph_from_dict(doc)
    if args.mode == "sync":
        trace = run_sync(g)
    elif args.mode == "async":
        if args.order is None:
            try:
                ex = explore_async_detailed(g, args.max_states)
            except PartialResultError as exc:
                print(f"state limit reached: {exc}", file=sys.stderr)
                return EXIT_LIMIT
            out = {"finals": [list(f) for f in sorted(ex.finals)], "max_depth": ex.max_depth, "states": ex.states}
            _emit(json.dumps(out) + "\n", args.output)
            return EXIT_OK
        trace = run_async(g, _ints(args.order))
    else:
        if args.process:
            spec = serialize.process_from_dict(serialize.load_json(args.process))
        elif "process" in doc:
            spec = serialize.process_from_dict(doc["process"])
        else:
            spec = ProcessSpec()
        if args.rounds is not None:
            spec = ProcessSpec(spec.kind, args.rounds, spec.immobile, spec.immobile_types, spec.table,
                               spec.params, spec.materialize)
        trace = run_generalized(g, spec)
    _emit("".join(line + "\n" for line in serialize.trace_lines(trace)), args.output)
    return EXIT_OK


def _print_plan(cost, plan) -> None:
    print(f"cost {cost}")
    print("plan " + json.dumps(serialize.plan_to_list(plan)))


def cmd_solve(args) -> int:
    from . import ilp

    inst = _load_instance(args)
    if isinstance(inst.mode, ProcessSpec) or inst.mode == "async-pessimistic":
        print(f"no ILP model for mode {inst.mode!r}; use the oracle command", file=sys.stderr)
        return EXIT_USAGE
    if args.backend == "lp-export":
        if args.lp_out is None:
            print("--backend lp-export needs --lp-out", file=sys.stderr)
            return EXIT_USAGE
        if inst.mode == "sync":
            model = ilp.build_sync_bsg_model(inst, args.k, args.layer_skip)
        else:
            model = ilp.build_async_optimistic_model(inst, args.k)
        result = ilp.solve(model, "lp-file-roundtrip", lp_path=args.lp_out, solution=args.solution)
        if result.status == "exported":
            print(f"wrote {args.lp_out} ({model.num_vars} variables, {len(model.constraints)} constraints)")
            return EXIT_OK
        plan = ilp.decode_plan(model, result.values)
    else:
        backend = {"builtin": "builtin-bnb"}.get(args.backend, args.backend)
        result, plan = ilp.solve_instance(inst, backend, k=args.k, node_limit=args.node_limit,
                                          time_limit=args.time_limit)
    if result.status == "infeasible":
        print("infeasible")
        return EXIT_FAIL
    if result.status != "optimal":
        print(f"status {result.status}")
        return EXIT_LIMIT
    _print_plan(result.objective, plan)
    return EXIT_OK


def cmd_heuristic(args) -> int:
    from .heuristics import SaParams, budget_search, greedy_decider, sa_decider, PlanEvaluator

    inst = _load_instance(args)
    if args.method == "greedy":
        decider = greedy_decider(inst)
    else:
        decider = sa_decider(inst, SaParams(args.sa_iters, args.sa_p0, args.seed))
    if args.search:
        try:
            b, plan = budget_search(decider, inst, args.budget_cap)
        except SearchFailureError as exc:
            print(f"failed: {exc}")
            return EXIT_FAIL
        ok = True
    else:
        b = args.budget
        plan, ok = decider(inst, b)
    margin = PlanEvaluator(inst)(plan)
    print(f"success {str(ok).lower()}")
    print(f"budget {b}")
    print(f"margin {margin}")
    _print_plan(plan.cost, plan)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_oracle(args) -> int:
    from .oracle import OracleLimits, async_decide, brute_force_optimal

    inst = _load_instance(args)
    limits = OracleLimits(args.max_cost, args.max_plans, args.max_states, args.time_budget)
    try:
        if args.mode == "sync":
            if inst.mode != "sync":
                inst = BsgInstance(inst.graph, inst.rule, inst.p, inst.cost, inst.budget, "sync")
            res = brute_force_optimal(inst, limits)
            if res.status != "optimal":
                print("infeasible")
                return EXIT_FAIL
            _print_plan(res.cost, res.plan)
            return EXIT_OK
        verdict = async_decide(inst, args.mode, limits)
    except OracleLimitError as exc:
        print(f"limit reached: {exc} (frontier {exc.frontier})")
        return EXIT_LIMIT
    print(f"{args.mode} {str(verdict).lower()}")
    return EXIT_OK


def cmd_experiment(args) -> int:
    from .experiments import CSV_HEADER, ExperimentConfig, run_experiment

    doc = serialize.load_json(args.config)
    if args.output:
        doc["output"] = args.output
    config = ExperimentConfig.from_dict(doc)
    records = run_experiment(config, args.workers)
    if config.output is None:
        print(",".join(CSV_HEADER))
        for r in records:
            print(",".join(str(v) for v in r.row()))
    failed = sum(1 for r in records if not r.success and r.cost != "skipped")
    return EXIT_FAIL if failed else EXIT_OK


def cmd_plot(args) -> int:
    from .experiments import read_records
    from .plotting import plot_scatter

    plot_scatter(read_records(args.csv), args.x, args.y, args.output)
    return EXIT_OK


# -- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="society-bsg", description="Bribery followed by opinion diffusion in society graphs.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("generate", help="write an instance JSON")
    p.add_argument("kind", choices=("ic", "gadget"))
    p.add_argument("--m", type=int, default=3)
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rule", default="borda")
    p.add_argument("--p", type=int, default=None, help="preferred candidate (default: lowest score)")
    p.add_argument("--vertices", type=int)
    p.add_argument("--edges", help="comma separated pairs such as 0-1,1-2")
    p.add_argument("--k", type=int)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("diffuse", help="run diffusion and write a JSON-lines trace")
    p.add_argument("instance")
    p.add_argument("--mode", choices=("sync", "async", "process"), default="sync")
    p.add_argument("--order", help="type ids for asynchronous steps; omit to explore every order")
    p.add_argument("--process", help="process spec JSON (default: the instance's)")
    p.add_argument("--rounds", type=int)
    p.add_argument("--max-states", type=int, default=1_000_000)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_diffuse)

    p = sub.add_parser("solve", help="minimum-cost bribery through the ILP")
    p.add_argument("instance")
    p.add_argument("--backend", choices=("auto", "builtin", "highs", "lp-export"), default="builtin")
    p.add_argument("--lp-out")
    p.add_argument("--solution", help="solution file to import after --backend lp-export")
    p.add_argument("--k", type=int)
    p.add_argument("--layer-skip", action="store_true")
    p.add_argument("--node-limit", type=int)
    p.add_argument("--time-limit", type=float)
    p.add_argument("--rule")
    p.add_argument("--p", type=int)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("heuristic", help="greedy or simulated annealing")
    p.add_argument("instance")
    p.add_argument("--method", choices=("greedy", "sa"), default="greedy")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--budget", type=int)
    g.add_argument("--search", action="store_true")
    p.add_argument("--sa-iters", type=int, default=10000)
    p.add_argument("--sa-p0", type=float, default=0.2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget-cap", type=int)
    p.add_argument("--rule")
    p.add_argument("--p", type=int)
    p.set_defaults(func=cmd_heuristic)

    p = sub.add_parser("oracle", help="brute-force ground truth")
    p.add_argument("instance")
    p.add_argument("--mode", choices=("sync", "optimistic", "pessimistic"), default="sync")
    p.add_argument("--max-cost", type=int)
    p.add_argument("--max-plans", type=int)
    p.add_argument("--max-states", type=int, default=1_000_000)
    p.add_argument("--time-budget", type=float)
    p.add_argument("--rule")
    p.add_argument("--p", type=int)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("experiment", help="run an experiment config and write CSV")
    p.add_argument("config")
    p.add_argument("-o", "--output")
    p.add_argument("--workers", type=int)
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("plot", help="SVG scatter plot of an experiment CSV")
    p.add_argument("csv")
    p.add_argument("--x", default="cost")
    p.add_argument("--y", default="wall_ms")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    if not argv:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (OSError, json.JSONDecodeError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SocietyBsgError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
