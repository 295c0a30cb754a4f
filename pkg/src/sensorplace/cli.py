"""Command-line front end.

Exit status: 0 success, 1 error (including usage errors), 2 infeasible.
"""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import io as sio
from .bench import load_config, run_scenario
from .errors import InfeasibleError
from .flow import evaluate_placement
from .heuristics import pc_iterative_best_sensor, pq_iterative_best_sensor
from .instance import (add_super_source, cmfnip_gadget, make_grid, make_rng,
                       randomize_capacities, with_uniform_risk)
from .lp import INFEASIBLE
from .milp import build_pc, build_pq, export_lp, relax, solve_exact
from .oracle import oracle_pc, oracle_pq

EXIT_OK, EXIT_ERROR, EXIT_INFEASIBLE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _globals(suppress: bool) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    d = argparse.SUPPRESS if suppress else None
    p.add_argument("--seed", type=int, default=d if suppress else 0,
                   help="master seed (default 0)")
    p.add_argument("--time-budget", type=float, default=d,
                   help="seconds allowed per exact solve")
    p.add_argument("--format", choices=("text", "csv"), default=d if suppress else "text")
    return p


def _sensors(D) -> str:
    return " ".join(map(str, sorted(D)))


def _emit(args, fields: dict) -> None:
    if args.format == "csv":
        print(",".join(fields))
        print(",".join("" if v is None else str(v) for v in fields.values()))
    else:
        for k, v in fields.items():
            print(f"{k} {'' if v is None else v}".rstrip())


def _param(args):
    if args.problem == "pc":
        if args.k is None:
            raise _Usage("pc needs --k")
        return args.k
    if args.q is None:
        raise _Usage("pq needs --q")
    return args.q


class _Usage(Exception):
    pass


def _formulation(args, inst):
    p = _param(args)
    return build_pc(inst, p) if args.problem == "pc" else build_pq(inst, p)


# -- commands ---------------------------------------------------------------------

def cmd_gen(args) -> int:
    inst = make_grid(args.grid)
    lo, hi = args.caps
    inst = randomize_capacities(inst, lo, hi, make_rng(args.seed, "gen-caps").getrandbits(64),
                                integral=not args.real_caps)
    if args.targets or args.sources:
        rng = make_rng(args.seed, "gen-roles")
        T = rng.sample(range(inst.n), args.targets)
        rest = [v for v in range(inst.n) if v not in set(T)]
        S = rng.sample(rest, args.sources)
        inst = inst.replace(targets=frozenset(T), sources=frozenset(S))
    if args.source is not None or args.target is not None:
        inst = inst.replace(
            sources=frozenset(args.source or inst.sources),
            targets=frozenset(args.target or inst.targets),
        )
    if args.super_source:
        r = args.risk if args.risk is not None else Fraction(1)
        inst = add_super_source(with_uniform_risk(inst, r))
    if args.gadget is not None:
        inst = cmfnip_gadget(inst, args.gadget)
    text = sio.format_instance(inst)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_solve(args) -> int:
    inst = sio.read_instance(args.instance)
    res = solve_exact(_formulation(args, inst), time_limit=args.time_budget)
    pl = res.placement
    _emit(args, {
        "problem": args.problem.upper(), "param": _param(args), "status": res.status,
        "objective": res.objective, "value": None if pl is None else pl.value,
        "sensors": None if pl is None else _sensors(pl.sensors),
    })
    return EXIT_INFEASIBLE if res.status == INFEASIBLE else EXIT_OK


def cmd_heur(args) -> int:
    inst = sio.read_instance(args.instance)
    p = _param(args)
    if args.problem == "pc":
        tr = pc_iterative_best_sensor(inst, p, args.seed)
    else:
        tr = pq_iterative_best_sensor(inst, p, args.seed)
    if args.format == "csv":
        _emit(args, {"problem": tr.kind, "param": p, "seed": args.seed,
                     "objective": tr.objective, "value": tr.placement.value,
                     "sensors": _sensors(tr.placement.sensors)})
    else:
        sys.stdout.write(tr.to_log())
    return EXIT_OK


def cmd_eval(args) -> int:
    inst = sio.read_instance(args.instance)
    _emit(args, {"sensors": _sensors(args.sensors), "value": evaluate_placement(inst, args.sensors)})
    return EXIT_OK


def cmd_oracle(args) -> int:
    inst = sio.read_instance(args.instance)
    p = _param(args)
    res = oracle_pc(inst, p) if args.problem == "pc" else oracle_pq(inst, p)
    _emit(args, {
        "problem": args.problem.upper(), "param": p, "status": res.status,
        "objective": res.value, "enumerated": res.count,
        "optima": ";".join(_sensors(D) for D in sorted(res.placements, key=sorted)),
    })
    return EXIT_INFEASIBLE if res.status == INFEASIBLE else EXIT_OK


def cmd_export_lp(args) -> int:
    inst = sio.read_instance(args.instance)
    f = _formulation(args, inst)
    if args.relaxed:
        f = relax(f)
    export_lp(f, args.output)
    return EXIT_OK


def cmd_scenario(args) -> int:
    cfg = load_config(args.config)
    if "seed" in args.explicit:
        cfg.seed = args.seed
    if args.time_budget is not None:
        cfg.time_budget = args.time_budget
    res = run_scenario(cfg)
    text = res.to_csv(times=not args.no_times)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.runs:
        with open(args.runs, "w", encoding="utf-8") as fh:
            fh.write(res.runs_csv())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    g = _globals(suppress=True)
    parser = _Parser(prog="sensorplace", parents=[_globals(suppress=False)],
                     description="Sensor placement against multi-target flooding attacks.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen", parents=[g], help="generate an instance file")
    p.add_argument("--grid", type=int, required=True, help="grid side")
    p.add_argument("--caps", nargs=2, type=Fraction, default=(Fraction(1), Fraction(1)),
                   metavar=("LO", "HI"))
    p.add_argument("--real-caps", action="store_true", help="rational instead of integer capacities")
    p.add_argument("--targets", type=int, default=0, help="number of random targets")
    p.add_argument("--sources", type=int, default=0, help="number of random sources")
    p.add_argument("--source", type=int, action="append", help="explicit source vertex")
    p.add_argument("--target", type=int, action="append", help="explicit target vertex")
    p.add_argument("--super-source", action="store_true")
    p.add_argument("--risk", type=Fraction, help="uniform risk for --super-source")
    p.add_argument("--gadget", type=int, metavar="K", help="apply the arc-interdiction gadget")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    def problem_cmd(name, func, helptext):
        p = sub.add_parser(name, parents=[g], help=helptext)
        p.add_argument("problem", choices=("pq", "pc"))
        p.add_argument("instance")
        p.add_argument("--k", type=int, help="sensor budget (pc)")
        p.add_argument("--q", type=Fraction, help="quality factor (pq)")
        p.set_defaults(func=func)
        return p

    problem_cmd("solve", cmd_solve, "exact solution by branch-and-bound")
    problem_cmd("heur", cmd_heur, "iterative LP-rounding heuristic")
    problem_cmd("oracle", cmd_oracle, "exhaustive enumeration (small instances)")
    p = problem_cmd("export-lp", cmd_export_lp, "write the model in LP format")
    p.add_argument("--relaxed", action="store_true")
    p.add_argument("-o", "--output", required=True)

    p = sub.add_parser("eval", parents=[g], help="max uncontrolled flow of a placement")
    p.add_argument("instance")
    p.add_argument("--sensors", type=int, nargs="*", default=[])
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("scenario", parents=[g], help="run a scenario config, write CSV")
    p.add_argument("--config", required=True)
    p.add_argument("-o", "--output")
    p.add_argument("--runs", help="also write per-run CSV here")
    p.add_argument("--no-times", action="store_true", help="leave the time column empty")
    p.set_defaults(func=cmd_scenario)
    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    args.explicit = {a.lstrip("-").split("=")[0].replace("-", "_") for a in argv if a.startswith("--")}
    try:
        return args.func(args)
    except _Usage as exc:
        parser.error(str(exc))
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
