"""Command-line interface.

Subcommands: gen, plan, simulate, check, fuzz, sweep, demo.
Figure rendering lives in the companion `plotkit` package.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import behavior as bhv
from . import exper, scenarios, simcore, synth, treatments
from .model import load_taskset, save_taskset, taskset_to_dict, validate_taskset

EXIT_VIOLATION = 2


def _print_json(obj, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            json.dump(obj, fh, indent=2)
    else:
        json.dump(obj, sys.stdout, indent=2)
        print()


def cmd_gen(args) -> int:
    cfg = synth.GenConfig(
        total_utilization=args.utilization,
        n_tasks=args.tasks,
        segments_per_task=args.segments,
        suspension_class=args.suspension,
        jitter_class=args.jitter,
        period_menu=tuple(args.periods) if args.periods else synth.DEFAULT_PERIOD_MENU,
        tick_scale=args.tick_scale,
    )
    ts = synth.generate_taskset(cfg, args.seed)
    if args.out:
        save_taskset(ts, args.out)
    else:
        _print_json(taskset_to_dict(ts), None)
    return 0


def cmd_plan(args) -> int:
    ts = load_taskset(args.taskset)
    problems = validate_taskset(ts)
    if problems:
        for p in problems:
            print(f"invalid task set: {p}", file=sys.stderr)
        return 1
    plan = treatments.build_nominal(ts, args.policy.upper())
    if args.out:
        treatments.save_plan(plan, args.out)
    print(f"policy={plan.policy} horizon={plan.horizon} feasible={plan.feasible}")
    return 0 if plan.feasible else EXIT_VIOLATION


def _load_behavior(args, plan) -> bhv.RuntimeBehavior:
    if args.behavior:
        with open(args.behavior) as fh:
            d = json.load(fh)
        return bhv.behavior_from_dict(d.get("behavior", d))
    profile = bhv.BehaviorProfile(exec_floor=args.exec_floor, susp_floor=args.susp_floor)
    return bhv.sample_behavior(plan.taskset, plan.horizon, args.seed, profile)


def cmd_simulate(args) -> int:
    plan = treatments.load_plan(args.plan)
    b = _load_behavior(args, plan)
    sched = bhv.run_online(plan, b, args.mode)
    _print_json(simcore.schedule_to_rows(sched), args.out)
    return 0


def cmd_check(args) -> int:
    plan = treatments.load_plan(args.plan)
    b = _load_behavior(args, plan)
    sched = bhv.run_online(plan, b, args.mode)
    report = bhv.check_anomaly_free(plan, sched)
    _print_json(bhv.witness_to_dict(b, report), args.out)
    return 0 if report.anomaly_free else EXIT_VIOLATION


def cmd_fuzz(args) -> int:
    ts = load_taskset(args.taskset)
    plan = treatments.build_nominal(ts, args.policy.upper())
    if not plan.feasible:
        print("nominal plan infeasible; nothing to fuzz", file=sys.stderr)
        return 1
    profile = bhv.BehaviorProfile(exec_floor=args.exec_floor, susp_floor=args.susp_floor)
    hit = bhv.anomaly_search(plan, args.trials, args.seed, profile)
    if hit is None:
        print(f"no anomaly witness in {args.trials} trials")
        return 0
    witness, report = hit
    _print_json(bhv.witness_to_dict(witness, report), args.out)
    print(f"witness found (seed {witness.seed}): {len(report.violations)} violations")
    return EXIT_VIOLATION


def cmd_sweep(args) -> int:
    template = synth.GenConfig(
        total_utilization=0.0,
        n_tasks=args.tasks,
        segments_per_task=args.segments,
        suspension_class=args.suspension,
        jitter_class=args.jitter,
        period_menu=tuple(args.periods) if args.periods else synth.DEFAULT_PERIOD_MENU,
        tick_scale=args.tick_scale,
    )
    grid = tuple(args.grid) if args.grid else exper.DEFAULT_GRID
    spec = exper.SweepSpec(template=template, grid=grid,
                           sets_per_point=args.sets,
                           algorithms=tuple(args.algorithms),
                           master_seed=args.seed)
    res = exper.acceptance_curve(spec, workers=args.jobs)
    exper.emit_results(res, args.format, args.out)
    print(f"wrote {len(res.rows)} rows to {args.out}")
    return 0


def cmd_demo(args) -> int:
    res = scenarios.SCENARIOS[args.figure]()
    for name, sched in res.schedules.items():
        print(f"--- {name}")
        for row in simcore.schedule_to_rows(sched):
            print(f"  task {row['task']} job {row['job']} seg {row['seg']}: "
                  f"release {row['release']} finish {row['finish']} "
                  f"intervals {row['intervals']}")
    if res.failures:
        for f in res.failures:
            print(f"FAIL {f}", file=sys.stderr)
        return 1
    print("all expectations hold")
    if args.out:
        _print_json({name: simcore.schedule_to_rows(s)
                     for name, s in res.schedules.items()}, args.out)
    return 0


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING)
    p = argparse.ArgumentParser(prog="segsched")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="synthesize a task set")
    g.add_argument("--utilization", type=float, required=True)
    g.add_argument("--tasks", type=int, default=10)
    g.add_argument("--segments", type=int, default=5, choices=synth.SEGMENT_CHOICES)
    g.add_argument("--suspension", default="medium", choices=sorted(synth.SUSPENSION_CLASSES))
    g.add_argument("--jitter", default="none", choices=sorted(synth.JITTER_CLASSES))
    g.add_argument("--periods", type=int, nargs="+")
    g.add_argument("--tick-scale", type=int, default=1000)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    pl = sub.add_parser("plan", help="build the nominal plan and treatments")
    pl.add_argument("--taskset", required=True)
    pl.add_argument("--policy", default="edf", choices=["edf", "rm"])
    pl.add_argument("--out")
    pl.set_defaults(func=cmd_plan)

    def _online_args(sp):
        sp.add_argument("--plan", required=True)
        sp.add_argument("--mode", default="untreated", choices=bhv.MODES)
        sp.add_argument("--behavior", help="JSON behavior file to replay")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--exec-floor", type=float, default=0.5, dest="exec_floor")
        sp.add_argument("--susp-floor", type=float, default=0.5, dest="susp_floor")
        sp.add_argument("--out")

    si = sub.add_parser("simulate", help="run an online schedule")
    _online_args(si)
    si.set_defaults(func=cmd_simulate)

    ch = sub.add_parser("check", help="run online and report anomalies")
    _online_args(ch)
    ch.set_defaults(func=cmd_check)

    fz = sub.add_parser("fuzz", help="search for an anomaly witness")
    fz.add_argument("--taskset", required=True)
    fz.add_argument("--policy", default="edf", choices=["edf", "rm"])
    fz.add_argument("--trials", type=int, default=1000)
    fz.add_argument("--seed", type=int, default=0)
    fz.add_argument("--exec-floor", type=float, default=0.5, dest="exec_floor")
    fz.add_argument("--susp-floor", type=float, default=0.5, dest="susp_floor")
    fz.add_argument("--out")
    fz.set_defaults(func=cmd_fuzz)

    sw = sub.add_parser("sweep", help="acceptance-ratio sweep")
    sw.add_argument("--grid", type=float, nargs="+")
    sw.add_argument("--sets", type=int, default=20)
    sw.add_argument("--algorithms", nargs="+", default=list(exper.ALGORITHMS),
                    choices=exper.ALGORITHMS)
    sw.add_argument("--tasks", type=int, default=10)
    sw.add_argument("--segments", type=int, default=5, choices=synth.SEGMENT_CHOICES)
    sw.add_argument("--suspension", default="medium", choices=sorted(synth.SUSPENSION_CLASSES))
    sw.add_argument("--jitter", default="none", choices=sorted(synth.JITTER_CLASSES))
    sw.add_argument("--periods", type=int, nargs="+")
    sw.add_argument("--tick-scale", type=int, default=1000)
    sw.add_argument("--seed", type=int, default=0)
    sw.add_argument("--jobs", type=int, default=1)
    sw.add_argument("--format", default="csv", choices=["csv", "json"])
    sw.add_argument("--out", required=True)
    sw.set_defaults(func=cmd_sweep)

    dm = sub.add_parser("demo", help="run a built-in regression scenario")
    dm.add_argument("--figure", required=True, choices=sorted(scenarios.SCENARIOS))
    dm.add_argument("--out")
    dm.set_defaults(func=cmd_demo)

    args = p.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
