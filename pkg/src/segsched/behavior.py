"""
Online runtime behaviors: sampling, treated/untreated online runs,
anomaly checking, and randomized search for anomaly witnesses.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field

from .model import SegKey, TaskSet, expand_jobs
from .simcore import Schedule, simulate
from .treatments import NominalPlan

MODES = ("untreated", "enforce", "preference")


@dataclass(frozen=True)
class BehaviorProfile:
    """Lower-bound fractions for sampled executions and suspensions."""

    exec_floor: float = 0.5
    susp_floor: float = 0.5

    def __post_init__(self):
        if not (0 < self.exec_floor <= 1 and 0 < self.susp_floor <= 1):
            raise ValueError("profile floors must lie in (0, 1]")


@dataclass
class RuntimeBehavior:
    """Per-segment actual execution and preceding suspension (or jitter).

    Executions are in [1, C]; suspensions in [1, S] for later segments
    and in [0, jitter bound] for a job's first segment.
    """

    draws: dict[SegKey, tuple[int, int]]
    seed: int | None = None

    def violations(self, ts: TaskSet, horizon: int) -> list[str]:
        bad = []
        for inst in expand_jobs(ts, horizon):
            if inst.key not in self.draws:
                bad.append(f"{inst.key}: draw missing")
                continue
            cbar, sbar = self.draws[inst.key]
            if not (1 <= cbar <= inst.wcet):
                bad.append(f"{inst.key}: execution {cbar} outside [1, {inst.wcet}]")
            if inst.seg_index == 0:
                if not (0 <= sbar <= inst.max_susp_before):
                    bad.append(f"{inst.key}: jitter {sbar} outside [0, {inst.max_susp_before}]")
            elif not (1 <= sbar <= inst.max_susp_before):
                bad.append(f"{inst.key}: suspension {sbar} outside [1, {inst.max_susp_before}]")
        return bad


@dataclass
class AnomalyReport:
    violations: list[tuple[SegKey, int, int]] = field(default_factory=list)

    @property
    def anomaly_free(self) -> bool:
        return not self.violations


def sample_behavior(ts: TaskSet, horizon: int, seed: int,
                    profile: BehaviorProfile = BehaviorProfile()) -> RuntimeBehavior:
    """Uniform draws, deterministic in ``seed``.

    C ~ U[max(1, ceil(floor_frac * C)), C]; same for suspensions of
    later segments; a first segment's jitter is U[0, bound].
    """
    rng = random.Random(seed)
    draws: dict[SegKey, tuple[int, int]] = {}
    for inst in expand_jobs(ts, horizon):
        c_lo = max(1, math.ceil(profile.exec_floor * inst.wcet))
        cbar = rng.randint(c_lo, inst.wcet)
        if inst.seg_index == 0:
            sbar = rng.randint(0, inst.max_susp_before)
        else:
            s_lo = max(1, math.ceil(profile.susp_floor * inst.max_susp_before))
            sbar = rng.randint(s_lo, inst.max_susp_before)
        draws[inst.key] = (cbar, sbar)
    return RuntimeBehavior(draws=draws, seed=seed)


def worst_case_behavior(ts: TaskSet, horizon: int) -> RuntimeBehavior:
    draws = {i.key: (i.wcet, i.max_susp_before) for i in expand_jobs(ts, horizon)}
    return RuntimeBehavior(draws=draws)


def run_online(plan: NominalPlan, b: RuntimeBehavior, mode: str) -> Schedule:
    """Online schedule under a sampled behavior.

    untreated  - original priority order, natural releases
    enforce    - original order, releases floored at the nominal ones
    preference - order ranked by nominal finish, natural releases
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    expected = {i.key for i in expand_jobs(plan.taskset, plan.horizon)}
    if set(b.draws) < expected:
        raise ValueError("behavior does not cover the plan's segment instances")
    if mode == "enforce":
        return simulate(plan.taskset, plan.order, plan.horizon, draws=b.draws,
                        release_floors=plan.release_floors)
    order = plan.preference if mode == "preference" else plan.order
    return simulate(plan.taskset, order, plan.horizon, draws=b.draws)


def check_anomaly_free(plan: NominalPlan, online: Schedule) -> AnomalyReport:
    """A timing anomaly is any segment finishing later online than in the
    nominal schedule."""
    report = AnomalyReport()
    for inst in plan.nominal.instances:
        nom = plan.nominal.records[inst.key]
        onl = online.records[inst.key]
        if not nom.complete:
            continue
        if not onl.complete or onl.finish > nom.finish:
            onl_finish = onl.finish if onl.complete else plan.horizon
            report.violations.append((inst.key, nom.finish, onl_finish))
    report.violations.sort()
    return report


def anomaly_search(plan: NominalPlan, trials: int, seed: int,
                   profile: BehaviorProfile = BehaviorProfile()
                   ) -> tuple[RuntimeBehavior, AnomalyReport] | None:
    """Run untreated online schedules for sampled behaviors and return
    the lowest-seed-index witness with a violation, or None."""
    for i in range(trials):
        b = sample_behavior(plan.taskset, plan.horizon, seed + i, profile)
        report = check_anomaly_free(plan, run_online(plan, b, "untreated"))
        if not report.anomaly_free:
            return b, report
    return None


# --- JSON ------------------------------------------------------------------

def behavior_to_dict(b: RuntimeBehavior) -> dict:
    return {
        "seed": b.seed,
        "draws": [[*key, cbar, sbar] for key, (cbar, sbar) in sorted(b.draws.items())],
    }


def behavior_from_dict(d: dict) -> RuntimeBehavior:
    return RuntimeBehavior(
        draws={SegKey(t, j, s): (c, sp) for t, j, s, c, sp in d["draws"]},
        seed=d.get("seed"),
    )


def witness_to_dict(b: RuntimeBehavior, report: AnomalyReport) -> dict:
    return {
        "behavior": behavior_to_dict(b),
        "violations": [
            {"task": k.task_id, "job": k.job_index, "seg": k.seg_index,
             "nominal_finish": nf, "online_finish": of}
            for k, nf, of in report.violations
        ],
    }


def save_witness(b: RuntimeBehavior, report: AnomalyReport, path) -> None:
    with open(path, "w") as fh:
        json.dump(witness_to_dict(b, report), fh, indent=2)
