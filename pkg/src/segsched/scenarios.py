"""
Built-in regression scenarios for the `demo` subcommand.

Each scenario is a small hand-crafted task set with a fixed runtime
draw, encoded at 10 ticks per model time unit so fractional parameters
stay exact.  Expectations are expressed in ticks and verified by
re-simulation; the same scenarios back the acceptance tests.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .behavior import RuntimeBehavior, check_anomaly_free, run_online, worst_case_behavior
from .model import SegKey, SuspendingTask, TaskSet
from .simcore import Schedule, task_level_order
from .treatments import NominalPlan, build_nominal

SCALE = 10


def _ts(*tasks: SuspendingTask) -> TaskSet:
    return TaskSet(tick_scale=SCALE, tasks=tuple(tasks))


def _draws(plan: NominalPlan, overrides: dict[SegKey, tuple[int, int]]) -> RuntimeBehavior:
    b = worst_case_behavior(plan.taskset, plan.horizon)
    b.draws.update(overrides)
    return b


@dataclass
class ScenarioResult:
    plan: NominalPlan
    schedules: dict[str, Schedule] = field(default_factory=dict)
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def expect(self, cond: bool, msg: str) -> None:
        if not cond:
            self.failures.append(msg)

    def expect_intervals(self, mode: str, key: SegKey, want: list[tuple[int, int]]) -> None:
        got = self.schedules[mode].records[key].intervals
        self.expect(got == want, f"{mode} {key}: intervals {got}, expected {want}")

    def expect_finish(self, mode: str, key: SegKey, want: int) -> None:
        got = self.schedules[mode].records[key].finish
        self.expect(got == want, f"{mode} {key}: finish {got}, expected {want}")


def nominal_two_task() -> ScenarioResult:
    """Two-task worst-case schedule under RM over a 26-unit window."""
    ts = _ts(
        SuspendingTask(id=1, period=100, deadline=100, execs=(30, 20), susps=(20,)),
        SuspendingTask(id=2, period=110, deadline=110, execs=(20, 20), susps=(20,)),
    )
    plan = build_nominal(ts, "RM", horizon=260)
    res = ScenarioResult(plan=plan, schedules={"nominal": plan.nominal})
    expected = {
        SegKey(1, 0, 0): [(0, 30)], SegKey(1, 0, 1): [(50, 70)],
        SegKey(2, 0, 0): [(30, 50)], SegKey(2, 0, 1): [(70, 90)],
        SegKey(1, 1, 0): [(100, 130)], SegKey(1, 1, 1): [(150, 170)],
        SegKey(2, 1, 0): [(130, 150)], SegKey(2, 1, 1): [(170, 190)],
        SegKey(1, 2, 0): [(200, 230)],
    }
    for key, want in expected.items():
        res.expect_intervals("nominal", key, want)
    finishes = sorted(plan.nominal.records[k].finish for k in expected)
    res.expect(finishes == [30, 50, 70, 90, 130, 150, 170, 190, 230],
               f"finishes {finishes}")
    return res


def suspension_anomaly() -> ScenarioResult:
    """A shortened suspension lets a higher-priority segment preempt and
    push the other task past its deadline; both treatments prevent it."""
    ts = _ts(
        SuspendingTask(id=1, period=100, deadline=100, execs=(30, 20), susps=(20,)),
        SuspendingTask(id=2, period=100, deadline=100, execs=(20, 20), susps=(20,)),
    )
    plan = build_nominal(ts, "RM")
    b = _draws(plan, {SegKey(1, 0, 1): (20, 15)})  # suspension 1.5 instead of 2
    res = ScenarioResult(plan=plan)
    for mode in ("untreated", "enforce", "preference"):
        res.schedules[mode] = run_online(plan, b, mode)
    t2_last = SegKey(2, 0, 1)
    res.expect_intervals("untreated", SegKey(2, 0, 0), [(30, 45), (65, 70)])
    res.expect_intervals("untreated", t2_last, [(90, 110)])
    res.expect_finish("untreated", t2_last, 110)  # deadline 100 missed
    for key, rec in plan.nominal.records.items():
        res.expect(res.schedules["enforce"].records[key].finish == rec.finish,
                   f"enforce {key}: finish differs from nominal")
    res.expect_finish("enforce", t2_last, 90)
    pref_finish = res.schedules["preference"].records[t2_last].finish
    res.expect(pref_finish <= 90, f"preference finish {pref_finish} > 90")
    return res


def jitter_anomaly() -> ScenarioResult:
    """A smaller actual release jitter causes a deadline miss untreated;
    both treatments keep every finish at or below nominal."""
    ts = _ts(
        SuspendingTask(id=1, period=100, deadline=100, execs=(10, 30), susps=(20,),
                       jitter_max=20),
        SuspendingTask(id=2, period=100, deadline=100, execs=(30, 16), susps=(30,),
                       jitter_max=10),
    )
    plan = build_nominal(ts, "RM")
    res = ScenarioResult(plan=plan)
    t2_last = SegKey(2, 0, 1)
    res.expect(plan.feasible, "nominal plan should be feasible")
    res.schedules["nominal"] = plan.nominal
    res.expect(plan.nominal.records[t2_last].finish == 96,
               f"nominal finish {plan.nominal.records[t2_last].finish}, expected 96")
    # actual jitter of task 1 drops to 1; task 2's last segment runs 1.0
    b = _draws(plan, {SegKey(1, 0, 0): (10, 10), SegKey(2, 0, 1): (10, 30)})
    for mode in ("untreated", "enforce", "preference"):
        res.schedules[mode] = run_online(plan, b, mode)
    res.expect_finish("untreated", t2_last, 120)  # deadline 100 missed
    for mode in ("enforce", "preference"):
        f = res.schedules[mode].records[t2_last].finish
        res.expect(f <= 96, f"{mode} finish {f} > 96")
        res.expect(check_anomaly_free(plan, res.schedules[mode]).anomaly_free,
                   f"{mode}: anomaly reported")
    return res


def enforcement_cost() -> ScenarioResult:
    """Release enforcement delays an early-finishing workload while the
    preference treatment leaves it untouched."""
    ts = _ts(
        SuspendingTask(id=1, period=100, deadline=100, execs=(30, 20), susps=(20,)),
        SuspendingTask(id=2, period=100, deadline=100, execs=(20, 20), susps=(10,)),
    )
    plan = build_nominal(ts, "RM")
    b = _draws(plan, {
        SegKey(1, 0, 0): (10, 0), SegKey(1, 0, 1): (10, 10),
        SegKey(2, 0, 0): (10, 0), SegKey(2, 0, 1): (10, 5),
    })
    res = ScenarioResult(plan=plan)
    for mode in ("untreated", "enforce", "preference"):
        res.schedules[mode] = run_online(plan, b, mode)
    res.expect_intervals("enforce", SegKey(1, 0, 0), [(0, 10)])
    res.expect_intervals("enforce", SegKey(1, 0, 1), [(50, 60)])
    res.expect_intervals("enforce", SegKey(2, 0, 0), [(10, 20)])
    res.expect_intervals("enforce", SegKey(2, 0, 1), [(60, 70)])
    res.expect_finish("enforce", SegKey(2, 0, 1), 70)
    res.expect_finish("preference", SegKey(2, 0, 1), 40)
    res.expect_finish("untreated", SegKey(2, 0, 1), 40)
    for key in plan.release_floors:
        got = res.schedules["preference"].records[key].intervals
        want = res.schedules["untreated"].records[key].intervals
        res.expect(got == want, f"preference vs untreated {key}: {got} != {want}")
    return res


def early_completion() -> ScenarioResult:
    """Task-level fixed priorities with an early completion: preference
    scheduling keeps the short task's second job on time."""
    ts = _ts(
        SuspendingTask(id=1, period=120, deadline=120, execs=(30, 30), susps=(50,)),
        SuspendingTask(id=2, period=60, deadline=60, execs=(10,)),
    )
    order = task_level_order(ts, 120, [1, 2])
    plan = build_nominal(ts, "EXPLICIT", explicit=order)
    plan.policy = "TFP"
    res = ScenarioResult(plan=plan, schedules={"nominal": plan.nominal})
    pref = plan.preference.rank
    res.expect(
        [pref[SegKey(1, 0, 0)], pref[SegKey(2, 0, 0)],
         pref[SegKey(2, 1, 0)], pref[SegKey(1, 0, 1)]] == [0, 1, 2, 3],
        f"preference ranks {pref}")
    b = _draws(plan, {SegKey(1, 0, 0): (10, 0), SegKey(1, 0, 1): (30, 40)})
    for mode in ("untreated", "preference"):
        res.schedules[mode] = run_online(plan, b, mode)
    second_job = SegKey(2, 1, 0)
    res.expect_intervals("preference", second_job, [(60, 70)])
    res.expect_finish("preference", second_job,
                      plan.nominal.records[second_job].finish)
    res.expect_intervals("preference", SegKey(1, 0, 0), [(0, 10)])
    res.expect_intervals("preference", SegKey(1, 0, 1), [(50, 60), (70, 90)])
    res.expect_intervals("untreated", second_job, [(80, 90)])
    return res


SCENARIOS: dict[str, Callable[[], ScenarioResult]] = {
    "1": suspension_anomaly,
    "2": jitter_anomaly,
    "3": nominal_two_task,
    "5": enforcement_cost,
    "8": early_completion,
}
