"""
Task model: segmented self-suspending periodic tasks with release jitter.

Time is an integer tick count throughout.  Scenarios with fractional
parameters are encoded at a coarser tick_scale (e.g. 10 ticks per time
unit) so that all arithmetic stays exact.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import NamedTuple

TICK_MAX = 2**64 - 1


class SegKey(NamedTuple):
    """Identity of one computation segment of one job."""

    task_id: int
    job_index: int
    seg_index: int


@dataclass(frozen=True)
class SuspendingTask:
    """Periodic task alternating computation segments and suspensions.

    ``execs`` holds the WCET of each of the M segments, ``susps`` the
    maximum length of the M-1 suspension intervals between them.
    ``jitter_max`` bounds the release jitter, modeled as a suspension
    before the first segment.
    """

    id: int
    period: int
    deadline: int
    execs: tuple[int, ...]
    susps: tuple[int, ...] = ()
    jitter_max: int = 0
    first_release: int = 0

    def __post_init__(self):
        object.__setattr__(self, "execs", tuple(self.execs))
        object.__setattr__(self, "susps", tuple(self.susps))

    @property
    def n_segments(self) -> int:
        return len(self.execs)

    @property
    def total_exec(self) -> int:
        return sum(self.execs)

    @property
    def total_susp(self) -> int:
        return sum(self.susps)


@dataclass(frozen=True)
class TaskSet:
    tick_scale: int
    tasks: tuple[SuspendingTask, ...]

    def __post_init__(self):
        object.__setattr__(self, "tasks", tuple(self.tasks))

    def task(self, task_id: int) -> SuspendingTask:
        for t in self.tasks:
            if t.id == task_id:
                return t
        raise KeyError(f"no task with id {task_id}")


@dataclass(frozen=True)
class SegmentInstance:
    """One computation segment of one concrete job in a horizon.

    ``max_susp_before`` is the maximum suspension preceding this segment:
    the task's jitter bound for the first segment, otherwise the
    preceding suspension interval's maximum.
    """

    key: SegKey
    wcet: int
    max_susp_before: int
    job_release: int
    job_deadline: int

    @property
    def task_id(self) -> int:
        return self.key.task_id

    @property
    def job_index(self) -> int:
        return self.key.job_index

    @property
    def seg_index(self) -> int:
        return self.key.seg_index


def validate_taskset(ts: TaskSet) -> list[str]:
    """Return every violated invariant; an empty list means valid."""
    problems: list[str] = []
    if not ts.tasks:
        problems.append("task set must be non-empty")
    if ts.tick_scale < 1:
        problems.append("tick_scale must be >= 1")
    seen: set[int] = set()
    for t in ts.tasks:
        tag = f"task {t.id}"
        if t.id in seen:
            problems.append(f"{tag}: duplicate task id")
        seen.add(t.id)
        if t.period <= 0:
            problems.append(f"{tag}: period must be > 0")
        if t.deadline > t.period:
            problems.append(f"{tag}: constrained deadline required (D <= T)")
        if t.deadline <= 0:
            problems.append(f"{tag}: deadline must be > 0")
        if t.jitter_max < 0:
            problems.append(f"{tag}: jitter_max must be >= 0")
        if t.first_release < 0:
            problems.append(f"{tag}: first_release must be >= 0")
        if len(t.execs) < 1:
            problems.append(f"{tag}: at least one computation segment required")
        if len(t.susps) != max(len(t.execs) - 1, 0):
            problems.append(f"{tag}: expected {len(t.execs) - 1} suspension intervals")
        for j, c in enumerate(t.execs):
            if c < 1:
                problems.append(f"{tag}: execution time of segment {j} must be >= 1 tick")
        for j, s in enumerate(t.susps):
            if s < 1:
                problems.append(f"{tag}: suspension must be >= 1 tick (interval {j})")
    return problems


def hyperperiod(ts: TaskSet) -> int:
    """Least common multiple of all task periods."""
    h = 1
    for t in ts.tasks:
        h = math.lcm(h, t.period)
        if h > TICK_MAX:
            raise OverflowError(f"hyperperiod exceeds the 64-bit tick range: {h}")
    return h


def expand_jobs(ts: TaskSet, horizon: int) -> list[SegmentInstance]:
    """All segment instances of jobs released strictly before ``horizon``.

    A job contributes all of its segments as soon as its release falls
    inside the horizon; its execution may extend past the horizon.
    Ordered by (job release, task id, segment index).
    """
    out: list[SegmentInstance] = []
    for t in ts.tasks:
        k = 0
        while True:
            r = t.first_release + k * t.period
            if r >= horizon:
                break
            for j in range(t.n_segments):
                out.append(
                    SegmentInstance(
                        key=SegKey(t.id, k, j),
                        wcet=t.execs[j],
                        max_susp_before=t.jitter_max if j == 0 else t.susps[j - 1],
                        job_release=r,
                        job_deadline=r + t.deadline,
                    )
                )
            k += 1
    out.sort(key=lambda s: (s.job_release, s.task_id, s.seg_index))
    return out


# --- JSON (de)serialization ------------------------------------------------

def taskset_to_dict(ts: TaskSet) -> dict:
    return {
        "tick_scale": ts.tick_scale,
        "tasks": [
            {
                "id": t.id,
                "period": t.period,
                "deadline": t.deadline,
                "jitter_max": t.jitter_max,
                "first_release": t.first_release,
                "execs": list(t.execs),
                "susps": list(t.susps),
            }
            for t in ts.tasks
        ],
    }


def taskset_from_dict(d: dict) -> TaskSet:
    tasks = []
    for td in d["tasks"]:
        tasks.append(
            SuspendingTask(
                id=td["id"],
                period=td["period"],
                deadline=td["deadline"],
                jitter_max=td.get("jitter_max", 0),
                first_release=td.get("first_release", 0),
                execs=tuple(td["execs"]),
                susps=tuple(td.get("susps", ())),
            )
        )
    return TaskSet(tick_scale=d["tick_scale"], tasks=tuple(tasks))


def save_taskset(ts: TaskSet, path) -> None:
    with open(path, "w") as fh:
        json.dump(taskset_to_dict(ts), fh, indent=2)


def load_taskset(path) -> TaskSet:
    with open(path) as fh:
        return taskset_from_dict(json.load(fh))
