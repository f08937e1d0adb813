"""
Deterministic event-driven preemptive segment-level fixed-priority
simulator, plus independent fixed-point oracles for finishing times.

Scheduling semantics at a single instant: completions are processed
first, then segment releases and suspension expiries, then the ready
segment with the smallest rank is dispatched.  Preemption happens
immediately when a smaller-rank segment becomes ready.
"""

from __future__ import annotations

import heapq
from bisect import bisect_left
from dataclasses import dataclass, field

from .model import SegKey, SegmentInstance, TaskSet, expand_jobs


@dataclass(frozen=True)
class PriorityOrder:
    """Total strict order over segment instances; smaller rank runs first."""

    rank: dict[SegKey, int]

    def check_total(self, instances: list[SegmentInstance]) -> None:
        missing = [i.key for i in instances if i.key not in self.rank]
        if missing:
            raise ValueError(f"priority order missing {len(missing)} instances, e.g. {missing[0]}")
        ranks = [self.rank[i.key] for i in instances]
        if len(set(ranks)) != len(ranks):
            raise ValueError("priority order is not strict (duplicate ranks)")


@dataclass
class SegmentRecord:
    release: int
    start: int | None = None
    finish: int | None = None
    intervals: list[tuple[int, int]] = field(default_factory=list)

    @property
    def complete(self) -> bool:
        return self.finish is not None


@dataclass
class Schedule:
    horizon: int
    online: bool
    records: dict[SegKey, SegmentRecord]
    instances: list[SegmentInstance]
    _index: list[tuple[int, int, int]] | None = None  # (start, end, rank) sorted

    def record(self, key: SegKey) -> SegmentRecord:
        return self.records[key]

    def all_complete(self) -> bool:
        return all(r.complete for r in self.records.values())

    def executed(self, key: SegKey) -> int:
        return measure(self.records[key].intervals)

    def interval_index(self, order: PriorityOrder) -> list[tuple[int, int, int]]:
        ivs = []
        for key, rec in self.records.items():
            rk = order.rank[key]
            for a, b in rec.intervals:
                ivs.append((a, b, rk))
        ivs.sort()
        return ivs


def measure(intervals) -> int:
    """Total length of ordered pairwise-disjoint half-open intervals."""
    total = 0
    prev_end = None
    for a, b in intervals:
        if b < a:
            raise ValueError(f"malformed interval [{a},{b})")
        if prev_end is not None and a < prev_end:
            raise ValueError(f"overlapping intervals at [{a},{b})")
        total += b - a
        prev_end = b
    return total


def assign_priorities(ts: TaskSet, policy: str, horizon: int,
                      explicit: PriorityOrder | None = None) -> PriorityOrder:
    """Rank all segment instances of the horizon under RM, EDF, or an
    explicit order.

    RM ranks by (period, task id, job index, segment index); EDF by
    (job absolute deadline, task id, job index, segment index).  Ties
    beyond the primary key are broken lexicographically so that the
    order is always total and strict.
    """
    instances = expand_jobs(ts, horizon)
    policy = policy.upper()
    if policy == "EXPLICIT":
        if explicit is None:
            raise ValueError("explicit policy requires an order")
        explicit.check_total(instances)
        return explicit
    periods = {t.id: t.period for t in ts.tasks}
    if policy == "RM":
        keyf = lambda i: (periods[i.task_id], i.task_id, i.job_index, i.seg_index)
    elif policy == "EDF":
        keyf = lambda i: (i.job_deadline, i.task_id, i.job_index, i.seg_index)
    else:
        raise ValueError(f"unknown policy {policy!r}")
    ordered = sorted(instances, key=keyf)
    return PriorityOrder(rank={inst.key: n for n, inst in enumerate(ordered)})


def task_level_order(ts: TaskSet, horizon: int, task_priority: list[int]) -> PriorityOrder:
    """Explicit order giving all segments of earlier-listed tasks
    priority over all segments of later-listed tasks."""
    pos = {tid: n for n, tid in enumerate(task_priority)}
    instances = expand_jobs(ts, horizon)
    ordered = sorted(instances, key=lambda i: (pos[i.task_id], i.job_index, i.seg_index))
    return PriorityOrder(rank={inst.key: n for n, inst in enumerate(ordered)})


def simulate(ts: TaskSet, order: PriorityOrder, horizon: int,
             draws: dict[SegKey, tuple[int, int]] | None = None,
             release_floors: dict[SegKey, int] | None = None,
             stop: int | None = None) -> Schedule:
    """Simulate the preemptive S-FP schedule of all jobs released before
    ``horizon``.

    ``draws`` maps each segment to its (actual execution, actual
    preceding suspension); ``None`` simulates the worst case (WCETs,
    maximum suspensions, maximum jitter).  ``release_floors`` switches
    the release rule to enforcement: a segment becomes ready no earlier
    than its floor.  Without ``stop`` the run continues until every
    released segment completes; with ``stop`` execution is clipped
    there and unfinished segments stay incomplete.
    """
    instances = expand_jobs(ts, horizon)
    order.check_total(instances)
    by_key = {i.key: i for i in instances}
    if release_floors is not None:
        for i in instances:
            if i.key not in release_floors:
                raise ValueError(f"release floor missing for {i.key}")

    def draw(inst: SegmentInstance) -> tuple[int, int]:
        if draws is None:
            return inst.wcet, inst.max_susp_before
        try:
            return draws[inst.key]
        except KeyError:
            raise ValueError(f"behavior draw missing for {inst.key}") from None

    records: dict[SegKey, SegmentRecord] = {}
    remaining: dict[SegKey, int] = {}
    last_seg = {t.id: t.n_segments - 1 for t in ts.tasks}

    def release_time(inst: SegmentInstance, natural: int) -> int:
        if release_floors is None:
            return natural
        return max(natural, release_floors[inst.key])

    # (time, rank, key) heaps keep event processing deterministic
    release_heap: list[tuple[int, int, SegKey]] = []
    for inst in instances:
        if inst.seg_index == 0:
            cbar, sbar = draw(inst)
            rel = release_time(inst, inst.job_release + sbar)
            heapq.heappush(release_heap, (rel, order.rank[inst.key], inst.key))
            remaining[inst.key] = cbar

    ready: list[tuple[int, SegKey]] = []
    t = 0

    def admit_released(now: int) -> None:
        while release_heap and release_heap[0][0] <= now:
            rel, rk, key = heapq.heappop(release_heap)
            records[key] = SegmentRecord(release=rel)
            heapq.heappush(ready, (rk, key))

    while release_heap or ready:
        if not ready:
            t = max(t, release_heap[0][0])
        if stop is not None and t >= stop:
            break
        admit_released(t)
        if not ready:
            continue
        rk, key = heapq.heappop(ready)
        rec = records[key]
        end = t + remaining[key]
        if release_heap:
            end = min(end, release_heap[0][0])
        if stop is not None:
            end = min(end, stop)
        if end > t:
            if rec.start is None:
                rec.start = t
            if rec.intervals and rec.intervals[-1][1] == t:
                rec.intervals[-1] = (rec.intervals[-1][0], end)
            else:
                rec.intervals.append((t, end))
            remaining[key] -= end - t
        t = end
        if remaining[key] == 0:
            rec.finish = t
            if key.seg_index < last_seg[key.task_id]:
                nkey = SegKey(key.task_id, key.job_index, key.seg_index + 1)
                ninst = by_key[nkey]
                cbar, sbar = draw(ninst)
                remaining[nkey] = cbar
                rel = release_time(ninst, t + sbar)
                heapq.heappush(release_heap, (rel, order.rank[nkey], nkey))
        else:
            heapq.heappush(ready, (rk, key))

    # segments cut off by `stop` (or never released) stay incomplete
    for inst in instances:
        if inst.key not in records:
            records[inst.key] = SegmentRecord(release=max(t, inst.job_release))
            records[inst.key].finish = None

    return Schedule(horizon=horizon, online=draws is not None,
                    records=records, instances=instances)


def interference(sched: Schedule, order: PriorityOrder, key: SegKey,
                 window: tuple[int, int],
                 index: list[tuple[int, int, int]] | None = None) -> int:
    """Time that segments ranked above ``key`` execute inside ``window``."""
    a, b = window
    my_rank = order.rank[key]
    if index is None:
        index = sched.interval_index(order)
    # first interval that could overlap [a, b)
    lo = bisect_left(index, (a, -1, -1))
    while lo > 0 and index[lo - 1][1] > a:
        lo -= 1
    total = 0
    for s, e, rk in index[lo:]:
        if s >= b:
            break
        if rk < my_rank:
            total += min(e, b) - max(s, a)
    return total


def fixed_point_finish(sched: Schedule, order: PriorityOrder, key: SegKey,
                       index: list[tuple[int, int, int]] | None = None,
                       max_iter: int = 100_000) -> int:
    """Independent finishing-time oracle.

    Iterates t <- r + W(r, t) + C from t = r + C until fixpoint, where W
    is the interference of higher-ranked segments in the recorded
    schedule and C the demand actually executed.  Must agree with the
    simulator's recorded finish for every completed segment.
    """
    rec = sched.records[key]
    if not rec.complete:
        raise ValueError(f"{key} did not complete; no finishing time to check")
    if index is None:
        index = sched.interval_index(order)
    r = rec.release
    c = measure(rec.intervals)
    t = r + c
    for _ in range(max_iter):
        nxt = r + interference(sched, order, key, (r, t), index) + c
        if nxt == t:
            return t
        t = nxt
    raise RuntimeError(f"fixed-point iteration did not converge for {key}")


def check_uniprocessor(sched: Schedule) -> None:
    """All execution intervals across segments must be pairwise disjoint."""
    ivs = sorted(iv for rec in sched.records.values() for iv in rec.intervals)
    measure(ivs)  # raises on overlap


def check_work_conserving(sched: Schedule, order: PriorityOrder) -> list[SegKey]:
    """Segments whose [release, finish) window contains an instant where
    nothing of equal-or-higher rank executes.  Empty list = invariant holds."""
    index = sched.interval_index(order)
    bad = []
    for key, rec in sched.records.items():
        if not rec.complete:
            continue
        covered = interference(sched, order, key, (rec.release, rec.finish), index)
        covered += measure(rec.intervals)
        if covered != rec.finish - rec.release:
            bad.append(key)
    return bad


def check_interference_lower_bound(sched: Schedule, order: PriorityOrder) -> list[SegKey]:
    """Nominal-schedule bound: for every segment, the interference over
    [start, finish) is at least the summed demand of segments finishing
    strictly inside (start, finish).  Returns violators."""
    index = sched.interval_index(order)
    finishes = [(rec.finish, measure(rec.intervals))
                for rec in sched.records.values() if rec.complete]
    bad = []
    for key, rec in sched.records.items():
        if not rec.complete or rec.start is None:
            continue
        w = interference(sched, order, key, (rec.start, rec.finish), index)
        demand = sum(c for f, c in finishes if rec.start < f < rec.finish)
        if w < demand:
            bad.append(key)
    return bad


# --- JSON ------------------------------------------------------------------

def schedule_to_rows(sched: Schedule) -> list[dict]:
    rows = []
    for inst in sched.instances:
        rec = sched.records[inst.key]
        rows.append({
            "task": inst.task_id,
            "job": inst.job_index,
            "seg": inst.seg_index,
            "release": rec.release,
            "start": rec.start,
            "finish": rec.finish,
            "intervals": [list(iv) for iv in rec.intervals],
        })
    return rows
