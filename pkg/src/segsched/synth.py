"""
Task-set synthesis: utilization split on a bounded simplex,
semi-harmonic periods, suspension-length classes, jitter severity
classes.
"""

from __future__ import annotations

import hashlib
import math
import random
from dataclasses import dataclass

from .model import SuspendingTask, TaskSet, validate_taskset

SUSPENSION_CLASSES = {
    "short": (0.01, 0.1),
    "medium": (0.1, 0.3),
    "long": (0.3, 0.6),
}

# Fractions of the reference period (shortest period in the set).
JITTER_CLASSES = {
    "none": None,
    "minor": (0.01, 0.1),
    "mild": (0.1, 0.2),
    "serious": (0.2, 0.3),
}

SEGMENT_CHOICES = (2, 5, 8)  # rare / moderate / frequent

DEFAULT_PERIOD_MENU = (1, 2, 5, 10, 20, 50, 100, 200, 1000)

UTIL_SCALE = 10**6  # fixed-point resolution for utilization splitting


@dataclass(frozen=True)
class GenConfig:
    total_utilization: float
    n_tasks: int = 10
    segments_per_task: int = 5
    suspension_class: str = "medium"
    jitter_class: str = "none"
    period_menu: tuple[int, ...] = DEFAULT_PERIOD_MENU
    tick_scale: int = 1000
    retry_cap: int = 100

    def __post_init__(self):
        if not (0.0 <= self.total_utilization <= 1.0):
            raise ValueError("total_utilization must lie in [0, 1]")
        if self.n_tasks < 1:
            raise ValueError("n_tasks must be >= 1")
        if self.segments_per_task < 1:
            raise ValueError("segments_per_task must be >= 1")
        if self.suspension_class not in SUSPENSION_CLASSES:
            raise ValueError(f"unknown suspension class {self.suspension_class!r}")
        if self.jitter_class not in JITTER_CLASSES:
            raise ValueError(f"unknown jitter class {self.jitter_class!r}")


def drs_split(n: int, total: int, lowers, uppers, seed: int) -> list[int]:
    """Split ``total`` into ``n`` integers with lowers[i] <= v[i] <= uppers[i],
    summing exactly to ``total``, approximately uniform on the bounded
    simplex.

    A symmetric Dirichlet draw (normalized exponentials) is clamped to
    the bounds and the violation mass redistributed over the remaining
    slack until fixpoint, then rounded with largest remainders while
    preserving the sum.
    """
    lowers = list(lowers)
    uppers = list(uppers)
    if len(lowers) != n or len(uppers) != n:
        raise ValueError("bounds must have length n")
    if any(l > u for l, u in zip(lowers, uppers)):
        raise ValueError("lower bound exceeds upper bound")
    if not (sum(lowers) <= total <= sum(uppers)):
        raise ValueError(f"bounds cannot reach total {total}")
    if n == 1:
        return [total]

    rng = random.Random(seed)
    e = [rng.expovariate(1.0) for _ in range(n)]
    se = sum(e)
    x = [total * v / se for v in e]

    for _ in range(200):
        x = [min(max(v, l), u) for v, l, u in zip(x, lowers, uppers)]
        delta = total - sum(x)
        if abs(delta) < 1e-9:
            break
        if delta > 0:
            slack = [u - v for v, u in zip(x, uppers)]
        else:
            slack = [v - l for v, l in zip(x, lowers)]
        s = sum(slack)
        x = [v + delta * sl / s for v, sl in zip(x, slack)]

    # integer rounding, largest remainder first, bounds respected
    base = [min(max(math.floor(v), l), u) for v, l, u in zip(x, lowers, uppers)]
    need = total - sum(base)
    frac = sorted(range(n), key=lambda i: x[i] - math.floor(x[i]), reverse=(need > 0))
    i = 0
    while need != 0:
        j = frac[i % n]
        if need > 0 and base[j] < uppers[j]:
            base[j] += 1
            need -= 1
        elif need < 0 and base[j] > lowers[j]:
            base[j] -= 1
            need += 1
        i += 1
        if i > 10 * n * (abs(need) + 1):
            raise RuntimeError("integer rounding failed to converge")
    return base


def _derive_seed(seed: int, *parts) -> int:
    # stable across processes (unlike hash() on strings)
    blob = ":".join([str(seed), *map(str, parts)]).encode()
    return int.from_bytes(hashlib.sha256(blob).digest()[:8], "big")


def generate_taskset(cfg: GenConfig, seed: int) -> TaskSet:
    """Synthesize a task set deterministic in (cfg, seed).

    Structural draws (utilizations, periods, segment splits) and jitter
    draws come from separate seeded streams, so configs differing only
    in jitter class produce otherwise identical sets.
    """
    rng = random.Random(_derive_seed(seed, "struct"))
    rng_jit = random.Random(_derive_seed(seed, "jitter"))
    n = cfg.n_tasks
    m = cfg.segments_per_task
    s_lo, s_hi = SUSPENSION_CLASSES[cfg.suspension_class]

    u_total = round(cfg.total_utilization * UTIL_SCALE)
    utils = drs_split(n, u_total, [0] * n, [UTIL_SCALE] * n,
                      _derive_seed(seed, "utils"))

    tasks = []
    for i in range(n):
        for attempt in range(cfg.retry_cap):
            period = rng.choice(cfg.period_menu) * cfg.tick_scale
            wcet_total = max(m, round(utils[i] / UTIL_SCALE * period))
            idle = period - wcet_total
            susp_min = max(m - 1, math.ceil(s_lo * idle)) if m > 1 else 0
            susp_max = math.floor(s_hi * idle)
            if wcet_total >= period or (m > 1 and susp_max < susp_min):
                continue
            susp_total = rng.randint(susp_min, susp_max) if m > 1 else 0
            execs = drs_split(m, wcet_total, [1] * m, [wcet_total] * m,
                              _derive_seed(seed, "execs", i, attempt))
            susps = ()
            if m > 1:
                susps = tuple(drs_split(m - 1, susp_total, [1] * (m - 1),
                                        [susp_total] * (m - 1),
                                        _derive_seed(seed, "susps", i, attempt)))
            tasks.append(SuspendingTask(id=i + 1, period=period, deadline=period,
                                        execs=tuple(execs), susps=susps))
            break
        else:
            raise RuntimeError(
                f"task {i + 1}: could not fit utilization {utils[i] / UTIL_SCALE:.3f} "
                f"within the retry cap")

    jit_range = JITTER_CLASSES[cfg.jitter_class]
    if jit_range is not None:
        ref = min(t.period for t in tasks)
        lo, hi = jit_range
        tasks = [
            SuspendingTask(id=t.id, period=t.period, deadline=t.deadline,
                           execs=t.execs, susps=t.susps,
                           jitter_max=round(rng_jit.uniform(lo, hi) * ref))
            for t in tasks
        ]

    ts = TaskSet(tick_scale=cfg.tick_scale, tasks=tuple(tasks))
    problems = validate_taskset(ts)
    if problems:
        raise RuntimeError(f"generator produced an invalid set: {problems}")
    return ts
