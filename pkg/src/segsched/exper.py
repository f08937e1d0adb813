"""
Acceptance-ratio experiment harness.

For each utilization grid point, a batch of task sets is synthesized
and the exact hyperperiod test is run under each algorithm.  Per-set
seeds are derived from the master seed and the grid/set indices, so
every algorithm judges identical task sets and the combined approach
accepts a literal superset.
"""

from __future__ import annotations

import csv
import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

from .synth import GenConfig, _derive_seed, generate_taskset
from .treatments import exact_schedulability

log = logging.getLogger(__name__)

ALGORITHMS = ("NOM-EDF", "NOM-RM", "COMB")

_POLICY_OF = {"NOM-EDF": "EDF", "NOM-RM": "RM"}

DEFAULT_GRID = tuple(round(0.05 * i, 2) for i in range(21))


@dataclass(frozen=True)
class SweepSpec:
    template: GenConfig
    grid: tuple[float, ...] = DEFAULT_GRID
    sets_per_point: int = 20
    algorithms: tuple[str, ...] = ALGORITHMS
    master_seed: int = 0

    def __post_init__(self):
        if self.sets_per_point < 1:
            raise ValueError("sets_per_point must be >= 1")
        if any(not (0.0 <= u <= 1.0) for u in self.grid):
            raise ValueError("grid values must lie in [0, 1]")
        if any(b <= a for a, b in zip(self.grid, self.grid[1:])):
            raise ValueError("grid must be strictly increasing")
        unknown = set(self.algorithms) - set(ALGORITHMS)
        if unknown:
            raise ValueError(f"unknown algorithms: {sorted(unknown)}")


@dataclass(frozen=True)
class SweepRow:
    utilization: float
    algorithm: str
    accepted: int
    total: int

    @property
    def ratio(self) -> float:
        return self.accepted / self.total if self.total else 0.0


@dataclass
class SweepResult:
    rows: list[SweepRow] = field(default_factory=list)

    def row(self, utilization: float, algorithm: str) -> SweepRow:
        for r in self.rows:
            if r.utilization == utilization and r.algorithm == algorithm:
                return r
        raise KeyError((utilization, algorithm))

    def ratios(self, algorithm: str) -> list[tuple[float, float]]:
        return [(r.utilization, r.ratio) for r in self.rows if r.algorithm == algorithm]


def set_seed(master_seed: int, util_index: int, set_index: int) -> int:
    return _derive_seed(master_seed, "set", util_index, set_index)


def _eval_point(args) -> tuple[int, dict[str, int]]:
    spec, ui = args
    u = spec.grid[ui]
    cfg = replace(spec.template, total_utilization=u)
    accepted = {alg: 0 for alg in spec.algorithms}
    for si in range(spec.sets_per_point):
        seed = set_seed(spec.master_seed, ui, si)
        try:
            ts = generate_taskset(cfg, seed)
        except RuntimeError as exc:
            log.warning("u=%.2f set %d (seed %d): generation failed, "
                        "counted as not accepted: %s", u, si, seed, exc)
            continue
        verdicts = {}
        for alg, policy in _POLICY_OF.items():
            if alg in spec.algorithms or "COMB" in spec.algorithms:
                verdicts[alg] = exact_schedulability(ts, policy).schedulable
        for alg in spec.algorithms:
            ok = any(verdicts.values()) if alg == "COMB" else verdicts[alg]
            if ok:
                accepted[alg] += 1
    return ui, accepted


def acceptance_curve(spec: SweepSpec, workers: int = 1) -> SweepResult:
    """Acceptance ratio per (grid point, algorithm).

    The result is identical regardless of ``workers``; grid points are
    reduced in deterministic order.
    """
    jobs = [(spec, ui) for ui in range(len(spec.grid))]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = dict(pool.map(_eval_point, jobs))
    else:
        results = dict(map(_eval_point, jobs))
    rows = []
    for ui, u in enumerate(spec.grid):
        for alg in sorted(spec.algorithms):
            rows.append(SweepRow(utilization=u, algorithm=alg,
                                 accepted=results[ui][alg],
                                 total=spec.sets_per_point))
    return SweepResult(rows=rows)


# --- result emission -------------------------------------------------------

CSV_HEADER = ["utilization", "algorithm", "accepted", "total", "ratio"]


def emit_results(res: SweepResult, fmt: str, path) -> None:
    rows = sorted(res.rows, key=lambda r: (r.utilization, r.algorithm))
    try:
        if fmt == "csv":
            with open(path, "w", newline="") as fh:
                w = csv.writer(fh)
                w.writerow(CSV_HEADER)
                for r in rows:
                    w.writerow([f"{r.utilization:.3f}", r.algorithm,
                                r.accepted, r.total, f"{r.ratio:.3f}"])
        elif fmt == "json":
            with open(path, "w") as fh:
                json.dump([{"utilization": r.utilization, "algorithm": r.algorithm,
                            "accepted": r.accepted, "total": r.total}
                           for r in rows], fh, indent=2)
        else:
            raise ValueError(f"unknown format {fmt!r}")
    except OSError as exc:
        raise OSError(f"cannot write results to {path}: {exc}") from exc


def load_results(path) -> SweepResult:
    path = str(path)
    if path.endswith(".json"):
        with open(path) as fh:
            data = json.load(fh)
        rows = [SweepRow(d["utilization"], d["algorithm"], d["accepted"], d["total"])
                for d in data]
    else:
        with open(path, newline="") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames != CSV_HEADER:
                raise ValueError(f"{path}: unexpected header {reader.fieldnames}")
            rows = [SweepRow(float(d["utilization"]), d["algorithm"],
                             int(d["accepted"]), int(d["total"])) for d in reader]
    return SweepResult(rows=rows)
