"""Reading sweep result CSV files.

The expected schema is the one written by the experiment harness:
``utilization,algorithm,accepted,total,ratio``.  This module is
display-plumbing only; it never recomputes ratios.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

CSV_HEADER = ["utilization", "algorithm", "accepted", "total", "ratio"]


@dataclass(frozen=True)
class Curve:
    """One algorithm's acceptance-ratio line within a single file."""

    algorithm: str
    points: tuple[tuple[float, float], ...]  # (utilization, ratio), sorted by u


def load_curves(path) -> list[Curve]:
    """Parse a sweep CSV into one curve per algorithm.

    Raises ValueError naming the file and line on any malformed content.
    A header-only file yields an empty list.
    """
    by_alg: dict[str, list[tuple[float, float]]] = {}
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}:1: empty file, expected header "
                             f"{','.join(CSV_HEADER)}") from None
        if header != CSV_HEADER:
            raise ValueError(f"{path}:1: unexpected header {','.join(header)!r}")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(CSV_HEADER):
                raise ValueError(f"{path}:{lineno}: expected {len(CSV_HEADER)} "
                                 f"fields, got {len(row)}")
            try:
                u = float(row[0])
                ratio = float(row[4])
            except ValueError:
                raise ValueError(f"{path}:{lineno}: non-numeric utilization "
                                 f"or ratio in {row!r}") from None
            if not (0.0 <= u <= 1.0) or not (0.0 <= ratio <= 1.0):
                raise ValueError(f"{path}:{lineno}: utilization and ratio "
                                 f"must lie in [0, 1]")
            by_alg.setdefault(row[1], []).append((u, ratio))
    return [Curve(algorithm=alg, points=tuple(sorted(pts)))
            for alg, pts in sorted(by_alg.items())]
