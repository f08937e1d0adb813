"""Segment-level fixed-priority scheduling of self-suspending periodic
tasks, with anomaly-free online treatments and an exact hyperperiod
schedulability test."""

from .model import SegKey, SuspendingTask, TaskSet, expand_jobs, hyperperiod, validate_taskset
from .simcore import PriorityOrder, Schedule, assign_priorities, simulate
from .treatments import NominalPlan, build_nominal, comb, exact_schedulability
from .behavior import (AnomalyReport, BehaviorProfile, RuntimeBehavior, anomaly_search,
                       check_anomaly_free, run_online, sample_behavior)
from .synth import GenConfig, drs_split, generate_taskset
from .exper import SweepResult, SweepSpec, acceptance_curve, emit_results

__all__ = [name for name in dir() if not name.startswith("_")]
