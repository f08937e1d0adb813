import itertools

import pytest

from segsched.behavior import (BehaviorProfile, RuntimeBehavior, anomaly_search,
                               behavior_from_dict, behavior_to_dict, check_anomaly_free,
                               run_online, sample_behavior, worst_case_behavior)
from segsched.model import SegKey, SuspendingTask, TaskSet, expand_jobs
from segsched.treatments import build_nominal


def test_degenerate_profile_equals_worst_case():
    ts = TaskSet(tick_scale=1, tasks=(
        SuspendingTask(id=1, period=20, deadline=20, execs=(4, 3), susps=(5,)),
    ))
    b = sample_behavior(ts, 20, seed=0, profile=BehaviorProfile(1.0, 1.0))
    wc = worst_case_behavior(ts, 20)
    assert b.draws == wc.draws  # jitter-free set: bounds collapse


def test_same_seed_same_draws(jitter_prone_set):
    a = sample_behavior(jitter_prone_set, 100, seed=9)
    b = sample_behavior(jitter_prone_set, 100, seed=9)
    assert a.draws == b.draws
    c = sample_behavior(jitter_prone_set, 100, seed=10)
    assert a.draws != c.draws


def test_draw_bounds_hold_over_many_seeds(jitter_prone_set):
    # ~10^4 draws across seeds and profiles
    profiles = [BehaviorProfile(0.1, 0.1), BehaviorProfile(0.5, 0.9), BehaviorProfile(1.0, 0.3)]
    for seed, profile in itertools.product(range(850), profiles):
        b = sample_behavior(jitter_prone_set, 100, seed, profile)
        assert b.violations(jitter_prone_set, 100) == []


def test_untreated_anomaly_detected(anomaly_prone_set):
    plan = build_nominal(anomaly_prone_set, "RM")
    b = worst_case_behavior(anomaly_prone_set, plan.horizon)
    b.draws[SegKey(1, 0, 1)] = (20, 15)
    online = run_online(plan, b, "untreated")
    report = check_anomaly_free(plan, online)
    assert not report.anomaly_free
    assert (SegKey(2, 0, 1), 90, 110) in report.violations


def test_enforce_mode_anomaly_free(anomaly_prone_set):
    plan = build_nominal(anomaly_prone_set, "RM")
    for seed in range(50):
        b = sample_behavior(anomaly_prone_set, plan.horizon, seed)
        online = run_online(plan, b, "enforce")
        assert check_anomaly_free(plan, online).anomaly_free
        for key, rec in online.records.items():
            assert rec.release == plan.nominal.records[key].release


def test_identity_run_is_anomaly_free(two_task_nominal_set):
    plan = build_nominal(two_task_nominal_set, "RM", horizon=260)
    b = worst_case_behavior(two_task_nominal_set, 260)
    online = run_online(plan, b, "untreated")
    assert check_anomaly_free(plan, online).anomaly_free


def test_enforce_first_segments_respect_jitter_bound(jitter_prone_set):
    plan = build_nominal(jitter_prone_set, "RM")
    for seed in range(30):
        b = sample_behavior(jitter_prone_set, plan.horizon, seed)
        online = run_online(plan, b, "enforce")
        for inst in online.instances:
            if inst.seg_index == 0:
                task = plan.taskset.task(inst.task_id)
                rec = online.records[inst.key]
                assert rec.start >= inst.job_release + task.jitter_max


def test_behavior_mismatch_rejected(anomaly_prone_set):
    plan = build_nominal(anomaly_prone_set, "RM")
    other = TaskSet(tick_scale=1, tasks=(
        SuspendingTask(id=7, period=10, deadline=10, execs=(2,)),
    ))
    wrong = sample_behavior(other, 10, seed=0)
    with pytest.raises(ValueError):
        run_online(plan, wrong, "untreated")


def test_anomaly_search_finds_witness(anomaly_prone_set):
    plan = build_nominal(anomaly_prone_set, "RM")
    hit = anomaly_search(plan, trials=1000, seed=0,
                         profile=BehaviorProfile(exec_floor=1.0, susp_floor=0.5))
    assert hit is not None
    witness, report = hit
    assert not report.anomaly_free
    # witness replays deterministically
    replay = check_anomaly_free(plan, run_online(plan, witness, "untreated"))
    assert replay.violations == report.violations


def test_jitter_witness_found(jitter_prone_set):
    plan = build_nominal(jitter_prone_set, "RM")
    hit = anomaly_search(plan, trials=1000, seed=0)
    assert hit is not None


def test_single_task_never_anomalous():
    # exhaustive over all tick-quantized draws of a small single task
    ts = TaskSet(tick_scale=1, tasks=(
        SuspendingTask(id=1, period=10, deadline=10, execs=(2, 2), susps=(2,),
                       jitter_max=1),
    ))
    plan = build_nominal(ts, "RM")
    keys = [i.key for i in expand_jobs(ts, plan.horizon)]
    spaces = []
    for inst in expand_jobs(ts, plan.horizon):
        cs = range(1, inst.wcet + 1)
        ss = range(0 if inst.seg_index == 0 else 1, inst.max_susp_before + 1)
        spaces.append([(c, s) for c in cs for s in ss])
    for combo in itertools.product(*spaces):
        b = RuntimeBehavior(draws=dict(zip(keys, combo)))
        online = run_online(plan, b, "untreated")
        assert check_anomaly_free(plan, online).anomaly_free
    assert anomaly_search(plan, trials=200, seed=0) is None


def test_witness_json_round_trip(anomaly_prone_set):
    plan = build_nominal(anomaly_prone_set, "RM")
    b = sample_behavior(anomaly_prone_set, plan.horizon, seed=3)
    assert behavior_from_dict(behavior_to_dict(b)).draws == b.draws
