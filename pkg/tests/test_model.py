import math

import pytest

from segsched.model import (SegKey, SuspendingTask, TaskSet, expand_jobs, hyperperiod,
                            load_taskset, save_taskset, taskset_from_dict,
                            taskset_to_dict, validate_taskset)


def _single(execs, susps=(), period=10, deadline=None, jitter=0):
    return TaskSet(tick_scale=1, tasks=(
        SuspendingTask(id=1, period=period, deadline=deadline or period,
                       execs=execs, susps=susps, jitter_max=jitter),
    ))


def test_valid_set(two_task_nominal_set):
    assert validate_taskset(two_task_nominal_set) == []


def test_zero_suspension_rejected():
    ts = _single((3, 2), susps=(0,))
    assert any("suspension must be >= 1 tick" in p for p in validate_taskset(ts))


def test_unconstrained_deadline_rejected():
    ts = _single((3,), period=10, deadline=11)
    assert any("constrained deadline" in p for p in validate_taskset(ts))


def test_duplicate_ids_rejected():
    ts = TaskSet(tick_scale=1, tasks=(
        SuspendingTask(id=1, period=10, deadline=10, execs=(1,)),
        SuspendingTask(id=1, period=20, deadline=20, execs=(1,)),
    ))
    assert any("duplicate" in p for p in validate_taskset(ts))


def test_demand_above_deadline_is_not_a_validation_error():
    # feasibility is decided by simulation, not by the validator
    ts = _single((8,), susps=(), period=10, jitter=5)
    assert validate_taskset(ts) == []


def test_hyperperiod_pair():
    ts = TaskSet(tick_scale=1, tasks=(
        SuspendingTask(id=1, period=10, deadline=10, execs=(1,)),
        SuspendingTask(id=2, period=11, deadline=11, execs=(1,)),
    ))
    assert hyperperiod(ts) == 110


def test_hyperperiod_semi_harmonic_menu():
    periods = (1, 2, 5, 10, 20, 50, 100, 200, 1000)
    ts = TaskSet(tick_scale=1, tasks=tuple(
        SuspendingTask(id=i, period=p, deadline=p, execs=(1,))
        for i, p in enumerate(periods, 1)))
    assert hyperperiod(ts) == 1000


def test_hyperperiod_single():
    assert hyperperiod(_single((1,), period=12)) == 12


def test_hyperperiod_divisible_by_every_period():
    ts = TaskSet(tick_scale=1, tasks=tuple(
        SuspendingTask(id=i, period=p, deadline=p, execs=(1,))
        for i, p in enumerate((6, 10, 14, 21), 1)))
    h = hyperperiod(ts)
    assert all(h % t.period == 0 for t in ts.tasks)


def test_hyperperiod_overflow_reported():
    primes = (2305843009213693951, 4611686018427387847)
    ts = TaskSet(tick_scale=1, tasks=tuple(
        SuspendingTask(id=i, period=p, deadline=p, execs=(1,))
        for i, p in enumerate(primes, 1)))
    with pytest.raises(OverflowError):
        hyperperiod(ts)


def test_expand_jobs_two_task_window(two_task_nominal_set):
    insts = expand_jobs(two_task_nominal_set, 260)
    # releases 0,100,200 and 0,110,220; inclusion is by job release
    assert len(insts) == 12
    assert {i.key for i in insts if i.task_id == 1} == {
        SegKey(1, k, j) for k in range(3) for j in range(2)}
    assert insts == sorted(insts, key=lambda s: (s.job_release, s.task_id, s.seg_index))
    late = [i for i in insts if i.key == SegKey(1, 2, 1)]
    assert late and late[0].job_release == 200


def test_expand_jobs_empty_horizon(two_task_nominal_set):
    assert expand_jobs(two_task_nominal_set, 0) == []


def test_expand_jobs_single_task():
    ts = _single((2, 2), susps=(1,), period=12)
    assert len(expand_jobs(ts, 24)) == 4


@pytest.mark.parametrize("horizon", [1, 7, 26, 100, 260])
def test_expand_jobs_count_formula(two_task_nominal_set, horizon):
    insts = expand_jobs(two_task_nominal_set, horizon)
    expected = sum(
        math.ceil((horizon - t.first_release) / t.period) * t.n_segments
        for t in two_task_nominal_set.tasks)
    assert len(insts) == expected
    assert len({i.key for i in insts}) == len(insts)


def test_segment_instance_attributes(jitter_prone_set):
    insts = expand_jobs(jitter_prone_set, 100)
    first = next(i for i in insts if i.key == SegKey(1, 0, 0))
    later = next(i for i in insts if i.key == SegKey(1, 0, 1))
    assert first.max_susp_before == 20  # jitter bound for the first segment
    assert later.max_susp_before == 20  # preceding suspension interval
    assert first.job_deadline == 100


def test_json_round_trip(tmp_path, jitter_prone_set):
    path = tmp_path / "ts.json"
    save_taskset(jitter_prone_set, path)
    assert load_taskset(path) == jitter_prone_set
    assert taskset_from_dict(taskset_to_dict(jitter_prone_set)) == jitter_prone_set
