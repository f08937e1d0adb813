import pytest

from segsched.model import SuspendingTask, TaskSet


def pytest_runtest_logreport(report):
    # one visible pass/fail line per end-to-end acceptance check
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        word = "PASS" if report.passed else "FAIL"
        print(f"\n[acceptance] {word} {report.nodeid.split('::')[-1]}")


@pytest.fixture
def two_task_nominal_set():
    """Two tasks, periods 10/11, two segments each (10 ticks per unit)."""
    return TaskSet(tick_scale=10, tasks=(
        SuspendingTask(id=1, period=100, deadline=100, execs=(30, 20), susps=(20,)),
        SuspendingTask(id=2, period=110, deadline=110, execs=(20, 20), susps=(20,)),
    ))


@pytest.fixture
def anomaly_prone_set():
    """Two equal-period tasks where a shortened suspension triggers an
    anomaly under task-priority scheduling (10 ticks per unit)."""
    return TaskSet(tick_scale=10, tasks=(
        SuspendingTask(id=1, period=100, deadline=100, execs=(30, 20), susps=(20,)),
        SuspendingTask(id=2, period=100, deadline=100, execs=(20, 20), susps=(20,)),
    ))


@pytest.fixture
def jitter_prone_set():
    """Jitter-bounded pair where a smaller actual jitter causes a miss."""
    return TaskSet(tick_scale=10, tasks=(
        SuspendingTask(id=1, period=100, deadline=100, execs=(10, 30), susps=(20,),
                       jitter_max=20),
        SuspendingTask(id=2, period=100, deadline=100, execs=(30, 16), susps=(30,),
                       jitter_max=10),
    ))


@pytest.fixture
def overload_set():
    """Two single-segment tasks whose combined demand exceeds the period."""
    return TaskSet(tick_scale=1, tasks=(
        SuspendingTask(id=1, period=10, deadline=10, execs=(6,)),
        SuspendingTask(id=2, period=10, deadline=10, execs=(6,)),
    ))
