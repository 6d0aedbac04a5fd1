"""Job-class priority assignment and the per-task job-level automaton.

Each task is split into K - m + 1 job classes indexed by q.  Class 0
holds the jobs that must meet their deadline for the (m, K) constraint
to survive, higher classes hold jobs whose misses are still tolerable.
Priorities are unique integers handed out class-major: every class-0
priority beats every class-1 priority, and so on.  Larger value wins.

A task's current class is tracked by a job level jl in
[-(h - 1), K - m]: the class of the next job is max(0, jl).  Hits push
the level up (saturating), w consecutive misses restore it to the
initial -(h - 1).
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import MKTransform, Task, TaskSet, rank_key


class EmptyTaskSet(ValueError):
    """Priorities were requested for a task set with no tasks."""


@dataclass(frozen=True, slots=True)
class JobLevelState:
    level: int
    miss_streak: int

    @classmethod
    def initial(cls, transform: MKTransform) -> "JobLevelState":
        return cls(-(transform.h - 1), 0)

    @property
    def class_index(self) -> int:
        return max(0, self.level)


def advance_job_level(
    state: JobLevelState, transform: MKTransform, level_cap: int, hit: bool
) -> JobLevelState:
    """Advance the job level after one job outcome.

    Args:
        state: level and current run of consecutive misses.
        transform: the task's (w, h) pattern.
        level_cap: upper bound for the level, K - m.
        hit: True when the job met its deadline.

    A hit raises the level by one, saturating at ``level_cap``, and
    clears the miss run.  A miss leaves the level alone until the run
    reaches w, which restores the initial state.
    """
    if hit:
        return JobLevelState(min(state.level + 1, level_cap), 0)
    streak = state.miss_streak + 1
    if streak >= transform.w:
        return JobLevelState.initial(transform)
    return JobLevelState(state.level, streak)


@dataclass(frozen=True)
class JobClassTable:
    """Unique scheduling priorities per (task, class index).

    ``order`` lists task ids sorted by (deadline, m, id); it is also the
    descending class-0 priority order.
    """

    priorities: dict[int, tuple[int, ...]]
    order: tuple[int, ...]

    def priority(self, task_id: int, q: int) -> int:
        return self.priorities[task_id][q]

    def jc0(self, task_id: int) -> int:
        return self.priorities[task_id][0]

    def class_count(self, task_id: int) -> int:
        return len(self.priorities[task_id])

    @property
    def total(self) -> int:
        return sum(len(v) for v in self.priorities.values())


def class_count(task: Task) -> int:
    """Number of job classes: K - m + 1, with hard tasks pinned to one."""
    c = task.constraint
    if c.m == 0:
        return 1
    return c.K - c.m + 1


def assign_priorities(ts: TaskSet) -> JobClassTable:
    """Assign unique priorities class-major, ties broken deterministically.

    Tasks are sorted by ascending deadline, then fewer allowed misses,
    then id.  A counter starts at the total class count and decrements
    while walking q = 0, 1, ... and, within each q, the sorted tasks
    that have such a class.  The result is a bijection onto
    [1, total]: class 0 of the first task gets the highest priority and
    every class-0 priority exceeds every priority of higher classes.

    Raises:
        EmptyTaskSet: if the task set has no tasks.
    """
    if len(ts) == 0:
        raise EmptyTaskSet("cannot assign priorities to an empty task set")
    ordered = sorted(ts, key=rank_key)
    counts = {task.id: class_count(task) for task in ordered}
    prio = sum(counts.values())
    columns: dict[int, list[int]] = {task.id: [] for task in ordered}
    for q in range(max(counts.values())):
        for task in ordered:
            if q < counts[task.id]:
                columns[task.id].append(prio)
                prio -= 1
    return JobClassTable(
        priorities={tid: tuple(col) for tid, col in columns.items()},
        order=tuple(task.id for task in ordered),
    )
