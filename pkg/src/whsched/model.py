"""Task model for weakly-hard real-time scheduling.

A weakly-hard constraint (m, K) allows at most m deadline misses in any
window of K consecutive jobs of a task.  A hard task is encoded exactly
as (0, 1).  Constraints with m >= 1 split into two tolerance classes by
exact rational comparison of m/K against 1/2, and each weakly-hard
constraint derives an execution pattern (w, h): h jobs that must hit,
followed by up to w jobs that may miss.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction


class InvalidConstraint(ValueError):
    """(m, K) or hit-form parameters out of range."""


class InvalidTask(ValueError):
    """Task attributes violate 1 <= C <= D <= T, or ids collide."""


class HardTaskHasNoTransform(ValueError):
    """A (w, h) pattern was requested for a hard task."""


class NotHighTolerance(ValueError):
    """An equivalent hard task exists only for high tolerance tasks."""


class ToleranceClass(Enum):
    HARD = "hard"
    LOW = "low"
    HIGH = "high"


@dataclass(frozen=True, slots=True)
class WeaklyHardConstraint:
    """At most ``m`` deadline misses in any ``K`` consecutive jobs."""

    m: int
    K: int

    def __post_init__(self):
        if self.K < 1:
            raise InvalidConstraint(f"K must be >= 1, got K={self.K}")
        if not 0 <= self.m < self.K:
            raise InvalidConstraint(f"need 0 <= m < K, got m={self.m}, K={self.K}")
        if self.m == 0 and self.K != 1:
            raise InvalidConstraint(f"hard tasks are encoded as (0, 1), got (0, {self.K})")

    @property
    def miss_ratio(self) -> Fraction:
        return Fraction(self.m, self.K)


HARD_CONSTRAINT = WeaklyHardConstraint(0, 1)


def classify(constraint: WeaklyHardConstraint) -> ToleranceClass:
    """Sort a constraint into hard, low tolerance, or high tolerance.

    Low tolerance allows misses for less than half of each window
    (m/K < 1/2), high tolerance for at least half (m/K >= 1/2).  The
    boundary is decided in integer arithmetic (2m vs K), never floats.
    """
    if constraint.m == 0:
        return ToleranceClass.HARD
    if 2 * constraint.m < constraint.K:
        return ToleranceClass.LOW
    return ToleranceClass.HIGH


@dataclass(frozen=True, slots=True)
class MKTransform:
    """Execution pattern: ``h`` hits, then up to ``w`` tolerated misses."""

    w: int
    h: int

    def __post_init__(self):
        if self.w < 1 or self.h < 1:
            raise InvalidConstraint(f"need w >= 1 and h >= 1, got w={self.w}, h={self.h}")

    @property
    def length(self) -> int:
        return self.w + self.h


def derive_wh(constraint: WeaklyHardConstraint) -> MKTransform:
    """Derive the (w, h) pattern for a weakly-hard constraint.

    w = max(floor(m / (K - m)), 1) and h = ceil((K - m) / m).  Low
    tolerance always yields w = 1 and high tolerance always yields h = 1.

    Raises:
        HardTaskHasNoTransform: if the constraint is hard (m = 0).
    """
    m = constraint.m
    if m == 0:
        raise HardTaskHasNoTransform("(0, 1) admits no miss pattern")
    hits = constraint.K - m
    w = m // hits
    if w < 1:
        w = 1
    h = -(-hits // m)  # ceil
    return MKTransform(w, h)


def harder_than(a: int, b: int, p: int, q: int) -> bool:
    """Decide whether hit constraint (a, b) implies hit constraint (p, q).

    Hit form: a sequence meets (a, b) when every b consecutive jobs
    contain at least a hits.  Returns True when any sequence meeting
    (a, b) also meets (p, q), i.e. (a, b) is the harder requirement.

    Raises:
        InvalidConstraint: unless 0 <= a <= b, 0 <= p <= q, b >= 1, q >= 1.
    """
    if b < 1 or q < 1 or not 0 <= a <= b or not 0 <= p <= q:
        raise InvalidConstraint(f"bad hit constraints ({a}, {b}) vs ({p}, {q})")
    return p <= max((q // b) * a, q + (-(-q // b)) * (a - b))


@dataclass(frozen=True, slots=True)
class Task:
    """Sporadic task: WCET, relative deadline, minimum inter-arrival time."""

    id: int
    wcet: int
    deadline: int
    period: int
    constraint: WeaklyHardConstraint

    def __post_init__(self):
        if self.id < 0:
            raise InvalidTask(f"task id must be >= 0, got {self.id}")
        if not 1 <= self.wcet <= self.deadline <= self.period:
            raise InvalidTask(
                f"task {self.id}: need 1 <= C <= D <= T, got "
                f"C={self.wcet}, D={self.deadline}, T={self.period}"
            )

    @property
    def utilization(self) -> Fraction:
        return Fraction(self.wcet, self.period)


def equivalent_task(task: Task) -> Task:
    """Hard task whose releases match the jobs a high tolerance task must hit.

    The (w, h) pattern of a high tolerance task has h = 1, so mandatory
    jobs are at least (w + 1) periods apart: the equivalent hard task
    keeps C and D and stretches the period to (w + 1) * T.

    Raises:
        NotHighTolerance: if the task is hard or low tolerance.
    """
    if classify(task.constraint) is not ToleranceClass.HIGH:
        raise NotHighTolerance(
            f"task {task.id} has constraint ({task.constraint.m}, {task.constraint.K})"
        )
    t = derive_wh(task.constraint)
    return Task(task.id, task.wcet, task.deadline, (t.w + 1) * task.period, HARD_CONSTRAINT)


def rank_key(task: Task) -> tuple[int, int, int]:
    """Deterministic analysis order: deadline, then allowed misses, then id."""
    return (task.deadline, task.constraint.m, task.id)


@dataclass(frozen=True, slots=True)
class TaskSet:
    tasks: tuple[Task, ...]

    def __post_init__(self):
        object.__setattr__(self, "tasks", tuple(self.tasks))
        seen = set()
        for task in self.tasks:
            if task.id in seen:
                raise InvalidTask(f"duplicate task id {task.id}")
            seen.add(task.id)

    def __iter__(self):
        return iter(self.tasks)

    def __len__(self):
        return len(self.tasks)

    def task(self, task_id: int) -> Task:
        for task in self.tasks:
            if task.id == task_id:
                return task
        raise KeyError(task_id)

    @property
    def utilization(self) -> Fraction:
        return sum((t.utilization for t in self.tasks), Fraction(0))

    @property
    def hyperperiod(self) -> int:
        if not self.tasks:
            return 1
        return math.lcm(*(t.period for t in self.tasks))
