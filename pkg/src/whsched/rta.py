"""Global response-time analysis for weakly-hard task sets.

The baseline is the classic busy-window bound for global multiprocessor
scheduling: each interfering task contributes a workload over a window
of length L, capped per task, and the response-time upper bound is the
least fixed point of

    Rub = C_k + floor(sum_i min(W_i(Rub), Rub - C_k + 1) / n_c)

starting at C_k, abandoned once Rub exceeds the deadline.  The
weakly-hard extension thins the workload of interfering tasks to the
jobs that must hit: high tolerance tasks behave like hard tasks with the
period stretched to (w + 1) T, low tolerance tasks drop one job per
h + 1 released plus a carry-out correction.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .model import Task, TaskSet, ToleranceClass, classify, derive_wh, equivalent_task, rank_key
from .priority import EmptyTaskSet, JobClassTable, assign_priorities


class InterferencePolicy(Enum):
    FIXED_PRIORITY_RM = "rm"
    GLOBAL_EDF = "edf"
    WEAKLY_HARD_JC0 = "wh"


@dataclass(frozen=True, slots=True)
class WorkloadTerms:
    """Decomposed workload of one interfering task over a window.

    jobs: contributing job count N (clamped at 0).
    excluded: jobs dropped by the weakly-hard thinning, O <= N.
    carry_out: 0 or 1, whether the residual job contributes.
    residual: leftover window length r for the carry-out job.
    total: the workload bound W.
    """

    jobs: int
    excluded: int
    carry_out: int
    residual: int
    total: int


def baseline_workload(task: Task, rub: int, slack: int, window: int) -> WorkloadTerms:
    """Workload bound of an interfering task over a window of length L.

    Args:
        task: the interfering task.
        rub: the interfering task's own response-time upper bound.
        slack: the interfering task's slack, max(D - Rub, 0).
        window: the window length L.

    N = max(0, floor(x / T)) jobs contribute fully, with
    x = L + Rub - C - slack, plus one residual contribution
    min(C, x - N T) clamped at 0.
    """
    x = window + rub - task.wcet - slack
    n = x // task.period
    if n < 0:
        n = 0
    r = x - n * task.period
    if r < 0:
        r = 0
    total = n * task.wcet + min(task.wcet, r)
    return WorkloadTerms(jobs=n, excluded=0, carry_out=1, residual=r, total=total)


def wh_workload(task: Task, rub: int, slack: int, window: int) -> WorkloadTerms:
    """Workload restricted to the jobs the task must complete.

    Hard tasks keep the baseline bound.  High tolerance tasks are
    replaced by their equivalent hard task (period (w + 1) T).  Low
    tolerance tasks release with the original period but every
    (h + 1)-th job is tolerable, so O = max(0, floor(x / (T (h + 1))))
    jobs are excluded and the carry-out contribution is dropped whenever
    the job count lands on the tolerable slot
    (a = 1 - floor((N mod (h + 1)) / h)).
    """
    tol = classify(task.constraint)
    if tol is ToleranceClass.HARD:
        return baseline_workload(task, rub, slack, window)
    if tol is ToleranceClass.HIGH:
        return baseline_workload(equivalent_task(task), rub, slack, window)
    t = derive_wh(task.constraint)
    x = window + rub - task.wcet - slack
    n = x // task.period
    if n < 0:
        n = 0
    o = x // (task.period * (t.h + 1))
    if o < 0:
        o = 0
    r = x - n * task.period
    if r < 0:
        r = 0
    a = 1 - (n % (t.h + 1)) // t.h
    total = (n - o) * task.wcet + a * min(task.wcet, r)
    return WorkloadTerms(jobs=n, excluded=o, carry_out=a, residual=r, total=total)


@dataclass(frozen=True, slots=True)
class TaskReport:
    task_id: int
    rub: int
    slack: int
    schedulable: bool


@dataclass(frozen=True, slots=True)
class AnalysisReport:
    entries: tuple[TaskReport, ...]
    set_schedulable: bool
    policy: InterferencePolicy

    def entry(self, task_id: int) -> TaskReport:
        for e in self.entries:
            if e.task_id == task_id:
                return e
        raise KeyError(task_id)


def _interferers(
    task: Task, ts: TaskSet, policy: InterferencePolicy, table: JobClassTable | None
) -> list[Task]:
    if policy is InterferencePolicy.GLOBAL_EDF:
        return [t for t in ts if t.id != task.id]
    if policy is InterferencePolicy.WEAKLY_HARD_JC0:
        assert table is not None
        mine = table.jc0(task.id)
        return [t for t in ts if table.jc0(t.id) > mine]
    key = rank_key(task)
    return [t for t in ts if rank_key(t) < key]


def response_time(
    task: Task,
    ts: TaskSet,
    cores: int,
    policy: InterferencePolicy,
    table: JobClassTable | None = None,
    estimates: dict[int, tuple[int, int]] | None = None,
) -> TaskReport:
    """Fixed-point response-time bound for one task.

    Args:
        task: the task under analysis.
        ts: the full task set.
        cores: number of identical cores.
        policy: which tasks interfere and with which workload bound.
        table: job-class priorities, required for the weakly-hard policy.
        estimates: (Rub, slack) per interfering task id.

    Returns:
        TaskReport with the converged Rub, its slack, and the verdict.
        Divergence past the deadline reports Rub = D + 1, slack 0.
    """
    if policy is InterferencePolicy.WEAKLY_HARD_JC0 and table is None:
        raise ValueError("weakly-hard analysis needs a JobClassTable")
    estimates = estimates or {}
    interferers = _interferers(task, ts, policy, table)
    workload = wh_workload if policy is InterferencePolicy.WEAKLY_HARD_JC0 else baseline_workload
    rub = task.wcet
    while True:
        cap = rub - task.wcet + 1
        budget = 0
        for other in interferers:
            orub, oslack = estimates[other.id]
            contribution = workload(other, orub, oslack, rub).total
            budget += contribution if contribution < cap else cap
        nxt = task.wcet + budget // cores
        if nxt > task.deadline:
            return TaskReport(task.id, task.deadline + 1, 0, False)
        if nxt == rub:
            return TaskReport(task.id, rub, task.deadline - rub, True)
        rub = nxt


def _analyze_fixed_priority(
    ts: TaskSet, cores: int, policy: InterferencePolicy, table: JobClassTable | None
) -> dict[int, TaskReport]:
    # single pass in priority order; slacks of higher-priority tasks are
    # already available when a task is reached
    ordered = sorted(ts, key=rank_key)
    estimates: dict[int, tuple[int, int]] = {}
    reports: dict[int, TaskReport] = {}
    for task in ordered:
        rep = response_time(task, ts, cores, policy, table, estimates)
        reports[task.id] = rep
        estimates[task.id] = (rep.rub, rep.slack)
    return reports


def _analyze_edf(ts: TaskSet, cores: int) -> dict[int, TaskReport]:
    # every other task interferes, so no analysis order works up front:
    # start from zero slack and refine the whole set until nothing moves
    estimates = {t.id: (t.deadline, 0) for t in ts}
    reports: dict[int, TaskReport] = {}
    prev_verdicts: frozenset[int] | None = None
    for _ in range(2 * len(ts) + 4):
        reports = {
            task.id: response_time(task, ts, cores, InterferencePolicy.GLOBAL_EDF, None, estimates)
            for task in ts
        }
        new_estimates = {tid: (rep.rub, rep.slack) for tid, rep in reports.items()}
        verdicts = frozenset(tid for tid, rep in reports.items() if rep.schedulable)
        if new_estimates == estimates or verdicts == prev_verdicts:
            break
        estimates = new_estimates
        prev_verdicts = verdicts
    return reports


def analyze(ts: TaskSet, cores: int, policy: InterferencePolicy) -> AnalysisReport:
    """Analyze a whole task set under one interference policy.

    Fixed-priority policies run a single pass in priority order; global
    EDF iterates whole-set rounds until the slacks settle.  The set is
    schedulable when every task is.

    Raises:
        EmptyTaskSet: if the task set has no tasks.
        ValueError: if cores < 1.
    """
    if len(ts) == 0:
        raise EmptyTaskSet("cannot analyze an empty task set")
    if cores < 1:
        raise ValueError(f"cores must be >= 1, got {cores}")
    if policy is InterferencePolicy.GLOBAL_EDF:
        reports = _analyze_edf(ts, cores)
    else:
        table = assign_priorities(ts) if policy is InterferencePolicy.WEAKLY_HARD_JC0 else None
        reports = _analyze_fixed_priority(ts, cores, policy, table)
    entries = tuple(reports[task.id] for task in ts)
    return AnalysisReport(entries, all(e.schedulable for e in entries), policy)
