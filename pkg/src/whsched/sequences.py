"""Deadline outcome sequences and window constraints.

A sequence records one bit per job: 1 for a met deadline, 0 for a miss.
Window constraints bound hits or misses over every window of a fixed
length, either anywhere in the window or as consecutive runs.  Counting
over all sequences of a given length enumerates the full 2^K space with
exact integer counts (vectorized in chunks, reduced deterministically).
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Context, Decimal
from enum import Enum
from fractions import Fraction

import numpy as np

from .model import MKTransform, WeaklyHardConstraint, derive_wh


class SequenceTooShort(ValueError):
    """The sequence has fewer outcomes than the window length."""


class WindowTooLarge(ValueError):
    """Enumeration over 2^K sequences was requested for too large a K."""


class ConstraintKind(Enum):
    ANY_HITS = "any-hits"      # at least a hits in every window
    ANY_MISSES = "any-misses"  # at most a misses in every window
    ROW_HITS = "row-hits"      # a run of >= a consecutive hits in every window
    ROW_MISSES = "row-misses"  # no run of more than a consecutive misses


@dataclass(frozen=True, slots=True)
class DeadlineSequence:
    outcomes: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "outcomes", tuple(self.outcomes))
        for x in self.outcomes:
            if x not in (0, 1):
                raise ValueError(f"outcomes must be 0 or 1, got {x!r}")

    @classmethod
    def from_string(cls, bits: str) -> "DeadlineSequence":
        return cls(tuple(int(c) for c in bits))

    def __len__(self):
        return len(self.outcomes)

    def __str__(self):
        return "".join(str(x) for x in self.outcomes)


def _longest_run(window: tuple[int, ...], value: int) -> int:
    best = run = 0
    for x in window:
        if x == value:
            run += 1
            if run > best:
                best = run
        else:
            run = 0
    return best


def satisfies(seq: DeadlineSequence, kind: ConstraintKind, a: int, window: int) -> bool:
    """Check a window constraint over every window of the sequence.

    Args:
        seq: outcome sequence, at least ``window`` jobs long.
        kind: which bound to apply per window.
        a: the bound (hits required, or misses allowed).
        window: window length, checked at every offset.

    Raises:
        SequenceTooShort: if the sequence is shorter than the window.
        ValueError: if a or window are out of range.
    """
    if window < 1 or not 0 <= a <= window:
        raise ValueError(f"need 1 <= window and 0 <= a <= window, got a={a}, window={window}")
    n = len(seq)
    if n < window:
        raise SequenceTooShort(f"sequence of length {n} has no window of {window}")
    outcomes = seq.outcomes
    for start in range(n - window + 1):
        win = outcomes[start:start + window]
        hits = sum(win)
        if kind is ConstraintKind.ANY_HITS:
            ok = hits >= a
        elif kind is ConstraintKind.ANY_MISSES:
            ok = window - hits <= a
        elif kind is ConstraintKind.ROW_HITS:
            ok = _longest_run(win, 1) >= a
        else:
            ok = _longest_run(win, 0) <= a
        if not ok:
            return False
    return True


def critical_sequence(transform: MKTransform) -> DeadlineSequence:
    """Worst tolerated pattern of a (w, h) transform: h hits then w misses."""
    return DeadlineSequence((1,) * transform.h + (0,) * transform.w)


# chunk size for the 2^K enumeration; bounds peak memory, keeps the
# reduction order fixed
_CHUNK = 1 << 20

_MAX_COST_K = 24
_MAX_BRUTEFORCE_K = 20


def _miss_bound_ok(values: np.ndarray, seq_len: int, misses: int, window: int) -> np.ndarray:
    """Mask of sequences whose every window holds at most ``misses`` zeros.

    Sequences are encoded as integers, one bit per job.
    """
    ok = np.ones(values.shape, dtype=bool)
    wmask = np.uint32((1 << window) - 1)
    for shift in range(seq_len - window + 1):
        win = (values >> np.uint32(shift)) & wmask
        ok &= (window - np.bitwise_count(win)) <= misses
    return ok


def _chunks(seq_len: int):
    total = 1 << seq_len
    for start in range(0, total, _CHUNK):
        yield np.arange(start, min(start + _CHUNK, total), dtype=np.uint32)


def _count_any_misses(seq_len: int, misses: int, window: int) -> int:
    return sum(int(_miss_bound_ok(v, seq_len, misses, window).sum()) for v in _chunks(seq_len))


@dataclass(frozen=True, slots=True)
class TransformationCost:
    """Sequence counts under the transformed and the original constraint."""

    transformed_count: int
    original_count: int

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.transformed_count, self.original_count)

    def decimal(self, digits: int = 4) -> Decimal:
        """Ratio rounded half to even at ``digits`` significant digits."""
        ctx = Context(prec=digits, rounding=ROUND_HALF_EVEN)
        return ctx.divide(Decimal(self.transformed_count), Decimal(self.original_count))


def transformation_cost(constraint: WeaklyHardConstraint) -> TransformationCost:
    """Count how much of the (m, K) sequence space the (w, h) pattern keeps.

    Enumerates all 2^K outcome sequences of length K and counts, exactly:
    those meeting at-most-w-misses in every (w + h)-window (the pattern,
    applied as a sliding constraint), and those meeting at most m misses
    in the whole window.  The quotient is the fraction of tolerated
    behaviors that survive the transformation.

    Raises:
        WindowTooLarge: if K > 24.
        HardTaskHasNoTransform: for hard constraints.
    """
    if constraint.K > _MAX_COST_K:
        raise WindowTooLarge(f"enumeration capped at K <= {_MAX_COST_K}, got {constraint.K}")
    t = derive_wh(constraint)
    transformed = _count_any_misses(constraint.K, t.w, t.length)
    original = _count_any_misses(constraint.K, constraint.m, constraint.K)
    return TransformationCost(transformed, original)


def hardness_bruteforce(constraint: WeaklyHardConstraint) -> bool:
    """Verify by enumeration that the (w, h) pattern implies (m, K).

    Checks every length-K sequence: any sequence meeting
    at-most-w-misses in every (w + h)-window must also hold at most m
    misses total.  Returns True when no counterexample exists.

    Raises:
        WindowTooLarge: if K > 20.
        HardTaskHasNoTransform: for hard constraints.
    """
    if constraint.K > _MAX_BRUTEFORCE_K:
        raise WindowTooLarge(
            f"enumeration capped at K <= {_MAX_BRUTEFORCE_K}, got {constraint.K}"
        )
    t = derive_wh(constraint)
    for values in _chunks(constraint.K):
        transformed = _miss_bound_ok(values, constraint.K, t.w, t.length)
        original = _miss_bound_ok(values, constraint.K, constraint.m, constraint.K)
        if bool(np.any(transformed & ~original)):
            return False
    return True
