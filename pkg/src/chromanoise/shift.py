"""Channel mean shifts: solve per-channel offsets for positive-ratio targets.

A channel's positive ratio is the fraction of entries strictly greater
than zero.  Given a signed target shift (e.g. +0.07 for seven ratio
points up), the solver returns the constant offset that moves the
channel's positive count to exactly ``k = round_half_up(target * N)``
entries, while leaving the channel's dispersion untouched.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import StateError, UnsatisfiableTargetError, ValidationError
from .tensor import NoiseTensor, derived


@dataclass(frozen=True)
class ShiftPlan:
    """Per-channel signed ratio targets plus, once solved, the offsets.

    Channels are 0-based here; absent channels keep an implicit offset
    of 0.  ``resolved`` maps channel to the solved offset and is only
    valid against the tensor it was solved for.
    """

    entries: Mapping[int, float]
    resolved: Mapping[int, float] | None = field(default=None)

    def __post_init__(self):
        entries = dict(self.entries)
        for ch, shift in entries.items():
            if not isinstance(ch, int) or ch < 0:
                raise ValidationError(f"channel must be a non-negative int, got {ch!r}")
            if not -0.5 < shift < 0.5:
                raise ValidationError(
                    f"target shift for channel {ch} must lie in (-0.5, 0.5), got {shift}"
                )
        object.__setattr__(self, "entries", entries)
        if self.resolved is not None:
            resolved = dict(self.resolved)
            if set(resolved) != set(entries):
                raise ValidationError("resolved channels must match plan entries")
            object.__setattr__(self, "resolved", resolved)

    @property
    def is_resolved(self) -> bool:
        return self.resolved is not None


def _channel_values(t: NoiseTensor, channel: int) -> np.ndarray:
    if not 0 <= channel < t.channels:
        raise ValidationError(
            f"channel {channel} out of range for tensor with {t.channels} channels"
        )
    return t.values[:, :, channel].astype(np.float64).ravel()


def solve_channel_shift(t: NoiseTensor, channel: int, target_shift: float) -> float:
    """Offset that moves the channel's positive count to the target.

    With the channel sorted descending v_1 >= ... >= v_N and target
    count k, the offset is the midpoint -(v_k + v_{k+1})/2, so exactly k
    entries end up strictly positive.  Ties at the boundary fall back to
    -v_k + eps (the count then meets-or-exceeds k, the closest a uniform
    offset can get when equal values straddle the boundary).  The
    all-negative (k=0) and all-positive (k=N) extremes pin the offset to
    the extreme value itself, with the same eps nudged onto the k=N side.
    """
    vals = _channel_values(t, channel)
    n = vals.size
    count = int(np.count_nonzero(vals > 0.0))
    target_ratio = (count + target_shift * n) / n
    if not 0.0 <= target_ratio <= 1.0:
        raise UnsatisfiableTargetError(
            f"target positive ratio {target_ratio:.6f} for channel {channel} "
            "falls outside [0, 1]"
        )
    k = count + math.floor(target_shift * n + 0.5)  # round half up
    if count == k:
        return 0.0
    desc = np.sort(vals)[::-1]
    if k == 0:
        return float(-desc[0])
    if k == n:
        v = desc[n - 1]
        return float(-v + 1e-6 * max(1.0, abs(v)))
    v_k, v_next = desc[k - 1], desc[k]
    if v_k == v_next:
        return float(-v_k + 1e-6 * max(1.0, abs(v_k)))
    return float(-(v_k + v_next) / 2.0)


def resolve_plan(t: NoiseTensor, plan: ShiftPlan) -> ShiftPlan:
    """Solve every channel of the plan against the given tensor."""
    resolved = {
        ch: solve_channel_shift(t, ch, shift) for ch, shift in plan.entries.items()
    }
    return ShiftPlan(entries=plan.entries, resolved=resolved)


def apply_shift(t: NoiseTensor, plan: ShiftPlan) -> NoiseTensor:
    """Add each resolved offset to its channel; other channels pass through.

    Arithmetic runs in float64 and is rounded back to float32 storage,
    so the solved positive counts land exactly.  The result is a derived
    tensor (no seed).
    """
    if not plan.is_resolved:
        raise StateError("plan must be resolved against the tensor before applying")
    for ch in plan.resolved:
        if not 0 <= ch < t.channels:
            raise ValidationError(
                f"channel {ch} out of range for tensor with {t.channels} channels"
            )
    out = t.values.astype(np.float64)
    for ch, delta in plan.resolved.items():
        out[:, :, ch] += delta
    return derived(out)
