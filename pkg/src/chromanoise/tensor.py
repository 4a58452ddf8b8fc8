"""Latent noise tensors: deterministic sampling and channel statistics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import ValidationError

#: Upper bound on h*w*c, guarding against dimension overflow in files
#: (u32 fields) and runaway allocations.
MAX_ELEMENTS = 1 << 28


@dataclass(frozen=True)
class NoiseTensor:
    """Immutable (h, w, c) float32 field with seed provenance.

    ``seed`` is the generator seed for freshly sampled tensors and None
    for derived ones (shifted, blended, sampled).  The value array is
    frozen after construction and safe to share across threads.
    """

    values: np.ndarray
    seed: int | None = None

    def __post_init__(self):
        v = self.values
        if not isinstance(v, np.ndarray) or v.ndim != 3:
            raise ValidationError("values must be a 3-D (h, w, c) array")
        if v.dtype != np.float32:
            raise ValidationError("values must be float32")
        if min(v.shape) < 1:
            raise ValidationError(f"dimensions must be >= 1, got {v.shape}")
        if v.size > MAX_ELEMENTS:
            raise ValidationError(f"dimension overflow: {v.shape}")
        if not np.isfinite(v).all():
            raise ValidationError("values must be finite (no NaN/Inf)")
        if self.seed is not None and not 0 <= self.seed < 2**64:
            raise ValidationError("seed must be a 64-bit unsigned integer")
        if not v.flags.c_contiguous:
            v = np.ascontiguousarray(v)
            object.__setattr__(self, "values", v)
        v.flags.writeable = False

    @property
    def height(self) -> int:
        return self.values.shape[0]

    @property
    def width(self) -> int:
        return self.values.shape[1]

    @property
    def channels(self) -> int:
        return self.values.shape[2]

    @property
    def shape(self) -> tuple[int, int, int]:
        return self.values.shape


def derived(values: np.ndarray) -> NoiseTensor:
    """Wrap computed float64/float32 values as a derived tensor."""
    return NoiseTensor(np.asarray(values, dtype=np.float32), seed=None)


@dataclass(frozen=True)
class ChannelStats:
    """Population statistics of one latent channel."""

    mean: float
    std: float
    positive_ratio: float


def sample_standard_noise(seed: int, h: int, w: int, c: int = 4) -> NoiseTensor:
    """Seeded standard-normal tensor, bit-reproducible for equal inputs.

    The generator is pinned (splitmix64-seeded xoshiro256++ per channel,
    Box-Muller on 53-bit uniforms); see ``chromanoise._kernels``.
    """
    if not 0 <= seed < 2**64:
        raise ValidationError("seed must be a 64-bit unsigned integer")
    for name, dim in (("h", h), ("w", w), ("c", c)):
        if not isinstance(dim, int) or dim < 1:
            raise ValidationError(f"{name} must be a positive integer, got {dim!r}")
    if h * w * c > MAX_ELEMENTS:
        raise ValidationError(f"dimension overflow: {(h, w, c)}")
    return NoiseTensor(_kernels.fill_standard_normal(seed, h, w, c), seed=seed)


def channel_stats(t: NoiseTensor) -> list[ChannelStats]:
    """Per-channel mean, population std, and strict positive ratio.

    The positive ratio counts entries with value > 0 exactly; zeros are
    not positive.
    """
    n = t.height * t.width
    out = []
    for ch in range(t.channels):
        plane = t.values[:, :, ch].astype(np.float64)
        out.append(
            ChannelStats(
                mean=float(plane.mean()),
                std=float(plane.std()),  # population: divisor N
                positive_ratio=int(np.count_nonzero(plane > 0.0)) / n,
            )
        )
    return out
