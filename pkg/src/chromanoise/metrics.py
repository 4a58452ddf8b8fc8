"""Chroma-key quality metrics for generated images and toy fields.

``border_uniformity`` scores how uniformly an RGB image's border ring
matches a target key color (default lime green 50,205,50), as a cheap
stand-in for keyability.  ``mode_fraction`` assigns toy sampler outputs
to mixture modes per region.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EmptyRegionError, ValidationError
from .mask import Mask

DEFAULT_TARGET_RGB = (50, 205, 50)


def border_ring(h: int, w: int, border_fraction: float = 0.1) -> np.ndarray:
    """Boolean (h, w) mask of pixels within ceil(b*min(h, w)) of any edge."""
    if not 0.0 < border_fraction < 0.5:
        raise ValidationError(
            f"border fraction must lie in (0, 0.5), got {border_fraction}"
        )
    m = math.ceil(border_fraction * min(h, w))
    ring = np.zeros((h, w), dtype=bool)
    ring[:m, :] = True
    ring[h - m:, :] = True
    ring[:, :m] = True
    ring[:, w - m:] = True
    return ring


@dataclass(frozen=True)
class UniformityReport:
    """Border-ring chroma statistics against a target color."""

    target_rgb: tuple[int, int, int]
    border_fraction: float
    tolerance: int
    pass_fraction: float
    mean_border_rgb: tuple[float, float, float]
    max_deviation: int

    def to_dict(self) -> dict:
        return {
            "target_rgb": list(self.target_rgb),
            "border_fraction": self.border_fraction,
            "tolerance": self.tolerance,
            "pass_fraction": self.pass_fraction,
            "mean_border_rgb": list(self.mean_border_rgb),
            "max_deviation": self.max_deviation,
        }


def border_uniformity(
    image: np.ndarray,
    target_rgb: tuple[int, int, int] = DEFAULT_TARGET_RGB,
    border_fraction: float = 0.1,
    tolerance: int = 20,
) -> UniformityReport:
    """Fraction of border-ring pixels within tolerance of the target color.

    A pixel passes when its largest per-channel absolute deviation is at
    most ``tolerance`` (8-bit units).
    """
    img = np.asarray(image)
    if img.ndim != 3 or img.shape[2] != 3 or img.dtype != np.uint8:
        raise ValidationError("image must be an (H, W, 3) uint8 array")
    h, w = img.shape[:2]
    if h < 3 or w < 3:
        raise ValidationError(f"image must be at least 3x3, got {h}x{w}")
    target = tuple(int(v) for v in target_rgb)
    if len(target) != 3 or not all(0 <= v <= 255 for v in target):
        raise ValidationError(f"target must be three 8-bit values, got {target_rgb}")
    if tolerance < 0:
        raise ValidationError("tolerance must be >= 0")

    ring = border_ring(h, w, border_fraction)
    pixels = img[ring].astype(np.int32)
    dev = np.abs(pixels - np.array(target, dtype=np.int32)).max(axis=1)
    return UniformityReport(
        target_rgb=target,
        border_fraction=border_fraction,
        tolerance=int(tolerance),
        pass_fraction=float(np.count_nonzero(dev <= tolerance) / dev.size),
        mean_border_rgb=tuple(float(v) for v in pixels.mean(axis=0)),
        max_deviation=int(dev.max()),
    )


def nearest_mode_fractions(values: np.ndarray, means: np.ndarray) -> tuple[float, ...]:
    """Fraction of values nearest each component mean (ties -> lower index)."""
    if values.size == 0:
        raise EmptyRegionError("region contains no pixels")
    dist = np.abs(values.ravel()[None, :] - np.asarray(means, dtype=np.float64)[:, None])
    assign = np.argmin(dist, axis=0)  # first minimum wins ties
    counts = np.bincount(assign, minlength=len(means))
    return tuple(float(c) / values.size for c in counts)


def mode_fraction(
    field: np.ndarray,
    mixture,
    region_mask: Mask,
    threshold: float = 0.5,
) -> dict[str, tuple[float, ...]]:
    """Per-mode fractions in the mask's foreground and background regions.

    Foreground is ``mask >= threshold``; each region's fractions sum
    to 1.  Raises EmptyRegionError when either region has no pixels.
    """
    vals = np.asarray(field, dtype=np.float64)
    if vals.shape != (region_mask.height, region_mask.width):
        raise ValidationError("field and region mask must share shape")
    fg = region_mask.values >= threshold
    means = mixture.means
    if not fg.any():
        raise EmptyRegionError("foreground region contains no pixels")
    if fg.all():
        raise EmptyRegionError("background region contains no pixels")
    return {
        "foreground": nearest_mode_fractions(vals[fg], means),
        "background": nearest_mode_fractions(vals[~fg], means),
    }
