"""Named background colors mapped to signed per-channel ratio shifts.

Latent channels are numbered 1-4 here (the convention used throughout
the CLI); channel 2 pushes cyan when shifted positive and red when
negative, channel 3 likewise yellow/blue-purple, and channels 1 and 4
mostly move luminance and white/black shades.  Green is cyan plus
yellow; orange combines red and yellow with reduced luminance.  White
and black are deliberately not built in (their channel polarities are
not pinned down); registries are user-extensible.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

from .errors import UnknownColorError, ValidationError
from .shift import ShiftPlan

DEFAULT_MAGNITUDE = 0.07
LIME_GREEN = (50, 205, 50)

#: name -> (channel -> direction weight, swatch or None).  Weights are
#: scaled by the requested magnitude when a plan is built.
_BUILTIN_REGISTRY: dict[str, tuple[dict[int, float], tuple[int, int, int] | None]] = {
    "green": ({2: 1.0, 3: 1.0}, LIME_GREEN),
    "cyan": ({2: 1.0}, None),
    "yellow": ({3: 1.0}, None),
    "red": ({2: -1.0}, None),
    "blue_purple": ({3: -1.0}, None),
    "orange": ({1: -1.0, 2: -1.0, 3: 1.0}, None),
}


@dataclass(frozen=True)
class ColorPlan:
    """A named set of signed target shifts, channels numbered 1-4."""

    name: str
    shifts: Mapping[int, float]
    swatch_rgb: tuple[int, int, int] | None = None

    def __post_init__(self):
        shifts = dict(self.shifts)
        if not shifts:
            raise ValidationError("a color plan needs at least one channel shift")
        for ch, s in shifts.items():
            if not isinstance(ch, int) or not 1 <= ch <= 4:
                raise ValidationError(f"channel must be in 1..4, got {ch!r}")
            if not abs(s) <= 0.5:
                raise ValidationError(
                    f"|target shift| must be <= 0.5, got {s} for channel {ch}"
                )
        object.__setattr__(self, "shifts", shifts)
        if self.swatch_rgb is not None:
            rgb = tuple(int(v) for v in self.swatch_rgb)
            if len(rgb) != 3 or not all(0 <= v <= 255 for v in rgb):
                raise ValidationError(f"swatch must be three 8-bit values, got {rgb}")
            object.__setattr__(self, "swatch_rgb", rgb)

    def to_json(self) -> str:
        doc = {"name": self.name, "shifts": {str(c): s for c, s in sorted(self.shifts.items())}}
        if self.swatch_rgb is not None:
            doc["swatch_rgb"] = list(self.swatch_rgb)
        return json.dumps(doc, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "ColorPlan":
        doc = json.loads(text)
        swatch = doc.get("swatch_rgb")
        return cls(
            name=doc["name"],
            shifts={int(c): float(s) for c, s in doc["shifts"].items()},
            swatch_rgb=tuple(swatch) if swatch is not None else None,
        )


def registry_names(registry=None) -> tuple[str, ...]:
    reg = _BUILTIN_REGISTRY if registry is None else registry
    return tuple(sorted(reg))


def plan_for_color(name: str, magnitude: float = DEFAULT_MAGNITUDE, registry=None) -> ColorPlan:
    """Look up a color and scale its direction weights by ``magnitude``."""
    if not 0.0 < magnitude <= 0.5:
        raise ValidationError(f"magnitude must lie in (0, 0.5], got {magnitude}")
    reg = _BUILTIN_REGISTRY if registry is None else registry
    if name not in reg:
        raise UnknownColorError(name, registry_names(reg))
    weights, swatch = reg[name]
    return ColorPlan(
        name=name,
        shifts={ch: w * magnitude for ch, w in weights.items()},
        swatch_rgb=swatch,
    )


def to_shift_plan(plan: ColorPlan) -> ShiftPlan:
    """Convert 1-based plan channels to a 0-based, unresolved ShiftPlan."""
    for ch in plan.shifts:
        if not 1 <= ch <= 4:
            raise ValidationError(f"channel must be in 1..4, got {ch}")
    return ShiftPlan(entries={ch - 1: s for ch, s in plan.shifts.items()})


def load_registry(path: str | Path) -> dict:
    """Read a user registry: JSON mapping name -> {channel: weight}.

    Loaded entries overlay the built-in colors; weights follow the same
    magnitude-scaling convention as the built-ins (and may carry an
    optional swatch via a "swatch_rgb" key).
    """
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot read color registry {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise ValidationError("color registry must be a JSON object")
    merged = dict(_BUILTIN_REGISTRY)
    for name, entry in doc.items():
        if not isinstance(entry, dict) or not entry:
            raise ValidationError(f"registry entry {name!r} must be a non-empty object")
        swatch = entry.pop("swatch_rgb", None)
        weights = {}
        for ch, wgt in entry.items():
            try:
                chn = int(ch)
                wgt = float(wgt)
            except (TypeError, ValueError) as exc:
                raise ValidationError(
                    f"registry entry {name!r}: bad channel/weight pair {ch!r}: {wgt!r}"
                ) from exc
            if not 1 <= chn <= 4:
                raise ValidationError(f"registry entry {name!r}: channel must be 1..4")
            weights[chn] = wgt
        merged[name] = (weights, tuple(swatch) if swatch is not None else None)
    return merged
