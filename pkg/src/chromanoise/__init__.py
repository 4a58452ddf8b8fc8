"""Deterministic initial-noise engineering for chroma-key latent generation.

Pipeline: sample seeded noise, solve per-channel mean shifts against
positive-ratio targets, blend original and color-shifted noise through
Gaussian masks, and verify the mechanism end to end with a toy DDIM
sampler driven by closed-form oracle denoisers.
"""

from .colors import ColorPlan, plan_for_color, to_shift_plan
from .errors import (
    ChromanoiseError,
    EmptyRegionError,
    FormatError,
    NumericalFailureError,
    StateError,
    UnknownColorError,
    UnsatisfiableTargetError,
    ValidationError,
)
from .mask import Mask, MaskSpec, blend, compose_masks, gaussian_mask
from .metrics import UniformityReport, border_uniformity, mode_fraction
from .sampler import (
    ChromaExperimentResult,
    Denoiser,
    MixtureModel,
    SamplerConfig,
    ddim_sample,
    gaussian_oracle_denoiser,
    mixture_oracle_denoiser,
    run_chroma_experiment,
)
from .shift import ShiftPlan, apply_shift, resolve_plan, solve_channel_shift
from .tensor import ChannelStats, NoiseTensor, channel_stats, sample_standard_noise

__version__ = "0.1.0"

__all__ = [
    "ChannelStats",
    "ChromaExperimentResult",
    "ChromanoiseError",
    "ColorPlan",
    "Denoiser",
    "EmptyRegionError",
    "FormatError",
    "Mask",
    "MaskSpec",
    "MixtureModel",
    "NoiseTensor",
    "NumericalFailureError",
    "SamplerConfig",
    "ShiftPlan",
    "StateError",
    "UniformityReport",
    "UnknownColorError",
    "UnsatisfiableTargetError",
    "ValidationError",
    "apply_shift",
    "blend",
    "border_uniformity",
    "channel_stats",
    "compose_masks",
    "ddim_sample",
    "gaussian_mask",
    "gaussian_oracle_denoiser",
    "mixture_oracle_denoiser",
    "mode_fraction",
    "plan_for_color",
    "resolve_plan",
    "run_chroma_experiment",
    "sample_standard_noise",
    "solve_channel_shift",
    "to_shift_plan",
]
