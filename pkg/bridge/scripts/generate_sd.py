#!/usr/bin/env python3
"""Run a locally installed Stable Diffusion pipeline with fixed initial
latents and write the result as a binary PPM (the bridge re-encodes to
PNG).

Requires `torch` and `diffusers` plus locally available model weights;
exits 4 with a clear message when those are missing so callers can tell
"no pipeline here" apart from real failures.

The latents file is the NPY export of the primary toolkit: (h, w, c)
float32, which this script transposes to the (1, c, h, w) layout
pipelines expect.  The prompt is passed through untouched (no
background-color prompt text is added).
"""

import argparse
import sys


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--model", required=True)
    parser.add_argument("--prompt", default="")
    parser.add_argument("--latents", required=True)
    parser.add_argument("--steps", type=int, default=50)
    parser.add_argument("--guidance", type=float, default=7.5)
    parser.add_argument("--out-ppm", required=True)
    args = parser.parse_args()

    try:
        import numpy as np
        import torch
        from diffusers import DDIMScheduler, DiffusionPipeline
    except ImportError as exc:
        print(f"pipeline unavailable: {exc}", file=sys.stderr)
        return 4

    arr = np.load(args.latents, allow_pickle=False)
    if arr.ndim != 3:
        print(f"latents must be 3-D (h, w, c), got {arr.shape}", file=sys.stderr)
        return 2
    latents = torch.from_numpy(arr.transpose(2, 0, 1)[None].copy()).to(torch.float32)

    try:
        pipe = DiffusionPipeline.from_pretrained(args.model)
    except Exception as exc:  # missing weights, network, etc.
        print(f"pipeline unavailable: {exc}", file=sys.stderr)
        return 4
    pipe.scheduler = DDIMScheduler.from_config(pipe.scheduler.config)
    device = "cuda" if torch.cuda.is_available() else "cpu"
    pipe = pipe.to(device)
    latents = latents.to(device) * pipe.scheduler.init_noise_sigma

    result = pipe(
        prompt=args.prompt,
        latents=latents,
        num_inference_steps=args.steps,
        guidance_scale=args.guidance,
    )
    image = result.images[0]
    rgb = np.asarray(image.convert("RGB"), dtype=np.uint8)
    with open(args.out_ppm, "wb") as f:
        f.write(f"P6\n{rgb.shape[1]} {rgb.shape[0]}\n255\n".encode("ascii"))
        f.write(rgb.tobytes())
    return 0


if __name__ == "__main__":
    sys.exit(main())
