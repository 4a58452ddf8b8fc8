"""Command-line surface: noise | shift | mask | blend | plan | sim |
analyze | uniformity | pipeline.

Exit codes: 0 success, 2 validation/usage error, 3 numerical failure.
Machine-readable output via --json; the TKG_DEFAULT_COLOR environment
variable overrides the default plan name (green).
"""

from __future__ import annotations

import json
import os
import sys

import click
import numpy as np

from . import colors as colors_mod
from . import io as cio
from .errors import ChromanoiseError, NumericalFailureError, ValidationError
from .mask import MaskSpec, compose_masks, blend, gaussian_mask
from .metrics import border_uniformity, DEFAULT_TARGET_RGB
from .sampler import MixtureModel, SamplerConfig, run_chroma_experiment
from .shift import apply_shift, resolve_plan
from .tensor import channel_stats, sample_standard_noise


def _default_color() -> str:
    return os.environ.get("TKG_DEFAULT_COLOR", "green")


def _echo_json(doc) -> None:
    click.echo(json.dumps(doc, sort_keys=True))


def _registry(path):
    return colors_mod.load_registry(path) if path else None


def _mask_specs(mask_args, h, w) -> list[MaskSpec]:
    if mask_args:
        return [cio.parse_mask_triplet(m) for m in mask_args]
    return [MaskSpec(mu_i=h / 2.0, mu_j=w / 2.0, sigma=0.5)]


def _stats_doc(t, metadata=None):
    stats = channel_stats(t)
    return {
        "height": t.height,
        "width": t.width,
        "channels": t.channels,
        "seed": t.seed,
        "metadata": metadata if metadata else {},
        "channel_stats": [
            {
                "channel": i + 1,
                "index": i,
                "mean": s.mean,
                "std": s.std,
                "positive_ratio": s.positive_ratio,
            }
            for i, s in enumerate(stats)
        ],
    }


def _print_stats(doc):
    click.echo(f"{doc['height']}x{doc['width']}x{doc['channels']}  seed={doc['seed']}")
    click.echo("ch  index  mean       std        positive_ratio")
    for row in doc["channel_stats"]:
        click.echo(
            f"{row['channel']:>2}  {row['index']:>5}  {row['mean']:+.6f}  "
            f"{row['std']:.6f}  {row['positive_ratio']:.6f}"
        )


@click.group()
def cli():
    """Initial-noise engineering for chroma-key generation."""


@cli.command()
@click.option("--seed", type=int, required=True, help="64-bit generator seed.")
@click.option("--h", type=int, default=64, show_default=True)
@click.option("--w", type=int, default=64, show_default=True)
@click.option("--c", type=int, default=4, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@click.option("--json", "as_json", is_flag=True)
def noise(seed, h, w, c, out, as_json):
    """Sample seeded standard noise and write it."""
    t = sample_standard_noise(seed, h, w, c)
    cio.write_tensor(out, t, {"kind": "z", "seed": seed})
    doc = {"out": out, **_stats_doc(t)}
    _echo_json(doc) if as_json else click.echo(f"wrote {out}")


def _build_plan(color, channel_shifts, magnitude, registry):
    if channel_shifts:
        shifts = {}
        for spec in channel_shifts:
            ch, _, val = spec.partition("=")
            try:
                shifts[int(ch)] = float(val)
            except ValueError as exc:
                raise ValidationError(
                    f"--shift must look like CH=VALUE with CH in 1..4, got {spec!r}"
                ) from exc
        return colors_mod.ColorPlan(name="custom", shifts=shifts)
    name = color or _default_color()
    return colors_mod.plan_for_color(name, magnitude, _registry(registry))


@cli.command("shift")
@click.argument("tensor", type=click.Path(exists=True, dir_okay=False))
@click.option("--color", default=None, help="Color name (default: TKG_DEFAULT_COLOR or green).")
@click.option("--shift", "channel_shifts", multiple=True,
              help="Explicit CH=SHIFT pair, channels 1..4; repeatable.")
@click.option("--magnitude", type=float, default=colors_mod.DEFAULT_MAGNITUDE, show_default=True)
@click.option("--registry", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@click.option("--json", "as_json", is_flag=True)
def shift_cmd(tensor, color, channel_shifts, magnitude, registry, out, as_json):
    """Solve and apply a channel mean shift to a tensor."""
    t, _ = cio.read_tensor(tensor)
    plan = _build_plan(color, channel_shifts, magnitude, registry)
    resolved = resolve_plan(t, colors_mod.to_shift_plan(plan))
    shifted = apply_shift(t, resolved)
    deltas = {str(ch + 1): d for ch, d in sorted(resolved.resolved.items())}
    meta = {
        "kind": "z_star",
        "plan": json.loads(plan.to_json()),
        "deltas": deltas,
        "source": os.path.basename(tensor),
    }
    cio.write_tensor(out, shifted, meta)
    doc = {"out": out, "deltas": deltas}
    _echo_json(doc) if as_json else click.echo(
        "deltas: " + ", ".join(f"ch{c}={d:+.6f}" for c, d in deltas.items())
    )


@cli.command("mask")
@click.option("--sigma", type=float, default=None, help="Normalized spread (single mask).")
@click.option("--mu", default=None, help="Center 'i,j' (single mask).")
@click.option("--mask", "mask_args", multiple=True,
              help="sigma,mu_i,mu_j triplet; repeatable for composition.")
@click.option("--h", type=int, default=64, show_default=True)
@click.option("--w", type=int, default=64, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@click.option("--json", "as_json", is_flag=True)
def mask_cmd(sigma, mu, mask_args, h, w, out, as_json):
    """Build a Gaussian mask (or composition) and write an 8-bit PGM."""
    if mask_args and (sigma is not None or mu is not None):
        raise ValidationError("use either --mask triplets or --sigma/--mu, not both")
    if mask_args:
        m = compose_masks([cio.parse_mask_triplet(s) for s in mask_args], h, w)
    else:
        if sigma is None:
            sigma = 0.5
        if mu is None:
            mu_i, mu_j = h / 2.0, w / 2.0
        else:
            try:
                mu_i, mu_j = (float(v) for v in mu.split(","))
            except ValueError as exc:
                raise ValidationError(f"--mu must be 'i,j', got {mu!r}") from exc
        m = gaussian_mask(MaskSpec(mu_i=mu_i, mu_j=mu_j, sigma=sigma), h, w)
    cio.write_pgm(out, m)
    doc = {"out": out, "h": h, "w": w,
           "min": float(m.values.min()), "max": float(m.values.max())}
    _echo_json(doc) if as_json else click.echo(f"wrote {out}")


@cli.command("blend")
@click.option("--noise", "noise_path", type=click.Path(exists=True, dir_okay=False),
              required=True, help="Original noise tensor (foreground).")
@click.option("--color-noise", "color_path", type=click.Path(exists=True, dir_okay=False),
              required=True, help="Shifted noise tensor (background).")
@click.option("--mask", "mask_args", multiple=True, help="sigma,mu_i,mu_j; repeatable.")
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@click.option("--json", "as_json", is_flag=True)
def blend_cmd(noise_path, color_path, mask_args, out, as_json):
    """Blend original and color noise through Gaussian masks."""
    z, _ = cio.read_tensor(noise_path)
    z_star, _ = cio.read_tensor(color_path)
    specs = _mask_specs(mask_args, z.height, z.width)
    z_key = blend(z, z_star, compose_masks(specs, z.height, z.width))
    meta = {"kind": "z_key",
            "masks": [[s.sigma, s.mu_i, s.mu_j] for s in specs],
            "sources": [os.path.basename(noise_path), os.path.basename(color_path)]}
    cio.write_tensor(out, z_key, meta)
    _echo_json({"out": out}) if as_json else click.echo(f"wrote {out}")


@cli.command("plan")
@click.option("--color", default=None)
@click.option("--magnitude", type=float, default=colors_mod.DEFAULT_MAGNITUDE, show_default=True)
@click.option("--registry", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--json", "as_json", is_flag=True)
def plan_cmd(color, magnitude, registry, as_json):
    """Show the per-channel shifts for a named color."""
    plan = colors_mod.plan_for_color(color or _default_color(), magnitude, _registry(registry))
    if as_json:
        click.echo(plan.to_json())
    else:
        shifts = ", ".join(f"ch{c}={s:+.3f}" for c, s in sorted(plan.shifts.items()))
        swatch = f"  swatch={plan.swatch_rgb}" if plan.swatch_rgb else ""
        click.echo(f"{plan.name}: {shifts}{swatch}")


def _parse_mixture(text: str) -> MixtureModel:
    try:
        comps = [tuple(float(x) for x in part.split(","))
                 for part in text.split(";") if part]
    except ValueError as exc:
        raise ValidationError(f"malformed mixture {text!r}") from exc
    if any(len(c) != 3 for c in comps):
        raise ValidationError("each mixture component needs weight,mean,variance")
    return MixtureModel(components=tuple(comps))


def _render_modes(field, means, key_component, key_rgb):
    """Map nearest-mode assignment to colors: key mode -> key color,
    content modes -> spaced grays."""
    dist = np.abs(field[..., None] - np.asarray(means)[None, None, :])
    assign = np.argmin(dist, axis=-1)
    lut = np.zeros((len(means), 3), dtype=np.uint8)
    grays = np.linspace(70, 190, num=max(len(means) - 1, 1)).astype(np.uint8)
    gi = 0
    for k in range(len(means)):
        if k == key_component:
            lut[k] = key_rgb
        else:
            lut[k] = grays[min(gi, len(grays) - 1)]
            gi += 1
    return lut[assign]


@cli.command("sim")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--delta", type=float, default=None,
              help="Explicit scalar shift applied to the color noise.")
@click.option("--target-shift", type=float, default=None,
              help="Solve delta for this positive-ratio shift instead.")
@click.option("--mixture", default="0.5,-3,1;0.5,3,1", show_default=True,
              help="Semicolon-separated weight,mean,variance components.")
@click.option("--steps", type=int, default=200, show_default=True)
@click.option("--schedule", type=click.Choice(["linear", "trig"]), default="linear",
              show_default=True)
@click.option("--mask", "mask_args", multiple=True, help="sigma,mu_i,mu_j; repeatable.")
@click.option("--h", type=int, default=64, show_default=True)
@click.option("--w", type=int, default=64, show_default=True)
@click.option("--out-json", type=click.Path(dir_okay=False), default=None)
@click.option("--out-ppm", type=click.Path(dir_okay=False), default=None)
@click.option("--json", "as_json", is_flag=True)
def sim_cmd(seed, delta, target_shift, mixture, steps, schedule, mask_args, h, w,
            out_json, out_ppm, as_json):
    """Run the toy shift-blend-sample experiment and report mode capture."""
    if (delta is None) == (target_shift is None):
        raise ValidationError("give exactly one of --delta or --target-shift")
    mix = _parse_mixture(mixture)
    cfg = SamplerConfig(sample_steps=steps, schedule=schedule)
    if target_shift is not None:
        from .shift import solve_channel_shift

        z = sample_standard_noise(seed, h, w, 1)
        delta = solve_channel_shift(z, 0, target_shift)
    specs = _mask_specs(mask_args, h, w)
    result = run_chroma_experiment(delta, specs, mix, seed, cfg, h=h, w=w)
    doc = {
        "seed": seed,
        "delta": result.delta,
        "key_component": result.key_component,
        "fractions": {k: list(v) for k, v in result.fractions.items()},
        "steps": steps,
        "schedule": schedule,
        "mixture": [list(c) for c in mix.components],
        "masks": [[s.sigma, s.mu_i, s.mu_j] for s in specs],
    }
    if out_json:
        cio._atomic_write(out_json, (json.dumps(doc, sort_keys=True) + "\n").encode())
    if out_ppm:
        img = _render_modes(result.x0.values[:, :, 0], mix.means,
                            result.key_component, DEFAULT_TARGET_RGB)
        cio.write_ppm(out_ppm, img)
    if as_json:
        _echo_json(doc)
    else:
        click.echo(f"delta={result.delta:+.6f}  key_component={result.key_component}")
        for region, fr in result.fractions.items():
            click.echo(f"  {region:10s} " + " ".join(f"{f:.4f}" for f in fr))


@cli.command("analyze")
@click.argument("tensor", type=click.Path(exists=True, dir_okay=False))
@click.option("--json", "as_json", is_flag=True)
def analyze_cmd(tensor, as_json):
    """Print per-channel statistics of a tensor file."""
    t, metadata = cio.read_tensor(tensor)
    doc = _stats_doc(t, metadata)
    _echo_json(doc) if as_json else _print_stats(doc)


@cli.command("uniformity")
@click.argument("image", type=click.Path(exists=True, dir_okay=False))
@click.option("--target", default=",".join(str(v) for v in DEFAULT_TARGET_RGB),
              show_default=True, help="Target R,G,B key color.")
@click.option("--border-fraction", type=float, default=0.1, show_default=True)
@click.option("--tolerance", type=int, default=20, show_default=True)
@click.option("--json", "as_json", is_flag=True)
def uniformity_cmd(image, target, border_fraction, tolerance, as_json):
    """Score border-ring uniformity of a PPM image against a key color."""
    try:
        rgb = tuple(int(v) for v in target.split(","))
    except ValueError as exc:
        raise ValidationError(f"--target must be R,G,B, got {target!r}") from exc
    report = border_uniformity(cio.read_ppm(image), rgb, border_fraction, tolerance)
    doc = report.to_dict()
    if as_json:
        _echo_json(doc)
    else:
        click.echo(f"pass_fraction={report.pass_fraction:.4f}  "
                   f"mean_border_rgb=({report.mean_border_rgb[0]:.1f}, "
                   f"{report.mean_border_rgb[1]:.1f}, {report.mean_border_rgb[2]:.1f})  "
                   f"max_deviation={report.max_deviation}")


@cli.command("pipeline")
@click.option("--seed", type=int, default=None)
@click.option("--color", default=None)
@click.option("--shift", "channel_shifts", multiple=True,
              help="Explicit CH=SHIFT pair, channels 1..4; repeatable.")
@click.option("--magnitude", type=float, default=colors_mod.DEFAULT_MAGNITUDE, show_default=True)
@click.option("--h", type=int, default=None)
@click.option("--w", type=int, default=None)
@click.option("--c", type=int, default=None)
@click.option("--mask", "mask_args", multiple=True, help="sigma,mu_i,mu_j; repeatable.")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
              default=None, help="RunConfig JSON; explicit flags override it.")
@click.option("--registry", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@click.option("--json", "as_json", is_flag=True)
def pipeline_cmd(seed, color, channel_shifts, magnitude, h, w, c, mask_args,
                 config_path, registry, out, as_json):
    """Sample, solve shifts, apply, compose masks, blend, write."""
    run = None
    if config_path:
        with open(config_path, encoding="utf-8") as f:
            run = cio.run_config_from_json(f.read())
    seed = seed if seed is not None else (run.seed if run else 0)
    h = h if h is not None else (run.height if run else 64)
    w = w if w is not None else (run.width if run else 64)
    c = c if c is not None else (run.channels if run else 4)

    if channel_shifts or color or run is None or (run.color is None and run.plan is None):
        plan = _build_plan(color, channel_shifts, magnitude, registry)
    elif run.plan is not None:
        plan = run.plan
    else:
        plan = colors_mod.plan_for_color(run.color, magnitude, _registry(registry))

    if mask_args:
        specs = [cio.parse_mask_triplet(m) for m in mask_args]
    elif run is not None and run.masks:
        specs = list(run.masks)
    else:
        specs = [MaskSpec(mu_i=h / 2.0, mu_j=w / 2.0, sigma=0.5)]

    z = sample_standard_noise(seed, h, w, c)
    resolved = resolve_plan(z, colors_mod.to_shift_plan(plan))
    z_star = apply_shift(z, resolved)
    z_key = blend(z, z_star, compose_masks(specs, h, w))
    deltas = {str(ch + 1): d for ch, d in sorted(resolved.resolved.items())}
    meta = {
        "kind": "z_key",
        "seed": seed,
        "plan": json.loads(plan.to_json()),
        "deltas": deltas,
        "masks": [[s.sigma, s.mu_i, s.mu_j] for s in specs],
    }
    cio.write_tensor(out, z_key, meta)
    doc = {"out": out, "seed": seed, "deltas": deltas,
           "masks": meta["masks"], "plan": meta["plan"]}
    _echo_json(doc) if as_json else click.echo(f"wrote {out}")


def main(argv=None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.UsageError as exc:
        click.echo(f"error: {exc.format_message()}", err=True)
        return 2
    except click.ClickException as exc:
        exc.show()
        return exc.exit_code
    except NumericalFailureError as exc:
        click.echo(f"numerical failure: {exc}", err=True)
        return 3
    except ChromanoiseError as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    except OSError as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
