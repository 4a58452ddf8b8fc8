"""File formats and run configuration.

TKGN container (canonical tensor format, little-endian):

    magic   "TKGN"                      4 bytes
    version u16 = 1                     2 bytes
    h, w, c u32                         12 bytes
    seed    u64 (all-ones = absent)     8 bytes
    mlen    u32                         4 bytes
    metadata UTF-8 JSON                 mlen - 4 bytes
    payload float32, row-major (i, j, c)

``mlen`` counts the metadata block including its own length field, so a
file is exactly ``26 + mlen + 4*h*w*c`` bytes.  Tensors may also be
exported to NPY v1.0 (choose a ``.npy`` output path) for consumption by
external tools; masks serialize to 8-bit PGM (P5) and toy images to
PPM (P6).  All writers stage to a temp file and rename, so a failed
write never leaves a partial file behind.
"""

from __future__ import annotations

import json
import math
import os
import struct
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .colors import ColorPlan
from .errors import FormatError, ValidationError
from .mask import Mask, MaskSpec
from .sampler import SamplerConfig
from .tensor import MAX_ELEMENTS, NoiseTensor

_MAGIC = b"TKGN"
_VERSION = 1
_SEED_ABSENT = 0xFFFFFFFFFFFFFFFF
_HEADER = struct.Struct("<4sHIIIQ")  # magic, version, h, w, c, seed


def _atomic_write(path: str | Path, data: bytes) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as f:
            f.write(data)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def tensor_to_bytes(t: NoiseTensor, metadata: dict | None = None) -> bytes:
    meta = json.dumps(metadata or {}, sort_keys=True).encode("utf-8")
    seed = _SEED_ABSENT if t.seed is None else t.seed
    header = _HEADER.pack(_MAGIC, _VERSION, t.height, t.width, t.channels, seed)
    payload = np.ascontiguousarray(t.values, dtype="<f4").tobytes()
    return header + struct.pack("<I", 4 + len(meta)) + meta + payload


def tensor_from_bytes(data: bytes) -> tuple[NoiseTensor, dict]:
    if len(data) < _HEADER.size + 4:
        raise FormatError("truncated tensor file")
    magic, version, h, w, c, seed = _HEADER.unpack_from(data, 0)
    if magic != _MAGIC:
        raise FormatError(f"bad magic {magic!r}; expected {_MAGIC!r}")
    if version != _VERSION:
        raise FormatError(f"unsupported version {version}")
    if min(h, w, c) < 1 or h * w * c > MAX_ELEMENTS:
        raise FormatError(f"bad dimensions {h}x{w}x{c}")
    (mlen,) = struct.unpack_from("<I", data, _HEADER.size)
    if mlen < 4:
        raise FormatError("metadata block length must be >= 4")
    meta_end = _HEADER.size + mlen
    expected = meta_end + 4 * h * w * c
    if len(data) != expected:
        raise FormatError(
            f"file length {len(data)} != expected {expected} for {h}x{w}x{c}"
        )
    meta_raw = data[_HEADER.size + 4:meta_end]
    try:
        metadata = json.loads(meta_raw.decode("utf-8")) if meta_raw else {}
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise FormatError(f"bad metadata JSON: {exc}") from exc
    values = np.frombuffer(data, dtype="<f4", offset=meta_end).reshape(h, w, c)
    values = values.astype(np.float32)  # own, native-endian copy
    if not np.isfinite(values).all():
        raise FormatError("payload contains non-finite values")
    t = NoiseTensor(values, seed=None if seed == _SEED_ABSENT else seed)
    return t, metadata


def write_tensor(path: str | Path, t: NoiseTensor, metadata: dict | None = None) -> None:
    """Write TKGN, or NPY v1.0 when the path ends in .npy (metadata dropped)."""
    path = Path(path)
    if path.suffix == ".npy":
        _atomic_write(path, _npy_bytes(t.values))
    else:
        _atomic_write(path, tensor_to_bytes(t, metadata))


def read_tensor(path: str | Path) -> tuple[NoiseTensor, dict]:
    """Read a TKGN (or exported NPY) tensor file."""
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc
    if data[:6] == b"\x93NUMPY":
        return _tensor_from_npy(path), {}
    return tensor_from_bytes(data)


def _npy_bytes(values: np.ndarray) -> bytes:
    import io as _io

    buf = _io.BytesIO()
    np.save(buf, np.ascontiguousarray(values, dtype="<f4"))
    return buf.getvalue()


def _tensor_from_npy(path: str | Path) -> NoiseTensor:
    try:
        arr = np.load(path, allow_pickle=False)
    except ValueError as exc:
        raise FormatError(f"bad NPY file {path}: {exc}") from exc
    if arr.ndim != 3:
        raise FormatError(f"NPY tensor must be 3-D, got shape {arr.shape}")
    return NoiseTensor(arr.astype(np.float32), seed=None)


def _quantize(values: np.ndarray) -> np.ndarray:
    # round half up, pinned independent of the platform rounding mode
    return np.clip(np.floor(values * 255.0 + 0.5), 0, 255).astype(np.uint8)


def write_pgm(path: str | Path, mask: Mask) -> None:
    """8-bit binary PGM of a mask; gray = round(255 * A)."""
    header = f"P5\n{mask.width} {mask.height}\n255\n".encode("ascii")
    _atomic_write(path, header + _quantize(mask.values).tobytes())


def write_ppm(path: str | Path, image: np.ndarray) -> None:
    """8-bit binary PPM from an (H, W, 3) uint8 array."""
    img = np.asarray(image)
    if img.ndim != 3 or img.shape[2] != 3 or img.dtype != np.uint8:
        raise ValidationError("image must be an (H, W, 3) uint8 array")
    header = f"P6\n{img.shape[1]} {img.shape[0]}\n255\n".encode("ascii")
    _atomic_write(path, header + np.ascontiguousarray(img).tobytes())


def read_ppm(path: str | Path) -> np.ndarray:
    """Read a binary (P6, maxval 255) PPM into an (H, W, 3) uint8 array."""
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc
    fields, pos = [], 0
    if data[:2] != b"P6":
        raise FormatError("not a binary PPM (P6) file")
    pos = 2
    while len(fields) < 3:
        while pos < len(data) and data[pos:pos + 1].isspace():
            pos += 1
        if data[pos:pos + 1] == b"#":  # comment to end of line
            while pos < len(data) and data[pos] != 0x0A:
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos:pos + 1].isspace():
            pos += 1
        try:
            fields.append(int(data[start:pos]))
        except ValueError as exc:
            raise FormatError(f"bad PPM header near byte {start}") from exc
    pos += 1  # single whitespace after maxval
    w, h, maxval = fields
    if maxval != 255:
        raise FormatError(f"only maxval 255 supported, got {maxval}")
    if w < 1 or h < 1:
        raise FormatError(f"bad PPM dimensions {w}x{h}")
    expected = 3 * w * h
    raw = data[pos:pos + expected]
    if len(raw) != expected:
        raise FormatError("truncated PPM payload")
    return np.frombuffer(raw, dtype=np.uint8).reshape(h, w, 3).copy()


_RUN_KEYS = {"seed", "color", "plan", "masks", "height", "width", "channels", "sampler"}
_SAMPLER_KEYS = {"train_steps", "sample_steps", "beta_start", "beta_end", "schedule"}


@dataclass(frozen=True)
class RunConfig:
    """Validated pipeline inputs (seed, plan, masks, dims, sampler)."""

    seed: int = 0
    color: str | None = None
    plan: ColorPlan | None = None
    masks: tuple[MaskSpec, ...] = ()
    height: int = 64
    width: int = 64
    channels: int = 4
    sampler: SamplerConfig = field(default_factory=SamplerConfig)

    def __post_init__(self):
        if not 0 <= self.seed < 2**64:
            raise ValidationError("seed must be a 64-bit unsigned integer")
        if self.color is not None and self.plan is not None:
            raise ValidationError("give either a color name or an explicit plan, not both")
        for name, dim in (("height", self.height), ("width", self.width),
                          ("channels", self.channels)):
            if not isinstance(dim, int) or dim < 1:
                raise ValidationError(f"{name} must be a positive integer")


def parse_mask_triplet(text: str) -> MaskSpec:
    """Parse a 'sigma,mu_i,mu_j' triplet (the CLI/RunConfig mask form)."""
    parts = text.split(",") if isinstance(text, str) else list(text)
    if len(parts) != 3:
        raise ValidationError(
            f"mask must be three comma-separated numbers sigma,mu_i,mu_j, got {text!r}"
        )
    try:
        sigma, mu_i, mu_j = (float(p) for p in parts)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"malformed mask triplet {text!r}") from exc
    if not all(math.isfinite(v) for v in (sigma, mu_i, mu_j)):
        raise ValidationError(f"mask parameters must be finite, got {text!r}")
    return MaskSpec(mu_i=mu_i, mu_j=mu_j, sigma=sigma)


def run_config_from_json(text: str) -> RunConfig:
    """Parse and validate a RunConfig document; unknown keys are rejected."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"bad run config JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ValidationError("run config must be a JSON object")
    unknown = set(doc) - _RUN_KEYS
    if unknown:
        raise ValidationError(f"unknown run config keys: {', '.join(sorted(unknown))}")

    plan = None
    if "plan" in doc:
        p = doc["plan"]
        if not isinstance(p, dict) or "shifts" not in p:
            raise ValidationError('plan must be an object with a "shifts" map')
        swatch = p.get("swatch_rgb")
        plan = ColorPlan(
            name=p.get("name", "custom"),
            shifts={int(c): float(s) for c, s in p["shifts"].items()},
            swatch_rgb=tuple(swatch) if swatch is not None else None,
        )

    sampler = SamplerConfig()
    if "sampler" in doc:
        s = doc["sampler"]
        if not isinstance(s, dict):
            raise ValidationError("sampler must be a JSON object")
        unknown = set(s) - _SAMPLER_KEYS
        if unknown:
            raise ValidationError(f"unknown sampler keys: {', '.join(sorted(unknown))}")
        sampler = SamplerConfig(**s)

    masks = tuple(parse_mask_triplet(m) for m in doc.get("masks", []))
    return RunConfig(
        seed=doc.get("seed", 0),
        color=doc.get("color"),
        plan=plan,
        masks=masks,
        height=doc.get("height", 64),
        width=doc.get("width", 64),
        channels=doc.get("channels", 4),
        sampler=sampler,
    )
