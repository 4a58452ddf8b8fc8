"""Pure-Python noise kernels (reference implementation).

This module defines the authoritative bit-level algorithm for seeded
standard-normal generation; the compiled kernel in ``_noise_cy`` must
reproduce it bit for bit.

Pinned algorithm
----------------
* Stream seeding: one splitmix64 sequence is started from ``seed``;
  channel ``c`` takes outputs ``4c .. 4c+3`` as its xoshiro256++ state
  (so a channel's stream does not depend on how many channels exist).
  An all-zero state (never observed in practice) is patched to
  ``s0 = 0x9E3779B97F4A7C15``.
* Uniforms: ``u = (x >> 11) * 2**-53`` from each 64-bit output,
  giving 53-bit uniforms in [0, 1).
* Normals: Box-Muller pairs ``r*cos(theta), r*sin(theta)`` with
  ``r = sqrt(-2*log(1 - u1))`` and ``theta = 2*pi*u2``; 1 - u1 is exact
  in IEEE-754 doubles, so log never sees 0.  For an odd pixel count the
  second normal of the final pair is discarded.
* Each channel fills its h*w pixels in row-major order; doubles are
  rounded to float32 on store.
"""

import math

import numpy as np

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_TWO_PI = 6.283185307179586
_INV53 = 1.0 / 9007199254740992.0  # 2**-53

BACKEND = "python"


def _splitmix64_run(seed: int, count: int) -> list[int]:
    out = []
    s = seed & _MASK64
    for _ in range(count):
        s = (s + _GOLDEN) & _MASK64
        z = s
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        out.append(z ^ (z >> 31))
    return out


def channel_state(seed: int, channel: int) -> tuple[int, int, int, int]:
    """xoshiro256++ state for one (seed, channel) stream."""
    words = _splitmix64_run(seed, 4 * channel + 4)[4 * channel:]
    if not any(words):
        words[0] = _GOLDEN
    return tuple(words)


def stream_u64(seed: int, channel: int, count: int) -> list[int]:
    """Raw xoshiro256++ outputs of one stream (test/bench hook)."""
    s0, s1, s2, s3 = channel_state(seed, channel)
    out = []
    for _ in range(count):
        su = (s0 + s3) & _MASK64
        r = ((((su << 23) & _MASK64) | (su >> 41)) + s0) & _MASK64
        t = (s1 << 17) & _MASK64
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = ((s3 << 45) & _MASK64) | (s3 >> 19)
        out.append(r)
    return out


def _channel_normals(seed: int, channel: int, n: int) -> list[float]:
    s0, s1, s2, s3 = channel_state(seed, channel)
    log = math.log
    sqrt = math.sqrt
    cos = math.cos
    sin = math.sin
    out = [0.0] * n
    i = 0
    while i < n:
        su = (s0 + s3) & _MASK64
        x1 = ((((su << 23) & _MASK64) | (su >> 41)) + s0) & _MASK64
        t = (s1 << 17) & _MASK64
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = ((s3 << 45) & _MASK64) | (s3 >> 19)

        su = (s0 + s3) & _MASK64
        x2 = ((((su << 23) & _MASK64) | (su >> 41)) + s0) & _MASK64
        t = (s1 << 17) & _MASK64
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = ((s3 << 45) & _MASK64) | (s3 >> 19)

        u1 = (x1 >> 11) * _INV53
        u2 = (x2 >> 11) * _INV53
        r = sqrt(-2.0 * log(1.0 - u1))
        theta = _TWO_PI * u2
        out[i] = r * cos(theta)
        i += 1
        if i < n:
            out[i] = r * sin(theta)
            i += 1
    return out


def fill_standard_normal(seed: int, h: int, w: int, c: int) -> np.ndarray:
    """(h, w, c) float32 array of seeded standard normals."""
    arr = np.empty((h, w, c), dtype=np.float32)
    n = h * w
    for ch in range(c):
        plane = np.array(_channel_normals(seed, ch, n), dtype=np.float32)
        arr[:, :, ch] = plane.reshape(h, w)
    return arr
