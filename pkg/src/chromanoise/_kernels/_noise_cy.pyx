# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled noise kernels.

Bit-for-bit mirror of ``pykernels``: splitmix64-seeded xoshiro256++
streams per (seed, channel), Box-Muller on 53-bit uniforms, float32
stores.  Compiled without -ffast-math so libm calls and rounding match
the interpreter exactly; the parity test in the suite enforces this.
"""

from libc.math cimport cos, log, sin, sqrt
from libc.stdint cimport uint64_t

import numpy as np

BACKEND = "cython"

cdef double TWO_PI = 6.283185307179586
cdef double INV53 = 1.0 / 9007199254740992.0
cdef uint64_t GOLDEN = 0x9E3779B97F4A7C15ULL


cdef inline uint64_t _rotl(uint64_t x, int k) noexcept nogil:
    return (x << k) | (x >> (64 - k))


cdef inline uint64_t _sm_next(uint64_t* state) noexcept nogil:
    state[0] = state[0] + GOLDEN
    cdef uint64_t z = state[0]
    z = (z ^ (z >> 30)) * <uint64_t>0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * <uint64_t>0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef void _channel_state(uint64_t seed, int channel, uint64_t* s) noexcept nogil:
    cdef uint64_t sm = seed
    cdef int i
    for i in range(4 * channel):
        _sm_next(&sm)
    for i in range(4):
        s[i] = _sm_next(&sm)
    if s[0] == 0 and s[1] == 0 and s[2] == 0 and s[3] == 0:
        s[0] = GOLDEN


cdef inline uint64_t _xo_next(uint64_t* s) noexcept nogil:
    cdef uint64_t result = _rotl(s[0] + s[3], 23) + s[0]
    cdef uint64_t t = s[1] << 17
    s[2] ^= s[0]
    s[3] ^= s[1]
    s[1] ^= s[2]
    s[0] ^= s[3]
    s[2] ^= t
    s[3] = _rotl(s[3], 45)
    return result


def channel_state(seed, channel):
    """xoshiro256++ state for one (seed, channel) stream."""
    cdef uint64_t s[4]
    _channel_state(<uint64_t>seed, <int>channel, s)
    return (s[0], s[1], s[2], s[3])


def stream_u64(seed, channel, count):
    """Raw xoshiro256++ outputs of one stream (test/bench hook)."""
    cdef uint64_t s[4]
    _channel_state(<uint64_t>seed, <int>channel, s)
    cdef Py_ssize_t i
    out = []
    for i in range(count):
        out.append(_xo_next(s))
    return out


def fill_standard_normal(seed, h, w, c):
    """(h, w, c) float32 array of seeded standard normals."""
    arr = np.empty((h, w, c), dtype=np.float32)
    cdef float[:, :, ::1] out = arr
    cdef uint64_t cseed = <uint64_t>seed
    cdef uint64_t s[4]
    cdef uint64_t x1, x2
    cdef double u1, u2, r, theta
    cdef Py_ssize_t n = <Py_ssize_t>h * <Py_ssize_t>w
    cdef Py_ssize_t ww = w
    cdef int nch = <int>c
    cdef Py_ssize_t i
    cdef int ch
    with nogil:
        for ch in range(nch):
            _channel_state(cseed, ch, s)
            i = 0
            while i < n:
                x1 = _xo_next(s)
                x2 = _xo_next(s)
                u1 = <double>(x1 >> 11) * INV53
                u2 = <double>(x2 >> 11) * INV53
                r = sqrt(-2.0 * log(1.0 - u1))
                theta = TWO_PI * u2
                out[i // ww, i % ww, ch] = <float>(r * cos(theta))
                i += 1
                if i < n:
                    out[i // ww, i % ww, ch] = <float>(r * sin(theta))
                    i += 1
    return arr
