import { describe, expect, it } from 'vitest'

import { assertLatentDims, parseNpy } from '../src/npy.js'
import { encodeNpy } from './helpers.js'

describe('parseNpy', () => {
  it('round-trips shape and values', () => {
    const values = new Float32Array([1.5, -2.25, 0, 3.125, -0.5, 42])
    const buf = encodeNpy([1, 2, 3], values)
    const latents = parseNpy(buf)
    expect([latents.height, latents.width, latents.channels]).toEqual([1, 2, 3])
    expect(Array.from(latents.data)).toEqual(Array.from(values))
  })

  it('rejects bad magic', () => {
    const buf = encodeNpy([1, 1, 1], new Float32Array([0]))
    buf[0] = 0x42
    expect(() => parseNpy(buf)).toThrow(/magic/)
  })

  it('rejects non-float32 dtypes', () => {
    const buf = encodeNpy([1, 1, 1], new Float32Array([0]), '<f8')
    expect(() => parseNpy(buf)).toThrow(/<f4/)
  })

  it('rejects fortran order', () => {
    const buf = encodeNpy([1, 1, 1], new Float32Array([0]), '<f4', true)
    expect(() => parseNpy(buf)).toThrow(/fortran/)
  })

  it('rejects non-3-D shapes', () => {
    const header = `{'descr': '<f4', 'fortran_order': False, 'shape': (4,), }`
    const padded = Math.ceil((10 + header.length + 1) / 64) * 64
    const text = header + ' '.repeat(padded - 10 - header.length - 1) + '\n'
    const head = Buffer.alloc(10)
    Buffer.from('\x93NUMPY', 'latin1').copy(head, 0)
    head.writeUInt8(1, 6)
    head.writeUInt16LE(text.length, 8)
    const buf = Buffer.concat([head, Buffer.from(text), Buffer.alloc(16)])
    expect(() => parseNpy(buf)).toThrow(/3-D/)
  })

  it('rejects truncated payloads', () => {
    const buf = encodeNpy([2, 2, 1], new Float32Array([1, 2, 3, 4]))
    expect(() => parseNpy(buf.subarray(0, buf.length - 4))).toThrow(/payload/)
  })
})

describe('assertLatentDims', () => {
  const latents = (h: number, w: number, c: number) => ({
    height: h,
    width: w,
    channels: c,
    data: new Float32Array(h * w * c),
  })

  it('accepts the two supported geometries', () => {
    expect(() => assertLatentDims(latents(64, 64, 4))).not.toThrow()
    expect(() => assertLatentDims(latents(128, 128, 4))).not.toThrow()
  })

  it('rejects anything else', () => {
    expect(() => assertLatentDims(latents(32, 32, 4))).toThrow(/64x64x4/)
    expect(() => assertLatentDims(latents(64, 64, 3))).toThrow(/64x64x4/)
    expect(() => assertLatentDims(latents(64, 128, 4))).toThrow(/64x64x4/)
  })
})
