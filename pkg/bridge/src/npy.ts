/**
 * NPY v1.x reader for exported latent tensors.
 *
 * The primary CLI exports float32 arrays in C order with shape
 * (h, w, c); that is the only layout accepted here.
 */

import { readFileSync } from 'node:fs'

export interface Latents {
  height: number
  width: number
  channels: number
  /** Row-major (i, j, c) float32 values. */
  data: Float32Array
}

const MAGIC = Buffer.from('\x93NUMPY', 'latin1')

export function parseNpy(buf: Buffer): Latents {
  if (buf.length < 10 || !buf.subarray(0, 6).equals(MAGIC)) {
    throw new Error('not an NPY file (bad magic)')
  }
  const major = buf.readUInt8(6)
  let headerLen: number
  let headerStart: number
  if (major === 1) {
    headerLen = buf.readUInt16LE(8)
    headerStart = 10
  } else if (major === 2 || major === 3) {
    headerLen = buf.readUInt32LE(8)
    headerStart = 12
  } else {
    throw new Error(`unsupported NPY version ${major}`)
  }
  const header = buf.subarray(headerStart, headerStart + headerLen).toString('latin1')

  const descr = /'descr'\s*:\s*'([^']+)'/.exec(header)?.[1]
  if (descr !== '<f4') {
    throw new Error(`expected little-endian float32 ('<f4'), got ${descr ?? 'unknown'}`)
  }
  const fortran = /'fortran_order'\s*:\s*(True|False)/.exec(header)?.[1]
  if (fortran !== 'False') {
    throw new Error('fortran-ordered arrays are not supported')
  }
  const shapeText = /'shape'\s*:\s*\(([^)]*)\)/.exec(header)?.[1]
  if (shapeText === undefined) {
    throw new Error('NPY header has no shape')
  }
  const shape = shapeText
    .split(',')
    .map((s) => s.trim())
    .filter((s) => s.length > 0)
    .map((s) => Number.parseInt(s, 10))
  if (shape.length !== 3 || shape.some((d) => !Number.isFinite(d) || d < 1)) {
    throw new Error(`latents must be a 3-D (h, w, c) array, got shape (${shapeText})`)
  }
  const [height, width, channels] = shape
  const count = height * width * channels
  const payload = buf.subarray(headerStart + headerLen)
  if (payload.length !== count * 4) {
    throw new Error(`payload is ${payload.length} bytes, expected ${count * 4}`)
  }
  // copy into an aligned buffer; node buffers may sit at odd offsets
  const data = new Float32Array(count)
  for (let i = 0; i < count; i++) data[i] = payload.readFloatLE(i * 4)
  return { height, width, channels, data }
}

export function readNpy(path: string): Latents {
  return parseNpy(readFileSync(path))
}

/** Latent geometries accepted by the bridge: 64x64x4 or 128x128x4. */
export function assertLatentDims(latents: Latents): void {
  const { height, width, channels } = latents
  const ok =
    channels === 4 &&
    ((height === 64 && width === 64) || (height === 128 && width === 128))
  if (!ok) {
    throw new Error(
      `latents must be 64x64x4 or 128x128x4, got ${height}x${width}x${channels}`,
    )
  }
}
