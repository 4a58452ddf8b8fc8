/**
 * Pipeline backends.
 *
 * `diffusers` drives a locally installed Stable Diffusion pipeline
 * through the bundled Python script (50 DDIM steps, guidance 7.5 by
 * default).  `preview` is a deterministic stand-in for machines
 * without model weights: it smooths each latent channel, saturates it
 * through tanh, and projects the four channels onto RGB along their
 * hue axes (channel 2 cyan, channel 3 yellow, channels 1/4 faint
 * luminance/shade), so color statistics driven by the initial noise
 * remain observable end to end.  The preview ignores the prompt and is
 * not a diffusion model; it exists for tests and demos.
 */

import { spawnSync } from 'node:child_process'
import { readFileSync } from 'node:fs'
import { dirname, join } from 'node:path'
import { fileURLToPath } from 'node:url'

import type { RgbImage } from './image.js'
import type { Latents } from './npy.js'

export interface GenerateOptions {
  model: string
  prompt: string
  steps: number
  guidance: number
}

export interface PipelineBackend {
  readonly name: string
  generate(latents: Latents, opts: GenerateOptions): RgbImage
}

/** Upscaling factor from latent pixels to image pixels. */
export const LATENT_TO_IMAGE = 8

const PREVIEW_SMOOTH_RADIUS = 6
const PREVIEW_GAIN = 50
const PREVIEW_BIAS: readonly [number, number, number] = [110, 110, 110]
// RGB contribution per latent channel (channels 1..4)
const PREVIEW_AXES: ReadonlyArray<readonly [number, number, number]> = [
  [5, 5, 5], // channel 1: luminance
  [-75, 47.5, 15], // channel 2: cyan when positive, red when negative
  [15, 47.5, -75], // channel 3: yellow when positive, blue-purple when negative
  [-8, -8, -8], // channel 4: shade
]

function boxSmooth(plane: Float64Array, h: number, w: number, radius: number): Float64Array {
  // running-sum box blur with edge clamping (divide by live count)
  const rowSum = new Float64Array(h * w)
  for (let i = 0; i < h; i++) {
    let acc = 0
    for (let j = 0; j <= Math.min(radius, w - 1); j++) acc += plane[i * w + j]
    for (let j = 0; j < w; j++) {
      rowSum[i * w + j] = acc
      const addJ = j + radius + 1
      const dropJ = j - radius
      if (addJ < w) acc += plane[i * w + addJ]
      if (dropJ >= 0) acc -= plane[i * w + dropJ]
    }
  }
  const out = new Float64Array(h * w)
  for (let j = 0; j < w; j++) {
    let acc = 0
    for (let i = 0; i <= Math.min(radius, h - 1); i++) acc += rowSum[i * w + j]
    for (let i = 0; i < h; i++) {
      const i0 = Math.max(0, i - radius)
      const i1 = Math.min(h - 1, i + radius)
      const j0 = Math.max(0, j - radius)
      const j1 = Math.min(w - 1, j + radius)
      out[i * w + j] = acc / ((i1 - i0 + 1) * (j1 - j0 + 1))
      const addI = i + radius + 1
      const dropI = i - radius
      if (addI < h) acc += rowSum[addI * w + j]
      if (dropI >= 0) acc -= rowSum[dropI * w + j]
    }
  }
  return out
}

export class PreviewBackend implements PipelineBackend {
  readonly name = 'preview'

  generate(latents: Latents): RgbImage {
    const { height: h, width: w, channels: c, data } = latents
    const smoothed: Float64Array[] = []
    for (let ch = 0; ch < c; ch++) {
      const plane = new Float64Array(h * w)
      for (let p = 0; p < h * w; p++) plane[p] = data[p * c + ch]
      smoothed.push(boxSmooth(plane, h, w, PREVIEW_SMOOTH_RADIUS))
    }
    const latentRgb = new Float64Array(h * w * 3)
    for (let p = 0; p < h * w; p++) {
      let r = PREVIEW_BIAS[0]
      let g = PREVIEW_BIAS[1]
      let b = PREVIEW_BIAS[2]
      for (let ch = 0; ch < Math.min(c, PREVIEW_AXES.length); ch++) {
        const s = Math.tanh(PREVIEW_GAIN * smoothed[ch][p])
        r += PREVIEW_AXES[ch][0] * s
        g += PREVIEW_AXES[ch][1] * s
        b += PREVIEW_AXES[ch][2] * s
      }
      latentRgb[p * 3] = r
      latentRgb[p * 3 + 1] = g
      latentRgb[p * 3 + 2] = b
    }
    // nearest-neighbor upsample to image resolution
    const scale = LATENT_TO_IMAGE
    const outW = w * scale
    const outH = h * scale
    const rgb = new Uint8Array(outW * outH * 3)
    for (let y = 0; y < outH; y++) {
      const sy = Math.floor(y / scale)
      for (let x = 0; x < outW; x++) {
        const sx = Math.floor(x / scale)
        for (let k = 0; k < 3; k++) {
          const v = Math.round(latentRgb[(sy * w + sx) * 3 + k])
          rgb[(y * outW + x) * 3 + k] = v < 0 ? 0 : v > 255 ? 255 : v
        }
      }
    }
    return { width: outW, height: outH, rgb }
  }
}

export class DiffusersBackend implements PipelineBackend {
  readonly name = 'diffusers'

  constructor(
    private readonly latentsPath: string,
    private readonly python: string = process.env.TKG_BRIDGE_PYTHON ?? 'python3',
  ) {}

  generate(latents: Latents, opts: GenerateOptions): RgbImage {
    const script = join(dirname(fileURLToPath(import.meta.url)), '..', 'scripts', 'generate_sd.py')
    const outPath = `${this.latentsPath}.bridge.ppm`
    const result = spawnSync(
      this.python,
      [
        script,
        '--model', opts.model,
        '--prompt', opts.prompt,
        '--latents', this.latentsPath,
        '--steps', String(opts.steps),
        '--guidance', String(opts.guidance),
        '--out-ppm', outPath,
      ],
      { encoding: 'utf-8' },
    )
    if (result.status !== 0) {
      throw new Error(
        `diffusers backend failed (is diffusers installed with local weights?): ` +
          `${result.stderr || result.stdout || result.error?.message}`,
      )
    }
    return decodePpm(readFileSync(outPath))
  }
}

export function decodePpm(buf: Buffer): RgbImage {
  const text = buf.subarray(0, 64).toString('latin1')
  const m = /^P6\s+(\d+)\s+(\d+)\s+255\s/.exec(text)
  if (!m) throw new Error('backend did not produce a binary PPM')
  const width = Number(m[1])
  const height = Number(m[2])
  const offset = m[0].length
  const rgb = new Uint8Array(buf.subarray(offset, offset + width * height * 3))
  if (rgb.length !== width * height * 3) throw new Error('truncated PPM from backend')
  return { width, height, rgb }
}

export function makeBackend(name: string, latentsPath: string): PipelineBackend {
  switch (name) {
    case 'preview':
      return new PreviewBackend()
    case 'diffusers':
      return new DiffusersBackend(latentsPath)
    default:
      throw new Error(`unknown backend ${name}; available: preview, diffusers`)
  }
}
