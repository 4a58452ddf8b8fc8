/**
 * End-to-end: latents come from the primary CLI, generation runs on the
 * preview backend, and the uniformity report comes back through the
 * primary CLI.  The bridge itself never computes noise or metrics.
 */

import { mkdtempSync, readFileSync, rmSync, writeFileSync } from 'node:fs'
import { tmpdir } from 'node:os'
import { join } from 'node:path'

import { afterAll, beforeAll, describe, expect, it } from 'vitest'

import { runBridge } from '../src/cli.js'
import type { UniformityReport } from '../src/uniformity.js'
import { chromanoiseAvailable, runChromanoise } from './helpers.js'

const PROMPT = 'the cat runs in the park'

describe.skipIf(!chromanoiseAvailable())('bridge end to end', () => {
  let dir: string

  beforeAll(() => {
    dir = mkdtempSync(join(tmpdir(), 'tkg-bridge-'))
  })

  afterAll(() => {
    rmSync(dir, { recursive: true, force: true })
  })

  function generate(latents: string, out: string): UniformityReport {
    const result = runBridge([
      '--backend', 'preview',
      '--prompt', PROMPT,
      '--latents', join(dir, latents),
      '--out', join(dir, out),
    ])
    return result.report as UniformityReport
  }

  it('green-keyed latents beat the unshifted control on border uniformity', () => {
    runChromanoise(
      'pipeline', '--seed', '7', '--color', 'green',
      '--h', '64', '--w', '64', '--mask', '0.5,32,32',
      '--out', join(dir, 'green.npy'),
    )
    runChromanoise('noise', '--seed', '7', '--out', join(dir, 'control.npy'))

    const keyed = generate('green.npy', 'green.png')
    const control = generate('control.npy', 'control.png')

    expect(keyed.pass_fraction).toBeGreaterThan(control.pass_fraction)
    expect(keyed.pass_fraction).toBeGreaterThan(0.8)
    expect(control.pass_fraction).toBeLessThan(0.5)
    // the keyed border sits on the lime swatch; the control border does not
    expect(Math.abs(keyed.mean_border_rgb[1] - 205)).toBeLessThan(15)
    expect(Math.abs(control.mean_border_rgb[1] - 205)).toBeGreaterThan(30)

    // a real PNG came out of it
    const png = readFileSync(join(dir, 'green.png'))
    expect(png.subarray(1, 4).toString()).toBe('PNG')
  })

  it('foreground position follows the mask center', () => {
    for (const [name, center] of [
      ['left.npy', '16,16'],
      ['right.npy', '48,48'],
    ] as const) {
      runChromanoise(
        'pipeline', '--seed', '11', '--color', 'green',
        '--h', '64', '--w', '64', '--mask', `0.4,${center}`,
        '--out', join(dir, name),
      )
    }
    const centroid = (ppmName: string): [number, number] => {
      const buf = readFileSync(join(dir, ppmName))
      const m = /^P6\s+(\d+)\s+(\d+)\s+255\s/.exec(buf.subarray(0, 64).toString('latin1'))!
      const w = Number(m[1])
      const h = Number(m[2])
      const rgb = buf.subarray(m[0].length)
      let si = 0
      let sj = 0
      let n = 0
      for (let y = 0; y < h; y++) {
        for (let x = 0; x < w; x++) {
          const o = (y * w + x) * 3
          const dev = Math.max(
            Math.abs(rgb[o] - 50), Math.abs(rgb[o + 1] - 205), Math.abs(rgb[o + 2] - 50),
          )
          if (dev > 60) {
            si += y
            sj += x
            n += 1
          }
        }
      }
      return [si / n, sj / n]
    }
    generate('left.npy', 'left.png')
    generate('right.npy', 'right.png')
    const [li, lj] = centroid('left.ppm')
    const [ri, rj] = centroid('right.ppm')
    expect(li).toBeLessThan(ri)
    expect(lj).toBeLessThan(rj)
  })

  it('rejects latents whose dims disagree with the run config', () => {
    runChromanoise('noise', '--seed', '1', '--out', join(dir, 'z64.npy'))
    const cfgPath = join(dir, 'run128.json')
    writeFileSync(cfgPath, JSON.stringify({ height: 128, width: 128, channels: 4 }))
    expect(() =>
      runBridge([
        '--backend', 'preview',
        '--latents', join(dir, 'z64.npy'),
        '--out', join(dir, 'x.png'),
        '--config', cfgPath,
      ]),
    ).toThrow(/do not match/)
  })
})
