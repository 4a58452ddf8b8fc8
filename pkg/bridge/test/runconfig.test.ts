import { describe, expect, it } from 'vitest'

import { parseRunConfig } from '../src/runconfig.js'
import { initNoiseScale, scaleLatents } from '../src/scheduler.js'

describe('parseRunConfig', () => {
  it('parses geometry, color, and sampler steps', () => {
    const run = parseRunConfig(
      JSON.stringify({
        seed: 9,
        color: 'green',
        height: 128,
        width: 128,
        channels: 4,
        sampler: { sample_steps: 100 },
      }),
    )
    expect(run.seed).toBe(9)
    expect(run.color).toBe('green')
    expect([run.height, run.width, run.channels]).toEqual([128, 128, 4])
    expect(run.sampleSteps).toBe(100)
  })

  it('defaults match the primary toolkit', () => {
    const run = parseRunConfig('{}')
    expect([run.height, run.width, run.channels]).toEqual([64, 64, 4])
    expect(run.sampleSteps).toBe(50)
  })

  it('rejects unknown keys', () => {
    expect(() => parseRunConfig('{"speed": 1}')).toThrow(/unknown run config keys: speed/)
    expect(() => parseRunConfig('{"sampler": {"later": 1}}')).toThrow(/unknown sampler keys/)
  })

  it('rejects color and plan together', () => {
    expect(() =>
      parseRunConfig('{"color": "green", "plan": {"shifts": {"2": 0.07}}}'),
    ).toThrow(/not both/)
  })

  it('extracts the plan swatch for uniformity targets', () => {
    const run = parseRunConfig(
      '{"plan": {"shifts": {"2": 0.07}, "swatch_rgb": [50, 205, 50]}}',
    )
    expect(run.swatchRgb).toEqual([50, 205, 50])
  })

  it('rejects malformed JSON and non-objects', () => {
    expect(() => parseRunConfig('{nope')).toThrow(/bad run config JSON/)
    expect(() => parseRunConfig('[1]')).toThrow(/JSON object/)
  })
})

describe('scheduler scaling', () => {
  it('ddim consumes unit-variance latents unscaled', () => {
    expect(initNoiseScale('ddim')).toBe(1.0)
    const data = new Float32Array([1, -2, 3])
    expect(scaleLatents(data, 1.0)).toBe(data) // no copy on identity
    expect(Array.from(scaleLatents(data, 2.0))).toEqual([2, -4, 6])
  })
})
