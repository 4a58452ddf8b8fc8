/**
 * RunConfig documents: the same JSON schema the primary CLI accepts.
 * Unknown keys are rejected; the bridge reads the geometry to validate
 * latents and the plan swatch to pick the uniformity target color.
 */

import { readFileSync } from 'node:fs'

const RUN_KEYS = new Set([
  'seed', 'color', 'plan', 'masks', 'height', 'width', 'channels', 'sampler',
])
const SAMPLER_KEYS = new Set([
  'train_steps', 'sample_steps', 'beta_start', 'beta_end', 'schedule',
])

export interface RunConfig {
  seed: number
  color?: string
  swatchRgb?: [number, number, number]
  height: number
  width: number
  channels: number
  sampleSteps: number
}

export function parseRunConfig(text: string): RunConfig {
  let doc: unknown
  try {
    doc = JSON.parse(text)
  } catch (err) {
    throw new Error(`bad run config JSON: ${(err as Error).message}`)
  }
  if (typeof doc !== 'object' || doc === null || Array.isArray(doc)) {
    throw new Error('run config must be a JSON object')
  }
  const obj = doc as Record<string, unknown>
  const unknown = Object.keys(obj).filter((k) => !RUN_KEYS.has(k))
  if (unknown.length > 0) {
    throw new Error(`unknown run config keys: ${unknown.sort().join(', ')}`)
  }
  if ('color' in obj && 'plan' in obj) {
    throw new Error('give either a color name or an explicit plan, not both')
  }
  let sampleSteps = 50
  if (obj.sampler !== undefined) {
    const sampler = obj.sampler as Record<string, unknown>
    const bad = Object.keys(sampler).filter((k) => !SAMPLER_KEYS.has(k))
    if (bad.length > 0) throw new Error(`unknown sampler keys: ${bad.sort().join(', ')}`)
    if (sampler.sample_steps !== undefined) sampleSteps = Number(sampler.sample_steps)
  }
  let swatchRgb: [number, number, number] | undefined
  if (obj.plan !== undefined) {
    const plan = obj.plan as Record<string, unknown>
    if (Array.isArray(plan.swatch_rgb) && plan.swatch_rgb.length === 3) {
      swatchRgb = plan.swatch_rgb.map(Number) as [number, number, number]
    }
  }
  const dim = (key: string, fallback: number): number => {
    const v = obj[key]
    if (v === undefined) return fallback
    if (typeof v !== 'number' || !Number.isInteger(v) || v < 1) {
      throw new Error(`${key} must be a positive integer`)
    }
    return v
  }
  return {
    seed: dim('seed', 0),
    color: typeof obj.color === 'string' ? obj.color : undefined,
    swatchRgb,
    height: dim('height', 64),
    width: dim('width', 64),
    channels: dim('channels', 4),
    sampleSteps,
  }
}

export function readRunConfig(path: string): RunConfig {
  return parseRunConfig(readFileSync(path, 'utf-8'))
}
