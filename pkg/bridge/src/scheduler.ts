/**
 * Initial-noise scaling per scheduler family.
 *
 * DDIM consumes unit-variance latents directly (scale 1); Karras-style
 * sigma schedulers want latents premultiplied by sigma_max.  The bridge
 * only ships the DDIM path; the table exists so other schedulers fail
 * loudly instead of silently mis-scaling.
 */

export type SchedulerKind = 'ddim'

export function initNoiseScale(kind: SchedulerKind): number {
  switch (kind) {
    case 'ddim':
      return 1.0
    default: {
      const never: never = kind
      throw new Error(`unsupported scheduler: ${String(never)}`)
    }
  }
}

export function scaleLatents(data: Float32Array, scale: number): Float32Array {
  if (scale === 1.0) return data
  const out = new Float32Array(data.length)
  for (let i = 0; i < data.length; i++) out[i] = data[i] * scale
  return out
}
