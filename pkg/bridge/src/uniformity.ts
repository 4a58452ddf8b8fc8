/**
 * Border-uniformity reports come from the primary CLI (`chromanoise
 * uniformity --json`); the bridge performs no metric math of its own.
 */

import { spawnSync } from 'node:child_process'

export interface UniformityReport {
  target_rgb: [number, number, number]
  border_fraction: number
  tolerance: number
  pass_fraction: number
  mean_border_rgb: [number, number, number]
  max_deviation: number
}

export function scoreUniformity(
  ppmPath: string,
  target: readonly [number, number, number],
  cli: string = process.env.CHROMANOISE_BIN ?? 'chromanoise',
): UniformityReport {
  const result = spawnSync(
    cli,
    ['uniformity', ppmPath, '--target', target.join(','), '--json'],
    { encoding: 'utf-8' },
  )
  if (result.status !== 0) {
    throw new Error(
      `could not score uniformity via ${cli}: ${result.stderr || result.error?.message}`,
    )
  }
  return JSON.parse(result.stdout) as UniformityReport
}
