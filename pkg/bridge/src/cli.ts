#!/usr/bin/env node
/**
 * tkg-bridge: feed exported latent noise into a text-to-image pipeline
 * as the initial latents, write the generated image, and emit a
 * border-uniformity report via the primary CLI.
 *
 *   tkg-bridge --model runwayml/stable-diffusion-v1-5 \
 *       --prompt "the cat runs in the park" \
 *       --latents z_key.npy --out img.png [--backend preview]
 */

import { parseArgs } from 'node:util'
import { writeFileSync } from 'node:fs'

import { makeBackend } from './backends.js'
import { encodePng, encodePpm } from './image.js'
import { assertLatentDims, readNpy } from './npy.js'
import { readRunConfig } from './runconfig.js'
import { initNoiseScale, scaleLatents } from './scheduler.js'
import { scoreUniformity } from './uniformity.js'

const DEFAULT_TARGET: [number, number, number] = [50, 205, 50]

export interface BridgeResult {
  out: string
  ppm: string
  backend: string
  report: unknown
}

export function runBridge(argv: string[]): BridgeResult {
  const { values } = parseArgs({
    args: argv,
    options: {
      model: { type: 'string', default: 'runwayml/stable-diffusion-v1-5' },
      prompt: { type: 'string', default: '' },
      latents: { type: 'string' },
      out: { type: 'string' },
      backend: { type: 'string', default: 'diffusers' },
      steps: { type: 'string', default: '50' },
      guidance: { type: 'string', default: '7.5' },
      config: { type: 'string' },
      target: { type: 'string' },
      'report-out': { type: 'string' },
    },
  })
  if (!values.latents) throw new Error('--latents is required (.npy exported by the primary CLI)')
  if (!values.out) throw new Error('--out is required (.png)')

  const run = values.config ? readRunConfig(values.config) : undefined
  const latents = readNpy(values.latents)
  assertLatentDims(latents)
  if (run && (latents.height !== run.height || latents.width !== run.width ||
      latents.channels !== run.channels)) {
    throw new Error(
      `latents ${latents.height}x${latents.width}x${latents.channels} do not match ` +
        `run config ${run.height}x${run.width}x${run.channels}`,
    )
  }

  const scaled = { ...latents, data: scaleLatents(latents.data, initNoiseScale('ddim')) }
  const backend = makeBackend(values.backend as string, values.latents)
  const image = backend.generate(scaled, {
    model: values.model as string,
    prompt: values.prompt as string,
    steps: Number(values.steps),
    guidance: Number(values.guidance),
  })

  const outPng = values.out
  const outPpm = outPng.replace(/\.png$/i, '') + '.ppm'
  writeFileSync(outPng, encodePng(image))
  writeFileSync(outPpm, encodePpm(image))

  let target = DEFAULT_TARGET
  if (values.target) {
    const parts = values.target.split(',').map(Number)
    if (parts.length !== 3 || parts.some((v) => !Number.isFinite(v))) {
      throw new Error(`--target must be R,G,B, got ${values.target}`)
    }
    target = parts as [number, number, number]
  } else if (run?.swatchRgb) {
    target = run.swatchRgb
  }
  const report = scoreUniformity(outPpm, target)
  if (values['report-out']) {
    writeFileSync(values['report-out'], JSON.stringify(report, null, 2) + '\n')
  }
  return { out: outPng, ppm: outPpm, backend: backend.name, report }
}

const entry = process.argv[1]
if (entry !== undefined && import.meta.url === new URL(`file://${entry}`).href) {
  try {
    const result = runBridge(process.argv.slice(2))
    console.log(JSON.stringify(result, null, 2))
  } catch (err) {
    console.error(`error: ${(err as Error).message}`)
    process.exit(2)
  }
}
