export { makeBackend, PreviewBackend, DiffusersBackend, LATENT_TO_IMAGE } from './backends.js'
export type { PipelineBackend, GenerateOptions } from './backends.js'
export { encodePng, encodePpm } from './image.js'
export type { RgbImage } from './image.js'
export { parseNpy, readNpy, assertLatentDims } from './npy.js'
export type { Latents } from './npy.js'
export { parseRunConfig, readRunConfig } from './runconfig.js'
export type { RunConfig } from './runconfig.js'
export { initNoiseScale, scaleLatents } from './scheduler.js'
export { scoreUniformity } from './uniformity.js'
export type { UniformityReport } from './uniformity.js'
export { runBridge } from './cli.js'
export type { BridgeResult } from './cli.js'
