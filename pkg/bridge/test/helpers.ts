import { spawnSync } from 'node:child_process'

/** Minimal NPY v1.0 encoder for test fixtures. */
export function encodeNpy(
  shape: [number, number, number],
  values: Float32Array,
  descr = '<f4',
  fortran = false,
): Buffer {
  const header = `{'descr': '${descr}', 'fortran_order': ${fortran ? 'True' : 'False'}, 'shape': (${shape.join(', ')}), }`
  const unpadded = 10 + header.length + 1
  const padded = Math.ceil(unpadded / 64) * 64
  const headerText = header + ' '.repeat(padded - unpadded) + '\n'
  const head = Buffer.alloc(10)
  Buffer.from('\x93NUMPY', 'latin1').copy(head, 0)
  head.writeUInt8(1, 6)
  head.writeUInt8(0, 7)
  head.writeUInt16LE(headerText.length, 8)
  const payload = Buffer.alloc(values.length * 4)
  for (let i = 0; i < values.length; i++) payload.writeFloatLE(values[i], i * 4)
  return Buffer.concat([head, Buffer.from(headerText, 'latin1'), payload])
}

export const CHROMANOISE = process.env.CHROMANOISE_BIN ?? 'chromanoise'

export function chromanoiseAvailable(): boolean {
  const r = spawnSync(CHROMANOISE, ['--help'], { encoding: 'utf-8' })
  return r.status === 0
}

export function runChromanoise(...args: string[]): string {
  const r = spawnSync(CHROMANOISE, args, { encoding: 'utf-8' })
  if (r.status !== 0) {
    throw new Error(`chromanoise ${args.join(' ')} failed: ${r.stderr}`)
  }
  return r.stdout
}
