/**
 * Deterministic fixture embeddings derived from a key alone.
 *
 * Contract (shared with the pipeline's own fixture generator):
 *   seed     = SHA-256(utf8(key))
 *   block[j] = SHA-256(seed || uint32_be(j))   -> 8 big-endian uint32 each
 *   comp[i]  = u32 / 2^32 * 2 - 1              -> in [-1, 1)
 * The vector is the first `dim` components. Pure hashing plus IEEE doubles,
 * so test suites never need a real encoder.
 */

import { createHash } from "node:crypto";

export function fixtureVector(key: string, dim: number): Float64Array {
  if (dim < 1 || !Number.isInteger(dim)) {
    throw new Error(`fixture dimension must be a positive integer, got ${dim}`);
  }
  const seed = createHash("sha256").update(key, "utf8").digest();
  const out = new Float64Array(dim);
  let filled = 0;
  for (let block = 0; filled < dim; block++) {
    const counter = Buffer.alloc(4);
    counter.writeUInt32BE(block, 0);
    const digest = createHash("sha256").update(Buffer.concat([seed, counter])).digest();
    for (let off = 0; off < 32 && filled < dim; off += 4) {
      out[filled++] = (digest.readUInt32BE(off) / 2 ** 32) * 2 - 1;
    }
  }
  return out;
}

export function fixtureModelId(dim: number): string {
  return `fixture-sha256-d${dim}`;
}

/** Parses "fixture:<dim>" model ids; null when the id is a real model. */
export function parseFixtureModel(modelId: string): number | null {
  const match = /^fixture:(\d+)$/.exec(modelId);
  return match ? Number(match[1]) : null;
}
