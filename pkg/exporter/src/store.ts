/**
 * Embedding store serialization (bit-exact file contract).
 *
 * Line 1:  {"model": <text>, "dim": <int>, "normalized": <bool>}
 * Line 2+: {"key": <64-hex>, "vec": [<floats>]}
 *
 * Floats are serialized by JSON.stringify, which emits the shortest decimal
 * that round-trips the IEEE double. No whitespace padding; records are
 * written sorted by key, which is the format's canonical order.
 */

export interface StoreManifest {
  model: string;
  dim: number;
  normalized: boolean;
}

export function manifestLine(manifest: StoreManifest): string {
  return JSON.stringify({
    model: manifest.model,
    dim: manifest.dim,
    normalized: manifest.normalized,
  });
}

export function vectorLine(key: string, vec: ArrayLike<number>): string {
  return JSON.stringify({ key, vec: Array.from(vec) });
}

export function storeContent(
  manifest: StoreManifest,
  entries: Iterable<[string, ArrayLike<number>]>,
): string {
  const lines = [manifestLine(manifest)];
  const sorted = [...entries].sort(([a], [b]) => (a < b ? -1 : a > b ? 1 : 0));
  for (const [key, vec] of sorted) {
    if (vec.length !== manifest.dim) {
      throw new Error(
        `vector for key ${key} has ${vec.length} components, manifest dim is ${manifest.dim}`,
      );
    }
    lines.push(vectorLine(key, vec));
  }
  return lines.join("\n") + "\n";
}

export function l2Normalize(vec: Float64Array): Float64Array {
  let sumSquares = 0;
  for (let i = 0; i < vec.length; i++) sumSquares += vec[i] * vec[i];
  const norm = Math.sqrt(sumSquares);
  if (norm === 0) throw new Error("cannot normalize a zero vector");
  const out = new Float64Array(vec.length);
  for (let i = 0; i < vec.length; i++) out[i] = vec[i] / norm;
  return out;
}
