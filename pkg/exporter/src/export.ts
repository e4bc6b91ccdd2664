/**
 * The export job: texts NDJSON in, embedding store out.
 *
 * Input lines carry `key` and `text`. Keys are never invented here: each one
 * is re-derived from the text with the shared hash rule and a mismatch is a
 * hard error (the rule lives upstream; duplication must be checked, not
 * trusted). Input is sorted by key before encoding so runs are byte-stable.
 */

import { readFileSync, writeFileSync } from "node:fs";

import { loadEncoder } from "./encoder.js";
import { KEY_PATTERN, textKey } from "./keys.js";
import { l2Normalize, storeContent } from "./store.js";

export interface ExportJob {
  inputPath: string;
  outputPath: string;
  modelId: string;
  batchSize: number;
  normalize: boolean;
}

export interface ExportResult {
  texts: number;
  dim: number;
}

export function readTexts(path: string): Array<{ key: string; text: string }> {
  const rows: Array<{ key: string; text: string }> = [];
  const seen = new Set<string>();
  const lines = readFileSync(path, "utf8").split("\n");
  lines.forEach((line, i) => {
    if (!line.trim()) return;
    let obj: { key?: unknown; text?: unknown };
    try {
      obj = JSON.parse(line);
    } catch (err) {
      throw new Error(`${path}:${i + 1}: not valid JSON: ${String(err)}`);
    }
    const { key, text } = obj;
    if (typeof key !== "string" || typeof text !== "string") {
      throw new Error(`${path}:${i + 1}: line must carry string "key" and "text"`);
    }
    if (!KEY_PATTERN.test(key)) {
      throw new Error(`${path}:${i + 1}: malformed key ${key}`);
    }
    const derived = textKey(text);
    if (derived !== key) {
      throw new Error(
        `${path}:${i + 1}: key ${key} does not match the hash of its text (expected ${derived})`,
      );
    }
    if (seen.has(key)) {
      throw new Error(`${path}:${i + 1}: duplicate key ${key}`);
    }
    seen.add(key);
    rows.push({ key, text });
  });
  rows.sort((a, b) => (a.key < b.key ? -1 : a.key > b.key ? 1 : 0));
  return rows;
}

export async function runExport(job: ExportJob): Promise<ExportResult> {
  if (job.batchSize < 1) throw new Error("batch size must be >= 1");
  const rows = readTexts(job.inputPath);
  const encoder = await loadEncoder(job.modelId, textKey);

  const entries: Array<[string, Float64Array]> = [];
  for (let start = 0; start < rows.length; start += job.batchSize) {
    const batch = rows.slice(start, start + job.batchSize);
    const vectors = await encoder.encode(batch.map((r) => r.text));
    batch.forEach((row, i) => {
      const vec = job.normalize ? l2Normalize(vectors[i]) : vectors[i];
      entries.push([row.key, vec]);
    });
  }

  const content = storeContent(
    { model: encoder.modelId, dim: encoder.dim, normalized: job.normalize },
    entries,
  );
  writeFileSync(job.outputPath, content, "utf8");
  return { texts: rows.length, dim: encoder.dim };
}
