#!/usr/bin/env node
/**
 * embed-export: turn a pipeline texts file into an embedding store.
 *
 *   embed-export export --in texts.ndjson --out embeddings.jsonl \
 *       [--model <id>] [--normalize] [--batch N]
 *
 * Model ids: "fixture:<dim>" for the deterministic test generator, or a
 * transformers.js feature-extraction checkpoint (default: a MiniLM sentence
 * encoder; requires the optional @huggingface/transformers dependency).
 */

import { parseArgs } from "node:util";

import { runExport } from "./export.js";

export const DEFAULT_MODEL = "Xenova/all-MiniLM-L6-v2";

export async function main(argv: string[]): Promise<number> {
  const [command, ...rest] = argv;
  if (command !== "export") {
    process.stderr.write(
      `usage: embed-export export --in <texts.ndjson> --out <store.jsonl>` +
        ` [--model <id>] [--normalize] [--batch N]\n`,
    );
    return command === undefined || command === "--help" || command === "-h" ? 0 : 2;
  }
  let parsed;
  try {
    parsed = parseArgs({
      args: rest,
      options: {
        in: { type: "string" },
        out: { type: "string" },
        model: { type: "string", default: DEFAULT_MODEL },
        normalize: { type: "boolean", default: false },
        batch: { type: "string", default: "32" },
      },
    });
  } catch (err) {
    process.stderr.write(`error: ${err instanceof Error ? err.message : String(err)}\n`);
    return 2;
  }
  const { in: inputPath, out: outputPath, model, normalize, batch } = parsed.values;
  if (!inputPath || !outputPath) {
    process.stderr.write("error: --in and --out are required\n");
    return 2;
  }
  const batchSize = Number(batch);
  if (!Number.isInteger(batchSize) || batchSize < 1) {
    process.stderr.write(`error: --batch must be a positive integer, got ${batch}\n`);
    return 2;
  }
  try {
    const result = await runExport({
      inputPath,
      outputPath,
      modelId: model!,
      batchSize,
      normalize: normalize!,
    });
    process.stderr.write(
      `wrote ${result.texts} vectors (dim ${result.dim}, model ${model}) to ${outputPath}\n`,
    );
    return 0;
  } catch (err) {
    process.stderr.write(`error: ${err instanceof Error ? err.message : String(err)}\n`);
    return 1;
  }
}

const invokedDirectly =
  process.argv[1] !== undefined && import.meta.url === new URL(`file://${process.argv[1]}`).href;
if (invokedDirectly) {
  main(process.argv.slice(2)).then((code) => {
    process.exitCode = code;
  });
}
