/**
 * Sentence encoders behind one interface.
 *
 * `fixture:<dim>` ids resolve to the deterministic hash-based generator;
 * anything else is treated as a transformers.js feature-extraction model
 * (mean pooling), loaded lazily so the fixture path works without the
 * optional dependency or network access.
 */

import { fixtureVector, parseFixtureModel } from "./fixture.js";

export interface Encoder {
  readonly modelId: string;
  readonly dim: number;
  encode(texts: string[]): Promise<Float64Array[]>;
}

class FixtureEncoder implements Encoder {
  readonly modelId: string;
  readonly dim: number;
  private readonly keyOf: (text: string) => string;

  constructor(modelId: string, dim: number, keyOf: (text: string) => string) {
    this.modelId = modelId;
    this.dim = dim;
    this.keyOf = keyOf;
  }

  async encode(texts: string[]): Promise<Float64Array[]> {
    return texts.map((t) => fixtureVector(this.keyOf(t), this.dim));
  }
}

class TransformersEncoder implements Encoder {
  readonly modelId: string;
  readonly dim: number;
  private readonly pipe: (texts: string[], opts: object) => Promise<{ tolist(): number[][] }>;

  private constructor(modelId: string, dim: number, pipe: TransformersEncoder["pipe"]) {
    this.modelId = modelId;
    this.dim = dim;
    this.pipe = pipe;
  }

  static async load(modelId: string): Promise<TransformersEncoder> {
    // optional dependency: resolve by variable so the build never needs it
    const specifier = "@huggingface/transformers";
    let transformers: { pipeline: (task: string, model: string) => Promise<unknown> };
    try {
      transformers = await import(specifier);
    } catch (err) {
      throw new Error(
        `model ${modelId} needs the optional dependency ${specifier} ` +
          `(npm install ${specifier}): ${String(err)}`,
      );
    }
    const pipe = await transformers.pipeline("feature-extraction", modelId);
    const dim: number =
      (pipe as any).model?.config?.hidden_size ?? (await probeDim(pipe as any));
    return new TransformersEncoder(modelId, dim, pipe as any);
  }

  async encode(texts: string[]): Promise<Float64Array[]> {
    const output = await this.pipe(texts, { pooling: "mean", normalize: false });
    return output.tolist().map((row: number[]) => Float64Array.from(row));
  }
}

async function probeDim(pipe: (t: string[], o: object) => Promise<{ tolist(): number[][] }>) {
  const probe = await pipe([""], { pooling: "mean", normalize: false });
  return probe.tolist()[0].length;
}

export async function loadEncoder(
  modelId: string,
  keyOf: (text: string) => string,
): Promise<Encoder> {
  const fixtureDim = parseFixtureModel(modelId);
  if (fixtureDim !== null) {
    return new FixtureEncoder(modelId, fixtureDim, keyOf);
  }
  return TransformersEncoder.load(modelId);
}
