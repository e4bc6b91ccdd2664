import { describe, expect, it } from "vitest";

import { fixtureVector, parseFixtureModel } from "../src/fixture.js";
import { l2Normalize } from "../src/store.js";

const MAJI_KEY = "f34900fc0e55053a9102c54de73d64fdb428457fdb54e48b99d6186c937113f1";

describe("fixtureVector", () => {
  it("is deterministic and shaped by dim", () => {
    const a = fixtureVector(MAJI_KEY, 16);
    const b = fixtureVector(MAJI_KEY, 16);
    expect(a).toEqual(b);
    expect(a.length).toBe(16);
    expect(fixtureVector(MAJI_KEY, 40).length).toBe(40);
  });

  it("produces components in [-1, 1)", () => {
    const v = fixtureVector(MAJI_KEY, 64);
    for (const x of v) {
      expect(x).toBeGreaterThanOrEqual(-1);
      expect(x).toBeLessThan(1);
    }
  });

  it("prefixes agree across dims (block expansion is stable)", () => {
    const short = fixtureVector(MAJI_KEY, 6);
    const long = fixtureVector(MAJI_KEY, 24);
    expect(Array.from(long.slice(0, 6))).toEqual(Array.from(short));
  });

  it("matches the pipeline-side generator bit for bit", () => {
    // frozen from the consuming pipeline's generator (same hash expansion)
    const expected = [
      0.3017712654545903, 0.1472010463476181, 0.23381007928401232,
      -0.023378072772175074, -0.2973214304074645, 0.48579040821641684,
    ];
    expect(Array.from(fixtureVector(MAJI_KEY, 6))).toEqual(expected);
  });

  it("rejects non-positive dims", () => {
    expect(() => fixtureVector(MAJI_KEY, 0)).toThrow();
  });
});

describe("l2Normalize", () => {
  it("yields unit norm", () => {
    const v = l2Normalize(fixtureVector(MAJI_KEY, 32));
    let sum = 0;
    for (const x of v) sum += x * x;
    expect(Math.abs(Math.sqrt(sum) - 1)).toBeLessThan(1e-12);
  });

  it("rejects the zero vector", () => {
    expect(() => l2Normalize(new Float64Array(3))).toThrow();
  });
});

describe("parseFixtureModel", () => {
  it("extracts the dimension", () => {
    expect(parseFixtureModel("fixture:384")).toBe(384);
  });

  it("passes real model ids through", () => {
    expect(parseFixtureModel("Xenova/all-MiniLM-L6-v2")).toBeNull();
  });
});
