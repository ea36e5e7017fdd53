import { beforeAll, describe, expect, it } from "vitest";

import { initBackend, tf } from "../src/backend.js";
import {
  Params,
  applyRope,
  dense,
  layerNorm,
  relativeIndices,
  sinusoidalPositions,
} from "../src/layers.js";
import { mulberry32 } from "../src/rng.js";

beforeAll(() => initBackend());

describe("parameter registry", () => {
  it("returns the same variable for repeated names and round-trips checkpoints", () => {
    const params = new Params(mulberry32(0));
    const a = params.normal("w", [2, 3], 1);
    const b = params.normal("w", [2, 3], 1);
    expect(a).toBe(b);
    const saved = params.toJSON();

    const params2 = new Params(mulberry32(99));
    params2.normal("w", [2, 3], 1);
    params2.loadJSON(saved);
    expect(Array.from(params2.vars.get("w")!.dataSync())).toEqual(
      Array.from(a.dataSync()),
    );
    expect(() => params2.loadJSON({})).toThrow(/missing variable/);
  });
});

describe("dense layer", () => {
  it("applies to higher-rank inputs without changing leading dims", () => {
    const params = new Params(mulberry32(1));
    const layer = dense(params, "d", 4, 6);
    const y = layer(tf.ones([2, 5, 4]));
    expect(y.shape).toEqual([2, 5, 6]);
  });
});

describe("layer norm", () => {
  it("normalizes the last axis to zero mean and unit variance", async () => {
    const params = new Params(mulberry32(2));
    const ln = layerNorm(params, "ln", 8);
    const y = ln(tf.randomNormal([3, 8], 5, 3, "float32", 42));
    const mean = (await tf.mean(y, -1).data())[0];
    const variance = (await tf.mean(tf.square(tf.sub(y, tf.mean(y, -1, true))), -1).data())[0];
    expect(Math.abs(mean)).toBeLessThan(1e-4);
    expect(variance).toBeCloseTo(1, 2);
  });
});

describe("rotary position embedding", () => {
  it("preserves vector norms", async () => {
    const x = tf.randomNormal([1, 2, 6, 8], 0, 1, "float32", 7);
    const rotated = applyRope(x, 1000);
    const n1 = await tf.sum(tf.square(x), -1).data();
    const n2 = await tf.sum(tf.square(rotated), -1).data();
    for (let i = 0; i < n1.length; i++) expect(n2[i]).toBeCloseTo(n1[i], 4);
  });

  it("makes attention scores depend only on relative offset", async () => {
    // same q/k content placed at positions (0,2) and (3,5) must score equally
    const d = 8;
    const q = tf.randomNormal([1, 1, 1, d], 0, 1, "float32", 11);
    const k = tf.randomNormal([1, 1, 1, d], 0, 1, "float32", 12);
    const zeros = tf.zerosLike(q);
    const qSeq = tf.concat([q, zeros, zeros, q, zeros, zeros], 2); // q at 0 and 3
    const kSeq = tf.concat([zeros, zeros, k, zeros, zeros, k], 2); // k at 2 and 5
    const rq = applyRope(qSeq, 1000);
    const rk = applyRope(kSeq, 1000);
    const scores = tf.matMul(
      rq.reshape([6, d]),
      rk.reshape([6, d]),
      false,
      true,
    );
    const data = await scores.data();
    expect(data[0 * 6 + 2]).toBeCloseTo(data[3 * 6 + 5], 4); // offset +2 twice
  });
});

describe("position helpers", () => {
  it("builds sinusoidal encodings with unit first row pattern", async () => {
    const pos = sinusoidalPositions(4, 6);
    const row0 = await tf.slice(pos, [0, 0], [1, 6]).data();
    expect(Array.from(row0)).toEqual([0, 1, 0, 1, 0, 1]);
  });

  it("clips and shifts relative indices", async () => {
    const idx = relativeIndices(3, 5, 2);
    expect(Array.from(await idx.data())).toEqual([
      2, 3, 4, 4, 4,
      1, 2, 3, 4, 4,
      0, 1, 2, 3, 4,
    ]);
  });
});
