import fs from "fs";
import os from "os";
import path from "path";
import { fileURLToPath } from "url";

import { describe, expect, it } from "vitest";

import { batchStream, loadJsonl, makeBatch, maxOutputLength } from "../src/data.js";
import { mulberry32 } from "../src/rng.js";
import { BOS, EOS, PAD } from "../src/vocab.js";

const HERE = path.dirname(fileURLToPath(import.meta.url));
const FIXTURE = path.join(HERE, "fixtures", "suite", "H0.0000", "train.jsonl");

describe("dataset loading", () => {
  it("loads the jsonl fixture and encodes every row", () => {
    const examples = loadJsonl(FIXTURE);
    expect(examples).toHaveLength(120);
    for (const e of examples) {
      expect(e.srcIds.length).toBeGreaterThanOrEqual(3);
      expect(e.tgtIds.length).toBeGreaterThanOrEqual(2);
    }
  });

  it("reports the line number of malformed jsonl", () => {
    const bad = path.join(os.tmpdir(), "bad.jsonl");
    fs.writeFileSync(bad, '{"input": "jump", "output": "JUMP"}\nnot json\n');
    expect(() => loadJsonl(bad)).toThrow(/bad\.jsonl:2/);
  });

  it("builds padded batches with BOS-shifted inputs and EOS-terminated outputs", () => {
    const examples = loadJsonl(FIXTURE).slice(0, 8);
    const batch = makeBatch(examples);
    const srcLen = batch.srcIds[0].length;
    const tgtLen = batch.tgtIn[0].length;
    for (let i = 0; i < 8; i++) {
      expect(batch.srcIds[i]).toHaveLength(srcLen);
      expect(batch.tgtIn[i]).toHaveLength(tgtLen);
      expect(batch.tgtOut[i]).toHaveLength(tgtLen);
      expect(batch.tgtIn[i][0]).toBe(BOS);
      const gold = examples[i].tgtIds;
      expect(batch.tgtOut[i].slice(0, gold.length)).toEqual(gold);
      expect(batch.tgtOut[i][gold.length]).toBe(EOS);
      for (let t = gold.length + 1; t < tgtLen; t++) expect(batch.tgtOut[i][t]).toBe(PAD);
    }
  });

  it("streams full batches indefinitely", () => {
    const examples = loadJsonl(FIXTURE);
    const stream = batchStream(examples, 32, mulberry32(1));
    for (let i = 0; i < 10; i++) {
      expect(stream.next().value!.srcIds).toHaveLength(32);
    }
  });

  it("computes the longest gold output", () => {
    const examples = loadJsonl(FIXTURE);
    const expected = Math.max(...examples.map((e) => e.tgtIds.length));
    expect(maxOutputLength(examples)).toBe(expected);
  });
});
