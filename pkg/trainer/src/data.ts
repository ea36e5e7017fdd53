import fs from "fs";

import { encodeSource, encodeTarget, BOS, EOS, PAD } from "./vocab.js";
import { Rng, shuffleInPlace } from "./rng.js";

export interface Example {
  input: string;
  output: string;
  srcIds: number[];
  tgtIds: number[]; // without BOS/EOS
}

export interface Batch {
  srcIds: number[][]; // padded [B, Ts]
  tgtIn: number[][]; // BOS-prefixed, padded [B, Tt]
  tgtOut: number[][]; // EOS-suffixed, padded [B, Tt]
}

export function loadJsonl(path: string): Example[] {
  const lines = fs.readFileSync(path, "utf-8").split("\n");
  const examples: Example[] = [];
  for (let i = 0; i < lines.length; i++) {
    const line = lines[i].trim();
    if (!line) continue;
    let row: { input: string; output: string };
    try {
      row = JSON.parse(line);
    } catch (err) {
      throw new Error(`${path}:${i + 1}: malformed JSON line`);
    }
    examples.push({
      input: row.input,
      output: row.output,
      srcIds: encodeSource(row.input),
      tgtIds: encodeTarget(row.output),
    });
  }
  return examples;
}

export function maxOutputLength(examples: Example[]): number {
  return Math.max(...examples.map((e) => e.tgtIds.length));
}

function pad(ids: number[], length: number): number[] {
  const out = ids.slice();
  while (out.length < length) out.push(PAD);
  return out;
}

export function makeBatch(examples: Example[]): Batch {
  const srcLen = Math.max(...examples.map((e) => e.srcIds.length));
  const tgtLen = Math.max(...examples.map((e) => e.tgtIds.length)) + 1; // +1 for BOS/EOS
  return {
    srcIds: examples.map((e) => pad(e.srcIds, srcLen)),
    tgtIn: examples.map((e) => pad([BOS, ...e.tgtIds], tgtLen)),
    tgtOut: examples.map((e) => pad([...e.tgtIds, EOS], tgtLen)),
  };
}

// Endless batch stream cycling over the data, reshuffled each epoch.
export function* batchStream(examples: Example[], batchSize: number, rng: Rng): Generator<Batch> {
  const pool = examples.slice();
  while (true) {
    shuffleInPlace(pool, rng);
    for (let i = 0; i + batchSize <= pool.length; i += batchSize) {
      yield makeBatch(pool.slice(i, i + batchSize));
    }
  }
}
