import { tf } from "../backend.js";
import { Batch } from "../data.js";
import { Params } from "../layers.js";
import { EOS, PAD } from "../vocab.js";

export interface Seq2SeqModel {
  readonly params: Params;
  loss(batch: Batch, training: boolean): tf.Scalar;
  greedyDecode(srcIds: number[][], maxLen: number): number[][];
}

// Token-level cross-entropy over non-PAD target positions.
export function maskedCrossEntropy(logits: tf.Tensor, tgtOut: number[][]): tf.Scalar {
  const labels = tf.tensor2d(tgtOut, undefined, "int32");
  const mask = tf.cast(tf.notEqual(labels, PAD), "float32");
  const vocab = logits.shape[logits.shape.length - 1] as number;
  const oneHot = tf.oneHot(labels.flatten(), vocab).reshape(logits.shape);
  const logProbs = tf.logSoftmax(logits);
  const nll = tf.neg(tf.sum(tf.mul(oneHot, logProbs), -1));
  return tf.div(tf.sum(tf.mul(nll, mask)), tf.sum(mask)) as tf.Scalar;
}

// Shared greedy loop for models that can score the next token given a prefix.
export function greedyFromStepper(
  batchSize: number,
  maxLen: number,
  nextToken: (prefixes: number[][]) => number[],
  bosId: number,
): number[][] {
  const prefixes: number[][] = Array.from({ length: batchSize }, () => [bosId]);
  const finished = new Array(batchSize).fill(false);
  for (let step = 0; step < maxLen; step++) {
    const next = nextToken(prefixes);
    let allDone = true;
    for (let i = 0; i < batchSize; i++) {
      if (!finished[i]) {
        prefixes[i].push(next[i]);
        if (next[i] === EOS) finished[i] = true;
      }
      allDone = allDone && finished[i];
    }
    if (allDone) break;
  }
  return prefixes.map((p) => p.slice(1)); // drop BOS
}
