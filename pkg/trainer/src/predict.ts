import { Example, maxOutputLength } from "./data.js";
import { Seq2SeqModel } from "./models/base.js";
import { decodeTarget } from "./vocab.js";

// Greedy decoding over a test set; output length is capped at twice the
// longest gold output.
export function predictAll(
  model: Seq2SeqModel,
  examples: Example[],
  batchSize = 64,
): string[] {
  const maxLen = 2 * maxOutputLength(examples);
  const predictions: string[] = [];
  for (let i = 0; i < examples.length; i += batchSize) {
    const chunk = examples.slice(i, i + batchSize);
    const srcLen = Math.max(...chunk.map((e) => e.srcIds.length));
    const srcIds = chunk.map((e) => {
      const out = e.srcIds.slice();
      while (out.length < srcLen) out.push(0);
      return out;
    });
    const decoded = model.greedyDecode(srcIds, maxLen);
    for (const ids of decoded) predictions.push(decodeTarget(ids));
  }
  return predictions;
}
