import { tf } from "../backend.js";
import { Batch } from "../data.js";
import { Params, dense, dropout, embedding } from "../layers.js";
import { mulberry32 } from "../rng.js";
import {
  BOS,
  NUM_VERBS,
  PAD,
  SRC_TOKENS,
  SRC_VERB_OFFSET,
  TGT_TOKENS,
  TGT_VERB_OFFSET,
} from "../vocab.js";
import { Seq2SeqModel, greedyFromStepper, maskedCrossEntropy } from "./base.js";

export interface PermEqConfig {
  hidden: number;
  dropout: number;
  seed: number;
}

export const PERM_EQ_DEFAULTS: PermEqConfig = {
  hidden: 64,
  dropout: 0.1,
  seed: 0,
};

const G = NUM_VERBS; // cyclic group of verb rotations

// Invariant target tokens keep their logits shared across the group;
// verb-action logits are read equivariantly from group components.
const INVARIANT_TGT = [...Array(TGT_TOKENS.length).keys()].filter(
  (i) => i < TGT_VERB_OFFSET || i >= TGT_VERB_OFFSET + NUM_VERBS,
);

function shiftSrc(id: number, g: number): number {
  const v = id - SRC_VERB_OFFSET;
  if (v < 0 || v >= NUM_VERBS) return id;
  return SRC_VERB_OFFSET + ((v + g) % NUM_VERBS);
}

function shiftTgt(id: number, g: number): number {
  const v = id - TGT_VERB_OFFSET;
  if (v < 0 || v >= NUM_VERBS) return id;
  return TGT_VERB_OFFSET + ((v + g) % NUM_VERBS);
}

// GRU cell kept local so the group dimension can be folded into the batch.
function gruCell(params: Params, name: string, inDim: number, hidden: number) {
  const wz = dense(params, `${name}/wz`, inDim + hidden, hidden);
  const wr = dense(params, `${name}/wr`, inDim + hidden, hidden);
  const wc = dense(params, `${name}/wc`, inDim + hidden, hidden);
  return (x: tf.Tensor, h: tf.Tensor) => {
    const xh = tf.concat([x, h], 1);
    const z = tf.sigmoid(wz(xh));
    const r = tf.sigmoid(wr(xh));
    const c = tf.tanh(wc(tf.concat([x, tf.mul(r, h)], 1)));
    return tf.add(tf.mul(tf.sub(1, z), h), tf.mul(z, c));
  };
}

// Verb-equivariant encoder-decoder: one shared network is run on all eight
// cyclic relabelings of the verbs, and the logit for the action of verb w is
// read from the group component in which w appears as the canonical verb.
export class PermEqModel implements Seq2SeqModel {
  readonly params: Params;
  private cfg: PermEqConfig;
  private srcEmbed;
  private tgtEmbed;

  constructor(cfg: Partial<PermEqConfig> = {}) {
    this.cfg = { ...PERM_EQ_DEFAULTS, ...cfg };
    this.params = new Params(mulberry32(this.cfg.seed * 2654435761 + 4));
    this.srcEmbed = embedding(this.params, "src", SRC_TOKENS.length, this.cfg.hidden);
    this.tgtEmbed = embedding(this.params, "tgt", TGT_TOKENS.length, this.cfg.hidden);
    tf.tidy(() => {
      const state = this.encode([[1, 2]], false);
      this.stepDecoder([BOS], state, false);
    });
  }

  // Encode all group-shifted copies; group dim folded into batch: [B*G, ...].
  private encode(srcIds: number[][], training: boolean) {
    const { hidden } = this.cfg;
    const b = srcIds.length;
    const t = srcIds[0].length;
    const shifted: number[][] = [];
    for (const row of srcIds) {
      for (let g = 0; g < G; g++) shifted.push(row.map((id) => shiftSrc(id, g)));
    }
    const src = tf.tensor2d(shifted, [b * G, t], "int32");
    const srcMask = tf.cast(tf.notEqual(src, PAD), "float32");
    const steps = tf.unstack(dropout(this.srcEmbed(src), this.cfg.dropout, training), 1);

    const fwdCell = gruCell(this.params, "enc/fwd", hidden, hidden);
    const bwdCell = gruCell(this.params, "enc/bwd", hidden, hidden);
    const fwd: tf.Tensor[] = [];
    const bwd: tf.Tensor[] = new Array(t);
    let hF = tf.zeros([b * G, hidden]);
    let hB = tf.zeros([b * G, hidden]);
    for (let i = 0; i < t; i++) {
      hF = fwdCell(steps[i], hF);
      fwd.push(hF);
    }
    for (let i = t - 1; i >= 0; i--) {
      hB = bwdCell(steps[i], hB);
      bwd[i] = hB;
    }
    const merge = dense(this.params, "enc/merge", 2 * hidden, hidden);
    const memory = tf.stack(fwd.map((f, i) => tf.tanh(merge(tf.concat([f, bwd[i]], 1)))), 1);
    const init = tf.tanh(
      dense(this.params, "dec/init", 2 * hidden, hidden)(tf.concat([hF, hB], 1)),
    );
    return { memory, srcMask, state: init, batch: b };
  }

  private stepDecoder(
    prevIds: number[],
    s: { memory: tf.Tensor; srcMask: tf.Tensor; state: tf.Tensor; batch: number },
    training: boolean,
  ): { logits: tf.Tensor; state: tf.Tensor } {
    const { hidden } = this.cfg;
    const b = s.batch;
    const shiftedPrev: number[] = [];
    for (const id of prevIds) {
      for (let g = 0; g < G; g++) shiftedPrev.push(shiftTgt(id, g));
    }
    const prev = this.tgtEmbed(tf.tensor1d(shiftedPrev, "int32"));
    const cell = gruCell(this.params, "dec/cell", hidden, hidden);
    const h = cell(dropout(prev, this.cfg.dropout, training), s.state);

    const query = h.reshape([b * G, 1, hidden]);
    let scores = tf.matMul(query, s.memory, false, true).squeeze([1]);
    scores = tf.add(scores, tf.mul(tf.sub(1, s.srcMask), -1e9));
    const attn = tf.softmax(scores).reshape([b * G, 1, -1]);
    const ctx = tf.matMul(attn, s.memory).squeeze([1]);
    const feature = tf.tanh(
      dense(this.params, "dec/combine", 2 * hidden, hidden)(tf.concat([h, ctx], 1)),
    ); // [B*G, H]

    const grouped = feature.reshape([b, G, hidden]);
    // invariant head: group mean predicts the non-verb tokens
    const pooled = tf.mean(grouped, 1);
    const invLogits = dense(this.params, "dec/inv", hidden, INVARIANT_TGT.length)(pooled);
    // equivariant head: action of verb w is scored by the component where
    // w was relabeled to the canonical verb 0, i.e. g = (G - w) % G
    const canonScore = dense(this.params, "dec/verb", hidden, 1)(grouped).squeeze([2]); // [B,G]
    // permutation as a matmul (the gather gradient kernel is unavailable on wasm)
    const perm = new Float32Array(G * NUM_VERBS);
    for (let w = 0; w < NUM_VERBS; w++) perm[((G - w) % G) * NUM_VERBS + w] = 1;
    const verbLogits = tf.matMul(canonScore, tf.tensor2d(perm, [G, NUM_VERBS])); // [B,8]

    // assemble logits in vocabulary order
    const pieces: tf.Tensor[] = [];
    let invUsed = 0;
    for (let i = 0; i < TGT_TOKENS.length; i++) {
      if (i >= TGT_VERB_OFFSET && i < TGT_VERB_OFFSET + NUM_VERBS) {
        pieces.push(tf.slice(verbLogits, [0, i - TGT_VERB_OFFSET], [b, 1]));
      } else {
        pieces.push(tf.slice(invLogits, [0, invUsed++], [b, 1]));
      }
    }
    return { logits: tf.concat(pieces, 1), state: h };
  }

  loss(batch: Batch, training = true): tf.Scalar {
    return tf.tidy(() => {
      let state = this.encode(batch.srcIds, training);
      const t = batch.tgtIn[0].length;
      const perStep: tf.Tensor[] = [];
      for (let step = 0; step < t; step++) {
        const prevIds = batch.tgtIn.map((row) => row[step]);
        const out = this.stepDecoder(prevIds, state, training);
        perStep.push(out.logits);
        state = { ...state, state: out.state };
      }
      return maskedCrossEntropy(tf.stack(perStep, 1), batch.tgtOut);
    });
  }

  greedyDecode(srcIds: number[][], maxLen: number): number[][] {
    const b = srcIds.length;
    const kept = tf.tidy(() => {
      const s = this.encode(srcIds, false);
      return [tf.keep(s.memory), tf.keep(s.srcMask), tf.keep(s.state)];
    });
    const base = { memory: kept[0], srcMask: kept[1], batch: b };
    let state = kept[2];
    const result = greedyFromStepper(b, maxLen, (prefixes) => {
      const prevIds = prefixes.map((p) => p[p.length - 1]);
      const out = tf.tidy(() => {
        const step = this.stepDecoder(prevIds, { ...base, state }, false);
        return { next: Array.from(step.logits.argMax(-1).dataSync()), state: tf.keep(step.state) };
      });
      state.dispose();
      state = out.state;
      return out.next;
    }, BOS);
    kept[0].dispose();
    kept[1].dispose();
    state.dispose();
    return result;
  }
}
