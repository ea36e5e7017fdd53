import { tf } from "../backend.js";
import { Batch } from "../data.js";
import { Params, dense, dropout, embedding } from "../layers.js";
import { mulberry32 } from "../rng.js";
import { BOS, PAD, SRC_TOKENS, TGT_TOKENS } from "../vocab.js";
import { Seq2SeqModel, greedyFromStepper, maskedCrossEntropy } from "./base.js";

export type CellType = "elman" | "gru";

export interface RnnConfig {
  hidden: number;
  layers: number;
  cell: CellType;
  dropout: number;
  seed: number;
}

export const RNN_DEFAULTS: RnnConfig = {
  hidden: 128,
  layers: 2,
  cell: "elman",
  dropout: 0.1,
  seed: 0,
};

// One recurrence step: (input [B,Din], state [B,H]) -> new state [B,H].
export function makeCell(
  params: Params,
  name: string,
  cell: CellType,
  inDim: number,
  hidden: number,
) {
  if (cell === "elman") {
    const wx = dense(params, `${name}/wx`, inDim, hidden);
    const wh = dense(params, `${name}/wh`, hidden, hidden);
    return (x: tf.Tensor, h: tf.Tensor) => tf.tanh(tf.add(wx(x), wh(h)));
  }
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

// Bidirectional attention encoder-decoder over manually unrolled cells.
export class RnnModel implements Seq2SeqModel {
  readonly params: Params;
  private cfg: RnnConfig;
  private srcEmbed;
  private tgtEmbed;

  constructor(cfg: Partial<RnnConfig> = {}) {
    this.cfg = { ...RNN_DEFAULTS, ...cfg };
    this.params = new Params(mulberry32(this.cfg.seed * 2654435761 + 2));
    this.srcEmbed = embedding(this.params, "src", SRC_TOKENS.length, this.cfg.hidden);
    this.tgtEmbed = embedding(this.params, "tgt", TGT_TOKENS.length, this.cfg.hidden);
    tf.tidy(() => {
      const state = this.encode([[1, 2]], false);
      this.stepDecoder([BOS], state, false);
    });
  }

  private encoderCells(layer: number, dir: string, inDim: number) {
    return makeCell(this.params, `enc${layer}/${dir}`, this.cfg.cell, inDim, this.cfg.hidden);
  }

  private encode(srcIds: number[][], training: boolean) {
    const { hidden, layers } = this.cfg;
    const b = srcIds.length;
    const t = srcIds[0].length;
    const src = tf.tensor2d(srcIds, undefined, "int32");
    const srcMask = tf.cast(tf.notEqual(src, PAD), "float32"); // [B,T]
    let steps = tf.unstack(dropout(this.srcEmbed(src), this.cfg.dropout, training), 1);

    let lastForward = tf.zeros([b, hidden]);
    let lastBackward = tf.zeros([b, hidden]);
    for (let l = 0; l < layers; l++) {
      const fwdCell = this.encoderCells(l, "fwd", hidden);
      const bwdCell = this.encoderCells(l, "bwd", hidden);
      const fwd: tf.Tensor[] = [];
      const bwd: tf.Tensor[] = new Array(t);
      let hF = tf.zeros([b, hidden]);
      let hB = tf.zeros([b, hidden]);
      for (let i = 0; i < t; i++) {
        hF = fwdCell(steps[i], hF);
        fwd.push(hF);
      }
      for (let i = t - 1; i >= 0; i--) {
        hB = bwdCell(steps[i], hB);
        bwd[i] = hB;
      }
      lastForward = hF;
      lastBackward = hB;
      const merge = dense(this.params, `enc${l}/merge`, 2 * hidden, hidden);
      steps = fwd.map((f, i) => tf.tanh(merge(tf.concat([f, bwd[i]], 1))));
    }

    const memory = tf.stack(steps, 1); // [B,T,H]
    const init = dense(this.params, "dec/init", 2 * hidden, hidden)(
      tf.concat([lastForward, lastBackward], 1),
    );
    const states = Array.from({ length: layers }, () => tf.tanh(init));
    return { memory, srcMask, states };
  }

  // One decode step: embeds prev tokens, runs the cell stack, attends, projects.
  private stepDecoder(
    prevIds: number[],
    state: { memory: tf.Tensor; srcMask: tf.Tensor; states: tf.Tensor[] },
    training: boolean,
  ): { logits: tf.Tensor; states: tf.Tensor[] } {
    const { hidden, layers } = this.cfg;
    const prev = this.tgtEmbed(tf.tensor1d(prevIds, "int32"));
    let x: tf.Tensor = dropout(prev, this.cfg.dropout, training);
    const newStates: tf.Tensor[] = [];
    for (let l = 0; l < layers; l++) {
      const cell = makeCell(this.params, `dec${l}`, this.cfg.cell, hidden, hidden);
      const h = cell(x, state.states[l]);
      newStates.push(h);
      x = h;
    }
    // Luong dot attention over encoder memory
    const query = x.reshape([-1, 1, hidden]);
    let scores = tf.matMul(query, state.memory, false, true).squeeze([1]); // [B,T]
    scores = tf.add(scores, tf.mul(tf.sub(1, state.srcMask), -1e9));
    const attn = tf.softmax(scores).reshape([-1, 1, state.memory.shape[1] as number]);
    const ctx = tf.matMul(attn, state.memory).squeeze([1]); // [B,H]
    const combined = tf.tanh(
      dense(this.params, "dec/combine", 2 * hidden, hidden)(tf.concat([x, ctx], 1)),
    );
    const logits = dense(this.params, "dec/out", hidden, TGT_TOKENS.length)(
      dropout(combined, this.cfg.dropout, training),
    );
    return { logits, states: newStates };
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
        state = { ...state, states: out.states };
      }
      const logits = tf.stack(perStep, 1); // [B,T,V]
      return maskedCrossEntropy(logits, batch.tgtOut);
    });
  }

  greedyDecode(srcIds: number[][], maxLen: number): number[][] {
    const b = srcIds.length;
    const kept = tf.tidy(() => {
      const s = this.encode(srcIds, false);
      return [tf.keep(s.memory), tf.keep(s.srcMask), ...s.states.map((x) => tf.keep(x))];
    });
    const memory = kept[0];
    const srcMask = kept[1];
    let states = kept.slice(2);
    const result = greedyFromStepper(b, maxLen, (prefixes) => {
      const prevIds = prefixes.map((p) => p[p.length - 1]);
      const out = tf.tidy(() => {
        const step = this.stepDecoder(prevIds, { memory, srcMask, states }, false);
        return {
          next: Array.from(step.logits.argMax(-1).dataSync()),
          states: step.states.map((s) => tf.keep(s)),
        };
      });
      states.forEach((s) => s.dispose());
      states = out.states;
      return out.next;
    }, BOS);
    memory.dispose();
    srcMask.dispose();
    states.forEach((s) => s.dispose());
    return result;
  }
}
