import { tf } from "../backend.js";
import { Batch } from "../data.js";
import { Params, dense, dropout, embedding } from "../layers.js";
import { mulberry32 } from "../rng.js";
import { BOS, PAD, SRC_TOKENS, TGT_TOKENS } from "../vocab.js";
import { Seq2SeqModel, greedyFromStepper, maskedCrossEntropy } from "./base.js";

export interface CnnConfig {
  hidden: number;
  layers: number;
  kernel: number;
  dropout: number;
  maxSrcLen: number;
  maxTgtLen: number;
  seed: number;
}

export const CNN_DEFAULTS: CnnConfig = {
  hidden: 64,
  layers: 3,
  kernel: 5,
  dropout: 0.1,
  maxSrcLen: 16,
  maxTgtLen: 104,
  seed: 0,
};

const SQRT_HALF = Math.sqrt(0.5);

// Convolutional encoder-decoder with gated linear units and per-layer
// attention from the decoder onto the encoder output.
export class CnnModel implements Seq2SeqModel {
  readonly params: Params;
  private cfg: CnnConfig;
  private srcEmbed;
  private tgtEmbed;
  private srcPos;
  private tgtPos;

  constructor(cfg: Partial<CnnConfig> = {}) {
    this.cfg = { ...CNN_DEFAULTS, ...cfg };
    this.params = new Params(mulberry32(this.cfg.seed * 2654435761 + 3));
    const h = this.cfg.hidden;
    this.srcEmbed = embedding(this.params, "src", SRC_TOKENS.length, h);
    this.tgtEmbed = embedding(this.params, "tgt", TGT_TOKENS.length, h);
    this.srcPos = embedding(this.params, "srcPos", this.cfg.maxSrcLen, h);
    this.tgtPos = embedding(this.params, "tgtPos", this.cfg.maxTgtLen, h);
    tf.tidy(() => this.forward([[1, 2]], [[BOS]], false));
  }

  // 1-D convolution expressed as shifted-window concatenation plus a matmul;
  // the conv backprop kernels are unavailable on the wasm backend.
  private gluConv(name: string, x: tf.Tensor, causal: boolean, training: boolean): tf.Tensor {
    const h = this.cfg.hidden;
    const k = this.cfg.kernel;
    const filter = this.params.normal(`${name}/filter`, [k * h, 2 * h], Math.sqrt(1 / (k * h)));
    const bias = this.params.zeros(`${name}/bias`, [2 * h]);
    const input = dropout(x, this.cfg.dropout, training);
    const [b, t] = input.shape as number[];
    const padLeft = causal ? k - 1 : Math.floor((k - 1) / 2);
    const padded = tf.pad(input as tf.Tensor3D, [[0, 0], [padLeft, k - 1 - padLeft], [0, 0]]);
    const windows: tf.Tensor[] = [];
    for (let j = 0; j < k; j++) {
      windows.push(tf.slice(padded, [0, j, 0], [b, t, h]));
    }
    const stacked = tf.concat(windows, 2).reshape([b * t, k * h]);
    const conv = tf.add(tf.matMul(stacked, filter), bias).reshape([b, t, 2 * h]);
    const value = tf.slice(conv, [0, 0, 0], [-1, -1, h]);
    const gate = tf.slice(conv, [0, 0, h], [-1, -1, h]);
    return tf.mul(value, tf.sigmoid(gate));
  }

  private positions(embed: (ids: tf.Tensor) => tf.Tensor, b: number, t: number): tf.Tensor {
    const ids = tf.tensor2d(
      Array.from({ length: b }, () => Array.from({ length: t }, (_, i) => i)),
      [b, t],
      "int32",
    );
    return embed(ids);
  }

  private encode(srcIds: number[][], training: boolean) {
    const b = srcIds.length;
    const t = srcIds[0].length;
    const src = tf.tensor2d(srcIds, undefined, "int32");
    const srcMask = tf.cast(tf.notEqual(src, PAD), "float32");
    const embedded = tf.add(this.srcEmbed(src), this.positions(this.srcPos, b, t));
    let h = dropout(embedded, this.cfg.dropout, training);
    for (let l = 0; l < this.cfg.layers; l++) {
      h = tf.mul(tf.add(h, this.gluConv(`enc${l}`, h, false, training)), SQRT_HALF);
    }
    // attention keys and values per fconv: memory plus input embedding
    const memory = h;
    const values = tf.mul(tf.add(h, embedded), SQRT_HALF);
    return { memory, values, srcMask };
  }

  private decode(
    tgtIn: number[][],
    enc: { memory: tf.Tensor; values: tf.Tensor; srcMask: tf.Tensor },
    training: boolean,
  ): tf.Tensor {
    const b = tgtIn.length;
    const t = tgtIn[0].length;
    const hdim = this.cfg.hidden;
    const tgt = tf.tensor2d(tgtIn, undefined, "int32");
    const embedded = tf.add(this.tgtEmbed(tgt), this.positions(this.tgtPos, b, t));
    let h = dropout(embedded, this.cfg.dropout, training);
    for (let l = 0; l < this.cfg.layers; l++) {
      const conv = this.gluConv(`dec${l}`, h, true, training);
      // attention query combines the conv state with the target embedding
      const query = tf.add(
        dense(this.params, `dec${l}/attnQ`, hdim, hdim)(conv),
        embedded,
      );
      let scores = tf.matMul(query, enc.memory, false, true); // [B,Tt,Ts]
      scores = tf.add(scores, tf.mul(tf.sub(1, enc.srcMask.reshape([b, 1, -1])), -1e9));
      const ctx = tf.matMul(tf.softmax(scores), enc.values);
      const attended = dense(this.params, `dec${l}/attnO`, hdim, hdim)(ctx);
      h = tf.mul(tf.add(h, tf.mul(tf.add(conv, attended), SQRT_HALF)), SQRT_HALF);
    }
    return dense(this.params, "out", hdim, TGT_TOKENS.length)(h);
  }

  forward(srcIds: number[][], tgtIn: number[][], training: boolean): tf.Tensor {
    return this.decode(tgtIn, this.encode(srcIds, training), training);
  }

  loss(batch: Batch, training = true): tf.Scalar {
    return tf.tidy(() => maskedCrossEntropy(this.forward(batch.srcIds, batch.tgtIn, training), batch.tgtOut));
  }

  greedyDecode(srcIds: number[][], maxLen: number): number[][] {
    const b = srcIds.length;
    const kept = tf.tidy(() => {
      const enc = this.encode(srcIds, false);
      return [tf.keep(enc.memory), tf.keep(enc.values), tf.keep(enc.srcMask)];
    });
    const enc = { memory: kept[0], values: kept[1], srcMask: kept[2] };
    const result = greedyFromStepper(b, Math.min(maxLen, this.cfg.maxTgtLen - 1), (prefixes) => {
      return tf.tidy(() => {
        const t = Math.max(...prefixes.map((p) => p.length));
        const padded = prefixes.map((p) => {
          const out = p.slice();
          while (out.length < t) out.push(PAD);
          return out;
        });
        const logits = this.decode(padded, enc, false);
        const flat = logits.argMax(-1).dataSync();
        return prefixes.map((p, i) => flat[i * t + (p.length - 1)]);
      });
    }, BOS);
    kept.forEach((k) => k.dispose());
    return result;
  }
}
