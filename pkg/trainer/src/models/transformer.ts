import { tf } from "../backend.js";
import { Batch, makeBatch } from "../data.js";
import {
  Params,
  applyRope,
  dense,
  dropout,
  embedding,
  layerNorm,
  relativeIndices,
  sinusoidalPositions,
} from "../layers.js";
import { mulberry32 } from "../rng.js";
import { BOS, PAD, SRC_TOKENS, TGT_TOKENS } from "../vocab.js";
import { Seq2SeqModel, greedyFromStepper, maskedCrossEntropy } from "./base.js";

export type PositionType = "absolute" | "rope" | "relative";

export interface TransformerConfig {
  hidden: number;
  layers: number;
  heads: number;
  dropout: number;
  position: PositionType;
  ropeBase: number; // rotary angular-frequency base
  relInputSpan: number; // relative-attention clip for the encoder
  relOutputSpan: number; // relative-attention clip for the decoder
  seed: number;
}

export const TRANSFORMER_DEFAULTS: TransformerConfig = {
  hidden: 128,
  layers: 3,
  heads: 4,
  dropout: 0.1,
  position: "absolute",
  ropeBase: 1000,
  relInputSpan: 64,
  relOutputSpan: 4,
  seed: 0,
};

interface AttentionOpts {
  causal: boolean;
  relSpan: number | null; // disentangled relative attention when set
  rope: boolean;
}

export class TransformerModel implements Seq2SeqModel {
  readonly params: Params;
  private cfg: TransformerConfig;
  private srcEmbed;
  private tgtEmbed;
  private outProj;

  constructor(cfg: Partial<TransformerConfig> = {}) {
    this.cfg = { ...TRANSFORMER_DEFAULTS, ...cfg };
    this.params = new Params(mulberry32(this.cfg.seed * 2654435761 + 1));
    this.srcEmbed = embedding(this.params, "src", SRC_TOKENS.length, this.cfg.hidden);
    this.tgtEmbed = embedding(this.params, "tgt", TGT_TOKENS.length, this.cfg.hidden);
    this.outProj = dense(this.params, "out", this.cfg.hidden, TGT_TOKENS.length);
    // materialize all layer parameters up front so checkpoints are complete
    const probe = makeBatch([
      { input: "", output: "", srcIds: [1, 2], tgtIds: [3] },
    ]);
    tf.tidy(() => this.forward(probe.srcIds, probe.tgtIn, false));
  }

  private attention(
    name: string,
    q: tf.Tensor,
    kv: tf.Tensor,
    keyMask: tf.Tensor | null,
    opts: AttentionOpts,
    training: boolean,
  ): tf.Tensor {
    const { hidden, heads } = this.cfg;
    const dh = hidden / heads;
    const [b, tq] = q.shape as number[];
    const tk = kv.shape[1] as number;

    const split = (x: tf.Tensor, t: number) =>
      x.reshape([b, t, heads, dh]).transpose([0, 2, 1, 3]); // [B,H,T,Dh]

    let qh = split(dense(this.params, `${name}/q`, hidden, hidden)(q), tq);
    let kh = split(dense(this.params, `${name}/k`, hidden, hidden)(kv), tk);
    const vh = split(dense(this.params, `${name}/v`, hidden, hidden)(kv), tk);

    if (opts.rope) {
      qh = applyRope(qh, this.cfg.ropeBase);
      kh = applyRope(kh, this.cfg.ropeBase);
    }

    let scores = tf.matMul(qh, kh, false, true);
    let scale = Math.sqrt(dh);
    if (opts.relSpan !== null) {
      // disentangled content-to-position and position-to-content terms
      const span = opts.relSpan;
      const relIdx = relativeIndices(tq, tk, span);
      const relK = this.params.normal(`${name}/relK`, [2 * span + 1, dh], 0.02);
      const relQ = this.params.normal(`${name}/relQ`, [2 * span + 1, dh], 0.02);
      // one-hot matmul lookup: the gather gradient kernel is unavailable on wasm
      const relOneHot = tf.oneHot(relIdx.flatten(), 2 * span + 1);
      const relKMat = tf.matMul(relOneHot, relK).reshape([1, 1, tq, tk, dh]);
      const relQMat = tf.matMul(relOneHot, relQ).reshape([1, 1, tq, tk, dh]);
      const c2p = tf.sum(tf.mul(qh.reshape([b, heads, tq, 1, dh]), relKMat), 4);
      const p2c = tf.sum(tf.mul(kh.reshape([b, heads, 1, tk, dh]), relQMat), 4);
      scores = tf.add(scores, tf.add(c2p, p2c));
      scale = Math.sqrt(3 * dh);
    }
    scores = tf.div(scores, scale);

    if (opts.causal) {
      const causal = tf.linalg.bandPart(tf.ones([tq, tk]), -1, 0);
      scores = tf.add(scores, tf.mul(tf.sub(1, causal.reshape([1, 1, tq, tk])), -1e9));
    }
    if (keyMask !== null) {
      // keyMask: [B, Tk] with 1 for real tokens
      scores = tf.add(scores, tf.mul(tf.sub(1, keyMask.reshape([b, 1, 1, tk])), -1e9));
    }

    let attn = tf.softmax(scores);
    attn = dropout(attn, this.cfg.dropout, training);
    const ctx = tf.matMul(attn, vh).transpose([0, 2, 1, 3]).reshape([b, tq, hidden]);
    return dense(this.params, `${name}/o`, hidden, hidden)(ctx);
  }

  // Gated linear unit feed-forward (two input projections, sigmoid gate).
  private glu(name: string, x: tf.Tensor, training: boolean): tf.Tensor {
    const { hidden } = this.cfg;
    const inner = 2 * hidden;
    const value = dense(this.params, `${name}/v`, hidden, inner)(x);
    const gate = dense(this.params, `${name}/g`, hidden, inner)(x);
    const h = dropout(tf.mul(value, tf.sigmoid(gate)), this.cfg.dropout, training);
    return dense(this.params, `${name}/o`, inner, hidden)(h);
  }

  private addPositions(x: tf.Tensor, t: number): tf.Tensor {
    if (this.cfg.position !== "absolute") return x;
    return tf.add(x, sinusoidalPositions(t, this.cfg.hidden).reshape([1, t, this.cfg.hidden]));
  }

  private encode(srcIds: number[][], training: boolean): { memory: tf.Tensor; mask: tf.Tensor } {
    const src = tf.tensor2d(srcIds, undefined, "int32");
    const mask = tf.cast(tf.notEqual(src, PAD), "float32");
    const t = srcIds[0].length;
    let h = dropout(this.addPositions(this.srcEmbed(src), t), this.cfg.dropout, training);
    for (let l = 0; l < this.cfg.layers; l++) {
      const n1 = layerNorm(this.params, `enc${l}/ln1`, this.cfg.hidden)(h);
      h = tf.add(
        h,
        this.attention(`enc${l}/self`, n1, n1, mask, {
          causal: false,
          rope: this.cfg.position === "rope",
          relSpan: this.cfg.position === "relative" ? this.cfg.relInputSpan : null,
        }, training),
      );
      const n2 = layerNorm(this.params, `enc${l}/ln2`, this.cfg.hidden)(h);
      h = tf.add(h, this.glu(`enc${l}/ffn`, n2, training));
    }
    return { memory: layerNorm(this.params, "enc/ln", this.cfg.hidden)(h), mask };
  }

  private decode(
    tgtIn: number[][],
    memory: tf.Tensor,
    srcMask: tf.Tensor,
    training: boolean,
  ): tf.Tensor {
    const tgt = tf.tensor2d(tgtIn, undefined, "int32");
    const t = tgtIn[0].length;
    let h = dropout(this.addPositions(this.tgtEmbed(tgt), t), this.cfg.dropout, training);
    for (let l = 0; l < this.cfg.layers; l++) {
      const n1 = layerNorm(this.params, `dec${l}/ln1`, this.cfg.hidden)(h);
      h = tf.add(
        h,
        this.attention(`dec${l}/self`, n1, n1, null, {
          causal: true,
          rope: this.cfg.position === "rope",
          relSpan: this.cfg.position === "relative" ? this.cfg.relOutputSpan : null,
        }, training),
      );
      const n2 = layerNorm(this.params, `dec${l}/ln2`, this.cfg.hidden)(h);
      h = tf.add(
        h,
        this.attention(`dec${l}/cross`, n2, memory, srcMask, {
          causal: false,
          rope: false,
          relSpan: null,
        }, training),
      );
      const n3 = layerNorm(this.params, `dec${l}/ln3`, this.cfg.hidden)(h);
      h = tf.add(h, this.glu(`dec${l}/ffn`, n3, training));
    }
    return this.outProj(layerNorm(this.params, "dec/ln", this.cfg.hidden)(h));
  }

  forward(srcIds: number[][], tgtIn: number[][], training: boolean): tf.Tensor {
    const { memory, mask } = this.encode(srcIds, training);
    return this.decode(tgtIn, memory, mask, training);
  }

  loss(batch: Batch, training = true): tf.Scalar {
    return tf.tidy(() => maskedCrossEntropy(this.forward(batch.srcIds, batch.tgtIn, training), batch.tgtOut));
  }

  greedyDecode(srcIds: number[][], maxLen: number): number[][] {
    const b = srcIds.length;
    const enc = tf.tidy(() => {
      const { memory, mask } = this.encode(srcIds, false);
      return [tf.keep(memory), tf.keep(mask)];
    });
    const [memory, mask] = enc;
    const result = greedyFromStepper(b, maxLen, (prefixes) => {
      return tf.tidy(() => {
        const t = Math.max(...prefixes.map((p) => p.length));
        const padded = prefixes.map((p) => {
          const out = p.slice();
          while (out.length < t) out.push(PAD);
          return out;
        });
        const logits = this.decode(padded, memory, mask, false);
        const next: number[] = [];
        const flat = logits.argMax(-1).dataSync();
        for (let i = 0; i < b; i++) next.push(flat[i * t + (prefixes[i].length - 1)]);
        return next;
      });
    }, BOS);
    memory.dispose();
    mask.dispose();
    return result;
  }
}
