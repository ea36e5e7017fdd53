import { tf } from "./backend.js";
import { Rng } from "./rng.js";

// Central variable registry so models can be saved, loaded, and weight-decayed.
export class Params {
  readonly vars = new Map<string, tf.Variable>();
  private rng: Rng;

  constructor(rng: Rng) {
    this.rng = rng;
  }

  private gaussian(): number {
    // Box-Muller from the seeded uniform stream
    const u = Math.max(this.rng(), 1e-12);
    const v = this.rng();
    return Math.sqrt(-2 * Math.log(u)) * Math.cos(2 * Math.PI * v);
  }

  normal(name: string, shape: number[], std: number): tf.Variable {
    const existing = this.vars.get(name);
    if (existing) return existing;
    const size = shape.reduce((a, b) => a * b, 1);
    const values = new Float32Array(size);
    for (let i = 0; i < size; i++) values[i] = this.gaussian() * std;
    const variable = tf.variable(tf.tensor(values, shape), true);
    this.vars.set(name, variable);
    return variable;
  }

  zeros(name: string, shape: number[]): tf.Variable {
    const existing = this.vars.get(name);
    if (existing) return existing;
    const variable = tf.variable(tf.zeros(shape), true);
    this.vars.set(name, variable);
    return variable;
  }

  ones(name: string, shape: number[]): tf.Variable {
    const existing = this.vars.get(name);
    if (existing) return existing;
    const variable = tf.variable(tf.ones(shape), true);
    this.vars.set(name, variable);
    return variable;
  }

  list(): tf.Variable[] {
    return [...this.vars.values()];
  }

  toJSON(): Record<string, { shape: number[]; values: number[] }> {
    const out: Record<string, { shape: number[]; values: number[] }> = {};
    for (const [name, v] of this.vars) {
      out[name] = { shape: v.shape.slice(), values: Array.from(v.dataSync()) };
    }
    return out;
  }

  loadJSON(data: Record<string, { shape: number[]; values: number[] }>): void {
    for (const [name, v] of this.vars) {
      const entry = data[name];
      if (!entry) throw new Error(`checkpoint is missing variable ${name}`);
      v.assign(tf.tensor(entry.values, entry.shape as number[]));
    }
  }
}

export function dense(params: Params, name: string, inDim: number, outDim: number) {
  const w = params.normal(`${name}/w`, [inDim, outDim], Math.sqrt(1 / inDim));
  const b = params.zeros(`${name}/b`, [outDim]);
  // Accepts [*, inDim]; weights stay 2-D so gradients are well-defined.
  return (x: tf.Tensor): tf.Tensor => {
    const shape = x.shape.slice();
    const flat = x.reshape([-1, inDim]);
    const y = tf.add(tf.matMul(flat, w), b);
    shape[shape.length - 1] = outDim;
    return y.reshape(shape);
  };
}

export function embedding(params: Params, name: string, vocab: number, dim: number) {
  const table = params.normal(`${name}/emb`, [vocab, dim], 0.02);
  // one-hot matmul instead of gather: the gather gradient kernel is not
  // available on the wasm backend
  return (ids: tf.Tensor): tf.Tensor => {
    const oneHot = tf.oneHot(ids.flatten().toInt(), vocab);
    return tf.matMul(oneHot, table).reshape([...ids.shape, dim]);
  };
}

export function layerNorm(params: Params, name: string, dim: number) {
  const scale = params.ones(`${name}/scale`, [dim]);
  const shift = params.zeros(`${name}/shift`, [dim]);
  return (x: tf.Tensor): tf.Tensor => {
    const mean = tf.mean(x, -1, true);
    const centered = tf.sub(x, mean);
    const variance = tf.mean(tf.square(centered), -1, true);
    const normed = tf.div(centered, tf.sqrt(tf.add(variance, 1e-5)));
    return tf.add(tf.mul(normed, scale), shift);
  };
}

export function dropout(x: tf.Tensor, rate: number, training: boolean): tf.Tensor {
  if (!training || rate <= 0) return x;
  return tf.dropout(x, rate);
}

// Sinusoidal absolute position encodings.
export function sinusoidalPositions(length: number, dim: number): tf.Tensor2D {
  const values = new Float32Array(length * dim);
  for (let pos = 0; pos < length; pos++) {
    for (let i = 0; i < dim; i++) {
      const angle = pos / Math.pow(10000, (2 * Math.floor(i / 2)) / dim);
      values[pos * dim + i] = i % 2 === 0 ? Math.sin(angle) : Math.cos(angle);
    }
  }
  return tf.tensor2d(values, [length, dim]);
}

// Rotary position embedding applied to [B, H, T, D] with pair stride D/2.
export function applyRope(x: tf.Tensor, base: number): tf.Tensor {
  const [b, h, t, d] = x.shape as [number, number, number, number];
  const half = d / 2;
  const cos = new Float32Array(t * half);
  const sin = new Float32Array(t * half);
  for (let pos = 0; pos < t; pos++) {
    for (let i = 0; i < half; i++) {
      const angle = pos / Math.pow(base, (2 * i) / d);
      cos[pos * half + i] = Math.cos(angle);
      sin[pos * half + i] = Math.sin(angle);
    }
  }
  const cosT = tf.tensor(cos, [1, 1, t, half]);
  const sinT = tf.tensor(sin, [1, 1, t, half]);
  const x1 = tf.slice(x, [0, 0, 0, 0], [b, h, t, half]);
  const x2 = tf.slice(x, [0, 0, 0, half], [b, h, t, half]);
  const r1 = tf.sub(tf.mul(x1, cosT), tf.mul(x2, sinT));
  const r2 = tf.add(tf.mul(x2, cosT), tf.mul(x1, sinT));
  return tf.concat([r1, r2], 3);
}

// Clipped relative-position index matrix [Tq, Tk] shifted to be >= 0.
export function relativeIndices(tq: number, tk: number, span: number): tf.Tensor2D {
  const values = new Int32Array(tq * tk);
  for (let i = 0; i < tq; i++) {
    for (let j = 0; j < tk; j++) {
      const rel = Math.max(-span, Math.min(span, j - i));
      values[i * tk + j] = rel + span;
    }
  }
  return tf.tensor2d(values, [tq, tk], "int32");
}
