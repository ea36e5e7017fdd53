import { tf } from "./backend.js";
import { Example, batchStream } from "./data.js";
import { Seq2SeqModel } from "./models/base.js";
import { mulberry32 } from "./rng.js";

export interface TrainConfig {
  steps: number;
  batchSize: number;
  learningRate: number;
  weightDecay: number; // decoupled, applied after each optimizer step
  cosineDecay: boolean;
  seed: number;
  logEvery: number;
}

export const TRAIN_DEFAULTS: TrainConfig = {
  steps: 1000,
  batchSize: 32,
  learningRate: 3e-4,
  weightDecay: 1e-1,
  cosineDecay: true,
  seed: 0,
  logEvery: 100,
};

export interface TrainResult {
  losses: number[];
}

export function train(
  model: Seq2SeqModel,
  examples: Example[],
  cfg: Partial<TrainConfig> = {},
): TrainResult {
  const c = { ...TRAIN_DEFAULTS, ...cfg };
  const rng = mulberry32(c.seed ^ 0x9e3779b9);
  const batchSize = Math.min(c.batchSize, examples.length);
  const batches = batchStream(examples, batchSize, rng);
  const optimizer = tf.train.adam(c.learningRate);
  const variables = model.params.list();
  const losses: number[] = [];

  for (let step = 0; step < c.steps; step++) {
    if (c.cosineDecay) {
      const lr = (c.learningRate / 2) * (1 + Math.cos((Math.PI * step) / c.steps));
      (optimizer as unknown as { learningRate: number }).learningRate = lr;
    }
    const batch = batches.next().value!;
    const lossValue = optimizer.minimize(
      () => model.loss(batch, true),
      true,
      variables,
    )!;
    const loss = lossValue.dataSync()[0];
    lossValue.dispose();
    losses.push(loss);

    if (c.weightDecay > 0) {
      const lrNow = (optimizer as unknown as { learningRate: number }).learningRate ?? c.learningRate;
      tf.tidy(() => {
        for (const v of variables) {
          v.assign(tf.mul(v, 1 - lrNow * c.weightDecay));
        }
      });
    }

    if (c.logEvery > 0 && (step + 1) % c.logEvery === 0) {
      const window = losses.slice(-c.logEvery);
      const mean = window.reduce((a, b) => a + b, 0) / window.length;
      console.log(`step ${step + 1}/${c.steps} loss ${mean.toFixed(4)}`);
    }
  }
  optimizer.dispose();
  return { losses };
}

// Mean loss over trailing windows; used to smoke-test that training makes progress.
export function smoothedWindowMeans(losses: number[], window: number): number[] {
  const means: number[] = [];
  for (let i = 0; i + window <= losses.length; i += window) {
    const slice = losses.slice(i, i + window);
    means.push(slice.reduce((a, b) => a + b, 0) / slice.length);
  }
  return means;
}
