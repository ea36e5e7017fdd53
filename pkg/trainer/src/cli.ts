#!/usr/bin/env node
import fs from "fs";
import path from "path";

import yargs, { Argv } from "yargs";
import { hideBin } from "yargs/helpers";

import { initBackend } from "./backend.js";
import {
  Architecture,
  ExperimentKind,
  DESK_SCALE,
  PAPER_SCALE,
  buildModel,
  preset,
} from "./config.js";
import { loadJsonl } from "./data.js";
import { accuracy, emitTable, spearman, writePredictions, CurveRow } from "./metrics.js";
import { PositionType } from "./models/transformer.js";
import { predictAll } from "./predict.js";
import { train } from "./train.js";

interface Checkpoint {
  arch: Architecture;
  experiment: ExperimentKind;
  position: PositionType;
  seed: number;
  params: Record<string, { shape: number[]; values: number[] }>;
}

const archChoices = ["transformer", "rnn", "cnn", "permeq"] as const;
const positionChoices = ["absolute", "rope", "relative"] as const;

function commonModelOptions<T>(y: Argv<T>) {
  return y
    .option("config", {
      type: "string",
      config: true,
      describe: "JSON file with flag defaults; explicit flags override it",
    })
    .option("arch", { choices: archChoices, default: "transformer" as Architecture })
    .option("experiment", {
      choices: ["vertical", "horizontal"] as const,
      default: "vertical" as ExperimentKind,
    })
    .option("position", {
      choices: positionChoices,
      default: "absolute" as PositionType,
      describe: "transformer positional encoding",
    })
    .option("seed", { type: "number", default: 0 });
}

function trainOne(args: {
  arch: Architecture;
  experiment: ExperimentKind;
  position: PositionType;
  seed: number;
  steps?: number;
  batchSize?: number;
  lr?: number;
  trainPath: string;
}) {
  const p = preset(args.arch, args.experiment, args.position);
  const examples = loadJsonl(args.trainPath);
  const model = buildModel(p, args.seed);
  const trainCfg = {
    ...p.train,
    seed: args.seed,
    ...(args.steps !== undefined ? { steps: args.steps } : {}),
    ...(args.batchSize !== undefined ? { batchSize: args.batchSize } : {}),
    ...(args.lr !== undefined ? { learningRate: args.lr } : {}),
  };
  const result = train(model, examples, trainCfg);
  return { model, result };
}

function writeCheckpoint(file: string, ckpt: Checkpoint): void {
  fs.mkdirSync(path.dirname(path.resolve(file)), { recursive: true });
  const tmp = file + ".tmp";
  fs.writeFileSync(tmp, JSON.stringify(ckpt));
  fs.renameSync(tmp, file);
}

// Locate dataset leaf directories (those holding train.jsonl and test.jsonl)
// under a suite layout of H<entropy>/ levels, optionally with N<size>/ inside.
function findLevels(root: string, size?: number): { entropy: number; dir: string }[] {
  const out: { entropy: number; dir: string }[] = [];
  for (const entry of fs.readdirSync(root, { withFileTypes: true })) {
    if (!entry.isDirectory() || !/^H\d/.test(entry.name)) continue;
    const entropy = parseFloat(entry.name.slice(1));
    const hDir = path.join(root, entry.name);
    if (fs.existsSync(path.join(hDir, "train.jsonl"))) {
      out.push({ entropy, dir: hDir });
      continue;
    }
    const sizes = fs
      .readdirSync(hDir, { withFileTypes: true })
      .filter((d) => d.isDirectory() && /^N\d+$/.test(d.name))
      .map((d) => parseInt(d.name.slice(1), 10))
      .sort((a, b) => a - b);
    if (sizes.length === 0) continue;
    const chosen = size !== undefined ? size : sizes[sizes.length - 1];
    const leaf = path.join(hDir, `N${chosen}`);
    if (!fs.existsSync(path.join(leaf, "train.jsonl"))) {
      throw new Error(`no train.jsonl under ${leaf}`);
    }
    out.push({ entropy, dir: leaf });
  }
  if (out.length === 0) throw new Error(`no H*/ dataset directories under ${root}`);
  return out.sort((a, b) => a.entropy - b.entropy);
}

export async function main(argv: string[]): Promise<void> {
  await initBackend();
  await yargs(argv)
    .scriptName("entroscan-trainer")
    .command(
      "train",
      "train a model on one dataset and save a checkpoint",
      (y) =>
        commonModelOptions(y)
          .option("train", { type: "string", demandOption: true, describe: "train.jsonl path" })
          .option("steps", { type: "number" })
          .option("batch-size", { type: "number" })
          .option("lr", { type: "number" })
          .option("checkpoint", { type: "string", demandOption: true }),
      (a) => {
        const { model } = trainOne({
          arch: a.arch,
          experiment: a.experiment,
          position: a.position,
          seed: a.seed,
          steps: a.steps,
          batchSize: a["batch-size"],
          lr: a.lr,
          trainPath: a.train,
        });
        writeCheckpoint(a.checkpoint, {
          arch: a.arch,
          experiment: a.experiment,
          position: a.position,
          seed: a.seed,
          params: model.params.toJSON(),
        });
        console.log(`saved checkpoint to ${a.checkpoint}`);
      },
    )
    .command(
      "predict",
      "decode a test set with a checkpointed model and write predictions",
      (y) =>
        y
          .option("checkpoint", { type: "string", demandOption: true })
          .option("test", { type: "string", demandOption: true, describe: "test.jsonl path" })
          .option("out", { type: "string", demandOption: true, describe: "prediction tsv path" }),
      (a) => {
        const ckpt = JSON.parse(fs.readFileSync(a.checkpoint, "utf-8")) as Checkpoint;
        const model = buildModel(preset(ckpt.arch, ckpt.experiment, ckpt.position), ckpt.seed);
        model.params.loadJSON(ckpt.params);
        const examples = loadJsonl(a.test);
        const predictions = predictAll(model, examples);
        writePredictions(a.out, predictions);
        const acc = accuracy(
          predictions,
          examples.map((e) => e.output),
        );
        console.log(`wrote ${predictions.length} predictions to ${a.out} (accuracy ${acc.toFixed(6)})`);
      },
    )
    .command(
      "run-curve",
      "train/evaluate across all entropy levels of a generated suite and emit the accuracy table",
      (y) =>
        commonModelOptions(y)
          .option("suite", {
            type: "string",
            demandOption: true,
            describe: "experiment directory containing H<entropy>/ levels",
          })
          .option("size", { type: "number", describe: "training-set size level to use (N<size>/)" })
          .option("seeds", { type: "number", describe: "number of random seeds" })
          .option("steps", { type: "number", describe: "training steps per run" })
          .option("paper-scale", { type: "boolean", default: false })
          .option("out", { type: "string", describe: "file for the accuracy table" })
          .option("predictions-dir", { type: "string", describe: "directory for per-run prediction files" }),
      (a) => {
        const scale = a["paper-scale"] ? PAPER_SCALE : DESK_SCALE;
        const seeds = a.seeds ?? scale.seeds;
        const steps = a.steps ?? scale.steps;
        const levels = findLevels(a.suite, a.size);
        const rows: CurveRow[] = [];
        for (const level of levels) {
          const testExamples = loadJsonl(path.join(level.dir, "test.jsonl"));
          const golds = testExamples.map((e) => e.output);
          const accuracies: number[] = [];
          for (let seed = 0; seed < seeds; seed++) {
            console.log(`entropy ${level.entropy} seed ${seed}: training ${a.arch} for ${steps} steps`);
            const { model } = trainOne({
              arch: a.arch,
              experiment: a.experiment,
              position: a.position,
              seed,
              steps,
              trainPath: path.join(level.dir, "train.jsonl"),
            });
            const predictions = predictAll(model, testExamples);
            if (a["predictions-dir"]) {
              writePredictions(
                path.join(a["predictions-dir"], `H${level.entropy.toFixed(4)}_seed${seed}.tsv`),
                predictions,
              );
            }
            const acc = accuracy(predictions, golds);
            console.log(`entropy ${level.entropy} seed ${seed}: accuracy ${acc.toFixed(6)}`);
            accuracies.push(acc);
          }
          rows.push({ entropy: level.entropy, accuracies });
        }
        const table = emitTable(rows);
        console.log(table);
        if (rows.length >= 2) {
          const means = rows.map(
            (r) => r.accuracies.reduce((x, y) => x + y, 0) / r.accuracies.length,
          );
          const rho = spearman(rows.map((r) => r.entropy), means);
          if (Number.isFinite(rho)) {
            console.log(`spearman(entropy, accuracy) = ${rho.toFixed(6)}`);
          }
        }
        if (a.out) {
          fs.mkdirSync(path.dirname(path.resolve(a.out)), { recursive: true });
          fs.writeFileSync(a.out, table + "\n");
        }
      },
    )
    .demandCommand(1)
    .strict()
    .help()
    .parseAsync();
}

const isDirectRun =
  process.argv[1] && path.resolve(process.argv[1]) === new URL(import.meta.url).pathname;
if (isDirectRun) {
  main(hideBin(process.argv)).catch((err) => {
    console.error(err instanceof Error ? err.message : err);
    process.exit(1);
  });
}
