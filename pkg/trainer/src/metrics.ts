import fs from "fs";
import path from "path";

export function exactMatch(predicted: string, gold: string): boolean {
  const norm = (s: string) => s.split(/\s+/).filter(Boolean).join(" ");
  return norm(predicted) === norm(gold);
}

export function accuracy(predictions: string[], golds: string[]): number {
  if (predictions.length !== golds.length) {
    throw new Error(`prediction count ${predictions.length} != gold count ${golds.length}`);
  }
  let correct = 0;
  for (let i = 0; i < golds.length; i++) {
    if (exactMatch(predictions[i], golds[i])) correct++;
  }
  return correct / golds.length;
}

function ranks(values: number[]): number[] {
  const order = values.map((v, i) => [v, i] as const).sort((a, b) => a[0] - b[0]);
  const out = new Array(values.length).fill(0);
  let i = 0;
  while (i < order.length) {
    let j = i;
    while (j + 1 < order.length && order[j + 1][0] === order[i][0]) j++;
    const rank = (i + j) / 2 + 1; // average rank for ties
    for (let k = i; k <= j; k++) out[order[k][1]] = rank;
    i = j + 1;
  }
  return out;
}

export function spearman(xs: number[], ys: number[]): number {
  if (xs.length !== ys.length || xs.length < 2) {
    throw new Error("spearman needs two equal-length series of length >= 2");
  }
  const rx = ranks(xs);
  const ry = ranks(ys);
  const mean = (v: number[]) => v.reduce((a, b) => a + b, 0) / v.length;
  const mx = mean(rx);
  const my = mean(ry);
  let num = 0;
  let dx = 0;
  let dy = 0;
  for (let i = 0; i < rx.length; i++) {
    num += (rx[i] - mx) * (ry[i] - my);
    dx += (rx[i] - mx) ** 2;
    dy += (ry[i] - my) ** 2;
  }
  return num / Math.sqrt(dx * dy);
}

export interface CurveRow {
  entropy: number;
  accuracies: number[];
}

// Same table format the evaluation tooling emits: one row per entropy
// level with mean and population standard deviation over seeds.
export function emitTable(rows: CurveRow[]): string {
  const lines = ["entropies accuracy std"];
  for (const row of [...rows].sort((a, b) => a.entropy - b.entropy)) {
    const n = row.accuracies.length;
    if (n === 0) throw new Error(`no accuracies at entropy ${row.entropy}`);
    const mean = row.accuracies.reduce((a, b) => a + b, 0) / n;
    const variance = row.accuracies.reduce((a, b) => a + (b - mean) ** 2, 0) / n;
    const std = n > 1 ? Math.sqrt(variance) : 0;
    lines.push(`${row.entropy.toFixed(6)} ${mean.toFixed(6)} ${std.toFixed(6)}`);
  }
  return lines.join("\n");
}

// Tab-separated prediction files: "index<TAB>predicted action string".
export function writePredictions(filePath: string, predictions: string[]): void {
  fs.mkdirSync(path.dirname(filePath), { recursive: true });
  const body = predictions.map((p, i) => `${i}\t${p}`).join("\n") + "\n";
  const tmp = filePath + ".tmp";
  fs.writeFileSync(tmp, body);
  fs.renameSync(tmp, filePath);
}
