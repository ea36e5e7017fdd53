"""Exact-match scoring of prediction files and multi-seed aggregation."""

from __future__ import annotations

import statistics
from dataclasses import dataclass
from pathlib import Path

from .datagen import Dataset


class CoverageError(ValueError):
    """Predictions do not cover the gold dataset exactly once each."""


@dataclass(frozen=True)
class PredictionSet:
    entries: tuple[tuple[int, str], ...]
    model: str = ""
    seed: str = ""
    entropy: float | None = None


@dataclass(frozen=True)
class EvalReport:
    # rows: (entropy, mean accuracy, population std, number of seeds)
    rows: tuple[tuple[float, float, float, int], ...]


def read_predictions(path: Path, **labels) -> PredictionSet:
    """Parse a tab-separated prediction file: "index<TAB>prediction"."""
    entries = []
    with Path(path).open(encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            idx_str, _, prediction = line.partition("\t")
            try:
                idx = int(idx_str)
            except ValueError:
                raise ValueError(f"{path}:{lineno}: bad index {idx_str!r}") from None
            entries.append((idx, prediction))
    return PredictionSet(entries=tuple(entries), **labels)


def write_predictions(path: Path, pred: PredictionSet) -> None:
    with Path(path).open("w", encoding="utf-8") as f:
        for idx, output in pred.entries:
            f.write(f"{idx}\t{output}\n")


def score(gold: Dataset, pred: PredictionSet) -> float:
    """Fraction of predictions whose token sequence matches gold exactly."""
    n = len(gold.samples)
    seen: dict[int, str] = {}
    duplicates = []
    out_of_range = []
    for idx, output in pred.entries:
        if idx in seen:
            duplicates.append(idx)
        if not 0 <= idx < n:
            out_of_range.append(idx)
        seen[idx] = output
    missing = [i for i in range(n) if i not in seen]
    if duplicates or out_of_range or missing:
        parts = []
        if missing:
            parts.append(f"{len(missing)} missing indices (first: {missing[:5]})")
        if duplicates:
            parts.append(f"duplicate indices {sorted(set(duplicates))[:5]}")
        if out_of_range:
            parts.append(f"out-of-range indices {out_of_range[:5]}")
        raise CoverageError("; ".join(parts))

    correct = sum(
        1
        for idx, output in seen.items()
        if output.split() == gold.samples[idx].output.split()
    )
    return correct / n


def aggregate(groups: dict[float, list[float]]) -> EvalReport:
    """Mean and population std of per-seed accuracies, per entropy level."""
    rows = []
    for level in sorted(groups):
        accuracies = groups[level]
        if not accuracies:
            raise ValueError(f"no accuracies for entropy level {level}")
        mean = statistics.fmean(accuracies)
        std = statistics.pstdev(accuracies) if len(accuracies) > 1 else 0.0
        rows.append((level, mean, std, len(accuracies)))
    return EvalReport(rows=tuple(rows))


def emit_table(report: EvalReport) -> str:
    """Plot-ready table with columns: entropies, accuracy, std."""
    lines = ["entropies accuracy std"]
    for level, mean, std, _ in sorted(report.rows):
        lines.append(f"{level:.6f} {mean:.6f} {std:.6f}")
    return "\n".join(lines)
