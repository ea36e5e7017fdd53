"""Command-line interface: generate, inspect, schedule, evaluate, suite."""

from __future__ import annotations

import json
import math
from pathlib import Path

import click

from . import datagen
from .datagen import (
    HORIZONTAL_GRID,
    VERTICAL_GRID,
    CapacityError,
    Dataset,
    ExperimentConfig,
    build_test,
    build_train,
    read_jsonl,
    write_metadata,
)
from .distributions import MixtureSchedule, entropy, lambda_for_entropy, mixture_distribution
from .evaluation import CoverageError, aggregate, emit_table, read_predictions, score
from .grammar import Conjunction, ParseError, Verb, parse_command
from .semantics import interpret, render_actions


def _verb(surface: str) -> Verb:
    try:
        return Verb(surface)
    except ValueError:
        raise click.BadParameter(f"unknown verb {surface!r}")


def _entropy_for(experiment: str, entropy_bits: float | None, support: int | None) -> float:
    if support is not None:
        if entropy_bits is not None:
            raise click.UsageError("pass either --entropy or --support, not both")
        return math.log2(support)
    if entropy_bits is None:
        raise click.UsageError("one of --entropy or --support is required")
    return entropy_bits


def _write_level(out: Path, config: ExperimentConfig) -> tuple[Dataset, Dataset]:
    train = build_train(config)
    test = build_test(config)
    out.mkdir(parents=True, exist_ok=True)
    train.write_jsonl(out / "train.jsonl")
    test.write_jsonl(out / "test.jsonl")
    write_metadata(out / "meta.json", train, test)
    return train, test


@click.group()
def main():
    """Entropy-controlled benchmark toolkit for the modified SCAN task."""


@main.command()
@click.option("--experiment", type=click.Choice(["vertical", "horizontal"]), required=True)
@click.option("--entropy", "entropy_bits", type=float, default=None, help="Target entropy in bits.")
@click.option("--support", type=click.IntRange(1, 8), default=None, help="Support size i (horizontal).")
@click.option("--out", type=click.Path(path_type=Path), required=True)
@click.option("--train-size", type=int, default=6000, show_default=True)
@click.option("--v1", default="jump", show_default=True, help="Restricted verb.")
@click.option("--seed", type=int, default=0, show_default=True)
def generate(experiment, entropy_bits, support, out, train_size, v1, seed):
    """Write train.jsonl, test.jsonl, and meta.json for one entropy level."""
    try:
        config = ExperimentConfig(
            experiment=experiment,
            entropy_target=_entropy_for(experiment, entropy_bits, support),
            restricted_verb=_verb(v1),
            train_size=train_size,
            seed=seed,
        )
        train, test = _write_level(out, config)
    except (ValueError, CapacityError) as exc:
        raise click.ClickException(str(exc))
    click.echo(f"wrote {len(train)} train and {len(test)} test samples to {out}")


@main.command()
@click.option("--data", type=click.Path(exists=True, path_type=Path), required=True)
def inspect(data):
    """Report entropies, counts, and constraint violations for a dataset file."""
    try:
        samples = read_jsonl(data)
    except ValueError as exc:
        raise click.ClickException(str(exc))

    click.echo(f"samples: {len(samples)}")
    duplicates = len(samples) - len({s.input for s in samples})
    click.echo(f"duplicate inputs: {duplicates}")

    output_mismatches = 0
    for s in samples:
        try:
            expected = render_actions(interpret(parse_command(s.input)))
        except ParseError:
            output_mismatches += 1
            continue
        if expected != s.output:
            output_mismatches += 1

    slot_violations = _slot_violations(data, samples)
    violations = output_mismatches + (slot_violations or 0)
    click.echo(f"output-mismatch violations: {output_mismatches}")
    if slot_violations is not None:
        click.echo(f"slot-constraint violations: {slot_violations}")
    click.echo(f"violations: {violations}")

    for conj in Conjunction:
        conj_samples = [s for s in samples if s.conj is conj]
        click.echo(f"samples[{conj.value}]: {len(conj_samples)}")
        if not conj_samples:
            continue
        for slot in ("e1", "e2"):
            counts: dict[Verb, int] = {}
            for s in conj_samples:
                verb = s.e1_verb if slot == "e1" else s.e2_verb
                counts[verb] = counts.get(verb, 0) + 1
            total = sum(counts.values())
            h = -sum(c / total * math.log2(c / total) for c in counts.values() if c > 0) + 0.0
            click.echo(f"entropy[{slot}|{conj.value}]: {h:.6f}")


def _slot_violations(data: Path, samples) -> int | None:
    """Check the restricted-verb slot constraint, if sidecar metadata exists."""
    meta_path = data.parent / "meta.json"
    name = data.name
    if not meta_path.exists() or not ("train" in name or "test" in name):
        return None
    meta = json.loads(meta_path.read_text(encoding="utf-8"))
    v1 = Verb(meta["config"]["restricted_verb"])
    is_train = "train" in name
    violations = 0
    for s in samples:
        inverted = s.e1_verb if s.conj is Conjunction.AND else s.e2_verb
        if is_train and inverted is v1:
            violations += 1
        if not is_train and inverted is not v1:
            violations += 1
    return violations


@main.command()
@click.option("--entropy", "entropy_bits", type=float, required=True)
@click.option("--v1", default="jump", show_default=True)
def schedule(entropy_bits, v1):
    """Print the mixture weight and verb probabilities for a target entropy."""
    try:
        lam = lambda_for_entropy(entropy_bits, _verb(v1))
    except ValueError as exc:
        raise click.ClickException(str(exc))
    dist = mixture_distribution(MixtureSchedule(lam, _verb(v1)))
    click.echo(f"lambda: {lam:.12f}")
    click.echo(f"entropy: {entropy(dist):.12f}")
    for verb, p in dist.probs.items():
        click.echo(f"{verb.surface}: {p:.12f}")


@main.command()
@click.option("--gold", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--pred", "preds", type=click.Path(exists=True, path_type=Path), multiple=True, required=True)
@click.option("--out", type=click.Path(path_type=Path), required=True)
@click.option("--entropy", "entropy_bits", type=float, default=None,
              help="Entropy label for the table; defaults to the gold meta.json target.")
def evaluate(gold, preds, out, entropy_bits):
    """Score prediction files against a gold dataset and write a report table."""
    samples = read_jsonl(gold)
    gold_ds = _gold_dataset(gold, samples)
    if entropy_bits is None:
        entropy_bits = gold_ds.config.entropy_target

    accuracies = []
    for pred_path in preds:
        try:
            pred = read_predictions(pred_path)
            accuracy = score(gold_ds, pred)
        except (ValueError, CoverageError) as exc:
            raise click.ClickException(f"{pred_path}: {exc}")
        click.echo(f"{pred_path}: accuracy {accuracy:.6f}")
        accuracies.append(accuracy)

    table = emit_table(aggregate({entropy_bits: accuracies}))
    out.parent.mkdir(parents=True, exist_ok=True)
    tmp = out.with_suffix(out.suffix + ".tmp")
    tmp.write_text(table + "\n", encoding="utf-8")
    tmp.replace(out)
    click.echo(f"wrote {out}")


def _gold_dataset(gold: Path, samples) -> Dataset:
    meta_path = gold.parent / "meta.json"
    if meta_path.exists():
        meta = json.loads(meta_path.read_text(encoding="utf-8"))["config"]
        config = ExperimentConfig(
            experiment=meta["experiment"],
            entropy_target=meta["entropy_target"],
            restricted_verb=Verb(meta["restricted_verb"]),
            train_size=meta["train_size"],
            seed=meta["seed"],
        )
    else:
        config = ExperimentConfig(experiment="vertical", entropy_target=0.0)
    return Dataset(split=gold.stem, samples=tuple(samples), config=config, realized_entropy=0.0)


@main.command()
@click.option("--experiment", type=click.Choice(["vertical", "horizontal"]), required=True)
@click.option("--grid", default=None, help="Comma-separated entropy levels; defaults per experiment.")
@click.option("--sizes", default="6000", show_default=True, help="Comma-separated train sizes (vertical only).")
@click.option("--out", type=click.Path(path_type=Path), required=True)
@click.option("--v1", default="jump", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
def suite(experiment, grid, sizes, out, v1, seed):
    """Generate every (entropy, size) cell under <out>/<experiment>/H<...>/."""
    default_grid = VERTICAL_GRID if experiment == "vertical" else HORIZONTAL_GRID
    levels = [float(x) for x in grid.split(",")] if grid else list(default_grid)
    size_list = [int(x) for x in sizes.split(",")]
    try:
        for level in levels:
            level_dir = out / experiment / f"H{level:.4f}"
            if experiment == "horizontal":
                config = ExperimentConfig(
                    experiment=experiment,
                    entropy_target=level,
                    restricted_verb=_verb(v1),
                    seed=seed,
                )
                _write_level(level_dir, config)
            else:
                for size in size_list:
                    config = ExperimentConfig(
                        experiment=experiment,
                        entropy_target=level,
                        restricted_verb=_verb(v1),
                        train_size=size,
                        seed=seed,
                    )
                    _write_level(level_dir / f"N{size}", config)
    except (ValueError, CapacityError) as exc:
        raise click.ClickException(str(exc))
    click.echo(f"suite written to {out / experiment}")


if __name__ == "__main__":
    main()
