"""Train/test dataset construction for both entropy-scaling experiments.

The restricted verb is excluded from one slot during training and forced
into that slot at test time. The two conjunctions mirror the slot roles:
under "and" the schedule governs e2, under "after" it governs e1. All
sampling is quota-exact (largest-remainder rounding) and fully
deterministic given the master seed.
"""

from __future__ import annotations

import hashlib
import json
import math
import random
from dataclasses import dataclass, replace
from pathlib import Path

from . import __version__
from .distributions import (
    MAX_ENTROPY,
    MixtureSchedule,
    SupportSchedule,
    VerbDistribution,
    entropy,
    lambda_for_entropy,
    mixture_distribution,
    support_distribution,
)
from .grammar import CONJUNCTIONS, VERBS, Command, Conjunction, EmbeddedSentence, Verb, enumerate_embedded
from .semantics import interpret, render_actions

EXPERIMENTS = ("vertical", "horizontal", "sample-size-control")

# Default entropy grids; the horizontal grid is fixed by the support sizes.
VERTICAL_GRID = (0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0)
HORIZONTAL_GRID = tuple(math.log2(i) for i in range(1, 9))

FORMS_PER_VERB = 21  # 7 directions x 3 repetitions


class CapacityError(ValueError):
    """Requested quota exceeds the number of unique commands available."""


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    entropy_target: float
    restricted_verb: Verb = Verb.JUMP
    train_size: int = 6000
    seed: int = 0

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ValueError(f"unknown experiment {self.experiment!r}")
        if not 0.0 <= self.entropy_target <= MAX_ENTROPY:
            raise ValueError(
                f"entropy target must be in [0, {MAX_ENTROPY}], got {self.entropy_target}"
            )
        if self.experiment == "horizontal":
            if self.support_size() is None:
                raise ValueError(
                    "horizontal entropy target must equal log2(i) for integer i in [1, 8]"
                )
        elif self.train_size < 1:
            raise ValueError("train_size must be >= 1")

    def support_size(self) -> int | None:
        for i in range(1, len(VERBS) + 1):
            if abs(self.entropy_target - math.log2(i)) < 1e-9:
                return i
        return None

    def schedule_distribution(self) -> VerbDistribution:
        if self.experiment == "horizontal":
            schedule = SupportSchedule.of_size(self.support_size(), self.restricted_verb)
            return support_distribution(schedule)
        lam = lambda_for_entropy(self.entropy_target, self.restricted_verb)
        return mixture_distribution(MixtureSchedule(lam, self.restricted_verb))

    def to_json(self) -> dict:
        return {
            "experiment": self.experiment,
            "entropy_target": self.entropy_target,
            "restricted_verb": self.restricted_verb.surface,
            "train_size": self.train_size,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class Sample:
    input: str
    output: str
    conj: Conjunction
    e1_verb: Verb
    e2_verb: Verb

    def to_json(self) -> dict:
        return {
            "input": self.input,
            "output": self.output,
            "conj": self.conj.value,
            "e1_verb": self.e1_verb.surface,
            "e2_verb": self.e2_verb.surface,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Sample":
        return cls(
            input=obj["input"],
            output=obj["output"],
            conj=Conjunction(obj["conj"]),
            e1_verb=Verb(obj["e1_verb"]),
            e2_verb=Verb(obj["e2_verb"]),
        )


@dataclass(frozen=True)
class Dataset:
    split: str
    samples: tuple[Sample, ...]
    config: ExperimentConfig
    realized_entropy: float

    def __len__(self) -> int:
        return len(self.samples)

    def write_jsonl(self, path: Path) -> None:
        write_jsonl(path, self.samples)


def schedule_slot(conj: Conjunction) -> str:
    """Which slot the entropy schedule governs under this conjunction."""
    return "e2" if conj is Conjunction.AND else "e1"


def uniform_slot(conj: Conjunction) -> str:
    return "e1" if conj is Conjunction.AND else "e2"


def _derive_rng(seed: int, *labels: str) -> random.Random:
    key = ":".join([str(seed), *labels]).encode()
    digest = hashlib.sha256(key).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


def largest_remainder(total: int, probs: list[float]) -> list[int]:
    """Integer counts summing to ``total`` that deviate from total*p by < 1."""
    raw = [total * p for p in probs]
    counts = [math.floor(x) for x in raw]
    leftover = total - sum(counts)
    order = sorted(range(len(raw)), key=lambda i: (counts[i] - raw[i], i))
    for i in order[:leftover]:
        counts[i] += 1
    return counts


def _make_sample(sched: EmbeddedSentence, uni: EmbeddedSentence, conj: Conjunction) -> Sample:
    if conj is Conjunction.AND:
        cmd = Command(uni, conj, sched)
    else:
        cmd = Command(sched, conj, uni)
    return Sample(
        input=cmd.render(),
        output=render_actions(interpret(cmd)),
        conj=conj,
        e1_verb=cmd.e1.verb,
        e2_verb=cmd.e2.verb,
    )


def _sample_conjunction(
    config: ExperimentConfig,
    conj: Conjunction,
    n: int,
    schedule: VerbDistribution,
) -> list[Sample]:
    v1 = config.restricted_verb
    uniform_verbs = [v for v in VERBS if v is not v1]
    per_verb_capacity = len(uniform_verbs) * FORMS_PER_VERB * FORMS_PER_VERB

    quotas = largest_remainder(n, [schedule.probs[v] for v in VERBS])
    samples: list[Sample] = []
    for verb, quota in zip(VERBS, quotas):
        if quota == 0:
            continue
        if quota > per_verb_capacity:
            raise CapacityError(
                f"need {quota} unique commands with {verb.surface!r} in the "
                f"{schedule_slot(conj)} slot under {conj.value!r}, but only "
                f"{per_verb_capacity} exist (deficit {quota - per_verb_capacity})"
            )
        rng = _derive_rng(config.seed, "train", conj.value, verb.surface)
        sched_forms = enumerate_embedded({verb})
        cell_quotas = largest_remainder(quota, [1 / len(uniform_verbs)] * len(uniform_verbs))
        for uni_verb, cell_quota in zip(uniform_verbs, cell_quotas):
            if cell_quota == 0:
                continue
            pool = [
                (s, u)
                for s in sched_forms
                for u in enumerate_embedded({uni_verb})
            ]
            if cell_quota > len(pool):
                raise CapacityError(
                    f"cell quota {cell_quota} exceeds the {len(pool)} unique "
                    f"({verb.surface}, {uni_verb.surface}) commands under {conj.value!r}"
                )
            rng.shuffle(pool)
            samples.extend(_make_sample(s, u, conj) for s, u in pool[:cell_quota])
    return samples


def build_train(config: ExperimentConfig) -> Dataset:
    """Materialize the training split for one entropy level."""
    schedule = config.schedule_distribution()
    v1 = config.restricted_verb

    if config.experiment == "horizontal":
        uniform_forms = enumerate_embedded(set(VERBS) - {v1})
        support = SupportSchedule.of_size(config.support_size(), v1).support
        sched_forms = enumerate_embedded(set(support))
        samples = [
            _make_sample(s, u, conj)
            for conj in CONJUNCTIONS
            for s in sched_forms
            for u in uniform_forms
        ]
    else:
        n_and = (config.train_size + 1) // 2  # odd budgets favor "and"
        n_after = config.train_size - n_and
        samples = _sample_conjunction(config, Conjunction.AND, n_and, schedule)
        samples += _sample_conjunction(config, Conjunction.AFTER, n_after, schedule)

    dataset = Dataset(
        split="train",
        samples=tuple(samples),
        config=config,
        realized_entropy=_schedule_slot_entropy(samples),
    )
    return dataset


def build_test(config: ExperimentConfig) -> Dataset:
    """Exhaustive test split: the restricted verb fills the inverted slot."""
    v1 = config.restricted_verb
    v1_forms = enumerate_embedded({v1})
    all_forms = enumerate_embedded()
    samples = [
        _make_sample(s, u, conj)
        for conj in CONJUNCTIONS
        for u in v1_forms
        for s in all_forms
    ]
    return Dataset(
        split="test",
        samples=tuple(samples),
        config=config,
        realized_entropy=_schedule_slot_entropy(samples),
    )


def build_sample_size_suite(config: ExperimentConfig, sizes: list[int]) -> list[Dataset]:
    """One training set per unique-sample budget, at the same entropy target."""
    return [build_train(replace(config, train_size=size)) for size in sizes]


def _verb_counts(samples: list[Sample], slot: str, conj: Conjunction) -> dict[Verb, int]:
    counts: dict[Verb, int] = {}
    for s in samples:
        if s.conj is not conj:
            continue
        verb = s.e1_verb if slot == "e1" else s.e2_verb
        counts[verb] = counts.get(verb, 0) + 1
    return counts


def _counts_entropy(counts: dict[Verb, int]) -> float:
    total = sum(counts.values())
    # + 0.0 normalizes -0.0 from the single-verb case
    return -sum(c / total * math.log2(c / total) for c in counts.values() if c > 0) + 0.0


def _schedule_slot_entropy(samples) -> float:
    counts: dict[Verb, int] = {}
    for s in samples:
        verb = s.e2_verb if s.conj is Conjunction.AND else s.e1_verb
        counts[verb] = counts.get(verb, 0) + 1
    return _counts_entropy(counts)


def empirical_entropy(dataset: Dataset, slot: str, conj: Conjunction) -> float:
    """Entropy of the realized verb frequencies in one slot, one conjunction."""
    if slot not in ("e1", "e2"):
        raise ValueError(f"slot must be 'e1' or 'e2', got {slot!r}")
    counts = _verb_counts(list(dataset.samples), slot, conj)
    if not counts:
        raise ValueError(f"dataset has no samples with conjunction {conj.value!r}")
    return _counts_entropy(counts)


def write_jsonl(path: Path, samples) -> None:
    path = Path(path)
    tmp = path.with_suffix(path.suffix + ".tmp")
    with tmp.open("w", encoding="utf-8") as f:
        for s in samples:
            f.write(json.dumps(s.to_json(), ensure_ascii=False))
            f.write("\n")
    tmp.replace(path)


def read_jsonl(path: Path) -> list[Sample]:
    samples = []
    with Path(path).open(encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                samples.append(Sample.from_json(json.loads(line)))
            except (json.JSONDecodeError, KeyError, ValueError) as exc:
                raise ValueError(f"{path}:{lineno}: malformed sample: {exc}") from exc
    return samples


def dataset_metadata(train: Dataset, test: Dataset) -> dict:
    per_slot = {}
    for name, ds in (("train", train), ("test", test)):
        per_slot[name] = {
            f"{slot}|{conj.value}": empirical_entropy(ds, slot, conj)
            for conj in CONJUNCTIONS
            for slot in ("e1", "e2")
        }
    return {
        "config": train.config.to_json(),
        "seed": train.config.seed,
        "counts": {"train": len(train), "test": len(test)},
        "realized_entropy": {
            "train_schedule_slot": train.realized_entropy,
            "per_slot": per_slot,
        },
        "version": __version__,
    }


def write_metadata(path: Path, train: Dataset, test: Dataset) -> None:
    path = Path(path)
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(json.dumps(dataset_metadata(train, test), indent=2) + "\n", encoding="utf-8")
    tmp.replace(path)
