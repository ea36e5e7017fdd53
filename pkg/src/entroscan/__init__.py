"""Entropy-controlled systematic-generalization benchmarks on a modified SCAN grammar."""

__version__ = "0.1.0"

from .grammar import (
    Command,
    Conjunction,
    Direction,
    EmbeddedSentence,
    ParseError,
    Repetition,
    Verb,
    enumerate_commands,
    enumerate_embedded,
    parse_command,
)
from .semantics import interpret, interpret_embedded, oracle_interpret, render_actions
from .distributions import (
    MixtureSchedule,
    SupportSchedule,
    VerbDistribution,
    entropy,
    lambda_for_entropy,
    mixture_distribution,
    support_distribution,
)
from .datagen import (
    CapacityError,
    Dataset,
    ExperimentConfig,
    Sample,
    build_sample_size_suite,
    build_test,
    build_train,
    empirical_entropy,
    read_jsonl,
    write_jsonl,
)
from .evaluation import (
    CoverageError,
    EvalReport,
    PredictionSet,
    aggregate,
    emit_table,
    read_predictions,
    score,
    write_predictions,
)
