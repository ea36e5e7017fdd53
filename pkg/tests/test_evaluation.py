import pytest

from entroscan.datagen import ExperimentConfig, build_test
from entroscan.evaluation import (
    CoverageError,
    PredictionSet,
    aggregate,
    emit_table,
    read_predictions,
    score,
    write_predictions,
)
from entroscan.semantics import oracle_interpret


@pytest.fixture(scope="module")
def gold():
    return build_test(ExperimentConfig("vertical", 1.0))


def gold_predictions(gold):
    return PredictionSet(
        entries=tuple((i, s.output) for i, s in enumerate(gold.samples))
    )


def test_score_identity(gold):
    assert score(gold, gold_predictions(gold)) == 1.0


def test_score_single_error(gold):
    entries = list(gold_predictions(gold).entries)
    idx, output = entries[42]
    entries[42] = (idx, " ".join(output.split()[1:]))
    assert score(gold, PredictionSet(entries=tuple(entries))) == pytest.approx(7055 / 7056)


def test_score_oracle_route(gold):
    pred = PredictionSet(
        entries=tuple((i, oracle_interpret(s.input)) for i, s in enumerate(gold.samples))
    )
    assert score(gold, pred) == 1.0


def test_score_order_invariant(gold):
    entries = list(gold_predictions(gold).entries)
    assert score(gold, PredictionSet(entries=tuple(reversed(entries)))) == 1.0


def test_score_whitespace_normalized(gold):
    entries = [(i, "  " + s.output.replace(" ", "   ")) for i, s in enumerate(gold.samples)]
    assert score(gold, PredictionSet(entries=tuple(entries))) == 1.0


def test_score_coverage_errors(gold):
    entries = gold_predictions(gold).entries
    with pytest.raises(CoverageError, match="missing"):
        score(gold, PredictionSet(entries=entries[:-10]))
    with pytest.raises(CoverageError, match="duplicate"):
        score(gold, PredictionSet(entries=entries + entries[:1]))
    with pytest.raises(CoverageError, match="out-of-range"):
        score(gold, PredictionSet(entries=entries[:-1] + ((99999, "JUMP"),)))


def test_aggregate():
    report = aggregate({1.0: [0.8] * 5})
    assert report.rows == ((1.0, 0.8, 0.0, 5),)
    report = aggregate({2.0: [0.0, 1.0]})
    assert report.rows == ((2.0, 0.5, 0.5, 2),)
    report = aggregate({0.5: [0.7]})
    assert report.rows == ((0.5, 0.7, 0.0, 1),)
    with pytest.raises(ValueError):
        aggregate({1.0: []})


def test_aggregate_mean_bounds():
    rows = aggregate({0.0: [0.2, 0.4, 0.9]}).rows
    _, mean, std, _ = rows[0]
    assert 0.2 <= mean <= 0.9
    assert std > 0


def test_emit_table_formatting():
    report = aggregate({3.0: [1.0]})
    assert emit_table(report) == "entropies accuracy std\n3.000000 1.000000 0.000000"


def test_emit_table_sorted_and_empty():
    report = aggregate({2.0: [0.5], 1.0: [0.25]})
    lines = emit_table(report).splitlines()
    assert lines[0] == "entropies accuracy std"
    assert lines[1].startswith("1.000000")
    assert lines[2].startswith("2.000000")
    from entroscan.evaluation import EvalReport

    assert emit_table(EvalReport(rows=())) == "entropies accuracy std"


def test_prediction_file_round_trip(tmp_path, gold):
    pred = gold_predictions(gold)
    path = tmp_path / "pred.tsv"
    write_predictions(path, pred)
    loaded = read_predictions(path)
    assert loaded.entries == pred.entries


def test_prediction_file_comments_and_errors(tmp_path):
    path = tmp_path / "pred.tsv"
    path.write_text("# a comment\n0\tJUMP\n\n1\tRUN RUN\n")
    assert read_predictions(path).entries == ((0, "JUMP"), (1, "RUN RUN"))
    path.write_text("zero\tJUMP\n")
    with pytest.raises(ValueError, match="bad index"):
        read_predictions(path)
