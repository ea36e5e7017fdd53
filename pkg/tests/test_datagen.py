import json
import math

import pytest

from entroscan.datagen import (
    CapacityError,
    ExperimentConfig,
    build_sample_size_suite,
    build_test,
    build_train,
    dataset_metadata,
    empirical_entropy,
    largest_remainder,
    read_jsonl,
    schedule_slot,
    uniform_slot,
    write_jsonl,
)
from entroscan.grammar import Conjunction, Verb, parse_command
from entroscan.semantics import interpret, render_actions

V1 = Verb.JUMP


def vertical(h, size=6000, seed=0):
    return ExperimentConfig("vertical", h, train_size=size, seed=seed)


def horizontal(i):
    return ExperimentConfig("horizontal", math.log2(i))


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig("diagonal", 1.0)
    with pytest.raises(ValueError):
        ExperimentConfig("vertical", 3.5)
    with pytest.raises(ValueError):
        ExperimentConfig("vertical", 1.0, train_size=0)
    with pytest.raises(ValueError):
        ExperimentConfig("horizontal", 1.3)  # not log2 of an integer
    assert ExperimentConfig("horizontal", math.log2(5)).support_size() == 5


def test_largest_remainder():
    assert largest_remainder(10, [0.5, 0.5]) == [5, 5]
    assert largest_remainder(10, [1 / 3, 1 / 3, 1 / 3]) in ([4, 3, 3], [3, 4, 3], [3, 3, 4])
    counts = largest_remainder(6000, [1 / 8] * 8)
    assert sum(counts) == 6000
    assert all(abs(c - 750) <= 1 for c in counts)


def test_slot_mirroring():
    assert schedule_slot(Conjunction.AND) == "e2"
    assert schedule_slot(Conjunction.AFTER) == "e1"
    assert uniform_slot(Conjunction.AND) == "e1"
    assert uniform_slot(Conjunction.AFTER) == "e2"


def test_vertical_h0_structure():
    train = build_train(vertical(0.0))
    assert len(train) == 6000
    for s in train.samples:
        if s.conj is Conjunction.AND:
            assert s.e2_verb is V1
            assert s.e1_verb is not V1
        else:
            assert s.e1_verb is V1
            assert s.e2_verb is not V1


def test_vertical_h3_near_uniform():
    train = build_train(vertical(3.0))
    counts = {}
    for s in train.samples:
        if s.conj is Conjunction.AND:
            counts[s.e2_verb] = counts.get(s.e2_verb, 0) + 1
    assert all(abs(c - 3000 / 8) <= 1 for c in counts.values())
    assert empirical_entropy(train, "e2", Conjunction.AND) == pytest.approx(3.0, abs=0.01)


def test_vertical_budget_split():
    train = build_train(vertical(1.0, size=6001))
    n_and = sum(1 for s in train.samples if s.conj is Conjunction.AND)
    assert n_and == 3001  # odd budgets favor "and"
    assert len(train) == 6001


def test_quota_fidelity():
    config = vertical(1.5)
    schedule = config.schedule_distribution()
    train = build_train(config)
    counts = {v: 0 for v in Verb}
    for s in train.samples:
        if s.conj is Conjunction.AND:
            counts[s.e2_verb] += 1
    for v in Verb:
        assert abs(counts[v] - 3000 * schedule.probs[v]) < 1.0


def test_horizontal_sizes():
    for i in range(1, 9):
        train = build_train(horizontal(i))
        assert len(train) == 2 * 147 * 21 * i
        assert train.realized_entropy == pytest.approx(math.log2(i), abs=1e-12)


def test_test_split_structure():
    test = build_test(vertical(1.0))
    assert len(test) == 7056
    for s in test.samples:
        if s.conj is Conjunction.AND:
            assert s.e1_verb is V1
        else:
            assert s.e2_verb is V1
    # identical for every entropy level
    assert build_test(vertical(2.5)).samples == test.samples
    assert empirical_entropy(test, "e2", Conjunction.AND) == pytest.approx(3.0, abs=1e-12)


def test_train_test_disjoint_and_outputs_correct():
    config = vertical(2.0)
    train = build_train(config)
    test = build_test(config)
    train_inputs = {s.input for s in train.samples}
    test_inputs = {s.input for s in test.samples}
    assert len(train_inputs) == len(train.samples)
    assert len(test_inputs) == len(test.samples)
    assert not train_inputs & test_inputs
    for s in list(train.samples) + list(test.samples):
        assert s.output == render_actions(interpret(parse_command(s.input)))


def test_determinism_and_seed_sensitivity():
    a = build_train(vertical(1.5, seed=13))
    b = build_train(vertical(1.5, seed=13))
    c = build_train(vertical(1.5, seed=14))
    assert a.samples == b.samples
    assert a.samples != c.samples


def test_capacity_limits():
    build_train(vertical(0.0, size=6000))  # 3000 <= 3087 per conjunction
    with pytest.raises(CapacityError):
        build_train(vertical(0.0, size=7000))


def test_sample_size_suite():
    datasets = build_sample_size_suite(vertical(2.0), [3000, 4000, 6000])
    assert [len(d) for d in datasets] == [3000, 4000, 6000]
    for d in datasets:
        assert d.realized_entropy == pytest.approx(2.0, abs=0.02)


def test_sample_size_suite_h0():
    (d,) = build_sample_size_suite(vertical(0.0), [3000])
    per_conj = [s for s in d.samples if s.conj is Conjunction.AND]
    assert len(per_conj) == 1500
    assert all(s.e2_verb is V1 for s in per_conj)


def test_empirical_entropy_errors():
    test = build_test(vertical(1.0))
    with pytest.raises(ValueError):
        empirical_entropy(test, "e3", Conjunction.AND)
    empty = build_train(vertical(1.0, size=1))  # single sample goes to "and"
    with pytest.raises(ValueError):
        empirical_entropy(empty, "e1", Conjunction.AFTER)


def test_jsonl_round_trip(tmp_path):
    train = build_train(vertical(1.0, size=100))
    path = tmp_path / "train.jsonl"
    write_jsonl(path, train.samples)
    assert tuple(read_jsonl(path)) == train.samples
    first = json.loads(path.read_text().splitlines()[0])
    assert set(first) == {"input", "output", "conj", "e1_verb", "e2_verb"}


def test_jsonl_malformed_reports_line(tmp_path):
    path = tmp_path / "bad.jsonl"
    path.write_text('{"input": "jump and jump"}\n')
    with pytest.raises(ValueError, match=":1:"):
        read_jsonl(path)


def test_metadata_contents():
    config = vertical(0.0, size=200)
    meta = dataset_metadata(build_train(config), build_test(config))
    assert meta["counts"] == {"train": 200, "test": 7056}
    assert meta["config"]["restricted_verb"] == "jump"
    assert meta["realized_entropy"]["per_slot"]["train"]["e2|and"] == 0.0
    assert meta["realized_entropy"]["per_slot"]["test"]["e2|and"] == pytest.approx(3.0)
