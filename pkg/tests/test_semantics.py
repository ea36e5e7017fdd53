import pytest

from entroscan.grammar import (
    Conjunction,
    Direction,
    EmbeddedSentence,
    Repetition,
    Verb,
    enumerate_commands,
    parse_command,
)
from entroscan.semantics import (
    DIRECTION_COST,
    interpret,
    interpret_embedded,
    oracle_interpret,
    render_actions,
)


def run(surface):
    return render_actions(interpret(parse_command(surface)))


@pytest.mark.parametrize(
    "surface,expected",
    [
        ("squat opposite right and squat", "RTURN RTURN SQUAT SQUAT"),
        ("squat twice and crawl opposite left", "SQUAT SQUAT LTURN LTURN CRAWL"),
        ("sprint right twice after sprint left", "LTURN SPRINT RTURN SPRINT RTURN SPRINT"),
        ("lunge opposite left and look thrice", "LTURN LTURN LUNGE LOOK LOOK LOOK"),
        ("run twice and jump", "RUN RUN JUMP"),
        ("jump and jump", "JUMP JUMP"),
        ("jump after jump", "JUMP JUMP"),
    ],
)
def test_reference_examples(surface, expected):
    assert run(surface) == expected


def test_interpret_embedded_cases():
    assert interpret_embedded(
        EmbeddedSentence(Verb.SQUAT, Direction.OPPOSITE_RIGHT)
    ) == ["RTURN", "RTURN", "SQUAT"]
    assert interpret_embedded(
        EmbeddedSentence(Verb.SPRINT, Direction.RIGHT, Repetition.TWICE)
    ) == ["RTURN", "SPRINT", "RTURN", "SPRINT"]
    assert interpret_embedded(EmbeddedSentence(Verb.JUMP)) == ["JUMP"]
    walk = interpret_embedded(
        EmbeddedSentence(Verb.WALK, Direction.AROUND_LEFT, Repetition.THRICE)
    )
    assert walk == ["LTURN", "WALK"] * 12
    assert len(walk) == 24


def test_conjunction_order():
    # "after" executes the second embedded sentence first
    assert run("jump and run") == "JUMP RUN"
    assert run("jump after run") == "RUN JUMP"


def test_compositionality_and_length_law_exhaustive():
    for cmd in enumerate_commands():
        actions = interpret(cmd)
        e1 = interpret_embedded(cmd.e1)
        e2 = interpret_embedded(cmd.e2)
        if cmd.conj is Conjunction.AND:
            assert actions == e1 + e2
        else:
            assert actions == e2 + e1
        expected_len = sum(
            e.repetition.count * DIRECTION_COST[e.direction] for e in (cmd.e1, cmd.e2)
        )
        assert len(actions) == expected_len


def test_oracle_equivalence_exhaustive():
    for cmd in enumerate_commands():
        surface = cmd.render()
        assert oracle_interpret(surface) == render_actions(interpret(cmd))


def test_determinism():
    cmd = parse_command("walk around right thrice after lunge left twice")
    assert interpret(cmd) == interpret(cmd)
