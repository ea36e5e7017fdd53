"""Command-to-action interpretation.

``interpret`` is the production interpreter, built by structured
recursion over the parsed command. ``oracle_interpret`` reimplements the
same mapping by string rewriting over a literal rule table; it exists so
the two routes can be cross-checked exhaustively in tests.
"""

from __future__ import annotations

from .grammar import Command, Conjunction, Direction, EmbeddedSentence, Verb

LTURN = "LTURN"
RTURN = "RTURN"

# Action-sequence length contributed by each direction phrase.
DIRECTION_COST = {
    Direction.NONE: 1,
    Direction.LEFT: 2,
    Direction.RIGHT: 2,
    Direction.OPPOSITE_LEFT: 3,
    Direction.OPPOSITE_RIGHT: 3,
    Direction.AROUND_LEFT: 8,
    Direction.AROUND_RIGHT: 8,
}


def interpret_embedded(e: EmbeddedSentence) -> list[str]:
    base = e.verb.action
    unit = {
        Direction.NONE: [base],
        Direction.LEFT: [LTURN, base],
        Direction.RIGHT: [RTURN, base],
        Direction.OPPOSITE_LEFT: [LTURN, LTURN, base],
        Direction.OPPOSITE_RIGHT: [RTURN, RTURN, base],
        Direction.AROUND_LEFT: [LTURN, base] * 4,
        Direction.AROUND_RIGHT: [RTURN, base] * 4,
    }[e.direction]
    return unit * e.repetition.count


def interpret(c: Command) -> list[str]:
    first, second = c.e1, c.e2
    if c.conj is Conjunction.AFTER:
        first, second = second, first
    return interpret_embedded(first) + interpret_embedded(second)


def render_actions(actions: list[str]) -> str:
    return " ".join(actions)


def _oracle_rules() -> list[tuple[str, str]]:
    rules = []
    for verb in Verb:
        v, a = verb.surface, verb.action
        rules.extend(
            [
                (f"{v} around left", f"LTURN {a} " * 3 + f"LTURN {a}"),
                (f"{v} around right", f"RTURN {a} " * 3 + f"RTURN {a}"),
                (f"{v} opposite left", f"LTURN LTURN {a}"),
                (f"{v} opposite right", f"RTURN RTURN {a}"),
                (f"{v} left", f"LTURN {a}"),
                (f"{v} right", f"RTURN {a}"),
                (v, a),
            ]
        )
    return rules


_ORACLE_RULES = _oracle_rules()


def _rewrite_phrase(phrase: str) -> str:
    if phrase.endswith(" thrice"):
        core = _rewrite_phrase(phrase[: -len(" thrice")])
        return " ".join([core] * 3)
    if phrase.endswith(" twice"):
        core = _rewrite_phrase(phrase[: -len(" twice")])
        return " ".join([core] * 2)
    for pattern, replacement in _ORACLE_RULES:
        if phrase == pattern:
            return replacement
    raise ValueError(f"no rewrite rule matches {phrase!r}")


def oracle_interpret(surface: str) -> str:
    """Interpret a command surface string by literal rule-table rewriting."""
    tokens = surface.split()
    if "and" in tokens:
        split = tokens.index("and")
        parts = [tokens[:split], tokens[split + 1 :]]
    elif "after" in tokens:
        split = tokens.index("after")
        parts = [tokens[split + 1 :], tokens[:split]]
    else:
        raise ValueError("command has no conjunction")
    return " ".join(_rewrite_phrase(" ".join(p)) for p in parts)
