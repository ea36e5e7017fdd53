"""Modified SCAN grammar: vocabulary, enumeration, rendering, and parsing.

The command language has 8 verbs, 6 direction phrases, 2 repetition
adverbs, and 2 conjunctions. Every command is two embedded sentences
joined by a conjunction; there are no single-sentence commands and no
bare "turn" primitives.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class Verb(Enum):
    LOOK = "look"
    JUMP = "jump"
    RUN = "run"
    WALK = "walk"
    SPRINT = "sprint"
    CRAWL = "crawl"
    SQUAT = "squat"
    LUNGE = "lunge"

    @property
    def surface(self) -> str:
        return self.value

    @property
    def action(self) -> str:
        return self.value.upper()


class Direction(Enum):
    NONE = "none"
    LEFT = "left"
    RIGHT = "right"
    OPPOSITE_LEFT = "opposite-left"
    OPPOSITE_RIGHT = "opposite-right"
    AROUND_LEFT = "around-left"
    AROUND_RIGHT = "around-right"

    @property
    def tokens(self) -> tuple[str, ...]:
        if self is Direction.NONE:
            return ()
        return tuple(self.value.split("-"))


class Repetition(Enum):
    ONCE = "once"
    TWICE = "twice"
    THRICE = "thrice"

    @property
    def tokens(self) -> tuple[str, ...]:
        if self is Repetition.ONCE:
            return ()
        return (self.value,)

    @property
    def count(self) -> int:
        return {"once": 1, "twice": 2, "thrice": 3}[self.value]


class Conjunction(Enum):
    AND = "and"
    AFTER = "after"


VERBS = tuple(Verb)
DIRECTIONS = tuple(Direction)
REPETITIONS = tuple(Repetition)
CONJUNCTIONS = tuple(Conjunction)

_SURFACE_VERB = {v.surface: v for v in VERBS}
_CONJ_TOKENS = {c.value: c for c in CONJUNCTIONS}


class ParseError(ValueError):
    """Raised when a surface string is not a grammatical command.

    ``position`` is the zero-based index of the offending token, or the
    token count when the input ends prematurely.
    """

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (token {position})")
        self.position = position


@dataclass(frozen=True)
class EmbeddedSentence:
    verb: Verb
    direction: Direction = Direction.NONE
    repetition: Repetition = Repetition.ONCE

    def tokens(self) -> tuple[str, ...]:
        return (self.verb.surface,) + self.direction.tokens + self.repetition.tokens

    def render(self) -> str:
        return " ".join(self.tokens())


@dataclass(frozen=True)
class Command:
    e1: EmbeddedSentence
    conj: Conjunction
    e2: EmbeddedSentence

    def tokens(self) -> tuple[str, ...]:
        return self.e1.tokens() + (self.conj.value,) + self.e2.tokens()

    def render(self) -> str:
        return " ".join(self.tokens())


def enumerate_embedded(verb_filter: set[Verb] | None = None) -> list[EmbeddedSentence]:
    """All embedded sentences, in declaration order of (verb, direction, repetition).

    ``verb_filter`` restricts the verb set; an explicit empty filter is an error.
    """
    if verb_filter is not None and not verb_filter:
        raise ValueError("verb_filter must be a non-empty set of verbs")
    verbs = [v for v in VERBS if verb_filter is None or v in verb_filter]
    return [
        EmbeddedSentence(v, d, r)
        for v in verbs
        for d in DIRECTIONS
        for r in REPETITIONS
    ]


def enumerate_commands() -> list[Command]:
    """All 56 448 commands in canonical order (e1, conjunction, e2)."""
    embedded = enumerate_embedded()
    return [
        Command(e1, c, e2)
        for e1 in embedded
        for c in CONJUNCTIONS
        for e2 in embedded
    ]


def _parse_embedded(tokens: list[str], pos: int) -> tuple[EmbeddedSentence, int]:
    if pos >= len(tokens):
        raise ParseError("expected a verb but input ended", pos)
    verb = _SURFACE_VERB.get(tokens[pos])
    if verb is None:
        raise ParseError(f"expected a verb, got {tokens[pos]!r}", pos)
    pos += 1

    direction = Direction.NONE
    if pos < len(tokens):
        tok = tokens[pos]
        if tok in ("left", "right"):
            direction = Direction(tok)
            pos += 1
        elif tok in ("opposite", "around"):
            if pos + 1 >= len(tokens) or tokens[pos + 1] not in ("left", "right"):
                raise ParseError(f"{tok!r} must be followed by 'left' or 'right'", pos + 1)
            direction = Direction(f"{tok}-{tokens[pos + 1]}")
            pos += 2

    repetition = Repetition.ONCE
    if pos < len(tokens) and tokens[pos] in ("twice", "thrice"):
        repetition = Repetition(tokens[pos])
        pos += 1

    return EmbeddedSentence(verb, direction, repetition), pos


def parse_command(surface: str) -> Command:
    """Parse a surface string back into a Command; inverse of render()."""
    tokens = surface.split()
    e1, pos = _parse_embedded(tokens, 0)
    if pos >= len(tokens):
        raise ParseError("expected a conjunction but input ended", pos)
    conj = _CONJ_TOKENS.get(tokens[pos])
    if conj is None:
        raise ParseError(f"expected a conjunction, got {tokens[pos]!r}", pos)
    pos += 1
    e2, pos = _parse_embedded(tokens, pos)
    if pos < len(tokens):
        if tokens[pos] in _CONJ_TOKENS:
            raise ParseError("only one conjunction is allowed", pos)
        raise ParseError(f"unexpected trailing token {tokens[pos]!r}", pos)
    return Command(e1, conj, e2)
