"""Verb distributions, Shannon entropy, and the two entropy schedules.

Vertical scaling mixes a degenerate distribution at the restricted verb
with the uniform over the remaining verbs; horizontal scaling enlarges
the support of a uniform one verb at a time. ``lambda_for_entropy``
inverts the mixture's entropy curve by bisection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .grammar import VERBS, Verb

MAX_ENTROPY = math.log2(len(VERBS))  # 3.0 bits for 8 verbs
MAX_LAMBDA = 1 - 1 / len(VERBS)  # 0.875

_SUM_TOL = 1e-12


@dataclass(frozen=True)
class VerbDistribution:
    probs: dict[Verb, float]

    def __post_init__(self):
        full = {v: self.probs.get(v, 0.0) for v in VERBS}
        object.__setattr__(self, "probs", full)
        if any(p < 0 for p in full.values()):
            raise ValueError("probabilities must be non-negative")
        total = sum(full.values())
        if abs(total - 1.0) > _SUM_TOL:
            raise ValueError(f"probabilities sum to {total}, not 1")

    def entropy(self) -> float:
        return entropy(self)

    def to_json(self) -> dict[str, float]:
        return {v.surface: p for v, p in self.probs.items()}

    def support(self) -> list[Verb]:
        return [v for v in VERBS if self.probs[v] > 0]


@dataclass(frozen=True)
class MixtureSchedule:
    """Mixture of uniform-over-others and degenerate-at-restricted-verb."""

    lam: float
    restricted_verb: Verb = Verb.JUMP

    def __post_init__(self):
        if not 0.0 <= self.lam <= MAX_LAMBDA:
            raise ValueError(f"lambda must be in [0, {MAX_LAMBDA}], got {self.lam}")


@dataclass(frozen=True)
class SupportSchedule:
    """Uniform over a support chain that starts at the restricted verb."""

    support: tuple[Verb, ...]

    def __post_init__(self):
        if not self.support:
            raise ValueError("support must be non-empty")
        if len(set(self.support)) != len(self.support):
            raise ValueError("support must not contain duplicates")

    @property
    def restricted_verb(self) -> Verb:
        return self.support[0]

    @classmethod
    def of_size(cls, size: int, restricted_verb: Verb = Verb.JUMP) -> "SupportSchedule":
        if not 1 <= size <= len(VERBS):
            raise ValueError(f"support size must be in [1, {len(VERBS)}], got {size}")
        others = [v for v in VERBS if v is not restricted_verb]
        return cls(tuple([restricted_verb] + others[: size - 1]))


def entropy(d: VerbDistribution) -> float:
    """Shannon entropy in bits, with 0*log2(0) taken as 0."""
    return -sum(p * math.log2(p) for p in d.probs.values() if p > 0) + 0.0


def mixture_distribution(s: MixtureSchedule) -> VerbDistribution:
    other = s.lam / (len(VERBS) - 1)
    return VerbDistribution(
        {v: (1 - s.lam) if v is s.restricted_verb else other for v in VERBS}
    )


def support_distribution(s: SupportSchedule) -> VerbDistribution:
    p = 1 / len(s.support)
    return VerbDistribution({v: p for v in s.support})


def lambda_for_entropy(
    target_h: float,
    restricted_verb: Verb = Verb.JUMP,
    tol: float = 1e-9,
    max_iter: int = 200,
) -> float:
    """Invert the mixture entropy curve: find lambda with H(lambda) = target_h.

    H is strictly increasing on [0, 1 - 1/|V|], so plain bisection on the
    entropy residual converges.
    """
    if not 0.0 <= target_h <= MAX_ENTROPY:
        raise ValueError(f"target entropy must be in [0, {MAX_ENTROPY}], got {target_h}")
    if target_h == 0.0:
        return 0.0
    if target_h == MAX_ENTROPY:
        return MAX_LAMBDA

    def h(lam: float) -> float:
        return entropy(mixture_distribution(MixtureSchedule(lam, restricted_verb)))

    lo, hi = 0.0, MAX_LAMBDA
    for _ in range(max_iter):
        mid = (lo + hi) / 2
        val = h(mid)
        if abs(val - target_h) <= tol:
            return mid
        if val < target_h:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2
