import math
import random

import pytest
from hypothesis import given, strategies as st

from entroscan.distributions import (
    MAX_ENTROPY,
    MAX_LAMBDA,
    MixtureSchedule,
    SupportSchedule,
    VerbDistribution,
    entropy,
    lambda_for_entropy,
    mixture_distribution,
    support_distribution,
)
from entroscan.grammar import VERBS, Verb


def uniform8():
    return VerbDistribution({v: 1 / 8 for v in VERBS})


def test_distribution_invariants():
    with pytest.raises(ValueError):
        VerbDistribution({Verb.JUMP: 0.5})
    with pytest.raises(ValueError):
        VerbDistribution({Verb.JUMP: 1.5, Verb.RUN: -0.5})


def test_entropy_endpoints():
    assert entropy(uniform8()) == pytest.approx(3.0, abs=1e-12)
    assert entropy(VerbDistribution({Verb.JUMP: 1.0})) == 0.0


@pytest.mark.parametrize(
    "head,tail,expected",
    [
        (0.8107105, 0.0630965, 1.0),
        (0.645457, 0.118181, 1.5),
    ],
)
def test_entropy_four_point_references(head, tail, expected):
    d = VerbDistribution(
        {Verb.LOOK: head, Verb.JUMP: tail, Verb.RUN: tail, Verb.WALK: tail}
    )
    assert entropy(d) == pytest.approx(expected, abs=1e-4)


def test_mixture_endpoints():
    degenerate = mixture_distribution(MixtureSchedule(0.0))
    assert degenerate.probs[Verb.JUMP] == 1.0
    assert entropy(degenerate) == 0.0
    uniform = mixture_distribution(MixtureSchedule(MAX_LAMBDA))
    assert entropy(uniform) == pytest.approx(3.0, abs=1e-12)


def test_mixture_half():
    d = mixture_distribution(MixtureSchedule(0.5))
    assert d.probs[Verb.JUMP] == pytest.approx(0.5)
    for v in VERBS:
        if v is not Verb.JUMP:
            assert d.probs[v] == pytest.approx(0.5 / 7)
    # cross-check the analytic entropy against a finite-sample frequency estimate
    rng = random.Random(7)
    verbs = list(VERBS)
    counts = {v: 0 for v in verbs}
    n = 200_000
    for v in rng.choices(verbs, weights=[d.probs[v] for v in verbs], k=n):
        counts[v] += 1
    empirical = -sum(
        c / n * math.log2(c / n) for c in counts.values() if c > 0
    )
    assert empirical == pytest.approx(entropy(d), abs=0.01)


def test_mixture_lambda_range():
    with pytest.raises(ValueError):
        MixtureSchedule(-0.1)
    with pytest.raises(ValueError):
        MixtureSchedule(0.9)


def test_support_distribution():
    assert entropy(support_distribution(SupportSchedule.of_size(1))) == 0.0
    assert entropy(support_distribution(SupportSchedule.of_size(3))) == pytest.approx(
        1.585, abs=1e-3
    )
    assert entropy(support_distribution(SupportSchedule.of_size(8))) == pytest.approx(
        3.0, abs=1e-12
    )
    for size in range(1, 9):
        d = support_distribution(SupportSchedule.of_size(size))
        assert entropy(d) == pytest.approx(math.log2(size), abs=1e-12)


def test_support_chain_and_errors():
    with pytest.raises(ValueError):
        SupportSchedule(())
    with pytest.raises(ValueError):
        SupportSchedule.of_size(9)
    previous: set[Verb] = set()
    for size in range(1, 9):
        support = set(SupportSchedule.of_size(size).support)
        assert Verb.JUMP in support
        assert previous < support
        previous = support


def test_lambda_for_entropy_endpoints():
    assert lambda_for_entropy(0.0) == 0.0
    assert lambda_for_entropy(3.0) == MAX_LAMBDA
    with pytest.raises(ValueError):
        lambda_for_entropy(-0.1)
    with pytest.raises(ValueError):
        lambda_for_entropy(3.1)


@given(st.floats(min_value=0.0, max_value=MAX_ENTROPY))
def test_lambda_for_entropy_round_trip(target):
    lam = lambda_for_entropy(target)
    assert 0.0 <= lam <= MAX_LAMBDA
    realized = entropy(mixture_distribution(MixtureSchedule(lam)))
    assert abs(realized - target) <= 1e-9


@given(
    st.floats(min_value=0.0, max_value=MAX_LAMBDA),
    st.floats(min_value=0.0, max_value=MAX_LAMBDA),
)
def test_mixture_entropy_monotone(a, b):
    lo, hi = sorted((a, b))
    h_lo = entropy(mixture_distribution(MixtureSchedule(lo)))
    h_hi = entropy(mixture_distribution(MixtureSchedule(hi)))
    if hi > lo:
        assert h_hi > h_lo
    else:
        assert h_hi == h_lo
