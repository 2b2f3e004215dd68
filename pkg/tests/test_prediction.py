import pytest

from src.core.errors import ArityError, ConfigError, RangeError
from src.engine.prediction import (
    ReasoningFunction,
    choose,
    laplace_distribution,
    laplace_reasoning,
    next_state_distribution,
    predict,
)
from src.engine.tensor import TransitionTensor

A, B, C = 0, 1, 2


@pytest.fixture
def tensor():
    """A -> B twice, A -> C once, B -> A once."""
    t = TransitionTensor(2, 3)
    t.increment((A, B), 2)
    t.increment((A, C))
    t.increment((B, A))
    return t


def test_conditional_frequency(tensor):
    dist = next_state_distribution(tensor, (A,))
    assert dist == pytest.approx({B: 2 / 3, C: 1 / 3})
    assert sum(dist.values()) == pytest.approx(1.0, abs=1e-9)
    assert next_state_distribution(tensor, (C,)) == {}


def test_predict_respects_threshold(tensor):
    state, probability = predict(tensor, (A,), 0.5)
    assert state == B
    assert probability == pytest.approx(2 / 3)
    assert predict(tensor, (A,), 0.7) is None
    assert predict(tensor, (C,), 0.0) is None


def test_ties_go_to_lowest_index():
    t = TransitionTensor(2, 3)
    t.increment((A, C))
    t.increment((A, B))
    assert choose(next_state_distribution(t, (A,)), 0.5) == (B, 0.5)


@pytest.mark.parametrize("threshold", [-0.1, 1.5])
def test_threshold_range(tensor, threshold):
    with pytest.raises(RangeError):
        predict(tensor, (A,), threshold)


def test_prefix_length_checked(tensor):
    with pytest.raises(ArityError):
        predict(tensor, (A, B), 0.5)


@pytest.mark.parametrize("factor", [2, 3, 17])
def test_scaling_counts_keeps_the_choice(tensor, factor):
    scaled = TransitionTensor(2, 3)
    for path, n in tensor.items():
        scaled.increment(path, n * factor)
    assert predict(scaled, (A,), 0.0)[0] == predict(tensor, (A,), 0.0)[0]
    assert next_state_distribution(scaled, (A,)) == pytest.approx(next_state_distribution(tensor, (A,)))


def test_laplace_spreads_mass(tensor):
    dist = laplace_distribution(tensor, (A,), alpha=1.0)
    assert dist == pytest.approx({A: 1 / 6, B: 3 / 6, C: 2 / 6})
    assert laplace_distribution(tensor, (C,)) == {}


def test_reasoning_functions(tensor):
    frequency = ReasoningFunction(threshold=0.6)
    assert frequency.predict(tensor, (A,))[0] == B
    smoothed = laplace_reasoning(threshold=0.6)
    assert smoothed.predict(tensor, (A,)) is None
    assert laplace_reasoning(threshold=0.4).predict(tensor, (A,)) == pytest.approx((B, 0.5))


def test_pluggable_needs_a_function(tensor):
    with pytest.raises(ConfigError):
        ReasoningFunction(kind="pluggable").predict(tensor, (A,))
    with pytest.raises(ValueError):
        ReasoningFunction(threshold=2)
