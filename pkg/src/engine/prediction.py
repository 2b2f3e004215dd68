"""Next-state reasoning over transition tensors."""

from typing import Callable, Dict, Literal, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field

from ..core.errors import ConfigError, RangeError
from .tensor import TransitionTensor

Distribution = Dict[int, float]
DistributionFn = Callable[[TransitionTensor, Sequence[int]], Distribution]


def next_state_distribution(tensor: TransitionTensor, prefix: Sequence[int]) -> Distribution:
    """Conditional frequency of the next state given the last R states; empty when the prefix is unseen."""
    successors = tensor.successors(prefix)
    total = sum(successors.values())
    if total == 0:
        return {}
    return {state: n / total for state, n in sorted(successors.items())}


def laplace_distribution(tensor: TransitionTensor, prefix: Sequence[int], alpha: float = 1.0) -> Distribution:
    """Add-alpha smoothed distribution over all m states; empty when the prefix is unseen."""
    successors = tensor.successors(prefix)
    if not successors:
        return {}
    m = tensor.dimension_size
    total = sum(successors.values()) + alpha * m
    return {state: (successors.get(state, 0) + alpha) / total for state in range(m)}


def _check_threshold(threshold: float) -> float:
    if threshold < 0 or threshold > 1:
        raise RangeError(f"prediction threshold must be in [0, 1], got {threshold}")
    return threshold


def choose(distribution: Distribution, threshold: float) -> Optional[Tuple[int, float]]:
    """Argmax with ties to the lowest state index, kept only when it reaches ``threshold``."""
    _check_threshold(threshold)
    if not distribution:
        return None
    state, probability = min(distribution.items(), key=lambda kv: (-kv[1], kv[0]))
    if probability < threshold:
        return None
    return state, probability


def predict(tensor: TransitionTensor, prefix: Sequence[int], threshold: float) -> Optional[Tuple[int, float]]:
    return choose(next_state_distribution(tensor, prefix), threshold)


class ReasoningFunction(BaseModel):
    """A context reasoning function with its threshold.

    ``conditional-frequency`` uses raw counts; ``pluggable`` delegates to
    ``distribution_fn`` (for example :func:`laplace_distribution`).
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    kind: Literal["conditional-frequency", "pluggable"] = "conditional-frequency"
    threshold: float = Field(0.5, ge=0.0, le=1.0)
    distribution_fn: Optional[DistributionFn] = None

    def distribution(self, tensor: TransitionTensor, prefix: Sequence[int]) -> Distribution:
        if self.kind == "conditional-frequency":
            return next_state_distribution(tensor, prefix)
        if self.distribution_fn is None:
            raise ConfigError("a pluggable reasoning function needs distribution_fn")
        tensor.successors(prefix)  # arity check
        return self.distribution_fn(tensor, prefix)

    def predict(self, tensor: TransitionTensor, prefix: Sequence[int]) -> Optional[Tuple[int, float]]:
        return choose(self.distribution(tensor, prefix), self.threshold)


def laplace_reasoning(threshold: float = 0.5, alpha: float = 1.0) -> ReasoningFunction:
    return ReasoningFunction(kind="pluggable", threshold=threshold,
                             distribution_fn=lambda t, p: laplace_distribution(t, p, alpha))
