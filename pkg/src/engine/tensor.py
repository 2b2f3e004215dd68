"""Sparse transition-frequency tensor.

A tensor of arity R+1 counts how often each state path s_{t-R} ... s_t was
observed, oldest state first. Only observed paths are stored, so the cost is
proportional to the distinct paths rather than m ** (R + 1).
"""

from collections import defaultdict
from typing import Dict, Iterator, List, Sequence, Tuple

from ..core.errors import ArityError, InternalError, NotFoundError

Path = Tuple[int, ...]


class TransitionTensor:
    def __init__(self, arity: int, dimension_size: int = 0):
        if arity < 2:
            raise ArityError(f"a transition tensor needs arity >= 2, got {arity}")
        self.arity = arity
        self.dimension_size = dimension_size
        self.counts: Dict[Path, int] = {}
        self._by_prefix: Dict[Path, Dict[int, int]] = defaultdict(dict)
        self.total = 0

    def __len__(self) -> int:
        return len(self.counts)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TransitionTensor):
            return NotImplemented
        return (self.arity, self.dimension_size, self.counts) == (other.arity, other.dimension_size, other.counts)

    def __repr__(self) -> str:
        return f"TransitionTensor(arity={self.arity}, m={self.dimension_size}, paths={len(self.counts)}, mass={self.total})"

    def _check_path(self, path: Sequence[int]) -> Path:
        path = tuple(path)
        if len(path) != self.arity:
            raise ArityError(f"path {path} has length {len(path)}, tensor arity is {self.arity}")
        for s in path:
            if s < 0 or s >= self.dimension_size:
                raise NotFoundError(f"state index {s} outside 0..{self.dimension_size - 1}")
        return path

    def grow_dimension(self, new_state_index: int) -> None:
        """Admit state ``m``; existing counts are untouched."""
        if new_state_index != self.dimension_size:
            raise InternalError(f"non-contiguous state index {new_state_index}, expected {self.dimension_size}")
        self.dimension_size += 1

    def grow_to(self, size: int) -> None:
        while self.dimension_size < size:
            self.grow_dimension(self.dimension_size)

    def increment(self, path: Sequence[int], by: int = 1) -> int:
        """Add ``by`` to the path's count and return the new count."""
        path = self._check_path(path)
        count = self.counts.get(path, 0) + by
        self.counts[path] = count
        self._by_prefix[path[:-1]][path[-1]] = count
        self.total += by
        return count

    def count(self, path: Sequence[int]) -> int:
        path = tuple(path)
        if len(path) != self.arity:
            raise ArityError(f"path {path} has length {len(path)}, tensor arity is {self.arity}")
        return self.counts.get(path, 0)

    def successors(self, prefix: Sequence[int]) -> Dict[int, int]:
        """Counts of the last state given the first ``arity - 1`` states."""
        prefix = tuple(prefix)
        if len(prefix) != self.arity - 1:
            raise ArityError(f"prefix {prefix} has length {len(prefix)}, expected {self.arity - 1}")
        return dict(self._by_prefix.get(prefix, {}))

    def items(self) -> Iterator[Tuple[Path, int]]:
        return iter(sorted(self.counts.items()))

    def marginalize_last(self) -> "TransitionTensor":
        """Sum over the newest coordinate, giving a tensor of arity - 1."""
        if self.arity < 3:
            raise ArityError("cannot marginalize a tensor of arity 2 into a transition tensor")
        lower = TransitionTensor(self.arity - 1, self.dimension_size)
        for path, n in self.counts.items():
            lower.increment(path[:-1], n)
        return lower

    def flatten(self) -> List[int]:
        """Paths and counts as one flat list: p0, ..., pR, count, p0, ..."""
        flat: List[int] = []
        for path, n in sorted(self.counts.items()):
            flat.extend(path)
            flat.append(n)
        return flat

    @classmethod
    def from_flat(cls, arity: int, dimension_size: int, flat: Sequence[int]) -> "TransitionTensor":
        stride = arity + 1
        if len(flat) % stride:
            raise ArityError(f"flat tensor of length {len(flat)} is not a multiple of {stride}")
        tensor = cls(arity, dimension_size)
        for i in range(0, len(flat), stride):
            n = flat[i + arity]
            if n < 1:
                raise ArityError(f"non-positive count {n} in flat tensor")
            tensor.increment(flat[i:i + arity], n)
        return tensor


def transition_count(tensor: TransitionTensor, path: Sequence[int]) -> int:
    return tensor.count(path)
