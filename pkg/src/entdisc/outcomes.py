"""
Finite outcome distributions of a measurement.
"""
from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple

import numpy as np

from .errors import DimensionError, StateError

# Probabilities below this are treated as exact zeros.
ZERO_PROBABILITY = 1e-12
_SUM_TOLERANCE = 1e-10


@dataclass(frozen=True, eq=False)
class OutcomeDistribution:
    """
    Probability vector over labelled outcomes.

    Attributes:
        probs: Nonnegative probabilities summing to one (read-only array)
        labels: Outcome identifiers, one per probability
    """

    probs: np.ndarray
    labels: Tuple[str, ...]

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=float).reshape(-1)
        labels = tuple(str(label) for label in self.labels)
        if len(labels) != probs.size:
            raise DimensionError(f"{probs.size} probabilities but {len(labels)} labels")
        if len(set(labels)) != len(labels):
            raise StateError(f"Duplicate outcome labels: {labels}")
        if probs.size == 0:
            raise StateError("Distribution has no outcomes")
        if np.any(probs < -_SUM_TOLERANCE) or not np.all(np.isfinite(probs)):
            raise StateError(f"Negative or non-finite probabilities: {probs}")
        if abs(probs.sum() - 1.0) > _SUM_TOLERANCE:
            raise StateError(f"Probabilities sum to {probs.sum():.12g}, expected 1")
        probs = probs.copy()
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)
        object.__setattr__(self, "labels", labels)

    @classmethod
    def cleaned(cls, probs: Iterable[float], labels: Sequence[str]) -> "OutcomeDistribution":
        """
        Build a distribution from numerically computed probabilities.

        Entries below ZERO_PROBABILITY become exact zeros and the rest is
        renormalized, so that arithmetic noise never turns a true zero into
        a tiny positive probability.
        """
        probs = np.asarray(list(probs), dtype=float)
        probs = np.where(probs < ZERO_PROBABILITY, 0.0, probs)
        total = probs.sum()
        if total <= 0:
            raise StateError("All probabilities vanish")
        return cls(probs / total, tuple(labels))

    @classmethod
    def dichotomic(cls, expectation: float) -> "OutcomeDistribution":
        """Two-outcome distribution ``{(1+e)/2, (1-e)/2}`` of a +-1 observable."""
        e = float(expectation)
        if abs(e) > 1 + _SUM_TOLERANCE:
            raise StateError(f"Expectation {e} of a dichotomic observable exceeds 1")
        e = min(1.0, max(-1.0, e))
        return cls.cleaned(((1 + e) / 2, (1 - e) / 2), ("+1", "-1"))

    def __len__(self) -> int:
        return self.probs.size

    def as_dict(self) -> dict:
        return {label: float(p) for label, p in zip(self.labels, self.probs)}


def grouped_distribution(
    dist: OutcomeDistribution, groups: Sequence[Sequence[str]]
) -> OutcomeDistribution:
    """
    Coarse-grain outcomes: every group of labels becomes one outcome.

    Groups must partition the labels of ``dist``. Merged outcomes are
    labelled by joining their labels with ``|``.
    """
    index = {label: i for i, label in enumerate(dist.labels)}
    seen = [label for group in groups for label in group]
    if sorted(seen) != sorted(dist.labels):
        raise StateError("Groups do not partition the outcome labels")
    probs = [sum(dist.probs[index[label]] for label in group) for group in groups]
    labels = ["|".join(group) for group in groups]
    return OutcomeDistribution.cleaned(probs, labels)


def product_distribution(p: OutcomeDistribution, q: OutcomeDistribution) -> OutcomeDistribution:
    """Joint distribution of two independent outcomes, labels ``a,b``."""
    probs = np.outer(p.probs, q.probs).reshape(-1)
    labels = [f"{a},{b}" for a in p.labels for b in q.labels]
    return OutcomeDistribution(probs / probs.sum(), tuple(labels))
