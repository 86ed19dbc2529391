"""
Discrimination measures at a fixed candidate state sigma.

``D`` is the base-2 relative entropy between outcome distributions, averaged
over observables. ``F`` is the normalized expectation gap of the averaged,
traceless observable, clamped at zero.

The prepared state enters every measure only through ``RhoStatistics``: its
outcome distributions and traceless expectations for the chosen observables,
plus the normalization. This lets measured correlations and dense states share
one code path.
"""
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from .dense import DenseState, expectation, outcome_distribution
from .errors import DimensionError, SignalError, StateError
from .local_unitary import LocalUnitaryParams
from .observables import (
    HermitianObservable,
    Observable,
    ProductBasis,
    check_observables,
    computational_basis,
    observable_label,
)
from .outcomes import (
    ZERO_PROBABILITY,
    OutcomeDistribution,
    grouped_distribution,
    product_distribution,
)
from .pauli import PauliString

NORMALIZATIONS = ("rho", "reference")
_SIGNAL_TOLERANCE = 1e-12

__all__ = [
    "NORMALIZATIONS",
    "OutcomeDistribution",
    "RhoStatistics",
    "DiscriminationReport",
    "relative_entropy",
    "grouped_distribution",
    "product_distribution",
    "d_single",
    "d_multi",
    "f_gap",
    "d_product_basis",
    "rho_statistics",
    "evaluate_at",
]


def relative_entropy(p: OutcomeDistribution, q: OutcomeDistribution) -> float:
    """
    ``D(P||Q) = sum p_i log2(p_i / q_i)``.

    Uses ``0 log(0/q) = 0``, ``p log(p/0) = inf`` and ``0 log(0/0) = 0``;
    probabilities below 1e-12 count as exact zeros. Outcomes are matched by
    label.

    Raises:
        StateError: If the label sets differ
    """
    if set(p.labels) != set(q.labels):
        raise StateError(f"Outcome labels differ: {p.labels} vs {q.labels}")
    q_by_label = dict(zip(q.labels, q.probs))
    total = 0.0
    for label, pi in zip(p.labels, p.probs):
        if pi < ZERO_PROBABILITY:
            continue
        qi = q_by_label[label]
        if qi < ZERO_PROBABILITY:
            return math.inf
        total += pi * math.log2(pi / qi)
    return max(total, 0.0)


def traceless_offset(a: Observable) -> float:
    """``tr(A)/d``, subtracted to make an observable traceless."""
    if isinstance(a, PauliString):
        return float(a.sign) if a.is_identity() else 0.0
    if isinstance(a, HermitianObservable):
        return float(np.trace(a.matrix).real) / a.matrix.shape[0]
    raise TypeError(f"{type(a).__name__} has no expectation value")


def traceless_expectation(a: Observable, s: DenseState) -> float:
    """``tr(A rho) - tr(A)/d``: the expectation of A shifted to be traceless."""
    return expectation(a, s) - traceless_offset(a)


def _combined(obs: Sequence[Observable], s: DenseState) -> float:
    if any(isinstance(a, ProductBasis) for a in obs):
        raise SignalError("Product bases carry no expectation value for F")
    return float(np.mean([traceless_expectation(a, s) for a in obs]))


@dataclass(frozen=True, eq=False)
class RhoStatistics:
    """
    Everything the measures need to know about the prepared state.

    Attributes:
        observables: The measured observables
        distributions: Outcome distribution of each observable on rho
        expectations: Traceless expectation per observable (nan for product bases)
        norms: Per-observable normalization values (nan when undefined)
        norm: Normalization value of the averaged observable, None if F is undefined
        normalization: ``"rho"`` or ``"reference"``
    """

    observables: tuple
    distributions: tuple
    expectations: np.ndarray
    norms: np.ndarray
    norm: Optional[float]
    normalization: str = "rho"

    @property
    def k(self) -> int:
        return len(self.observables)

    @property
    def combined(self) -> float:
        """Traceless expectation of the averaged observable on rho."""
        return float(np.mean(self.expectations))

    def require_signal(self) -> float:
        """
        Return the normalization value of the averaged observable.

        Raises:
            SignalError: If F is undefined (product bases, or zero signal)
        """
        if self.norm is None or abs(self.norm) < _SIGNAL_TOLERANCE:
            raise SignalError(
                f"Averaged observable has expectation {self.norm} on the {self.normalization} state"
            )
        return self.norm

    def f_value(self, sigma_combined: float) -> float:
        """Clamped gap ``max(0, (<A>_rho - <A>_sigma) / norm)``."""
        norm = self.require_signal()
        return max(0.0, (self.combined - sigma_combined) / norm)

    def with_white_noise(self, p: float) -> "RhoStatistics":
        """
        Statistics of ``(1 - p) I/d + p rho`` for dichotomic observables.

        The normalization is kept, so F stays referred to the noiseless target.
        """
        if not 0.0 <= p <= 1.0:
            raise StateError(f"Noise parameter p must lie in [0, 1], got {p}")
        if not all(isinstance(a, PauliString) and not a.is_identity() for a in self.observables):
            raise TypeError("with_white_noise supports non-identity Pauli observables only")
        exps = p * self.expectations
        dists = tuple(OutcomeDistribution.dichotomic(e) for e in exps)
        return RhoStatistics(self.observables, dists, exps, self.norms, self.norm, self.normalization)


def rho_statistics(
    rho: DenseState,
    obs: Sequence[Observable],
    normalization: str = "rho",
    reference: Optional[DenseState] = None,
) -> RhoStatistics:
    """
    Collect the statistics of a dense prepared state.

    Args:
        rho: Prepared (or intended) state
        obs: Observables, nonempty
        normalization: ``"rho"`` scales the averaged observable so that
            ``tr(A rho) = 1``; ``"reference"`` uses ``reference`` instead
        reference: Ideal state for ``"reference"`` normalization

    Raises:
        StateError: On an unknown normalization or a missing reference
        DimensionError: If an observable does not fit the state
    """
    obs = tuple(obs)
    if not obs:
        raise StateError("Need at least one observable")
    if normalization not in NORMALIZATIONS:
        raise StateError(f"Unknown normalization {normalization!r}; use one of {NORMALIZATIONS}")
    if normalization == "reference":
        if reference is None:
            raise StateError("Reference normalization needs a reference state")
        if reference.n != rho.n:
            raise DimensionError("Reference state and rho act on different qubit counts")
    check_observables(obs, rho.n)
    target = rho if normalization == "rho" else reference
    dists = tuple(outcome_distribution(a, rho) for a in obs)
    exps, norms = [], []
    for a in obs:
        if isinstance(a, ProductBasis):
            exps.append(math.nan)
            norms.append(math.nan)
        else:
            exps.append(traceless_expectation(a, rho))
            norms.append(traceless_expectation(a, target))
    has_f = not any(isinstance(a, ProductBasis) for a in obs)
    norm = float(np.mean(norms)) if has_f else None
    return RhoStatistics(obs, dists, np.array(exps), np.array(norms), norm, normalization)


def d_single(rho: DenseState, sigma: DenseState, a: Observable) -> float:
    """Relative entropy of the outcome distributions of ``a`` on rho and sigma."""
    if rho.n != sigma.n:
        raise DimensionError(f"States act on {rho.n} and {sigma.n} qubits")
    return relative_entropy(outcome_distribution(a, rho), outcome_distribution(a, sigma))


def d_from_statistics(stats: RhoStatistics, sigma: DenseState) -> List[float]:
    """Per-observable relative entropies of rho (via its statistics) against sigma."""
    return [
        relative_entropy(p, outcome_distribution(a, sigma))
        for a, p in zip(stats.observables, stats.distributions)
    ]


def d_multi(rho: DenseState, sigma: DenseState, obs: Sequence[Observable]) -> float:
    """
    Average of ``d_single`` over the observables; ``inf`` propagates.

    Raises:
        StateError: On an empty observable list
    """
    if not obs:
        raise StateError("Need at least one observable")
    if rho.n != sigma.n:
        raise DimensionError(f"States act on {rho.n} and {sigma.n} qubits")
    return float(np.mean([d_single(rho, sigma, a) for a in obs]))


def f_gap(
    rho: DenseState,
    sigma: DenseState,
    obs: Sequence[Observable],
    normalization: str = "rho",
    reference: Optional[DenseState] = None,
) -> float:
    """
    Clamped expectation gap of the averaged observable at a fixed sigma.

    Raises:
        SignalError: If the averaged traceless observable has zero expectation
            on the normalization state
    """
    stats = rho_statistics(rho, obs, normalization, reference)
    stats.require_signal()
    if sigma.n != rho.n:
        raise DimensionError(f"States act on {rho.n} and {sigma.n} qubits")
    return stats.f_value(_combined(stats.observables, sigma))


def d_product_basis(rho: DenseState, sigma: DenseState, basis: Optional[ProductBasis] = None) -> float:
    """
    Relative entropy of the ``2**n``-outcome distributions of a product basis
    (the computational basis by default).
    """
    if basis is None:
        basis = computational_basis(rho.n)
    if not isinstance(basis, ProductBasis):
        raise TypeError("d_product_basis expects a ProductBasis")
    return d_single(rho, sigma, basis)


def _format_value(value: Optional[float]):
    if value is None:
        return None
    if math.isinf(value):
        return "inf"
    if math.isnan(value):
        return None
    return float(value)


@dataclass
class ObservableBreakdown:
    """Values of one observable at a fixed sigma."""

    label: str
    d: float
    f: Optional[float]
    expectation_rho: Optional[float]
    expectation_sigma: Optional[float]

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "D": _format_value(self.d),
            "F": _format_value(self.f),
            "expectation_rho": _format_value(self.expectation_rho),
            "expectation_sigma": _format_value(self.expectation_sigma),
        }


@dataclass
class DiscriminationReport:
    """
    Result of evaluating (or orbit-minimizing) both measures.

    ``D`` is always the mean of the per-observable ``D`` values at ``params``.
    ``metric`` names the measure that chose ``params``.
    """

    metric: str
    F: Optional[float]
    D: float
    params: LocalUnitaryParams
    breakdown: List[ObservableBreakdown]
    permutations_included: bool = False
    normalization: str = "rho"
    evaluations: int = 0
    extra: Dict[str, object] = field(default_factory=dict)

    @property
    def value(self) -> float:
        """Value of the minimized measure."""
        return self.D if self.metric == "D" else self.F

    def per_observable(self, measure: str = "D") -> Dict[str, Optional[float]]:
        key = "d" if measure == "D" else "f"
        return {b.label: getattr(b, key) for b in self.breakdown}

    def to_dict(self) -> dict:
        out = {
            "metric": self.metric,
            "F": _format_value(self.F),
            "D": _format_value(self.D),
            "observables": [b.label for b in self.breakdown],
            "per_observable": [b.to_dict() for b in self.breakdown],
            "params": self.params.to_dict(),
            "permutations_included": self.permutations_included,
            "normalization": self.normalization,
            "evaluations": self.evaluations,
        }
        out.update({k: _format_value(v) if isinstance(v, float) else v for k, v in self.extra.items()})
        return out


def evaluate_at(
    stats: RhoStatistics,
    sigma: DenseState,
    params: LocalUnitaryParams,
    metric: str = "D",
    permutations_included: bool = False,
) -> DiscriminationReport:
    """
    Evaluate both measures and the per-observable breakdown at an already
    transformed candidate state ``sigma``; ``params`` is recorded as is.
    """
    if sigma.n != stats.observables[0].n:
        raise DimensionError("Candidate state does not fit the observables")
    ds = d_from_statistics(stats, sigma)
    breakdown = []
    sigma_exps = []
    for a, d, e_rho, n_i in zip(stats.observables, ds, stats.expectations, stats.norms):
        if isinstance(a, ProductBasis):
            breakdown.append(ObservableBreakdown(observable_label(a), d, None, None, None))
            continue
        e_sigma = traceless_expectation(a, sigma)
        sigma_exps.append(e_sigma)
        f_i = max(0.0, (e_rho - e_sigma) / n_i) if abs(n_i) > _SIGNAL_TOLERANCE else None
        breakdown.append(ObservableBreakdown(observable_label(a), d, f_i, float(e_rho), e_sigma))
    f_total = None
    if stats.norm is not None and abs(stats.norm) > _SIGNAL_TOLERANCE:
        f_total = stats.f_value(float(np.mean(sigma_exps)))
    return DiscriminationReport(
        metric=metric,
        F=f_total,
        D=float(np.mean(ds)),
        params=params,
        breakdown=breakdown,
        permutations_included=permutations_included,
        normalization=stats.normalization,
    )
