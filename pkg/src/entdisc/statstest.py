"""
Statistical reading of the measures.

Finite-sample simulation of measurement runs, the type-class exponent
``-N D(P~||Q)`` and its fair-coin restatement, and evaluation of both
measures from measured Pauli correlations (``label,expectation,stderr`` CSV).
"""
import csv
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .dense import DenseState, expectation, outcome_distribution
from .errors import ConfigError, DataFormatError, PauliError
from .measures import RhoStatistics, relative_entropy
from .observables import Observable, observable_label
from .optimizer import OptimizerConfig, minimize_d, minimize_f
from .outcomes import OutcomeDistribution
from .pauli import PauliString

logger = logging.getLogger(__name__)

DEFAULT_MC_SAMPLES = 1000


@dataclass(frozen=True)
class CorrelationRecord:
    word: PauliString
    expectation: float
    stderr: float = 0.0


@dataclass(frozen=True)
class MeasuredCorrelations:
    """
    Measured expectation values of Pauli words with standard errors.

    Attributes:
        records: One record per distinct (unsigned) Pauli word
    """

    records: Tuple[CorrelationRecord, ...] = ()

    def __post_init__(self):
        seen = set()
        n = None
        for record in self.records:
            if abs(record.expectation) > 1:
                raise DataFormatError(f"{record.word.label}: |expectation| = {abs(record.expectation)} > 1")
            if record.stderr < 0 or not math.isfinite(record.stderr):
                raise DataFormatError(f"{record.word.label}: invalid standard error {record.stderr}")
            if record.word.is_identity():
                raise DataFormatError("The identity carries no correlation")
            key = record.word.unsigned()
            if key in seen:
                raise DataFormatError(f"Duplicate correlation for {key.label}")
            seen.add(key)
            if n is not None and record.word.n != n:
                raise DataFormatError("Correlations act on different qubit counts")
            n = record.word.n
        object.__setattr__(self, "records", tuple(self.records))

    def __len__(self) -> int:
        return len(self.records)

    @property
    def n(self) -> int:
        self._require_records()
        return self.records[0].word.n

    @property
    def observables(self) -> List[PauliString]:
        return [r.word for r in self.records]

    @property
    def expectations(self) -> np.ndarray:
        return np.array([r.expectation for r in self.records])

    @property
    def stderrs(self) -> np.ndarray:
        return np.array([r.stderr for r in self.records])

    def _require_records(self) -> None:
        if not self.records:
            raise DataFormatError("No correlation records")

    def to_statistics(
        self, reference: Optional[DenseState] = None, expectations: Optional[np.ndarray] = None
    ) -> RhoStatistics:
        """
        Statistics of the measured state, normalized against the ideal state.

        Without ``reference`` every recorded word is taken to stabilize the
        ideal state (ideal expectation 1).

        Args:
            reference: Ideal state the observables are normalized against
            expectations: Replacement expectations (e.g. resampled ones)
        """
        self._require_records()
        exps = self.expectations if expectations is None else np.asarray(expectations, dtype=float)
        if reference is None:
            norms = np.ones(len(self.records))
        else:
            norms = np.array([expectation(w, reference) for w in self.observables])
        dists = tuple(OutcomeDistribution.dichotomic(e) for e in exps)
        return RhoStatistics(
            tuple(self.observables), dists, exps, norms, float(np.mean(norms)), "reference"
        )

    def to_dict(self) -> dict:
        return {
            "records": [
                {"label": r.word.label, "expectation": r.expectation, "stderr": r.stderr}
                for r in self.records
            ]
        }


@dataclass
class SampleRun:
    """Outcome counts of one observable measured ``total`` times."""

    observable: Observable
    labels: Tuple[str, ...]
    counts: np.ndarray
    total: int = field(init=False)

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=np.int64)
        if counts.shape != (len(self.labels),):
            raise DataFormatError("One count per outcome label is required")
        if np.any(counts < 0):
            raise DataFormatError("Counts must be nonnegative")
        self.counts = counts
        self.total = int(counts.sum())

    def distribution(self) -> OutcomeDistribution:
        """Observed frequencies ``P~``."""
        if self.total == 0:
            raise DataFormatError("Sample holds no runs")
        return OutcomeDistribution(self.counts / self.total, self.labels)

    def to_dict(self) -> dict:
        return {
            "observable": observable_label(self.observable),
            "counts": {label: int(c) for label, c in zip(self.labels, self.counts)},
            "total": self.total,
        }


def simulate_runs(
    state: DenseState, obs: Sequence[Observable], runs_total: int, rng=None
) -> List[SampleRun]:
    """
    Sample ``runs_total // k`` measurement runs of each of the ``k`` observables.

    Args:
        rng: ``numpy.random.Generator`` or seed
    """
    k = len(obs)
    if k == 0:
        raise ConfigError("Need at least one observable")
    if runs_total < k:
        raise ConfigError(f"{runs_total} runs cannot cover {k} observables")
    rng = np.random.default_rng(rng)
    shots = runs_total // k
    runs = []
    for a in obs:
        dist = outcome_distribution(a, state)
        counts = rng.multinomial(shots, dist.probs / dist.probs.sum())
        runs.append(SampleRun(a, dist.labels, counts))
    logger.debug("Simulated %d runs for each of %d observables", shots, k)
    return runs


def empirical_d(sample: SampleRun, sigma: DenseState) -> float:
    """``D(P~||Q)`` of the observed frequencies against sigma's distribution."""
    return relative_entropy(sample.distribution(), outcome_distribution(sample.observable, sigma))


def type_class_log2_probability(sample: SampleRun, sigma: DenseState) -> float:
    """Exponent ``-N D(P~||Q)`` of the probability that sigma produces the observed type."""
    d = empirical_d(sample, sigma)
    return 0.0 if d == 0 else -sample.total * d


def coin_equivalence(n_runs: int, d_value: float) -> Tuple[float, float]:
    """
    Restate ``2**(-N D)`` as ``N D`` consecutive tails of a fair coin.

    Returns:
        ``(log2_probability, equivalent_coin_tosses)``
    """
    if n_runs < 0:
        raise ConfigError(f"Number of runs must be nonnegative, got {n_runs}")
    if not d_value >= 0:
        raise ConfigError(f"Relative entropy must be nonnegative, got {d_value}")
    if n_runs == 0 or d_value == 0:
        return 0.0, 0.0
    tosses = n_runs * d_value
    return -tosses, tosses


def _parse_row(row: Sequence[str], lineno: int, path: str) -> Optional[CorrelationRecord]:
    fields = [part.strip() for part in row]
    if fields[0].lower() == "label":
        return None
    if len(fields) != 3:
        raise DataFormatError(f"{path}:{lineno}: expected label,expectation,stderr")
    try:
        word = PauliString.from_label(fields[0])
        value = float(fields[1])
        stderr = float(fields[2])
    except (PauliError, ValueError) as e:
        raise DataFormatError(f"{path}:{lineno}: {e}") from e
    if not math.isfinite(value) or abs(value) > 1:
        raise DataFormatError(f"{path}:{lineno}: expectation {value} outside [-1, 1]")
    if not math.isfinite(stderr) or stderr < 0:
        raise DataFormatError(f"{path}:{lineno}: invalid standard error {stderr}")
    return CorrelationRecord(word, value, stderr)


def ingest_correlations(path: str) -> MeasuredCorrelations:
    """
    Read a correlations CSV: ``label,expectation,stderr`` per line, ``#``
    comments and blank lines ignored, an optional header line.

    Raises:
        FileNotFoundError: If the file does not exist
        DataFormatError: On malformed lines, out-of-range values or duplicates
    """
    records = []
    with open(path, "r", encoding="utf-8") as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                row = next(csv.reader([line], skipinitialspace=True, strict=True))
            except csv.Error as e:
                raise DataFormatError(f"{path}:{lineno}: {e}") from e
            record = _parse_row(row, lineno, path)
            if record is not None:
                records.append(record)
    data = MeasuredCorrelations(tuple(records))
    logger.info("Read %d correlation records from %s", len(data), path)
    return data


def correlations_from_state(
    state: DenseState, labels: Sequence[str], stderr: float = 0.0
) -> MeasuredCorrelations:
    """Noiseless correlations of a known state, e.g. as synthetic test data."""
    records = []
    for label in labels:
        word = PauliString.from_label(label) if isinstance(label, str) else label
        value = float(np.clip(expectation(word, state), -1.0, 1.0))
        records.append(CorrelationRecord(word, value, float(stderr)))
    return MeasuredCorrelations(tuple(records))


def _spread(values: Sequence[float]) -> float:
    values = np.asarray(values, dtype=float)
    if values.size < 2:
        return 0.0
    if not np.all(np.isfinite(values)):
        return math.inf
    return float(np.std(values, ddof=1))


def measures_from_correlations(
    data: MeasuredCorrelations,
    sigma: DenseState,
    metric: str = "D",
    cfg: Optional[OptimizerConfig] = None,
    mc_samples: int = DEFAULT_MC_SAMPLES,
    reference: Optional[DenseState] = None,
) -> Tuple[float, float]:
    """
    Orbit-minimized measure of measured correlations, with a Monte-Carlo
    uncertainty.

    Expectations are resampled from independent normals ``N(e, stderr)``
    clipped to [-1, 1]. For F the orbit maximum is fixed by sigma and the
    normalization, so only the prepared-state term is resampled. For D each
    resample is re-minimized locally, starting from the point estimate's
    minimizer.

    Returns:
        ``(value, uncertainty)``; the uncertainty is the sample standard
        deviation over resamples (0 when every stderr is 0)
    """
    cfg = cfg or OptimizerConfig()
    if metric not in ("D", "F"):
        raise ConfigError(f"metric must be 'D' or 'F', got {metric!r}")
    if mc_samples < 0:
        raise ConfigError(f"mc_samples must be nonnegative, got {mc_samples}")
    stats = data.to_statistics(reference)
    if metric == "F":
        report = minimize_f(stats, sigma, cfg=cfg)
        value = report.F
    else:
        report = minimize_d(stats, sigma, cfg=cfg)
        value = report.D
    if mc_samples == 0 or not np.any(data.stderrs > 0):
        return value, 0.0
    rng = np.random.default_rng(cfg.seed)
    resampled = np.clip(
        rng.normal(data.expectations, data.stderrs, size=(mc_samples, len(data))), -1.0, 1.0
    )
    values = []
    for exps in resampled:
        stats_s = data.to_statistics(reference, expectations=exps)
        if metric == "F":
            values.append(stats_s.f_value(report.extra["sigma_expectation"]))
        else:
            values.append(minimize_d(stats_s, sigma, cfg=cfg, start=report.params).D)
    uncertainty = _spread(values)
    logger.info("%s = %.6g +- %.3g over %d resamples", metric, value, uncertainty, mc_samples)
    return value, uncertainty


def summarize_samples(runs: Sequence[SampleRun], sigma: DenseState) -> Dict[str, dict]:
    """Empirical D, type-class exponent and coin equivalent per sampled observable."""
    summary = {}
    for run in runs:
        d = empirical_d(run, sigma)
        log2_p, tosses = coin_equivalence(run.total, d)
        summary[observable_label(run.observable)] = {
            "runs": run.total,
            "D": "inf" if math.isinf(d) else d,
            "log2_probability": "-inf" if math.isinf(log2_p) else log2_p,
            "coin_tosses": "inf" if math.isinf(tosses) else tosses,
            "counts": run.to_dict()["counts"],
        }
    return summary
