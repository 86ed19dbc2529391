"""
Optimization over the local-unitary (and permutation) orbit of a pure state.

Every search is a multi-start Nelder-Mead run over the ``3n`` Euler angles,
repeated for each distinct qubit permutation of sigma when permutations are
included. Restart 0 always starts at the identity, the remaining starts are
drawn from per-restart seeds derived from ``OptimizerConfig.seed``. Local
searches may run in a process pool; their end points are collected in job
order, so reports do not depend on the number of workers.
"""
import csv
import itertools
import logging
import math
import multiprocessing
import os
from dataclasses import dataclass, field, replace
from functools import partial
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import minimize
from tqdm import tqdm

from .dense import DenseState, distinct_permutations, expectation, permute_qubits, white_noise
from .errors import ConfigError, DimensionError, GroupError, StateError
from .local_unitary import LocalUnitaryParams, conjugate_state, rotate_vector
from .measures import (
    DiscriminationReport,
    RhoStatistics,
    d_from_statistics,
    evaluate_at,
    rho_statistics,
    traceless_offset,
)
from .observables import HermitianObservable, Observable, ProductBasis, observable_label
from .outcomes import ZERO_PROBABILITY
from .pauli import PauliString, to_matrix

logger = logging.getLogger(__name__)


def _env_default(name: str, default, cast):
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    try:
        return cast(raw)
    except ValueError:
        logger.warning("Ignoring %s=%r (not a valid %s)", name, raw, cast.__name__)
        return default


DEFAULT_RESTARTS = _env_default("ENTDISC_RESTARTS", 64, int)
DEFAULT_SEED = _env_default("ENTDISC_SEED", 0, int)
DEFAULT_MAX_ITER = _env_default("ENTDISC_MAX_ITER", 4000, int)
DEFAULT_TOL = _env_default("ENTDISC_TOL", 1e-9, float)
DEFAULT_WORKERS = _env_default("ENTDISC_WORKERS", os.cpu_count() or 1, int)

# Zero probabilities of sigma are floored to this inside the search only.
SURROGATE_FLOOR = 1e-300

RhoInput = Union[DenseState, RhoStatistics]


@dataclass(frozen=True)
class OptimizerConfig:
    """
    Settings shared by all orbit searches.

    Attributes:
        restarts: Starts per permutation (restart 0 is the identity)
        max_iter: Nelder-Mead iterations per start
        tol: Convergence tolerance on the objective
        xtol: Convergence tolerance on the simplex size (radians)
        seed: Master seed; per-restart seeds are derived from it
        include_permutations: Also search over qubit permutations of sigma
        simplex_step: Edge length of the initial simplex (radians)
        progress: Show tqdm progress bars
        workers: Worker processes for independent local searches (1 runs
            everything in this process)
    """

    restarts: int = DEFAULT_RESTARTS
    max_iter: int = DEFAULT_MAX_ITER
    tol: float = DEFAULT_TOL
    xtol: float = 1e-6
    seed: int = DEFAULT_SEED
    include_permutations: bool = False
    simplex_step: float = 0.5
    progress: bool = False
    workers: int = DEFAULT_WORKERS

    def __post_init__(self):
        if int(self.restarts) < 1:
            raise ConfigError(f"restarts must be >= 1, got {self.restarts}")
        if int(self.max_iter) < 1:
            raise ConfigError(f"max_iter must be >= 1, got {self.max_iter}")
        if not self.tol > 0 or not self.xtol > 0:
            raise ConfigError(f"Tolerances must be positive, got tol={self.tol}, xtol={self.xtol}")
        if not self.simplex_step > 0:
            raise ConfigError(f"simplex_step must be positive, got {self.simplex_step}")
        if int(self.seed) < 0:
            raise ConfigError(f"seed must be nonnegative, got {self.seed}")
        if int(self.workers) < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")

    def nelder_mead_options(self, x0: np.ndarray) -> dict:
        simplex = np.vstack([x0, x0 + self.simplex_step * np.eye(x0.size)])
        return {
            "maxiter": int(self.max_iter),
            "xatol": self.xtol,
            "fatol": self.tol,
            "adaptive": True,
            "initial_simplex": simplex,
        }


@dataclass
class _LocalOptimum:
    value: float
    perm: Tuple[int, ...]
    x: np.ndarray


class _OrbitObjective:
    """
    Fast evaluation of sigma's statistics along the orbit.

    Projectors of every dichotomic and dense observable are stacked into one
    array so one rotated vector gives all outcome probabilities in a single
    product.
    """

    def __init__(self, stats: RhoStatistics, sigma: DenseState):
        self.n = sigma.n
        self.k = stats.k
        self.vec = sigma.vector()
        eye = np.eye(sigma.dim)
        projectors, p_proj, bases, p_basis, traceless = [], [], [], [], []
        for a, dist in zip(stats.observables, stats.distributions):
            if isinstance(a, PauliString):
                m = to_matrix(a)
                projectors += [(eye + m) / 2, (eye - m) / 2]
                p_proj.extend(dist.probs)
                traceless.append(m - traceless_offset(a) * eye)
            elif isinstance(a, HermitianObservable):
                _, blocks = a.spectral_groups()
                projectors += [b @ b.conj().T for b in blocks]
                p_proj.extend(dist.probs)
                traceless.append(a.matrix - traceless_offset(a) * eye)
            elif isinstance(a, ProductBasis):
                bases.append(a.unitary().conj().T)
                p_basis.extend(dist.probs)
            else:
                raise TypeError(f"Unsupported observable type: {type(a).__name__}")
        self._proj = np.array(projectors) if projectors else None
        self._proj_p, self._proj_mask = self._mask(p_proj)
        self._bases = np.array(bases) if bases else None
        self._basis_p, self._basis_mask = self._mask(p_basis)
        self._traceless = np.array(traceless) if traceless and not bases else None

    @staticmethod
    def _mask(probs):
        p = np.asarray(probs, dtype=float)
        mask = p >= ZERO_PROBABILITY
        return p[mask], mask

    def state(self, x: np.ndarray, perm: Sequence[int]) -> np.ndarray:
        return rotate_vector(self.vec, x.reshape(self.n, 3), perm)

    def divergence(self, x: np.ndarray, perm: Sequence[int]) -> float:
        """Mean relative entropy with sigma's zero probabilities floored."""
        v = self.state(x, perm)
        total = 0.0
        if self._proj is not None:
            q = np.real((self._proj @ v) @ v.conj())
            q = np.maximum(q[self._proj_mask], SURROGATE_FLOOR)
            total += float(np.sum(self._proj_p * np.log2(self._proj_p / q)))
        if self._bases is not None:
            q = np.abs(self._bases @ v) ** 2
            q = np.maximum(q.reshape(-1)[self._basis_mask], SURROGATE_FLOOR)
            total += float(np.sum(self._basis_p * np.log2(self._basis_p / q)))
        return total / self.k

    def combined(self, x: np.ndarray, perm: Sequence[int]) -> float:
        """Traceless expectation of the averaged observable on the rotated sigma."""
        v = self.state(x, perm)
        return float(np.mean(np.real((self._traceless @ v) @ v.conj())))


class _NegativeSignal:
    """F objective: minus the normalized averaged observable on the rotated sigma."""

    def __init__(self, objective: _OrbitObjective, norm: float):
        self.objective = objective
        self.norm = norm

    def __call__(self, x: np.ndarray, perm: Sequence[int]) -> float:
        return -self.objective.combined(x, perm) / self.norm


class _NegativeOverlap:
    def __init__(self, target: np.ndarray, source: np.ndarray, n: int):
        self.target = target
        self.source = source
        self.n = n

    def __call__(self, x: np.ndarray, perm: Sequence[int]) -> float:
        v = rotate_vector(self.source, x.reshape(self.n, 3), perm)
        return -float(abs(np.vdot(self.target, v)) ** 2)


def _run_ordered(fn: Callable, tasks: Sequence, cfg: OptimizerConfig, desc: str, unit: str) -> list:
    """
    Apply ``fn`` to every task and return the results in task order, using a
    process pool when more than one worker is configured.
    """
    bar = {"desc": desc, "unit": unit, "total": len(tasks), "disable": not cfg.progress, "leave": False}
    workers = min(int(cfg.workers), len(tasks))
    if workers <= 1:
        return [fn(task) for task in tqdm(tasks, **bar)]
    chunksize = max(1, len(tasks) // (4 * workers))
    logger.debug("%s: %d tasks on %d worker processes", desc, len(tasks), workers)
    with multiprocessing.Pool(workers) as pool:
        return list(tqdm(pool.imap(fn, tasks, chunksize=chunksize), **bar))


def _local_search(objective: Callable, cfg: OptimizerConfig, job) -> Tuple[_LocalOptimum, int]:
    perm, x0 = job
    result = minimize(
        objective, x0, args=(perm,), method="Nelder-Mead", options=cfg.nelder_mead_options(x0)
    )
    return _LocalOptimum(float(result.fun), tuple(perm), np.asarray(result.x)), int(result.nfev)


def _permutations(sigma: DenseState, cfg: OptimizerConfig) -> List[Tuple[int, ...]]:
    if not cfg.include_permutations:
        return [tuple(range(sigma.n))]
    return [perm for perm, _ in distinct_permutations(sigma)]


def _orbit_search(
    objective: Callable[[np.ndarray, Sequence[int]], float],
    n: int,
    perms: Sequence[Tuple[int, ...]],
    cfg: OptimizerConfig,
    desc: str,
    start: Optional[LocalUnitaryParams] = None,
) -> Tuple[List[_LocalOptimum], int]:
    """
    Run the local searches; return their end points (in job order) and the
    total number of objective evaluations.
    """
    if start is not None:
        jobs = [(start.perm, start.flat().copy())]
    else:
        children = np.random.SeedSequence(int(cfg.seed)).spawn(int(cfg.restarts))
        starts = [np.zeros(3 * n)] + [
            np.random.default_rng(child).uniform(0.0, 2 * np.pi, 3 * n) for child in children[1:]
        ]
        jobs = [(perm, x0) for perm in perms for x0 in starts]
    outcomes = _run_ordered(partial(_local_search, objective, cfg), jobs, cfg, desc, "start")
    optima = [opt for opt, _ in outcomes]
    return optima, sum(nfev for _, nfev in outcomes)


def _identity_point(objective, n: int, start: Optional[LocalUnitaryParams]) -> _LocalOptimum:
    if start is None:
        perm, x = tuple(range(n)), np.zeros(3 * n)
    else:
        perm, x = start.perm, start.flat().copy()
    return _LocalOptimum(float(objective(x, perm)), perm, x)


def _params(n: int, opt: _LocalOptimum) -> LocalUnitaryParams:
    angles = np.mod(opt.x.reshape(n, 3), 4 * np.pi)
    return LocalUnitaryParams(n, angles, opt.perm)


def _as_statistics(
    rho: RhoInput, obs: Optional[Sequence[Observable]], normalization: str, reference
) -> RhoStatistics:
    if isinstance(rho, RhoStatistics):
        if obs is not None and [observable_label(a) for a in obs] != [
            observable_label(a) for a in rho.observables
        ]:
            raise StateError("Observables differ from those the statistics were collected for")
        return rho
    if isinstance(rho, DenseState):
        if not obs:
            raise StateError("Need at least one observable")
        return rho_statistics(rho, obs, normalization, reference)
    raise TypeError(f"rho must be a DenseState or RhoStatistics, got {type(rho).__name__}")


def _check_sigma(sigma: DenseState, n: int) -> None:
    if not isinstance(sigma, DenseState):
        raise TypeError("sigma must be a DenseState")
    if not sigma.is_pure:
        raise StateError("The orbit is searched for pure states only")
    if sigma.n != n:
        raise DimensionError(f"rho acts on {n} qubits, sigma on {sigma.n}")


def _stats_qubits(stats: RhoStatistics) -> int:
    return stats.observables[0].n


def minimize_d(
    rho: RhoInput,
    sigma: DenseState,
    obs: Optional[Sequence[Observable]] = None,
    cfg: Optional[OptimizerConfig] = None,
    normalization: str = "rho",
    reference: Optional[DenseState] = None,
    start: Optional[LocalUnitaryParams] = None,
) -> DiscriminationReport:
    """
    Minimize the averaged relative entropy over the orbit of sigma.

    The value is an upper bound on the true orbit minimum. It never exceeds
    the value at the identity (or at ``start``, which replaces the multi-start
    search by one local search from that point).

    Args:
        rho: Prepared state, or its statistics (e.g. from measured correlations)
        sigma: Pure state whose orbit is searched
        obs: Observables; may be omitted when ``rho`` is already statistics
        cfg: Search settings (defaults from the environment)
        normalization: F normalization recorded in the report
        reference: Ideal state for ``"reference"`` normalization
        start: Warm start for a single local search

    Returns:
        Report whose ``params`` reproduce the reported values exactly
    """
    cfg = cfg or OptimizerConfig()
    stats = _as_statistics(rho, obs, normalization, reference)
    n = _stats_qubits(stats)
    _check_sigma(sigma, n)
    objective = _OrbitObjective(stats, sigma)
    optima, evaluations = _orbit_search(
        objective.divergence, n, _permutations(sigma, cfg), cfg, "D", start
    )
    optima.append(_identity_point(objective.divergence, n, start))
    best_key, best = None, None
    for opt in optima:
        params = _params(n, opt)
        exact = float(np.mean(d_from_statistics(stats, conjugate_state(params, sigma))))
        key = (exact, opt.value)
        if best_key is None or key < best_key:
            best_key, best = key, params
    report = evaluate_at(
        stats, conjugate_state(best, sigma), best, "D", permutations_included=cfg.include_permutations
    )
    report.evaluations = evaluations
    logger.info("D minimized over %d local searches: %.6g", len(optima) - 1, report.D)
    return report


def minimize_f(
    rho: RhoInput,
    sigma: DenseState,
    obs: Optional[Sequence[Observable]] = None,
    cfg: Optional[OptimizerConfig] = None,
    normalization: str = "rho",
    reference: Optional[DenseState] = None,
    start: Optional[LocalUnitaryParams] = None,
) -> DiscriminationReport:
    """
    Minimize the clamped expectation gap over the orbit of sigma, i.e.
    maximize the normalized averaged observable on the orbit.

    The orbit maximum of the traceless averaged observable is recorded in
    ``report.extra["sigma_expectation"]``.

    Raises:
        SignalError: If the averaged observable has no signal on the
            normalization state
    """
    cfg = cfg or OptimizerConfig()
    stats = _as_statistics(rho, obs, normalization, reference)
    norm = stats.require_signal()
    n = _stats_qubits(stats)
    _check_sigma(sigma, n)
    objective = _OrbitObjective(stats, sigma)
    negative_signal = _NegativeSignal(objective, norm)
    optima, evaluations = _orbit_search(
        negative_signal, n, _permutations(sigma, cfg), cfg, "F", start
    )
    optima.append(_identity_point(negative_signal, n, start))
    best = min(optima, key=lambda opt: opt.value)
    params = _params(n, best)
    report = evaluate_at(
        stats, conjugate_state(params, sigma), params, "F", permutations_included=cfg.include_permutations
    )
    report.evaluations = evaluations
    report.extra["sigma_expectation"] = objective.combined(best.x, best.perm)
    logger.info("F minimized over %d local searches: %.6g", len(optima) - 1, report.F)
    return report


def max_overlap(
    psi: DenseState, phi: DenseState, cfg: Optional[OptimizerConfig] = None
) -> Tuple[float, LocalUnitaryParams]:
    """
    Largest ``|<psi|U|phi>|**2`` found over the orbit of phi (a lower bound on
    the true maximum).

    Returns:
        ``(value, params)`` with ``conjugate_state(params, phi)`` attaining value
    """
    cfg = cfg or OptimizerConfig()
    if not (psi.is_pure and phi.is_pure):
        raise StateError("max_overlap needs two pure states")
    if psi.n != phi.n:
        raise DimensionError(f"States act on {psi.n} and {phi.n} qubits")
    n = phi.n
    negative_overlap = _NegativeOverlap(psi.vector(), phi.vector(), n)
    optima, _ = _orbit_search(negative_overlap, n, _permutations(phi, cfg), cfg, "overlap")
    optima.append(_identity_point(negative_overlap, n, None))
    best = min(optima, key=lambda opt: opt.value)
    logger.info("Maximal overlap found: %.8g", -best.value)
    return -best.value, _params(n, best)


def fidelity_measure(n: int, overlap_value: float) -> float:
    """``(2**n / (2**n - 1)) * (1 - overlap)``: F for the full stabilizer set."""
    if not 0.0 <= overlap_value <= 1.0 + 1e-12:
        raise StateError(f"Overlap must lie in [0, 1], got {overlap_value}")
    d = 1 << n
    return max(0.0, d / (d - 1) * (1.0 - overlap_value))


@dataclass
class FamilyResult:
    """One observable family of a subset search."""

    labels: Tuple[str, ...]
    value: float
    metric: str
    representative: Tuple[str, ...]

    @property
    def size(self) -> int:
        return len(self.labels)

    def to_dict(self) -> dict:
        return {
            "labels": list(self.labels),
            "size": self.size,
            "metric": self.metric,
            "value": "inf" if math.isinf(self.value) else self.value,
            "representative": list(self.representative),
        }


def _is_invariant(s: DenseState, perm: Tuple[int, ...]) -> bool:
    moved = permute_qubits(s, perm)
    if s.is_pure:
        return abs(np.vdot(s.data, moved.data)) ** 2 >= 1 - 1e-10
    return np.allclose(moved.data, s.data, atol=1e-10, rtol=0)


def symmetry_permutations(
    rho: DenseState, sigma: DenseState, candidates: Sequence[PauliString], include_permutations: bool
) -> List[Tuple[int, ...]]:
    """
    Qubit permutations that leave every family value unchanged: those fixing
    rho (and sigma, unless the orbit already contains all permutations) and
    mapping the candidate set onto itself.
    """
    pool = set(candidates)
    kept = []
    for perm in itertools.permutations(range(rho.n)):
        if not _is_invariant(rho, perm):
            continue
        if not include_permutations and not _is_invariant(sigma, perm):
            continue
        if all(w.permuted(perm) in pool for w in candidates):
            kept.append(perm)
    return kept


def subset_search(
    rho: DenseState,
    sigma: DenseState,
    candidates: Sequence[PauliString],
    max_size: int = 4,
    metric: str = "D",
    cfg: Optional[OptimizerConfig] = None,
    normalization: str = "rho",
    reference: Optional[DenseState] = None,
) -> List[FamilyResult]:
    """
    Rank every family of up to ``max_size`` stabilizing operators by its
    orbit-minimized measure.

    Families related by a symmetry permutation share one search; the result
    lists all families, best first, ties broken by their labels. The
    symmetry classes are searched in parallel when ``cfg.workers > 1``.

    Args:
        normalization: F normalization, ``"rho"`` or ``"reference"``
        reference: Ideal state for ``"reference"`` normalization

    Raises:
        GroupError: On empty candidates, the identity, or a word not
            stabilizing rho
        ConfigError: On a bad size or metric
    """
    cfg = cfg or OptimizerConfig()
    if metric not in ("D", "F"):
        raise ConfigError(f"metric must be 'D' or 'F', got {metric!r}")
    candidates = sorted(set(candidates), key=lambda w: w.label)
    if not candidates:
        raise GroupError("Subset search needs at least one candidate operator")
    if int(max_size) < 1:
        raise ConfigError(f"max_size must be >= 1, got {max_size}")
    for w in candidates:
        if not isinstance(w, PauliString):
            raise TypeError("Subset search candidates must be Pauli words")
        if w.is_identity():
            raise GroupError("The identity is not a candidate observable")
        if expectation(w, rho) < 1 - 1e-8:
            raise GroupError(f"{w.label} does not stabilize rho")
    by_label = {w.label: w for w in candidates}
    symmetries = symmetry_permutations(rho, sigma, candidates, cfg.include_permutations)
    classes: Dict[Tuple[str, ...], List[Tuple[str, ...]]] = {}
    for size in range(1, min(int(max_size), len(candidates)) + 1):
        for family in itertools.combinations(candidates, size):
            key = min(
                tuple(sorted(w.permuted(perm).label for w in family)) for perm in symmetries
            )
            classes.setdefault(key, []).append(tuple(w.label for w in family))
    logger.info(
        "%d families in %d symmetry classes (%d symmetries)",
        sum(len(m) for m in classes.values()),
        len(classes),
        len(symmetries),
    )
    search = minimize_d if metric == "D" else minimize_f
    keys = sorted(classes)
    inner = cfg
    if len(keys) > 1 and int(cfg.workers) > 1:
        inner = replace(cfg, workers=1, progress=False)
    evaluate = partial(_family_value, search, rho, sigma, inner, normalization, reference)
    families = [[by_label[label] for label in key] for key in keys]
    values = _run_ordered(evaluate, families, cfg, "families", "class")
    results: List[FamilyResult] = []
    for key, value in zip(keys, values):
        for members in classes[key]:
            results.append(FamilyResult(members, value, metric, key))
    results.sort(key=lambda r: (-round(r.value, 9), r.labels))
    return results


def _family_value(search, rho, sigma, cfg, normalization, reference, words) -> float:
    return search(rho, sigma, words, cfg, normalization=normalization, reference=reference).value


@dataclass
class NoiseCurve:
    """Measures of a white-noise family ``(1 - p) I/d + p rho`` versus ``1 - p``."""

    rows: List[Tuple[float, float, float]] = field(default_factory=list)

    HEADER = ("one_minus_p", "F", "D")

    def column(self, name: str) -> List[float]:
        index = self.HEADER.index(name)
        return [row[index] for row in self.rows]

    def write_csv(self, handle) -> None:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(self.HEADER)
        for one_minus_p, f, d in self.rows:
            writer.writerow([f"{one_minus_p:.10g}", _csv_number(f), _csv_number(d)])


def _csv_number(value: float) -> str:
    if math.isnan(value):
        return ""
    if math.isinf(value):
        return "inf"
    return f"{value:.10g}"


def parse_grid(text: str) -> List[float]:
    """
    Parse ``a:b:step`` into the values ``a, a + step, ..., b`` (inclusive).

    Raises:
        ConfigError: On malformed input, a nonpositive step or values outside [0, 1]
    """
    try:
        a, b, step = (float(part) for part in text.split(":"))
    except ValueError as e:
        raise ConfigError(f"Grid {text!r} is not of the form a:b:step") from e
    if step <= 0 or b < a:
        raise ConfigError(f"Grid {text!r} needs a positive step and a <= b")
    count = int(math.floor((b - a) / step + 1e-9)) + 1
    values = [round(a + i * step, 12) for i in range(count)]
    _check_grid(values)
    return values


def _check_grid(p_grid: Sequence[float]) -> None:
    if len(p_grid) == 0:
        raise ConfigError("Noise grid is empty")
    for p in p_grid:
        if not 0.0 <= p <= 1.0:
            raise ConfigError(f"Noise grid value {p} lies outside [0, 1]")


def noise_curve(
    rho: RhoInput,
    sigma: DenseState,
    obs: Optional[Sequence[Observable]],
    p_grid: Sequence[float],
    cfg: Optional[OptimizerConfig] = None,
) -> NoiseCurve:
    """
    Evaluate both measures on ``(1 - p) I/d + p rho`` for every ``p`` of the grid.

    Observables stay normalized against the noiseless rho, so the F column is
    ``max(0, p - orbit maximum)`` and crosses zero at the noise tolerance. The
    orbit maximum does not depend on ``p`` and is searched once. F is left
    empty when the observables carry no expectation (product bases).

    Args:
        rho: Noiseless pure state, or statistics of dichotomic observables
        p_grid: Values of ``p`` in [0, 1]
    """
    cfg = cfg or OptimizerConfig()
    _check_grid(p_grid)
    if isinstance(rho, DenseState):
        clean = _as_statistics(rho, obs, "reference", rho)
    else:
        clean = _as_statistics(rho, obs, "reference", None)
    has_f = clean.norm is not None and abs(clean.norm) > 1e-12
    sigma_expectation = None
    if has_f:
        sigma_expectation = minimize_f(clean, sigma, cfg=cfg).extra["sigma_expectation"]
    curve = NoiseCurve()
    for p in sorted(set(float(p) for p in p_grid), reverse=True):
        if isinstance(rho, DenseState):
            noisy = rho_statistics(white_noise(rho, p), clean.observables, "reference", rho)
        else:
            noisy = clean.with_white_noise(p)
        d_value = minimize_d(noisy, sigma, cfg=cfg).D
        f_value = noisy.f_value(sigma_expectation) if has_f else math.nan
        curve.rows.append((round(1.0 - p, 12), f_value, d_value))
        logger.debug("1-p=%.4g: F=%.6g D=%.6g", 1.0 - p, f_value, d_value)
    return curve


def noise_tolerance(curve: NoiseCurve, column: str = "F") -> Optional[float]:
    """
    Largest tabulated ``1 - p`` at which the column is still positive.

    Returns:
        The noise level, or None if the column is never positive
    """
    if column not in ("F", "D"):
        raise ConfigError(f"column must be 'F' or 'D', got {column!r}")
    positive = [
        row[0]
        for row, value in zip(curve.rows, curve.column(column))
        if not math.isnan(value) and value > 1e-12
    ]
    return max(positive) if positive else None
