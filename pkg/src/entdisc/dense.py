"""
Dense state-vector / density-matrix simulator for a handful of qubits.

Basis index convention: qubit 0 is the most significant bit, so ``|0011>`` is
index 3. Permutations are 0-based sequences where entry ``k`` names the old
qubit that becomes qubit ``k``.
"""
import itertools
import json
import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from .errors import DataFormatError, DimensionError, StateError
from .observables import (
    HermitianObservable,
    Observable,
    ProductBasis,
    observable_label,
    observable_qubits,
)
from .outcomes import OutcomeDistribution
from .pauli import MAX_QUBITS, PauliString, to_matrix

logger = logging.getLogger(__name__)

NORM_TOLERANCE = 1e-12
PSD_TOLERANCE = 1e-10
DISTINCT_TOLERANCE = 1e-10
_IMAG_TOLERANCE = 1e-10


def _qubits_for_dim(dim: int) -> int:
    n = dim.bit_length() - 1
    if dim < 2 or (1 << n) != dim:
        raise DimensionError(f"Dimension {dim} is not a power of two")
    if n > MAX_QUBITS:
        raise DimensionError(f"Dense simulation is limited to {MAX_QUBITS} qubits, got {n}")
    return n


def _fix_global_phase(vec: np.ndarray) -> np.ndarray:
    nonzero = np.flatnonzero(np.abs(vec) > NORM_TOLERANCE)
    if nonzero.size == 0:
        return vec
    first = vec[nonzero[0]]
    return vec * (abs(first) / first)


@dataclass(frozen=True, eq=False)
class DenseState:
    """
    Pure state vector or density matrix in the computational basis.

    Attributes:
        n: Number of qubits
        kind: ``"pure"`` or ``"mixed"``
        data: Amplitudes (pure, shape ``(2**n,)``) or matrix (mixed, ``(2**n, 2**n)``)
    """

    n: int
    kind: str
    data: np.ndarray

    def __post_init__(self):
        data = np.array(self.data, dtype=complex)
        if self.kind == "pure":
            if data.ndim != 1:
                raise StateError(f"Pure state needs a vector, got shape {data.shape}")
            n = _qubits_for_dim(data.size)
            norm = np.linalg.norm(data)
            if abs(norm - 1.0) > NORM_TOLERANCE:
                raise StateError(f"State vector has norm {norm:.15g}")
            data = _fix_global_phase(data)
        elif self.kind == "mixed":
            if data.ndim != 2 or data.shape[0] != data.shape[1]:
                raise StateError(f"Density matrix must be square, got shape {data.shape}")
            n = _qubits_for_dim(data.shape[0])
            if not np.allclose(data, data.conj().T, atol=NORM_TOLERANCE, rtol=0):
                raise StateError("Density matrix is not Hermitian")
            trace = np.trace(data).real
            if abs(trace - 1.0) > NORM_TOLERANCE:
                raise StateError(f"Density matrix has trace {trace:.15g}")
            if np.linalg.eigvalsh(data).min() < -PSD_TOLERANCE:
                raise StateError("Density matrix is not positive semidefinite")
        else:
            raise StateError(f"Unknown state kind {self.kind!r}")
        if n != self.n:
            raise DimensionError(f"Declared n={self.n} but data describes {n} qubits")
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    @classmethod
    def pure(cls, amplitudes, normalize: bool = False) -> "DenseState":
        """Pure state from amplitudes; ``normalize`` rescales to unit norm first."""
        vec = np.asarray(amplitudes, dtype=complex).reshape(-1)
        if normalize:
            norm = np.linalg.norm(vec)
            if norm == 0:
                raise StateError("Cannot normalize the zero vector")
            vec = vec / norm
        return cls(_qubits_for_dim(vec.size), "pure", vec)

    @classmethod
    def mixed(cls, matrix) -> "DenseState":
        m = np.asarray(matrix, dtype=complex)
        return cls(_qubits_for_dim(m.shape[0]), "mixed", m)

    @property
    def dim(self) -> int:
        return 1 << self.n

    @property
    def is_pure(self) -> bool:
        return self.kind == "pure"

    def vector(self) -> np.ndarray:
        if not self.is_pure:
            raise StateError("Mixed state has no state vector")
        return self.data

    def density_matrix(self) -> np.ndarray:
        if self.is_pure:
            return np.outer(self.data, self.data.conj())
        return self.data


def _check_dims(a: Observable, s: DenseState) -> None:
    if observable_qubits(a) != s.n:
        raise DimensionError(
            f"Observable {observable_label(a)!r} acts on {observable_qubits(a)} qubits, state has {s.n}"
        )


def _matrix_expectation(m: np.ndarray, s: DenseState) -> float:
    if s.is_pure:
        value = np.vdot(s.data, m @ s.data)
    else:
        value = np.trace(m @ s.data)
    if abs(value.imag) > _IMAG_TOLERANCE:
        logger.debug("Discarding imaginary part %.3g of an expectation value", value.imag)
    return float(value.real)


def expectation(a: Observable, s: DenseState) -> float:
    """
    Return ``tr(A rho)``.

    Raises:
        DimensionError: If the observable and the state act on different qubit counts
        TypeError: For a product basis, which has no eigenvalues
    """
    _check_dims(a, s)
    if isinstance(a, PauliString):
        return _matrix_expectation(to_matrix(a), s)
    if isinstance(a, HermitianObservable):
        return _matrix_expectation(a.matrix, s)
    raise TypeError(f"{type(a).__name__} has no expectation value")


def _block_probability(block: np.ndarray, s: DenseState) -> float:
    if s.is_pure:
        amps = block.conj().T @ s.data
        return float(np.sum(np.abs(amps) ** 2))
    return float(np.trace(block.conj().T @ s.data @ block).real)


def outcome_distribution(a: Observable, s: DenseState) -> OutcomeDistribution:
    """
    Distribution of measurement outcomes of ``a`` on ``s``.

    Pauli words give two outcomes ``+1``/``-1`` with ``p = (1 +- <A>)/2``.
    Dense observables give one outcome per distinct eigenvalue. Product bases
    give ``2**n`` outcomes labelled by bitstrings.
    """
    _check_dims(a, s)
    if isinstance(a, PauliString):
        return OutcomeDistribution.dichotomic(expectation(a, s))
    if isinstance(a, HermitianObservable):
        values, blocks = a.spectral_groups()
        probs = [_block_probability(block, s) for block in blocks]
        return OutcomeDistribution.cleaned(probs, eigenvalue_labels(values))
    if isinstance(a, ProductBasis):
        u = a.unitary()
        if s.is_pure:
            probs = np.abs(u.conj().T @ s.data) ** 2
        else:
            probs = np.real(np.einsum("ji,jk,ki->i", u.conj(), s.data, u))
        return OutcomeDistribution.cleaned(probs, a.outcome_labels())
    raise TypeError(f"Unsupported observable type: {type(a).__name__}")


def eigenvalue_labels(values: Sequence[float]) -> List[str]:
    """
    Outcome labels for distinct eigenvalues: 8 significant digits, or the
    full ``repr`` when two values print alike at that precision.
    """
    labels = [f"{v:.8g}" for v in values]
    if len(set(labels)) < len(labels):
        labels = [repr(float(v)) for v in values]
    return labels


def overlap(a: DenseState, b: DenseState) -> float:
    """Return ``|<a|b>|**2`` for two pure states."""
    if not (a.is_pure and b.is_pure):
        raise StateError("overlap needs two pure states")
    if a.n != b.n:
        raise DimensionError(f"States act on {a.n} and {b.n} qubits")
    return float(abs(np.vdot(a.data, b.data)) ** 2)


def white_noise(s: DenseState, p: float) -> DenseState:
    """Return ``(1 - p) * I/d + p * rho``."""
    if not 0.0 <= p <= 1.0:
        raise StateError(f"Noise parameter p must lie in [0, 1], got {p}")
    rho = (1 - p) * np.eye(s.dim) / s.dim + p * s.density_matrix()
    return DenseState.mixed(rho)


def _check_perm(perm: Sequence[int], n: int) -> Tuple[int, ...]:
    perm = tuple(int(p) for p in perm)
    if sorted(perm) != list(range(n)):
        raise StateError(f"Invalid permutation {list(perm)} for {n} qubits")
    return perm


def permute_qubits(s: DenseState, perm: Sequence[int]) -> DenseState:
    """Reorder tensor factors: qubit ``k`` of the result is qubit ``perm[k]`` of ``s``."""
    perm = _check_perm(perm, s.n)
    shape = [2] * s.n
    if s.is_pure:
        vec = s.data.reshape(shape).transpose(perm).reshape(-1)
        return DenseState.pure(vec)
    axes = list(perm) + [s.n + p for p in perm]
    rho = s.data.reshape(shape * 2).transpose(axes).reshape(s.dim, s.dim)
    return DenseState.mixed(rho)


def distinct_permutations(s: DenseState) -> List[Tuple[Tuple[int, ...], DenseState]]:
    """
    One representative per distinct qubit permutation of a pure state.

    Permutations are scanned in lexicographic order; the first one producing
    a new state (overlap below ``1 - 1e-10`` with all kept states) is kept.
    """
    if not s.is_pure:
        raise StateError("distinct_permutations needs a pure state")
    kept: List[Tuple[Tuple[int, ...], DenseState]] = []
    for perm in itertools.permutations(range(s.n)):
        candidate = permute_qubits(s, perm)
        if all(overlap(candidate, other) < 1 - DISTINCT_TOLERANCE for _, other in kept):
            kept.append((perm, candidate))
    logger.debug("%d distinct permutations of a %d-qubit state", len(kept), s.n)
    return kept


def pauli_decomposition(s: DenseState, tol: float = 1e-12) -> List[Tuple[PauliString, float]]:
    """
    Expand ``rho`` into Pauli words: ``rho = sum_P c_P P`` with ``c_P = tr(P rho)/2**n``.

    Terms with ``|c_P| <= tol`` are dropped. Words are returned unsigned; the
    sign lives in the coefficient.
    """
    terms = []
    for letters in itertools.product("IXYZ", repeat=s.n):
        word = PauliString.from_letters(letters)
        coeff = expectation(word, s) / s.dim
        if abs(coeff) > tol:
            terms.append((word, coeff))
    return terms


def basis_state(bits: str) -> DenseState:
    """Computational basis state from a bitstring such as ``"0110"``."""
    if not bits or set(bits) - {"0", "1"}:
        raise StateError(f"Invalid bitstring {bits!r}")
    vec = np.zeros(1 << len(bits), dtype=complex)
    vec[int(bits, 2)] = 1
    return DenseState.pure(vec)


def state_to_dict(s: DenseState) -> dict:
    """JSON form ``{"n", "kind", "data"}`` with complex numbers as ``[re, im]``."""
    if s.is_pure:
        data = [[float(a.real), float(a.imag)] for a in s.data]
    else:
        data = [[[float(a.real), float(a.imag)] for a in row] for row in s.data]
    return {"n": s.n, "kind": s.kind, "data": data}


def state_from_dict(obj: dict) -> DenseState:
    """Inverse of ``state_to_dict``."""
    try:
        n = int(obj["n"])
        kind = obj["kind"]
        raw = np.asarray(obj["data"], dtype=float)
    except (KeyError, TypeError, ValueError) as e:
        raise DataFormatError(f"Malformed state object: {e}") from e
    if raw.shape[-1:] != (2,):
        raise DataFormatError("State data entries must be [re, im] pairs")
    return DenseState(n, kind, raw[..., 0] + 1j * raw[..., 1])


def load_state(path: str) -> DenseState:
    """Read a state JSON file."""
    try:
        with open(path, "r", encoding="utf-8") as f:
            obj = json.load(f)
    except json.JSONDecodeError as e:
        raise DataFormatError(f"State file {path} is not valid JSON: {e}") from e
    return state_from_dict(obj)


def dump_state(s: DenseState, path: str) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(state_to_dict(s), f, indent=2)
