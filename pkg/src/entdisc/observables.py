"""
Observable types accepted by the dense simulator and the measures.

An observable is one of:

- a ``PauliString`` (dichotomic, outcomes +1 / -1),
- a ``HermitianObservable`` (dense matrix, outcomes are its distinct eigenvalues),
- a ``ProductBasis`` (local orthonormal basis on every qubit, 2**n outcomes).
"""
from dataclasses import dataclass
from typing import Sequence, Tuple, Union

import numpy as np

from .errors import DimensionError, StateError
from .pauli import MAX_QUBITS, PauliString

HERMITIAN_TOLERANCE = 1e-12
# Eigenvalues closer than this form one outcome.
EIGENVALUE_GROUPING = 1e-8


@dataclass(frozen=True, eq=False)
class HermitianObservable:
    """Dense Hermitian matrix with an optional display label."""

    matrix: np.ndarray
    label: str = "A"

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionError(f"Observable must be square, got shape {m.shape}")
        dim = m.shape[0]
        n = dim.bit_length() - 1
        if dim < 2 or (1 << n) != dim:
            raise DimensionError(f"Observable dimension {dim} is not a power of two")
        if n > MAX_QUBITS:
            raise DimensionError(f"Observables are limited to {MAX_QUBITS} qubits")
        if not np.allclose(m, m.conj().T, atol=HERMITIAN_TOLERANCE, rtol=0):
            raise StateError(f"Observable {self.label!r} is not Hermitian")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def n(self) -> int:
        return self.matrix.shape[0].bit_length() - 1

    def spectral_groups(self) -> Tuple[Tuple[float, ...], Tuple[np.ndarray, ...]]:
        """
        Distinct eigenvalues and the eigenvector blocks spanning each eigenspace.

        Returns:
            ``(values, blocks)`` where ``blocks[g]`` has the eigenvectors of
            ``values[g]`` as columns
        """
        evals, evecs = np.linalg.eigh(self.matrix)
        values, blocks = [], []
        start = 0
        for i in range(1, evals.size + 1):
            if i == evals.size or evals[i] - evals[start] > EIGENVALUE_GROUPING:
                values.append(float(np.mean(evals[start:i])))
                blocks.append(evecs[:, start:i])
                start = i
        return tuple(values), tuple(blocks)


@dataclass(frozen=True, eq=False)
class ProductBasis:
    """
    Product basis given by one orthonormal 2x2 basis per qubit.

    Column ``b`` of ``local_bases[k]`` is the state of qubit ``k`` for outcome
    bit ``b``. Outcomes are labelled by bitstrings, qubit 0 first.
    """

    local_bases: Tuple[np.ndarray, ...]
    label: str = "basis"

    def __post_init__(self):
        bases = []
        for k, basis in enumerate(self.local_bases):
            b = np.asarray(basis, dtype=complex)
            if b.shape != (2, 2):
                raise DimensionError(f"Local basis of qubit {k} must be 2x2, got {b.shape}")
            if not np.allclose(b.conj().T @ b, np.eye(2), atol=HERMITIAN_TOLERANCE, rtol=0):
                raise StateError(f"Local basis of qubit {k} is not orthonormal")
            b = b.copy()
            b.setflags(write=False)
            bases.append(b)
        if not bases:
            raise DimensionError("Product basis needs at least one qubit")
        if len(bases) > MAX_QUBITS:
            raise DimensionError(f"Product bases are limited to {MAX_QUBITS} qubits")
        object.__setattr__(self, "local_bases", tuple(bases))

    @property
    def n(self) -> int:
        return len(self.local_bases)

    def unitary(self) -> np.ndarray:
        """Matrix whose columns are the 2**n product vectors in outcome order."""
        m = np.ones((1, 1), dtype=complex)
        for b in self.local_bases:
            m = np.kron(m, b)
        return m

    def outcome_labels(self) -> Tuple[str, ...]:
        return tuple(format(i, f"0{self.n}b") for i in range(1 << self.n))


Observable = Union[PauliString, HermitianObservable, ProductBasis]


def computational_basis(n: int) -> ProductBasis:
    """The computational basis as a product basis."""
    return ProductBasis(tuple(np.eye(2) for _ in range(n)), label="comp-basis")


def observable_qubits(a: Observable) -> int:
    if isinstance(a, (PauliString, HermitianObservable, ProductBasis)):
        return a.n
    raise TypeError(f"Unsupported observable type: {type(a).__name__}")


def observable_label(a: Observable) -> str:
    """Display label of any observable."""
    if isinstance(a, PauliString):
        return a.label
    if isinstance(a, (HermitianObservable, ProductBasis)):
        return a.label
    raise TypeError(f"Unsupported observable type: {type(a).__name__}")


def check_observables(obs: Sequence[Observable], n: int) -> None:
    """Raise DimensionError unless every observable acts on ``n`` qubits."""
    for a in obs:
        if observable_qubits(a) != n:
            raise DimensionError(
                f"Observable {observable_label(a)!r} acts on {observable_qubits(a)} qubits, state has {n}"
            )
