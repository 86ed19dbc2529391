"""
Local unitaries parameterized by Euler angles, optionally followed by a qubit
permutation.

Each qubit gets ``U(phi, theta, psi) = exp(i psi Z/2) exp(i theta Y/2) exp(i phi Z/2)``.
The permutation (0-based, same convention as ``dense.permute_qubits``) is
applied after the rotations. Global phases are ignored throughout.
"""
import json
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from .dense import DenseState, permute_qubits
from .errors import DataFormatError, DimensionError, StateError
from .pauli import MAX_QUBITS


@dataclass(frozen=True, eq=False)
class LocalUnitaryParams:
    """
    Attributes:
        n: Number of qubits
        angles: Array of shape ``(n, 3)`` holding ``(phi, theta, psi)`` per qubit
        perm: 0-based qubit permutation applied after the rotations
    """

    n: int
    angles: np.ndarray
    perm: Tuple[int, ...] = field(default=())

    def __post_init__(self):
        angles = np.array(self.angles, dtype=float)
        if angles.shape != (self.n, 3):
            raise DimensionError(f"Expected angles of shape ({self.n}, 3), got {angles.shape}")
        if not np.all(np.isfinite(angles)):
            raise StateError("Euler angles must be finite")
        perm = tuple(int(p) for p in self.perm) if self.perm else tuple(range(self.n))
        if sorted(perm) != list(range(self.n)):
            raise StateError(f"Invalid permutation {list(perm)} for {self.n} qubits")
        angles.setflags(write=False)
        object.__setattr__(self, "angles", angles)
        object.__setattr__(self, "perm", perm)

    @classmethod
    def identity(cls, n: int, perm: Sequence[int] = ()) -> "LocalUnitaryParams":
        return cls(n, np.zeros((n, 3)), tuple(perm))

    @classmethod
    def from_flat(cls, flat: Sequence[float], perm: Sequence[int] = ()) -> "LocalUnitaryParams":
        flat = np.asarray(flat, dtype=float)
        if flat.size % 3:
            raise DimensionError(f"Flat angle vector of length {flat.size} is not a multiple of 3")
        return cls(flat.size // 3, flat.reshape(-1, 3), tuple(perm))

    @property
    def has_permutation(self) -> bool:
        return self.perm != tuple(range(self.n))

    def flat(self) -> np.ndarray:
        return self.angles.reshape(-1)

    def to_dict(self) -> dict:
        """JSON form; the permutation is written 1-based."""
        return {
            "angles": [[float(a) for a in row] for row in self.angles],
            "perm": [p + 1 for p in self.perm],
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "LocalUnitaryParams":
        try:
            angles = np.asarray(obj["angles"], dtype=float)
            perm = [int(p) - 1 for p in obj.get("perm", [])]
        except (KeyError, TypeError, ValueError) as e:
            raise DataFormatError(f"Malformed local-unitary object: {e}") from e
        if angles.ndim != 2:
            raise DataFormatError("angles must be a list of [phi, theta, psi] triples")
        return cls(angles.shape[0], angles, tuple(perm))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def euler_unitary(phi: float, theta: float, psi: float) -> np.ndarray:
    """Single-qubit ``exp(i psi Z/2) exp(i theta Y/2) exp(i phi Z/2)``."""
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    rz_psi = np.array([np.exp(0.5j * psi), np.exp(-0.5j * psi)])
    rz_phi = np.array([np.exp(0.5j * phi), np.exp(-0.5j * phi)])
    ry = np.array([[c, s], [-s, c]], dtype=complex)
    return rz_psi[:, None] * ry * rz_phi[None, :]


def local_unitaries(angles: np.ndarray) -> np.ndarray:
    """Stack of single-qubit unitaries, shape ``(n, 2, 2)``, vectorized over qubits."""
    angles = np.asarray(angles, dtype=float).reshape(-1, 3)
    phi, theta, psi = angles[:, 0], angles[:, 1], angles[:, 2]
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    ep, em = np.exp(0.5j * psi), np.exp(-0.5j * psi)
    fp, fm = np.exp(0.5j * phi), np.exp(-0.5j * phi)
    out = np.empty((angles.shape[0], 2, 2), dtype=complex)
    out[:, 0, 0] = ep * c * fp
    out[:, 0, 1] = ep * s * fm
    out[:, 1, 0] = -em * s * fp
    out[:, 1, 1] = em * c * fm
    return out


def permutation_matrix(perm: Sequence[int]) -> np.ndarray:
    """Matrix ``P`` with ``P @ vec`` equal to ``permute_qubits`` of ``vec``."""
    n = len(perm)
    dim = 1 << n
    index = np.arange(dim).reshape([2] * n).transpose(perm).reshape(-1)
    p = np.zeros((dim, dim))
    p[np.arange(dim), index] = 1
    return p


def build_unitary(params: LocalUnitaryParams) -> np.ndarray:
    """
    Dense ``2**n x 2**n`` unitary: tensor product of the Euler rotations,
    followed by the permutation.
    """
    if params.n > MAX_QUBITS:
        raise DimensionError(f"Dense unitaries are limited to {MAX_QUBITS} qubits")
    u = np.ones((1, 1), dtype=complex)
    for single in local_unitaries(params.angles):
        u = np.kron(u, single)
    if params.has_permutation:
        u = permutation_matrix(params.perm) @ u
    return u


# Up to this many qubits a rotation is one einsum call over all tensor factors.
_SINGLE_CONTRACTION_QUBITS = 6


def rotate_vector(vec: np.ndarray, angles: np.ndarray, perm: Optional[Sequence[int]] = None) -> np.ndarray:
    """
    Apply the local rotations (and permutation) to a state vector without
    building the dense unitary.
    """
    singles = local_unitaries(angles)
    n = singles.shape[0]
    psi = np.asarray(vec).reshape([2] * n)
    order = list(perm) if perm is not None else list(range(n))
    if n <= _SINGLE_CONTRACTION_QUBITS:
        operands = []
        for k in range(n):
            operands += [singles[k], [n + k, k]]
        return np.einsum(*operands, psi, list(range(n)), [n + p for p in order]).reshape(-1)
    for k in range(n):
        psi = np.moveaxis(np.tensordot(singles[k], psi, axes=([1], [k])), 0, k)
    return psi.transpose(order).reshape(-1)


def conjugate_state(params: LocalUnitaryParams, s: DenseState) -> DenseState:
    """``U|s>`` for pure states, ``U s U^dagger`` for mixed states."""
    if params.n != s.n:
        raise DimensionError(f"Parameters act on {params.n} qubits, state has {s.n}")
    if s.is_pure:
        vec = rotate_vector(s.data, params.angles)
        rotated = DenseState.pure(vec / np.linalg.norm(vec))
        return permute_qubits(rotated, params.perm) if params.has_permutation else rotated
    u = build_unitary(params)
    rho = u @ s.data @ u.conj().T
    return DenseState.mixed((rho + rho.conj().T) / 2)


def random_params(n: int, seed=None) -> LocalUnitaryParams:
    """Angles drawn uniformly from ``[0, 2 pi)``; deterministic for a fixed seed."""
    rng = np.random.default_rng(seed)
    return LocalUnitaryParams(n, rng.uniform(0.0, 2 * np.pi, size=(n, 3)))
