"""
Named states: GHZ, W, the rotated W and the four-qubit linear cluster state.
"""
from typing import Callable, Dict, List

import numpy as np

from .dense import DenseState
from .errors import StateError
from .pauli import PauliString


def ghz(n: int) -> DenseState:
    """``(|0...0> + |1...1>)/sqrt(2)``."""
    if n < 2:
        raise StateError(f"GHZ state needs at least 2 qubits, got {n}")
    vec = np.zeros(1 << n, dtype=complex)
    vec[0] = vec[-1] = 1 / np.sqrt(2)
    return DenseState.pure(vec)


def cluster4() -> DenseState:
    """``(|0000> + |0011> + |1100> - |1111>)/2``."""
    vec = np.zeros(16, dtype=complex)
    vec[0b0000] = vec[0b0011] = vec[0b1100] = 0.5
    vec[0b1111] = -0.5
    return DenseState.pure(vec)


def w3() -> DenseState:
    """``(|001> + |010> + |100>)/sqrt(3)``."""
    vec = np.zeros(8, dtype=complex)
    vec[0b001] = vec[0b010] = vec[0b100] = 1 / np.sqrt(3)
    return DenseState.pure(vec)


def what_w3() -> DenseState:
    """
    ``(3, -1, -1, -1, -1, -1, -1, 3) / (2 sqrt 6)``.

    LU equivalent to W3 and of maximal overlap with GHZ3.
    """
    vec = np.array([3, -1, -1, -1, -1, -1, -1, 3], dtype=complex) / (2 * np.sqrt(6))
    return DenseState.pure(vec)


BUILTIN_STATES: Dict[str, Callable[[], DenseState]] = {
    "ghz3": lambda: ghz(3),
    "ghz4": lambda: ghz(4),
    "w3": w3,
    "what_w3": what_w3,
    "cluster4": cluster4,
}

# Generators in the computational basis, matching the explicit group listings
# of the GHZ and linear cluster states (not the graph basis).
_GENERATORS: Dict[str, List[str]] = {
    "ghz3": ["XXX", "ZZI", "IZZ"],
    "ghz4": ["XXXX", "ZZII", "IZZI", "IIZZ"],
    "cluster4": ["ZZII", "IIZZ", "XXZI", "IZXX"],
}


def builtin_state(name: str) -> DenseState:
    """
    Look up a built-in state by name.

    Raises:
        StateError: If the name is unknown
    """
    try:
        factory = BUILTIN_STATES[name]
    except KeyError:
        known = ", ".join(sorted(BUILTIN_STATES))
        raise StateError(f"Unknown state {name!r}; built-in states: {known}") from None
    return factory()


def builtin_generators(name: str) -> List[PauliString]:
    """Stabilizer generators of a built-in stabilizer state."""
    if name not in _GENERATORS:
        raise StateError(f"Built-in state {name!r} has no stabilizer generators")
    return [PauliString.from_label(label) for label in _GENERATORS[name]]
