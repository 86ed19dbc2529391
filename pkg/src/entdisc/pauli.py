"""
Signed n-qubit Pauli words.

A word is stored symplectically: two bit masks ``x`` and ``z`` over the qubits
plus a real sign. Qubit ``k`` (0-based, the k-th letter from the left) owns bit
``n - 1 - k`` of both masks, so masks line up with computational-basis indices
(qubit 0 is the most significant bit).

Letters encode as I=(0,0), X=(1,0), Z=(0,1), Y=(1,1) and the operator of a
word is ``sign * i**popcount(x & z) * X**x Z**z``.

User-facing text is the label form ``[+|-]LETTERS`` (e.g. ``-XXYY``). Index
arguments and return values of this module are 0-based.
"""
from dataclasses import dataclass
from functools import lru_cache
from typing import FrozenSet, Iterable, Sequence, Tuple

import numpy as np

from .errors import DimensionError, PauliError

# Dense conversions above this size are refused.
MAX_QUBITS = 6

_LETTER_BITS = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}
_BITS_LETTER = {bits: letter for letter, bits in _LETTER_BITS.items()}

_SINGLE = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

_I_POWERS = (1, 1j, -1, -1j)


def _popcount(value: int) -> int:
    return bin(value).count("1")


@dataclass(frozen=True)
class PauliString:
    """
    Immutable signed Pauli word.

    Attributes:
        n: Number of qubits
        x: X bit mask (bit n-1-k belongs to qubit k)
        z: Z bit mask
        sign: +1 or -1; imaginary phases are never stored
    """

    n: int
    x: int
    z: int
    sign: int = 1

    def __post_init__(self):
        if self.n < 1:
            raise PauliError(f"Pauli word needs at least one qubit, got n={self.n}")
        limit = 1 << self.n
        if not (0 <= self.x < limit and 0 <= self.z < limit):
            raise PauliError(f"Bit masks out of range for {self.n} qubits")
        if self.sign not in (1, -1):
            raise PauliError(f"Sign must be +1 or -1, got {self.sign!r}")

    @classmethod
    def from_label(cls, label: str) -> "PauliString":
        """
        Parse a label such as ``"XXYY"``, ``"+IZZ"`` or ``"-XXYY"``.

        Raises:
            TypeError: If label is not a string
            PauliError: If the label is empty or holds letters outside IXYZ
        """
        if not isinstance(label, str):
            raise TypeError("Pauli label must be a string")
        text = label.strip()
        sign = 1
        if text[:1] in ("+", "-"):
            sign = -1 if text[0] == "-" else 1
            text = text[1:]
        text = text.upper()
        if not text:
            raise PauliError(f"Empty Pauli label: {label!r}")
        return cls.from_letters(text, sign)

    @classmethod
    def from_letters(cls, letters: Iterable[str], sign: int = 1) -> "PauliString":
        """Build a word from per-qubit letters, leftmost letter is qubit 0."""
        letters = list(letters)
        n = len(letters)
        x = z = 0
        for k, letter in enumerate(letters):
            try:
                xb, zb = _LETTER_BITS[letter]
            except KeyError:
                raise PauliError(f"Invalid Pauli letter {letter!r}") from None
            bit = 1 << (n - 1 - k)
            if xb:
                x |= bit
            if zb:
                z |= bit
        return cls(n, x, z, sign)

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls(n, 0, 0, 1)

    @property
    def letters(self) -> str:
        """Sign-free letters, e.g. ``"XXYY"``."""
        out = []
        for k in range(self.n):
            bit = 1 << (self.n - 1 - k)
            out.append(_BITS_LETTER[(int(bool(self.x & bit)), int(bool(self.z & bit)))])
        return "".join(out)

    @property
    def label(self) -> str:
        """Text form; the ``+`` of positive words is omitted."""
        return ("-" if self.sign < 0 else "") + self.letters

    @property
    def weight(self) -> int:
        """Number of qubits acted on nontrivially."""
        return _popcount(self.x | self.z)

    def is_identity(self) -> bool:
        return self.x == 0 and self.z == 0

    def unsigned(self) -> "PauliString":
        return PauliString(self.n, self.x, self.z, 1)

    def __neg__(self) -> "PauliString":
        return PauliString(self.n, self.x, self.z, -self.sign)

    def commutes_with(self, other: "PauliString") -> bool:
        """Symplectic commutation test."""
        _check_same_size(self, other)
        return (_popcount(self.x & other.z) + _popcount(self.z & other.x)) % 2 == 0

    def permuted(self, perm: Sequence[int]) -> "PauliString":
        """
        Relabel qubits: letter ``k`` of the result is letter ``perm[k]`` of self.

        Uses the same convention as ``dense.permute_qubits`` so that expectation
        values are preserved when word and state are permuted together.
        """
        if sorted(perm) != list(range(self.n)):
            raise PauliError(f"Invalid permutation {list(perm)} for {self.n} qubits")
        letters = self.letters
        return PauliString.from_letters((letters[p] for p in perm), self.sign)

    def __str__(self) -> str:
        return self.label


def _check_same_size(a: PauliString, b: PauliString) -> None:
    if a.n != b.n:
        raise DimensionError(f"Pauli words act on {a.n} and {b.n} qubits")


def pauli_product(a: PauliString, b: PauliString) -> Tuple[complex, PauliString]:
    """
    Multiply two words.

    Returns:
        ``(phase, word)`` with ``word.sign == +1`` and ``phase`` in
        {1, -1, 1j, -1j} such that ``phase * to_matrix(word) == a @ b``.
        The signs of ``a`` and ``b`` are carried by ``phase``.

    Raises:
        DimensionError: On a qubit-count mismatch
    """
    _check_same_size(a, b)
    x3 = a.x ^ b.x
    z3 = a.z ^ b.z
    exponent = (
        _popcount(a.x & a.z)
        + _popcount(b.x & b.z)
        + 2 * _popcount(a.z & b.x)
        - _popcount(x3 & z3)
    ) % 4
    phase = _I_POWERS[exponent] * a.sign * b.sign
    return phase, PauliString(a.n, x3, z3, 1)


def signed_product(a: PauliString, b: PauliString) -> PauliString:
    """
    Product of two commuting words as a signed word.

    Raises:
        PauliError: If the product carries an imaginary phase (a, b anticommute)
    """
    phase, word = pauli_product(a, b)
    if phase.imag != 0:
        raise PauliError(f"{a} * {b} has imaginary phase {phase}")
    return PauliString(word.n, word.x, word.z, int(phase.real))


def trace_overlap(a: PauliString, b: PauliString) -> int:
    """Return ``tr(a b) / 2**n``: the sign product for equal words, else 0."""
    _check_same_size(a, b)
    if a.x == b.x and a.z == b.z:
        return a.sign * b.sign
    return 0


def support(p: PauliString) -> FrozenSet[int]:
    """0-based indices of the qubits where the letter is not I."""
    mask = p.x | p.z
    return frozenset(k for k in range(p.n) if mask & (1 << (p.n - 1 - k)))


@lru_cache(maxsize=4096)
def _matrix_cached(p: PauliString) -> np.ndarray:
    m = np.ones((1, 1), dtype=complex)
    for letter in p.letters:
        m = np.kron(m, _SINGLE[letter])
    m = p.sign * m
    m.setflags(write=False)
    return m


def to_matrix(p: PauliString) -> np.ndarray:
    """
    Dense ``2**n x 2**n`` matrix of a word (read-only, cached).

    Raises:
        DimensionError: If the word acts on more than MAX_QUBITS qubits
    """
    if p.n > MAX_QUBITS:
        raise DimensionError(f"Dense matrices are limited to {MAX_QUBITS} qubits, got {p.n}")
    return _matrix_cached(p)


def parse_labels(labels: Iterable[str]) -> list:
    """Parse several labels; all words must act on the same number of qubits."""
    words = [PauliString.from_label(label) for label in labels]
    sizes = {w.n for w in words}
    if len(sizes) > 1:
        raise DimensionError(f"Pauli labels mix qubit counts {sorted(sizes)}")
    return words
