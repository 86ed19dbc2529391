"""Tests for the dense simulator and observables."""
import sys
import os
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

import numpy as np
import pytest

from entdisc.dense import (
    DenseState,
    basis_state,
    distinct_permutations,
    dump_state,
    eigenvalue_labels,
    expectation,
    load_state,
    outcome_distribution,
    overlap,
    pauli_decomposition,
    permute_qubits,
    white_noise,
)
from entdisc.errors import DataFormatError, DimensionError, StateError
from entdisc.observables import HermitianObservable, ProductBasis, computational_basis
from entdisc.pauli import PauliString, to_matrix
from entdisc.states import cluster4, ghz, w3


def test_basis_index_convention():
    """Test that qubit 0 is the most significant bit."""
    state = basis_state("0011")
    assert state.vector()[3] == 1
    assert expectation(PauliString.from_label("ZIII"), state) == pytest.approx(1.0)
    assert expectation(PauliString.from_label("IIIZ"), state) == pytest.approx(-1.0)


def test_state_validation():
    """Test norm, dimension and positivity checks."""
    with pytest.raises(StateError):
        DenseState.pure([1, 1])
    with pytest.raises(DimensionError):
        DenseState.pure([1, 0, 0], normalize=True)
    with pytest.raises(DimensionError):
        DenseState.pure(np.eye(1 << 7)[0])
    with pytest.raises(StateError):
        DenseState.mixed(np.diag([1.5, -0.5]))
    with pytest.raises(StateError):
        DenseState.pure([0, 0], normalize=True)


def test_global_phase_is_fixed():
    """Test that states differing by a global phase are stored identically."""
    a = DenseState.pure(np.array([1, 1j]) / np.sqrt(2))
    b = DenseState.pure(np.array([-1j, 1]) / np.sqrt(2))
    assert np.allclose(a.vector(), b.vector())


def test_w_state_expectations():
    """Test the single- and two-qubit W3 correlations."""
    state = w3()
    assert expectation(PauliString.from_label("IIZ"), state) == pytest.approx(1 / 3)
    assert expectation(PauliString.from_label("IZZ"), state) == pytest.approx(-1 / 3)
    assert expectation(PauliString.from_label("IXX"), state) == pytest.approx(2 / 3)


def test_outcome_distributions():
    """Test dichotomic, dense and product-basis outcomes."""
    dist = outcome_distribution(PauliString.from_label("IIZ"), w3())
    assert dist.labels == ("+1", "-1")
    assert np.allclose(dist.probs, [2 / 3, 1 / 3])

    comp = outcome_distribution(computational_basis(4), ghz(4))
    assert comp.as_dict()["0000"] == pytest.approx(0.5)
    assert comp.as_dict()["1111"] == pytest.approx(0.5)
    assert comp.as_dict()["0101"] == 0.0

    number = HermitianObservable(np.diag([0.0, 1.0, 1.0, 2.0]), label="N")
    dist = outcome_distribution(number, basis_state("01"))
    assert len(dist) == 3
    assert np.allclose(dist.probs, [0, 1, 0])
    with pytest.raises(TypeError):
        expectation(computational_basis(2), basis_state("01"))


def test_close_eigenvalues_get_distinct_labels():
    """Test that eigenvalues printing alike at 8 digits keep separate outcomes."""
    near = HermitianObservable(np.diag([1.0, 1.0 + 2e-8]), label="near")
    dist = outcome_distribution(near, DenseState.pure([1, 1], normalize=True))
    assert len(dist) == 2
    assert len(set(dist.labels)) == 2
    assert np.allclose(dist.probs, [0.5, 0.5])
    assert eigenvalue_labels([0.0, 1.0, 2.0]) == ['0', '1', '2']


def test_product_basis_validation():
    """Test that non-orthonormal local bases are rejected."""
    with pytest.raises(StateError):
        ProductBasis((np.array([[1, 1], [0, 1]]),))
    hadamard = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    dist = outcome_distribution(ProductBasis((hadamard,)), DenseState.pure([1, 1], normalize=True))
    assert np.allclose(dist.probs, [1, 0])


def test_dimension_mismatch():
    """Test that observables must fit the state."""
    with pytest.raises(DimensionError):
        expectation(PauliString.from_label("ZZ"), ghz(3))


def test_white_noise():
    """Test that white noise scales traceless expectations by p."""
    noisy = white_noise(cluster4(), 0.3)
    assert not noisy.is_pure
    assert np.trace(noisy.density_matrix()).real == pytest.approx(1.0)
    assert expectation(PauliString.from_label("ZZII"), noisy) == pytest.approx(0.3)
    assert np.allclose(white_noise(ghz(3), 0.0).density_matrix(), np.eye(8) / 8)
    with pytest.raises(StateError):
        white_noise(ghz(3), 1.2)


def test_permute_qubits_matches_permuted_words():
    """Test that permuting word and state together keeps expectations."""
    rng = np.random.default_rng(5)
    vec = rng.normal(size=16) + 1j * rng.normal(size=16)
    state = DenseState.pure(vec, normalize=True)
    perm = (2, 0, 3, 1)
    moved = permute_qubits(state, perm)
    for label in ("XIZY", "ZZII", "IYXI"):
        word = PauliString.from_label(label)
        assert expectation(word.permuted(perm), moved) == pytest.approx(expectation(word, state))
    mixed = white_noise(state, 0.5)
    assert np.allclose(
        permute_qubits(mixed, perm).density_matrix(), white_noise(moved, 0.5).density_matrix()
    )


def test_distinct_permutations():
    """Test permutation representatives of GHZ and cluster states."""
    assert len(distinct_permutations(ghz(4))) == 1
    reps = distinct_permutations(cluster4())
    assert len(reps) == 3
    assert reps[0][0] == (0, 1, 2, 3)
    for i in range(3):
        for j in range(i + 1, 3):
            assert overlap(reps[i][1], reps[j][1]) < 1 - 1e-10


def test_pauli_decomposition_of_w():
    """Test that the Pauli expansion rebuilds the density matrix."""
    terms = pauli_decomposition(w3())
    rebuilt = sum(c * to_matrix(word) for word, c in terms)
    assert np.allclose(rebuilt, w3().density_matrix())
    coeffs = {word.label: c for word, c in terms}
    assert coeffs["III"] == pytest.approx(1 / 8)
    assert coeffs["ZZZ"] == pytest.approx(-1 / 8)
    assert coeffs["XXI"] == pytest.approx(1 / 12)


def test_state_file_roundtrip(tmp_path):
    """Test JSON state files for pure and mixed states."""
    path = str(tmp_path / "w.json")
    dump_state(w3(), path)
    assert overlap(load_state(path), w3()) == pytest.approx(1.0)
    path = str(tmp_path / "noisy.json")
    dump_state(white_noise(w3(), 0.5), path)
    assert np.allclose(load_state(path).density_matrix(), white_noise(w3(), 0.5).density_matrix())
    bad = tmp_path / "bad.json"
    bad.write_text('{"n": 1, "kind": "pure"}')
    with pytest.raises(DataFormatError):
        load_state(str(bad))
