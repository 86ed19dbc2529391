"""Tests for the Euler-angle local unitaries."""
import sys
import os
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

import numpy as np
import pytest

from entdisc.dense import DenseState, expectation, overlap, permute_qubits, white_noise
from entdisc.errors import DataFormatError, DimensionError, StateError
from entdisc.local_unitary import (
    LocalUnitaryParams,
    build_unitary,
    conjugate_state,
    euler_unitary,
    local_unitaries,
    permutation_matrix,
    random_params,
    rotate_vector,
)
from entdisc.pauli import PauliString
from entdisc.states import cluster4, ghz, w3


def test_euler_unitary_is_unitary():
    """Test unitarity and the vectorized form."""
    rng = np.random.default_rng(1)
    angles = rng.uniform(0, 2 * np.pi, size=(5, 3))
    stack = local_unitaries(angles)
    for (phi, theta, psi), u in zip(angles, stack):
        assert np.allclose(u @ u.conj().T, np.eye(2))
        assert np.allclose(u, euler_unitary(phi, theta, psi))


def test_identity_params():
    """Test that zero angles give the identity."""
    params = LocalUnitaryParams.identity(3)
    assert np.allclose(build_unitary(params), np.eye(8))
    assert not params.has_permutation
    assert overlap(conjugate_state(params, w3()), w3()) == pytest.approx(1.0)


def test_params_validation():
    """Test shape, finiteness and permutation checks."""
    with pytest.raises(DimensionError):
        LocalUnitaryParams(2, np.zeros((3, 3)))
    with pytest.raises(StateError):
        LocalUnitaryParams(1, np.array([[np.nan, 0, 0]]))
    with pytest.raises(StateError):
        LocalUnitaryParams(2, np.zeros((2, 3)), (0, 0))
    with pytest.raises(DimensionError):
        LocalUnitaryParams.from_flat([0.0, 1.0])


def test_rotation_of_w_state():
    """Test that theta = pi/2 rotations turn <IZZ> of W3 into 2/3."""
    angles = np.tile([0.0, np.pi / 2, 0.0], (3, 1))
    rotated = conjugate_state(LocalUnitaryParams(3, angles), w3())
    assert expectation(PauliString.from_label("IZZ"), rotated) == pytest.approx(2 / 3)


def test_rotate_vector_matches_dense_unitary():
    """Test the tensor contraction against the Kronecker product."""
    params = random_params(4, seed=7)
    vec = cluster4().vector()
    assert np.allclose(rotate_vector(vec, params.angles), build_unitary(params) @ vec)


def test_rotate_vector_beyond_single_contraction():
    """Test the per-qubit contraction path on a seven-qubit product state."""
    angles = random_params(7, seed=11).angles
    singles = local_unitaries(angles)
    vec = np.zeros(1 << 7, dtype=complex)
    vec[0] = 1.0
    expected = np.ones(1, dtype=complex)
    for u in singles:
        expected = np.kron(expected, u[:, 0])
    assert np.allclose(rotate_vector(vec, angles), expected)
    perm = (6, 0, 5, 1, 4, 2, 3)
    moved = expected.reshape([2] * 7).transpose(perm).reshape(-1)
    assert np.allclose(rotate_vector(vec, angles, perm), moved)


def test_permutation_matches_permute_qubits():
    """Test that the permutation matrix and permute_qubits agree."""
    perm = (1, 3, 0, 2)
    vec = cluster4().vector()
    assert np.allclose(permutation_matrix(perm) @ vec, permute_qubits(cluster4(), perm).vector())
    params = LocalUnitaryParams(4, random_params(4, seed=2).angles, perm)
    direct = build_unitary(params) @ vec
    assert np.allclose(rotate_vector(vec, params.angles, perm), direct)
    assert overlap(conjugate_state(params, cluster4()), DenseState.pure(direct, normalize=True)) == pytest.approx(1.0)


def test_conjugate_mixed_state():
    """Test U rho U^dagger on a noisy state."""
    params = random_params(3, seed=4)
    noisy = white_noise(ghz(3), 0.6)
    rotated = conjugate_state(params, noisy)
    pure_rotated = conjugate_state(params, ghz(3))
    assert np.allclose(rotated.density_matrix(), white_noise(pure_rotated, 0.6).density_matrix())
    with pytest.raises(DimensionError):
        conjugate_state(params, ghz(4))


def test_random_params_are_seeded():
    """Test seeded determinism and the angle range."""
    a, b = random_params(3, seed=9), random_params(3, seed=9)
    assert np.array_equal(a.angles, b.angles)
    assert np.all((a.angles >= 0) & (a.angles < 2 * np.pi))


def test_params_dict_roundtrip():
    """Test the JSON form, with a 1-based permutation."""
    params = LocalUnitaryParams(3, random_params(3, seed=1).angles, (2, 0, 1))
    obj = params.to_dict()
    assert obj["perm"] == [3, 1, 2]
    back = LocalUnitaryParams.from_dict(obj)
    assert back.perm == (2, 0, 1)
    assert np.allclose(back.angles, params.angles)
    with pytest.raises(DataFormatError):
        LocalUnitaryParams.from_dict({"perm": [1]})
