import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from seqchsh.linalg import (
    ID2,
    ID4,
    NumericalError,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    dagger,
    herm_eig,
    kron,
    partial_trace_second,
    rot_sigma2,
    sqrt_psd,
    xz_observable,
)


def kron_by_index_loop(a, b):
    # independent brute-force oracle: (a x b)[2i+k][2j+l] = a[i][j] * b[k][l]
    out = np.zeros((4, 4), dtype=complex)
    for i in range(2):
        for j in range(2):
            for k in range(2):
                for l in range(2):
                    out[2 * i + k, 2 * j + l] = a[i, j] * b[k, l]
    return out


def random_unitary(rng, n=2):
    g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def test_pauli_constants_hermitian():
    for m in (ID2, ID4, PAULI_X, PAULI_Y, PAULI_Z):
        assert np.max(np.abs(m - dagger(m))) <= 1e-12


def test_kron_identity():
    assert_allclose(kron(ID2, ID2), ID4, atol=0)


def test_kron_diagonal():
    assert_allclose(kron(PAULI_Z, PAULI_Z), np.diag([1, -1, -1, 1]).astype(complex), atol=0)


def test_kron_matches_index_loop():
    assert_allclose(kron(PAULI_X, PAULI_Y), kron_by_index_loop(PAULI_X, PAULI_Y), atol=0)
    rng = np.random.default_rng(7)
    for _ in range(10):
        a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        b = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        assert_allclose(kron(a, b), kron_by_index_loop(a, b), atol=1e-15)


def test_kron_rejects_bad_dims():
    with pytest.raises(ValueError):
        kron(np.eye(3), np.eye(2))
    with pytest.raises(ValueError):
        kron(np.eye(2), np.eye(4))


def test_kron_trace_multiplicative():
    rng = np.random.default_rng(3)
    for _ in range(20):
        a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        b = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        assert abs(np.trace(kron(a, b)) - np.trace(a) * np.trace(b)) <= 1e-12


def test_partial_trace_factorized():
    rng = np.random.default_rng(11)
    a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    b = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    assert_allclose(partial_trace_second(kron(a, b)), a * np.trace(b), atol=1e-14)


def test_partial_trace_bell_marginal():
    ket = np.zeros(4, dtype=complex)
    ket[0] = ket[3] = 1 / math.sqrt(2)
    rho = np.outer(ket, ket.conj())
    assert_allclose(partial_trace_second(rho), ID2 / 2, atol=1e-15)


def test_partial_trace_schmidt_weights():
    phi = math.radians(30)
    ket = np.zeros(4, dtype=complex)
    ket[0] = math.cos(phi)
    ket[3] = math.sin(phi)
    rho = np.outer(ket, ket.conj())
    expected = np.diag([math.cos(phi) ** 2, math.sin(phi) ** 2]).astype(complex)
    assert_allclose(partial_trace_second(rho), expected, atol=1e-15)


def test_partial_trace_rejects_bad_dims():
    with pytest.raises(ValueError):
        partial_trace_second(np.eye(2))


def test_sqrt_psd_identity_and_projector():
    assert_allclose(sqrt_psd(ID2), ID2, atol=1e-12)
    proj = np.array([[1, 1], [1, 1]], dtype=complex) / 2
    assert_allclose(sqrt_psd(proj), proj, atol=1e-12)


def test_sqrt_psd_diagonal():
    assert_allclose(sqrt_psd(np.diag([4.0, 9.0]).astype(complex)), np.diag([2.0, 3.0]), atol=1e-12)


def test_sqrt_psd_squares_back():
    rng = np.random.default_rng(5)
    for _ in range(50):
        v = random_unitary(rng)
        m = v @ np.diag(rng.uniform(0, 3, size=2)) @ dagger(v)
        m = (m + dagger(m)) / 2
        root = sqrt_psd(m)
        assert np.max(np.abs(root @ root - m)) <= 1e-10
        assert np.max(np.abs(root - dagger(root))) <= 1e-10


def test_sqrt_psd_clamps_tiny_negative():
    assert_allclose(sqrt_psd(np.diag([1.0, -5e-10]).astype(complex)), np.diag([1.0, 0.0]), atol=1e-12)


def test_sqrt_psd_rejects_negative():
    with pytest.raises(NumericalError):
        sqrt_psd(np.diag([1.0, -1e-6]).astype(complex))


def test_rot_sigma2_special_values():
    assert_allclose(rot_sigma2(0.0), ID2, atol=0)
    assert_allclose(rot_sigma2(math.pi / 2), 1j * PAULI_Y, atol=1e-15)


def test_rot_sigma2_inverse_and_additivity():
    rng = np.random.default_rng(9)
    for _ in range(20):
        a, b = rng.uniform(-math.pi, math.pi, size=2)
        assert np.max(np.abs(rot_sigma2(a) @ rot_sigma2(-a) - ID2)) <= 1e-12
        assert np.max(np.abs(rot_sigma2(a) @ rot_sigma2(b) - rot_sigma2(a + b))) <= 1e-12


def test_rot_sigma2_unitary():
    rng = np.random.default_rng(13)
    for _ in range(20):
        u = rot_sigma2(rng.uniform(-10, 10))
        assert np.max(np.abs(u @ dagger(u) - ID2)) <= 1e-12


def test_xz_observable_special_values():
    assert_allclose(xz_observable(0.0), PAULI_X, atol=0)
    assert_allclose(xz_observable(math.pi / 2), PAULI_Z, atol=1e-15)


def test_xz_observable_squares_to_identity():
    rng = np.random.default_rng(17)
    for _ in range(50):
        o = xz_observable(rng.uniform(-math.pi, math.pi))
        assert np.max(np.abs(o @ o - ID2)) <= 1e-12


def test_xz_observable_eigenvalues():
    rng = np.random.default_rng(19)
    for _ in range(20):
        w, _ = herm_eig(xz_observable(rng.uniform(0, 2 * math.pi)))
        assert_allclose(w, [-1.0, 1.0], atol=1e-10)


def test_herm_eig_invariants():
    rng = np.random.default_rng(23)
    for dim in (2, 4):
        for _ in range(20):
            g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
            m = (g + dagger(g)) / 2
            w, v = herm_eig(m)
            assert np.all(np.diff(w) >= -1e-12)
            for k in range(dim):
                assert np.max(np.abs(m @ v[:, k] - w[k] * v[:, k])) <= 1e-10
            gram = dagger(v) @ v
            assert np.max(np.abs(np.diag(gram) - 1)) <= 1e-12
            off = gram - np.diag(np.diag(gram))
            assert np.max(np.abs(off)) <= 1e-10


def test_herm_eig_rejects_non_hermitian():
    with pytest.raises(ValueError):
        herm_eig(np.array([[0, 1], [0, 0]], dtype=complex))
