import numpy as np
import pytest

from waveflow.errors import DimensionMismatch, NonHermitianInput
from waveflow.linalg import (
    expi,
    hermitian_eig,
    partial_trace,
    tensor,
    trace_norm,
)


def random_hermitian(rng, dim):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return a + a.conj().T


def test_eig_identity():
    eig = hermitian_eig(np.eye(3))
    assert np.allclose(eig.eigenvalues, [1, 1, 1])
    v = eig.eigenvectors
    assert np.max(np.abs(v.conj().T @ v - np.eye(3))) < 1e-10


def test_eig_diagonal():
    eig = hermitian_eig(np.diag([2.0, -1.0]))
    assert np.allclose(eig.eigenvalues, [-1.0, 2.0])
    # standard-basis eigenvectors up to phase
    assert abs(abs(eig.eigenvectors[1, 0]) - 1.0) < 1e-12
    assert abs(abs(eig.eigenvectors[0, 1]) - 1.0) < 1e-12


def test_eig_coupler():
    # hand diagonalization of [[0, k], [k, 0]], k = 1: eigenpairs
    # (-1, (1, -1)/sqrt(2)) and (+1, (1, 1)/sqrt(2))
    eig = hermitian_eig(np.array([[0.0, 1.0], [1.0, 0.0]]))
    assert np.allclose(eig.eigenvalues, [-1.0, 1.0])
    minus = np.array([1.0, -1.0]) / np.sqrt(2)
    plus = np.array([1.0, 1.0]) / np.sqrt(2)
    assert abs(abs(np.vdot(minus, eig.eigenvectors[:, 0])) - 1.0) < 1e-12
    assert abs(abs(np.vdot(plus, eig.eigenvectors[:, 1])) - 1.0) < 1e-12


def test_eig_reconstruction_random():
    rng = np.random.default_rng(11)
    for dim in (1, 2, 5, 12):
        m = random_hermitian(rng, dim)
        w, v = hermitian_eig(m)
        assert np.all(np.diff(w) >= 0)
        assert np.max(np.abs((v * w) @ v.conj().T - m)) < 1e-9
        assert np.max(np.abs(v.conj().T @ v - np.eye(dim))) < 1e-10
        for k in range(dim):
            assert np.max(np.abs(m @ v[:, k] - w[k] * v[:, k])) < 1e-9


def test_eig_rejects_non_hermitian():
    with pytest.raises(NonHermitianInput):
        hermitian_eig(np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(NonHermitianInput):
        hermitian_eig(np.array([[np.nan, 0.0], [0.0, 1.0]]))
    with pytest.raises(NonHermitianInput):
        hermitian_eig(np.zeros((2, 3)))


def test_expi_zero_time_is_identity():
    rng = np.random.default_rng(3)
    m = random_hermitian(rng, 6)
    assert np.max(np.abs(expi(m, 0.0) - np.eye(6))) < 1e-12


def test_expi_diagonal_generator():
    beta = np.array([0.3, -1.2, 2.0])
    t = 0.77
    u = expi(np.diag(beta), t)
    assert np.allclose(u, np.diag(np.exp(1j * beta * t)), atol=1e-12)


def test_expi_coupler_closed_form():
    # exp(i t k X) = cos(kt) 1 + i sin(kt) X
    k, t = 1.3, 0.9
    u = expi(np.array([[0.0, k], [k, 0.0]]), t)
    expected = np.array(
        [
            [np.cos(k * t), 1j * np.sin(k * t)],
            [1j * np.sin(k * t), np.cos(k * t)],
        ]
    )
    assert np.max(np.abs(u - expected)) < 1e-12


def test_expi_unitary_and_inverse():
    rng = np.random.default_rng(5)
    for _ in range(20):
        dim = int(rng.integers(1, 13))
        m = random_hermitian(rng, dim)
        t = float(rng.uniform(-5, 5))
        u = expi(m, t)
        assert np.max(np.abs(u.conj().T @ u - np.eye(dim))) < 1e-10
        assert np.max(np.abs(u @ expi(m, -t) - np.eye(dim))) < 1e-10


def test_expi_group_property():
    rng = np.random.default_rng(6)
    for _ in range(20):
        dim = int(rng.integers(1, 13))
        m = random_hermitian(rng, dim)
        t1, t2 = rng.uniform(-3, 3, size=2)
        lhs = expi(m, t1 + t2)
        rhs = expi(m, t1) @ expi(m, t2)
        assert np.max(np.abs(lhs - rhs)) < 1e-9


def test_trace_norm_examples():
    assert trace_norm(np.zeros((3, 3))) == 0.0
    assert abs(trace_norm(np.diag([0.5, -0.5])) - 1.0) < 1e-14
    # difference of orthogonal pure projectors has eigenvalues +-1
    p1 = np.diag([1.0, 0.0])
    p2 = np.diag([0.0, 1.0])
    assert abs(trace_norm(p1 - p2) - 2.0) < 1e-14


def test_trace_norm_bounds_trace():
    rng = np.random.default_rng(7)
    for _ in range(30):
        m = random_hermitian(rng, int(rng.integers(1, 9)))
        assert trace_norm(m) >= abs(np.trace(m)) - 1e-12


def test_tensor_identity():
    assert np.array_equal(tensor(np.eye(2), np.eye(5)), np.eye(10))


def test_tensor_projector_placement():
    # |H><H| (x) P_m has its single entry at joint index m (system-major)
    proj_h = np.diag([1.0, 0.0])
    for m_dim, m in ((5, 2), (3, 0)):
        p_m = np.zeros((m_dim, m_dim))
        p_m[m, m] = 1.0
        joint = tensor(proj_h, p_m)
        expected = np.zeros((2 * m_dim, 2 * m_dim))
        expected[m, m] = 1.0
        assert np.array_equal(joint, expected)


def test_tensor_sigma_z_identity():
    sz = np.diag([1.0, -1.0])
    assert np.array_equal(tensor(sz, np.eye(2)), np.diag([1.0, 1.0, -1.0, -1.0]))


def test_partial_trace_product_state():
    rng = np.random.default_rng(8)
    for ds, de in ((2, 3), (2, 5), (3, 4)):
        a = random_hermitian(rng, ds)
        a = a @ a.conj().T  # positive
        a /= np.trace(a).real
        b = random_hermitian(rng, de)
        b = b @ b.conj().T
        b /= np.trace(b).real
        joint = tensor(a, b)
        assert np.max(np.abs(partial_trace(joint, (ds, de), "system") - a)) < 1e-12
        assert np.max(np.abs(partial_trace(joint, (ds, de), "environment") - b)) < 1e-12


def test_partial_trace_bell_state():
    # direct index contraction of the maximally entangled 2x2 projector
    bell = np.zeros(4, dtype=complex)
    bell[0] = bell[3] = 1 / np.sqrt(2)
    rho = np.outer(bell, bell.conj())
    reduced = partial_trace(rho, (2, 2), "system")
    assert np.max(np.abs(reduced - np.eye(2) / 2)) < 1e-12


def test_partial_trace_preserves_trace_and_hermiticity():
    rng = np.random.default_rng(9)
    for _ in range(10):
        ds, de = int(rng.integers(2, 4)), int(rng.integers(2, 6))
        m = random_hermitian(rng, ds * de)
        m = m @ m.conj().T
        m /= np.trace(m).real
        for keep in ("system", "environment"):
            red = partial_trace(m, (ds, de), keep)
            assert abs(np.trace(red) - np.trace(m)) < 1e-12
            assert np.max(np.abs(red - red.conj().T)) < 1e-12


def test_partial_trace_recovers_factor_scaled():
    rng = np.random.default_rng(10)
    for _ in range(10):
        ds, de = int(rng.integers(1, 5)), int(rng.integers(1, 6))
        a = random_hermitian(rng, ds)
        a = a @ a.conj().T
        b = random_hermitian(rng, de)
        b = b @ b.conj().T
        joint = tensor(a, b)
        got = partial_trace(joint, (ds, de), "system")
        assert np.max(np.abs(got - a * np.trace(b))) < 1e-12


def test_partial_trace_dimension_errors():
    with pytest.raises(DimensionMismatch):
        partial_trace(np.eye(6), (2, 2), "system")
    with pytest.raises(DimensionMismatch):
        partial_trace(np.eye(4), (2, 2), "both")
    with pytest.raises(DimensionMismatch):
        partial_trace(np.eye(4), (0, 4), "system")
