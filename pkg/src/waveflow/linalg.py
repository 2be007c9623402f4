"""Dense complex linear algebra kernel for small system/environment problems.

Matrices are plain complex numpy arrays; there is no wrapper type. The joint
index convention is system-major everywhere: ``tensor(a, b)`` puts factor
``a`` on the slow index, so the joint basis state (s, e) sits at row
``s * dim_e + e``, and every partial trace in this package assumes that
ordering.

All generators in this package are Hermitian, so matrix exponentials go
through the eigendecomposition, ``exp(i t H) = V diag(exp(i t w)) V^dag``.
That keeps propagators unitary to roundoff, which a Pade or
scaling-and-squaring scheme would not guarantee.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import ConvergenceFailure, DimensionMismatch, NonHermitianInput

# Absolute per-entry tolerance for Hermiticity checks; matrices here are
# small (<= ~40 x 40) and well conditioned.
HERMITICITY_ATOL = 1e-12


class Eigensystem(NamedTuple):
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending."""

    eigenvalues: np.ndarray  # real, shape (n,), sorted ascending
    eigenvectors: np.ndarray  # complex, shape (n, n), orthonormal columns


def as_hermitian(m, atol: float = HERMITICITY_ATOL) -> np.ndarray:
    """Validate that ``m`` is a finite square Hermitian matrix.

    Returns the matrix as a complex array. Raises NonHermitianInput when any
    entry of ``m - m^dag`` exceeds ``atol`` in magnitude, or when the matrix
    contains NaN/Inf.
    """
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NonHermitianInput(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a.view(float))):
        raise NonHermitianInput("matrix contains non-finite entries")
    defect = np.max(np.abs(a - a.conj().T)) if a.size else 0.0
    if defect > atol:
        raise NonHermitianInput(
            f"matrix is not Hermitian: max |A - A^dag| = {defect:.3e} > {atol:.1e}"
        )
    return a


def hermitian_eig(m) -> Eigensystem:
    """Eigendecomposition of a Hermitian matrix.

    Eigenvalues come back sorted ascending; eigenvector columns are
    orthonormal and satisfy A v_k = w_k v_k.
    """
    a = as_hermitian(m)
    try:
        w, v = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(f"eigendecomposition failed: {exc}") from exc
    return Eigensystem(eigenvalues=w, eigenvectors=v)


def expi(m, t: float) -> np.ndarray:
    """exp(+i t M) for Hermitian M, via the eigendecomposition.

    The positive sign in the exponent is the propagation convention used
    throughout this package. The result is unitary to roundoff.
    """
    w, v = hermitian_eig(m)
    phases = np.exp(1j * t * w)
    return (v * phases) @ v.conj().T


def trace_norm(m) -> float:
    """Trace norm of a Hermitian matrix: the sum of |eigenvalues|."""
    a = as_hermitian(m)
    try:
        w = np.linalg.eigvalsh(a)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(f"eigendecomposition failed: {exc}") from exc
    return float(np.sum(np.abs(w)))


def tensor(a, b) -> np.ndarray:
    """Kronecker product with the first factor on the slow (system) index."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def partial_trace(joint, dims: tuple[int, int], keep: str) -> np.ndarray:
    """Trace out one tensor factor of a (dim_s * dim_e) square matrix.

    ``dims`` is (dim_system, dim_environment) in the system-major ordering;
    ``keep`` selects the surviving factor, "system" or "environment". The
    result has the same trace as the input and is Hermitian whenever the
    input is.
    """
    dim_s, dim_e = dims
    a = np.asarray(joint, dtype=complex)
    if dim_s < 1 or dim_e < 1:
        raise DimensionMismatch(f"factor dimensions must be >= 1, got {dims}")
    n = dim_s * dim_e
    if a.shape != (n, n):
        raise DimensionMismatch(
            f"joint matrix has shape {a.shape}, expected ({n}, {n}) for dims {dims}"
        )
    blocks = a.reshape(dim_s, dim_e, dim_s, dim_e)
    if keep == "system":
        return np.einsum("sete->st", blocks)
    if keep == "environment":
        return np.einsum("sesf->ef", blocks)
    raise DimensionMismatch(f"keep must be 'system' or 'environment', got {keep!r}")
