"""Qubit states, Bloch parametrizations, test-state pairs, trace distance.

The system qubit lives in the {H, V} polarization basis with H at index 0.
A pure state is parametrized by polar angles as

    |psi> = cos(theta) |H> + exp(i phi) sin(theta) |V>,

theta in [0, pi/2], phi in [0, 2 pi), and its Bloch vector is

    T_x = cos(phi) sin(2 theta),  T_y = sin(phi) sin(2 theta),
    T_z = cos(2 theta).

Global phase is never represented; every quantity in this package is
invariant under it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NonPhysicalBloch
from .linalg import trace_norm

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)

# Bloch-ball tolerance: |T| may exceed 1 by at most this much.
BLOCH_NORM_ATOL = 1e-12


@dataclass(frozen=True)
class PureQubitState:
    """Pure polarization state given by Bloch polar angles (theta, phi)."""

    theta: float
    phi: float = 0.0

    def ket(self) -> np.ndarray:
        return np.array(
            [math.cos(self.theta), np.exp(1j * self.phi) * math.sin(self.theta)],
            dtype=complex,
        )

    def bloch(self) -> np.ndarray:
        return angles_to_bloch(self)

    def density(self) -> np.ndarray:
        return bloch_to_density(self.bloch())


@dataclass(frozen=True)
class TestStatePair:
    """A labeled pair of pure states used to trace one type of information."""

    label: str
    state1: PureQubitState
    state2: PureQubitState

    def bloch_vectors(self) -> tuple[np.ndarray, np.ndarray]:
        return self.state1.bloch(), self.state2.bloch()

    def is_orthogonal(self, atol: float = 1e-10) -> bool:
        return abs(np.vdot(self.state1.ket(), self.state2.ket())) <= atol


def angles_to_bloch(state: PureQubitState) -> np.ndarray:
    """Bloch vector of a pure state; always unit norm."""
    two_theta = 2.0 * state.theta
    s = math.sin(two_theta)
    return np.array(
        [math.cos(state.phi) * s, math.sin(state.phi) * s, math.cos(two_theta)]
    )


def bloch_to_density(vec) -> np.ndarray:
    """Density matrix (1 + T . sigma) / 2 of a Bloch vector inside the ball."""
    v = np.asarray(vec, dtype=float)
    if v.shape != (3,):
        raise NonPhysicalBloch(f"Bloch vector must have 3 components, got shape {v.shape}")
    norm_sq = float(v @ v)
    if norm_sq > 1.0 + 2 * BLOCH_NORM_ATOL:
        raise NonPhysicalBloch(f"Bloch vector norm {math.sqrt(norm_sq):.12f} exceeds 1")
    return 0.5 * (np.eye(2, dtype=complex) + v[0] * PAULI_X + v[1] * PAULI_Y + v[2] * PAULI_Z)


def density_to_bloch(rho) -> np.ndarray:
    """Bloch vector of a 2x2 density matrix: T_k = tr(sigma_k rho)."""
    r = np.asarray(rho, dtype=complex)
    if r.shape != (2, 2):
        raise DimensionMismatch(f"expected a 2x2 density matrix, got shape {r.shape}")
    return np.array(
        [
            np.trace(PAULI_X @ r).real,
            np.trace(PAULI_Y @ r).real,
            np.trace(PAULI_Z @ r).real,
        ]
    )


def trace_distance(a, b) -> float:
    """Half the trace norm of (a - b); optimal single-shot distinguishability."""
    ma = np.asarray(a, dtype=complex)
    mb = np.asarray(b, dtype=complex)
    if ma.shape != mb.shape:
        raise DimensionMismatch(f"shape mismatch {ma.shape} vs {mb.shape}")
    return 0.5 * trace_norm(ma - mb)


def standard_test_pairs() -> list[TestStatePair]:
    """The three canonical orthogonal pairs: poles, equator, and tilted.

    "HV" are the propagation eigenstates (Bloch +-z). "PM" is the diagonal
    basis (|H> +- |V>)/sqrt(2) on the +-x axis, the most decoherence
    sensitive choice. "psi" is the intermediate pair at theta = pi/8 and
    its antipode, whose Bloch vectors sit at (+-1, 0, +-1)/sqrt(2).
    """
    return [
        TestStatePair("HV", PureQubitState(0.0), PureQubitState(math.pi / 2)),
        TestStatePair(
            "PM", PureQubitState(math.pi / 4, 0.0), PureQubitState(math.pi / 4, math.pi)
        ),
        TestStatePair(
            "psi",
            PureQubitState(math.pi / 8, 0.0),
            PureQubitState(3 * math.pi / 8, math.pi),
        ),
    ]


def pair_from_direction(direction, label: str = "") -> TestStatePair:
    """Orthogonal pair (+n, -n) from a unit Bloch direction n."""
    n = np.asarray(direction, dtype=float)
    norm = np.linalg.norm(n)
    if norm == 0:
        raise NonPhysicalBloch("direction must be nonzero")
    n = n / norm
    theta1 = 0.5 * math.acos(np.clip(n[2], -1.0, 1.0))
    phi1 = math.atan2(n[1], n[0]) % (2 * math.pi)
    theta2 = 0.5 * math.acos(np.clip(-n[2], -1.0, 1.0))
    phi2 = math.atan2(-n[1], -n[0]) % (2 * math.pi)
    return TestStatePair(
        label or f"dir({n[0]:+.3f},{n[1]:+.3f},{n[2]:+.3f})",
        PureQubitState(theta1, phi1),
        PureQubitState(theta2, phi2),
    )


def guide_ket(num_guides: int, guide: int) -> np.ndarray:
    """Environment ket with all amplitude in one guide (1-based index)."""
    if not 1 <= guide <= num_guides:
        raise DimensionMismatch(
            f"guide index {guide} outside 1..{num_guides}"
        )
    ket = np.zeros(num_guides, dtype=complex)
    ket[guide - 1] = 1.0
    return ket


def center_guide_ket(num_guides: int) -> np.ndarray:
    """Environment ket for the central guide (lower median for even counts)."""
    return guide_ket(num_guides, (num_guides + 1) // 2)


def env_ket(amplitudes) -> np.ndarray:
    """Normalize an amplitude list into an environment ket."""
    a = np.asarray(amplitudes, dtype=complex).ravel()
    norm = np.linalg.norm(a)
    if a.size == 0 or norm == 0:
        raise ValueError("environment amplitudes must not be all zero")
    return a / norm
