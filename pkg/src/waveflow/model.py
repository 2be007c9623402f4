"""Waveguide-array descriptions and the joint polarization/path Hamiltonians.

An array of M evanescently coupled single-mode guides carries one photon.
The photon's polarization is the open system (a qubit in the {H, V} basis);
its path, i.e. which guide it occupies, is the environment. Per polarization
the array is a tight-binding chain: guide m has propagation constant
beta_m and couples to its nearest neighbours with rate kappa_{m,m+1}. All
rates are in inverse length; the evolution parameter t is the propagation
length along the chip.

The polarization-conserving joint Hamiltonian is

    H0 = P_H (x) G_H + P_V (x) G_V,

with G_lambda the M x M tridiagonal chain generator for polarization
lambda. A per-guide polarization rotation (rates alpha_x, alpha_y around
the Bloch x/y axes) adds

    H1 = H0 + sum_m (alpha_x[m] sigma_x + alpha_y[m] sigma_y) (x) P_m,

which breaks the block structure and lets polarization and path exchange
arbitrary information.

Joint indices are system-major: basis state (s, m) -> s * M + m, s = 0
for H, s = 1 for V.
"""

from __future__ import annotations

from dataclasses import dataclass, fields

import numpy as np

from .errors import ConfigInvalid
from .linalg import tensor
from .quantum import PAULI_X, PAULI_Y

PROJ_H = np.array([[1, 0], [0, 0]], dtype=complex)
PROJ_V = np.array([[0, 0], [0, 1]], dtype=complex)


@dataclass(frozen=True)
class ArrayConfig:
    """Full description of a waveguide array.

    beta_* have one entry per guide, kappa_* one entry per adjacent pair
    (so length M - 1), alpha_* one entry per guide. Couplings are
    symmetric: the entry for pair (m, m+1) acts in both hopping directions.
    An all-zero alpha configuration is polarization conserving.
    """

    beta_h: np.ndarray
    beta_v: np.ndarray
    kappa_h: np.ndarray
    kappa_v: np.ndarray
    alpha_x: np.ndarray
    alpha_y: np.ndarray

    def __post_init__(self):
        converted = {}
        for f in fields(self):
            raw = getattr(self, f.name)
            arr = np.atleast_1d(np.asarray(raw, dtype=float))
            if arr.ndim != 1:
                raise ConfigInvalid(f"{f.name} must be a flat list of reals")
            if not np.all(np.isfinite(arr)):
                raise ConfigInvalid(f"{f.name} contains non-finite entries")
            arr = arr.copy()
            arr.setflags(write=False)
            converted[f.name] = arr
        m = converted["beta_h"].size
        if m < 1:
            raise ConfigInvalid("at least one guide is required")
        expected = {
            "beta_h": m, "beta_v": m,
            "kappa_h": m - 1, "kappa_v": m - 1,
            "alpha_x": m, "alpha_y": m,
        }
        for name, n in expected.items():
            if converted[name].size != n:
                raise ConfigInvalid(
                    f"{name} has {converted[name].size} entries, expected {n} "
                    f"for {m} guides"
                )
        for name, arr in converted.items():
            object.__setattr__(self, name, arr)

    @property
    def num_guides(self) -> int:
        return self.beta_h.size

    @property
    def is_diagonal(self) -> bool:
        """True when all rotation rates vanish (polarization-conserving H0)."""
        return not (np.any(self.alpha_x) or np.any(self.alpha_y))

    @classmethod
    def uniform(cls, num_guides, beta_h, beta_v, kappa_h, kappa_v,
                alpha_x=0.0, alpha_y=0.0) -> "ArrayConfig":
        """Array with identical per-guide constants; scalars are broadcast."""
        m = int(num_guides)
        if m < 1:
            raise ConfigInvalid("at least one guide is required")

        def spread(value, n):
            arr = np.atleast_1d(np.asarray(value, dtype=float))
            if arr.size == 1:
                return np.full(n, arr[0])
            return arr

        return cls(
            beta_h=spread(beta_h, m),
            beta_v=spread(beta_v, m),
            kappa_h=spread(kappa_h, m - 1) if m > 1 else np.zeros(0),
            kappa_v=spread(kappa_v, m - 1) if m > 1 else np.zeros(0),
            alpha_x=spread(alpha_x, m),
            alpha_y=spread(alpha_y, m),
        )


def effective_env_generator(cfg: ArrayConfig, pol: str) -> np.ndarray:
    """M x M tridiagonal chain generator for one polarization.

    Diagonal holds the propagation constants, off-diagonals the symmetric
    nearest-neighbour couplings. Rotation rates are not part of this
    generator; it describes the polarization-conserving sector only.
    """
    if pol == "H":
        beta, kappa = cfg.beta_h, cfg.kappa_h
    elif pol == "V":
        beta, kappa = cfg.beta_v, cfg.kappa_v
    else:
        raise ConfigInvalid(f"polarization must be 'H' or 'V', got {pol!r}")
    gen = np.diag(beta.astype(complex))
    m = cfg.num_guides
    idx = np.arange(m - 1)
    gen[idx, idx + 1] = kappa
    gen[idx + 1, idx] = kappa
    return gen


def build_h0(cfg: ArrayConfig) -> np.ndarray:
    """Polarization-conserving joint Hamiltonian P_H(x)G_H + P_V(x)G_V.

    Ignores any rotation rates in the config. The result commutes with
    sigma_z (x) identity by construction.
    """
    return tensor(PROJ_H, effective_env_generator(cfg, "H")) + tensor(
        PROJ_V, effective_env_generator(cfg, "V")
    )


def build_h1(cfg: ArrayConfig) -> np.ndarray:
    """Joint Hamiltonian including per-guide polarization rotations.

    Equals build_h0(cfg) plus sigma_x (x) diag(alpha_x) and
    sigma_y (x) diag(alpha_y). With any nonzero rotation rate the result
    no longer commutes with sigma_z (x) identity.
    """
    h = build_h0(cfg)
    if np.any(cfg.alpha_x):
        h = h + tensor(PAULI_X, np.diag(cfg.alpha_x.astype(complex)))
    if np.any(cfg.alpha_y):
        h = h + tensor(PAULI_Y, np.diag(cfg.alpha_y.astype(complex)))
    return h
