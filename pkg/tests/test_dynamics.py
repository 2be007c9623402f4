import math

import numpy as np
import pytest

from waveflow.dynamics import (
    Propagator,
    closed_form_distances,
    evolve,
    gamma,
    gamma_sweep,
    intensity_profile,
    joint_product_ket,
    reduced_environment,
    reduced_system,
    simulate_pair,
)
from waveflow.errors import DimensionMismatch, InvalidGamma, NonDiagonalConfig
from waveflow.linalg import expi, partial_trace, tensor
from waveflow.model import ArrayConfig, build_h0
from waveflow.quantum import (
    PureQubitState,
    bloch_to_density,
    guide_ket,
    standard_test_pairs,
    trace_distance,
)

SQRT_HALF = 1 / math.sqrt(2)


def random_diagonal_config(rng, m):
    return ArrayConfig(
        beta_h=rng.uniform(-2, 2, m),
        beta_v=rng.uniform(-2, 2, m),
        kappa_h=rng.uniform(-2, 2, max(m - 1, 0)),
        kappa_v=rng.uniform(-2, 2, max(m - 1, 0)),
        alpha_x=np.zeros(m),
        alpha_y=np.zeros(m),
    )


def random_env_ket(rng, m):
    phi = rng.normal(size=m) + 1j * rng.normal(size=m)
    return phi / np.linalg.norm(phi)


def brute_force_distances(cfg, phi, bloch1, bloch2, t):
    """Oracle: conjugate the joint density matrix with exp(itH), then
    partial-trace and take trace distances. Built only from the linalg
    and quantum primitives, independent of the closed forms."""
    u = expi(build_h0(cfg), t)
    m = cfg.num_guides
    p_phi = np.outer(phi, phi.conj())
    reduced = []
    for vec in (bloch1, bloch2):
        joint = tensor(bloch_to_density(vec), p_phi)
        evolved = u @ joint @ u.conj().T
        reduced.append(
            (
                partial_trace(evolved, (2, m), "system"),
                partial_trace(evolved, (2, m), "environment"),
            )
        )
    d_s = trace_distance(reduced[0][0], reduced[1][0])
    d_e = trace_distance(reduced[0][1], reduced[1][1])
    return d_s, d_e


# ---------------------------------------------------------------------------
# evolve / reduced states


def test_evolve_zero_time():
    cfg = ArrayConfig.uniform(3, 0.5, 0.7, 1.0, 2.0)
    prop = Propagator.from_config(cfg)
    ket = joint_product_ket(PureQubitState(0.3, 0.4).ket(), guide_ket(3, 2))
    assert np.max(np.abs(evolve(prop, ket, 0.0) - ket)) < 1e-12


def test_evolve_uncoupled_guides_keep_populations():
    cfg = ArrayConfig.uniform(4, beta_h=1.0, beta_v=-0.5, kappa_h=0.0, kappa_v=0.0)
    prop = Propagator.from_config(cfg)
    ket = joint_product_ket(PureQubitState(0.9, 1.1).ket(), guide_ket(4, 2))
    for t in (0.3, 1.7, 6.1):
        out = evolve(prop, ket, t)
        assert np.max(np.abs(np.abs(out) - np.abs(ket))) < 1e-12


def test_evolve_two_guide_coupler_population():
    # 2-guide coupler: starting in guide 1, the guide-2 population is
    # sin(c t)^2 for coupling c
    c = 0.8
    cfg = ArrayConfig.uniform(2, 0.0, 0.0, kappa_h=c, kappa_v=0.0)
    prop = Propagator.from_config(cfg)
    ket = joint_product_ket(np.array([1.0, 0.0]), guide_ket(2, 1))
    for t in (0.0, 0.4, 1.3, 2.9):
        out = evolve(prop, ket, t)
        assert abs(abs(out[1]) ** 2 - math.sin(c * t) ** 2) < 1e-12
        assert abs(np.linalg.norm(out) - 1.0) < 1e-10


def test_reduced_system_polarization_eigenstate_stays_pure():
    cfg = ArrayConfig.uniform(5, 0.1, 0.9, 1.0, 2.0)
    prop = Propagator.from_config(cfg)
    ket = joint_product_ket(np.array([1.0, 0.0]), guide_ket(5, 3))
    for t in (0.5, 2.0, 7.7):
        rho = reduced_system(evolve(prop, ket, t))
        assert np.max(np.abs(rho - np.diag([1.0, 0.0]))) < 1e-12


def test_reduced_states_at_zero_time():
    phi = guide_ket(4, 2)
    state = PureQubitState(math.pi / 4)
    ket = joint_product_ket(state.ket(), phi)
    assert np.max(np.abs(reduced_system(ket) - state.density())) < 1e-12
    assert np.max(np.abs(reduced_environment(ket) - np.outer(phi, phi.conj()))) < 1e-12


def test_reduced_system_coherence_follows_overlap():
    # M = 2, beta = 0: gamma(t) = cos((kV - kH) t), so the off-diagonal of
    # the reduced state for a diagonal-basis input is cos((kV - kH) t)/2
    kh, kv = 0.7, 1.9
    cfg = ArrayConfig.uniform(2, 0.0, 0.0, kappa_h=kh, kappa_v=kv)
    prop = Propagator.from_config(cfg)
    ket = joint_product_ket(PureQubitState(math.pi / 4).ket(), guide_ket(2, 1))
    for t in (0.2, 0.9, 2.4):
        rho = reduced_system(evolve(prop, ket, t))
        assert abs(rho[1, 0] - 0.5 * math.cos((kv - kh) * t)) < 1e-10


def test_reduced_environment_mixture_weights():
    rng = np.random.default_rng(41)
    cfg = random_diagonal_config(rng, 5)
    phi = random_env_ket(rng, 5)
    prop = Propagator.from_config(cfg)
    uh = expi(np.asarray(build_h0(cfg))[:5, :5], 1.3)
    uv = expi(np.asarray(build_h0(cfg))[5:, 5:], 1.3)
    p_phi = np.outer(phi, phi.conj())

    # |H> input: environment stays pure under U_H
    ket_h = joint_product_ket(np.array([1.0, 0.0]), phi)
    rho_e = reduced_environment(evolve(prop, ket_h, 1.3))
    assert np.max(np.abs(rho_e - uh @ p_phi @ uh.conj().T)) < 1e-10

    # balanced input: equal mixture of the two transported environments
    ket_p = joint_product_ket(PureQubitState(math.pi / 4).ket(), phi)
    rho_e = reduced_environment(evolve(prop, ket_p, 1.3))
    expected = 0.5 * (uh @ p_phi @ uh.conj().T + uv @ p_phi @ uv.conj().T)
    assert np.max(np.abs(rho_e - expected)) < 1e-10


def test_reduced_states_validate_input():
    with pytest.raises(DimensionMismatch):
        reduced_system(np.ones(5) / np.sqrt(5))
    with pytest.raises(DimensionMismatch):
        reduced_system(np.ones(4))  # unnormalized


# ---------------------------------------------------------------------------
# gamma


def test_gamma_is_one_at_zero_time():
    cfg = ArrayConfig.uniform(3, 0.4, 0.6, 1.0, 2.0)
    assert gamma(cfg, guide_ket(3, 2), 0.0) == pytest.approx(1.0, abs=1e-14)


def test_gamma_single_guide_pure_phase():
    bh, bv = 0.3, 1.1
    cfg = ArrayConfig(
        beta_h=[bh], beta_v=[bv], kappa_h=[], kappa_v=[],
        alpha_x=[0.0], alpha_y=[0.0],
    )
    for t in (0.5, 2.0, 9.3):
        g = gamma(cfg, guide_ket(1, 1), t)
        assert abs(g - np.exp(1j * (bv - bh) * t)) < 1e-12
        assert abs(abs(g) - 1.0) < 1e-12


def test_gamma_two_guide_cosine():
    kh, kv = 0.6, 1.4
    cfg = ArrayConfig.uniform(2, 0.0, 0.0, kappa_h=kh, kappa_v=kv)
    for t in (0.0, 0.7, 1.9, 4.2):
        g = gamma(cfg, guide_ket(2, 1), t)
        assert abs(g - math.cos((kv - kh) * t)) < 1e-12


def test_gamma_requires_diagonal_config():
    cfg = ArrayConfig.uniform(2, 0.0, 0.0, 1.0, 1.0, alpha_x=0.2)
    with pytest.raises(NonDiagonalConfig):
        gamma(cfg, guide_ket(2, 1), 1.0)


def test_gamma_magnitude_bounded():
    rng = np.random.default_rng(42)
    for _ in range(20):
        m = int(rng.integers(1, 8))
        cfg = random_diagonal_config(rng, m)
        gs, leak = gamma_sweep(cfg, random_env_ket(rng, m), rng.uniform(0, 10, 7))
        assert np.all(np.abs(gs) <= 1 + 1e-12)
        assert np.all(leak >= 0)
        assert np.max(np.abs(np.abs(gs) ** 2 + leak**2 - 1.0)) < 1e-10


def test_gamma_matches_system_coherence():
    # |gamma| equals twice the off-diagonal magnitude of the reduced system
    # state for a balanced input
    rng = np.random.default_rng(43)
    for _ in range(10):
        m = int(rng.integers(1, 7))
        cfg = random_diagonal_config(rng, m)
        phi = random_env_ket(rng, m)
        t = float(rng.uniform(0, 8))
        prop = Propagator.from_config(cfg)
        ket = joint_product_ket(PureQubitState(math.pi / 4).ket(), phi)
        rho = reduced_system(evolve(prop, ket, t))
        assert abs(abs(gamma(cfg, phi, t)) - 2 * abs(rho[0, 1])) < 1e-10


# ---------------------------------------------------------------------------
# closed forms


def test_closed_form_polar_pair_keeps_full_distance():
    for g in (1.0, 0.5 + 0.1j, 0.0):
        d_s, _ = closed_form_distances([0, 0, 1], [0, 0, -1], g)
        assert d_s == pytest.approx(1.0, abs=1e-14)


def test_closed_form_equatorial_pair_vanishes_at_zero_overlap():
    d_s, d_e = closed_form_distances([1, 0, 0], [-1, 0, 0], 0.0)
    assert d_s == 0.0 and d_e == 0.0


def test_closed_form_tilted_pair_floor():
    b1 = np.array([SQRT_HALF, 0.0, SQRT_HALF])
    d_s, d_e = closed_form_distances(b1, -b1, 0.0)
    assert d_s == pytest.approx(SQRT_HALF, abs=1e-12)
    assert d_e == pytest.approx(SQRT_HALF, abs=1e-12)


def test_closed_form_rejects_large_gamma():
    with pytest.raises(InvalidGamma):
        closed_form_distances([0, 0, 1], [0, 0, -1], 1.0 + 1e-6)


def test_closed_form_matches_brute_force():
    rng = np.random.default_rng(44)
    worst = 0.0
    for _ in range(150):
        m = int(rng.integers(1, 8))
        cfg = random_diagonal_config(rng, m)
        phi = random_env_ket(rng, m)
        n = rng.normal(size=3)
        n /= np.linalg.norm(n)
        t = float(rng.uniform(0, 10))
        gs, leak = gamma_sweep(cfg, phi, [t])
        fast = closed_form_distances(n, -n, gs[0], leak[0])
        slow = brute_force_distances(cfg, phi, n, -n, t)
        worst = max(worst, abs(fast[0] - slow[0]), abs(fast[1] - slow[1]))
    assert worst < 1e-9


def test_closed_form_matches_brute_force_for_mixed_pairs():
    rng = np.random.default_rng(45)
    for _ in range(40):
        m = int(rng.integers(1, 6))
        cfg = random_diagonal_config(rng, m)
        phi = random_env_ket(rng, m)
        v1 = rng.normal(size=3)
        v1 *= rng.uniform(0, 1) / np.linalg.norm(v1)
        v2 = rng.normal(size=3)
        v2 *= rng.uniform(0, 1) / np.linalg.norm(v2)
        t = float(rng.uniform(0, 10))
        gs, leak = gamma_sweep(cfg, phi, [t])
        fast = closed_form_distances(v1, v2, gs[0], leak[0])
        slow = brute_force_distances(cfg, phi, v1, v2, t)
        assert abs(fast[0] - slow[0]) < 1e-9
        assert abs(fast[1] - slow[1]) < 1e-9


def test_tradeoff_identity():
    # equatorial system distance squared plus polar environment distance
    # squared is 1 at every t
    rng = np.random.default_rng(46)
    for _ in range(10):
        m = int(rng.integers(1, 8))
        cfg = random_diagonal_config(rng, m)
        phi = random_env_ket(rng, m)
        ts = rng.uniform(0, 10, 25)
        gs, leak = gamma_sweep(cfg, phi, ts)
        d_s_eq, _ = closed_form_distances([1, 0, 0], [-1, 0, 0], gs, leak)
        _, d_e_polar = closed_form_distances([0, 0, 1], [0, 0, -1], gs, leak)
        assert np.max(np.abs(d_s_eq**2 + d_e_polar**2 - 1.0)) < 1e-9


# ---------------------------------------------------------------------------
# intensity


def test_intensity_initial_row_is_input_distribution():
    cfg = ArrayConfig.uniform(5, 0.2, 0.4, 1.0, 2.0)
    profile = intensity_profile(cfg, guide_ket(5, 3), "H", [0.0, 1.0])
    assert np.allclose(profile[0], [0, 0, 1, 0, 0], atol=1e-14)


def test_intensity_uncoupled_is_constant():
    cfg = ArrayConfig.uniform(4, 1.0, 2.0, 0.0, 0.0)
    phi = np.sqrt(np.array([0.1, 0.2, 0.3, 0.4]))
    profile = intensity_profile(cfg, phi, "V", np.linspace(0, 5, 11))
    assert np.max(np.abs(profile - profile[0])) < 1e-12


def test_intensity_two_guide_closed_form():
    c = 1.1
    cfg = ArrayConfig.uniform(2, 0.0, 0.0, kappa_h=c, kappa_v=c)
    ts = np.linspace(0, 3, 16)
    profile = intensity_profile(cfg, guide_ket(2, 1), "H", ts)
    assert np.max(np.abs(profile[:, 0] - np.cos(c * ts) ** 2)) < 1e-12
    assert np.max(np.abs(profile[:, 1] - np.sin(c * ts) ** 2)) < 1e-12


def test_intensity_rows_sum_to_one():
    rng = np.random.default_rng(47)
    cfg = random_diagonal_config(rng, 6)
    profile = intensity_profile(cfg, random_env_ket(rng, 6), "H", rng.uniform(0, 12, 40))
    assert np.max(np.abs(profile.sum(axis=1) - 1.0)) < 1e-10


def test_intensity_requires_diagonal_config():
    cfg = ArrayConfig.uniform(2, 0.0, 0.0, 1.0, 1.0, alpha_y=0.5)
    with pytest.raises(NonDiagonalConfig):
        intensity_profile(cfg, guide_ket(2, 1), "H", [0.0, 1.0])


# ---------------------------------------------------------------------------
# pair sweeps


def test_simulate_pair_diagonal_matches_brute_force():
    rng = np.random.default_rng(48)
    cfg = random_diagonal_config(rng, 5)
    phi = random_env_ket(rng, 5)
    pair = standard_test_pairs()[1]
    ts = np.linspace(0, 8, 9)
    records = simulate_pair(cfg, phi, pair, ts)
    b1, b2 = pair.bloch_vectors()
    for record in records:
        slow = brute_force_distances(cfg, phi, b1, b2, record.t)
        assert abs(record.d_s - slow[0]) < 1e-9
        assert abs(record.d_e - slow[1]) < 1e-9
        assert abs(record.gamma) <= 1 + 1e-10


def test_simulate_pair_rotated_config_reports_nan_gamma():
    cfg = ArrayConfig.uniform(2, 0.1, 0.2, 1.0, 1.5, alpha_x=0.8)
    pair = standard_test_pairs()[0]
    records = simulate_pair(cfg, guide_ket(2, 1), pair, np.linspace(0, 4, 5))
    assert all(math.isnan(r.gamma.real) for r in records)
    assert records[0].d_s == pytest.approx(1.0, abs=1e-10)
    # rotations move even the polar pair's information out of the system
    assert min(r.d_s for r in records) < 0.999


def test_propagator_unitarity_along_trajectory():
    rng = np.random.default_rng(49)
    cfg = ArrayConfig(
        beta_h=rng.uniform(-2, 2, 4),
        beta_v=rng.uniform(-2, 2, 4),
        kappa_h=rng.uniform(-2, 2, 3),
        kappa_v=rng.uniform(-2, 2, 3),
        alpha_x=rng.uniform(-2, 2, 4),
        alpha_y=rng.uniform(-2, 2, 4),
    )
    prop = Propagator.from_config(cfg)
    assert np.max(np.abs(prop.at(0.0) - np.eye(8))) < 1e-12
    for t in rng.uniform(0, 12, 5):
        u = prop.at(float(t))
        assert np.max(np.abs(u.conj().T @ u - np.eye(8))) < 1e-10
