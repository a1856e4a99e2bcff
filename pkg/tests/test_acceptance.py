"""Acceptance gate: one test per stated criterion, at the stated tolerance.

Each test is self-contained (own grids, own RNG) so `pytest -v` gives one
pass/fail line per criterion.  Runtime limits are asserted where stated.
"""

import math
import time

import numpy as np
import pytest

from uncertlab import (
    GridSpec,
    PeriodicSetFunction,
    T_for,
    ak_analytic_variances,
    AKParams,
    ak_gamma_study,
    build_instrument,
    check_covariant_state_ur,
    check_preparation_ur,
    gaussian,
    gt_from_T,
    husimi,
    inaccuracy_measures,
    largest_a0,
    min_area_for_confidence,
    optimal_localization,
    oscillator_basis,
    periodic_commutator,
    probe_grid,
    pure_density,
    sequential_joint,
    werner_constant_search,
    check_overall_width_ur,
    WaveFunction,
)
from uncertlab.cli import main as cli_main

TWO_PI = 2.0 * math.pi
GRID = GridSpec.centered(512, 32.0)


def random_state(rng, grid=GRID, n_modes=3):
    amps = np.zeros(grid.n_points, dtype=complex)
    for _ in range(n_modes):
        part = gaussian(
            grid,
            rng.uniform(0.2, 1.5),
            b=rng.uniform(-0.4, 0.4),
            shift=rng.uniform(-3.0, 3.0),
            boost=rng.uniform(-2.0, 2.0),
        )
        w = rng.uniform(0.3, 1.0) * np.exp(1j * rng.uniform(0, TWO_PI))
        amps += w * part.amplitudes
    return WaveFunction.from_samples(grid, amps)


def centered_pair(grid, area, aspect=1.0):
    lx = math.sqrt(area * aspect)
    ly = area / lx
    return (-lx / 2, lx / 2), (-ly / 2, ly / 2)


def test_criterion_01_preparation_ur_equality():
    t0 = time.perf_counter()
    hbar = GRID.hbar
    for a in (0.2, 0.5, 1.0, 2.3):
        rep = check_preparation_ur(gaussian(GRID, a))
        assert abs(rep.product - hbar / 2.0) < 1e-6, a
        assert rep.passed
    for a, b in ((0.5, 0.3), (1.0, -0.8), (0.4, 1.1)):
        rep = check_preparation_ur(gaussian(GRID, a, b=b))
        assert rep.product > hbar / 2.0 + 1e-9, (a, b)
    assert time.perf_counter() - t0 < 1.0


def test_criterion_02_min_area_for_confidence():
    t0 = time.perf_counter()
    ma = min_area_for_confidence(GRID, 0.01, 0.01)
    elapsed = time.perf_counter() - t0
    assert elapsed < 120.0
    assert math.isclose(ma, 6.25 * TWO_PI * GRID.hbar, rel_tol=0.05), (
        f"min area {ma / (TWO_PI * GRID.hbar):.6f} x 2*pi*hbar"
    )


def test_criterion_03_trace_identity():
    rng = np.random.default_rng(31)
    areas = np.linspace(0.5, 20.0, 10) * TWO_PI * GRID.hbar
    for area in areas:
        aspect = rng.uniform(0.6, 1.6)
        x_iv, y_iv = centered_pair(GRID, area, aspect)
        res = largest_a0(GRID, x_iv, y_iv)
        want = res.length_x * res.length_y / (TWO_PI * GRID.hbar)
        assert math.isclose(res.trace, want, rel_tol=1e-2), (area, res.trace, want)


def test_criterion_04_two_route_consistency():
    rng = np.random.default_rng(41)
    for _ in range(20):
        area = rng.uniform(0.5, 8.0) * TWO_PI * GRID.hbar
        aspect = rng.uniform(0.5, 2.0)
        x_iv, y_iv = centered_pair(GRID, area, aspect)
        res = largest_a0(GRID, x_iv, y_iv)
        opt = optimal_localization(GRID, x_iv, y_iv)
        assert abs(opt.value - (1.0 + math.sqrt(res.a0))) < 1e-6


def test_criterion_05_overall_width_ur():
    rng = np.random.default_rng(51)
    violations = 0
    for _ in range(100):
        psi = random_state(rng)
        for eps in (0.01, 0.05, 0.2):
            rep = check_overall_width_ur(psi, eps, eps)
            if not (rep.passed and rep.passed_sharp):
                violations += 1
    assert violations == 0


def test_criterion_06_covariant_tradeoffs():
    t0 = time.perf_counter()
    hbar = GRID.hbar
    minimal = gt_from_T(pure_density(gaussian(GRID, 0.5)))
    rep = inaccuracy_measures(minimal)
    assert abs(rep.q.noise_variance * rep.p.noise_variance - hbar**2 / 4.0) < 1e-6
    stderr = rep.q.standard_error * rep.p.standard_error
    assert abs(stderr - hbar / 2.0) < 1e-6
    state_rep = check_covariant_state_ur(gaussian(GRID, 0.5), minimal)
    assert abs(state_rep.product - hbar) < 1e-6

    rng = np.random.default_rng(61)
    basis = oscillator_basis(GRID, 6)
    probe = gaussian(GRID, 0.7)
    for _ in range(30):
        c = rng.standard_normal(6)
        c /= np.linalg.norm(c)
        obs = gt_from_T(pure_density(basis.state(c)))
        report = inaccuracy_measures(obs, 0.05, 0.05)
        assert all(k.passed for k in report.checks), [
            (k.tag, k.lhs, k.rhs) for k in report.checks if not k.passed
        ]
        assert check_covariant_state_ur(probe, obs).passed
    assert time.perf_counter() - t0 < 60.0


def test_criterion_07_werner_constant():
    t0 = time.perf_counter()
    res = werner_constant_search(GRID, basis_size=8, budget=5000, seed=0)
    elapsed = time.perf_counter() - t0
    assert elapsed < 300.0
    assert res.n_evals <= 5000
    assert math.isclose(res.c_est, 0.3047, rel_tol=2e-2)
    excited_mass = 1.0 - float(res.coeffs[0]) ** 2
    assert excited_mass > 1e-3
    assert res.converged


def test_criterion_08_sequential_model():
    t0 = time.perf_counter()
    pg = probe_grid(GRID, 1.0)
    inst = build_instrument(gaussian(pg, 2.0), 1.0, GRID)
    psi = gaussian(GRID, 0.7, shift=0.6, boost=-0.4)
    joint = sequential_joint(inst, psi)
    tv_q, tv_p = joint.marginal_errors()
    assert tv_q < 1e-6
    assert tv_p < 1e-6
    cov = husimi(psi, gt_from_T(T_for(inst)))
    half = GRID.n_points // 2
    block = joint.weights[half : half + GRID.n_points, :]
    assert np.max(np.abs(block - cov.weights)) < 1e-5
    assert time.perf_counter() - t0 < 30.0


def test_criterion_09_arthurs_kelly():
    t0 = time.perf_counter()
    ak_grid = GridSpec.centered(64, 16.0)
    hbar = ak_grid.hbar
    p1 = gaussian(ak_grid, 0.5)
    p2 = gaussian(ak_grid, 0.5)
    rep = ak_analytic_variances(AKParams(1.0, 1.0, 0.0), p1, p2)
    assert abs(rep.var_mu - 0.625) < 1e-6
    assert abs(rep.quality - hbar**2 / 8.0) < 1e-6
    assert abs(rep.disturbance - 0.265625) < 1e-6

    study = ak_gamma_study(
        [-1.0, 0.0, 1.0], 1.0, 1.0, p1, p2, psi=gaussian(ak_grid, 0.5)
    )
    for row in study.rows:
        assert row.sim_rel_err_q is not None and row.sim_rel_err_q < 3e-2, row.gamma
        assert row.sim_rel_err_p is not None and row.sim_rel_err_p < 3e-2, row.gamma
    chk = study.gamma_neg1_check
    assert chk is not None and chk.passed
    assert math.isclose(chk.lhs, hbar**2 / 4.0, rel_tol=1e-9)
    assert time.perf_counter() - t0 < 120.0


def test_criterion_10_periodic_commutation():
    a = 8 * GRID.dx
    b = 8 * GRID.dp
    g = PeriodicSetFunction(period=a, intervals=((0.0, a / 2),))
    h = PeriodicSetFunction(period=b, intervals=((0.0, b / 2),))
    res = periodic_commutator(GRID, g, h)
    assert res.predicted_commuting
    assert res.norm < 1e-6

    a2 = 32 * GRID.dx
    b2 = 32 * GRID.dp
    g2 = PeriodicSetFunction(period=a2, intervals=((0.0, a2 / 2),))
    h2 = PeriodicSetFunction(period=b2, intervals=((0.0, b2 / 2),))
    res2 = periodic_commutator(GRID, g2, h2)
    assert not res2.predicted_commuting
    assert res2.norm > 0.05


def test_criterion_11_suite_determinism(tmp_path):
    out1 = tmp_path / "run1"
    out2 = tmp_path / "run2"
    assert cli_main(["suite", "--out", str(out1), "--seed", "7"]) == 0
    assert cli_main(["suite", "--out", str(out2), "--seed", "7"]) == 0
    files1 = sorted(p.name for p in out1.glob("*.csv"))
    files2 = sorted(p.name for p in out2.glob("*.csv"))
    assert files1 == files2 and files1
    for name in files1:
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes(), name
