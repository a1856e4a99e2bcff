import math

import numpy as np
import pytest

from uncertlab import (
    GridError,
    GridSpec,
    ParameterError,
    PhaseSpaceDensity,
    ProbabilityDensity,
    SmearingMeasure,
    WarpMap,
    WERNER_DISTANCE_CONSTANT,
    box,
    check_covariant_state_ur,
    error_bar_calibrate,
    gaussian,
    gt_from_T,
    husimi,
    inaccuracy_measures,
    momentum_density,
    oscillator_basis,
    overall_width,
    position_density,
    pure_density,
    pushforward_density,
    smear,
    warp_observable,
    werner_constant_search,
    werner_distance_estimate,
)


def minimal_observable(grid, a=0.5):
    return gt_from_T(pure_density(gaussian(grid, a)))


class TestSmear:
    def test_gaussian_variances_add(self, grid):
        dist = position_density(gaussian(grid, 0.5))
        measure = SmearingMeasure.from_density(position_density(gaussian(grid, 1.0)))
        out = smear(dist, measure)
        assert math.isclose(out.total(), 1.0, abs_tol=1e-9)
        assert math.isclose(out.variance(), dist.variance() + measure.variance, rel_tol=1e-9)

    def test_means_add(self, grid):
        dist = position_density(gaussian(grid, 0.5, shift=1.25))
        measure = position_density(gaussian(grid, 2.0, shift=-0.5))
        out = smear(dist, measure)
        assert math.isclose(out.mean(), 0.75, abs_tol=1e-9)

    def test_matches_direct_double_sum(self):
        small = GridSpec.centered(32, 8.0)
        dist = position_density(box(small, 0.0, 1.5))
        measure = position_density(box(small, 0.5, 1.0))
        out = smear(dist, measure)
        sp = small.dx
        n1, n2 = dist.weights.size, measure.weights.size
        want = np.zeros(n1 + n2 - 1)
        for j in range(n1):
            for k in range(n2):
                want[j + k] += dist.weights[j] * measure.weights[k] * sp
        assert np.max(np.abs(out.weights - want)) < 1e-12
        assert math.isclose(out.coords[0], dist.coords[0] + measure.coords[0], abs_tol=1e-12)

    def test_rejects_mismatched_spacing(self, grid):
        other = GridSpec.centered(256, 32.0)
        with pytest.raises(GridError):
            smear(position_density(gaussian(grid, 0.5)), position_density(gaussian(other, 0.5)))


class TestMarginalMeasures:
    def test_parity_conjugation_flips_kernel_shift(self, grid):
        obs = gt_from_T(pure_density(gaussian(grid, 0.5, shift=1.5)))
        assert math.isclose(obs.mu.first_moment, -1.5, abs_tol=1e-9)

    def test_minimal_kernel_measure_variances(self, grid):
        a = 0.5
        obs = minimal_observable(grid, a)
        assert math.isclose(obs.mu.variance, 1.0 / (4 * a), rel_tol=1e-9)
        assert math.isclose(obs.nu.variance, grid.hbar**2 * a, rel_tol=1e-9)


class TestInaccuracyFloors:
    def test_minimal_kernel_saturates_noise_and_stderr(self, grid):
        report = inaccuracy_measures(minimal_observable(grid))
        hbar = grid.hbar
        noise = report.q.noise_variance * report.p.noise_variance
        stderr = report.q.standard_error * report.p.standard_error
        assert math.isclose(noise, hbar**2 / 4.0, rel_tol=1e-6)
        assert math.isclose(stderr, hbar / 2.0, rel_tol=1e-6)
        assert all(c.passed for c in report.checks)

    def test_minimal_kernel_state_equality(self, grid):
        obs = minimal_observable(grid, 0.5)
        rep = check_covariant_state_ur(gaussian(grid, 0.5), obs)
        assert math.isclose(rep.product, grid.hbar, rel_tol=1e-6)
        assert rep.passed

    def test_random_kernels_respect_all_floors(self, grid, rng):
        basis = oscillator_basis(grid, 5)
        for _ in range(6):
            c = rng.standard_normal(5)
            c /= np.linalg.norm(c)
            obs = gt_from_T(pure_density(basis.state(c)))
            report = inaccuracy_measures(obs, 0.05, 0.05)
            for chk in report.checks:
                assert chk.passed, (chk.tag, chk.lhs, chk.rhs)

    def test_random_states_respect_spread_floor(self, grid, wavepacket_factory):
        obs = minimal_observable(grid, 1.3)
        for _ in range(6):
            rep = check_covariant_state_ur(wavepacket_factory(), obs)
            assert rep.product >= rep.bound - 1e-12

    def test_conjecture_log_is_flat_floats(self, grid):
        report = inaccuracy_measures(minimal_observable(grid))
        keys = {
            "noise_stddev_product",
            "noise_candidate_floor_linear",
            "noise_candidate_floor_quadratic",
            "resolution_width_product",
            "resolution_candidate_floor",
        }
        assert set(report.conjecture_log) == keys
        assert all(isinstance(v, float) for v in report.conjecture_log.values())

    def test_rejects_bad_confidence(self, grid):
        with pytest.raises(ParameterError):
            inaccuracy_measures(minimal_observable(grid), 0.6, 0.05)


class TestHusimi:
    def test_mass_and_marginals_for_random_states(self, grid, wavepacket_factory):
        obs = minimal_observable(grid)
        for _ in range(5):
            H = husimi(wavepacket_factory(), obs)
            assert math.isclose(H.total(), 1.0, abs_tol=1e-9)
            tv_q, tv_p = H.marginal_errors()
            assert tv_q is not None and tv_q < 1e-6
            assert tv_p is not None and tv_p < 1e-6

    def test_gaussian_marginal_variances(self, grid):
        a_state, a_kernel = 0.5, 0.8
        H = husimi(gaussian(grid, a_state), minimal_observable(grid, a_kernel))
        var_q = H.q_marginal().variance()
        var_p = H.p_marginal().variance()
        assert math.isclose(var_q, 1 / (4 * a_state) + 1 / (4 * a_kernel), rel_tol=1e-6)
        assert math.isclose(var_p, a_state + a_kernel, rel_tol=1e-6)

    def test_stride_subsamples_rows(self, grid):
        obs = minimal_observable(grid)
        H = husimi(gaussian(grid, 0.5), obs, q_stride=8)
        assert H.q_coords.size == grid.n_points // 8
        assert math.isclose(H.total(), 1.0, abs_tol=1e-9)
        assert H.marginal_errors() == (None, None)

    def test_rejects_bad_stride(self, grid):
        obs = minimal_observable(grid)
        with pytest.raises(ParameterError):
            husimi(gaussian(grid, 0.5), obs, q_stride=7)


class TestPhaseSpaceDensity:
    def test_rejects_bad_shape(self):
        with pytest.raises(ParameterError):
            PhaseSpaceDensity(np.arange(3.0), np.arange(4.0), np.ones((4, 3)))

    def test_rejects_negative_weights(self):
        w = np.full((2, 2), 0.25)
        w[0, 0] = -0.1
        with pytest.raises(ParameterError):
            PhaseSpaceDensity(np.arange(2.0), np.arange(2.0), w)

    def test_rejects_wrong_mass(self):
        with pytest.raises(ParameterError):
            PhaseSpaceDensity(np.arange(2.0), np.arange(2.0), np.ones((2, 2)))


class TestErrorBarCalibrate:
    def test_smeared_channel_tracks_measure_width(self):
        g = GridSpec.centered(2048, 51.2)
        mu = SmearingMeasure.from_density(position_density(gaussian(g, 0.5)))

        def channel(phi):
            return smear(position_density(phi), mu)

        eps, delta = 0.05, 0.1
        w = error_bar_calibrate(channel, g, eps, delta)
        floor = delta + overall_width(mu.density, eps).width
        assert 0.9 <= w / floor <= 1.1

    def test_sharp_channel_needs_only_probe_width(self):
        g = GridSpec.centered(1024, 32.0)
        w = error_bar_calibrate(position_density, g, 0.05, 0.5)
        # output is the probe box itself, so the calibrated bar is about delta
        assert w <= 0.5 + 4 * g.dx

    def test_rejects_narrow_probe(self, grid):
        with pytest.raises(Exception):
            error_bar_calibrate(position_density, grid, 0.05, grid.dx)


class TestOscillatorBasis:
    def test_orthonormal_in_both_representations(self, grid):
        basis = oscillator_basis(grid, 8)
        gram_x = basis.pos @ basis.pos.T * grid.dx
        gram_p = basis.mom @ basis.mom.conj().T * grid.dp
        assert np.max(np.abs(gram_x - np.eye(8))) < 1e-10
        assert np.max(np.abs(gram_p - np.eye(8))) < 1e-10

    def test_ground_state_objective_is_two_over_tau(self, fine_grid):
        # E|Q| = E|P| = sqrt(hbar/pi) for the ground state, so the
        # product in units of hbar is 1/pi
        basis = oscillator_basis(fine_grid, 4)
        e0 = np.zeros(4)
        e0[0] = 1.0
        # each absolute moment carries a -0.094*dx**2 kink error, about
        # 1e-3 relative per axis at this spacing
        assert math.isclose(basis.objective(e0), 1.0 / math.pi, rel_tol=3e-3)

    def test_rejects_bad_size(self, grid):
        with pytest.raises(ParameterError):
            oscillator_basis(grid, 0)
        with pytest.raises(ParameterError):
            oscillator_basis(grid, 21)


class TestWernerSearch:
    def test_reduced_search_lands_near_constant(self, grid):
        res = werner_constant_search(grid, basis_size=6, budget=1500, seed=0, n_starts=4)
        assert res.converged
        assert math.isclose(res.c_est, WERNER_DISTANCE_CONSTANT, rel_tol=2e-2)
        excited = 1.0 - res.coeffs[0] ** 2
        assert excited > 1e-3
        assert len(res.history) == 4
        assert res.check.passed

    def test_search_beats_ground_state(self, grid):
        res = werner_constant_search(grid, basis_size=6, budget=1500, seed=0, n_starts=4)
        assert res.c_est < 1.0 / math.pi

    def test_rejects_tiny_budget(self, grid):
        with pytest.raises(ParameterError):
            werner_constant_search(grid, basis_size=6, budget=100, n_starts=4)


class TestWernerDistanceEstimate:
    def test_shifted_channel_distance_is_the_shift(self, grid):
        shift = 0.5

        def chan1(phi):
            return position_density(phi)

        def chan2(phi):
            return position_density(phi).shifted(shift)

        est = werner_distance_estimate(chan1, chan2, [gaussian(grid, 0.5)])
        assert math.isclose(est, shift, rel_tol=1e-9)

    def test_identical_channels_give_zero(self, grid):
        est = werner_distance_estimate(
            position_density, position_density, [gaussian(grid, 0.5)]
        )
        assert est < 1e-12

    def test_needs_probes(self):
        with pytest.raises(ParameterError):
            werner_distance_estimate(position_density, position_density, [])


class TestWarp:
    def test_pushforward_conserves_mass(self, grid):
        dist = position_density(gaussian(grid, 0.7, shift=0.3))
        warp = WarpMap.from_function(lambda v: v + 0.3 * math.tanh(v), grid.x)
        out = pushforward_density(dist, warp)
        assert math.isclose(out.total(), dist.total(), abs_tol=1e-12)

    def test_identity_warp_keeps_covariance(self, grid):
        obs = minimal_observable(grid)
        ident = WarpMap.from_function(lambda v: v, grid.x)
        rep = warp_observable(obs, ident, WarpMap.from_function(lambda v: v, grid.p),
                              gaussian(grid, 0.5))
        assert rep.covariance_tv_q < 1e-9
        assert abs(rep.error_bar_q - rep.error_bar_q_plain) < 1e-9

    def test_nonlinear_warp_breaks_covariance(self, grid):
        obs = minimal_observable(grid)
        warp_q = WarpMap.from_function(lambda v: v + 0.3 * math.tanh(v), grid.x)
        warp_p = WarpMap.from_function(lambda v: v, grid.p)
        rep = warp_observable(obs, warp_q, warp_p, gaussian(grid, 0.5))
        assert rep.covariance_tv_q > 1e-3
        assert abs(rep.error_bar_q - rep.error_bar_q_plain) <= 0.6

    def test_inverse_roundtrip(self, grid):
        warp = WarpMap.from_function(lambda v: v + 0.3 * math.tanh(v), grid.x)
        v = np.linspace(-10, 10, 41)
        assert np.max(np.abs(warp.inverse(warp(v)) - v)) < 1e-9

    def test_rejects_non_monotone_table(self):
        with pytest.raises(ParameterError):
            WarpMap(inputs=np.array([0.0, 1.0, 2.0]), outputs=np.array([0.0, 1.0, 0.5]))

    def test_rejects_non_uniform_inputs(self):
        with pytest.raises(ParameterError):
            WarpMap(inputs=np.array([0.0, 1.0, 3.0]), outputs=np.array([0.0, 1.0, 3.0]))
