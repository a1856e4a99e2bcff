import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from uncertlab import (
    AliasingError,
    BoundaryAliasingWarning,
    GridSpec,
    ParameterError,
    WaveFunction,
    as_momentum,
    as_position,
    boundary_mass,
    gaussian,
    parity,
    to_momentum,
    to_position,
    transform_matrix,
    weyl_shift,
)
from uncertlab.grids import gridspec_from_dict, gridspec_to_dict, momentum_samples, require_no_aliasing
from uncertlab.stats import momentum_density, position_density

from conftest import random_wavepacket


class TestGridSpec:
    def test_centered_lattice_symmetry(self, grid):
        assert grid.is_centered()
        assert grid.x[0] == -16.0
        assert grid.x[-1] == 16.0 - grid.dx
        # momentum lattice is centered the same way
        assert grid.p[grid.n_points // 2] == 0.0
        assert math.isclose(grid.dp, 2 * math.pi / (512 * grid.dx))

    def test_reciprocity(self):
        g = GridSpec.centered(256, 20.0, hbar=0.7)
        assert math.isclose(g.dx * g.dp * g.n_points, 2 * math.pi * g.hbar, rel_tol=1e-15)

    @pytest.mark.parametrize(
        "n,extent",
        [(0, 10.0), (-4, 10.0), (7, 10.0), (33, 10.0), (16, 0.0), (16, -1.0)],
    )
    def test_rejects_bad_shapes(self, n, extent):
        with pytest.raises((ParameterError, ValueError)):
            GridSpec.centered(n, extent)

    def test_dict_roundtrip(self, grid):
        assert gridspec_from_dict(gridspec_to_dict(grid)) == grid


class TestTransforms:
    def test_roundtrip_is_identity(self, grid, rng):
        psi = random_wavepacket(grid, rng)
        back = to_position(to_momentum(psi))
        assert np.max(np.abs(back.amplitudes - psi.amplitudes)) < 1e-14

    def test_norm_preserved(self, grid, rng):
        psi = random_wavepacket(grid, rng, n_modes=5)
        assert math.isclose(to_momentum(psi).norm(), 1.0, abs_tol=1e-13)

    def test_matrix_matches_fft_path(self):
        # the dense matrix acts on coefficient vectors sqrt(dx)*psi
        g = GridSpec.centered(64, 12.0)
        rng = np.random.default_rng(5)
        psi = random_wavepacket(g, rng, n_modes=2, max_shift=1.5, max_boost=1.0)
        u = transform_matrix(g)
        direct = u @ (math.sqrt(g.dx) * psi.amplitudes)
        expected = math.sqrt(g.dp) * momentum_samples(psi)
        assert np.max(np.abs(direct - expected)) < 1e-12

    def test_matrix_unitary(self):
        g = GridSpec.centered(64, 12.0)
        u = transform_matrix(g)
        assert np.max(np.abs(u.conj().T @ u - np.eye(64))) < 1e-12

    def test_gaussian_transform_analytic(self, grid):
        # exp(-a x^2) maps to a Gaussian of momentum variance hbar^2 a
        psi = gaussian(grid, 0.8)
        dens = momentum_density(psi)
        assert math.isclose(dens.variance(), 0.8, rel_tol=1e-12)


class TestGaussianMoments:
    @pytest.mark.parametrize("a,b", [(0.5, 0.0), (1.2, 0.4), (0.3, -0.8)])
    def test_variances(self, grid, a, b):
        psi = gaussian(grid, a, b=b)
        vq = position_density(psi).variance()
        vp = momentum_density(psi).variance()
        assert math.isclose(vq, 1.0 / (4 * a), rel_tol=1e-10)
        assert math.isclose(vp, a + b**2 / a, rel_tol=1e-10)

    def test_means(self, grid):
        psi = gaussian(grid, 0.7, shift=1.25, boost=-2.0)
        assert math.isclose(position_density(psi).mean(), 1.25, abs_tol=1e-9)
        assert math.isclose(momentum_density(psi).mean(), -2.0, abs_tol=1e-9)

    def test_hbar_scales_momentum(self):
        g = GridSpec.centered(512, 32.0, hbar=0.5)
        psi = gaussian(g, 0.5, boost=1.0)
        assert math.isclose(momentum_density(psi).mean(), 0.5, abs_tol=1e-9)
        assert math.isclose(momentum_density(psi).variance(), 0.125, rel_tol=1e-9)

    def test_wide_state_rejected(self, grid):
        with pytest.raises(AliasingError):
            gaussian(grid, 0.002)

    def test_far_shift_rejected(self, grid):
        with pytest.raises(AliasingError):
            gaussian(grid, 0.5, shift=15.5)


class TestWeylShift:
    def test_moves_means(self, grid):
        psi = gaussian(grid, 0.5)
        out = weyl_shift(psi, 1.5, -0.75)
        assert math.isclose(position_density(out).mean(), 1.5, abs_tol=1e-9)
        assert math.isclose(momentum_density(out).mean(), -0.75, abs_tol=1e-9)

    def test_unitary(self, grid, rng):
        psi = random_wavepacket(grid, rng)
        assert math.isclose(weyl_shift(psi, 0.8, 1.1).norm(), 1.0, abs_tol=1e-12)

    def test_composition_symplectic_phase(self, grid):
        psi = gaussian(grid, 0.6)
        q1, p1, q2, p2 = 0.9, -0.4, -0.3, 1.2
        two_step = weyl_shift(weyl_shift(psi, q2, p2), q1, p1)
        one_step = weyl_shift(psi, q1 + q2, p1 + p2)
        phase = np.exp(-1j * (q1 * p2 - p1 * q2) / (2.0 * grid.hbar))
        assert np.max(np.abs(two_step.amplitudes - phase * one_step.amplitudes)) < 1e-10

    def test_inverse_recovers_state(self, grid, rng):
        psi = random_wavepacket(grid, rng, max_shift=2.0, max_boost=1.5)
        out = weyl_shift(weyl_shift(psi, 1.0, 2.0), -1.0, -2.0)
        overlap = abs(out.inner(psi))
        assert math.isclose(overlap, 1.0, abs_tol=1e-12)

    def test_edge_shift_warns(self, grid):
        psi = gaussian(grid, 0.5)
        with pytest.warns(BoundaryAliasingWarning):
            weyl_shift(psi, 14.0, 0.0)


class TestParity:
    def test_involution(self, grid, rng):
        psi = random_wavepacket(grid, rng)
        back = parity(parity(psi))
        assert np.max(np.abs(back.amplitudes - psi.amplitudes)) < 1e-15

    def test_flips_means(self, grid):
        psi = gaussian(grid, 0.5, shift=2.0, boost=1.0)
        out = parity(psi)
        assert math.isclose(position_density(out).mean(), -2.0, abs_tol=1e-9)
        assert math.isclose(momentum_density(out).mean(), -1.0, abs_tol=1e-9)

    def test_commutes_with_transform(self, grid, rng):
        psi = random_wavepacket(grid, rng)
        a = as_momentum(parity(psi)).amplitudes
        b = parity(as_momentum(psi)).amplitudes
        assert np.max(np.abs(a - b)) < 1e-12


class TestWaveFunction:
    def test_from_samples_normalizes(self, grid):
        raw = np.exp(-0.5 * grid.x**2) * (2.0 + 1j)
        psi = WaveFunction.from_samples(grid, raw, rep="position")
        assert math.isclose(psi.norm(), 1.0, rel_tol=1e-14)

    def test_zero_vector_rejected(self, grid):
        with pytest.raises(ParameterError):
            WaveFunction.from_samples(grid, np.zeros(grid.n_points), rep="position")

    def test_boundary_mass_detects_edge_weight(self, grid):
        psi = gaussian(grid, 0.5)
        assert boundary_mass(psi) < 1e-12
        rolled = WaveFunction(grid, np.roll(psi.amplitudes, 250), rep="position")
        with pytest.raises(AliasingError):
            require_no_aliasing(rolled, "test")


@given(
    a=st.floats(0.2, 2.0),
    shift=st.floats(-3.0, 3.0),
    boost=st.floats(-2.0, 2.0),
)
def test_roundtrip_property(a, shift, boost):
    g = GridSpec.centered(256, 24.0)
    psi = gaussian(g, a, shift=shift, boost=boost)
    back = to_position(to_momentum(psi))
    assert np.max(np.abs(back.amplitudes - psi.amplitudes)) < 1e-13


@given(q=st.floats(-2.0, 2.0), p=st.floats(-2.0, 2.0))
def test_shift_covariance_of_densities(q, p):
    g = GridSpec.centered(256, 24.0)
    psi = gaussian(g, 0.5)
    out = weyl_shift(psi, q, p)
    assert math.isclose(position_density(out).mean(), q, abs_tol=1e-8)
    assert math.isclose(momentum_density(out).mean(), p, abs_tol=1e-8)
