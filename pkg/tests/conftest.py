import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from uncertlab import GridSpec, WaveFunction, gaussian, weyl_shift

settings.register_profile(
    "lab",
    deadline=None,
    max_examples=30,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("lab")


@pytest.fixture(scope="session")
def grid():
    return GridSpec.centered(512, 32.0)


@pytest.fixture(scope="session")
def fine_grid():
    # dx = dp ~ 0.078: balances the midpoint-rule error of |x|-type moments
    # between the two representations
    return GridSpec.centered(1024, 80.0)


@pytest.fixture()
def rng():
    return np.random.default_rng(1234)


def random_wavepacket(grid, rng, n_modes=3, max_shift=4.0, max_boost=3.0):
    """Normalized superposition of displaced Gaussians, safely inside the window."""
    amps = np.zeros(grid.n_points, dtype=np.complex128)
    for _ in range(n_modes):
        a = rng.uniform(0.3, 1.5)
        shift = rng.uniform(-max_shift, max_shift)
        boost = rng.uniform(-max_boost, max_boost)
        c = rng.normal() + 1j * rng.normal()
        amps += c * gaussian(grid, a, shift=shift, boost=boost).amplitudes
    return WaveFunction.from_samples(grid, amps, rep="position")


@pytest.fixture()
def wavepacket_factory(grid, rng):
    def make(**kw):
        return random_wavepacket(grid, rng, **kw)

    return make
