"""Multiplicative position instrument and the measure-then-momentum joint.

The instrument couples the object to a probe wave function and reads a
position value q; each outcome acts on the object by multiplication with
a shifted, scaled copy of the probe profile.  Measuring sharp momentum
afterwards yields a joint outcome density whose first marginal is the
probe-smeared position distribution and whose second marginal is the
probe-smeared momentum distribution, so the scheme is simultaneously an
approximate joint measurement and an accuracy-disturbance experiment.

Sampling convention: the probe lives on its own grid with the same point
count as the object grid and spacing lam * dx, so every kernel value
Psi_p(lam * (q - x)) is an exact probe sample and the completeness sum
telescopes to the probe norm with no interpolation anywhere.  Outcomes
run over an extended lattice of 2n - 1 cells (the support of the
smearing convolution), which makes the Kraus completeness identity exact
to round-off rather than merely 1e-6.

The position smearing measure realized by the multiplication kernel is
mu(s) = lam * |Psi_p(lam s)|**2; for probes with even modulus this
coincides with the reflected form lam * |Psi_p(-lam s)|**2 that is often
quoted, and the reflection matters only for asymmetric probes.  The
momentum smearing is nu(s) = (1/lam) * |FT(Psi_p)(-s/lam)|**2 in every
case.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    ConditioningError,
    GridError,
    ParameterError,
    ProbeValidityError,
)
from .grids import GridSpec, WaveFunction, as_position, to_momentum
from .states import DensityMatrixT, pure_density
from .stats import (
    ProbabilityDensity,
    momentum_density,
    overall_width,
    position_density,
)
from .covariant import (
    PhaseSpaceDensity,
    SmearingMeasure,
    _batch_momentum,
    _restrict,
    smear,
)
from .reporting import BoundCheck, floor_check

_COMPLETENESS_TOL = 1e-6
_PEAK_CELL_MASS = 0.5


def probe_grid(grid: GridSpec, lam: float) -> GridSpec:
    """Grid a probe must live on to couple to `grid` at strength lam."""
    if not lam > 0:
        raise ParameterError(f"coupling must be positive, got {lam}")
    return GridSpec(
        n_points=grid.n_points,
        x_min=lam * grid.x_min,
        dx=lam * grid.dx,
        hbar=grid.hbar,
    )


@dataclass(frozen=True)
class SequentialInstrument:
    """Finite Kraus family of one approximate position measurement.

    `kraus_factors[i, j]` multiplies the object amplitude at cell j for
    outcome cell i on the extended outcome lattice `outcomes`.
    """

    grid: GridSpec
    probe: WaveFunction
    lam: float
    outcomes: np.ndarray
    kraus_factors: np.ndarray
    mu: SmearingMeasure
    nu: SmearingMeasure
    completeness_defect: float

    def measure(self, psi: WaveFunction) -> ProbabilityDensity:
        """Outcome density of the position readout in state psi."""
        amps = _object_amps(self, psi)
        dens = (np.abs(self.kraus_factors) ** 2) @ (np.abs(amps) ** 2) * self.grid.dx
        return ProbabilityDensity(self.outcomes, dens, kind="outcome")

    def bin_probabilities(self, psi: WaveFunction, bin_cells: int = 1) -> np.ndarray:
        """Outcome masses grouped into runs of `bin_cells` cells."""
        if bin_cells < 1:
            raise ParameterError("bin_cells must be a positive integer")
        dens = self.measure(psi)
        masses = dens.weights * dens.spacing
        n_bins = int(np.ceil(masses.size / bin_cells))
        out = np.zeros(n_bins)
        for b in range(n_bins):
            out[b] = np.sum(masses[b * bin_cells : (b + 1) * bin_cells])
        return out


def _object_amps(inst: SequentialInstrument, psi: WaveFunction) -> np.ndarray:
    if psi.grid != inst.grid:
        raise GridError("state grid does not match the instrument grid")
    return as_position(psi).amplitudes


def build_instrument(
    probe: WaveFunction, lam: float, grid: GridSpec
) -> SequentialInstrument:
    """Assemble the instrument for a probe profile at coupling lam.

    The probe must live on `probe_grid(grid, lam)`; probes concentrating
    more than half their mass in one cell are rejected as too spiky for
    faithful sampling.
    """
    want = probe_grid(grid, lam)
    pg = probe.grid
    if (
        pg.n_points != want.n_points
        or abs(pg.dx - want.dx) > 1e-9 * want.dx
        or abs(pg.x_min - want.x_min) > 1e-9 * want.dx
        or abs(pg.hbar - want.hbar) > 1e-12 * want.hbar
    ):
        raise GridError(
            "probe grid must match probe_grid(grid, lam): "
            f"n={want.n_points}, dx={want.dx}, x_min={want.x_min}"
        )
    if not grid.is_centered():
        raise GridError("sequential instrument requires a centered grid")
    p_amps = as_position(probe).amplitudes
    peak_mass = float(np.max(np.abs(p_amps) ** 2) * pg.dx)
    if peak_mass > _PEAK_CELL_MASS:
        raise ProbeValidityError(
            f"probe puts mass {peak_mass:.3f} in one cell; too spiky to sample"
        )
    n = grid.n_points
    half = n // 2
    # outcome lattice: all cells the smearing convolution can reach
    out_idx = np.arange(-half, n + half - 1)
    outcomes = grid.x_min + out_idx * grid.dx
    # kraus_factors[i, j] = sqrt(lam) * Psi_p[half + out_idx[i] - j]
    probe_padded = np.zeros(3 * n, dtype=complex)
    probe_padded[n : 2 * n] = p_amps
    cols = np.arange(n)
    idx = n + half + out_idx[:, None] - cols[None, :]
    factors = np.sqrt(lam) * probe_padded[idx]
    comp = np.sum(np.abs(factors) ** 2, axis=0) * grid.dx
    defect = float(np.max(np.abs(comp - 1.0)))
    if defect > _COMPLETENESS_TOL:
        raise ProbeValidityError(
            f"Kraus completeness defect {defect:.2e} exceeds {_COMPLETENESS_TOL}"
        )
    mu_weights = lam * np.abs(p_amps) ** 2
    mu = SmearingMeasure.from_density(
        ProbabilityDensity(pg.x / lam, mu_weights, kind="measure")
    )
    phat = to_momentum(probe).amplitudes
    k = np.arange(n)
    nu_weights = (np.abs(phat) ** 2)[(n - k) % n] / lam
    nu = SmearingMeasure.from_density(
        ProbabilityDensity(grid.p, nu_weights, kind="measure")
    )
    return SequentialInstrument(
        grid=grid, probe=probe, lam=lam, outcomes=outcomes,
        kraus_factors=factors, mu=mu, nu=nu, completeness_defect=defect,
    )


def posterior_state(
    inst: SequentialInstrument, psi: WaveFunction, q: float
) -> tuple[WaveFunction, float]:
    """Normalized post-measurement state and outcome density at q.

    q is snapped to the nearest outcome cell; conditioning on an outcome
    of numerically vanishing probability is refused.
    """
    amps = _object_amps(inst, psi)
    i = int(np.argmin(np.abs(inst.outcomes - q)))
    if abs(inst.outcomes[i] - q) > 0.5 * inst.grid.dx * (1 + 1e-9):
        raise ParameterError(f"outcome {q} lies outside the outcome lattice")
    raw = inst.kraus_factors[i] * amps
    norm2 = float(np.sum(np.abs(raw) ** 2) * inst.grid.dx)
    if norm2 < 1e-280:
        raise ConditioningError(f"outcome {q} has numerically zero probability")
    post = WaveFunction.from_samples(inst.grid, raw)
    return post, norm2


def sequential_joint(inst: SequentialInstrument, psi: WaveFunction) -> PhaseSpaceDensity:
    """Joint density of the position readout and the final sharp momentum.

    Marginals are attached as references: the position marginal is the
    probe-smeared position density on the full outcome lattice, and the
    momentum marginal is the probe-smeared momentum density restricted
    to the grid window.
    """
    amps = _object_amps(inst, psi)
    rows = inst.kraus_factors * amps[None, :]
    hat = _batch_momentum(inst.grid, rows)
    H = np.abs(hat) ** 2
    q_ref = smear(position_density(psi), inst.mu)
    p_ref = _restrict(smear(momentum_density(psi), inst.nu), inst.grid.p)
    return PhaseSpaceDensity(
        inst.outcomes, inst.grid.p, H, q_marginal_ref=q_ref, p_marginal_ref=p_ref
    )


def T_for(inst: SequentialInstrument) -> DensityMatrixT:
    """Generating kernel whose covariant observable reproduces the joint.

    The kernel state is the conjugated parity image of the rescaled
    probe, so its phase-space density equals `sequential_joint` for
    every input state, and its marginal measures are exactly mu and nu.
    """
    p_amps = as_position(inst.probe).amplitudes
    n = inst.grid.n_points
    j = np.arange(n)
    chi = np.conj(p_amps[(n - j) % n])
    eta = WaveFunction.from_samples(inst.grid, chi)
    return pure_density(eta)


@dataclass(frozen=True)
class DisturbanceReport:
    prior_momentum: ProbabilityDensity
    post_momentum: ProbabilityDensity
    variance_added: float
    stderr_product: float
    distance_product: float
    error_bar_product: float
    eps1: float
    eps2: float
    checks: tuple[BoundCheck, ...]
    conjecture_log: dict


def disturbance_report(
    inst: SequentialInstrument,
    psi: WaveFunction,
    eps1: float = 0.05,
    eps2: float = 0.05,
) -> DisturbanceReport:
    """Accuracy-disturbance scorecard for one instrument and state.

    The position-accuracy figures come from mu, the momentum-disturbance
    figures from nu, and all three products are checked against the same
    floors that constrain any approximate joint measurement.
    """
    if not (0.0 < eps1 < 0.5 and 0.0 < eps2 < 0.5):
        raise ParameterError("confidence levels must lie in (0, 0.5)")
    hbar = inst.grid.hbar
    prior = momentum_density(psi)
    joint = sequential_joint(inst, psi)
    post = joint.p_marginal()
    mu, nu = inst.mu, inst.nu
    stderr_product = float(
        np.sqrt(mu.first_moment**2 + mu.variance)
        * np.sqrt(nu.first_moment**2 + nu.variance)
    )
    distance_product = mu.abs_first_moment * nu.abs_first_moment
    w1 = overall_width(mu.density, eps1).width
    w2 = overall_width(nu.density, eps2).width
    error_bar_product = w1 * w2
    width_floor = 2.0 * np.pi * hbar * (1.0 - eps1 - eps2) ** 2
    checks = (
        floor_check("joint.stderr-product", stderr_product, hbar / 2.0),
        floor_check(
            "joint.distance-product", distance_product, 0.3047 * hbar, rel_tol=1e-2
        ),
        floor_check("joint.errorbar-product", error_bar_product, width_floor),
        floor_check(
            "joint.noise-product", mu.variance * nu.variance, hbar**2 / 4.0
        ),
    )
    conjecture_log = {
        "noise_stddev_product": float(np.sqrt(mu.variance * nu.variance)),
        "noise_candidate_floor_linear": hbar / 2.0,
        "noise_candidate_floor_quadratic": hbar**2 / 4.0,
        "resolution_width_product": error_bar_product,
        "resolution_candidate_floor": width_floor,
    }
    return DisturbanceReport(
        prior_momentum=prior,
        post_momentum=post,
        variance_added=post.variance() - prior.variance(),
        stderr_product=stderr_product,
        distance_product=distance_product,
        error_bar_product=error_bar_product,
        eps1=eps1,
        eps2=eps2,
        checks=checks,
        conjecture_log=conjecture_log,
    )
