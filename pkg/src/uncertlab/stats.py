"""Densities, spreads, confidence widths, and the two preparation trade-offs.

Two notions of spread are used side by side.  The standard deviation is
cheap but tail-sensitive; the overall width W_eps is the length of the
shortest interval holding probability 1 - eps and stays meaningful for
states whose variance diverges.  The corresponding lower bounds are

    Delta(Q) * Delta(P) >= hbar / 2
    W_eps1(Q) * W_eps2(P) >= 2*pi*hbar * (1 - eps1 - eps2)**2

for eps1 + eps2 < 1, together with a sharper variant of the second whose
prefactor is (sqrt((1-eps1)(1-eps2)) - sqrt(eps1*eps2))**2.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import (
    CoverageError,
    GridError,
    ParameterError,
    UncertaintyViolationError,
    UntrustedMomentWarning,
)
from .grids import GridSpec, WaveFunction, as_momentum, as_position, boundary_mass
from .states import gaussian

DensityKind = Literal["position", "momentum", "outcome", "measure"]


@dataclass(frozen=True)
class ProbabilityDensity:
    """Sampled density on a uniform 1-D lattice: sum(weights) * spacing = total.

    Weights are per-unit density values, not bin masses.  Construction
    clips negative round-off (anything below -1e-12 raises) and freezes
    the arrays.
    """

    coords: np.ndarray
    weights: np.ndarray
    kind: DensityKind = "position"

    def __post_init__(self) -> None:
        c = np.asarray(self.coords, dtype=float)
        w = np.asarray(self.weights, dtype=float)
        if c.ndim != 1 or c.shape != w.shape or c.size < 2:
            raise ParameterError("coords and weights must be equal-length 1-D arrays")
        if not (np.all(np.isfinite(c)) and np.all(np.isfinite(w))):
            raise ParameterError("density samples must be finite")
        steps = np.diff(c)
        sp = float(steps[0])
        if sp <= 0 or np.max(np.abs(steps - sp)) > 1e-9 * abs(sp):
            raise ParameterError("coords must be uniformly increasing")
        if float(w.min()) < -1e-12:
            raise ParameterError(f"negative density weight {float(w.min()):.3e}")
        w = np.clip(w, 0.0, None)
        c = c.copy()
        c.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "coords", c)
        object.__setattr__(self, "weights", w)

    @property
    def spacing(self) -> float:
        return float(self.coords[1] - self.coords[0])

    def total(self) -> float:
        return float(self.weights.sum()) * self.spacing

    def mean(self) -> float:
        return float((self.coords * self.weights).sum()) * self.spacing / self.total()

    def variance(self) -> float:
        m = self.mean()
        return float(((self.coords - m) ** 2 * self.weights).sum()) * self.spacing / self.total()

    def stddev(self) -> float:
        return math.sqrt(self.variance())

    def abs_moment(self, center: float = 0.0) -> float:
        """First absolute moment about `center`."""
        return (
            float((np.abs(self.coords - center) * self.weights).sum())
            * self.spacing
            / self.total()
        )

    def interval_prob(self, lo: float, hi: float) -> float:
        """Probability of the closed interval [lo, hi] by bin-center membership."""
        if not (hi >= lo):
            raise ParameterError(f"interval [{lo}, {hi}] is empty")
        tol = 1e-9 * self.spacing
        mask = (self.coords >= lo - tol) & (self.coords <= hi + tol)
        return float(self.weights[mask].sum()) * self.spacing

    def shifted(self, offset: float) -> "ProbabilityDensity":
        return ProbabilityDensity(self.coords + offset, self.weights, kind=self.kind)


def position_density(psi: WaveFunction) -> ProbabilityDensity:
    w = as_position(psi)
    return ProbabilityDensity(w.grid.x, w.density_weights(), kind="position")


def momentum_density(psi: WaveFunction) -> ProbabilityDensity:
    w = as_momentum(psi)
    return ProbabilityDensity(w.grid.p, w.density_weights(), kind="momentum")


def _edge_mass(d: ProbabilityDensity) -> float:
    m = max(1, int(math.ceil(0.05 * d.coords.size)))
    return float((d.weights[:m].sum() + d.weights[-m:].sum())) * d.spacing


def stddev(psi: WaveFunction, which: Literal["Q", "P"]) -> float:
    """Standard deviation of position (Q) or momentum (P) in the state.

    Emits an untrusted-moment warning when more than 1e-6 probability sits
    in the outer 5% of the relevant window; moments computed there are
    dominated by the artificial cutoff, not the state.
    """
    if which not in ("Q", "P"):
        raise ParameterError(f"which must be 'Q' or 'P', got {which!r}")
    d = position_density(psi) if which == "Q" else momentum_density(psi)
    if _edge_mass(d) > 1e-6:
        warnings.warn(
            f"{which}: {_edge_mass(d):.2e} probability near the window edge; "
            "the reported spread reflects the cutoff",
            UntrustedMomentWarning,
            stacklevel=2,
        )
    return d.stddev()


@dataclass(frozen=True)
class WidthReport:
    """Shortest covering interval of a density at confidence 1 - epsilon."""

    epsilon: float
    width: float
    interval: tuple[float, float]
    covered: float


def overall_width(density: ProbabilityDensity, epsilon: float) -> WidthReport:
    """Length of the shortest bin-aligned interval with mass >= 1 - epsilon.

    The interval is made of whole cells, so the reported width is exact on
    the lattice and over-covers the continuum value by at most one cell per
    edge.  Among minimal-length windows the leftmost is returned.
    """
    if not (0.0 < epsilon < 1.0):
        raise ParameterError(f"epsilon must lie in (0, 1), got {epsilon}")
    w = density.weights
    sp = density.spacing
    target = 1.0 - epsilon
    masses = w * sp
    total = float(masses.sum())
    if total < target - 1e-12:
        raise CoverageError(
            f"density holds {total:.6f} < {target:.6f} probability; cannot cover"
        )
    n = w.size
    best_count = n + 1
    best_i = 0
    i = 0
    acc = 0.0
    for j in range(n):
        acc += masses[j]
        while acc - masses[i] >= target - 1e-15 and i < j:
            acc -= masses[i]
            i += 1
        if acc >= target - 1e-15 and (j - i + 1) < best_count:
            best_count = j - i + 1
            best_i = i
    if best_count > n:
        raise CoverageError("no covering interval found")
    lo = float(density.coords[best_i]) - sp / 2.0
    hi = float(density.coords[best_i + best_count - 1]) + sp / 2.0
    covered = float(masses[best_i : best_i + best_count].sum())
    return WidthReport(
        epsilon=epsilon, width=best_count * sp, interval=(lo, hi), covered=covered
    )


def localization_bound(hbar: float, eps1: float, eps2: float) -> float:
    """Floor for the product of overall widths at confidence levels eps1, eps2."""
    for e in (eps1, eps2):
        if not (0.0 <= e < 1.0):
            raise ParameterError(f"epsilon must lie in [0, 1), got {e}")
    return 2.0 * math.pi * hbar * (1.0 - eps1 - eps2) ** 2 if eps1 + eps2 < 1.0 else 0.0


def localization_bound_sharp(hbar: float, eps1: float, eps2: float) -> float:
    """Sharper width-product floor; coincides with the plain one when eps1 = eps2."""
    for e in (eps1, eps2):
        if not (0.0 <= e < 1.0):
            raise ParameterError(f"epsilon must lie in [0, 1), got {e}")
    s = math.sqrt((1.0 - eps1) * (1.0 - eps2)) - math.sqrt(eps1 * eps2)
    return 2.0 * math.pi * hbar * s**2 if s > 0.0 else 0.0


@dataclass(frozen=True)
class PrepUrReport:
    delta_q: float
    delta_p: float
    product: float
    bound: float
    passed: bool
    margin: float


def check_preparation_ur(psi: WaveFunction) -> PrepUrReport:
    """Standard-deviation product against the hbar/2 floor."""
    dq = stddev(psi, "Q")
    dp = stddev(psi, "P")
    product = dq * dp
    bound = psi.grid.hbar / 2.0
    margin = product - bound
    return PrepUrReport(
        delta_q=dq,
        delta_p=dp,
        product=product,
        bound=bound,
        passed=margin >= -1e-9 * bound,
        margin=margin,
    )


@dataclass(frozen=True)
class WidthUrReport:
    eps1: float
    eps2: float
    width_q: float
    width_p: float
    product: float
    bound: float
    sharp_bound: float
    passed: bool
    passed_sharp: bool


def check_overall_width_ur(
    psi: WaveFunction, eps1: float, eps2: float
) -> WidthUrReport:
    """Overall-width product against both localization floors.

    Requires eps1, eps2 < 1/2; beyond that the floors degenerate and the
    trade-off carries no content.
    """
    for e in (eps1, eps2):
        if not (0.0 < e < 0.5):
            raise ParameterError(f"confidence level must lie in (0, 0.5), got {e}")
    wq = overall_width(position_density(psi), eps1)
    wp = overall_width(momentum_density(psi), eps2)
    product = wq.width * wp.width
    hbar = psi.grid.hbar
    bound = localization_bound(hbar, eps1, eps2)
    sharp = localization_bound_sharp(hbar, eps1, eps2)
    return WidthUrReport(
        eps1=eps1,
        eps2=eps2,
        width_q=wq.width,
        width_p=wp.width,
        product=product,
        bound=bound,
        sharp_bound=sharp,
        passed=product >= bound * (1.0 - 1e-12),
        passed_sharp=product >= sharp * (1.0 - 1e-12),
    )


def target_spreads(grid: GridSpec, delta_q: float, delta_p: float) -> WaveFunction:
    """Gaussian state with the requested position and momentum spreads.

    Solves 1/(4a) = delta_q**2 and hbar**2 (a**2 + b**2)/a = delta_p**2
    for (a, b >= 0).  Requests below the hbar/2 floor are rejected.
    """
    if not (delta_q > 0.0 and delta_p > 0.0):
        raise ParameterError("spreads must be positive")
    hbar = grid.hbar
    floor = hbar / 2.0
    if delta_q * delta_p < floor * (1.0 - 1e-12):
        raise UncertaintyViolationError(
            f"requested product {delta_q * delta_p!r} is below the floor {floor!r}"
        )
    a = 1.0 / (4.0 * delta_q**2)
    b_sq = a * delta_p**2 / hbar**2 - a**2
    b = math.sqrt(max(b_sq, 0.0))
    return gaussian(grid, a=a, b=b)


def total_variation(d1: ProbabilityDensity, d2: ProbabilityDensity) -> float:
    """Total-variation distance between two densities on one lattice."""
    if d1.coords.size != d2.coords.size:
        raise GridError("total_variation requires equal-length densities")
    if abs(d1.spacing - d2.spacing) > 1e-9 * d1.spacing or abs(
        float(d1.coords[0] - d2.coords[0])
    ) > 1e-6 * d1.spacing:
        raise GridError("total_variation requires aligned lattices")
    return 0.5 * float(np.abs(d1.weights - d2.weights).sum()) * d1.spacing
