"""Uniform grids, discrete wave functions, and the exact transform pair.

Conventions
-----------
Position samples sit at ``x_j = x_min + j*dx`` for ``j = 0..n-1``.  The
momentum grid is centered, ``p_k = (k - n//2)*dp`` with
``dp = 2*pi*hbar/(n*dx)``, so both windows are symmetric about zero up to
one bin when the position grid is centered.

The transform used throughout is

    psihat(p_k) = (2*pi*hbar)**-0.5 * dx * sum_j exp(-i*p_k*x_j/hbar) * psi(x_j)

together with its adjoint.  On the centered momentum grid this map is
exactly unitary between l2(dx) and l2(dp): norms and inner products are
preserved to machine precision, independent of how well the state is
resolved.  All statistical guarantees downstream lean on that exactness.

States are expected to keep essentially no weight (< 1e-10) in the outer
5% of the window on each side; several constructors and shift operations
enforce or warn about this.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import cached_property
from typing import Literal

import numpy as np

from .errors import (
    AliasingError,
    BoundaryAliasingWarning,
    CostLimitError,
    GridError,
    ParameterError,
    RepresentationError,
)

Representation = Literal["position", "momentum"]

#: fraction of bins, per side, treated as the untrusted boundary region
EDGE_FRACTION = 0.05

#: mass allowed in the boundary region before a state counts as aliased
EDGE_MASS_TOL = 1e-10

_DENSE_LIMIT = 1024


@dataclass(frozen=True)
class GridSpec:
    """Uniform position grid plus the matched centered momentum grid.

    Parameters
    ----------
    n_points : int
        Number of samples, at least 16.
    x_min : float
        Coordinate of the first sample.
    dx : float
        Positive sample spacing.
    hbar : float
        Positive scale constant entering the transform kernel.
    """

    n_points: int
    x_min: float
    dx: float
    hbar: float = 1.0

    def __post_init__(self) -> None:
        if self.n_points < 16:
            raise ParameterError(f"n_points must be >= 16, got {self.n_points}")
        # the transform's alternating-sign phase fold assumes an even count
        if self.n_points % 2:
            raise ParameterError(f"n_points must be even, got {self.n_points}")
        if not (self.dx > 0.0) or not math.isfinite(self.dx):
            raise ParameterError(f"dx must be positive and finite, got {self.dx}")
        if not (self.hbar > 0.0) or not math.isfinite(self.hbar):
            raise ParameterError(f"hbar must be positive, got {self.hbar}")
        if not math.isfinite(self.x_min):
            raise ParameterError("x_min must be finite")

    @classmethod
    def centered(cls, n_points: int, extent: float, hbar: float = 1.0) -> "GridSpec":
        """Grid of total width `extent`, symmetric about the origin."""
        if not isinstance(n_points, int) or n_points < 16:
            raise ParameterError(f"n_points must be an integer >= 16, got {n_points}")
        if not (extent > 0.0):
            raise ParameterError(f"extent must be positive, got {extent}")
        dx = extent / n_points
        return cls(n_points=n_points, x_min=-(n_points // 2) * dx, dx=dx, hbar=hbar)

    @property
    def dp(self) -> float:
        return 2.0 * math.pi * self.hbar / (self.n_points * self.dx)

    @property
    def length(self) -> float:
        return self.n_points * self.dx

    @property
    def p_min(self) -> float:
        return -(self.n_points // 2) * self.dp

    @cached_property
    def x(self) -> np.ndarray:
        v = self.x_min + self.dx * np.arange(self.n_points)
        v.setflags(write=False)
        return v

    @cached_property
    def p(self) -> np.ndarray:
        v = (np.arange(self.n_points) - self.n_points // 2) * self.dp
        v.setflags(write=False)
        return v

    def is_centered(self, tol: float = 1e-9) -> bool:
        return abs(self.x_min + (self.n_points // 2) * self.dx) <= tol * self.dx

    def spacing(self, rep: Representation) -> float:
        return self.dx if rep == "position" else self.dp

    def coords(self, rep: Representation) -> np.ndarray:
        return self.x if rep == "position" else self.p

    def edge_slices(self) -> tuple[slice, slice]:
        """Index ranges of the boundary region (outer 5% on each side)."""
        m = max(1, int(math.ceil(EDGE_FRACTION * self.n_points)))
        return slice(0, m), slice(self.n_points - m, self.n_points)


def _validate_rep(rep: str) -> None:
    if rep not in ("position", "momentum"):
        raise RepresentationError(f"rep must be 'position' or 'momentum', got {rep!r}")


@dataclass(frozen=True)
class WaveFunction:
    """Normalized sampled wave function in one representation.

    `amplitudes[j]` is the value at the j-th grid coordinate of the active
    representation; the squared modulus times the grid spacing sums to one
    within 1e-9 (enforced at construction).
    """

    grid: GridSpec
    amplitudes: np.ndarray
    rep: Representation = "position"

    def __post_init__(self) -> None:
        _validate_rep(self.rep)
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if amps.shape != (self.grid.n_points,):
            raise ParameterError(
                f"amplitudes shape {amps.shape} does not match grid with "
                f"{self.grid.n_points} points"
            )
        if not np.all(np.isfinite(amps.view(np.float64))):
            raise ParameterError("amplitudes must be finite")
        amps = amps.copy()
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)
        nrm = self.norm()
        if abs(nrm - 1.0) > 1e-9:
            raise ParameterError(f"state not normalized: |psi| = {nrm!r}")

    @classmethod
    def from_samples(
        cls, grid: GridSpec, values: np.ndarray, rep: Representation = "position"
    ) -> "WaveFunction":
        """Build from arbitrary samples, normalizing in the grid measure."""
        _validate_rep(rep)
        v = np.asarray(values, dtype=np.complex128)
        nrm = math.sqrt(float(np.sum(np.abs(v) ** 2)) * grid.spacing(rep))
        if nrm <= 0.0 or not math.isfinite(nrm):
            raise ParameterError("cannot normalize: samples have zero or invalid norm")
        return cls(grid=grid, amplitudes=v / nrm, rep=rep)

    @property
    def coords(self) -> np.ndarray:
        return self.grid.coords(self.rep)

    @property
    def spacing(self) -> float:
        return self.grid.spacing(self.rep)

    def norm(self) -> float:
        return math.sqrt(float(np.sum(np.abs(self.amplitudes) ** 2)) * self.spacing)

    def inner(self, other: "WaveFunction") -> complex:
        """Scalar product <self|other>; both states must share grid and rep."""
        if other.grid != self.grid or other.rep != self.rep:
            raise GridError("inner product requires identical grid and representation")
        return complex(np.vdot(self.amplitudes, other.amplitudes) * self.spacing)

    def density_weights(self) -> np.ndarray:
        """Probability density values on the active grid (sum * spacing = 1)."""
        return np.abs(self.amplitudes) ** 2


def boundary_mass(psi: WaveFunction) -> float:
    """Probability carried by the outer 5% of the window on each side."""
    lo, hi = psi.grid.edge_slices()
    w = psi.density_weights()
    return float((w[lo].sum() + w[hi].sum()) * psi.spacing)


def _forward_phases(grid: GridSpec) -> tuple[np.ndarray, np.ndarray]:
    n = grid.n_points
    signs = np.where(np.arange(n) % 2 == 0, 1.0, -1.0)
    pref = (grid.dx / math.sqrt(2.0 * math.pi * grid.hbar)) * np.exp(
        -1j * grid.p * grid.x_min / grid.hbar
    )
    return signs, pref


def momentum_samples(psi: WaveFunction) -> np.ndarray:
    """Momentum-representation samples of a position-representation state."""
    if psi.rep != "position":
        raise RepresentationError("momentum_samples expects a position-representation state")
    signs, pref = _forward_phases(psi.grid)
    return pref * np.fft.fft(signs * psi.amplitudes)


def to_momentum(psi: WaveFunction) -> WaveFunction:
    """Unitary change to the momentum representation."""
    return WaveFunction(psi.grid, momentum_samples(psi), rep="momentum")


def to_position(psi: WaveFunction) -> WaveFunction:
    """Unitary change back to the position representation."""
    if psi.rep != "momentum":
        raise RepresentationError("to_position expects a momentum-representation state")
    grid = psi.grid
    signs, pref = _forward_phases(grid)
    tmp = np.fft.ifft(psi.amplitudes / pref) * signs
    return WaveFunction(grid, tmp, rep="position")


def as_position(psi: WaveFunction) -> WaveFunction:
    return psi if psi.rep == "position" else to_position(psi)


def as_momentum(psi: WaveFunction) -> WaveFunction:
    return psi if psi.rep == "momentum" else to_momentum(psi)


def transform_matrix(grid: GridSpec) -> np.ndarray:
    """Unitary matrix of the position-to-momentum map on coefficient vectors.

    Acts on coefficients c_j = sqrt(dx)*psi(x_j) and returns coefficients
    sqrt(dp)*psihat(p_k); the matrix is exactly unitary.  Dense: refuses
    grids beyond 1024 points.
    """
    n = grid.n_points
    if n > _DENSE_LIMIT:
        raise CostLimitError(f"dense transform matrix limited to {_DENSE_LIMIT} points, got {n}")
    scale = math.sqrt(grid.dx * grid.dp / (2.0 * math.pi * grid.hbar))
    phase = np.exp(-1j * np.outer(grid.p, grid.x) / grid.hbar)
    return scale * phase


def weyl_shift(psi: WaveFunction, q: float, p: float) -> WaveFunction:
    """Phase-space displacement by (q, p).

    Applies exp(-i*q*p/(2*hbar)) * boost(p) * translate(q) so that the
    displacements compose with the canonical symplectic phase.  Translation
    is performed in the momentum representation and is exactly unitary;
    a state shifted into the boundary region triggers a warning.
    """
    if not (math.isfinite(q) and math.isfinite(p)):
        raise ParameterError("shift parameters must be finite")
    grid = psi.grid
    work = as_position(psi)
    hat = momentum_samples(work)
    hat = hat * np.exp(-1j * q * grid.p / grid.hbar)
    shifted = to_position(WaveFunction(grid, hat, rep="momentum"))
    amps = shifted.amplitudes * np.exp(1j * p * grid.x / grid.hbar)
    amps = amps * np.exp(-1j * q * p / (2.0 * grid.hbar))
    out = WaveFunction(grid, amps, rep="position")
    if boundary_mass(out) > EDGE_MASS_TOL:
        warnings.warn(
            f"shift ({q}, {p}) leaves {boundary_mass(out):.2e} probability near the "
            "window boundary; moments of this state are untrusted",
            BoundaryAliasingWarning,
            stacklevel=2,
        )
    return out if psi.rep == "position" else to_momentum(out)


def parity(psi: WaveFunction) -> WaveFunction:
    """Spatial inversion through the origin, exact on centered grids."""
    if psi.rep == "position" and not psi.grid.is_centered():
        raise GridError("parity requires a grid symmetric about the origin")
    n = psi.grid.n_points
    idx = (n - np.arange(n)) % n
    return WaveFunction(psi.grid, psi.amplitudes[idx], rep=psi.rep)


def require_no_aliasing(psi: WaveFunction, context: str) -> None:
    """Raise if the state carries visible weight in the boundary region."""
    m = boundary_mass(psi)
    if m > EDGE_MASS_TOL:
        raise AliasingError(
            f"{context}: state leaves {m:.3e} probability in the outer 5% of the "
            "window; enlarge the window or move the state"
        )


def gridspec_to_dict(grid: GridSpec) -> dict:
    return {
        "n_points": grid.n_points,
        "x_min": grid.x_min,
        "dx": grid.dx,
        "hbar": grid.hbar,
    }


def gridspec_from_dict(d: dict) -> GridSpec:
    try:
        return GridSpec(
            n_points=int(d["n_points"]),
            x_min=float(d["x_min"]),
            dx=float(d["dx"]),
            hbar=float(d["hbar"]),
        )
    except KeyError as exc:
        raise ParameterError(f"grid header missing field {exc}") from exc
