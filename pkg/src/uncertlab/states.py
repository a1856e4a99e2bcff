"""Reference state families and density matrices.

The Gaussian family eta_{a,b}(x) ~ exp(-(a+i*b)*x**2), optionally boosted
and shifted, spans every admissible pair of position/momentum spreads:

    Var(Q) = 1/(4a),        Var(P) = hbar**2 * (a**2 + b**2)/a,

with equality Var(Q)*Var(P) = hbar**2/4 exactly when b = 0.  Box states
provide the complementary sharp-support regime: bounded position support,
slowly decaying momentum tails.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    CostLimitError,
    ParameterError,
    ResolutionError,
)
from .grids import (
    GridSpec,
    WaveFunction,
    as_momentum,
    require_no_aliasing,
    transform_matrix,
)

_DENSE_LIMIT = 1024


def gaussian(
    grid: GridSpec, a: float, b: float = 0.0, boost: float = 0.0, shift: float = 0.0
) -> WaveFunction:
    """Gaussian state exp(i*boost*x) * eta_{a,b}(x - shift).

    Parameters
    ----------
    a, b : float
        Real and imaginary quadratic coefficients; a must be positive.
        b != 0 adds chirp: position spread unchanged, momentum spread grown.
    boost : float
        Phase gradient; the mean momentum is hbar*boost.
    shift : float
        Mean position.

    Raises an aliasing error when the state does not fit the window in
    either representation.
    """
    if not (a > 0.0) or not math.isfinite(a):
        raise ParameterError(f"gaussian: a must be positive, got {a}")
    for name, v in (("b", b), ("boost", boost), ("shift", shift)):
        if not math.isfinite(v):
            raise ParameterError(f"gaussian: {name} must be finite")
    x = grid.x - shift
    envelope = np.exp(-(a + 1j * b) * x**2 + 1j * boost * grid.x)
    psi = WaveFunction.from_samples(grid, envelope, rep="position")
    require_no_aliasing(psi, "gaussian (position window)")
    require_no_aliasing(as_momentum(psi), "gaussian (momentum window)")
    return psi


def snap_interval(grid: GridSpec, lo: float, hi: float) -> tuple[int, int]:
    """Indices (j0, j1) of the bin-aligned interval nearest to [lo, hi].

    j0 is the bin whose center is nearest lo + dx/2-rounding; the count is
    the rounded interval length in bins.  Both endpoints are clipped to the
    grid.  Returns an inclusive index pair.
    """
    if not (hi > lo):
        raise ParameterError(f"interval [{lo}, {hi}] is empty")
    nbins = max(1, round((hi - lo) / grid.dx))
    j0 = round((lo - grid.x_min) / grid.dx)
    j0 = max(0, min(grid.n_points - 1, j0))
    j1 = min(grid.n_points - 1, j0 + nbins - 1)
    return j0, j1


def box(grid: GridSpec, center: float, width: float) -> WaveFunction:
    """Normalized indicator state on the bin-aligned box nearest the request.

    The realized support is the snapped interval; it may differ from the
    request by up to one bin per edge.  Requires at least 4 bins of width.
    """
    if not (width > 0.0) or not math.isfinite(width):
        raise ParameterError(f"box: width must be positive, got {width}")
    if width < 4 * grid.dx:
        raise ResolutionError(
            f"box: width {width} spans fewer than 4 bins at dx = {grid.dx}"
        )
    j0, j1 = snap_interval(grid, center - width / 2.0, center + width / 2.0)
    vals = np.zeros(grid.n_points)
    vals[j0 : j1 + 1] = 1.0
    psi = WaveFunction.from_samples(grid, vals, rep="position")
    require_no_aliasing(psi, "box")
    return psi


def box_support(grid: GridSpec, center: float, width: float) -> tuple[float, float]:
    """Cell-edge endpoints of the snapped box a matching `box` call occupies."""
    j0, j1 = snap_interval(grid, center - width / 2.0, center + width / 2.0)
    return (grid.x[j0] - grid.dx / 2.0, grid.x[j1] + grid.dx / 2.0)


@dataclass(frozen=True)
class DensityMatrixT:
    """Density operator as a position kernel: trace(matrix) * dx = 1.

    `matrix[j, l]` samples rho(x_j, x_l); hermiticity and unit trace are
    enforced at construction, positivity within an eigenvalue tolerance
    of 1e-10.  Dense storage: grids beyond 1024 points are refused.
    """

    grid: GridSpec
    matrix: np.ndarray

    def __post_init__(self) -> None:
        n = self.grid.n_points
        if n > _DENSE_LIMIT:
            raise CostLimitError(f"density matrices limited to {_DENSE_LIMIT} points, got {n}")
        m = np.asarray(self.matrix, dtype=np.complex128)
        if m.shape != (n, n):
            raise ParameterError(f"matrix shape {m.shape} does not match grid ({n} points)")
        scale = max(1.0, float(np.max(np.abs(m))))
        if float(np.max(np.abs(m - m.conj().T))) > 1e-10 * scale:
            raise ParameterError("density matrix is not hermitian")
        tr = float(np.trace(m).real) * self.grid.dx
        if abs(tr - 1.0) > 1e-8:
            raise ParameterError(f"density matrix trace {tr!r} != 1")
        evals = np.linalg.eigvalsh(m * self.grid.dx)
        if float(evals.min()) < -1e-10:
            raise ParameterError(
                f"density matrix has negative weight {float(evals.min()):.3e}"
            )
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def position_density_weights(self) -> np.ndarray:
        return np.clip(np.diagonal(self.matrix).real, 0.0, None)

    def momentum_density_weights(self) -> np.ndarray:
        u = transform_matrix(self.grid)
        plain = self.matrix * self.grid.dx
        kernel_p = (u @ plain @ u.conj().T) / self.grid.dp
        return np.clip(np.diagonal(kernel_p).real, 0.0, None)

    def purity(self) -> float:
        plain = self.matrix * self.grid.dx
        return float(np.trace(plain @ plain).real)

    def eigenstates(self, cutoff: float = 1e-12) -> tuple[np.ndarray, list[WaveFunction]]:
        """Spectral decomposition; weights descending, states normalized."""
        plain = self.matrix * self.grid.dx
        vals, vecs = np.linalg.eigh(plain)
        order = np.argsort(vals)[::-1]
        vals = vals[order]
        keep = vals > cutoff
        states = [
            WaveFunction.from_samples(self.grid, vecs[:, order[i]], rep="position")
            for i in range(len(vals))
            if keep[i]
        ]
        return vals[keep], states


def pure_density(phi: WaveFunction) -> DensityMatrixT:
    """Rank-one density matrix |phi><phi| in the position kernel convention."""
    if phi.rep != "position":
        raise ParameterError("pure_density expects a position-representation state")
    return DensityMatrixT(phi.grid, np.outer(phi.amplitudes, phi.amplitudes.conj()))


def mixture(parts: list[DensityMatrixT], weights: list[float]) -> DensityMatrixT:
    if len(parts) != len(weights) or not parts:
        raise ParameterError("mixture needs matching, nonempty parts and weights")
    w = np.asarray(weights, dtype=float)
    if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-12:
        raise ParameterError("mixture weights must be nonnegative and sum to 1")
    grid = parts[0].grid
    for t in parts[1:]:
        if t.grid != grid:
            raise ParameterError("mixture parts must share one grid")
    m = sum(wi * t.matrix for wi, t in zip(w, parts))
    return DensityMatrixT(grid, m)


def parity_conjugate(t: DensityMatrixT) -> DensityMatrixT:
    """Density matrix of the spatially inverted state, exact on centered grids."""
    n = t.grid.n_points
    idx = (n - np.arange(n)) % n
    return DensityMatrixT(t.grid, t.matrix[np.ix_(idx, idx)])
