"""Joint concentration of position and momentum on bounded sets.

For an interval X of positions and Y of momenta, the compression of the
band-limiting projector P(Y) to the support of Q(X) has largest
eigenvalue a0 < 1, and no state can have prob(Q in X) + prob(P in Y)
above 1 + sqrt(a0).  The trace of that compression is exactly
|X|*|Y| / (2*pi*hbar) on the lattice, which pins how much room the pair
of sets offers.  Demanding both probabilities close to one forces the
phase-space area |X|*|Y| above a floor a few times 2*pi*hbar.

Periodic set functions of position and momentum, by contrast, can commute
exactly: on an n-point lattice, cell masks with m_a bins per position
period and m_b bins per momentum period commute precisely when
m_a * m_b divides n, i.e. when 2*pi*hbar/(a*b) is a positive integer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    CostLimitError,
    GridError,
    NumericsError,
    ParameterError,
)
from .grids import GridSpec, WaveFunction, transform_matrix

_DENSE_LIMIT = 1024


@dataclass(frozen=True)
class OperatorMatrix:
    """Dense operator on coefficient vectors c_j = sqrt(dx) * psi(x_j).

    In this convention projections are exactly idempotent matrices and the
    matrix trace equals the operator trace.  The hermitian flag is checked
    at construction.
    """

    grid: GridSpec
    matrix: np.ndarray
    hermitian: bool = True

    def __post_init__(self) -> None:
        n = self.grid.n_points
        if n > _DENSE_LIMIT:
            raise CostLimitError(f"dense operators limited to {_DENSE_LIMIT} points, got {n}")
        m = np.asarray(self.matrix, dtype=np.complex128)
        if m.shape != (n, n):
            raise ParameterError(f"matrix shape {m.shape} does not match grid ({n} points)")
        if self.hermitian:
            scale = max(1.0, float(np.max(np.abs(m))))
            if float(np.max(np.abs(m - m.conj().T))) > 1e-12 * scale:
                raise ParameterError("matrix marked hermitian is not")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def expectation(self, psi: WaveFunction) -> float | complex:
        if psi.grid != self.grid:
            raise GridError("operator and state live on different grids")
        if psi.rep != "position":
            raise ParameterError("expectation expects a position-representation state")
        c = psi.amplitudes * math.sqrt(self.grid.dx)
        val = complex(np.vdot(c, self.matrix @ c))
        return val.real if self.hermitian else val

    def trace(self) -> float | complex:
        val = complex(np.trace(self.matrix))
        return val.real if self.hermitian else val


def _interval_mask(coords: np.ndarray, spacing: float, lo: float, hi: float) -> np.ndarray:
    if not (hi > lo):
        raise ParameterError(f"interval [{lo}, {hi}] is empty")
    tol = 1e-9 * spacing
    mask = (coords >= lo - tol) & (coords <= hi + tol)
    if not mask.any():
        raise ParameterError(f"interval [{lo}, {hi}] contains no grid point")
    return mask


def position_mask(grid: GridSpec, lo: float, hi: float) -> np.ndarray:
    """Boolean mask of position bins whose centers fall in [lo, hi]."""
    return _interval_mask(grid.x, grid.dx, lo, hi)


def momentum_mask(grid: GridSpec, lo: float, hi: float) -> np.ndarray:
    """Boolean mask of momentum bins whose centers fall in [lo, hi]."""
    return _interval_mask(grid.p, grid.dp, lo, hi)


def projector_position(
    grid: GridSpec, intervals: tuple[float, float] | list[tuple[float, float]]
) -> OperatorMatrix:
    """Spectral projection of position onto a snapped interval or union."""
    if isinstance(intervals, tuple) and len(intervals) == 2 and not isinstance(
        intervals[0], tuple
    ):
        intervals = [intervals]
    mask = np.zeros(grid.n_points, dtype=bool)
    for lo, hi in intervals:
        mask |= position_mask(grid, lo, hi)
    return OperatorMatrix(grid, np.diag(mask.astype(np.complex128)))


def projector_momentum(grid: GridSpec, lo: float, hi: float) -> OperatorMatrix:
    """Spectral projection of momentum onto the snapped interval [lo, hi]."""
    mask = momentum_mask(grid, lo, hi)
    u = transform_matrix(grid)
    m = (u.conj().T * mask.astype(float)) @ u
    return OperatorMatrix(grid, m)


@dataclass(frozen=True)
class A0Result:
    """Largest concentration eigenvalue for an interval pair, plus context.

    `length_x` and `length_y` are the snapped lengths actually represented
    on the lattice; `trace` is the full trace of the compressed projector,
    equal to length_x * length_y / (2*pi*hbar) exactly.
    """

    a0: float
    trace: float
    length_x: float
    length_y: float
    count_x: int
    count_y: int


def _a0_from_masks(grid: GridSpec, mask_x: np.ndarray, mask_y: np.ndarray) -> A0Result:
    jx = np.nonzero(mask_x)[0]
    ky = np.nonzero(mask_y)[0]
    scale = math.sqrt(grid.dx * grid.dp / (2.0 * math.pi * grid.hbar))
    # cross block of the unitary transform; Gram of either side gives the
    # compressed projector without touching an n-by-n matrix
    b = scale * np.exp(-1j * np.outer(grid.p[ky], grid.x[jx]) / grid.hbar)
    if len(jx) <= len(ky):
        gram = b.conj().T @ b
    else:
        gram = b @ b.conj().T
    evals = np.linalg.eigvalsh(gram)
    a0 = float(evals[-1])
    a0 = min(max(a0, 0.0), 1.0)
    trace = float(np.sum(np.abs(b) ** 2))
    return A0Result(
        a0=a0,
        trace=trace,
        length_x=len(jx) * grid.dx,
        length_y=len(ky) * grid.dp,
        count_x=len(jx),
        count_y=len(ky),
    )


def largest_a0(
    grid: GridSpec, x_interval: tuple[float, float], y_interval: tuple[float, float]
) -> A0Result:
    """Largest eigenvalue of Q(X) P(Y) Q(X) for snapped intervals X, Y.

    Depends on the pair only through the area |X|*|Y| (up to lattice
    granularity); compare against the reported snapped lengths.
    """
    if grid.n_points > _DENSE_LIMIT:
        raise CostLimitError(f"largest_a0 limited to {_DENSE_LIMIT} points")
    mask_x = position_mask(grid, *x_interval)
    mask_y = momentum_mask(grid, *y_interval)
    return _a0_from_masks(grid, mask_x, mask_y)


@dataclass(frozen=True)
class LocalizationResult:
    value: float
    a0: float
    state: WaveFunction


def optimal_localization(
    grid: GridSpec, x_interval: tuple[float, float], y_interval: tuple[float, float]
) -> LocalizationResult:
    """Best possible prob(Q in X) + prob(P in Y) and the state achieving it.

    The optimum is the top eigenvalue of Q(X) + P(Y); spectrally it equals
    1 + sqrt(a0), which `a0` reports independently for cross-checking.
    Dense: refuses grids beyond 1024 points.
    """
    if grid.n_points > _DENSE_LIMIT:
        raise CostLimitError(
            f"optimal_localization is dense, limited to {_DENSE_LIMIT} points"
        )
    mask_x = position_mask(grid, *x_interval)
    mask_y = momentum_mask(grid, *y_interval)
    u = transform_matrix(grid)
    p_mat = (u.conj().T * mask_y.astype(float)) @ u
    q_plus_p = np.diag(mask_x.astype(np.complex128)) + p_mat
    evals, evecs = np.linalg.eigh(q_plus_p)
    value = float(evals[-1])
    state = WaveFunction.from_samples(grid, evecs[:, -1], rep="position")
    sub = _a0_from_masks(grid, mask_x, mask_y)
    return LocalizationResult(value=value, a0=sub.a0, state=state)


def _count_mask(n: int, count: int) -> np.ndarray:
    mask = np.zeros(n, dtype=bool)
    start = (n - count) // 2
    mask[start : start + count] = True
    return mask


def min_area_for_confidence(grid: GridSpec, eps1: float, eps2: float) -> float:
    """Smallest |X|*|Y| allowing prob(Q in X), prob(P in Y) >= 1-eps1, 1-eps2.

    Searches centered, near-square interval pairs: bisection on the area of
    a balanced pair, then an integer refinement over neighboring snapped
    shapes.  The returned area is the snapped product actually realized on
    the lattice, so its granularity is one bin per side.
    """
    for e in (eps1, eps2):
        if not (0.0 < e < 1.0):
            raise ParameterError(f"confidence level must lie in (0, 1), got {e}")
    if eps1 + eps2 >= 1.0:
        raise ParameterError("eps1 + eps2 must stay below 1; no bound exists beyond")
    target = 1.0 - eps1 - eps2
    two_pi_h = 2.0 * math.pi * grid.hbar
    x_cap = 0.7 * grid.n_points * grid.dx
    p_cap = 0.7 * grid.n_points * grid.dp

    def sqrt_a0_counts(cx: int, cy: int) -> float:
        lx, ly = cx * grid.dx, cy * grid.dp
        if lx > x_cap or ly > p_cap:
            raise NumericsError(
                "search window exceeded: grid too small for the requested confidence"
            )
        n = grid.n_points
        res = _a0_from_masks(grid, _count_mask(n, cx), _count_mask(n, cy))
        return math.sqrt(res.a0)

    def counts_for_area(s: float) -> tuple[int, int]:
        side = math.sqrt(s)
        return max(1, round(side / grid.dx)), max(1, round(side / grid.dp))

    lo, hi = 0.1 * two_pi_h, 50.0 * two_pi_h
    if sqrt_a0_counts(*counts_for_area(hi)) < target:
        raise NumericsError("bracket failure: even a large area cannot reach the target")
    if sqrt_a0_counts(*counts_for_area(lo)) >= target:
        hi = lo
    else:
        while hi - lo > 1e-3 * hi:
            mid = 0.5 * (lo + hi)
            if sqrt_a0_counts(*counts_for_area(mid)) >= target:
                hi = mid
            else:
                lo = mid
    cx0, cy0 = counts_for_area(hi)
    best = None
    for dcx in range(-3, 4):
        cx = cx0 + dcx
        if cx < 1:
            continue
        for dcy in range(-3, 4):
            cy = cy0 + dcy
            if cy < 1:
                continue
            area = cx * grid.dx * cy * grid.dp
            if best is not None and area >= best:
                continue
            if sqrt_a0_counts(cx, cy) >= target:
                best = area
    if best is None:
        best = cx0 * grid.dx * cy0 * grid.dp
    return float(best)


@dataclass(frozen=True)
class PeriodicSetFunction:
    """Indicator of a periodic set: union of sub-intervals of one period cell.

    Intervals are half-open [lo, hi) within [0, period) and must be
    disjoint.
    """

    period: float
    intervals: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        if not (self.period > 0.0) or not math.isfinite(self.period):
            raise ParameterError(f"period must be positive, got {self.period}")
        if not self.intervals:
            raise ParameterError("periodic set needs at least one interval")
        prev_hi = 0.0
        for lo, hi in sorted(self.intervals):
            if not (0.0 <= lo < hi <= self.period):
                raise ParameterError(
                    f"interval [{lo}, {hi}) must sit inside [0, {self.period})"
                )
            if lo < prev_hi - 1e-12 * self.period:
                raise ParameterError("periodic set intervals must be disjoint")
            prev_hi = hi
        object.__setattr__(self, "intervals", tuple(sorted(self.intervals)))

    def cell_mask(self, spacing: float) -> np.ndarray:
        """Boolean membership of the m sample points of one period cell."""
        m = self.period / spacing
        m_int = round(m)
        if m_int < 1 or abs(m - m_int) > 1e-9 * m:
            raise GridError(
                f"period {self.period} is not a whole number of bins at spacing {spacing}"
            )
        mask = np.zeros(m_int, dtype=bool)
        for lo, hi in self.intervals:
            r_lo = math.ceil(lo / spacing - 1e-9)
            r_hi = math.ceil(hi / spacing - 1e-9)
            mask[r_lo : min(r_hi, m_int)] = True
        if not mask.any():
            raise ParameterError("periodic set covers no grid point per cell")
        return mask


@dataclass(frozen=True)
class PeriodicCommutatorResult:
    norm: float
    ratio: float
    predicted_commuting: bool
    bins_per_x_period: int
    bins_per_p_period: int


def periodic_commutator(
    grid: GridSpec, g: PeriodicSetFunction, h: PeriodicSetFunction
) -> PeriodicCommutatorResult:
    """Operator norm of [g(Q), h(P)] for periodic indicator functions.

    Requires both periods to be commensurate with the lattice and the
    window to span at least 8 periods of each.  The pair commutes exactly
    (to rounding) when 2*pi*hbar/(a*b) = n/(m_a*m_b) is a positive
    integer, a and b being the two periods.
    """
    n = grid.n_points
    if n > _DENSE_LIMIT:
        raise CostLimitError(f"periodic_commutator is dense, limited to {_DENSE_LIMIT} points")
    if not grid.is_centered():
        raise GridError("periodic_commutator requires a centered grid")
    cell_a = g.cell_mask(grid.dx)
    cell_b = h.cell_mask(grid.dp)
    m_a, m_b = cell_a.size, cell_b.size
    for label, m, count in (("position", m_a, n // m_a), ("momentum", m_b, n // m_b)):
        if n % m != 0:
            raise GridError(f"{label} period does not divide the window ({m} bins vs {n})")
        if count < 8:
            raise GridError(
                f"window spans only {count} {label} periods; at least 8 required"
            )
    half = n // 2
    idx = np.arange(n)
    g_diag = cell_a[(idx - half) % m_a].astype(float)
    h_diag = cell_b[(idx - half) % m_b].astype(float)
    u = transform_matrix(grid)
    p_h = (u.conj().T * h_diag) @ u
    comm = g_diag[:, None] * p_h - p_h * g_diag[None, :]
    norm = float(np.max(np.abs(comm)))
    ratio = n / (m_a * m_b)
    predicted = abs(ratio - round(ratio)) < 1e-9 and round(ratio) >= 1
    return PeriodicCommutatorResult(
        norm=norm,
        ratio=ratio,
        predicted_commuting=predicted,
        bins_per_x_period=m_a,
        bins_per_p_period=m_b,
    )
