"""Exception and warning types shared across the package."""


class UncertLabError(Exception):
    """Base class for all package-specific errors."""


class ParameterError(UncertLabError, ValueError):
    """A caller-supplied parameter is outside its admissible range."""


class GridError(UncertLabError, ValueError):
    """Grid is unsuitable: wrong symmetry, incommensurate periods, or mismatched spacing."""


class RepresentationError(UncertLabError, ValueError):
    """Operation applied to a wave function in the wrong representation."""


class AliasingError(UncertLabError, ValueError):
    """Requested state carries non-negligible weight near the window boundary."""


class UncertaintyViolationError(ParameterError):
    """Requested spread combination is below the admissible floor."""


class ResolutionError(ParameterError):
    """Requested feature is too fine for the grid spacing."""


class CoverageError(ParameterError):
    """A density does not carry enough probability for the requested confidence."""


class ConditioningError(ParameterError):
    """Conditioning on an outcome of (numerically) zero probability."""


class ProbeValidityError(ParameterError):
    """Probe state is unusable for the requested model (spiky or misplaced)."""


class CostLimitError(UncertLabError, ValueError):
    """Problem size exceeds the dense-solver budget this package commits to."""


class NumericsError(UncertLabError, RuntimeError):
    """An internal numerical step failed to reach its stated reliability."""


class UsageError(UncertLabError, ValueError):
    """Malformed command-line invocation or scenario file."""


class UntrustedMomentWarning(UserWarning):
    """Moments were computed from a density with visible window-edge mass."""


class BoundaryAliasingWarning(UserWarning):
    """An operation moved state weight close to the window boundary."""


class ConvergenceWarning(UserWarning):
    """An iterative search stopped outside its expected landing zone."""
