"""Exception taxonomy used across the package."""


class GpistError(Exception):
    """Base class for all package-specific failures."""


class MismatchedGridsError(GpistError):
    """Two objects that must share a grid do not."""


class GapGrowthError(GpistError):
    """Requested a Jost normalization that grows toward the interior.

    On the spectral gap (and off the real branches generally) only the
    normalizations that decay at their own end can be integrated stably.
    """


class NoZeroFoundError(GpistError):
    """The |a| scan over the gap found no dip below the acceptance gate."""


class InconsistentNormingConstantError(GpistError):
    """The two component ratios defining b0 disagree."""


class DerivativeMismatchError(GpistError):
    """Finite-difference and integral-formula values of a'(lambda0) disagree."""


class ImaginaryLeakError(GpistError):
    """An assembled Marchenko kernel has a non-negligible imaginary part."""


class PoleHitError(GpistError):
    """Finite-rank denominator within tolerance of zero."""


class IllConditionedError(GpistError):
    """Dense Marchenko system condition estimate exceeded its bound."""


class ResidualTooLargeError(GpistError):
    """Solved Marchenko kernel fails the integral-equation residual gate."""


class CFLViolationError(GpistError):
    """Requested PDE time step exceeds the explicit stability bound."""


class BoundaryContaminationError(GpistError):
    """PDE solution deviates from the clamped values near the domain edge."""


class NormalizationFailedError(GpistError):
    """A generated perturbation violates its certified weighted-sup bound."""


class StageError(GpistError):
    """Wraps a failure with the pipeline stage in which it occurred."""

    def __init__(self, stage: str, cause: BaseException | str):
        self.stage = stage
        self.cause = cause
        super().__init__(f"[{stage}] {cause}")
