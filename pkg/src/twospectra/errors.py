"""Exception hierarchy.

Every mathematically meaningful failure gets its own class so callers (and
the CLI exit-code mapping) can tell input mistakes apart from inconsistent
spectral data.  All classes derive from :class:`TwoSpectraError`.
"""

from __future__ import annotations


class TwoSpectraError(Exception):
    """Base class for all errors raised by this package."""


# ---------------------------------------------------------------------------
# spectrum enumeration / pairing


class DuplicateValues(TwoSpectraError):
    """Input values are not strictly increasing."""


class MultipleZeros(TwoSpectraError):
    """More than one input value lies inside the zero tolerance."""


class NotInterlacing(TwoSpectraError):
    """Two spectra do not interlace in an admissible pattern.

    ``violation`` holds the offending values (a triple where available).
    """

    def __init__(self, message: str, violation: tuple | None = None):
        super().__init__(message)
        self.violation = violation


class InconsistentShift(TwoSpectraError):
    """Shift directions detected on the two half-lines are not mirrored."""


class ZeroMismatch(TwoSpectraError):
    """Zero belongs to exactly one of the two spectra."""


# ---------------------------------------------------------------------------
# tridiagonal spectral kernel


class ConvergenceFailure(TwoSpectraError):
    """Eigenvalue iteration did not converge within the sweep cap.

    ``residual`` bounds the backward error: the magnitude of the
    off-diagonal entry that failed to deflate.
    """

    def __init__(self, message: str, residual: float = float("nan")):
        super().__init__(message)
        self.residual = residual


class PoleProximity(TwoSpectraError):
    """Evaluation point is too close to a pole for any digits to survive."""


class ZeroMFunction(TwoSpectraError):
    """Riccati step hit a zero of the previous m-function."""


# ---------------------------------------------------------------------------
# direct problem


class IndexNotFound(TwoSpectraError):
    """Requested signed index is not in the spectrum's index set."""


# ---------------------------------------------------------------------------
# inverse problem


class ZeroInSpectrum(TwoSpectraError):
    """Operation requires zero-free spectra; use the zero-case variant."""


class NonPositiveProduct(TwoSpectraError):
    """An eigenvalue ratio product came out nonpositive (corrupted pairing)."""


class HintMissing(TwoSpectraError):
    """Zero-eigenvalue reconstruction needs one auxiliary datum."""


class BoundViolated(TwoSpectraError):
    """Recovered theta^2 is on the wrong side of the zero-case product bound."""


class NonPositiveWeight(TwoSpectraError):
    """A reconstructed spectral weight is not strictly positive."""

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


class NormalizationFailure(TwoSpectraError):
    """Reconstructed weights do not sum to one within tolerance."""


class BreakdownAtStep(TwoSpectraError):
    """Recurrence-coefficient reconstruction broke down (degenerate measure).

    ``step`` is the 1-based index of the off-diagonal entry that collapsed.
    """

    def __init__(self, message: str, step: int):
        super().__init__(message)
        self.step = step


class ForwardCheckFailure(TwoSpectraError):
    """Round-trip verification of a reconstruction exceeded tolerance."""

    def __init__(self, message: str, max_residual: float = float("nan")):
        super().__init__(message)
        self.max_residual = max_residual


# ---------------------------------------------------------------------------
# admissibility


class MomentOverflow(TwoSpectraError, OverflowError):
    """Moments left the representable range before the requested order.

    ``largest_safe_order`` is the largest Hankel order whose moments are
    all finite.
    """

    def __init__(self, message: str, largest_safe_order: int):
        super().__init__(message)
        self.largest_safe_order = largest_safe_order


# ---------------------------------------------------------------------------
# mass-spring chains


class InadmissibleSeed(TwoSpectraError):
    """Chain recursion produced a nonpositive mass or spring constant.

    ``step`` is the 1-based recursion step that failed.
    """

    def __init__(self, message: str, step: int):
        super().__init__(message)
        self.step = step


class DivisionNearZero(TwoSpectraError):
    """Continued-fraction denominator vanished (pole of the ratio chain)."""


# ---------------------------------------------------------------------------
# file I/O


class ProblemFileError(TwoSpectraError):
    """A problem file failed to parse or validate; message carries context."""
