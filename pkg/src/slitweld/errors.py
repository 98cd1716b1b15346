"""Error taxonomy shared across the library and the CLI exit-code map."""


class SlitWeldError(Exception):
    """Base class for all library errors."""


class ValidationError(SlitWeldError):
    """Bad input: schema violations, out-of-domain arguments, degenerate data."""


class IntegrationError(SlitWeldError):
    """ODE integration could not complete (step underflow, step budget exhausted)."""


class HitSingularityError(IntegrationError):
    """A downward-flow trajectory ran into the driving singularity.

    Carries the time at which the trajectory got within the abort distance.
    """

    def __init__(self, t: float, message: str | None = None):
        self.t = t
        super().__init__(message or f"trajectory hit the driving singularity at t={t:.6g}")


class DiagnosticsError(IntegrationError):
    """A structural assumption failed (non-monotone hitting profile, step collapse)."""


class TraceError(IntegrationError):
    """Trace-tip extrapolation did not converge; carries the residual."""

    def __init__(self, residual: float, message: str | None = None):
        self.residual = residual
        super().__init__(message or f"trace extrapolation non-convergent, residual {residual:.3g}")


class AccuracyError(SlitWeldError):
    """Quadrature refinement levels disagree; carries both estimates."""

    def __init__(self, coarse: float, fine: float, message: str | None = None):
        self.coarse = coarse
        self.fine = fine
        super().__init__(
            message
            or f"quadrature levels disagree beyond tolerance: {coarse:.9g} vs {fine:.9g}"
        )


class ExtractionError(SlitWeldError):
    """Welding extraction failed (bracketing or bisection); names side and time."""
