"""Exception and warning types shared across the toolkit."""


class InvalidParameterError(ValueError):
    """A constructor or operation received an out-of-range parameter."""


class InvalidWeightError(ValueError):
    """A weight array violates positivity or the declared axioms."""


class IncompatibleOperandsError(ValueError):
    """Two operands live on different group models or have mismatched shapes."""


class NotDenseError(RuntimeError):
    """A sample set fails to be U-dense; carries one uncovered carrier index."""

    def __init__(self, uncovered_index: int, label: str = ""):
        self.uncovered_index = int(uncovered_index)
        msg = f"sample set is not U-dense: carrier point {uncovered_index} is uncovered"
        if label:
            msg += f" (coordinates {label})"
        super().__init__(msg)


class NotContractiveError(RuntimeError):
    """The operator is too far from the identity for the power series to apply."""


class NotAFrameError(RuntimeError):
    """Lower frame bound is zero; the system spans no dual."""


class NotRieszError(RuntimeError):
    """The Gramian is singular; no biorthogonal system exists."""


class NoCertificateError(RuntimeError):
    """An operation requiring a molecule envelope certificate got none."""


class TruncationError(ValueError):
    """The carrier is too small to contain the requested computation."""


class ResolutionError(RuntimeError):
    """A pass flag flipped when the quadrature step was halved."""


class ReducibilityWarning(UserWarning):
    """The admissibility constant is direction-dependent beyond tolerance."""


class CoverageWarning(UserWarning):
    """A relative position has no carrier representative; envelope bins are incomplete."""
